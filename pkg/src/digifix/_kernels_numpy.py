"""Vectorized numpy fallback for the kernels in ``_kernels_numba``.

Same contracts, same search order, so both backends return identical
results; domains are plain ``bool (n, n)`` matrices here.
"""

import numpy as np

AC = 1
UPATH = 2
PULL = 4


def all_pairs_bfs(indptr, indices, n):
    adj = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        adj[i, indices[indptr[i]:indptr[i + 1]]] = 1
    dist = np.full((n, n), -1, dtype=np.int64)
    count = np.zeros((n, n), dtype=np.int64)
    np.fill_diagonal(dist, 0)
    np.fill_diagonal(count, 1)
    frontier = np.eye(n, dtype=np.int64)
    level = 0
    while frontier.any():
        level += 1
        reach = frontier @ adj
        new = (reach > 0) & (dist < 0)
        dist[new] = level
        count[new] = np.minimum(reach[new], 2)
        frontier = np.where(new, count, 0)
    return dist, count


def propagate(dom, adj, nstar, ahead, mover, upath_ok, upath, flags):
    """In-place fixpoint of the enabled pruning rules; False on wipe-out.

    ``ahead[d]`` is the int matrix of pairs (q0, q) with q one step ahead
    of q0 along direction ``d``.
    """
    n = dom.shape[0]
    eye = np.eye(n, dtype=bool)
    adj_i = adj.astype(np.int64)
    nstar_i = nstar.astype(np.int64)
    while True:
        before = dom.copy()
        if flags & AC:
            img = (dom.astype(np.int64) @ nstar_i) > 0
            missing = adj_i @ (~img).astype(np.int64)
            dom &= missing == 0
            if not dom.any(axis=1).all():
                return False
        else:
            single = dom.sum(axis=1) == 1
            vals = dom.argmax(axis=1)
            both = adj & single[:, None] & single[None, :]
            if not nstar[vals[:, None], vals[None, :]][both].all():
                return False
        if flags & UPATH:
            fixed = dom[eye] & (dom.sum(axis=1) == 1)
            pairs = upath_ok & fixed[:, None] & fixed[None, :]
            forced = upath[pairs].any(axis=0) if pairs.any() else np.zeros(n, dtype=bool)
            if not dom[eye][forced].all():
                return False
            dom[forced] = eye[forced]
        if flags & PULL:
            for d in range(mover.shape[0]):
                stuck = ~(dom & mover[d]).any(axis=1)
                while True:
                    grown = stuck | ((stuck.astype(np.int64) @ ahead[d]) > 0)
                    if (grown == stuck).all():
                        break
                    stuck = grown
                dom[stuck] &= ~mover[d][stuck]
                if not dom.any(axis=1).all():
                    return False
        if (dom == before).all():
            return True


def search(dom0, adj, nstar, ahead, mover, upath_ok, upath, flags, budget, stop_after, out):
    n = dom0.shape[0]
    state = {"nodes": 1, "nsol": 0}
    dom = dom0.copy()
    if not propagate(dom, adj, nstar, ahead, mover, upath_ok, upath, flags):
        return 0, 0, 1

    class _Stop(Exception):
        pass

    def select(dm):
        sizes = dm.sum(axis=1)
        cand = np.where(sizes > 1, sizes, n + 1)
        v = int(cand.argmin())
        return v if cand[v] <= n else -1

    def rec(dm):
        v = select(dm)
        if v < 0:
            out[state["nsol"]] = dm.argmax(axis=1)
            state["nsol"] += 1
            if state["nsol"] >= stop_after:
                raise _Stop(2)
            return
        for y in np.flatnonzero(dm[v]):
            if state["nodes"] >= budget:
                raise _Stop(1)
            state["nodes"] += 1
            child = dm.copy()
            child[v] = False
            child[v, y] = True
            if propagate(child, adj, nstar, ahead, mover, upath_ok, upath, flags):
                rec(child)

    try:
        rec(dom)
    except _Stop as stop:
        return stop.args[0], state["nsol"], state["nodes"]
    return 0, state["nsol"], state["nodes"]


def naive_enumerate(fixed, edges, nstar_bool, budget, out):
    n = fixed.shape[0]
    free = np.flatnonzero(fixed < 0)
    total = n ** len(free)
    cap = out.shape[0]
    count = 0
    tested = 0
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        if tested + len(idx) > budget:
            idx = idx[: max(0, budget - tested)]
        tables = np.repeat(fixed[None, :], len(idx), axis=0)
        rem = idx.copy()
        for k in range(len(free) - 1, -1, -1):
            tables[:, free[k]] = rem % n
            rem //= n
        ok = np.ones(len(idx), dtype=bool)
        for a, b in edges:
            ok &= nstar_bool[tables[:, a], tables[:, b]]
        good = tables[ok]
        tested += len(idx)
        if count + len(good) > cap:
            take = cap - count
            out[count:cap] = good[:take]
            return 2, cap, tested
        out[count:count + len(good)] = good
        count += len(good)
        if tested >= budget and start + chunk < total:
            return 1, count, tested
    return 0, count, tested
