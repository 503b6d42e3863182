"""Compiled kernels: BFS path tables, domain propagation and backtracking.

Domains are bitsets: ``dom[x, w]`` holds bits ``64*w .. 64*w+63`` of the
candidate set for f(x).  All unsigned arithmetic uses explicit uint64
constants; mixing signed and unsigned ints makes numba fall back to floats.
"""

import numpy as np
from numba import njit

AC = 1
UPATH = 2
PULL = 4

ONE = np.uint64(1)
ZERO = np.uint64(0)


@njit(cache=True)
def _has(row, y):
    return (row[y >> 6] >> np.uint64(y & 63)) & ONE != ZERO


@njit(cache=True)
def _set_single(row, y):
    for w in range(row.shape[0]):
        row[w] = ZERO
    row[y >> 6] = ONE << np.uint64(y & 63)


@njit(cache=True)
def _popcount(row):
    c = 0
    for w in range(row.shape[0]):
        x = row[w]
        while x != ZERO:
            x &= x - ONE
            c += 1
    return c


@njit(cache=True)
def _first_at_or_after(row, start, n):
    for y in range(start, n):
        if _has(row, y):
            return y
    return -1


@njit(cache=True)
def pack(m):
    """bool (r, n) -> uint64 (r, W) bitsets along the last axis."""
    n = m.shape[1]
    W = (n + 63) // 64
    flat = m
    out = np.zeros((flat.shape[0], W), dtype=np.uint64)
    for r in range(flat.shape[0]):
        for y in range(n):
            if flat[r, y]:
                out[r, y >> 6] |= ONE << np.uint64(y & 63)
    return out


@njit(cache=True)
def unpack(b, n):
    out = np.zeros((b.shape[0], n), dtype=np.bool_)
    for r in range(b.shape[0]):
        for y in range(n):
            out[r, y] = _has(b[r], y)
    return out


@njit(cache=True)
def all_pairs_bfs(indptr, indices, n):
    dist = np.full((n, n), -1, dtype=np.int64)
    count = np.zeros((n, n), dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        count[s, s] = 1
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            i = queue[head]
            head += 1
            for k in range(indptr[i], indptr[i + 1]):
                j = indices[k]
                if dist[s, j] < 0:
                    dist[s, j] = dist[s, i] + 1
                    count[s, j] = count[s, i]
                    queue[tail] = j
                    tail += 1
                elif dist[s, j] == dist[s, i] + 1:
                    count[s, j] = min(2, count[s, j] + count[s, i])
    return dist, count


@njit(cache=True)
def propagate(dom, indptr, indices, nstar, coords, mover, upath_ok, upath, flags):
    """Shrink ``dom`` in place to the fixpoint of the enabled rules.

    Returns False as soon as some domain becomes empty.
    """
    n, W = dom.shape
    dim = coords.shape[1]
    img = np.empty((n, W), dtype=np.uint64)
    fixed = np.empty(n, dtype=np.int64)
    acc = np.empty(W, dtype=np.uint64)
    stuck = np.empty(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    while True:
        changed = False
        if flags & AC:
            for z in range(n):
                for w in range(W):
                    img[z, w] = ZERO
                for y in range(n):
                    if _has(dom[z], y):
                        for w in range(W):
                            img[z, w] |= nstar[y, w]
            for x in range(n):
                for k in range(indptr[x], indptr[x + 1]):
                    z = indices[k]
                    nonempty = False
                    for w in range(W):
                        new = dom[x, w] & img[z, w]
                        if new != dom[x, w]:
                            dom[x, w] = new
                            changed = True
                        if new != ZERO:
                            nonempty = True
                    if not nonempty:
                        return False
        else:
            # forward check only: assigned neighbors must map to ⇋-related points
            for x in range(n):
                if _popcount(dom[x]) != 1:
                    continue
                a = _first_at_or_after(dom[x], 0, n)
                for k in range(indptr[x], indptr[x + 1]):
                    z = indices[k]
                    if z > x and _popcount(dom[z]) == 1:
                        b = _first_at_or_after(dom[z], 0, n)
                        if not _has(nstar[a], b):
                            return False
        if flags & UPATH:
            cnt = 0
            for x in range(n):
                if _has(dom[x], x) and _popcount(dom[x]) == 1:
                    fixed[cnt] = x
                    cnt += 1
            for ia in range(cnt):
                a = fixed[ia]
                for w in range(W):
                    acc[w] = ZERO
                for ib in range(ia + 1, cnt):
                    b = fixed[ib]
                    if upath_ok[a, b]:
                        for w in range(W):
                            acc[w] |= upath[a, b, w]
                for z in range(n):
                    if _has(acc, z):
                        if not _has(dom[z], z):
                            return False
                        if _popcount(dom[z]) != 1:
                            _set_single(dom[z], z)
                            changed = True
        if flags & PULL:
            for d in range(2 * dim):
                axis = d // 2
                sgn = 1 - 2 * (d % 2)
                tail = 0
                for x in range(n):
                    moves = False
                    for w in range(W):
                        if dom[x, w] & mover[d, x, w] != ZERO:
                            moves = True
                    stuck[x] = not moves
                    if not moves:
                        queue[tail] = x
                        tail += 1
                head = 0
                while head < tail:
                    q0 = queue[head]
                    head += 1
                    for k in range(indptr[q0], indptr[q0 + 1]):
                        q = indices[k]
                        if not stuck[q] and coords[q, axis] - coords[q0, axis] == sgn:
                            stuck[q] = True
                            queue[tail] = q
                            tail += 1
                for x in range(n):
                    if stuck[x]:
                        nonempty = False
                        for w in range(W):
                            new = dom[x, w] & ~mover[d, x, w]
                            if new != dom[x, w]:
                                dom[x, w] = new
                                changed = True
                            if new != ZERO:
                                nonempty = True
                        if not nonempty:
                            return False
        if not changed:
            return True


@njit(cache=True)
def _select(dom, n):
    best = -1
    best_size = n + 1
    for x in range(n):
        c = _popcount(dom[x])
        if 1 < c < best_size:
            best = x
            best_size = c
    return best


@njit(cache=True)
def search(dom0, indptr, indices, nstar, coords, mover, upath_ok, upath, flags,
           budget, stop_after, out):
    """Depth-first search over propagated domains.

    First-fail variable order (smallest domain, lowest index), ascending
    values.  Solutions are written to ``out`` (capacity ``stop_after``).
    Returns (status, solutions_found, nodes): status 0 = search complete,
    1 = node budget exhausted, 2 = stopped after ``stop_after`` solutions.
    """
    n, W = dom0.shape
    stack = np.empty((n + 1, n, W), dtype=np.uint64)
    var = np.empty(n + 1, dtype=np.int64)
    pos = np.empty(n + 1, dtype=np.int64)
    stack[0] = dom0
    nodes = 1
    nsol = 0
    if not propagate(stack[0], indptr, indices, nstar, coords, mover, upath_ok, upath, flags):
        return 0, nsol, nodes
    d = 0
    var[0] = _select(stack[0], n)
    pos[0] = -1
    while d >= 0:
        v = var[d]
        if v < 0:
            for x in range(n):
                out[nsol, x] = _first_at_or_after(stack[d, x], 0, n)
            nsol += 1
            if nsol >= stop_after:
                return 2, nsol, nodes
            d -= 1
            continue
        y = _first_at_or_after(stack[d, v], pos[d] + 1, n)
        if y < 0:
            d -= 1
            continue
        pos[d] = y
        if nodes >= budget:
            return 1, nsol, nodes
        nodes += 1
        stack[d + 1] = stack[d]
        _set_single(stack[d + 1, v], y)
        if propagate(stack[d + 1], indptr, indices, nstar, coords, mover, upath_ok, upath, flags):
            d += 1
            var[d] = _select(stack[d], n)
            pos[d] = -1
    return 0, nsol, nodes


@njit(cache=True)
def naive_enumerate(fixed, edges, nstar_bool, budget, out):
    """Generate-and-test: every table agreeing with ``fixed`` (-1 = free).

    Returns (status, count, tested): status 0 = complete, 1 = the test
    budget ran out, 2 = more solutions than ``out`` can hold.
    """
    n = fixed.shape[0]
    free = np.empty(n, dtype=np.int64)
    nfree = 0
    t = fixed.copy()
    for x in range(n):
        if fixed[x] < 0:
            free[nfree] = x
            nfree += 1
            t[x] = 0
    cap = out.shape[0]
    count = 0
    tested = 0
    while True:
        if tested >= budget:
            return 1, count, tested
        tested += 1
        ok = True
        for e in range(edges.shape[0]):
            if not nstar_bool[t[edges[e, 0]], t[edges[e, 1]]]:
                ok = False
                break
        if ok:
            if count >= cap:
                return 2, count, tested
            out[count] = t
            count += 1
        k = nfree - 1
        while k >= 0:
            x = free[k]
            t[x] += 1
            if t[x] < n:
                break
            t[x] = 0
            k -= 1
        if k < 0:
            return 0, count, tested
