"""Backend-neutral entry points for the hot loops.

Everything above this module works with ``bool (n, n)`` domain matrices and
``int64`` map tables; the numba backend packs them into bitsets internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._jit import BACKEND

if BACKEND == "numba":
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl

AC = 1
UPATH = 2
PULL = 4
ALL_RULES = AC | UPATH | PULL

COMPLETE = 0
BUDGET = 1
STOPPED = 2


def all_pairs_bfs(indptr, indices, n):
    """Distances (-1 = unreachable) and shortest-path counts capped at 2."""
    return _impl.all_pairs_bfs(np.asarray(indptr, np.int64), np.asarray(indices, np.int64), int(n))


@dataclass(frozen=True)
class SearchTables:
    """Static per-image data shared by propagation and search."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    adj: np.ndarray        # bool (n, n)
    nstar: np.ndarray      # bool (n, n): adjacent or equal
    coords: np.ndarray     # int64 (n, dim)
    mover: np.ndarray      # bool (2*dim, n, n): y is strictly ahead of x along direction d
    ahead: np.ndarray      # int64 (2*dim, n, n): q one adjacency step ahead of q0 along d
    upath_ok: np.ndarray   # bool (n, n): unique shortest path between a and b
    upath: np.ndarray      # bool (n, n, n): z lies on that path
    edges: np.ndarray      # int64 (E, 2), i < j
    packed: tuple | None   # numba bitset versions of nstar, mover, upath


def build_tables(image) -> SearchTables:
    return _build_tables(image)


@lru_cache(maxsize=64)
def _build_tables(image) -> SearchTables:
    n = len(image)
    dim = image.dim
    indptr, indices = image.csr
    adj = np.array(image.adjacency_matrix)
    nstar = adj | np.eye(n, dtype=bool)
    coords = image.coords
    mover = np.zeros((2 * dim, n, n), dtype=bool)
    ahead = np.zeros((2 * dim, n, n), dtype=np.int64)
    for d in range(2 * dim):
        axis, sgn = d // 2, 1 - 2 * (d % 2)
        diff = coords[None, :, axis] - coords[:, None, axis]
        mover[d] = sgn * diff > 0
        ahead[d] = (adj & (diff == sgn)).astype(np.int64)
    dist = image.distance_matrix
    count = image.path_count_matrix
    upath_ok = (count == 1) & (dist > 0)
    # on[a, b, z]: d(a, z) + d(z, b) == d(a, b)
    on = (dist[:, None, :] + dist.T[None, :, :]) == dist[:, :, None]
    on &= (dist[:, None, :] >= 0) & (dist.T[None, :, :] >= 0)
    upath = on & upath_ok[:, :, None]
    packed = None
    if BACKEND == "numba":
        W = (n + 63) // 64
        packed = (
            _impl.pack(nstar),
            _impl.pack(np.ascontiguousarray(mover.reshape(-1, n))).reshape(2 * dim, n, W),
            _impl.pack(np.ascontiguousarray(upath.reshape(-1, n))).reshape(n, n, W),
        )
    edges = np.array(image.edges, dtype=np.int64).reshape(-1, 2)
    return SearchTables(n, indptr, indices, adj, nstar, coords, mover, ahead,
                        upath_ok, upath, edges, packed)


def propagate(t: SearchTables, dom: np.ndarray, flags: int = ALL_RULES) -> tuple[np.ndarray, bool]:
    """Return the propagated copy of ``dom`` and whether it is still feasible."""
    dom = np.array(dom, dtype=bool)
    if BACKEND == "numba":
        nstar_b, mover_b, upath_b = t.packed
        bits = _impl.pack(dom)
        ok = _impl.propagate(bits, t.indptr, t.indices, nstar_b, t.coords, mover_b,
                             t.upath_ok, upath_b, flags)
        return _impl.unpack(bits, t.n), bool(ok)
    ok = _impl.propagate(dom, t.adj, t.nstar, t.ahead, t.mover, t.upath_ok, t.upath, flags)
    return dom, bool(ok)


def search(t: SearchTables, dom: np.ndarray, flags: int, budget: int, stop_after: int):
    """Run the backtracking search; returns (status, solutions, nodes)."""
    out = np.empty((stop_after, t.n), dtype=np.int64)
    dom = np.array(dom, dtype=bool)
    if BACKEND == "numba":
        nstar_b, mover_b, upath_b = t.packed
        status, nsol, nodes = _impl.search(_impl.pack(dom), t.indptr, t.indices, nstar_b,
                                           t.coords, mover_b, t.upath_ok, upath_b, flags,
                                           int(budget), int(stop_after), out)
    else:
        status, nsol, nodes = _impl.search(dom, t.adj, t.nstar, t.ahead, t.mover, t.upath_ok,
                                           t.upath, flags, int(budget), int(stop_after), out)
    return int(status), out[:nsol].copy(), int(nodes)


def naive_enumerate(t: SearchTables, fixed: np.ndarray, budget: int, capacity: int):
    """Generate-and-test over all tables with ``fixed`` pinned; (status, tables, tested)."""
    out = np.empty((capacity, t.n), dtype=np.int64)
    status, count, tested = _impl.naive_enumerate(np.asarray(fixed, np.int64), t.edges,
                                                  t.nstar, int(budget), out)
    return int(status), out[:count].copy(), int(tested)
