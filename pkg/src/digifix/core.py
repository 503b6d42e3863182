"""Lattice points, c_u adjacencies and finite digital images.

A :class:`DigitalImage` is a finite subset of Z^n together with one of the
c_u adjacencies.  Points are plain tuples of ints; the image keeps them in
lexicographic order so that every derived table (indices, adjacency lists,
distance matrices) is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

Point = tuple  # tuple[int, ...]

UNREACHABLE = -1


class ImageError(ValueError):
    """Raised for malformed images or points that are not in an image."""


def projection(p: Sequence[int], i: int) -> int:
    """Coordinate projection p_i, 1-indexed."""
    if not 1 <= i <= len(p):
        raise ImageError(f"projection index {i} out of range for {p}")
    return p[i - 1]


@dataclass(frozen=True)
class Adjacency:
    """The c_u adjacency on Z^n."""

    n: int
    u: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.u <= self.n:
            raise ImageError(f"invalid adjacency c_{self.u} in Z^{self.n}")

    @classmethod
    def parse(cls, text: str, n: int = 2) -> "Adjacency":
        text = text.strip().lower()
        if not text.startswith("c") or not text[1:].isdigit():
            raise ImageError(f"unknown adjacency {text!r}")
        return cls(n, int(text[1:]))

    @property
    def name(self) -> str:
        return f"c{self.u}"

    def offsets(self) -> list[tuple[int, ...]]:
        """All nonzero displacement vectors of c_u-adjacent pairs."""
        out = []
        for d in product((-1, 0, 1), repeat=self.n):
            k = sum(1 for c in d if c)
            if 0 < k <= self.u:
                out.append(d)
        return out

    def adjacent(self, p: Sequence[int], q: Sequence[int]) -> bool:
        return adjacent(self, p, q)


def adjacent(a: Adjacency, p: Sequence[int], q: Sequence[int]) -> bool:
    """True iff p and q are c_u-adjacent (distinct, <= u coords differ by 1)."""
    if len(p) != a.n or len(q) != a.n:
        raise ImageError(f"dimension mismatch: {p}, {q} for Z^{a.n}")
    k = 0
    for x, y in zip(p, q):
        d = abs(x - y)
        if d > 1:
            return False
        k += d
    return 0 < k <= a.u


def lattice_boundary(points: Iterable[Sequence[int]], u: int) -> set:
    """Points of X with a c_u-neighbor in Z^n outside X (Bd for general n)."""
    pts = {tuple(p) for p in points}
    if not pts:
        return set()
    n = len(next(iter(pts)))
    offs = Adjacency(n, u).offsets()
    out = set()
    for p in pts:
        for d in offs:
            if tuple(a + b for a, b in zip(p, d)) not in pts:
                out.add(p)
                break
    return out


def box(*ranges: tuple[int, int]) -> list[Point]:
    """Points of a product of integer intervals, given as (lo, hi) pairs."""
    return [tuple(p) for p in product(*(range(lo, hi + 1) for lo, hi in ranges))]


class DigitalImage:
    """A finite digital image (X, c_u).

    Immutable after construction; derived tables such as the all-pairs
    distance matrix are computed lazily and cached.
    """

    def __init__(self, points: Iterable[Sequence[int]], adjacency: Adjacency | str | int = 1):
        pts = sorted({tuple(int(c) for c in p) for p in points})
        if not pts:
            raise ImageError("a digital image must be nonempty")
        n = len(pts[0])
        if n < 1 or any(len(p) != n for p in pts):
            raise ImageError("all points must share one dimension n >= 1")
        if isinstance(adjacency, str):
            adjacency = Adjacency.parse(adjacency, n)
        elif isinstance(adjacency, int):
            adjacency = Adjacency(n, adjacency)
        if adjacency.n != n:
            raise ImageError(f"adjacency is for Z^{adjacency.n}, points are in Z^{n}")
        self.adjacency = adjacency
        self.points: tuple[Point, ...] = tuple(pts)
        self.index: dict[Point, int] = {p: i for i, p in enumerate(pts)}

    # -- basic container protocol --------------------------------------
    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.index

    def __eq__(self, other) -> bool:
        return (isinstance(other, DigitalImage) and self.points == other.points
                and self.adjacency == other.adjacency)

    def __hash__(self) -> int:
        return hash((self.points, self.adjacency))

    def __repr__(self) -> str:
        return f"DigitalImage(#X={len(self)}, {self.adjacency.name}, Z^{self.dim})"

    @property
    def dim(self) -> int:
        return self.adjacency.n

    @property
    def pointset(self) -> frozenset:
        return frozenset(self.points)

    def with_adjacency(self, adjacency: Adjacency | str | int) -> "DigitalImage":
        return DigitalImage(self.points, adjacency)

    def require(self, p) -> int:
        p = tuple(p)
        try:
            return self.index[p]
        except KeyError:
            raise ImageError(f"{p} is not a point of the image") from None

    # -- adjacency tables ---------------------------------------------
    @cached_property
    def neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        offs = self.adjacency.offsets()
        out = []
        for p in self.points:
            nb = []
            for d in offs:
                j = self.index.get(tuple(a + b for a, b in zip(p, d)))
                if j is not None:
                    nb.append(j)
            out.append(tuple(sorted(nb)))
        return tuple(out)

    @cached_property
    def coords(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self), self.dim)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        m = np.zeros((len(self), len(self)), dtype=bool)
        for i, nb in enumerate(self.neighbor_lists):
            m[i, list(nb)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(len(self) + 1, dtype=np.int64)
        for i, nb in enumerate(self.neighbor_lists):
            indptr[i + 1] = indptr[i] + len(nb)
        indices = np.array([j for nb in self.neighbor_lists for j in nb], dtype=np.int64)
        return indptr, indices

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.neighbor_lists) for j in nb if i < j]

    def neighborhood(self, x, closed: bool = False) -> set:
        """N(X, x, κ), or N*(X, x, κ) = N ∪ {x} when ``closed``."""
        i = self.require(x)
        out = {self.points[j] for j in self.neighbor_lists[i]}
        if closed:
            out.add(self.points[i])
        return out

    def is_adjacent(self, p, q) -> bool:
        return adjacent(self.adjacency, p, q)

    # -- connectivity and metric --------------------------------------
    @cached_property
    def _component_labels(self) -> tuple[int, ...]:
        labels = [-1] * len(self)
        c = 0
        for s in range(len(self)):
            if labels[s] >= 0:
                continue
            labels[s] = c
            queue = deque([s])
            while queue:
                i = queue.popleft()
                for j in self.neighbor_lists[i]:
                    if labels[j] < 0:
                        labels[j] = c
                        queue.append(j)
            c += 1
        return tuple(labels)

    def components(self) -> list[frozenset]:
        """κ-components, ordered by their least point."""
        groups: dict[int, list] = {}
        for p, lab in zip(self.points, self._component_labels):
            groups.setdefault(lab, []).append(p)
        return [frozenset(groups[k]) for k in sorted(groups)]

    def is_connected(self) -> bool:
        return max(self._component_labels) == 0

    @cached_property
    def _paths(self) -> tuple[np.ndarray, np.ndarray]:
        from . import kernels

        indptr, indices = self.csr
        dist, count = kernels.all_pairs_bfs(indptr, indices, len(self))
        dist.setflags(write=False)
        count.setflags(write=False)
        return dist, count

    @property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs path-length distances; UNREACHABLE (-1) across components."""
        return self._paths[0]

    @property
    def path_count_matrix(self) -> np.ndarray:
        """Number of shortest paths between each pair, capped at 2."""
        return self._paths[1]

    def distance(self, x, y) -> int:
        """d_κ(x, y), or UNREACHABLE when x and y lie in different components."""
        return int(self.distance_matrix[self.require(x), self.require(y)])

    def diameter(self) -> int:
        if not self.is_connected():
            raise ImageError("diameter is only defined for connected images")
        return int(self.distance_matrix.max())

    def shortest_path_count(self, x, y) -> int:
        """Shortest-path multiplicity, saturated at 2 (so 2 means 'two or more')."""
        i, j = self.require(x), self.require(y)
        if self.distance_matrix[i, j] == UNREACHABLE:
            raise ImageError(f"{x} and {y} lie in different components")
        return int(self.path_count_matrix[i, j])

    def unique_shortest_path(self, x, y) -> list | None:
        """The unique shortest κ-path from x to y, or None if there are several."""
        i, j = self.require(x), self.require(y)
        dist = self.distance_matrix
        if dist[i, j] == UNREACHABLE:
            raise ImageError(f"{x} and {y} lie in different components")
        if self.path_count_matrix[i, j] != 1:
            return None
        path = [i]
        while path[-1] != j:
            cur = path[-1]
            nxt = [k for k in self.neighbor_lists[cur]
                   if dist[i, k] == dist[i, cur] + 1 and dist[i, k] + dist[k, j] == dist[i, j]]
            path.append(nxt[0])
        return [self.points[k] for k in path]

    def subimage(self, points: Iterable) -> "DigitalImage":
        return DigitalImage(points, self.adjacency)
