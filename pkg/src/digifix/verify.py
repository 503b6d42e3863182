"""Constraint search over continuous self-maps that fix a set pointwise.

Every question here reduces to one primitive: is there a continuous
f: X -> X with f|_A = id_A and f(x) in some target set?  Domains start as
all of X (or {a} for a in A), are shrunk by :func:`propagate`, and the
remaining choices are explored by the backtracking kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .core import DigitalImage, ImageError
from .maps import SelfMap

DEFAULT_BUDGET = int(os.environ.get("DIGIFIX_BUDGET", 10**7))

VERIFIED = "verified"
REFUTED = "refuted"
UNKNOWN = "unknown"


class EnumerationLimit(RuntimeError):
    """More fixing maps exist than the caller's limit allows."""


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: SelfMap | None = None
    nodes_explored: int = 0
    budget_exhausted: bool = False
    details: dict = field(default_factory=dict, compare=False)

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED


@dataclass(frozen=True)
class FixingProblem:
    """The CSP "continuous f with f|_A = id_A" plus its current domains."""

    image: DigitalImage
    fixed: frozenset
    domains: np.ndarray
    arc_consistency: bool = True
    pulling_lemma: bool = True
    unique_path: bool = True
    feasible: bool = True

    @classmethod
    def create(cls, image: DigitalImage, A: Iterable = (), *, arc_consistency=True,
               pulling_lemma=None, unique_path=True) -> "FixingProblem":
        A = frozenset(tuple(a) for a in A)
        for a in A:
            image.require(a)
        if pulling_lemma is None:
            # the lemma holds for every c_u on Z^n, which is all DigitalImage supports
            pulling_lemma = True
        n = len(image)
        dom = np.ones((n, n), dtype=bool)
        for a in A:
            i = image.index[a]
            dom[i] = False
            dom[i, i] = True
        dom.setflags(write=False)
        return cls(image, A, dom, arc_consistency, pulling_lemma, unique_path)

    @property
    def flags(self) -> int:
        return ((kernels.AC if self.arc_consistency else 0)
                | (kernels.UPATH if self.unique_path else 0)
                | (kernels.PULL if self.pulling_lemma else 0))

    @property
    def tables(self) -> kernels.SearchTables:
        return kernels.build_tables(self.image)

    def domain(self, x) -> set:
        i = self.image.require(x)
        return {self.image.points[j] for j in np.flatnonzero(self.domains[i])}

    def restrict(self, x, targets: Iterable) -> "FixingProblem":
        """Copy with f(x) limited to ``targets``."""
        i = self.image.require(x)
        keep = np.zeros(len(self.image), dtype=bool)
        for y in targets:
            keep[self.image.require(y)] = True
        dom = self.domains.copy()
        dom[i] &= keep
        dom.setflags(write=False)
        return replace(self, domains=dom, feasible=self.feasible and bool(dom[i].any()))

    def is_solved(self) -> bool:
        return self.feasible and bool((self.domains.sum(axis=1) == 1).all())


def propagate(P: FixingProblem) -> FixingProblem:
    """Shrink domains by arc consistency, unique shortest paths and pulling.

    Sound: no continuous map fixing P.fixed is ever excluded.  Infeasibility
    shows up as ``feasible=False`` (some domain emptied).
    """
    if not P.feasible:
        return P
    dom, ok = kernels.propagate(P.tables, P.domains, P.flags)
    dom.setflags(write=False)
    return replace(P, domains=dom, feasible=ok)


def _solve(P: FixingProblem, budget: int, stop_after: int = 1):
    if not P.feasible:
        return kernels.COMPLETE, np.empty((0, len(P.image)), np.int64), 0
    return kernels.search(P.tables, P.domains, P.flags, budget, stop_after)


def _check_subset(X: DigitalImage, A) -> frozenset:
    A = frozenset(tuple(a) for a in A)
    missing = [a for a in A if a not in X]
    if missing:
        raise ImageError(f"A is not a subset of X: {sorted(missing)[:3]} not in X")
    return A


def _single_moves(P: FixingProblem) -> list[tuple[int, int]]:
    """(x, y) pairs where moving only x to y is continuous and fixes A."""
    t = P.tables
    out = []
    for x in range(t.n):
        if not P.domains[x].any():
            continue
        nb = t.indices[t.indptr[x]:t.indptr[x + 1]]
        ok = P.domains[x].copy()
        ok[x] = False
        if len(nb):
            ok &= t.nstar[nb].all(axis=0)
        out.extend((x, int(y)) for y in np.flatnonzero(ok))
    return out


def find_fixing_map(X: DigitalImage, A: Iterable, x, targets: Iterable,
                    budget: int = DEFAULT_BUDGET) -> Verdict:
    """Is there a continuous f fixing A with f(x) in ``targets``?

    ``verified`` means such a map exists (it is the witness); ``refuted``
    means none does.
    """
    A = _check_subset(X, A)
    P = propagate(FixingProblem.create(X, A).restrict(x, targets))
    status, sols, nodes = _solve(P, budget)
    if len(sols):
        return Verdict(VERIFIED, SelfMap(X, sols[0]), nodes)
    if status == kernels.BUDGET:
        return Verdict(UNKNOWN, None, nodes, True)
    return Verdict(REFUTED, None, nodes)


def _displacement_search(X, P0, level, budget, exact=False):
    """Look for a fixing map moving some point by >= level (== level if exact).

    Returns (map or None, nodes, exhausted).
    """
    dist = X.distance_matrix
    nodes = 0
    for x in range(len(X)):
        targets = (dist[x] == level) if exact else (dist[x] >= level)
        targets &= P0.domains[x]
        if not targets.any():
            continue
        dom = P0.domains.copy()
        dom[x] = targets
        status, sols, nd = kernels.search(P0.tables, dom, P0.flags, budget - nodes, 1)
        nodes += nd
        if len(sols):
            return SelfMap(X, sols[0]), nodes, False
        if status == kernels.BUDGET or nodes >= budget:
            return None, nodes, True
    return None, nodes, False


def _require_cold_inputs(X, A, allow_empty=False):
    if not X.is_connected():
        raise ImageError("cold sets are defined on connected images only")
    A = _check_subset(X, A)
    if not A and not allow_empty:
        raise ImageError("A must be nonempty")
    return A


def cold_defect(X: DigitalImage, A: Iterable, budget: int = DEFAULT_BUDGET) -> tuple[int, Verdict]:
    """Least s such that A is s-cold, with a map attaining it.

    Levels are tried from diam(X) downward; the first level with a fixing
    map is s*.  On budget exhaustion the verdict is ``unknown`` and the
    returned integer is the best lower bound found; ``details['bounds']``
    always carries (lower, upper).
    """
    A = _require_cold_inputs(X, A)
    P0 = propagate(FixingProblem.create(X, A))
    dist = X.distance_matrix
    best = SelfMap.identity(X)
    lower = 0
    for x, y in _single_moves(P0):
        if dist[x, y] > lower:
            lower = int(dist[x, y])
            table = np.arange(len(X))
            table[x] = y
            best = SelfMap(X, table)
    reach = np.where(P0.domains, dist, 0)
    upper = int(reach.max()) if reach.size else 0
    nodes = 0
    for level in range(upper, lower, -1):
        f, nd, exhausted = _displacement_search(X, P0, level, budget - nodes)
        nodes += nd
        if f is not None:
            return level, Verdict(VERIFIED, f, nodes, details={"bounds": (level, level)})
        if exhausted:
            return lower, Verdict(UNKNOWN, best, nodes, True, details={"bounds": (lower, level)})
        upper = level - 1
    return lower, Verdict(VERIFIED, best, nodes, details={"bounds": (lower, lower)})


def is_freezing(X: DigitalImage, A: Iterable, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Verified iff the identity is the only continuous map fixing A."""
    A = _check_subset(X, A)
    P0 = propagate(FixingProblem.create(X, A))
    if P0.is_solved():
        return Verdict(VERIFIED, None, 1)
    moves = _single_moves(P0)
    if moves:
        x, y = moves[0]
        table = np.arange(len(X))
        table[x] = y
        return Verdict(REFUTED, SelfMap(X, table), 1)
    nodes = 0
    for x in range(len(X)):
        targets = P0.domains[x].copy()
        targets[x] = False
        if not targets.any():
            continue
        dom = P0.domains.copy()
        dom[x] = targets
        status, sols, nd = kernels.search(P0.tables, dom, P0.flags, budget - nodes, 1)
        nodes += nd
        if len(sols):
            return Verdict(REFUTED, SelfMap(X, sols[0]), nodes)
        if status == kernels.BUDGET or nodes >= budget:
            return Verdict(UNKNOWN, None, nodes, True)
    return Verdict(VERIFIED, None, nodes)


def is_s_cold(X: DigitalImage, A: Iterable, s: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Verified iff every continuous map fixing A moves points by at most s."""
    if s < 0:
        raise ImageError("s must be nonnegative")
    A = _require_cold_inputs(X, A, allow_empty=True)
    P0 = propagate(FixingProblem.create(X, A))
    dist = X.distance_matrix
    for x, y in _single_moves(P0):
        if dist[x, y] > s:
            table = np.arange(len(X))
            table[x] = y
            return Verdict(REFUTED, SelfMap(X, table), 1)
    f, nodes, exhausted = _displacement_search(X, P0, s + 1, budget)
    if f is not None:
        return Verdict(REFUTED, f, nodes)
    if exhausted:
        return Verdict(UNKNOWN, None, nodes, True)
    return Verdict(VERIFIED, None, nodes)


def _property_check(X, A, prop, budget):
    if prop == "freezing":
        return is_freezing(X, A, budget)
    kind, _, s = prop.partition(":")
    if kind in ("cold", "s-cold"):
        return is_s_cold(X, A, int(s or 1), budget)
    raise ValueError(f"unknown property {prop!r}; use 'freezing' or 'cold:<s>'")


def is_minimal(X: DigitalImage, A: Iterable, prop: str = "freezing",
               budget: int = DEFAULT_BUDGET) -> Verdict:
    """Is A minimal for ``prop`` ('freezing' or 'cold:<s>')?

    The property is monotone under supersets, so it suffices to delete one
    point at a time.  On ``verified``, ``details['deletions']`` maps each
    a in A to the witness that A minus {a} fails; on ``refuted``,
    ``details['removable']`` names a point whose deletion keeps the property.
    """
    A = _check_subset(X, A)
    base = _property_check(X, A, prop, budget)
    nodes = base.nodes_explored
    if base.status == UNKNOWN:
        return Verdict(UNKNOWN, None, nodes, True)
    if base.status != VERIFIED:
        raise ImageError(f"A does not satisfy {prop}; minimality is undefined")
    deletions = {}
    for a in sorted(A):
        v = _property_check(X, A - {a}, prop, max(1, budget - nodes))
        nodes += v.nodes_explored
        if v.verified:
            return Verdict(REFUTED, None, nodes, details={"removable": a})
        if v.status == UNKNOWN:
            return Verdict(UNKNOWN, None, nodes, True, details={"undecided": a})
        deletions[a] = v.witness
    return Verdict(VERIFIED, None, nodes, details={"deletions": deletions})


def enumerate_fixing_maps(X: DigitalImage, A: Iterable, limit: int = 100_000,
                          budget: int = DEFAULT_BUDGET, *, arc_consistency=True,
                          pulling_lemma=True, unique_path=True) -> Iterator[SelfMap]:
    """Every continuous f with f|_A = id_A, once each, in search order.

    Raises :class:`EnumerationLimit` if there are more than ``limit``.
    """
    tables = fixing_tables(X, A, limit, budget, arc_consistency=arc_consistency,
                           pulling_lemma=pulling_lemma, unique_path=unique_path)
    for row in tables:
        yield SelfMap(X, row)


def fixing_tables(X: DigitalImage, A: Iterable, limit: int = 100_000,
                  budget: int = DEFAULT_BUDGET, **rules) -> np.ndarray:
    """Array form of :func:`enumerate_fixing_maps`: one map table per row."""
    A = _check_subset(X, A)
    P = propagate(FixingProblem.create(X, A, **rules))
    status, sols, _ = _solve(P, budget, limit + 1)
    if status == kernels.STOPPED:
        raise EnumerationLimit(f"more than {limit} fixing maps")
    if status == kernels.BUDGET:
        raise EnumerationLimit(f"node budget {budget} exhausted")
    return sols


def naive_fixing_tables(X: DigitalImage, A: Iterable, limit: int = 1_000_000,
                        budget: int = 50_000_000) -> np.ndarray:
    """Generate-and-test oracle: all n^(#X - #A) tables, edge rule checked."""
    A = _check_subset(X, A)
    fixed = np.full(len(X), -1, dtype=np.int64)
    for a in A:
        fixed[X.index[a]] = X.index[a]
    status, tables, _ = kernels.naive_enumerate(kernels.build_tables(X), fixed, budget, limit)
    if status != kernels.COMPLETE:
        raise EnumerationLimit("naive enumeration exceeded its limit or budget")
    return tables
