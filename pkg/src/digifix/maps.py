"""Self-maps of digital images: continuity, fixed points, displacement."""

from __future__ import annotations

import re
from typing import Iterable, Mapping

import numpy as np

from .core import UNREACHABLE, DigitalImage, ImageError


class SelfMap:
    """A total function X -> X stored as a dense table of point indices."""

    def __init__(self, image: DigitalImage, table):
        table = np.array(table, dtype=np.int64).reshape(-1)
        if table.shape[0] != len(image):
            raise ImageError(f"map table has {table.shape[0]} entries, image has {len(image)}")
        if table.size and (table.min() < 0 or table.max() >= len(image)):
            raise ImageError("map table contains an index outside the image")
        table.setflags(write=False)
        self.image = image
        self.table = table

    @classmethod
    def identity(cls, image: DigitalImage) -> "SelfMap":
        return cls(image, np.arange(len(image)))

    @classmethod
    def constant(cls, image: DigitalImage, value) -> "SelfMap":
        return cls(image, np.full(len(image), image.require(value)))

    @classmethod
    def from_dict(cls, image: DigitalImage, moves: Mapping) -> "SelfMap":
        """Build from {x: f(x)}; points not listed are fixed."""
        table = np.arange(len(image))
        for x, y in moves.items():
            table[image.require(x)] = image.require(y)
        return cls(image, table)

    def __call__(self, x):
        return self.image.points[self.table[self.image.require(x)]]

    def __eq__(self, other) -> bool:
        return (isinstance(other, SelfMap) and self.image == other.image
                and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        moved = {self.image.points[i]: self.image.points[j]
                 for i, j in enumerate(self.table) if i != j}
        return f"SelfMap({moved or 'id'})"

    def compose(self, other: "SelfMap") -> "SelfMap":
        """self ∘ other."""
        if other.image != self.image:
            raise ImageError("cannot compose maps on different images")
        return SelfMap(self.image, self.table[other.table])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(len(self.table))))

    def is_continuous(self) -> bool:
        """Edge-wise test: x ↔ y implies f(x) ⇋ f(y)."""
        adj = self.image.adjacency_matrix
        e = np.array(self.image.edges, dtype=np.int64).reshape(-1, 2)
        if not len(e):
            return True
        a, b = self.table[e[:, 0]], self.table[e[:, 1]]
        return bool(np.all((a == b) | adj[a, b]))

    def is_continuous_by_connectedness(self, max_subsets: int = 1 << 12) -> bool:
        """Definitional test: images of connected subsets are connected.

        Exhaustive over subsets, so only usable for tiny images.
        """
        n = len(self.image)
        if 1 << n > max_subsets:
            raise ImageError(f"#X={n} too large for the subset-enumeration test")
        pts = self.image.points
        for mask in range(1, 1 << n):
            sub = [pts[i] for i in range(n) if mask >> i & 1]
            if not self.image.subimage(sub).is_connected():
                continue
            img = {pts[self.table[self.image.index[p]]] for p in sub}
            if not self.image.subimage(img).is_connected():
                return False
        return True

    def fixed_points(self) -> set:
        return {p for i, p in enumerate(self.image.points) if self.table[i] == i}

    def fixes(self, A: Iterable) -> bool:
        return all(self(a) == tuple(a) for a in A)

    def is_approx_fixed(self, x) -> bool:
        i = self.image.require(x)
        j = self.table[i]
        return bool(i == j or self.image.adjacency_matrix[i, j])

    def displacements(self) -> np.ndarray:
        """d_κ(x, f(x)) for every x, in index order."""
        d = self.image.distance_matrix[np.arange(len(self.table)), self.table]
        if (d == UNREACHABLE).any():
            raise ImageError("displacement undefined: a point maps into another component")
        return d

    def max_displacement(self) -> int:
        if not self.image.is_connected():
            raise ImageError("max displacement requires a connected image")
        return int(self.displacements().max())

    def argmax_displacement(self) -> list:
        d = self.displacements()
        return [self.image.points[i] for i in np.flatnonzero(d == d.max())]


def max_displacement_of(f: SelfMap) -> int:
    return f.max_displacement()


def is_continuous(f: SelfMap) -> bool:
    return f.is_continuous()


def fixed_points(f: SelfMap) -> set:
    return f.fixed_points()


def is_approx_fixed(f: SelfMap, x) -> bool:
    return f.is_approx_fixed(x)


_ARROW = re.compile(r"^\s*([-+\d\s]+?)\s*->\s*([-+\d\s]+?)\s*$")


def parse_map(text: str, image: DigitalImage) -> SelfMap:
    """Parse lines ``x y -> x' y'``; unlisted points are fixed.

    Blank lines and lines starting with ``;`` are ignored.
    """
    moves = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith(";"):
            continue
        m = _ARROW.match(line)
        if not m:
            raise ImageError(f"line {lineno}: expected 'coords -> coords', got {line!r}")
        src = tuple(int(v) for v in m.group(1).split())
        dst = tuple(int(v) for v in m.group(2).split())
        if len(src) != image.dim or len(dst) != image.dim:
            raise ImageError(f"line {lineno}: expected {image.dim} coordinates per side")
        if src in moves:
            raise ImageError(f"line {lineno}: {src} mapped twice")
        moves[src] = dst
    return SelfMap.from_dict(image, moves)


def format_map(f: SelfMap) -> str:
    """Canonical text form: one line per moved point, in index order."""
    lines = []
    for i, j in enumerate(f.table):
        if i != j:
            src = " ".join(map(str, f.image.points[i]))
            dst = " ".join(map(str, f.image.points[j]))
            lines.append(f"{src} -> {dst}")
    return "\n".join(lines) + ("\n" if lines else "")
