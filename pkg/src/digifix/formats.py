"""Text formats for images with an optional marked subset A.

Grid format (planar only)::

    adjacency: c2
    origin: -1 -1
    a#a
    ###
    a#a

Rows are listed top to bottom, so the last row is y = origin_y and the
picture reads like a plotted figure.  ``.`` is background, ``#`` a point
of X, ``a`` a point of X that is also in A.  ``origin`` defaults to 0 0.

List format (any dimension)::

    adjacency: c1 dim 3
    0 0 0 a
    1 0 0

Lines starting with ``;`` are comments in both formats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import Adjacency, DigitalImage, ImageError

_HEADER = re.compile(r"^([A-Za-z_]+)\s*:\s*(.*?)\s*$")
_INTS = re.compile(r"^-?\d+(\s+-?\d+)*(\s+a)?$")


@dataclass(frozen=True)
class ImageDocument:
    image: DigitalImage
    marked: frozenset = frozenset()
    format: str = "grid"
    headers: dict = field(default_factory=dict, compare=False)


def _parse_adjacency(value: str, lineno: int) -> tuple[Adjacency, int | None]:
    m = re.fullmatch(r"c(\d+)(?:\s+dim\s+(\d+))?", value.strip())
    if not m:
        raise ImageError(f"line {lineno}: bad adjacency header {value!r}")
    u = int(m.group(1))
    dim = int(m.group(2)) if m.group(2) else None
    return u, dim


def parse_image(text: str, adjacency=None) -> ImageDocument:
    """Parse either format; ``adjacency`` overrides the header value."""
    headers: dict = {}
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith(";"):
            continue
        m = _HEADER.match(line)
        if m and not body:
            headers[m.group(1).lower()] = (m.group(2), lineno)
            continue
        body.append((lineno, line.strip() if _INTS.match(line.strip()) else line))
    if not body:
        raise ImageError("empty image")
    u, dim = 1, None
    if "adjacency" in headers:
        u, dim = _parse_adjacency(*headers["adjacency"])
    meta = {k: v for k, (v, _) in headers.items()}
    if all(_INTS.match(line.strip()) for _, line in body):
        return _parse_list(body, u, dim, adjacency, meta)
    if dim not in (None, 2):
        raise ImageError("grid format is planar only")
    return _parse_grid(body, u, headers, adjacency, meta)


def _parse_list(body, u, dim, override, meta) -> ImageDocument:
    pts, marked = [], set()
    for lineno, line in body:
        tok = line.split()
        mark = tok[-1] == "a"
        coords = tuple(int(t) for t in (tok[:-1] if mark else tok))
        if dim is None:
            dim = len(coords)
        if len(coords) != dim:
            raise ImageError(f"line {lineno}: expected {dim} coordinates, got {len(coords)}")
        pts.append(coords)
        if mark:
            marked.add(coords)
    if len(set(pts)) != len(pts):
        raise ImageError("duplicate point in list")
    img = DigitalImage(pts, Adjacency(dim, u) if override is None else _override(override, dim))
    return ImageDocument(img, frozenset(marked), "list", meta)


def _override(adjacency, dim) -> Adjacency:
    if isinstance(adjacency, Adjacency):
        return adjacency
    if isinstance(adjacency, str):
        return Adjacency.parse(adjacency, dim)
    return Adjacency(dim, int(adjacency))


def _parse_grid(body, u, headers, override, meta) -> ImageDocument:
    x0 = y0 = 0
    if "origin" in headers:
        value, lineno = headers["origin"]
        try:
            x0, y0 = (int(v) for v in value.split())
        except ValueError:
            raise ImageError(f"line {lineno}: origin needs two integers") from None
    width = len(body[0][1])
    pts, marked = [], set()
    nrows = len(body)
    for r, (lineno, line) in enumerate(body):
        if len(line) != width:
            raise ImageError(f"line {lineno}: row width {len(line)} differs from {width}")
        y = y0 + nrows - 1 - r
        for c, ch in enumerate(line):
            if ch == ".":
                continue
            if ch not in "#a":
                raise ImageError(f"line {lineno}: unknown character {ch!r}")
            p = (x0 + c, y)
            pts.append(p)
            if ch == "a":
                marked.add(p)
    if not pts:
        raise ImageError("empty image")
    img = DigitalImage(pts, Adjacency(2, u) if override is None else _override(override, 2))
    return ImageDocument(img, frozenset(marked), "grid", meta)


def serialize_grid(image: DigitalImage, marked=()) -> str:
    if image.dim != 2:
        raise ImageError("grid format is planar only")
    marked = set(marked)
    xs = [p[0] for p in image.points]
    ys = [p[1] for p in image.points]
    x0, y0 = min(xs), min(ys)
    lines = [f"adjacency: {image.adjacency.name}"]
    if (x0, y0) != (0, 0):
        lines.append(f"origin: {x0} {y0}")
    pts = image.pointset
    for y in range(max(ys), y0 - 1, -1):
        row = []
        for x in range(x0, max(xs) + 1):
            p = (x, y)
            row.append("a" if p in marked else "#" if p in pts else ".")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def serialize_list(image: DigitalImage, marked=()) -> str:
    marked = set(marked)
    lines = [f"adjacency: {image.adjacency.name} dim {image.dim}"]
    for p in image.points:
        lines.append(" ".join(map(str, p)) + (" a" if p in marked else ""))
    return "\n".join(lines) + "\n"


def serialize(doc: ImageDocument, format: str | None = None) -> str:
    fmt = format or doc.format
    if fmt == "grid":
        return serialize_grid(doc.image, doc.marked)
    if fmt == "list":
        return serialize_list(doc.image, doc.marked)
    raise ValueError(f"unknown format {fmt!r}")


def read_image(path, adjacency=None) -> ImageDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_image(fh.read(), adjacency)
