"""ASCII and SVG drawings of planar images, marked sets and witness maps."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .core import DigitalImage, ImageError
from .maps import SelfMap


def _bounds(image: DigitalImage):
    if image.dim != 2:
        raise ImageError("rendering is planar only")
    xs = [p[0] for p in image.points]
    ys = [p[1] for p in image.points]
    return min(xs), max(xs), min(ys), max(ys)


def render_ascii(image: DigitalImage, marked=(), witness: SelfMap | None = None,
                 axes: bool = True) -> str:
    """Top row is the largest y.  ``a`` marks A, ``*`` marks points the witness moves."""
    x0, x1, y0, y1 = _bounds(image)
    marked = set(marked)
    moved = set()
    if witness is not None:
        moved = {p for p in image.points if witness(p) != p}
    pts = image.pointset
    width = max(len(str(y)) for y in (y0, y1))
    lines = []
    for y in range(y1, y0 - 1, -1):
        row = []
        for x in range(x0, x1 + 1):
            p = (x, y)
            row.append("*" if p in moved else "a" if p in marked else "#" if p in pts else ".")
        lines.append((f"{y:>{width}} " if axes else "") + "".join(row))
    if axes:
        lines.append(" " * (width + 1) + f"x from {x0} to {x1}")
    if witness is not None:
        for p in sorted(moved):
            lines.append(f"  {p} -> {witness(p)}")
    return "\n".join(lines) + "\n"


def render_svg(image: DigitalImage, marked=(), witness: SelfMap | None = None,
               cell: int = 24, title: str = "") -> str:
    """Cells for X, filled circles for A, arrows from x to f(x) for moved points."""
    x0, x1, y0, y1 = _bounds(image)
    marked = set(marked)
    w = (x1 - x0 + 3) * cell
    h = (y1 - y0 + 3) * cell

    def cx(p):
        return (p[0] - x0 + 1.5) * cell

    def cy(p):
        return (y1 - p[1] + 1.5) * cell

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" '
        'fill="#c0392b"/></marker></defs>',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    half = cell * 0.45
    for p in image.points:
        out.append(f'<rect x="{cx(p) - half:.1f}" y="{cy(p) - half:.1f}" width="{2 * half:.1f}" '
                   f'height="{2 * half:.1f}" fill="#dde6f0" stroke="#5b7290"/>')
    for p in sorted(marked):
        out.append(f'<circle cx="{cx(p):.1f}" cy="{cy(p):.1f}" r="{cell * 0.22:.1f}" fill="#1f3a5f"/>')
    if witness is not None:
        for p in image.points:
            q = witness(p)
            if q != p:
                out.append(f'<line x1="{cx(p):.1f}" y1="{cy(p):.1f}" x2="{cx(q):.1f}" '
                           f'y2="{cy(q):.1f}" stroke="#c0392b" stroke-width="2" '
                           f'marker-end="url(#arrow)"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
