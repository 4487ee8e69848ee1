"""ASCII and SVG pictures of developments and their folding lines."""
from __future__ import annotations

from typing import Iterable
from xml.sax.saxutils import escape

from .folding import FoldingMap, creases
from .polyomino import Cell, normalize, to_text

SCALE = 24
MARGIN = 12

FORMATS = ("ascii", "svg")


def render_ascii(cells: Iterable[Cell]) -> str:
    return to_text(cells) + "\n"


def _segments(cells: frozenset[Cell]):
    """Boundary and interior unit edges as ``((x0, y0), (x1, y1))``."""
    boundary, interior = [], []
    for x, y in sorted(cells, key=lambda c: (c[1], c[0])):
        sides = (
            ((x, y), (x + 1, y), (x, y - 1)),
            ((x + 1, y), (x + 1, y + 1), (x + 1, y)),
            ((x, y + 1), (x + 1, y + 1), (x, y + 1)),
            ((x, y), (x, y + 1), (x - 1, y)),
        )
        for p, q, nb in sides:
            if nb not in cells:
                boundary.append((p, q))
            elif nb > (x, y):
                interior.append(((p, q), ((x, y), nb)))
    return boundary, interior


def _line(p, q, cls: str, extra: str = "") -> str:
    x0, y0 = MARGIN + SCALE * p[0], MARGIN + SCALE * p[1]
    x1, y1 = MARGIN + SCALE * q[0], MARGIN + SCALE * q[1]
    return f'<line class="{cls}" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}"{extra}/>'


def render_svg(cells: Iterable[Cell], folding: FoldingMap | None = None, title: str = "") -> str:
    """SVG of the polyomino; with ``folding``, its creases are drawn dashed."""
    cells = normalize(cells)
    w = max(x for x, _ in cells) + 1
    h = max(y for _, y in cells) + 1
    crease_set = set()
    if folding is not None:
        if normalize(folding.cells) != cells:
            raise ValueError("folding does not belong to this polyomino")
        crease_set = {tuple(sorted(e)) for e in creases(folding)}
    width, height = 2 * MARGIN + SCALE * w, 2 * MARGIN + SCALE * h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(
        "<style>.cell{fill:#f4e7c5;stroke:none}.grid{stroke:#c8b98f;stroke-width:1}"
        ".outline{stroke:#222;stroke-width:2}.crease{stroke:#c0392b;stroke-width:2;"
        "stroke-dasharray:4 3}</style>"
    )
    for x, y in sorted(cells, key=lambda c: (c[1], c[0])):
        out.append(
            f'<rect class="cell" x="{MARGIN + SCALE * x}" y="{MARGIN + SCALE * y}" '
            f'width="{SCALE}" height="{SCALE}"/>'
        )
    boundary, interior = _segments(cells)
    for (p, q), pair in interior:
        cls = "crease" if tuple(sorted(pair)) in crease_set else "grid"
        out.append(_line(p, q, cls))
    for p, q in boundary:
        out.append(_line(p, q, "outline"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(cells: Iterable[Cell], fmt: str = "ascii", foldings: Iterable[FoldingMap] = (), title: str = "") -> list[str]:
    """One document for ASCII; one SVG per folding (or a bare outline)."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    cells = normalize(cells)
    if fmt == "ascii":
        return [render_ascii(cells)]
    foldings = list(foldings)
    if not foldings:
        return [render_svg(cells, title=title)]
    return [
        render_svg(cells, fm, title=f"{title} folding {i + 1}".strip())
        for i, fm in enumerate(foldings)
    ]
