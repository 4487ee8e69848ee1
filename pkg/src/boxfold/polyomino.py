"""Polyominoes: normalisation, connectivity, canonical keys, enumeration.

Cells are ``(x, y)`` pairs with ``y`` growing downward.  The canonical key of
a polyomino is the smallest of its 8 symmetric images, written as
``"WxH:row/row/..."`` with ``#`` for occupied and ``.`` for empty cells.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

Cell = tuple[int, int]

MAX_ENUM_AREA = 12

# the 8 plane symmetries as (x, y) -> (x', y')
SYMMETRIES = (
    lambda x, y: (x, y),
    lambda x, y: (-y, x),
    lambda x, y: (-x, -y),
    lambda x, y: (y, -x),
    lambda x, y: (-x, y),
    lambda x, y: (y, x),
    lambda x, y: (x, -y),
    lambda x, y: (-y, -x),
)


def normalize(cells: Iterable[Cell]) -> frozenset[Cell]:
    cells = list(cells)
    if not cells:
        return frozenset()
    mx = min(x for x, _ in cells)
    my = min(y for _, y in cells)
    return frozenset((x - mx, y - my) for x, y in cells)


def is_connected(cells: Iterable[Cell]) -> bool:
    cells = set(cells)
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(cells)


def to_text(cells: Iterable[Cell]) -> str:
    """Row-major ``#``/``.`` picture, one line per row, no trailing newline."""
    cells = normalize(cells)
    w = max(x for x, _ in cells) + 1
    h = max(y for _, y in cells) + 1
    return "\n".join(
        "".join("#" if (x, y) in cells else "." for x in range(w)) for y in range(h)
    )


def from_text(text: str) -> frozenset[Cell]:
    cells = []
    rows = [r for r in text.replace("/", "\n").splitlines() if r.strip()]
    for y, row in enumerate(rows):
        for x, ch in enumerate(row.strip()):
            if ch == "#":
                cells.append((x, y))
            elif ch != ".":
                raise ValueError(f"unexpected character {ch!r} in polyomino text")
    return normalize(cells)


def _key(cells: frozenset[Cell]) -> str:
    w = max(x for x, _ in cells) + 1
    h = max(y for _, y in cells) + 1
    rows = (
        "".join("#" if (x, y) in cells else "." for x in range(w)) for y in range(h)
    )
    return f"{w}x{h}:" + "/".join(rows)


def _sort_key(key: str):
    dims, rows = key.split(":")
    w, h = dims.split("x")
    return (int(w), int(h), rows)


def variants(cells: Iterable[Cell]) -> list[frozenset[Cell]]:
    """The 8 symmetric images, normalised (duplicates kept)."""
    cells = list(cells)
    return [normalize(s(x, y) for x, y in cells) for s in SYMMETRIES]


def canonical_form(cells: Iterable[Cell]) -> str:
    """Minimum key over rotations and reflections.

    Ordered by (width, height) and then row text, so keys compare as
    ``(w, h, bitmap)``.
    """
    return min((_key(v) for v in variants(cells)), key=_sort_key)


def from_key(key: str) -> frozenset[Cell]:
    return from_text(key.split(":", 1)[1])


class Polyomino:
    """A normalised, edge-connected cell set."""

    __slots__ = ("cells",)

    def __init__(self, cells: Iterable[Cell]):
        cells = normalize(cells)
        if not is_connected(cells):
            raise ValueError("polyomino must be non-empty and edge-connected")
        self.cells = cells

    @classmethod
    def from_text(cls, text: str) -> "Polyomino":
        return cls(from_text(text))

    @classmethod
    def from_key(cls, key: str) -> "Polyomino":
        return cls(from_key(key))

    @property
    def area(self) -> int:
        return len(self.cells)

    def canonical_form(self) -> str:
        return canonical_form(self.cells)

    def text(self) -> str:
        return to_text(self.cells)

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells, key=lambda c: (c[1], c[0]))

    def __eq__(self, other):
        return isinstance(other, Polyomino) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"Polyomino({self.text()!r})"

    def __len__(self):
        return len(self.cells)


def enumerate_polyominoes(area: int, max_area: int = MAX_ENUM_AREA) -> Iterator[str]:
    """Yield the canonical key of every free polyomino of ``area`` cells.

    Grows level by level from the monomino, deduplicating by canonical key;
    keys come out in sorted order.
    """
    if not 1 <= area <= max_area:
        raise ValueError(f"area must be in 1..{max_area}, got {area}")
    level = {canonical_form([(0, 0)])}
    for _ in range(area - 1):
        nxt: set[str] = set()
        for key in level:
            cells = from_key(key)
            frontier = {
                nb
                for x, y in cells
                for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))
                if nb not in cells
            }
            for nb in frontier:
                nxt.add(canonical_form(cells | {nb}))
        level = nxt
    yield from sorted(level, key=_sort_key)
