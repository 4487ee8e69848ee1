"""Foldings of a polyomino onto a box surface.

A folding assigns each polyomino cell a flag such that neighbouring cells
receive the flags obtained by rolling across the shared side, and every
surface square is covered exactly once.  Two foldings count as the same way
when a box rotation carries one onto the other.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .geometry import MOVES, BoxSpec, Direction, build_surface
from .polyomino import Cell, Polyomino, normalize


class FoldError(ValueError):
    pass


@dataclass(frozen=True)
class FoldingMap:
    box: BoxSpec
    assignment: dict[Cell, int]  # cell -> flag id

    def flag_of(self, cell: Cell) -> int:
        return self.assignment[cell]

    @property
    def cells(self) -> frozenset[Cell]:
        return frozenset(self.assignment)

    def check(self) -> None:
        """Raise :class:`FoldError` unless bijective and adjacency-consistent."""
        surface = build_surface(self.box)
        squares = [f // 4 for f in self.assignment.values()]
        if len(squares) != surface.area or len(set(squares)) != surface.area:
            raise FoldError("folding is not a bijection onto the surface squares")
        for (x, y), f in self.assignment.items():
            for mv in MOVES:
                dx, dy = mv.delta
                q = (x + dx, y + dy)
                if q in self.assignment and surface.transfer(f, mv)[0] != self.assignment[q]:
                    raise FoldError(f"cells {(x, y)} and {q} are not consistently folded")

    def compose(self, g: tuple[int, ...]) -> "FoldingMap":
        """Image under a flag permutation (e.g. a box rotation)."""
        return FoldingMap(self.box, {c: g[f] for c, f in self.assignment.items()})

    def to_json(self) -> dict:
        return {
            "box": list(self.box.dims),
            "cells": [
                [x, y, f // 4, Direction(f % 4).name]
                for (x, y), f in sorted(self.assignment.items(), key=lambda t: (t[0][1], t[0][0]))
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "FoldingMap":
        if isinstance(data, str):
            data = json.loads(data)
        box = BoxSpec(*data["box"])
        return cls(
            box,
            {(x, y): 4 * sq + Direction[d] for x, y, sq, d in data["cells"]},
        )


def _propagate(cells: frozenset[Cell], order, surface, root_flag: int):
    """Spread ``root_flag`` along the BFS tree; None if inconsistent or not bijective."""
    table = surface.transfer_table
    assign = {order[0][0]: root_flag}
    for cell, parent, mv in order[1:]:
        assign[cell] = table[mv][assign[parent]]
    used = set()
    for f in assign.values():
        sq = f // 4
        if sq in used:
            return None
        used.add(sq)
    for (x, y), f in assign.items():
        # each non-tree adjacency is seen from both ends; checking R and D suffices
        for mv in (Direction.R, Direction.D):
            dx, dy = mv.delta
            q = (x + dx, y + dy)
            if q in assign and table[mv][f] != assign[q]:
                return None
    return assign


def bfs_order(cells: frozenset[Cell], root: Cell | None = None):
    """BFS spanning tree as ``(cell, parent, move from parent)`` triples."""
    if root is None:
        root = min(cells)
    order = [(root, None, None)]
    seen = {root}
    queue = deque([root])
    while queue:
        x, y = queue.popleft()
        for mv in MOVES:
            dx, dy = mv.delta
            q = (x + dx, y + dy)
            if q in cells and q not in seen:
                seen.add(q)
                order.append((q, (x, y), mv))
                queue.append(q)
    return order


def valid_anchor_flags(cells: Iterable[Cell], box: BoxSpec, root: Cell | None = None) -> list[FoldingMap]:
    """Every folding of ``cells`` onto ``box`` (one per valid root flag)."""
    cells = normalize(cells)
    surface = build_surface(box)
    if len(cells) != surface.area:
        raise FoldError(
            f"polyomino area {len(cells)} differs from surface area {surface.area} of {box}"
        )
    order = bfs_order(cells, root)
    out = []
    for f in range(surface.num_flags):
        assign = _propagate(cells, order, surface, f)
        if assign is not None:
            out.append(FoldingMap(box, assign))
    return out


def count_foldings(poly: Polyomino | Iterable[Cell], box: BoxSpec, root: Cell | None = None):
    """Number of distinct ways ``poly`` folds onto ``box`` and one map per way."""
    cells = poly.cells if isinstance(poly, Polyomino) else normalize(poly)
    maps = valid_anchor_flags(cells, box, root)
    group = build_surface(box).rotation_group
    if len(maps) % len(group):
        raise AssertionError(
            f"{len(maps)} valid anchors is not a multiple of the group order {len(group)}"
        )
    key_cell = min(cells)
    reps = []
    seen: set[int] = set()
    for fm in maps:
        f = fm.assignment[key_cell]
        if f in seen:
            continue
        seen.update(g[f] for g in group)
        reps.append(fm)
    return len(maps) // len(group), reps


def is_development(poly, box: BoxSpec) -> bool:
    return count_foldings(poly, box)[0] > 0


def creases(fm: FoldingMap) -> frozenset[tuple[Cell, Cell]]:
    """Interior edges lying on a box edge, as sorted ``(cell, cell)`` pairs."""
    surface = build_surface(fm.box)
    out = set()
    for (x, y), f in fm.assignment.items():
        for mv in (Direction.R, Direction.D):
            dx, dy = mv.delta
            q = (x + dx, y + dy)
            if q in fm.assignment:
                _, edge = surface.transfer(f, mv)
                if surface.is_fold_edge(edge):
                    out.add(((x, y), q))
    return frozenset(out)


def fold_signature(cells: Iterable[Cell], boxes: Iterable[BoxSpec]) -> tuple[int, ...]:
    return tuple(count_foldings(cells, b)[0] for b in boxes)
