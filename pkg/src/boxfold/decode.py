"""Turn a satisfying assignment back into a polyomino and its foldings."""
from __future__ import annotations

from dataclasses import dataclass

from .encoder import VarMap
from .folding import FoldError, FoldingMap
from .geometry import MOVES, build_surface
from .polyomino import Cell, Polyomino, is_connected, normalize


class DecodeError(RuntimeError):
    """A model that violates the encoding; always an encoder or solver bug."""


@dataclass
class DecodedBox:
    polyomino: Polyomino
    folding: FoldingMap  # in normalised polyomino coordinates
    cut_edges: frozenset[int]
    board_cells: frozenset[Cell]


def decode(model, vm: VarMap) -> list[DecodedBox]:
    """Decode every box of ``model`` (indexable by variable number)."""
    board = vm.board
    occ0 = vm.occupied(model, 0)
    if not occ0:
        raise DecodeError("channeling: no occupied cell")
    if not is_connected(occ0):
        raise DecodeError("ignition: occupied cells are not connected")
    out = []
    for k, box in enumerate(vm.boxes):
        surface = build_surface(box)
        occ = vm.occupied(model, k)
        if occ != occ0:
            raise DecodeError(f"linking: box {k} occupies a different cell set")
        assign: dict[Cell, int] = {}
        squares_seen: dict[int, Cell] = {}
        for (i, fl), v in vm.place[k].items():
            if not model[v]:
                continue
            c = board.cell(i)
            if c in assign:
                raise DecodeError(f"at-most-one per cell: two squares on cell {c}")
            sq = fl // 4
            if sq in squares_seen:
                raise DecodeError(f"exactly-one per square: square {sq} placed twice")
            assign[c] = fl
            squares_seen[sq] = c
        if len(squares_seen) != surface.area:
            raise DecodeError("exactly-one per square: some square is not placed")
        if set(assign) != occ:
            raise DecodeError("channeling: placements and occupied cells disagree")
        cut = frozenset(e for e, v in enumerate(vm.edge[k]) if model[v])
        for (x, y), fl in assign.items():
            for mv in MOVES:
                dx, dy = mv.delta
                q = (x + dx, y + dy)
                if q not in assign:
                    continue
                nxt, e = surface.transfer(fl, mv)
                if e in cut:
                    raise DecodeError(f"separation: cut edge {e} between occupied cells {(x, y)}, {q}")
                if nxt != assign[q]:
                    raise DecodeError(f"adjacency: cells {(x, y)} and {q} disagree")
        mx = min(x for x, _ in occ)
        my = min(y for _, y in occ)
        fm = FoldingMap(box, {(x - mx, y - my): fl for (x, y), fl in assign.items()})
        try:
            fm.check()
        except FoldError as exc:
            raise DecodeError(f"folding check: {exc}") from exc
        boundary_cut = set()
        for (x, y), fl in assign.items():
            for mv in MOVES:
                dx, dy = mv.delta
                if (x + dx, y + dy) not in assign:
                    boundary_cut.add(surface.transfer(fl, mv)[1])
        if not boundary_cut <= cut:
            raise DecodeError("boundary: an edge on the polyomino boundary is not cut")
        out.append(DecodedBox(Polyomino(normalize(occ)), fm, frozenset(boundary_cut), occ))
    return out
