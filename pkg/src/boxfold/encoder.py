"""CNF encoding of "a polyomino on an n x n board that folds into every box".

Variable families, per box ``k``:

* cell variables ``X[k][i]`` -- board cell ``i`` is occupied;
* placement variables ``P[k][i, flag]`` -- the flag's square lies on cell
  ``i`` with the flag's direction;
* edge variables ``E[k][e]`` -- surface edge ``e`` is cut;

plus shared ignition variables ``T[i, t]`` (cell ``i`` is reached from the
board centre within ``t`` steps through occupied cells).  Board cells are
numbered ``i = y * n + x``.
"""
from __future__ import annotations

import json
import logging
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cnf import CnfFormula, at_most_one, exactly_one
from .geometry import MOVES, BoxSpec, build_surface
from .polyomino import Cell, variants

log = logging.getLogger(__name__)


class EncodeError(ValueError):
    pass


class EquivalentAnchorsError(EncodeError):
    """Two identical boxes anchored with rotation-equivalent flags."""


class PruneWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BoardSpec:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("board side must be >= 1")

    @property
    def center(self) -> Cell:
        return (self.n // 2, self.n // 2)

    @property
    def center_index(self) -> int:
        return self.index(self.center)

    def index(self, cell: Cell) -> int:
        return cell[1] * self.n + cell[0]

    def cell(self, index: int) -> Cell:
        return (index % self.n, index // self.n)

    def contains(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.n and 0 <= cell[1] < self.n

    def distance(self, cell: Cell) -> int:
        cx, cy = self.center
        return abs(cell[0] - cx) + abs(cell[1] - cy)

    @property
    def cells(self) -> list[Cell]:
        return [self.cell(i) for i in range(self.n * self.n)]


@dataclass
class EncodeConfig:
    boxes: list[BoxSpec]
    board: BoardSpec = field(default_factory=lambda: BoardSpec(15))
    max_distance: int = 15
    anchors: list[int | None] = field(default_factory=list)  # flag id per box
    amo_encoding: str = "sequential"
    pairwise_threshold: int = 30
    emit_redundant: bool = True
    # "manhattan": cells within distance d of the centre; "reachable": also
    # drop placements no walk of length <= d from an anchor can reach
    prune: str = "reachable"
    # "center": ignite only the centre at t=0; "exactly_one": any one cell
    ignition_base: str = "center"

    def __post_init__(self):
        self.boxes = [b if isinstance(b, BoxSpec) else BoxSpec(*b) for b in self.boxes]
        if not self.anchors:
            self.anchors = [None] * len(self.boxes)
        self.anchors = list(self.anchors)

    def validate(self) -> None:
        if not 1 <= len(self.boxes) <= 3:
            raise EncodeError("between one and three boxes are supported")
        if len(self.anchors) != len(self.boxes):
            raise EncodeError("need one anchor entry (or None) per box")
        areas = {b.surface_area() for b in self.boxes}
        if len(areas) != 1:
            raise EncodeError(f"boxes have different surface areas: {sorted(areas)}")
        area = areas.pop()
        if area > self.board.n ** 2:
            raise EncodeError(f"surface area {area} exceeds the board area {self.board.n ** 2}")
        if self.max_distance < 0:
            raise EncodeError("max distance must be non-negative")
        if self.amo_encoding not in ("pairwise", "sequential"):
            raise EncodeError(f"unknown at-most-one encoding {self.amo_encoding!r}")
        if self.prune not in ("manhattan", "reachable"):
            raise EncodeError(f"unknown prune mode {self.prune!r}")
        if self.ignition_base not in ("center", "exactly_one"):
            raise EncodeError(f"unknown ignition base {self.ignition_base!r}")
        for box, anchor in zip(self.boxes, self.anchors):
            if anchor is not None and not 0 <= anchor < 4 * box.surface_area():
                raise EncodeError(f"anchor flag {anchor} is not a flag of box {box}")
        for j in range(len(self.boxes)):
            for k in range(j):
                if self.boxes[j] != self.boxes[k]:
                    continue
                a, b = self.anchors[k], self.anchors[j]
                if a is None or b is None:
                    continue
                if b in build_surface(self.boxes[k]).rotation_group.orbit(a):
                    raise EquivalentAnchorsError(
                        f"anchors {a} and {b} of box {self.boxes[k]} are equivalent under rotation"
                    )

    @property
    def area(self) -> int:
        return self.boxes[0].surface_area()

    def to_json(self) -> dict:
        return {
            "boxes": [list(b.dims) for b in self.boxes],
            "board": self.board.n,
            "max_distance": self.max_distance,
            "anchors": self.anchors,
            "amo_encoding": self.amo_encoding,
            "pairwise_threshold": self.pairwise_threshold,
            "emit_redundant": self.emit_redundant,
            "prune": self.prune,
            "ignition_base": self.ignition_base,
        }

    @classmethod
    def from_json(cls, d: dict) -> "EncodeConfig":
        d = dict(d)
        d["boxes"] = [BoxSpec(*b) for b in d["boxes"]]
        d["board"] = BoardSpec(d["board"])
        return cls(**d)


@dataclass
class VarMap:
    board: BoardSpec
    boxes: list[BoxSpec]
    retained: list[int]  # board cell indices inside the prune mask
    cell: list[list[int]]  # cell[k][i] for every board cell
    place: list[dict[tuple[int, int], int]]  # place[k][(i, flag)]
    edge: list[list[int]]  # edge[k][e]
    ignite: dict[tuple[int, int], int]  # (i, t) -> var

    def occupied(self, model, box: int = 0) -> frozenset[Cell]:
        return frozenset(
            self.board.cell(i) for i, v in enumerate(self.cell[box]) if model[v]
        )

    def to_json(self) -> dict:
        return {
            "board": self.board.n,
            "boxes": [list(b.dims) for b in self.boxes],
            "retained": self.retained,
            "cell": self.cell,
            "place": [[[i, f, v] for (i, f), v in sorted(p.items())] for p in self.place],
            "edge": self.edge,
            "ignite": [[i, t, v] for (i, t), v in sorted(self.ignite.items())],
        }

    @classmethod
    def from_json(cls, d: dict | str) -> "VarMap":
        if isinstance(d, str):
            d = json.loads(d)
        return cls(
            board=BoardSpec(d["board"]),
            boxes=[BoxSpec(*b) for b in d["boxes"]],
            retained=list(d["retained"]),
            cell=[list(c) for c in d["cell"]],
            place=[{(i, f): v for i, f, v in p} for p in d["place"]],
            edge=[list(e) for e in d["edge"]],
            ignite={(i, t): v for i, t, v in d["ignite"]},
        )

    def all_vars(self) -> list[int]:
        out = [v for c in self.cell for v in c]
        out += [v for p in self.place for v in p.values()]
        out += [v for e in self.edge for v in e]
        out += list(self.ignite.values())
        return out


def prune_mask(cfg: EncodeConfig) -> list[int]:
    """Board cells within Manhattan distance ``max_distance`` of the centre."""
    board = cfg.board
    keep = [i for i, c in enumerate(board.cells) if board.distance(c) <= cfg.max_distance]
    if len(keep) < cfg.area:
        warnings.warn(
            f"only {len(keep)} cells retained for surface area {cfg.area}; "
            "the instance is unsatisfiable",
            PruneWarning,
            stacklevel=2,
        )
    return keep


def _neighbour(board: BoardSpec, i: int, mv: int) -> int | None:
    x, y = board.cell(i)
    dx, dy = MOVES[mv].delta
    q = (x + dx, y + dy)
    return board.index(q) if board.contains(q) else None


def _reachable_placements(cfg, box_index, mask: set[int]) -> set[tuple[int, int]]:
    surface = build_surface(cfg.boxes[box_index])
    start = (cfg.board.center_index, cfg.anchors[box_index])
    seen = {start}
    frontier = deque([(start, 0)])
    table = surface.transfer_table
    while frontier:
        (i, f), depth = frontier.popleft()
        if depth == cfg.max_distance:
            continue
        for mv in MOVES:
            j = _neighbour(cfg.board, i, mv)
            if j is None or j not in mask:
                continue
            nxt = (j, table[mv][f])
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, depth + 1))
    return seen


def encode(cfg: EncodeConfig) -> tuple[CnfFormula, VarMap]:
    cfg.validate()
    board = cfg.board
    ncells = board.n * board.n
    retained = prune_mask(cfg)
    mask = set(retained)
    surfaces = [build_surface(b) for b in cfg.boxes]
    nb = len(cfg.boxes)
    f = CnfFormula()

    cell = [[f.new_var() for _ in range(ncells)] for _ in range(nb)]
    place: list[dict[tuple[int, int], int]] = []
    for k, s in enumerate(surfaces):
        allowed = None
        if cfg.prune == "reachable" and cfg.anchors[k] is not None:
            allowed = _reachable_placements(cfg, k, mask)
        pk = {}
        for i in retained:
            for fl in range(s.num_flags):
                if allowed is None or (i, fl) in allowed:
                    pk[(i, fl)] = f.new_var()
        place.append(pk)
    edge = [[f.new_var() for _ in s.edges] for s in surfaces]

    center = board.center_index
    d = cfg.max_distance
    ignite: dict[tuple[int, int], int] = {}
    for t in range(d + 1):
        for i in retained:
            if cfg.ignition_base == "center" and board.distance(board.cell(i)) > t:
                continue
            ignite[(i, t)] = f.new_var()
    vm = VarMap(board, list(cfg.boxes), retained, cell, place, edge, ignite)

    amo = dict(method=cfg.amo_encoding, threshold=cfg.pairwise_threshold)
    for k, s in enumerate(surfaces):
        X, P, E = cell[k], place[k], edge[k]
        table, etable = s.transfer_table, s.edge_table
        for (i, fl), p in P.items():
            for mv in MOVES:
                e = E[etable[mv][fl]]
                j = _neighbour(board, i, mv)
                if j is None or j not in mask:
                    # leaving the board: the crossed edge has to be cut
                    f.clauses.append([-p, e])
                    continue
                q = P.get((j, table[mv][fl]))
                f.clauses.append([-p, e, q] if q else [-p, e])
                if cfg.emit_redundant:
                    f.clauses.append([-p, e, X[j]])
                f.clauses.append([-p, -e, -X[j]])

        by_square: dict[int, list[int]] = {}
        by_cell: dict[int, list[int]] = {}
        for (i, fl), p in P.items():
            by_square.setdefault(fl // 4, []).append(p)
            by_cell.setdefault(i, []).append(p)
        missing = [sq for sq in range(s.area) if sq not in by_square]
        if missing:
            # the radius is too small for this anchor: trivially UNSAT
            warnings.warn(f"squares {missing} of box {s.spec} have no admissible placement", PruneWarning)
            z = f.new_var()
            f.clauses += [[z], [-z]]
        for sq, lits in sorted(by_square.items()):
            exactly_one(f, lits, **amo)
        for i in range(ncells):
            lits = by_cell.get(i, [])
            if not lits:
                f.clauses.append([-X[i]])
                continue
            at_most_one(f, lits, **amo)
            f.clauses.append([-X[i]] + lits)
            for p in lits:
                f.clauses.append([-p, X[i]])
        if cfg.anchors[k] is not None:
            p = P.get((center, cfg.anchors[k]))
            if p is None:
                raise EncodeError(f"anchor flag {cfg.anchors[k]} was pruned away")
            f.clauses.append([p])

    X0 = cell[0]
    if cfg.ignition_base == "center":
        f.clauses.append([ignite[(center, 0)]])
    else:
        exactly_one(f, [ignite[(i, 0)] for i in retained], **amo)
    for i in retained:
        if (i, 0) in ignite:
            f.clauses.append([-ignite[(i, 0)], X0[i]])
    for t in range(1, d + 1):
        for i in retained:
            it = ignite.get((i, t))
            if it is None:
                continue
            preds = [ignite[(i, t - 1)]] if (i, t - 1) in ignite else []
            for mv in MOVES:
                j = _neighbour(board, i, mv)
                if j is not None and (j, t - 1) in ignite:
                    preds.append(ignite[(j, t - 1)])
            f.clauses.append([-it, X0[i]])
            f.clauses.append([-it] + preds)
            for pr in preds:
                f.clauses.append([-X0[i], -pr, it])
    for i in retained:
        last = ignite.get((i, d))
        f.clauses.append([-X0[i], last] if last else [-X0[i]])

    for k in range(1, nb):
        for i in range(ncells):
            f.clauses.append([-cell[k][i], X0[i]])
            f.clauses.append([cell[k][i], -X0[i]])

    log.debug("encoded %s: %d vars, %d clauses", cfg.boxes, f.num_vars, len(f.clauses))
    return f, vm


def blocking_clause(vm: VarMap, occupied: Iterable[Cell]) -> list[int]:
    """Clause falsified exactly by box-1 occupancy equal to ``occupied`` on the mask.

    Every model occupies exactly one cell per surface square, so a full-size
    shape is blocked by its own cells alone; smaller sets list the whole mask.
    """
    occ = {vm.board.index(c) for c in occupied}
    if not occ <= set(vm.retained):
        raise ValueError("occupied cells must lie inside the retained mask")
    X = vm.cell[0]
    if len(occ) == vm.boxes[0].surface_area():
        return [-X[i] for i in sorted(occ)]
    return [-X[i] if i in occ else X[i] for i in vm.retained]


def congruent_placements(vm: VarMap, cells: Iterable[Cell]) -> list[frozenset[Cell]]:
    """All rotated/reflected/translated copies of ``cells`` inside the mask that
    cover the board centre."""
    mask = {vm.board.cell(i) for i in vm.retained}
    cx, cy = vm.board.center
    out = set()
    for v in variants(cells):
        for ox, oy in v:
            shifted = frozenset((x - ox + cx, y - oy + cy) for x, y in v)
            if shifted <= mask:
                out.add(shifted)
    return sorted(out, key=sorted)


def anchor_assumptions(vm: VarMap, occupied: Iterable[Cell]) -> list[list[int]]:
    """Unit clauses fixing box-1 occupancy to exactly ``occupied``."""
    occ = {vm.board.index(c) for c in occupied}
    if not occ <= set(vm.retained):
        raise ValueError("occupied cells must lie inside the retained mask")
    X = vm.cell[0]
    return [[X[i]] if i in occ else [-X[i]] for i in vm.retained]


def same_box_anchor_pairs(box: BoxSpec) -> list[tuple[int, int]]:
    """Anchor flag pairs for two copies of ``box`` that cannot fold identically.

    Pairs ``(a, b)`` and ``(g a, g b)`` are equivalent for every rotation g,
    as are ``(a, b)`` and ``(b, a)``; one lexicographically smallest
    representative per class is returned, in ascending order.
    """
    group = build_surface(box).rotation_group
    nf = len(group.elements[0])
    reps = set()
    for a in group.orbit_representatives():
        orbit_a = group.orbit(a)
        for b in range(nf):
            if b in orbit_a:
                continue
            cands = []
            for g in group:
                cands.append((g[a], g[b]))
                cands.append((g[b], g[a]))
            reps.add(min(cands))
    return sorted(reps)


def anchor_pairs(boxes: Sequence[BoxSpec]) -> list[tuple[int, ...]]:
    """Admissible anchor tuples for one or two boxes, in ascending order."""
    if len(boxes) == 1:
        return [(a,) for a in build_surface(boxes[0]).rotation_group.orbit_representatives()]
    if len(boxes) == 2:
        if boxes[0] == boxes[1]:
            return same_box_anchor_pairs(boxes[0])
        reps = build_surface(boxes[0]).rotation_group.orbit_representatives()
        nf = build_surface(boxes[1]).num_flags
        return [(a, b) for a in reps for b in range(nf)]
    raise EncodeError("automatic anchor enumeration covers one or two boxes; pass anchors explicitly")
