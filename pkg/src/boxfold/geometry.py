"""Surface model of an a x b x c box made of unit squares.

Every square is embedded in 3D with doubled integer coordinates (so square
centres and edge midpoints stay integral).  A *flag* is a square together with
the board direction its reference side points to; flags are numbered
``4 * square_id + direction``.  Rolling a flag across one of its four sides is
a single table lookup (:meth:`BoxSurface.transfer`).

Face charts are fixed: a face whose normal lies on axis ``k`` uses the two
remaining axes in increasing order as ``(u, v)``, and its reference side is
the ``+u`` direction.  Faces are ordered ``x-, x+, y-, y+, z-, z+``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property, lru_cache
from typing import NamedTuple

Vec = tuple[int, int, int]

FACE_NAMES = ("x-", "x+", "y-", "y+", "z-", "z+")


class Direction(IntEnum):
    """Board directions, clockwise."""

    U = 0
    R = 1
    D = 2
    L = 3

    def opposite(self) -> "Direction":
        return Direction((self + 2) % 4)

    def rotate_left(self) -> "Direction":
        return Direction((self + 3) % 4)

    def rotate_right(self) -> "Direction":
        return Direction((self + 1) % 4)

    @property
    def delta(self) -> tuple[int, int]:
        """Board offset ``(dx, dy)``; rows grow downward."""
        return _DELTAS[self]


_DELTAS = {0: (0, -1), 1: (1, 0), 2: (0, 1), 3: (-1, 0)}
MOVES = tuple(Direction)


@dataclass(frozen=True, order=True)
class BoxSpec:
    a: int
    b: int
    c: int

    def __post_init__(self):
        dims = (self.a, self.b, self.c)
        if any(not isinstance(x, int) or x < 1 for x in dims):
            raise ValueError(f"box dimensions must be positive integers, got {dims}")
        a, b, c = sorted(dims)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def parse(cls, text: str) -> "BoxSpec":
        """Parse ``"AxBxC"``."""
        parts = text.lower().replace("×", "x").split("x")
        if len(parts) != 3:
            raise ValueError(f"box must look like AxBxC, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"bad box size {text!r}: {exc}") from None

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def surface_area(self) -> int:
        return 2 * (self.a * self.b + self.a * self.c + self.b * self.c)

    def __str__(self) -> str:
        return f"{self.a}x{self.b}x{self.c}"


class SurfaceSquare(NamedTuple):
    face: str
    u: int
    v: int


class SurfaceEdge(NamedTuple):
    id: int
    # two (square id, local side) incidences; local side is the side index
    # relative to the square's reference direction (0 = +u, clockwise)
    endpoints: tuple[tuple[int, int], tuple[int, int]]


class Flag(NamedTuple):
    square: int
    dir: Direction


def _add(p: Vec, q: Vec, k: int = 1) -> Vec:
    return (p[0] + k * q[0], p[1] + k * q[1], p[2] + k * q[2])


def _neg(p: Vec) -> Vec:
    return (-p[0], -p[1], -p[2])


def _dot(p: Vec, q: Vec) -> int:
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _cross(p: Vec, q: Vec) -> Vec:
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def _unit(axis: int, sign: int = 1) -> Vec:
    v = [0, 0, 0]
    v[axis] = sign
    return (v[0], v[1], v[2])


@dataclass(frozen=True)
class RotationGroup:
    """Orientation-preserving box symmetries acting on flags.

    ``elements[0]`` is the identity; each element is a tuple mapping flag id
    to flag id.
    """

    elements: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def orbit(self, flag: int) -> frozenset[int]:
        return frozenset(g[flag] for g in self.elements)

    def orbit_representatives(self) -> list[int]:
        """Smallest flag id of every orbit, ascending."""
        seen: set[int] = set()
        reps = []
        for f in range(len(self.elements[0])):
            if f not in seen:
                reps.append(f)
                seen.update(self.orbit(f))
        return reps


@dataclass
class BoxSurface:
    """Squares, edges and the flag transfer table of one box."""

    spec: BoxSpec
    squares: list[SurfaceSquare] = field(init=False)
    edges: list[SurfaceEdge] = field(init=False)

    def __post_init__(self):
        self._build()

    # -- construction -----------------------------------------------------

    def _build(self) -> None:
        ext = tuple(2 * d for d in self.spec.dims)
        self._extent = ext
        centres: list[Vec] = []
        normals: list[Vec] = []
        refs: list[Vec] = []
        squares: list[SurfaceSquare] = []
        for fi, name in enumerate(FACE_NAMES):
            k, sign = fi // 2, (-1 if fi % 2 == 0 else 1)
            ua, va = [ax for ax in range(3) if ax != k]
            for u in range(self.spec.dims[ua]):
                for v in range(self.spec.dims[va]):
                    p = [0, 0, 0]
                    p[k] = 0 if sign < 0 else ext[k]
                    p[ua] = 2 * u + 1
                    p[va] = 2 * v + 1
                    squares.append(SurfaceSquare(name, u, v))
                    centres.append((p[0], p[1], p[2]))
                    normals.append(_unit(k, sign))
                    refs.append(_unit(ua))
        self.squares = squares
        self._centre = centres
        self._normal = normals
        self._ref = refs
        self._square_at = {c: i for i, c in enumerate(centres)}

        nflags = 4 * len(squares)
        self._up = [self._up_vector(f) for f in range(nflags)]
        self._flag_of = {
            (f // 4, self._up[f]): f for f in range(nflags)
        }

        midpoints: dict[Vec, int] = {}
        incid: dict[Vec, list[tuple[int, int]]] = {}
        next_flag = [[0] * nflags for _ in MOVES]
        next_edge = [[0] * nflags for _ in MOVES]
        for f in range(nflags):
            for mv in MOVES:
                g, mid = self._roll(f, mv)
                next_flag[mv][f] = g
                if mid not in midpoints:
                    midpoints[mid] = len(midpoints)
                next_edge[mv][f] = mid
        # stable edge ids: sort midpoints
        order = {mid: i for i, mid in enumerate(sorted(midpoints))}
        for mv in MOVES:
            next_edge[mv] = [order[mid] for mid in next_edge[mv]]
        for f in range(0, nflags, 4):
            sq = f // 4
            # flag with direction 0 has its reference side pointing up, so
            # the move equals the local side
            for side in MOVES:
                e = next_edge[side][f]
                incid.setdefault(e, []).append((sq, int(side)))
        self.edges = [
            SurfaceEdge(e, (incid[e][0], incid[e][1])) for e in range(len(order))
        ]
        self._edge_mid = sorted(midpoints)
        self._next_flag = [tuple(row) for row in next_flag]
        self._next_edge = [tuple(row) for row in next_edge]

    def _up_vector(self, flag: int) -> Vec:
        sq, r = divmod(flag, 4)
        n, ref = self._normal[sq], self._ref[sq]
        # r is the board direction the reference side points to
        if r == 0:
            return ref
        if r == 1:
            return _cross(n, ref)
        if r == 2:
            return _neg(ref)
        return _cross(ref, n)

    def _roll(self, flag: int, move: int) -> tuple[int, Vec]:
        sq = flag // 4
        c, n, t = self._centre[sq], self._normal[sq], self._up[flag]
        right = _cross(t, n)
        w = (t, right, _neg(t), _neg(right))[move]
        mid = _add(c, w)
        ax = next(i for i in range(3) if w[i])
        nxt = _add(c, w, 2)
        if 0 < nxt[ax] < self._extent[ax]:
            c2, n2, t2 = nxt, n, t
        else:
            # roll over the box edge: w becomes the new normal, -n the new heading
            c2 = _add(mid, _neg(n))
            n2 = w
            tw = _dot(t, w)
            t2 = _add(t, w, -tw) if tw == 0 else _add((0, 0, 0), n, -tw)
        sq2 = self._square_at[c2]
        assert self._normal[sq2] == n2
        return self._flag_of[(sq2, t2)], mid

    # -- queries ----------------------------------------------------------

    @property
    def area(self) -> int:
        return len(self.squares)

    @property
    def num_flags(self) -> int:
        return 4 * len(self.squares)

    def flag(self, flag_id: int) -> Flag:
        sq, r = divmod(flag_id, 4)
        return Flag(sq, Direction(r))

    @staticmethod
    def flag_id(square: int, direction: int) -> int:
        return 4 * square + int(direction)

    def transfer(self, flag: int, move: int) -> tuple[int, int]:
        """Roll ``flag`` one cell in board direction ``move``.

        Returns the flag landing on the neighbouring cell and the id of the
        crossed surface edge.
        """
        return self._next_flag[move][flag], self._next_edge[move][flag]

    @property
    def transfer_table(self) -> tuple[tuple[int, ...], ...]:
        """``transfer_table[move][flag]`` -> next flag."""
        return tuple(self._next_flag)

    @property
    def edge_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self._next_edge)

    def face_of(self, square: int) -> str:
        return self.squares[square].face

    def edge_faces(self, edge: int) -> tuple[str, str]:
        (s1, _), (s2, _) = self.edges[edge].endpoints
        return self.squares[s1].face, self.squares[s2].face

    def is_fold_edge(self, edge: int) -> bool:
        """True when the edge lies on a box edge (separates two faces)."""
        f1, f2 = self.edge_faces(edge)
        return f1 != f2

    def neighbours(self, square: int) -> list[int]:
        f = 4 * square
        return [self._next_flag[mv][f] // 4 for mv in MOVES]

    def square_edges(self, square: int) -> list[int]:
        f = 4 * square
        return [self._next_edge[mv][f] for mv in MOVES]

    def dump(self) -> str:
        """Debug listing: id, face, u, v, neighbour ids, edge ids."""
        lines = []
        for i, sq in enumerate(self.squares):
            nb = " ".join(str(x) for x in self.neighbours(i))
            ed = " ".join(str(x) for x in self.square_edges(i))
            lines.append(f"{i} {sq.face} {sq.u} {sq.v} | {nb} | {ed}")
        return "\n".join(lines) + "\n"

    # -- symmetry ---------------------------------------------------------

    @cached_property
    def rotation_group(self) -> RotationGroup:
        return _rotation_group(self)

    def apply_rigid(self, matrix: tuple[Vec, Vec, Vec]) -> tuple[int, ...]:
        """Flag permutation induced by a signed permutation matrix about the box centre."""
        ext = self._extent
        ctr = (ext[0] // 2, ext[1] // 2, ext[2] // 2)

        def mul(v: Vec) -> Vec:
            return tuple(_dot(row, v) for row in matrix)  # type: ignore[return-value]

        perm = []
        for f in range(self.num_flags):
            sq = f // 4
            p = _add(mul(_add(self._centre[sq], ctr, -1)), ctr)
            sq2 = self._square_at[p]
            perm.append(self._flag_of[(sq2, mul(self._up[f]))])
        return tuple(perm)


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _rotation_group(surface: BoxSurface) -> RotationGroup:
    dims = surface.spec.dims
    elements = []
    for perm in itertools.permutations(range(3)):
        # row i picks source axis perm[i]; lengths must agree
        if any(dims[i] != dims[perm[i]] for i in range(3)):
            continue
        for signs in itertools.product((1, -1), repeat=3):
            m = tuple(
                tuple(signs[i] if j == perm[i] else 0 for j in range(3))
                for i in range(3)
            )
            if _det3(m) != 1:
                continue
            elements.append(surface.apply_rigid(m))
    ident = tuple(range(surface.num_flags))
    elements.sort(key=lambda g: (g != ident, g))
    return RotationGroup(tuple(elements))


@lru_cache(maxsize=64)
def build_surface(spec: BoxSpec) -> BoxSurface:
    """Cached surface for ``spec`` (surfaces are immutable once built)."""
    return BoxSurface(spec)


def rotation_group(spec: BoxSpec) -> RotationGroup:
    return build_surface(spec).rotation_group


def flag_automorphisms(surface: BoxSurface) -> list[tuple[int, ...]]:
    """All flag permutations commuting with ``transfer``, found by search.

    A commuting permutation is fixed by the image of flag 0, so each of the
    ``4f`` candidates is propagated through the transfer graph and kept if
    consistent.  Independent of the rigid-motion construction.
    """
    nf = surface.num_flags
    table = surface.transfer_table
    found = []
    for target in range(nf):
        img = [-1] * nf
        img[0] = target
        queue = deque([0])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for mv in MOVES:
                y, gy = table[mv][x], table[mv][img[x]]
                if img[y] == -1:
                    img[y] = gy
                    queue.append(y)
                elif img[y] != gy:
                    ok = False
                    break
        if ok and -1 not in img and len(set(img)) == nf:
            found.append(tuple(img))
    return found
