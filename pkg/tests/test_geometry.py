import pytest

from boxfold.geometry import (
    MOVES,
    BoxSpec,
    Direction,
    build_surface,
    flag_automorphisms,
    rotation_group,
)

SMALL_BOXES = [(1, 1, 1), (1, 1, 2), (1, 1, 5), (1, 2, 3), (1, 2, 4), (2, 2, 2), (1, 2, 6), (2, 2, 4)]
# every box with surface area at most 88
ALL_BOXES = sorted(
    {
        (a, b, c)
        for a in range(1, 10)
        for b in range(a, 45)
        for c in range(b, 45)
        if 2 * (a * b + a * c + b * c) <= 88
    }
)


def test_boxspec_sorts_and_validates():
    assert BoxSpec(4, 1, 2).dims == (1, 2, 4)
    assert BoxSpec.parse("4x2x1") == BoxSpec(1, 2, 4)
    with pytest.raises(ValueError):
        BoxSpec(0, 1, 1)
    with pytest.raises(ValueError):
        BoxSpec.parse("1x2")


@pytest.mark.parametrize("dims,squares,edges", [((1, 1, 1), 6, 12), ((1, 2, 4), 28, 56), ((1, 1, 2), 10, 20)])
def test_build_surface_counts(dims, squares, edges):
    s = build_surface(BoxSpec(*dims))
    assert s.area == squares == BoxSpec(*dims).surface_area()
    assert len(s.edges) == edges


def test_edge_incidences_by_enumeration():
    # handshake: each of the 4f square sides appears in exactly one edge
    s = build_surface(BoxSpec(1, 1, 2))
    sides = [inc for e in s.edges for inc in e.endpoints]
    assert len(sides) == 40 == len(set(sides))


def test_direction_algebra():
    for d in Direction:
        assert d.opposite().opposite() == d
        x = d
        for _ in range(4):
            x = x.rotate_left()
        assert x == d
        assert d.rotate_left().rotate_right() == d


@pytest.mark.parametrize("dims", ALL_BOXES)
def test_transfer_inverse_and_permutation(dims):
    s = build_surface(BoxSpec(*dims))
    nf = s.num_flags
    for mv in MOVES:
        images = [s.transfer(x, mv)[0] for x in range(nf)]
        assert sorted(images) == list(range(nf))
        for x in range(nf):
            y, e = s.transfer(x, mv)
            back, e2 = s.transfer(y, mv.opposite())
            assert back == x and e2 == e


@pytest.mark.parametrize("dims", ALL_BOXES)
def test_flag_transitivity_and_connectivity(dims):
    s = build_surface(BoxSpec(*dims))
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for mv in MOVES:
            y = s.transfer(x, mv)[0]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    assert len(seen) == s.num_flags


def test_cube_girth_cycle():
    s = build_surface(BoxSpec(1, 1, 1))
    for x in range(s.num_flags):
        y = x
        for _ in range(4):
            y = s.transfer(y, Direction.U)[0]
        assert y == x


@pytest.mark.parametrize("dims", [(2, 2, 4), (1, 2, 3), (3, 3, 3)])
def test_fat_boxes_have_distinct_neighbours(dims):
    s = build_surface(BoxSpec(*dims))
    for sq in range(s.area):
        assert len(set(s.neighbours(sq))) == 4
        assert len(set(s.square_edges(sq))) == 4


@pytest.mark.parametrize("dims", [(1, 1, 1), (1, 1, 5)])
def test_thin_boxes_edges_still_distinct(dims):
    # neighbours may coincide on 1x1 cross-sections but the four edges never do
    s = build_surface(BoxSpec(*dims))
    for sq in range(s.area):
        assert len(set(s.square_edges(sq))) == 4


@pytest.mark.parametrize("dims,order", [((1, 2, 4), 4), ((2, 2, 4), 8), ((1, 1, 1), 24), ((1, 1, 2), 8), ((2, 2, 2), 24)])
def test_rotation_group_order_matches_brute_force(dims, order):
    s = build_surface(BoxSpec(*dims))
    g = rotation_group(BoxSpec(*dims))
    assert len(g) == order
    assert set(g) == set(flag_automorphisms(s))
    assert g.elements[0] == tuple(range(s.num_flags))


@pytest.mark.parametrize("dims", ALL_BOXES)
def test_rotation_group_commutes_and_acts_freely(dims):
    s = build_surface(BoxSpec(*dims))
    g = s.rotation_group
    for el in g.elements[1:]:
        assert all(el[x] != x for x in range(s.num_flags))
    for el in g:
        for mv in MOVES:
            for x in range(s.num_flags):
                assert el[s.transfer(x, mv)[0]] == s.transfer(el[x], mv)[0]


def test_group_preserves_face_structure():
    s = build_surface(BoxSpec(1, 2, 4))
    folds = {e.id for e in s.edges if s.is_fold_edge(e.id)}
    for g in s.rotation_group:
        for x in range(s.num_flags):
            for mv in MOVES:
                e1 = s.transfer(x, mv)[1]
                e2 = s.transfer(g[x], mv)[1]
                assert (e1 in folds) == (e2 in folds)


def test_dump_lists_every_square():
    s = build_surface(BoxSpec(1, 1, 2))
    lines = s.dump().splitlines()
    assert len(lines) == 10
    assert lines[0].startswith("0 x- 0 0 |")
