import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxfold.polyomino import (
    Polyomino,
    canonical_form,
    enumerate_polyominoes,
    from_key,
    from_text,
    is_connected,
    normalize,
    to_text,
    variants,
)

L_TROMINO = from_text("#.\n##")


def fixed_polyominoes(n):
    """Redelmeier-free oracle: grow fixed (translation-only) polyominoes."""
    level = {frozenset({(0, 0)})}
    for _ in range(n - 1):
        nxt = set()
        for cells in level:
            for x, y in cells:
                for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if nb not in cells:
                        nxt.add(normalize(cells | {nb}))
        level = nxt
    return level


def random_polyomino(rng, n):
    cells = {(0, 0)}
    while len(cells) < n:
        x, y = rng.choice(sorted(cells))
        dx, dy = rng.choice([(1, 0), (-1, 0), (0, 1), (0, -1)])
        cells.add((x + dx, y + dy))
    return normalize(cells)


def test_single_cell_is_fully_symmetric():
    key = canonical_form([(0, 0)])
    assert key == "1x1:#"
    assert all(canonical_form(v) == key for v in variants([(0, 0)]))


def test_l_tromino_orbit_collapses():
    keys = {canonical_form(v) for v in variants(L_TROMINO)}
    assert len(keys) == 1
    assert len(set(variants(L_TROMINO))) == 4


def test_connectivity():
    assert is_connected({(0, 0), (1, 0)})
    assert not is_connected({(0, 0), (1, 1)})
    assert not is_connected(set())


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 5), (5, 12), (6, 35), (7, 108)])
def test_free_counts(n, count):
    keys = list(enumerate_polyominoes(n))
    assert len(keys) == count == len(set(keys))


def test_area6_matches_fixed_oracle():
    oracle = {canonical_form(c) for c in fixed_polyominoes(6)}
    assert len(fixed_polyominoes(6)) == 216
    assert oracle == set(enumerate_polyominoes(6))


def test_enumeration_order_independent_of_growth():
    # a second ordering: grow fixed shapes, quotient afterwards
    assert {canonical_form(c) for c in fixed_polyominoes(8)} == set(enumerate_polyominoes(8))


def test_enumerated_shapes_are_connected_with_right_area():
    for key in enumerate_polyominoes(7):
        cells = from_key(key)
        assert len(cells) == 7 and is_connected(cells)
        assert canonical_form(cells) == key


def test_area_bounds():
    with pytest.raises(ValueError):
        list(enumerate_polyominoes(0))
    with pytest.raises(ValueError):
        list(enumerate_polyominoes(13))


def test_text_round_trip():
    p = Polyomino.from_text(".#.\n###\n.#.\n.#.")
    assert to_text(p.cells) == ".#.\n###\n.#.\n.#."
    assert Polyomino.from_key(p.canonical_form()).canonical_form() == p.canonical_form()
    with pytest.raises(ValueError):
        Polyomino.from_text("#.\n.#")
    with pytest.raises(ValueError):
        from_text("#x")


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10**6))
def test_canonical_form_invariant_and_idempotent(n, seed):
    cells = random_polyomino(random.Random(seed), n)
    key = canonical_form(cells)
    for v in variants(cells):
        assert canonical_form(v) == key
    assert canonical_form(from_key(key)) == key
    # translation does not matter either
    assert canonical_form({(x + 3, y - 7) for x, y in cells}) == key
