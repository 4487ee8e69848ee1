import xml.etree.ElementTree as ET

import pytest

from boxfold.folding import count_foldings
from boxfold.geometry import BoxSpec
from boxfold.polyomino import from_text
from boxfold.render import render, render_ascii, render_svg

CROSS = from_text(".#.\n###\n.#.\n.#.")


def test_single_cell_ascii():
    assert render([(0, 0)], "ascii") == ["#\n"]
    assert render_ascii(CROSS) == ".#.\n###\n.#.\n.#.\n"


def test_cross_svg_has_five_creases():
    n, reps = count_foldings(CROSS, BoxSpec(1, 1, 1))
    (svg,) = render(CROSS, "svg", reps)
    assert svg.count('class="crease"') == 5
    assert svg.count('class="cell"') == 6
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_one_svg_per_folding():
    shape = from_text("##./.##/.#./##./.##/.#.")  # folds onto 1x1x2 in three ways
    n, reps = count_foldings(shape, BoxSpec(1, 1, 2))
    docs = render(shape, "svg", reps, title="three")
    assert n == 3 and len(docs) == 3
    assert len(set(docs)) == 3
    for doc in docs:
        ET.fromstring(doc)
    assert len(render(shape, "svg")) == 1  # no foldings: a bare outline


def test_svg_is_deterministic():
    reps = count_foldings(CROSS, BoxSpec(1, 1, 1))[1]
    assert render(CROSS, "svg", reps) == render(CROSS, "svg", reps)


def test_outline_segments():
    svg = render_svg([(0, 0), (1, 0)])
    assert svg.count('class="outline"') == 6
    assert svg.count('class="grid"') == 1


def test_unknown_format():
    with pytest.raises(ValueError):
        render(CROSS, "png")


def test_folding_must_match():
    reps = count_foldings(CROSS, BoxSpec(1, 1, 1))[1]
    with pytest.raises(ValueError):
        render_svg([(0, 0)], reps[0])
