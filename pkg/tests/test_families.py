"""Family generators: torus, pretzel, two-bridge, rational tangles."""

from fractions import Fraction

import pytest

from bridgecert.coxeter import rank, verify_labeling, word_equals
from bridgecert.diagram import is_reduced
from bridgecert.families import (
    FamilyError,
    continued_fraction,
    pretzel,
    rational_tangle,
    torus2,
    two_bridge,
)
from bridgecert.wirtinger import omega

from conftest import DihedralTable


def test_torus2_trefoil():
    fam = torus2(3)
    assert fam.diagram.num_crossings == 3
    assert fam.graph.edges == (("x", "y", 3),)
    assert verify_labeling(fam.diagram, fam.graph, fam.labeling)[0]


def test_torus2_hopf():
    fam = torus2(2)
    assert fam.diagram.num_crossings == 2
    assert fam.graph.edges == (("x", "y", 2),)
    assert verify_labeling(fam.diagram, fam.graph, fam.labeling)[0]


def test_torus2_errors():
    for n in (1, 0, -1):
        with pytest.raises(FamilyError):
            torus2(n)


def test_torus2_negative_mirror():
    fam = torus2(-5)
    assert fam.diagram.num_crossings == 5
    assert [r.signed_length for r in fam.diagram.twist_regions] == [-5]
    assert omega(fam.diagram).omega == 2


def test_pretzel_standard():
    fam = pretzel((-2, 3, 5))
    assert fam.diagram.num_crossings == 10
    assert rank(fam.graph) == 3
    assert sorted(m for (_s, _t, m) in fam.graph.edges) == [2, 3, 5]
    assert verify_labeling(fam.diagram, fam.graph, fam.labeling)[0]


def test_pretzel_all_two():
    fam = pretzel((2, 2, 2))
    assert sorted(m for (_s, _t, m) in fam.graph.edges) == [2, 2, 2]
    assert verify_labeling(fam.diagram, fam.graph, fam.labeling)[0]


def test_pretzel_below_two_no_labeling():
    fam = pretzel((1, 2, 2))
    assert fam.diagram.num_crossings == 5
    assert fam.graph is None and fam.labeling is None


def test_pretzel_errors():
    with pytest.raises(FamilyError):
        pretzel((2, 2))
    with pytest.raises(FamilyError):
        pretzel((2, 0, 2))


def test_pretzel_crossing_count_and_reduced():
    for coeffs in [(-2, 3, 5), (2, 2, 2), (4, -5, 3, 2)]:
        fam = pretzel(coeffs)
        assert fam.diagram.num_crossings == sum(abs(a) for a in coeffs)
        assert is_reduced(fam.diagram)[0]


def test_continued_fraction_convention():
    assert continued_fraction(3, 1) == [3]
    digits = continued_fraction(5, 3)
    value = Fraction(digits[-1])
    for t in reversed(digits[:-1]):
        value = t + 1 / value
    assert value == Fraction(5, 3)
    assert all(d != 0 for d in digits)
    digits = continued_fraction(7, -3)
    value = Fraction(digits[-1])
    for t in reversed(digits[:-1]):
        value = t + 1 / value
    assert value == Fraction(7, -3)


def test_two_bridge_trefoil():
    fam = two_bridge(3, 1)
    assert fam.diagram.num_crossings == 3
    assert fam.graph.edges == (("x", "y", 3),)
    assert verify_labeling(fam.diagram, fam.graph, fam.labeling)[0]


def test_two_bridge_figure_eight():
    fam = two_bridge(5, 3)
    assert fam.diagram.num_crossings == 4
    assert fam.graph.edges == (("x", "y", 5),)
    assert verify_labeling(fam.diagram, fam.graph, fam.labeling)[0]
    # independent sign-word oracle: the two-bridge group presentation
    # relation w x w^-1 = y with epsilon_i = (-1)^floor(i*beta/alpha)
    # holds in the dihedral quotient of order 2*alpha
    alpha, beta = 5, 3
    table = DihedralTable(alpha, "x", "y")
    word = []
    for i in range(1, alpha):
        word.append("x" if i % 2 == 1 else "y")
        # sign is irrelevant for involutions; the letter pattern is
        # x y x y ... of length alpha - 1
    w = tuple(word)
    lhs = table.evaluate(w + ("x",) + tuple(reversed(w)))
    assert lhs == table.evaluate(("y",))


def test_two_bridge_errors():
    with pytest.raises(FamilyError):
        two_bridge(4, 2)
    with pytest.raises(FamilyError):
        two_bridge(5, 5)
    with pytest.raises(FamilyError):
        two_bridge(5, 0)


def test_two_bridge_crossing_counts():
    for (a, b) in [(3, 1), (5, 3), (7, 3), (9, 5)]:
        fam = two_bridge(a, b)
        digits = continued_fraction(a, b)
        assert fam.diagram.num_crossings == sum(abs(t) for t in digits)
        assert is_reduced(fam.diagram)[0]


def test_two_bridge_relation_is_exactly_alpha():
    # (xy)^alpha = 1 and no smaller power vanishes, for alpha <= 9
    for (a, b) in [(3, 1), (5, 1), (5, 3), (7, 3), (9, 5), (9, 7)]:
        fam = two_bridge(a, b)
        g = fam.graph
        power = ("x", "y") * a
        assert word_equals(g, power, ())
        for j in range(1, a):
            assert not word_equals(g, ("x", "y") * j, ())


def test_rational_tangle_examples():
    tangle, labeling = rational_tangle([3])
    assert tangle.fraction == Fraction(3)
    assert labeling.boundary_pattern == ("x", "x", "y", "y")

    tangle, labeling = rational_tangle([2, 2])
    assert tangle.fraction == Fraction(5, 2)
    assert verify_labeling(tangle.diagram, labeling.graph, labeling.labeling)[0]

    with pytest.raises(FamilyError):
        rational_tangle([0])
    with pytest.raises(FamilyError):
        rational_tangle([])


def test_rational_tangle_crossing_count():
    tangle, _ = rational_tangle([2, 1, 3])
    assert tangle.diagram.num_crossings == 6
    assert tangle.fraction == 2 + Fraction(1, 1 + Fraction(1, 3))


def test_family_omegas():
    for n in range(2, 6):
        assert omega(torus2(n).diagram).omega == 2
    for (a, b) in [(3, 1), (5, 3)]:
        assert omega(two_bridge(a, b).diagram).omega == 2
    assert omega(pretzel((2, 2, 2, 2)).diagram).omega == 4
