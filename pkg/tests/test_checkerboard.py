"""Checkerboard colorings, fat-graph extraction, Brunner labelings."""

import itertools

import pytest

from bridgecert.checkerboard import (
    brunner_labeling,
    checkerboard_color,
    extract_gamma,
    twisted_extractions,
)
from bridgecert.coxeter import rank, verify_labeling
from bridgecert.diagram import DiagramError, parse_pd
from bridgecert.families import pretzel, torus2, two_bridge
from bridgecert.fatgraph import faces as gamma_faces, gamma_dual, is_twisted
from bridgecert.wirtinger import omega


def test_checkerboard_color_trefoil(trefoil):
    first, second = checkerboard_color(trefoil)
    assert sorted((len(first), len(second))) == [2, 3]
    assert 0 not in first and 0 in second


def test_checkerboard_color_kink():
    a, b = checkerboard_color(parse_pd("X[1,2,2,1]"))
    assert sorted((len(a), len(b))) == [1, 2]


def test_extract_gamma_requires_reduced():
    kink = parse_pd("X[1,2,2,1]")
    with pytest.raises(DiagramError, match="reduced"):
        extract_gamma(kink, checkerboard_color(kink)[0])


def test_extract_gamma_trefoil_loop_side(trefoil):
    # shading the twist-region bigons collapses the chain to a single
    # band: one fat vertex carrying a loop of weight +-3
    results = {}
    for shaded in checkerboard_color(trefoil):
        ext = extract_gamma(trefoil, shaded)
        results[len(shaded)] = ext
    loop_side = results[3].graph
    assert loop_side.num_vertices == 1 and loop_side.num_edges == 1
    assert abs(loop_side.weights[0]) == 3
    # the other side keeps one unit band per crossing
    unit_side = results[2].graph
    assert unit_side.num_vertices == 2 and unit_side.num_edges == 3
    assert all(abs(w) == 1 for w in unit_side.weights)


def test_extract_gamma_pretzel_theta():
    d = pretzel((-2, 3, 5)).diagram
    thetas = []
    for shaded in checkerboard_color(d):
        ext = extract_gamma(d, shaded)
        if ext.graph.num_vertices == 2 and ext.graph.num_edges == 3:
            thetas.append(ext)
        else:
            # the other coloring keeps unit bands
            assert any(abs(w) == 1 for w in ext.graph.weights)
    assert len(thetas) == 1
    theta = thetas[0].graph
    assert sorted(theta.weights) == [-2, 3, 5]
    dual = gamma_dual(theta)
    assert dual.num_vertices == 3
    assert sorted(w for (_u, _v, w) in dual.edges) == [2, 3, 5]
    assert dual.is_simple()[0]
    assert is_twisted(theta)[0]


def test_twisted_reasons():
    d = pretzel((1, 2, 2)).diagram
    for ext, flag, reasons in twisted_extractions(d):
        assert not flag
        assert reasons


def test_hopf_is_twisted():
    d = torus2(2).diagram
    flags = [flag for (_e, flag, _r) in twisted_extractions(d)]
    assert any(flags)


def test_brunner_pretzel_relations():
    d = pretzel((-2, 3, 5)).diagram
    for ext, flag, _reasons in twisted_extractions(d):
        if not flag:
            continue
        graph, labeling = brunner_labeling(d, ext)
        assert rank(graph) == 3
        weights = sorted(m for (_s, _t, m) in graph.edges)
        assert weights == [2, 3, 5]
        ok, _ = verify_labeling(d, graph, labeling)
        assert ok


def test_brunner_negative_pretzel():
    d = pretzel((-2, -2, -2)).diagram
    done = False
    for ext, flag, _reasons in twisted_extractions(d):
        if flag:
            graph, labeling = brunner_labeling(d, ext)
            assert sorted(m for (_s, _t, m) in graph.edges) == [2, 2, 2]
            assert verify_labeling(d, graph, labeling)[0]
            done = True
    assert done


def test_brunner_rejects_untwisted(trefoil):
    for ext, flag, _reasons in twisted_extractions(trefoil):
        if not flag:
            with pytest.raises(ValueError, match="twisted"):
                brunner_labeling(trefoil, ext)


def test_brunner_trefoil_loop_gamma(trefoil):
    # the weight-3 loop extraction is twisted of rank 2
    for ext, flag, _reasons in twisted_extractions(trefoil):
        if flag:
            graph, labeling = brunner_labeling(trefoil, ext)
            assert rank(graph) == 2
            assert [m for (_s, _t, m) in graph.edges] == [3]
            assert verify_labeling(trefoil, graph, labeling)[0]


def test_gamma_weight_sum_and_euler():
    for d in (pretzel((2, 3, 4)).diagram, two_bridge(7, 3).diagram,
              torus2(4).diagram):
        for shaded in checkerboard_color(d):
            ext = extract_gamma(d, shaded)
            g = ext.graph
            assert sum(abs(w) for w in g.weights) == d.num_crossings
            dual = gamma_dual(g)
            assert g.num_vertices - g.num_edges + dual.num_vertices == 2
            assert len(dual.edges) == g.num_edges


def test_pretzel_corpus_rank_equals_regions_and_bounds():
    for coeffs in [(-2, 3, 5), (2, 2, 2), (3, -3, 4), (2, 2, 2, 2)]:
        d = pretzel(coeffs).diagram
        w = omega(d).omega
        found = False
        for ext, flag, _reasons in twisted_extractions(d):
            if not flag:
                continue
            found = True
            graph, labeling = brunner_labeling(d, ext)
            regions = len(gamma_faces(ext.graph))
            assert rank(graph) == regions == len(coeffs)
            assert rank(graph) <= w
        assert found
