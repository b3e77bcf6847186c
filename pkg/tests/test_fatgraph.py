"""Fat-vertex graphs: segments, coloring calculus, frak-G machinery."""

import random

import pytest

from bridgecert.fatgraph import (
    BuildScript,
    DualGraph,
    FatGraph,
    FatGraphError,
    canonical_code,
    constructive_coloring,
    decompose,
    enumerate_frak_g,
    faces,
    find_theta_or_cycle,
    gamma_dual,
    in_frak_g,
    is_twisted,
    isomorphic,
    num_segments,
    omega_fat,
    propagate_fat,
    replay_fat,
    segments,
    single_vertex,
    split_at_cut_vertices,
)

THETA = FatGraph(((0, 2, 4), (5, 3, 1)), (-2, 3, 5))
LOOP3 = FatGraph(((0, 1),), (3,))
SEGMENT = FatGraph(((0,), (1,)), (2,))
C4 = FatGraph(((0, 7), (1, 2), (3, 4), (5, 6)), (1, 1, 1, 1))
C5 = FatGraph(((0, 9), (1, 2), (3, 4), (5, 6), (7, 8)), (1,) * 5)
# planar K4: outer triangle 0-1-2 with vertex 3 inside
K4 = FatGraph(
    ((0, 4, 2), (1, 6, 8), (3, 10, 7), (9, 11, 5)),
    (1, 1, 1, 1, 1, 1),
)


def test_segment_counts():
    assert num_segments(single_vertex()) == 1
    assert num_segments(SEGMENT) == 3
    assert num_segments(THETA) == 9
    kinds = [s.kind for s in segments(THETA)]
    assert kinds.count("edge") == 3 and kinds.count("arc") == 6


def test_faces_and_euler():
    assert len(faces(single_vertex())) == 1
    assert len(faces(THETA)) == 3
    assert len(faces(LOOP3)) == 2
    assert len(faces(C4)) == 2
    assert len(faces(K4)) == 4


def test_invalid_rotation_rejected():
    with pytest.raises(FatGraphError):
        FatGraph(((0, 0, 1),), (1,))
    with pytest.raises(FatGraphError, match="nonzero"):
        FatGraph(((0, 1),), (0,))
    # genus-one rotation of the theta graph
    with pytest.raises(FatGraphError, match="sphere"):
        faces(FatGraph(((0, 2, 4), (1, 3, 5)), (1, 1, 1)))


def test_gamma_dual_examples():
    d = gamma_dual(THETA)
    assert d.num_vertices == 3
    assert sorted(w for (_u, _v, w) in d.edges) == [2, 3, 5]
    assert d.is_simple()[0]

    d0 = gamma_dual(single_vertex())
    assert d0.num_vertices == 1 and d0.edges == ()

    dseg = gamma_dual(SEGMENT)
    assert dseg.num_vertices == 1
    (u, v, w) = dseg.edges[0]
    assert u == v  # a loop: both sides of the edge see one region


def test_is_twisted():
    assert is_twisted(THETA)[0]
    flag, reasons = is_twisted(FatGraph(((0, 2, 4), (5, 3, 1)), (1, 3, 5)))
    assert not flag and any("full twist" in r for r in reasons)
    flag, reasons = is_twisted(SEGMENT)
    assert not flag and any("dual not simple" in r for r in reasons)


def test_propagate_fat_theta_one_vertex_arcs():
    # seeds: the three boundary arcs of one theta vertex color everything
    segs = segments(THETA)
    v0_arcs = [s.index for s in segs if s.kind == "arc" and s.owner[0] == 0]
    closure, order = propagate_fat(THETA, set(v0_arcs))
    assert closure == frozenset(range(num_segments(THETA)))
    # every non-edge segment seeded colors everything even faster
    arcs = [s.index for s in segs if s.kind == "arc"]
    assert propagate_fat(THETA, set(arcs))[0] == frozenset(range(9))


def test_propagate_fat_single_arc_stalls():
    segs = segments(SEGMENT)
    arc = next(s.index for s in segs if s.kind == "arc")
    closure, order = propagate_fat(SEGMENT, {arc})
    assert closure == frozenset({arc})


def test_omega_fat_values():
    assert omega_fat(single_vertex())[0] == 1
    assert omega_fat(THETA)[0] == 3
    # a 4-cycle colors from the two arcs of one vertex: its dual has
    # only two regions, matching the general dual-vertex upper bound
    assert omega_fat(C4)[0] == 2
    k, (seeds, order), _stats = omega_fat(THETA)
    assert replay_fat(THETA, seeds, order)


def test_in_frak_g():
    assert in_frak_g(THETA)[0]
    assert in_frak_g(single_vertex())[0]
    assert in_frak_g(LOOP3)[0]
    flag, reasons = in_frak_g(SEGMENT)
    assert not flag
    assert any("valency one" in r for r in reasons)
    assert any("cut edge" in r for r in reasons)
    # two triangles sharing one vertex: a cut vertex
    tri2 = FatGraph(
        ((0, 2, 6, 8), (1, 4), (3, 5), (7, 10), (9, 11)),
        (1,) * 6,
    )
    flag, reasons = in_frak_g(tri2)
    assert not flag and any("cut vertex" in r for r in reasons)


def test_find_theta_or_cycle():
    assert find_theta_or_cycle(C5)[0] == "cycle"
    assert len(find_theta_or_cycle(C5)[1]) == 5
    verdict = find_theta_or_cycle(THETA)
    assert verdict[0] == "theta"
    (_u, _w, paths) = verdict[1]
    assert [len(p[0]) for p in paths] == [1, 1, 1]
    verdict = find_theta_or_cycle(K4)
    assert verdict[0] == "theta"
    with pytest.raises(FatGraphError, match="loop"):
        find_theta_or_cycle(LOOP3)


def test_decompose_examples():
    assert decompose(single_vertex()).ops == ()
    assert decompose(LOOP3).summary() == ["add_loop"]
    summary = decompose(THETA).summary()
    assert len(summary) == 3
    assert sorted(summary) == ["add_edge", "add_loop", "subdivide"]


def test_decompose_replay_isomorphism():
    for g in (THETA, LOOP3, C4, C5, K4):
        script = decompose(g)
        assert isomorphic(script.replay(), g)


def test_decompose_requires_frak_g():
    with pytest.raises(FatGraphError, match="frak-G"):
        decompose(SEGMENT)


def test_constructive_coloring_counts():
    seeds, order = constructive_coloring(single_vertex())
    assert len(seeds) == 1
    seeds, order = constructive_coloring(THETA)
    assert len(seeds) == 3 and replay_fat(THETA, seeds, order)
    # theta with one edge subdivided still needs three seeds (Case A)
    sub = FatGraph(((0, 2, 4), (5, 3, 7), (1, 6)), (1, 1, 1, 1))
    assert len(faces(sub)) == 3
    seeds, order = constructive_coloring(sub)
    assert len(seeds) == 3 and replay_fat(sub, seeds, order)


def test_split_at_cut_vertices():
    assert split_at_cut_vertices(THETA) == [THETA] or isomorphic(
        split_at_cut_vertices(THETA)[0], THETA
    )
    double = FatGraph(((0, 2, 4, 6, 8, 10), (5, 3, 1), (11, 9, 7)), (1,) * 6)
    parts = split_at_cut_vertices(double)
    assert len(parts) == 2
    assert all(isomorphic(p, FatGraph(((0, 2, 4), (5, 3, 1)), (1, 1, 1))) for p in parts)
    # dual rank additivity: 3 + 3 - 1 = 5
    assert len(faces(double)) == 5
    assert sum(len(faces(p)) for p in parts) - (len(parts) - 1) == 5


def test_propagate_fat_confluent_random(seed=17):
    rng = random.Random(seed)
    graphs = list(enumerate_frak_g(4))
    for _ in range(100):
        g = rng.choice(graphs)
        nseg = num_segments(g)
        seeds = set(rng.sample(range(nseg), rng.randint(1, nseg)))
        reference = propagate_fat(g, seeds)[0]
        for trial in range(3):
            assert propagate_fat(g, seeds, rng=random.Random(trial))[0] == reference
        extra = set(rng.sample(range(nseg), rng.randint(0, nseg)))
        assert reference <= propagate_fat(g, seeds | extra)[0]


def test_json_round_trip():
    data = THETA.to_json()
    assert FatGraph.from_json(data) == THETA
