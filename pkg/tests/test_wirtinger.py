"""Coloring moves, closures, and the exact Wirtinger number."""

import random
from itertools import combinations

import pytest

from bridgecert.diagram import parse_pd
from bridgecert.families import pretzel
from bridgecert.search import BudgetExceeded
from bridgecert.wirtinger import (
    ColoringSequence,
    is_k_colorable,
    omega,
    propagate,
    replay,
)

from conftest import random_braid_diagram


def test_propagate_saturated(trefoil):
    closure, moves = propagate(trefoil, {0, 1, 2})
    assert closure == frozenset({0, 1, 2})
    assert moves == []


def test_propagate_single_seed_stalls(trefoil):
    # a coloring move needs a colored under-strand and a colored
    # over-strand, so a lone seed goes nowhere on the trefoil
    for s in range(3):
        closure, moves = propagate(trefoil, {s})
        assert closure == frozenset({s})


def test_propagate_two_seeds_fill(trefoil):
    closure, moves = propagate(trefoil, {0, 1})
    assert closure == frozenset({0, 1, 2})
    assert len(moves) == 1


def test_propagate_empty_rejected(trefoil):
    with pytest.raises(ValueError):
        propagate(trefoil, set())


def test_is_k_colorable_trefoil(trefoil):
    # brute-force oracle over singletons: no single seed works
    for s in range(3):
        assert propagate(trefoil, {s})[0] != frozenset(range(3))
    assert is_k_colorable(trefoil, 1) is None
    seq = is_k_colorable(trefoil, 2)
    assert seq is not None
    assert len(seq.seeds) == 2 and len(seq.moves) == 1
    assert replay(trefoil, seq)


def test_is_k_colorable_pretzel_two_seeds_fail():
    d = pretzel((-2, 3, 5)).diagram
    # independent oracle: exhaust all 2-subsets by propagation
    full = frozenset(range(d.num_strands))
    assert all(
        propagate(d, set(pair))[0] != full
        for pair in combinations(range(d.num_strands), 2)
    )
    assert is_k_colorable(d, 2) is None


def test_is_k_colorable_padding(trefoil):
    seq = is_k_colorable(trefoil, 3)
    assert seq is not None
    assert len(seq.seeds) == 3 and len(seq.moves) == 0
    assert replay(trefoil, seq)


def test_omega_values(trefoil):
    assert omega(parse_pd("X[1,2,2,1]")).omega == 1
    assert omega(trefoil).omega == 2
    assert omega(pretzel((-2, 3, 5)).diagram).omega == 3


def test_omega_certificate_replays(trefoil):
    for d in (trefoil, pretzel((2, 2, 2)).diagram):
        result = omega(d)
        assert replay(d, result.certificate)
        assert len(result.certificate.seeds) == result.omega


def test_omega_lexicographically_least(trefoil):
    result = omega(trefoil)
    k = result.omega
    full = frozenset(range(trefoil.num_strands))
    minimal = [
        seeds
        for seeds in combinations(range(trefoil.num_strands), k)
        if propagate(trefoil, set(seeds))[0] == full
    ]
    assert result.certificate.seeds == min(minimal)


def test_omega_relabel_invariance(seed=11):
    rng = random.Random(seed)
    for _ in range(8):
        d = random_braid_diagram(rng)
        base = omega(d).omega
        labels = sorted(d.arcs)
        shuffled = list(labels)
        rng.shuffle(shuffled)
        perm = dict(zip(labels, shuffled))
        crossings = list(d.crossings)
        rng.shuffle(crossings)
        relabeled = " ".join(
            "X[%d,%d,%d,%d]" % tuple(perm[s] for s in c.slots)
            for c in crossings
        )
        assert omega(parse_pd(relabeled)).omega == base


def test_monotonicity(seed=5):
    rng = random.Random(seed)
    for _ in range(20):
        d = random_braid_diagram(rng)
        n = d.num_strands
        a = set(rng.sample(range(n), rng.randint(1, n)))
        extra = set(rng.sample(range(n), rng.randint(0, n)))
        small = propagate(d, a)[0]
        big = propagate(d, a | extra)[0]
        assert small <= big


def test_confluence_random_orders(seed=2):
    rng = random.Random(seed)
    for _ in range(20):
        d = random_braid_diagram(rng)
        seeds = set(rng.sample(range(d.num_strands), 2))
        reference = propagate(d, seeds)[0]
        for trial in range(5):
            shuffled = propagate(d, seeds, rng=random.Random(trial))
            assert shuffled[0] == reference


def test_budget_exhaustion_distinct_from_failure():
    d = pretzel((2, 2, 2, 2)).diagram
    with pytest.raises(BudgetExceeded) as info:
        omega(d, budget_nodes=3)
    assert info.value.known_floor >= 0
    # an explicit max_k below the answer is also reported as a floor
    with pytest.raises(BudgetExceeded):
        omega(d, max_k=1)


def test_replay_rejects_bad_sequences(trefoil):
    good = omega(trefoil).certificate
    assert replay(trefoil, good)
    assert not replay(trefoil, ColoringSequence(good.seeds, ()))
    assert not replay(
        trefoil, ColoringSequence((0,), tuple((s, 0) for s in (1, 2)))
    )


def test_strand_count_cap():
    from bridgecert.wirtinger import MAX_STRANDS

    assert MAX_STRANDS == 64
