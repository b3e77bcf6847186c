"""Shared test fixtures: small diagram zoo and independent oracles."""

from __future__ import annotations

import random

import pytest

from bridgecert.diagram import Diagram, parse_pd

# A verified planar PD code for the standard trefoil diagram (closure of
# a three-crossing twist column); derived by hand from the braid
# closure picture.
TREFOIL_PD = "X[1,5,2,4] X[5,3,6,2] X[3,1,4,6]"


@pytest.fixture
def trefoil() -> Diagram:
    return parse_pd(TREFOIL_PD)


def braid_closure_pd(word: list[int], strands: int) -> str:
    """PD code of a braid closure, for random-diagram tests.

    ``word`` lists generators: +i crosses strands i, i+1 with one sign,
    -i with the other.  The result must be a connected diagram to parse.
    """
    assert strands >= 2
    nxt = strands + 1
    labels = list(range(1, strands + 1))
    first = list(labels)
    tokens = []
    for letter in word:
        i = abs(letter) - 1
        a, b = labels[i], labels[i + 1]
        c, d = nxt, nxt + 1
        nxt += 2
        # crossing corners: nw=a, ne=b (inputs), sw=c, se=d (outputs);
        # counterclockwise rotation starting at the incoming under slot
        ends = {"nw": a, "ne": b, "sw": c, "se": d}
        order = (
            ("ne", "nw", "sw", "se") if letter > 0 else ("nw", "sw", "se", "ne")
        )
        tokens.append("X[%d,%d,%d,%d]" % tuple(ends[k] for k in order))
        labels[i], labels[i + 1] = c, d
    # close up: identify the final labels with the initial ones
    text = " ".join(tokens)
    for old, new in zip(labels, first):
        text = _relabel(text, old, new)
    return text


def _relabel(text: str, old: int, new: int) -> str:
    import re

    def sub(m):
        nums = [int(x) for x in m.group(1).split(",")]
        nums = [new if x == old else x for x in nums]
        return "X[%s]" % ",".join(str(x) for x in nums)

    return re.sub(r"X\[([0-9, ]+)\]", sub, text)


def random_braid_diagram(rng: random.Random) -> Diagram:
    """A random connected braid-closure diagram with 3..12 crossings."""
    while True:
        strands = rng.randint(2, 4)
        length = rng.randint(3, 12)
        word = []
        for _ in range(length):
            g = rng.randint(1, strands - 1)
            word.append(g if rng.random() < 0.5 else -g)
        # every adjacent pair must be used or the closure splits
        if strands > 2 and len({abs(w) for w in word}) < strands - 1:
            continue
        try:
            d = parse_pd(braid_closure_pd(word, strands))
        except Exception:
            continue
        # skip diagrams with a component that never dives under; the
        # strand calculus is about the generic case
        if d.num_strands != d.num_crossings:
            continue
        return d


class DihedralTable:
    """The dihedral group of order 2m as affine maps x -> s*x + c on Z_m.

    Generator a is x -> -x, generator b is x -> 1 - x; their product is
    x -> x + 1 of order exactly m.  Elements are stored as (s, c) pairs,
    which is faithful for every m >= 2, giving a multiplication-table
    oracle for the rank-2 Coxeter group that is independent of any
    rewriting.
    """

    def __init__(self, m: int, a: str = "a", b: str = "b"):
        self.m = m
        self.maps = {a: (-1, 0), b: (-1, 1)}

    def evaluate(self, word) -> tuple[int, int]:
        s, c = 1, 0
        for letter in word:
            # compose: apply the existing map first, then the letter
            ls, lc = self.maps[letter]
            s, c = ls * s, (ls * c + lc) % self.m
        return (s, c)

    def equal(self, u, v) -> bool:
        return self.evaluate(u) == self.evaluate(v)
