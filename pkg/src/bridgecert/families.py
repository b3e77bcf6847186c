"""Generators for the standard link families, with their labelings.

Everything is built from one tangle toolkit: twist columns composed
horizontally or vertically, closed by joining the top pair and bottom
pair of endpoints.  Conventions, fixed here and used everywhere:

* A positive vertical (south) column has the under-strand entering each
  crossing at its north-east slot; a positive horizontal (east) column
  at its north-west slot.  Mirroring a column flips its sign, and the
  sign reported by twist-region detection agrees with the sign passed
  to the builders.
* A twist vector [t1, t2, ..., tr] denotes the rational tangle with
  fraction t1 + 1/(t2 + 1/(... + 1/tr)): the last entry is the
  innermost batch of twists, entries alternate horizontal/vertical, and
  the first entry is always horizontal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .coxeter import CoxeterGraph, StrandLabeling, Word, reduce_word, verify_labeling
from .diagram import Diagram, parse_pd


class FamilyError(ValueError):
    pass


_CORNER_ORDERS = {
    # counterclockwise rotation starting at the incoming-under corner
    "nw": ("nw", "sw", "se", "ne"),
    "sw": ("sw", "se", "ne", "nw"),
    "se": ("se", "ne", "nw", "sw"),
    "ne": ("ne", "nw", "sw", "se"),
}


class PDBuilder:
    """Accumulates crossings with union-find over arc labels."""

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.crossings: list[tuple[tuple[int, int, int, int], object]] = []
        self.counter = 0

    def fresh(self) -> int:
        self.counter += 1
        self.parent[self.counter] = self.counter
        return self.counter

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def crossing(self, ends: dict[str, int], under_in: str, tag=None) -> None:
        order = _CORNER_ORDERS[under_in]
        self.crossings.append((tuple(ends[c] for c in order), tag))

    def resolve(self, *marked: int):
        """Final arc labels 1..2n; returns (pd tokens, tags, marks)."""
        roots: dict[int, int] = {}
        counts: dict[int, int] = {}
        for slots, _tag in self.crossings:
            for lab in slots:
                r = self.find(lab)
                counts[r] = counts.get(r, 0) + 1
        bad = [r for r, c in counts.items() if c != 2]
        if bad:
            raise FamilyError("construction produced open or overfull arcs")
        nxt = 1
        tokens = []
        tags = []
        for slots, tag in self.crossings:
            out = []
            for lab in slots:
                r = self.find(lab)
                if r not in roots:
                    roots[r] = nxt
                    nxt += 1
                out.append(roots[r])
            tokens.append(tuple(out))
            tags.append(tag)
        marks = tuple(roots[self.find(x)] for x in marked)
        return tokens, tuple(tags), marks


@dataclass
class Tangle:
    """A 4-ended tangle under construction inside one PDBuilder."""

    builder: PDBuilder
    nw: int
    ne: int
    sw: int
    se: int
    fraction: Fraction | None  # None plays the role of infinity


def zero_tangle(b: PDBuilder) -> Tangle:
    top = b.fresh()
    bottom = b.fresh()
    return Tangle(b, top, top, bottom, bottom, Fraction(0))


def inf_tangle(b: PDBuilder) -> Tangle:
    left = b.fresh()
    right = b.fresh()
    return Tangle(b, left, right, left, right, None)


def east_twist(t: Tangle, w: int, tag=None) -> Tangle:
    """Append |w| horizontal crossings at the east side, sign of w."""
    b = t.builder
    ne, se = t.ne, t.se
    for _ in range(abs(w)):
        new_ne, new_se = b.fresh(), b.fresh()
        ends = {"nw": ne, "sw": se, "ne": new_ne, "se": new_se}
        b.crossing(ends, "nw" if w > 0 else "sw", tag)
        ne, se = new_ne, new_se
    if t.fraction is None:
        frac = Fraction(w) if w else None
    else:
        frac = t.fraction + w
    return Tangle(b, t.nw, ne, t.sw, se, frac)


def south_twist(t: Tangle, w: int, tag=None) -> Tangle:
    """Append |w| vertical crossings at the south side, sign of w.

    With this package's handedness conventions a positive vertical
    column acts on the tangle fraction as F -> 1/(1/F - w); realizing
    the classical expansion t + 1/F therefore uses a column of sign -t.
    """
    b = t.builder
    sw, se = t.sw, t.se
    for _ in range(abs(w)):
        new_sw, new_se = b.fresh(), b.fresh()
        ends = {"nw": sw, "ne": se, "sw": new_sw, "se": new_se}
        b.crossing(ends, "ne" if w > 0 else "nw", tag)
        sw, se = new_sw, new_se
    if t.fraction is None:
        frac = Fraction(-1, w) if w else None
    elif t.fraction == 0:
        frac = Fraction(0)
    else:
        frac = 1 / (1 / t.fraction - w)
    return Tangle(b, t.nw, t.ne, sw, se, frac)


def hsum(left: Tangle, right: Tangle) -> Tangle:
    b = left.builder
    b.union(left.ne, right.nw)
    b.union(left.se, right.sw)
    return Tangle(b, left.nw, right.ne, left.sw, right.se, None)


def vsum(top: Tangle, bottom: Tangle) -> Tangle:
    b = top.builder
    b.union(top.sw, bottom.nw)
    b.union(top.se, bottom.ne)
    return Tangle(b, top.nw, top.ne, bottom.sw, bottom.se, None)


def close_numerator(t: Tangle, *marked: int):
    """Join NW-NE and SW-SE; parse the resulting PD."""
    b = t.builder
    b.union(t.nw, t.ne)
    b.union(t.sw, t.se)
    tokens, tags, marks = b.resolve(t.nw, t.sw, *marked)
    text = " ".join("X[%d,%d,%d,%d]" % tok for tok in tokens)
    diagram = parse_pd(text)
    return diagram, tags, marks


def _propagate_labels(
    diagram: Diagram, graph: CoxeterGraph, seeds: dict[int, Word]
) -> StrandLabeling:
    """Fill a partial strand labeling through Wirtinger conjugation."""
    labels: dict[int, Word] = dict(seeds)
    progress = True
    while progress:
        progress = False
        for (i, j, k) in diagram.adjacency:
            if k not in labels:
                continue
            for (src, dst) in ((i, j), (j, i)):
                if src in labels and dst not in labels:
                    labels[dst] = reduce_word(
                        graph, labels[k] + labels[src] + labels[k]
                    )
                    progress = True
    if len(labels) != diagram.num_strands:
        raise FamilyError(
            "label propagation stalled at %d of %d strands"
            % (len(labels), diagram.num_strands)
        )
    return StrandLabeling(tuple(labels[s] for s in range(diagram.num_strands)))


@dataclass(frozen=True)
class LabeledFamilyDiagram:
    diagram: Diagram
    graph: CoxeterGraph | None
    labeling: StrandLabeling | None
    crossing_tags: tuple = ()


def torus2(n: int) -> LabeledFamilyDiagram:
    """The (2, n) torus link: closure of a horizontal |n|-twist column,
    with its dihedral labeling (xy)^|n| = 1."""
    if abs(n) < 2:
        raise FamilyError("torus2 requires |n| >= 2")
    b = PDBuilder()
    t = east_twist(zero_tangle(b), n, tag=0)
    diagram, tags, marks = close_numerator(t)
    top_strand = diagram.strand_of_arc[marks[0]]
    bottom_strand = diagram.strand_of_arc[marks[1]]
    graph = CoxeterGraph(("x", "y"), (("x", "y", abs(n)),))
    labeling = _propagate_labels(
        diagram, graph, {top_strand: ("x",), bottom_strand: ("y",)}
    )
    ok, failures = verify_labeling(diagram, graph, labeling)
    if not ok:
        raise FamilyError("torus labeling failed verification: %r" % failures[:3])
    return LabeledFamilyDiagram(diagram, graph, labeling, tags)


def _generator_names(k: int) -> list[str]:
    import string

    letters = string.ascii_lowercase
    if k <= len(letters):
        return list(letters[:k])
    return ["g%d" % i for i in range(k)]


def pretzel(coefficients: list[int] | tuple[int, ...]) -> LabeledFamilyDiagram:
    """The pretzel link P(a1, ..., ak): k vertical twist columns.

    When every |ai| >= 2 the cycle Coxeter graph on k generators with
    weights |a1|, ..., |ak| is returned together with a verified
    labeling; otherwise only the diagram is built.
    """
    a = tuple(coefficients)
    if len(a) < 3:
        raise FamilyError("pretzel requires at least three coefficients")
    if any(x == 0 for x in a):
        raise FamilyError("pretzel coefficients must be nonzero")
    k = len(a)
    b = PDBuilder()
    columns = []
    for i, w in enumerate(a):
        col = south_twist(inf_tangle(b), w, tag=i)
        columns.append(col)
    t = columns[0]
    junctions = []
    for col in columns[1:]:
        junctions.append(col.nw)
        t = hsum(t, col)
    diagram, tags, marks = close_numerator(t, *junctions)
    if any(abs(x) < 2 for x in a):
        return LabeledFamilyDiagram(diagram, None, None, tags)

    names = _generator_names(k)
    edges = tuple(
        (names[i], names[(i + 1) % k], abs(a[i])) for i in range(k)
    )
    graph = CoxeterGraph(tuple(names), edges)
    top_cap = diagram.strand_of_arc[marks[0]]
    seeds: dict[int, Word] = {top_cap: (names[0],)}
    for i, lab in enumerate(marks[2:]):
        seeds[diagram.strand_of_arc[lab]] = (names[i + 1],)
    labeling = _propagate_labels(diagram, graph, seeds)
    ok, failures = verify_labeling(diagram, graph, labeling)
    if not ok:
        raise FamilyError("pretzel labeling failed verification: %r" % failures[:3])
    return LabeledFamilyDiagram(diagram, graph, labeling, tags)


def continued_fraction(alpha: int, beta: int) -> list[int]:
    """Digits [t1, ..., tr] with alpha/beta = t1 + 1/(t2 + ...).

    All digits are nonzero; after the first, all are positive.
    """
    if beta == 0 or gcd(alpha, beta) != 1:
        raise FamilyError("alpha/beta must be a reduced fraction")
    x = Fraction(alpha, beta)
    digits: list[int] = []
    while True:
        if x.denominator == 1:
            digits.append(int(x))
            return digits
        t = x.numerator // x.denominator  # floor
        digits.append(t)
        x = 1 / (x - t)


def rational_tangle_diagram(twist_vector: list[int] | tuple[int, ...]):
    """Build the rational tangle of a twist vector inside a fresh builder.

    Returns the tangle; its fraction is checked against the convention.
    """
    vec = tuple(twist_vector)
    if not vec or any(t == 0 for t in vec):
        raise FamilyError("twist vector entries must be nonzero")
    b = PDBuilder()
    r = len(vec)
    t = zero_tangle(b) if r % 2 == 1 else inf_tangle(b)
    for i in range(r - 1, -1, -1):
        w = vec[i]
        if i % 2 == 0:  # positions 1, 3, ... (0-based even) are horizontal
            t = east_twist(t, w, tag=i)
        else:
            t = south_twist(t, -w, tag=i)
    expected = _vector_fraction(vec)
    if t.fraction != expected:
        raise AssertionError(
            "tangle fraction %s does not match vector value %s"
            % (t.fraction, expected)
        )
    return t


def _vector_fraction(vec: tuple[int, ...]) -> Fraction:
    x = Fraction(vec[-1])
    for t in reversed(vec[:-1]):
        x = t + 1 / x
    return x


@dataclass(frozen=True)
class RationalTangle:
    fraction: Fraction
    twist_vector: tuple[int, ...]
    diagram: Diagram  # the numerator closure, carrying the tangle
    crossing_tags: tuple
    boundary_strands: tuple[int, int, int, int]  # NW, NE, SE, SW strands

    def to_json(self) -> dict:
        return {
            "fraction": [self.fraction.numerator, self.fraction.denominator],
            "twist_vector": list(self.twist_vector),
            "closure_diagram": self.diagram.to_json(),
            "boundary_strands": list(self.boundary_strands),
        }


@dataclass(frozen=True)
class Rank2Labeling:
    """A rank-2 labeling of a rational tangle, realized on its closure.

    The four boundary corners read x, x, y, y cyclically because the
    closure arcs identify NW with NE and SW with SE.
    """

    graph: CoxeterGraph
    labeling: StrandLabeling
    boundary_pattern: tuple[str, str, str, str]  # NW, NE, SE, SW


def rational_tangle(twist_vector) -> tuple[RationalTangle, Rank2Labeling]:
    vec = tuple(twist_vector)
    t = rational_tangle_diagram(vec)
    nw, ne, se, sw = t.nw, t.ne, t.se, t.sw
    diagram, tags, marks = close_numerator(t, nw, ne, se, sw)
    boundary = tuple(diagram.strand_of_arc[m] for m in marks[2:])
    alpha = abs(t.fraction.numerator)
    graph = CoxeterGraph(("x", "y"), (("x", "y", alpha),)) if alpha >= 2 else (
        CoxeterGraph(("x", "y"), ())
    )
    top = diagram.strand_of_arc[marks[0]]
    bottom = diagram.strand_of_arc[marks[1]]
    labeling = _propagate_labels(diagram, graph, {top: ("x",), bottom: ("y",)})
    ok, failures = verify_labeling(diagram, graph, labeling)
    if not ok:
        raise FamilyError(
            "rational tangle labeling failed verification: %r" % failures[:3]
        )
    pattern = tuple(
        "x" if diagram.strand_of_arc[m] == top or labeling[diagram.strand_of_arc[m]] == ("x",) else "y"
        for m in marks[2:]
    )
    tangle = RationalTangle(t.fraction, vec, diagram, tags, boundary)
    return tangle, Rank2Labeling(graph, labeling, pattern)


def two_bridge(alpha: int, beta: int) -> LabeledFamilyDiagram:
    """The two-bridge link of fraction alpha/beta as a 4-plat, with its
    rank-2 labeling satisfying (xy)^alpha = 1."""
    if alpha < 2:
        raise FamilyError("alpha must be at least 2")
    if not (-alpha < beta < alpha) or beta == 0:
        raise FamilyError("beta must satisfy -alpha < beta < alpha, beta != 0")
    if gcd(alpha, beta) != 1:
        raise FamilyError("alpha and beta must be coprime")
    digits = continued_fraction(alpha, beta)
    t = rational_tangle_diagram(digits)
    assert abs(t.fraction) == Fraction(abs(alpha), abs(beta))
    diagram, tags, marks = close_numerator(t)
    graph = CoxeterGraph(("x", "y"), (("x", "y", alpha),))
    top = diagram.strand_of_arc[marks[0]]
    bottom = diagram.strand_of_arc[marks[1]]
    labeling = _propagate_labels(diagram, graph, {top: ("x",), bottom: ("y",)})
    ok, failures = verify_labeling(diagram, graph, labeling)
    if not ok:
        raise FamilyError(
            "two-bridge labeling failed verification: %r" % failures[:3]
        )
    return LabeledFamilyDiagram(diagram, graph, labeling, tags)
