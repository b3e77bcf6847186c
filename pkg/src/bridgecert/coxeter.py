"""Coxeter groups over weighted graphs, and strand labelings by reflections.

A Coxeter graph here is a finite simple graph with integer edge weights
m >= 2; its group is generated by one involution per vertex with
(st)^m = 1 for each edge.  An *absent* edge means no relation at all
(the free product convention -- note this differs from the classical
Coxeter-diagram convention where a missing edge means commuting).

Words are tuples of generator names.  Equality is decided by rewriting:
delete adjacent equal letters, and search the orbit of braid moves
(st...)_m -> (ts...)_m for a deletable pair.  Both moves are length
non-increasing, so the search terminates; by Tits' solution of the word
problem it is also complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram
from .wirtinger import OmegaResult, replay

Word = tuple[str, ...]


class OrbitBudgetError(RuntimeError):
    """Braid-move orbit grew past the configured budget."""


@dataclass(frozen=True)
class CoxeterGraph:
    """Finite simple weighted graph presenting a Coxeter group."""

    generators: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]

    def __post_init__(self):
        seen = set(self.generators)
        if len(seen) != len(self.generators):
            raise ValueError("duplicate generators")
        pairs = set()
        norm = []
        for (s, t, m) in self.edges:
            if s not in seen or t not in seen:
                raise ValueError("edge endpoint not a generator: (%s, %s)" % (s, t))
            if s == t:
                raise ValueError("loops are not allowed in a Coxeter graph")
            if m < 2:
                raise ValueError("edge weights must be at least two")
            key = frozenset((s, t))
            if key in pairs:
                raise ValueError("parallel edge between %s and %s" % (s, t))
            pairs.add(key)
            norm.append(tuple(sorted((s, t))) + (m,))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def weight(self, s: str, t: str) -> int | None:
        """Edge weight between two generators, or None when unrelated."""
        a, b = sorted((s, t))
        for (x, y, m) in self.edges:
            if (x, y) == (a, b):
                return m
        return None

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "edges": [list(e) for e in self.edges],
        }

    @staticmethod
    def from_json(data: dict) -> "CoxeterGraph":
        return CoxeterGraph(
            tuple(data["generators"]),
            tuple((e[0], e[1], e[2]) for e in data["edges"]),
        )


def rank(graph: CoxeterGraph) -> int:
    """Rank of the Coxeter group: its vertex count.

    This equals the minimal number of reflections needed to generate,
    and it depends on the graph, not just the abstract group.
    """
    return len(graph.generators)


def _dedup(word: Word) -> Word:
    out: list[str] = []
    for letter in word:
        if out and out[-1] == letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def _commutes(graph: CoxeterGraph, s: str, t: str) -> bool:
    return s != t and graph.weight(s, t) == 2


def _commuting_pairs(graph: CoxeterGraph) -> frozenset[frozenset[str]]:
    return frozenset(
        frozenset((s, t)) for (s, t, m) in graph.edges if m == 2
    )


def _trace_canonical(graph: CoxeterGraph, word: Word) -> Word:
    """Lexicographically least member of the commutation class.

    Weight-2 relations let adjacent distinct letters swap; the greedy
    choice of the least currently-available letter computes the normal
    form of the word in the induced trace monoid.
    """
    pairs = _commuting_pairs(graph)
    if not pairs:
        return tuple(word)
    pending = list(word)
    out: list[str] = []
    while pending:
        best = None
        blockers: set[str] = set()
        for idx, letter in enumerate(pending):
            if all(frozenset((b, letter)) in pairs for b in blockers):
                if best is None or letter < pending[best]:
                    best = idx
            blockers.add(letter)
        out.append(pending.pop(best))
    return tuple(out)


def _trace_dedup(graph: CoxeterGraph, word: Word) -> Word:
    """Delete equal pairs whose interlopers all commute with them."""
    pairs = _commuting_pairs(graph)
    w = list(_dedup(word))
    if not pairs:
        return tuple(w)
    changed = True
    while changed:
        changed = False
        j = 1
        while j < len(w):
            target = w[j]
            ok = None
            for k in range(j - 1, -1, -1):
                if w[k] == target:
                    ok = k
                    break
                if frozenset((w[k], target)) not in pairs:
                    break
            if ok is not None:
                del w[j]
                del w[ok]
                w = list(_dedup(tuple(w)))
                changed = True
                j = 1
            else:
                j += 1
    return tuple(w)


def _braid_images(graph: CoxeterGraph, word: Word):
    """Braid-move neighbours, including separated windows.

    A relation (st)^m applies to an alternating run of s, t letters even
    when other letters sit between them, provided each such interloper
    can commute out of the way: past every pattern letter on its left,
    or past every one on its right.  The interlopers are emitted on the
    side they exit from, preserving their relative order, which realizes
    the move by legal commutations only.
    """
    n = len(word)
    for (s, t, m) in graph.edges:
        if m == 2 or m > n:
            continue  # weight-2 moves are the trace structure itself
        positions = [p for p in range(n) if word[p] in (s, t)]
        if len(positions) < m:
            continue
        for start in range(len(positions) - m + 1):
            run = positions[start:start + m]
            letters = [word[p] for p in run]
            if any(letters[i] == letters[i + 1] for i in range(m - 1)):
                continue
            exits = _interloper_exits(graph, word, run)
            if exits is None:
                continue
            left, right = exits
            flipped = [(t if x == s else s) for x in letters]
            middle = (
                tuple(left) + tuple(flipped) + tuple(right)
            )
            yield word[:run[0]] + middle + word[run[-1] + 1:]


def _interloper_exits(graph, word, run):
    """Partition the letters between pattern positions into those that
    exit left and those that exit right, or None if one is stuck."""
    left: list[str] = []
    right: list[str] = []
    for gap in range(len(run) - 1):
        for p in range(run[gap] + 1, run[gap + 1]):
            u = word[p]
            crosses_left = {word[q] for q in run[: gap + 1]}
            crosses_right = {word[q] for q in run[gap + 1:]}
            if all(_commutes(graph, u, x) for x in crosses_left):
                left.append(u)
            elif all(_commutes(graph, u, x) for x in crosses_right):
                right.append(u)
            else:
                return None
    return left, right


_reduce_cache: dict[tuple[CoxeterGraph, Word], Word] = {}


def reduce_word(graph: CoxeterGraph, word: Word, orbit_budget: int = 100_000) -> Word:
    """A canonical geodesic representative of the word's group element.

    Words are normalized to commutation-class representatives; the
    search then explores braid-move neighbours of those classes looking
    for a deletable pair, which by Tits' solution of the word problem
    finds one exactly when the word is not reduced.  The result is the
    least representative of the final orbit, a complete invariant of
    the group element.
    """
    for letter in word:
        if letter not in graph.generators:
            raise ValueError("letter %r is not a generator" % (letter,))
    key = (graph, tuple(word))
    cached = _reduce_cache.get(key)
    if cached is not None:
        return cached

    w = _trace_canonical(graph, _trace_dedup(graph, tuple(word)))
    while True:
        if not w:
            result: Word = ()
            break
        seen = {w}
        queue = [w]
        shortened = None
        while queue:
            x = queue.pop()
            for raw in _braid_images(graph, x):
                d = _trace_dedup(graph, raw)
                if len(d) < len(raw):
                    shortened = d
                    break
                y = _trace_canonical(graph, raw)
                if y in seen:
                    continue
                seen.add(y)
                queue.append(y)
                if len(seen) > orbit_budget:
                    raise OrbitBudgetError(
                        "braid orbit exceeded %d words" % orbit_budget
                    )
            if shortened is not None:
                break
        if shortened is None:
            result = min(seen)
            break
        w = _trace_canonical(graph, _trace_dedup(graph, shortened))

    _reduce_cache[key] = result
    return result


def word_equals(
    graph: CoxeterGraph, u: Word, v: Word, orbit_budget: int = 100_000
) -> bool:
    """Decide u = v in the group; generators are involutions, so the
    inverse of a word is its reversal."""
    return reduce_word(graph, tuple(u) + tuple(reversed(v)), orbit_budget) == ()


def is_involution(graph: CoxeterGraph, w: Word) -> bool:
    return word_equals(graph, tuple(w) + tuple(w), ())


def dihedral_propagate(a: str, b: str, crossings: int, m: int) -> list[Word]:
    """Strand labels along a 2-braid twist region in the dihedral group.

    Starting from the pair (a, b), each crossing replaces the strand
    that goes under by its conjugate under the over-strand.  Returns the
    crossings + 2 labels; after m crossings the top pair equals (a, b)
    again, which is exactly the relation (ab)^m = 1.
    """
    if crossings < 0:
        raise ValueError("crossing count must be nonnegative")
    graph = CoxeterGraph((a, b), ((a, b, m),)) if a != b else None
    if graph is None:
        raise ValueError("generators must be distinct")
    labels: list[Word] = [(a,), (b,)]
    for _ in range(crossings):
        over = labels[-1]
        under = labels[-2]
        labels.append(reduce_word(graph, over + under + over))
    return labels


@dataclass(frozen=True)
class StrandLabeling:
    """Map from strand ids to reflection words."""

    labels: tuple[Word, ...]

    def __getitem__(self, strand: int) -> Word:
        return self.labels[strand]

    def __len__(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        return {"labels": [list(w) for w in self.labels]}

    @staticmethod
    def from_json(data: dict) -> "StrandLabeling":
        return StrandLabeling(tuple(tuple(w) for w in data["labels"]))


def verify_labeling(
    diagram: Diagram, graph: CoxeterGraph, labeling: StrandLabeling
) -> tuple[bool, list[dict]]:
    """Check a strand labeling against every Wirtinger relation.

    Requires every strand labeled by an involution, the conjugation
    w_over w_under w_over = w_other to hold at each crossing, and every
    generator to occur verbatim as some strand's (reduced) label, which
    certifies surjectivity.
    """
    failures: list[dict] = []
    if len(labeling) != diagram.num_strands:
        raise ValueError(
            "labeling has %d entries for %d strands"
            % (len(labeling), diagram.num_strands)
        )
    reduced = []
    for s in range(diagram.num_strands):
        w = labeling[s]
        if not w:
            raise ValueError("strand %d is unlabeled" % s)
        r = reduce_word(graph, w)
        if not word_equals(graph, r + r, ()):
            raise ValueError("label of strand %d is not an involution" % s)
        reduced.append(r)
    for ci, (i, j, k) in enumerate(diagram.adjacency):
        conj = reduce_word(graph, reduced[k] + reduced[i] + reduced[k])
        if conj != reduced[j]:
            failures.append(
                {"crossing": ci, "under": [i, j], "over": k, "kind": "conjugation"}
            )
    bare = {r[0] for r in reduced if len(r) == 1}
    for g in graph.generators:
        if g not in bare:
            failures.append({"generator": g, "kind": "not surjective"})
    return (not failures, failures)


@dataclass(frozen=True)
class Certificate:
    """A replayable bundle: omega value, verified labeling, conclusion.

    The conclusion (bridge number = meridional rank = value) is present
    exactly when the labeling verifies and the Coxeter rank matches the
    computed Wirtinger number.
    """

    omega: int
    coxeter_rank: int
    labeling_verified: bool
    conclusion: int | None
    graph: CoxeterGraph
    labeling: StrandLabeling
    omega_result: OmegaResult
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "omega": self.omega,
            "coxeter_rank": self.coxeter_rank,
            "labeling_verified": self.labeling_verified,
            "conclusion": self.conclusion,
            "coxeter_graph": self.graph.to_json(),
            "labeling": self.labeling.to_json(),
            "omega_result": self.omega_result.to_json(),
            "notes": list(self.notes),
        }


def certify(
    diagram: Diagram,
    graph: CoxeterGraph,
    labeling: StrandLabeling,
    omega_result: OmegaResult,
    notes: tuple[str, ...] = (),
) -> Certificate:
    """Combine the two bounds into a certificate.

    omega(D) >= bridge >= meridional rank >= rank(C) for any verified
    labeling, so rank(C) = omega(D) pins both invariants to that value.
    """
    if not replay(diagram, omega_result.certificate):
        raise ValueError("omega certificate does not replay on this diagram")
    ok, failures = verify_labeling(diagram, graph, labeling)
    r = rank(graph)
    conclusion = None
    if ok and r == omega_result.omega:
        conclusion = r
    elif not ok:
        notes = notes + ("labeling verification failed",)
    else:
        notes = notes + (
            "rank %d below omega %d; no conclusion" % (r, omega_result.omega),
        )
    return Certificate(
        omega=omega_result.omega,
        coxeter_rank=r,
        labeling_verified=ok,
        conclusion=conclusion,
        graph=graph,
        labeling=labeling,
        omega_result=omega_result,
        notes=notes,
    )
