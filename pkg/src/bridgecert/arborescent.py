"""Arborescent diagrams from weighted plane trees.

Each tree vertex is one twist region; regions alternate between
horizontal and vertical with the depth of the vertex, children are
composed side by side in plane order (horizontally below an even-depth
vertex, vertically below an odd-depth one), the vertex's own column is
appended last, and the root tangle is closed by joining its top and
bottom endpoint pairs.  Trees homeomorphic to an interval reproduce the
4-plat construction, so this extends the two-bridge family.

The seed schedule places one seed on the bottom closure strand and one
inside the rational tangle of every branch but the first, then checks
the resulting coloring by replay.  The Coxeter labeling maps those same
seed meridians to generators, fills every other strand through the
Wirtinger conjugation, infers the dihedral relation forced between each
pair of generators, and verifies the result; for trees that are neither
bipartite-with-even-weights nor star-like (a single branching point) no
labeling is attempted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coxeter import (
    CoxeterGraph,
    OrbitBudgetError,
    StrandLabeling,
    Word,
    reduce_word,
    verify_labeling,
)
from .diagram import Diagram
from .families import (
    FamilyError,
    PDBuilder,
    Tangle,
    close_numerator,
    east_twist,
    hsum,
    inf_tangle,
    south_twist,
    vsum,
    zero_tangle,
)
from .wirtinger import ColoringSequence, is_k_colorable, propagate, replay


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class PlaneTree:
    """A rooted plane tree with one integer weight per vertex.

    Children tuples fix the plane embedding.  The root doubles as the
    designated branching point of the diagram construction.
    """

    weights: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    root: int = 0

    def __post_init__(self):
        n = len(self.weights)
        if len(self.children) != n:
            raise TreeError("children list length must match vertex count")
        if not (0 <= self.root < n):
            raise TreeError("root out of range")
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for u in self.children[v]:
                if u in seen or not (0 <= u < n):
                    raise TreeError("children lists do not describe a tree")
                seen.add(u)
                stack.append(u)
        if len(seen) != n:
            raise TreeError("tree is not connected")

    @property
    def num_vertices(self) -> int:
        return len(self.weights)

    def parent(self, v: int) -> int | None:
        for p in range(self.num_vertices):
            if v in self.children[p]:
                return p
        return None

    def valency(self, v: int) -> int:
        return len(self.children[v]) + (0 if v == self.root else 1)

    def depth(self, v: int) -> int:
        d = 0
        while v != self.root:
            v = self.parent(v)
            d += 1
        return d

    def leaves(self) -> tuple[int, ...]:
        return tuple(
            v for v in range(self.num_vertices) if self.valency(v) <= 1
        )

    def leaf_count(self) -> int:
        # A single vertex plays the role of an interval: two leaves.
        return max(len(self.leaves()), 2) if self.num_vertices >= 1 else 0

    def branch_vertices(self) -> tuple[int, ...]:
        return tuple(
            v for v in range(self.num_vertices) if self.valency(v) >= 3
        )

    def to_json(self) -> dict:
        return {
            "version": 1,
            "weights": list(self.weights),
            "children": [list(c) for c in self.children],
            "root": self.root,
        }

    @staticmethod
    def from_json(data: dict) -> "PlaneTree":
        if data.get("version") != 1:
            raise TreeError("unsupported tree JSON version")
        return PlaneTree(
            tuple(data["weights"]),
            tuple(tuple(c) for c in data["children"]),
            data.get("root", 0),
        )


def validate_tree(tree: PlaneTree) -> tuple[bool, list[str]]:
    """Check the even nonzero weights and the bipartite condition: all
    vertices of valency at least three share one bipartition color."""
    reasons = []
    for v, w in enumerate(tree.weights):
        if w == 0:
            reasons.append("vertex %d has weight zero" % v)
        elif w % 2 != 0:
            reasons.append("vertex %d has odd weight %d" % (v, w))
    parities = {tree.depth(v) % 2 for v in tree.branch_vertices()}
    if len(parities) > 1:
        reasons.append("branch vertices lie in both bipartition classes")
    return (not reasons, reasons)


@dataclass(frozen=True)
class Branch:
    """A leaf-to-branching-point chain, leaf first, branch vertex
    excluded."""

    vertices: tuple[int, ...]


def branches(tree: PlaneTree) -> tuple[Branch, ...]:
    """One branch per leaf.  Path trees split at the root."""
    out = []
    branch_set = set(tree.branch_vertices())
    for leaf in tree.leaves():
        chain = [leaf]
        v = leaf
        while True:
            p = tree.parent(v)
            if p is None or p in branch_set:
                break
            if not branch_set and p == tree.root:
                break
            chain.append(p)
            v = p
        out.append(Branch(tuple(chain)))
    if tree.num_vertices == 1:
        out = [Branch((tree.root,)), Branch(())]
    return tuple(out)


@dataclass(frozen=True)
class ArborescentDiagram:
    tree: PlaneTree
    diagram: Diagram
    crossing_vertex: tuple[int, ...]  # tree vertex per crossing
    top_strand: int
    bottom_strand: int


def build_diagram(tree: PlaneTree) -> ArborescentDiagram:
    """The natural diagram of the tree: one twist region per vertex."""
    for v, w in enumerate(tree.weights):
        if w == 0:
            raise TreeError("vertex %d has weight zero" % v)
    b = PDBuilder()
    t = _subtree_tangle(b, tree, tree.root, 0)
    diagram, tags, marks = close_numerator(t)
    return ArborescentDiagram(
        tree=tree,
        diagram=diagram,
        crossing_vertex=tags,
        top_strand=diagram.strand_of_arc[marks[0]],
        bottom_strand=diagram.strand_of_arc[marks[1]],
    )


def _subtree_tangle(b: PDBuilder, tree: PlaneTree, v: int, depth: int) -> Tangle:
    parts = [
        _subtree_tangle(b, tree, u, depth + 1) for u in tree.children[v]
    ]
    w = tree.weights[v]
    if depth % 2 == 0:
        if not parts:
            return east_twist(zero_tangle(b), w, tag=v)
        t = parts[0]
        for p in parts[1:]:
            t = hsum(t, p)
        return east_twist(t, w, tag=v)
    if not parts:
        return south_twist(inf_tangle(b), w, tag=v)
    t = parts[0]
    for p in parts[1:]:
        t = vsum(t, p)
    return south_twist(t, w, tag=v)


def _branch_candidates(build: ArborescentDiagram, branch: Branch) -> list[int]:
    """Strands that dive under a crossing of the branch, innermost
    (leaf-end) columns first."""
    diagram = build.diagram
    tree = build.tree
    depth_order = {v: i for i, v in enumerate(branch.vertices)}
    ranked: list[tuple[int, int]] = []
    for ci, (i, j, _k) in enumerate(diagram.adjacency):
        v = build.crossing_vertex[ci]
        if v in depth_order:
            for s in (i, j):
                ranked.append((-depth_order[v], s))
    seen = []
    for _d, s in sorted(ranked):
        if s not in seen:
            seen.append(s)
    return seen


def _seed_sets(build: ArborescentDiagram):
    """Candidate seed sets: the bottom closure strand plus one strand in
    every branch but one, in a deterministic order.

    The top closure strand is offered as the first candidate of every
    branch; for interval-like trees this reproduces the two-bridge seed
    pair."""
    tree = build.tree
    diagram = build.diagram
    brs = branches(tree)
    n_branches = len(brs)
    if tree.num_vertices == 1 or n_branches < 2:
        yield (build.bottom_strand, build.top_strand)
        return
    cand = []
    for br in brs:
        own = _branch_candidates(build, br)
        cand.append([build.top_strand] + [s for s in own if s != build.top_strand])
    emitted: set[tuple[int, ...]] = set()
    for exempt in range(n_branches):
        lists = [cand[i] for i in range(n_branches) if i != exempt]
        for combo in itertools.product(*lists):
            seeds = {build.bottom_strand, *combo}
            if len(seeds) != len(combo) + 1:
                continue
            key = tuple(sorted(seeds))
            if key in emitted:
                continue
            emitted.add(key)
            yield key


def seed_schedule(build: ArborescentDiagram) -> ColoringSequence:
    """A replay-valid coloring sequence with one seed per leaf.

    One seed sits on the bottom closure strand and one inside the
    rational tangle of each added branch; the first such placement whose
    propagation colors the whole diagram is returned.  A few tree shapes
    defeat the structured placement, and then the exhaustive coloring
    search supplies a valid seed set of the same size.
    """
    diagram = build.diagram
    want = build.tree.leaf_count()
    everything = frozenset(range(diagram.num_strands))
    for seeds in _seed_sets(build):
        if len(seeds) != want:
            continue
        closure, moves = propagate(diagram, set(seeds))
        if closure == everything:
            seq = ColoringSequence(tuple(sorted(seeds)), tuple(moves))
            if not replay(diagram, seq):
                raise AssertionError("seed schedule failed replay")
            return seq
    seq = is_k_colorable(diagram, want)
    if seq is None:
        raise TreeError(
            "no admissible seed placement with %d seeds found" % want
        )
    return seq


def _cyclic_reduce(word: Word) -> Word:
    w = list(word)
    while len(w) >= 2 and w[0] == w[-1]:
        w = w[1:-1]
        # strands are involutions, so stripping equal ends conjugates
        out: list[str] = []
        for letter in w:
            if out and out[-1] == letter:
                out.pop()
            else:
                out.append(letter)
        w = out
    return tuple(w)


def _trace_cyclic_reduce(graph: CoxeterGraph, word: Word) -> Word:
    """Cyclically cancel equal letters whose cyclic gap consists of
    letters commuting with them.

    As a relation a word is only defined up to conjugation, so pairs may
    cancel around the wrap; conjugators interleaved with commuting
    letters are stripped this way.
    """
    from .coxeter import _commutes, _trace_dedup

    w = list(_trace_dedup(graph, word))
    changed = True
    while changed and w:
        changed = False
        n = len(w)
        for j in range(n):
            target = w[j]
            for step in range(1, n):
                k = (j - step) % n
                if w[k] == target:
                    if k < j:
                        rest = w[k + 1:j] + w[j + 1:] + w[:k]
                    else:
                        rest = w[j + 1:k]
                    w = list(_trace_dedup(graph, tuple(rest)))
                    changed = True
                    break
                if not _commutes(graph, w[k], target):
                    break
            if changed:
                break
    return tuple(w)


def _dihedral_shape(r: Word) -> tuple[str, str, int] | None:
    """Recognize (st)^m as a cyclic word; returns (s, t, m) or None."""
    if not r or len(r) % 2 != 0:
        return None
    s, t = r[0], r[1]
    if s == t:
        return None
    if any(letter not in (s, t) for letter in r):
        return None
    if any(r[p] != (s if p % 2 == 0 else t) for p in range(len(r))):
        return None
    return (s, t, len(r) // 2)


_MAX_TRIAL_WEIGHT = 8
_SOLVER_NODE_CAP = 4000


def _solve_weights(
    names: tuple[str, ...],
    constraints: list[Word],
    start: dict[tuple[str, str], int] | None = None,
) -> dict[tuple[str, str], int] | None:
    """Find edge weights making every constraint trivial.

    Dihedral-shaped constraints force a gcd refinement; other
    constraints are attacked by trying a small relation on one of their
    letter pairs, backtracking on failure.  The word problem for the
    candidate graph is the oracle throughout.
    """
    from math import gcd

    nodes = 0

    def reduce_all(weights, todo):
        graph = CoxeterGraph(
            names,
            tuple((s, t, m) for (s, t), m in sorted(weights.items())),
        )
        out = []
        for r in todo:
            rr = _trace_cyclic_reduce(graph, r)
            if rr:
                rr = _trace_cyclic_reduce(
                    graph, reduce_word(graph, rr, _INFER_ORBIT_BUDGET)
                )
            if rr:
                out.append(rr)
        out.sort(key=len)
        return out

    def search(weights, todo):
        nonlocal nodes
        nodes += 1
        if nodes > _SOLVER_NODE_CAP:
            return None
        try:
            todo = reduce_all(weights, todo)
        except OrbitBudgetError:
            return None
        # Forced refinements first.
        changed = True
        while changed and todo:
            changed = False
            for r in todo:
                shape = _dihedral_shape(r)
                if shape is None:
                    continue
                s, t, m = shape
                key = tuple(sorted((s, t)))
                new = gcd(weights.get(key, 0), m)
                if new < 2:
                    return None
                if weights.get(key) != new:
                    weights = dict(weights)
                    weights[key] = new
                    changed = True
            if changed:
                todo = reduce_all(weights, todo)
        if not todo:
            return weights
        # Branch on the shortest composite constraint.
        r = todo[0]
        letters = tuple(dict.fromkeys(r))
        for a in range(len(letters)):
            for b in range(a + 1, len(letters)):
                key = tuple(sorted((letters[a], letters[b])))
                if key in weights:
                    continue
                for m in range(2, _MAX_TRIAL_WEIGHT + 1):
                    trial = dict(weights)
                    trial[key] = m
                    graph = CoxeterGraph(
                        names,
                        tuple(
                            (s, t, w) for (s, t), w in sorted(trial.items())
                        ),
                    )
                    try:
                        shrunk = _trace_cyclic_reduce(graph, r)
                        if len(shrunk) >= len(r) and len(
                            reduce_word(graph, shrunk, _INFER_ORBIT_BUDGET)
                        ) >= len(r):
                            continue
                    except OrbitBudgetError:
                        continue
                    result = search(trial, todo)
                    if result is not None:
                        return result
        return None

    return search(dict(start or {}), [_cyclic_reduce(r) for r in constraints])


_INFER_ORBIT_BUDGET = 20_000


def _infer_relations(
    diagram: Diagram,
    seeds: dict[int, Word],
    names: tuple[str, ...],
    deadline: float | None = None,
) -> tuple[CoxeterGraph, StrandLabeling] | None:
    """Propagate seed generators and solve for edge weights under which
    every Wirtinger constraint dies.

    Relations are resolved as soon as a crossing exposes them, and all
    labels are re-reduced whenever the graph grows, so words stay short:
    constraints surface near the seeds before conjugation towers can
    build up.  Returns None when no Coxeter quotient fits this seed
    choice (or the time budget runs out).
    """
    import time
    from math import gcd

    weights: dict[tuple[str, str], int] = {}
    graph = CoxeterGraph(names, ())
    labels: dict[int, Word] = dict(seeds)
    checked: set[int] = set()
    composites: list[Word] = []

    def out_of_time() -> bool:
        return deadline is not None and time.monotonic() > deadline

    def rebuild(new_weights) -> None:
        nonlocal weights, graph, labels, checked, composites
        weights = new_weights
        graph = CoxeterGraph(
            names, tuple((s, t, m) for (s, t), m in sorted(weights.items()))
        )
        labels = {
            s: reduce_word(graph, w, _INFER_ORBIT_BUDGET)
            for s, w in labels.items()
        }
        checked = set()
        composites = []

    def absorb(r: Word) -> bool:
        """Fold one constraint into the weights; True if the graph grew."""
        r = _trace_cyclic_reduce(graph, r)
        if not r:
            return False
        shape = _dihedral_shape(r)
        if shape is None:
            composites.append(r)
            return False
        s, t, m = shape
        key = tuple(sorted((s, t)))
        new = gcd(weights.get(key, 0), m)
        if new < 2:
            raise _Degenerate()
        if weights.get(key) == new:
            return False
        rebuild({**weights, key: new})
        return True

    try:
        while True:
            if out_of_time():
                return None
            progress = False
            for ci, (i, j, k) in enumerate(diagram.adjacency):
                if k not in labels:
                    continue
                for (src, dst) in ((i, j), (j, i)):
                    if src in labels and dst not in labels:
                        labels[dst] = reduce_word(
                            graph,
                            labels[k] + labels[src] + labels[k],
                            _INFER_ORBIT_BUDGET,
                        )
                        progress = True
                if (
                    ci not in checked
                    and i in labels
                    and j in labels
                    and k in labels
                ):
                    r = reduce_word(
                        graph,
                        labels[k] + labels[i] + labels[k] + labels[j],
                        _INFER_ORBIT_BUDGET,
                    )
                    checked.add(ci)
                    if r and absorb(r):
                        progress = True
                        break
            if not progress:
                break
        if len(labels) != diagram.num_strands:
            return None
        if composites:
            solved = _solve_weights(names, composites, dict(weights))
            if solved is None:
                return None
            if solved != weights:
                rebuild(solved)
        graph = CoxeterGraph(
            names, tuple((s, t, m) for (s, t), m in sorted(weights.items()))
        )
        labeling = StrandLabeling(
            tuple(labels[s] for s in range(diagram.num_strands))
        )
        ok, _failures = verify_labeling(diagram, graph, labeling)
        if not ok:
            return None
        return graph, labeling
    except (OrbitBudgetError, _Degenerate):
        return None


class _Degenerate(Exception):
    pass


def coxeter_labeling(build: ArborescentDiagram) -> tuple[CoxeterGraph, StrandLabeling]:
    """A verified Coxeter labeling of rank equal to the leaf count.

    Requires the tree to be bipartite with even nonzero weights, or to
    have at most one branching point (where any nonzero weights work).
    """
    tree = build.tree
    ok, reasons = validate_tree(tree)
    if not ok and len(tree.branch_vertices()) > 1:
        raise TreeError(
            "tree does not admit the labeling construction: "
            + "; ".join(reasons)
        )
    diagram = build.diagram
    want = tree.leaf_count()
    names = _names(want)
    everything = frozenset(range(diagram.num_strands))
    tried: set[tuple[int, ...]] = set()
    candidates: list[tuple[tuple, tuple[int, ...]]] = []

    def consider(seeds):
        if len(seeds) != want or seeds in tried:
            return
        tried.add(seeds)
        closure, _moves = propagate(diagram, set(seeds))
        if closure != everything:
            return
        candidates.append((_seed_score(diagram, seeds, names), seeds))

    for seeds in _seed_sets(build):
        consider(seeds)
    for seeds in _coloring_seed_sets(diagram, want, cap=400):
        consider(seeds)

    # Cheapest-looking seed sets first: free-reduction already tells how
    # many constraints are plainly dihedral and how long the rest are.
    # Each attempt gets a slice of wall clock so one stubborn candidate
    # cannot starve the better-ranked ones behind it.
    import time

    candidates.sort()
    for budget in (5.0, 60.0):
        for _score, seeds in candidates:
            seed_words = {s: (names[i],) for i, s in enumerate(seeds)}
            result = _infer_relations(
                diagram, seed_words, names, deadline=time.monotonic() + budget
            )
            if result is not None:
                return result
    raise TreeError("no seed choice produced a verifiable Coxeter labeling")


def _seed_score(diagram: Diagram, seeds: tuple[int, ...], names) -> tuple:
    """Cheap badness estimate: propagate with free reduction only and
    measure the non-dihedral constraint mass."""
    from .coxeter import _dedup

    labels: dict[int, Word] = {s: (names[i],) for i, s in enumerate(seeds)}
    progress = True
    while progress:
        progress = False
        for (i, j, k) in diagram.adjacency:
            if k not in labels:
                continue
            for (src, dst) in ((i, j), (j, i)):
                if src in labels and dst not in labels:
                    labels[dst] = _dedup(labels[k] + labels[src] + labels[k])
                    progress = True
    composite = 0
    total = 0
    for (i, j, k) in diagram.adjacency:
        r = _cyclic_reduce(
            _dedup(labels[k] + labels[i] + labels[k] + labels[j])
        )
        if not r:
            continue
        total += len(r)
        if _dihedral_shape(r) is None:
            composite += 1
    return (composite, total)


def _coloring_seed_sets(diagram: Diagram, k: int, cap: int):
    """All k-subsets of strands whose closure colors the diagram, in
    lexicographic order, up to a cap."""
    from .wirtinger import _closure_fn

    n = diagram.num_strands
    close = _closure_fn(diagram)
    full = (1 << n) - 1
    found = 0

    def extend(closure_mask: int, chosen: list[int], start: int):
        nonlocal found
        if found >= cap:
            return
        if len(chosen) == k:
            if closure_mask == full:
                found += 1
                yield tuple(chosen)
            return
        for s in range(start, n - (k - len(chosen)) + 1):
            if closure_mask >> s & 1:
                continue
            yield from extend(
                close(closure_mask | (1 << s)), chosen + [s], s + 1
            )

    yield from extend(0, [], 0)


def _names(k: int) -> tuple[str, ...]:
    import string

    letters = string.ascii_lowercase
    if k <= len(letters):
        return tuple(letters[:k])
    return tuple("g%d" % i for i in range(k))
