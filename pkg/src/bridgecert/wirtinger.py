"""Coloring moves on diagram strands and the exact Wirtinger number.

A partial coloring is a set of strands.  At a crossing whose
under-strands are i, j and whose over-strand is k, a colored i together
with a colored k lets us color j.  The Wirtinger number of a diagram is
the least number of seed strands from which these moves color
everything; it bounds the bridge number of the underlying link from
above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .diagram import Diagram
from .search import BudgetExceeded, SearchStats, min_seed_cover

MAX_STRANDS = 64


@dataclass(frozen=True)
class ColoringSequence:
    """Seeds plus one (strand, crossing) coloring move per other strand."""

    seeds: tuple[int, ...]
    moves: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"seeds": list(self.seeds), "moves": [list(m) for m in self.moves]}

    @staticmethod
    def from_json(data: dict) -> "ColoringSequence":
        return ColoringSequence(
            tuple(data["seeds"]), tuple((m[0], m[1]) for m in data["moves"])
        )


@dataclass(frozen=True)
class OmegaResult:
    omega: int
    certificate: ColoringSequence
    stats: SearchStats = field(compare=False)

    def to_json(self) -> dict:
        return {
            "omega": self.omega,
            "certificate": self.certificate.to_json(),
            "search": self.stats.to_json(),
        }


def _check_width(diagram: Diagram) -> None:
    if diagram.num_strands > MAX_STRANDS:
        raise ValueError(
            "diagram has %d strands; this build handles at most %d"
            % (diagram.num_strands, MAX_STRANDS)
        )


def _closure_fn(diagram: Diagram):
    """Bitmask closure under the coloring move, as a reusable callable."""
    triples = diagram.adjacency
    by_strand: dict[int, list[tuple[int, int, int]]] = {}
    for (i, j, k) in triples:
        for s in {i, j, k}:
            by_strand.setdefault(s, []).append((i, j, k))

    def close(mask: int) -> int:
        frontier = [s for s in by_strand if mask >> s & 1]
        while frontier:
            s = frontier.pop()
            for (i, j, k) in by_strand.get(s, ()):
                if not (mask >> k & 1):
                    continue
                bi, bj = mask >> i & 1, mask >> j & 1
                if bi and not bj:
                    mask |= 1 << j
                    frontier.append(j)
                elif bj and not bi:
                    mask |= 1 << i
                    frontier.append(i)
        return mask

    return close


def propagate(
    diagram: Diagram,
    colored: set[int] | frozenset[int],
    rng: random.Random | None = None,
) -> tuple[frozenset[int], list[tuple[int, int]]]:
    """Closure of a partial coloring, with one witness move order.

    The closure itself is independent of exploration order; passing an
    ``rng`` shuffles which admissible move fires next and only affects
    the returned move list.
    """
    if not colored:
        raise ValueError("partial coloring must be nonempty")
    for s in colored:
        if not (0 <= s < diagram.num_strands):
            raise ValueError("unknown strand id %d" % s)
    mask = set(colored)
    moves: list[tuple[int, int]] = []
    pending = list(range(diagram.num_crossings))
    progress = True
    while progress:
        progress = False
        if rng is not None:
            rng.shuffle(pending)
        for ci in pending:
            i, j, k = diagram.adjacency[ci]
            if k not in mask:
                continue
            if i in mask and j not in mask:
                mask.add(j)
                moves.append((j, ci))
                progress = True
            elif j in mask and i not in mask:
                mask.add(i)
                moves.append((i, ci))
                progress = True
    return frozenset(mask), moves


def replay(diagram: Diagram, seq: ColoringSequence) -> bool:
    """Independent move-by-move check of a coloring sequence.

    Verifies every move against its prefix coloring and that seeds plus
    moves cover each strand exactly once.
    """
    colored = set(seq.seeds)
    if not colored or len(colored) != len(seq.seeds):
        return False
    for (s, ci) in seq.moves:
        if s in colored or not (0 <= ci < diagram.num_crossings):
            return False
        i, j, k = diagram.adjacency[ci]
        if k not in colored:
            return False
        if (i == s and j in colored) or (j == s and i in colored):
            colored.add(s)
        else:
            return False
    return colored == set(range(diagram.num_strands))


def _sequence_from_seeds(diagram: Diagram, seeds: tuple[int, ...]) -> ColoringSequence:
    closure, moves = propagate(diagram, set(seeds))
    if closure != frozenset(range(diagram.num_strands)):
        raise AssertionError("seed set does not color the diagram")
    seq = ColoringSequence(tuple(sorted(seeds)), tuple(moves))
    if not replay(diagram, seq):
        raise AssertionError("constructed coloring sequence fails replay")
    return seq


def omega(
    diagram: Diagram,
    *,
    max_k: int | None = None,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
) -> OmegaResult:
    """The exact Wirtinger number, with a replayable certificate.

    Exhausts seed subsets in lexicographic order, so among minimal seed
    sets the lexicographically least is returned.  Budget exhaustion
    raises BudgetExceeded rather than returning a wrong answer.
    """
    _check_width(diagram)
    n = diagram.num_strands
    seeds, stats = min_seed_cover(
        n,
        _closure_fn(diagram),
        max_k=max_k,
        budget_nodes=budget_nodes,
        budget_seconds=budget_seconds,
    )
    if seeds is None:
        # Seeding every strand always colors the diagram, so this is
        # reachable only with an explicit max_k below the answer.
        raise BudgetExceeded(max_k or n, stats)
    result = OmegaResult(len(seeds), _sequence_from_seeds(diagram, seeds), stats)
    return result


def is_k_colorable(
    diagram: Diagram,
    k: int,
    *,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
) -> ColoringSequence | None:
    """A coloring sequence with exactly k seeds, if one exists.

    A diagram is k-colorable for every k between its Wirtinger number
    and its strand count, so the minimal witness is found first and then
    padded with extra seeds (dropping the moves they subsume).
    """
    _check_width(diagram)
    n = diagram.num_strands
    if not (1 <= k <= n):
        raise ValueError("k must be between 1 and the strand count")
    found, _stats = min_seed_cover(
        n,
        _closure_fn(diagram),
        max_k=k,
        budget_nodes=budget_nodes,
        budget_seconds=budget_seconds,
    )
    if found is None:
        return None
    seeds = set(found)
    for s in range(n):
        if len(seeds) == k:
            break
        seeds.add(s)
    closure, moves = propagate(diagram, seeds)
    assert closure == frozenset(range(n))
    seq = ColoringSequence(tuple(sorted(seeds)), tuple(moves))
    assert replay(diagram, seq)
    return seq
