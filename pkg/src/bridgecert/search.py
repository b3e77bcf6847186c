"""Exact minimum-seed-set search over bitmask closure operators.

Shared kernel for the Wirtinger number of a diagram and of a fat-vertex
graph.  Items are indexed 0..n-1 and represented as bits of a Python
int.  The caller supplies a monotone closure step; the engine finds the
smallest seed set whose closure covers a target mask, enumerating seed
tuples in lexicographic order with two admissible prunes:

* a new seed must lie outside the closure of the seeds before it, and
* (closure, last seed) states that already failed are not re-explored.

Neither prune can hide a witness at the minimal seed count, so the
first witness found is the lexicographically least minimal one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field


class BudgetExceeded(RuntimeError):
    """Search stopped by a node or wall-clock budget.

    Carries how far the search got: every seed count up to and including
    ``known_floor`` is exhausted, so the true answer is > known_floor.
    """

    def __init__(self, known_floor: int, stats: "SearchStats"):
        super().__init__(
            "search budget exhausted; minimum is unknown but > %d" % known_floor
        )
        self.known_floor = known_floor
        self.stats = stats


@dataclass
class SearchStats:
    subsets_examined: int = 0
    prunes: int = 0
    wall_time: float = field(default=0.0, repr=False)

    def to_json(self) -> dict:
        return {
            "subsets_examined": self.subsets_examined,
            "prunes": self.prunes,
        }


def min_seed_cover(
    n_items: int,
    close,
    *,
    candidates: int | None = None,
    target: int | None = None,
    max_k: int | None = None,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
):
    """Smallest seed set whose closure covers ``target``.

    ``close(mask)`` must return the closure of ``mask`` and be monotone
    (bigger input, bigger output).  ``candidates`` restricts which items
    may be chosen as seeds (default: all).  Returns
    ``(seeds, stats)`` with seeds a sorted tuple, or raises
    BudgetExceeded.  ``max_k`` bounds the search; if no cover with at
    most ``max_k`` seeds exists the result is ``(None, stats)``.
    """
    full = (1 << n_items) - 1
    if target is None:
        target = full
    if candidates is None:
        candidates = full
    cand_list = [i for i in range(n_items) if candidates >> i & 1]
    limit = max_k if max_k is not None else len(cand_list)
    stats = SearchStats()
    t0 = time.monotonic()
    deadline = t0 + budget_seconds if budget_seconds is not None else None

    def tick():
        stats.subsets_examined += 1
        if budget_nodes is not None and stats.subsets_examined > budget_nodes:
            raise BudgetExceeded(k - 1, stats)
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded(k - 1, stats)

    for k in range(1, limit + 1):
        failed: set[tuple[int, int, int]] = set()

        # Depth-first over ascending seed tuples; closure is extended
        # incrementally one seed at a time.  Failed states are keyed by
        # (closure, candidate index, seeds still available) -- all three
        # matter, since prefixes of different lengths can share a closure.
        def extend(closure: int, chosen: list[int], start: int) -> list[int] | None:
            if closure & target == target:
                return chosen
            if len(chosen) == k:
                return None
            remaining = k - len(chosen)
            for idx in range(start, len(cand_list)):
                if len(cand_list) - idx < remaining:
                    break
                s = cand_list[idx]
                if closure >> s & 1:
                    stats.prunes += 1
                    continue
                tick()
                new_closure = close(closure | (1 << s))
                key = (new_closure, idx, remaining - 1)
                if key in failed:
                    stats.prunes += 1
                    continue
                out = extend(new_closure, chosen + [s], idx + 1)
                if out is not None:
                    return out
                failed.add(key)
            return None

        try:
            result = extend(0, [], 0)
        finally:
            stats.wall_time = time.monotonic() - t0
        if result is not None:
            return tuple(result), stats
    return None, stats
