"""Exact reference computations: optimal query trees, Huffman cost, entropy.

The optimal-tree search is an exhaustive memoized recursion over version
spaces.  A version space of {0..n-1} is held as a bitmask; for each question
the masks of hypotheses sharing an answer are precomputed, so partitioning a
version space is a handful of AND operations.  State count is at most 2^n,
which is why the solver enforces a size cap (default 14).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .instance import Instance, InvalidInstanceError, Prior, require_valid
from .tree import Internal, Leaf, Node

#: Largest hypothesis count the exact solver accepts by default.  The search
#: can touch every subset of the hypotheses, so growth is exponential.
DEFAULT_CAP = 14


class OracleCapError(ValueError):
    """Instance is too large for exhaustive search."""


@dataclass(frozen=True)
class OptimalResult:
    """An optimal tree, its expected cost, and how many subproblems were solved."""

    tree: Node
    cost: float
    subproblems_solved: int


def optimal_tree(
    inst: Instance, cap: int | None = None, prune: bool = False
) -> OptimalResult:
    """Minimum-expected-cost query tree by exhaustive memoized search.

    Recursion: a singleton costs nothing; otherwise take the best splitting
    question q of cost c, paying c plus the mass-weighted optimal costs of
    the answer blocks.  Ties go to the earliest question in the bank, so the
    returned tree is deterministic; only the cost is contractual.

    ``prune`` enables an admissible lower-bound cutoff (every non-singleton
    block still needs at least one question); it never changes the result
    and is off by default to keep the reference auditable.
    """
    require_valid(inst)
    cap = DEFAULT_CAP if cap is None else cap
    if inst.n > cap:
        raise OracleCapError(
            f"instance has {inst.n} hypotheses, above the exact-search cap {cap}"
        )

    weights = inst.prior.mass
    n = inst.n
    c_min = min(q.cost for q in inst.questions)
    # Per question: [(answer value, bitmask of hypotheses giving it), ...]
    answer_masks: list[list[tuple[int, int]]] = []
    for q in inst.questions:
        masks: dict[int, int] = {}
        for h, a in enumerate(q.answers):
            masks[a] = masks.get(a, 0) | (1 << h)
        answer_masks.append(sorted(masks.items()))

    mass_memo: dict[int, float] = {}

    def mass_of(s: int) -> float:
        cached = mass_memo.get(s)
        if cached is not None:
            return cached
        total = 0.0
        m = s
        while m:
            low = m & -m
            total += weights[low.bit_length() - 1]
            m ^= low
        mass_memo[s] = total
        return total

    # mask -> (optimal conditional cost, chosen question position or None)
    memo: dict[int, tuple[float, int | None]] = {}

    def solve(s: int) -> float:
        cached = memo.get(s)
        if cached is not None:
            return cached[0]
        if s & (s - 1) == 0:
            memo[s] = (0.0, None)
            return 0.0
        total = mass_of(s)
        best = math.inf
        best_q: int | None = None
        for pos, q in enumerate(inst.questions):
            blocks = [s & m for _, m in answer_masks[pos] if s & m]
            if len(blocks) < 2:
                continue
            cost = q.cost
            if prune:
                bound = cost + c_min * sum(
                    mass_of(b) for b in blocks if b & (b - 1)
                ) / total
                if bound >= best:
                    continue
            for b in blocks:
                cost += mass_of(b) / total * solve(b)
                # Partial sums only grow, so once past best this question
                # cannot win and the final comparison below stays safe.
                if prune and cost >= best:
                    break
            if cost < best - 1e-12:
                best = cost
                best_q = pos
        if best_q is None:
            raise InvalidInstanceError(
                f"no question splits version space mask {s:b}"
            )
        memo[s] = (best, best_q)
        return best

    full = (1 << n) - 1
    cost = solve(full)

    def rebuild(s: int) -> Node:
        _, pos = memo[s]
        if pos is None:
            return Leaf(s.bit_length() - 1)
        children = {
            a: rebuild(s & m) for a, m in answer_masks[pos] if s & m
        }
        return Internal(inst.questions[pos].id, children)

    return OptimalResult(tree=rebuild(full), cost=cost, subproblems_solved=len(memo))


def huffman_cost(prior: Prior | Sequence[float]) -> float:
    """Expected codeword length of an optimal binary prefix code.

    Equals the sum of the merged masses over the n-1 Huffman merges.  Ties
    merge the lowest-index symbols first; only the cost is contractual.
    """
    masses = list(prior.mass if isinstance(prior, Prior) else prior)
    if len(masses) < 2:
        raise ValueError("Huffman cost needs at least 2 symbols")
    heap = [(p, i) for i, p in enumerate(masses)]
    heapq.heapify(heap)
    order = len(masses)
    total = 0.0
    while len(heap) > 1:
        p1, _ = heapq.heappop(heap)
        p2, _ = heapq.heappop(heap)
        merged = p1 + p2
        total += merged
        heapq.heappush(heap, (merged, order))
        order += 1
    return total


def entropy(prior: Prior | Sequence[float]) -> float:
    """Shannon entropy in bits."""
    masses = prior.mass if isinstance(prior, Prior) else prior
    return -sum(p * math.log2(p) for p in masses if p > 0)
