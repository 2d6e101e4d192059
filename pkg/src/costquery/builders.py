"""Tree builders: greedy, epsilon-approximate greedy, and prior rounding.

The greedy builder grows a query tree top-down, at every node asking the
question with the largest shrinkage-cost ratio with respect to the node's
conditional distribution, then recursing into every answer branch.  The
epsilon variant accepts any question whose ratio is within a (1 - epsilon)
factor of the best, which matters when a question bank is too large to scan
exactly.  Rounding lifts tiny prior masses to a cost-dependent floor so the
greedy guarantee no longer depends on the prior.

Builders are pure given an instance; ties are always broken toward the
earliest question in the bank, so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .instance import (
    Instance,
    InvalidInstanceError,
    TOL,
    VersionSpace,
    partition,
    require_valid,
    restrict,
)
from .measures import shrinkage
from .tree import CostReport, Internal, Leaf, Node, tree_cost

#: Accepts the list of qualifying (question position, ratio) pairs at a node
#: and returns the position to ask.  Hook for lazy or streaming question
#: providers; the default takes the earliest qualifier.
QuestionSelector = Callable[[list[tuple[int, float]]], int]


@dataclass(frozen=True)
class EpsilonPolicy:
    """Approximation slack for question selection, epsilon in [0, 1)."""

    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in [0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class RoundedPrior:
    """A prior with small masses lifted to the rounding floor.

    ``donor`` is the heavy hypothesis the lifted mass was taken from and
    ``bumped`` the indices that received it.
    """

    mass: tuple[float, ...]
    donor: int
    bumped: tuple[int, ...]
    threshold: float


def question_ratios(
    inst: Instance, s: VersionSpace, dist: Sequence[float]
) -> list[float | None]:
    """Shrinkage-cost ratio of every question on ``s`` under ``dist``.

    Questions constant on ``s`` (zero shrinkage) yield None: they can never
    be asked at this node.
    """
    ratios: list[float | None] = []
    for q in inst.questions:
        first = q.answers[s[0]]
        if all(q.answers[h] == first for h in s[1:]):
            ratios.append(None)
        else:
            ratios.append(shrinkage(s, dist, q).ratio)
    return ratios


def select_question(
    inst: Instance,
    s: VersionSpace,
    dist: Sequence[float],
    epsilon: float = 0.0,
    selector: QuestionSelector | None = None,
) -> int:
    """Position of the question to ask at version space ``s``.

    With epsilon 0 this is the argmax of the shrinkage-cost ratio; otherwise
    any question whose ratio reaches (1 - epsilon) times the maximum
    qualifies.  Qualification uses >= with a 1e-9 slack so the maximizer
    itself always qualifies, and the earliest qualifying question wins.
    """
    ratios = question_ratios(inst, s, dist)
    candidates = [(i, r) for i, r in enumerate(ratios) if r is not None]
    if not candidates:
        raise InvalidInstanceError(
            f"not identifiable under reached version space {s}: no question splits it"
        )
    best = max(r for _, r in candidates)
    threshold = (1.0 - epsilon) * best
    qualifiers = [(i, r) for i, r in candidates if r >= threshold - TOL]
    if selector is not None:
        return selector(qualifiers)
    return qualifiers[0][0]


def _build(
    inst: Instance,
    s: VersionSpace,
    epsilon: float,
    selector: QuestionSelector | None,
) -> Node:
    if len(s) == 1:
        return Leaf(s[0])
    dist = restrict(inst.prior.mass, s)
    pos = select_question(inst, s, dist, epsilon, selector)
    q = inst.questions[pos]
    children = {
        answer: _build(inst, block, epsilon, selector)
        for answer, block in partition(s, q).items()
    }
    return Internal(q.id, children)


def greedy_tree(inst: Instance) -> Node:
    """Materialize the greedy strategy as a full query tree.

    Every internal node's question maximizes the shrinkage-cost ratio for
    that node's conditional distribution; all answer branches are expanded,
    so the leaves are exactly the hypotheses.
    """
    require_valid(inst)
    return _build(inst, inst.full_space(), 0.0, None)


def epsilon_greedy_tree(
    inst: Instance,
    policy: EpsilonPolicy | float = 0.0,
    selector: QuestionSelector | None = None,
) -> Node:
    """Like :func:`greedy_tree` but any near-maximal question may be asked.

    With epsilon 0 (and the default selector) the output is identical to the
    greedy tree.
    """
    if not isinstance(policy, EpsilonPolicy):
        policy = EpsilonPolicy(float(policy))
    require_valid(inst)
    return _build(inst, inst.full_space(), policy.epsilon, selector)


def rounding_threshold(inst: Instance) -> float:
    """The mass floor c_min / (c_max * n^3) used by the rounding transform."""
    costs = [q.cost for q in inst.questions]
    return min(costs) / (max(costs) * inst.n**3)


def round_distribution(inst: Instance) -> RoundedPrior:
    """Lift every prior mass below the rounding threshold by the threshold.

    The added mass is debited from a single heavy hypothesis (mass at least
    1/n; we take the heaviest, ties to the lowest index).  The result sums
    to one and its minimum entry is at least the threshold.  Requires more
    than two hypotheses.
    """
    require_valid(inst)
    if inst.n <= 2:
        raise ValueError(f"rounding requires more than 2 hypotheses, got {inst.n}")
    t = rounding_threshold(inst)
    pi = list(inst.prior.mass)
    bumped = tuple(i for i, p in enumerate(pi) if p < t)
    donor = max(range(inst.n), key=lambda i: (pi[i], -i))
    # Pigeonhole: the maximum entry of a distribution is always >= 1/n.
    assert pi[donor] >= 1.0 / inst.n - TOL, "no donor with mass >= 1/n"
    for i in bumped:
        pi[i] += t
    pi[donor] -= t * len(bumped)
    return RoundedPrior(mass=tuple(pi), donor=donor, bumped=bumped, threshold=t)


def greedy_rounded_tree(inst: Instance) -> tuple[Node, CostReport]:
    """Greedy tree for the rounded prior, costed under the original prior."""
    rounded = round_distribution(inst)
    tree = greedy_tree(inst.with_prior(rounded.mass))
    return tree, tree_cost(tree, inst)
