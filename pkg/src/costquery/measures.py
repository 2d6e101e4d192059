"""Selection criteria and analytical quantities for version spaces.

The central quantity is the *shrinkage* of a question on a version space:
the expected amount of measure that asking the question removes.  For a
version space S, measure pi, and question q inducing blocks S^j,

    shrinkage = pi(S) - sum_j pi(S^j)^2 / pi(S)

which equals zero exactly when q is constant on S.  Dividing by the
question's cost gives the shrinkage-cost ratio, the greedy selection score.
All functions here are pure and stateless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .instance import Question, VersionSpace, mass, partition


@dataclass(frozen=True)
class ShrinkageValue:
    """Shrinkage of one question on one version space, absolute and per cost."""

    delta: float
    ratio: float


def shrinkage(s: VersionSpace, pi: Sequence[float], q: Question) -> ShrinkageValue:
    """Expected measure removed from ``s`` by asking ``q``, under measure ``pi``.

    ``pi`` need not be normalized; the quantity is defined for any measure
    with positive mass on ``s``.  Only entries of ``pi`` indexed by ``s``
    are read.
    """
    total = mass(pi, s)
    if total <= 0:
        raise ValueError("shrinkage is undefined on a set of zero mass")
    square_sum = 0.0
    for block in partition(s, q).values():
        block_mass = mass(pi, block)
        square_sum += block_mass * block_mass
    delta = total - square_sum / total
    # A constant question leaves a single block and the closed form cancels
    # exactly up to rounding; clamp the dust.
    if delta < 0.0:
        delta = 0.0
    return ShrinkageValue(delta=delta, ratio=delta / q.cost)


def collision_probability(dist: Sequence[float]) -> float:
    """Probability that two independent draws from ``dist`` coincide.

    Requires a normalized distribution.  The value lies in
    [1/support size, 1] and equals 1 only for a point mass.
    """
    total = sum(dist)
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"distribution sums to {total}, expected 1")
    return sum(p * p for p in dist)


def majority_hypothesis(dist: Sequence[float]) -> int | None:
    """Index holding strictly more than half the mass, or None.

    A collision probability above 1/2 guarantees such an index exists;
    the converse does not hold.
    """
    for i, p in enumerate(dist):
        if p > 0.5:
            return i
    return None


def distinct_fraction(
    s: VersionSpace, h0: int, pi: Sequence[float], q: Question
) -> float:
    """Fraction of the non-``h0`` mass in ``s`` that disagrees with ``h0`` on ``q``.

    Lives in [0, 1]: 0 when ``q`` is constant on ``s``, 1 when ``q`` gives
    ``h0`` an answer nothing else in ``s`` gives.  Scale-invariant in ``pi``,
    so conditioned and unconditioned measures give the same value.
    """
    if h0 not in s:
        raise ValueError(f"hypothesis {h0} not in version space {s}")
    rest = tuple(i for i in s if i != h0)
    if not rest:
        raise ValueError("distinct fraction needs at least two hypotheses")
    rest_mass = mass(pi, rest)
    if rest_mass <= 0:
        # Impossible under a strictly positive prior; a zero here means an
        # upstream invariant was violated, so fail loudly rather than return 0.
        raise ValueError("residual set has zero mass")
    answer0 = q.answers[h0]
    disagree = sum(pi[i] for i in rest if q.answers[i] != answer0)
    return disagree / rest_mass
