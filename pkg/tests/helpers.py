"""Shared machinery for the test suite.

The brute-force tree enumeration here is intentionally independent of the
package's exact solver: it materializes every irreducible query tree and
prices each one through ``tree_cost``, so agreement between the two is a
real cross-check rather than the same recursion run twice.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator

import numpy as np

from costquery import (
    GeneratorConfig,
    Instance,
    Internal,
    Leaf,
    Node,
    gen_random,
    partition,
    tree_cost,
)
from costquery.scenarios import min_questions


def random_instance(
    seed: int,
    n: int | None = None,
    m: int | None = None,
    k: int | None = None,
    cost_range: tuple[float, float] = (0.1, 10.0),
    concentrations: tuple[float, ...] = (0.3, 1.0, 10.0),
    max_n: int = 10,
    max_m: int = 12,
    max_k: int = 4,
    min_n: int = 3,
) -> Instance:
    """One deterministic random instance; unspecified sizes drawn from seed.

    Drawn sizes keep k^m comfortably above n so identifiability is reached
    quickly by resampling.
    """
    rng = np.random.default_rng(seed)
    n = n if n is not None else int(rng.integers(min_n, max_n + 1))
    k = k if k is not None else int(rng.integers(2, max_k + 1))
    if m is None:
        soft = min_questions(n, k)
        low = soft if soft <= max_m else min_questions(n, k, margin=1)
        m = int(rng.integers(max(2, low), max(max_m, low) + 1))
    concentration = float(concentrations[int(rng.integers(0, len(concentrations)))])
    return gen_random(
        GeneratorConfig(
            seed=int(rng.integers(0, 2**62)),
            n=n,
            m=m,
            k=k,
            cost_range=cost_range,
            concentration=concentration,
        )
    )


def enumerate_trees(inst: Instance, s: tuple[int, ...]) -> Iterator[Node]:
    """Every irreducible query tree identifying the hypotheses of ``s``."""
    if len(s) == 1:
        yield Leaf(s[0])
        return
    for q in inst.questions:
        blocks = partition(s, q)
        if len(blocks) < 2:
            continue
        answers = list(blocks)
        subtree_choices = [list(enumerate_trees(inst, blocks[a])) for a in answers]
        for combo in itertools.product(*subtree_choices):
            yield Internal(q.id, dict(zip(answers, combo)))


def brute_force_optimal_cost(inst: Instance) -> float:
    """Minimum expected cost over an explicit enumeration of all trees."""
    return min(
        tree_cost(t, inst).expected_cost for t in enumerate_trees(inst, inst.full_space())
    )


def greedy_log_bound(c_star: float, min_prior: float, epsilon: float = 0.0) -> float:
    """Right-hand side of the greedy cost guarantee."""
    return 12.0 / (1.0 - epsilon) * c_star * math.log(1.0 / min_prior)
