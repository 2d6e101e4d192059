"""Instance generators: random banks and the motivating application shapes.

Covers random identifiable instances for property suites, label-cost and
partial-label active learning, batched questions with a per-question
overhead, and the coding view where every question costs the log of its
answer count.  All generators are deterministic given their inputs and every
emitted instance passes validation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .instance import (
    Instance,
    InvalidInstanceError,
    Prior,
    Question,
    validate_instance,
)

#: Hard cap on materialized subset questions; "every subset" is exponential.
SUBSET_CAP = 4096

#: Smallest prior mass a random generator will emit.
PRIOR_FLOOR = 1e-6


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for :func:`gen_random`.

    ``concentration`` is the symmetric Dirichlet parameter for the prior:
    large values give near-uniform priors, small ones spiky priors.
    """

    seed: int
    n: int
    m: int
    k: int = 2
    cost_range: tuple[float, float] = (1.0, 1.0)
    concentration: float = 1.0

    def __post_init__(self) -> None:
        low, high = self.cost_range
        if self.n <= 1:
            raise ValueError("need n > 1 hypotheses")
        if self.m < 1:
            raise ValueError("need m >= 1 questions")
        if self.k < 2:
            raise ValueError("need k >= 2 answers per question")
        if not 0 < low <= high:
            raise ValueError(f"bad cost range {self.cost_range}")
        if self.concentration <= 0:
            raise ValueError("concentration must be positive")


def min_questions(n: int, k: int, margin: int = 4) -> int:
    """Smallest m with k^m >= margin * n.

    With fewer questions than this, random answer tables rarely (or never)
    separate every pair of hypotheses; samplers use it to keep
    :func:`gen_random`'s rejection loop fast.
    """
    m = 1
    while k**m < margin * n:
        m += 1
    return m


def gen_random(cfg: GeneratorConfig) -> Instance:
    """Random identifiable instance, deterministic per seed.

    The prior is Dirichlet-distributed, floored at 1e-6 and renormalized.
    Answer tables are resampled (up to 1000 times) until every pair of
    hypotheses is separated by some question.
    """
    rng = np.random.default_rng(cfg.seed)
    prior = rng.dirichlet(np.full(cfg.n, cfg.concentration))
    prior = np.maximum(prior, PRIOR_FLOOR)
    prior = prior / prior.sum()
    costs = rng.uniform(cfg.cost_range[0], cfg.cost_range[1], size=cfg.m)

    for _ in range(1000):
        answers = rng.integers(0, cfg.k, size=(cfg.m, cfg.n))
        inst = Instance(
            hypotheses=tuple(f"h{i}" for i in range(cfg.n)),
            prior=Prior(tuple(float(p) for p in prior)),
            questions=tuple(
                Question(f"q{j}", float(costs[j]), tuple(int(a) for a in answers[j]))
                for j in range(cfg.m)
            ),
        )
        if validate_instance(inst).ok:
            return inst
    raise InvalidInstanceError(
        f"no identifiable instance found in 1000 resamples for {cfg}"
    )


def gen_label_cost(
    labelings: Mapping[str, Sequence],
    costs: Sequence[float],
    prior: Prior | None = None,
) -> Instance:
    """One question per data point, answering with each hypothesis's label.

    ``labelings`` maps hypothesis names to length-d label vectors; question
    j costs ``costs[j]``.  Labels may be arbitrary sortable values and are
    encoded as per-point answer indices.
    """
    hypotheses = tuple(labelings)
    if len(hypotheses) < 2:
        raise InvalidInstanceError("need at least 2 hypotheses")
    d = len(next(iter(labelings.values())))
    if len(costs) != d:
        raise InvalidInstanceError(f"{d} points but {len(costs)} costs")
    vectors = [tuple(labelings[h]) for h in hypotheses]
    if any(len(v) != d for v in vectors):
        raise InvalidInstanceError("labelings have inconsistent lengths")
    if len(set(vectors)) != len(vectors):
        raise InvalidInstanceError("duplicate labelings are not identifiable")

    questions = []
    for j in range(d):
        point_labels = [v[j] for v in vectors]
        encoding = {lab: i for i, lab in enumerate(sorted(set(point_labels)))}
        questions.append(
            Question(
                f"x{j}",
                float(costs[j]),
                tuple(encoding[lab] for lab in point_labels),
            )
        )
    return Instance(
        hypotheses,
        prior if prior is not None else Prior.uniform(len(hypotheses)),
        tuple(questions),
    )


def gen_partial_label(
    labels: Mapping[str, Sequence],
    full_cost: float,
    partial_cost: float,
    prior: Prior | None = None,
) -> Instance:
    """Full multiclass questions plus cheaper one-vs-rest questions.

    Per data point: one question revealing the point's class (cost
    ``full_cost``) and, for every class in the alphabet, a binary question
    "is this point's class c?" (cost ``partial_cost``).
    """
    if partial_cost > full_cost:
        raise ValueError("partial questions must not cost more than full ones")
    hypotheses = tuple(labels)
    if len(hypotheses) < 2:
        raise InvalidInstanceError("need at least 2 hypotheses")
    vectors = [tuple(labels[h]) for h in hypotheses]
    d = len(vectors[0])
    if any(len(v) != d for v in vectors):
        raise InvalidInstanceError("label vectors have inconsistent lengths")
    if len(set(vectors)) != len(vectors):
        raise InvalidInstanceError("duplicate label assignments are not identifiable")
    alphabet = sorted({lab for v in vectors for lab in v})
    if len(alphabet) < 2:
        raise InvalidInstanceError("class alphabet must have at least 2 classes")
    encoding = {lab: i for i, lab in enumerate(alphabet)}

    questions = []
    for j in range(d):
        questions.append(
            Question(
                f"x{j}",
                float(full_cost),
                tuple(encoding[v[j]] for v in vectors),
            )
        )
        for lab in alphabet:
            questions.append(
                Question(
                    f"x{j}=={lab}",
                    float(partial_cost),
                    tuple(1 if v[j] == lab else 0 for v in vectors),
                )
            )
    return Instance(
        hypotheses,
        prior if prior is not None else Prior.uniform(len(hypotheses)),
        tuple(questions),
    )


def gen_batch(
    base: Instance,
    overhead: float = 0.0,
    max_batch: int = 2,
    mode: Literal["sum", "max"] = "sum",
    cap: int = SUBSET_CAP,
) -> Instance:
    """All question subsets of the base instance up to ``max_batch`` members.

    A subset question answers with the tuple of member answers, packed
    mixed-radix (member order, each member's radix being its answer-alphabet
    span) into a single integer.  Its cost is the overhead plus the sum of
    member costs, or plus the max member cost if ``mode`` is "max" (parallel
    labelers).
    """
    if max_batch < 1:
        raise ValueError("max_batch must be at least 1")
    if overhead < 0:
        raise ValueError("overhead must be non-negative")
    if mode not in ("sum", "max"):
        raise ValueError(f"unknown batch mode {mode!r}")
    count = sum(math.comb(base.m, size) for size in range(1, min(max_batch, base.m) + 1))
    if count > cap:
        raise ValueError(f"{count} subset questions exceed the cap of {cap}")

    questions = []
    for size in range(1, min(max_batch, base.m) + 1):
        for members in itertools.combinations(range(base.m), size):
            qs = [base.questions[i] for i in members]
            radices = [max(q.answers) + 1 for q in qs]
            packed = []
            for h in range(base.n):
                value = 0
                for q, radix in zip(qs, radices):
                    value = value * radix + q.answers[h]
                packed.append(value)
            member_costs = [q.cost for q in qs]
            cost = overhead + (sum(member_costs) if mode == "sum" else max(member_costs))
            questions.append(
                Question("+".join(q.id for q in qs), cost, tuple(packed))
            )
    return Instance(base.hypotheses, base.prior, tuple(questions))


def gen_compression(
    prior: Prior,
    cap_n: int = 10,
    max_blocks: int = 2,
    cap: int = SUBSET_CAP,
) -> Instance:
    """Question bank for top-down code construction.

    With ``max_blocks`` 2 (the default) the bank is every distinct binary
    partition of the hypotheses at cost 1 bit each.  Larger ``max_blocks``
    emits every partition into at most that many blocks, costing the log of
    the realized block count.
    """
    n = len(prior)
    if n > cap_n:
        raise ValueError(f"n={n} above the compression cap {cap_n}")
    if n < 2:
        raise ValueError("need at least 2 hypotheses")
    if max_blocks < 2:
        raise ValueError("max_blocks must be at least 2")

    questions: list[Question] = []
    if max_blocks == 2:
        # Canonical bipartitions: hypothesis 0 stays in block 0, the other
        # block ranges over the non-empty subsets of the rest.
        for i, bits in enumerate(range(1, 1 << (n - 1))):
            answers = tuple(
                1 if h > 0 and (bits >> (h - 1)) & 1 else 0 for h in range(n)
            )
            questions.append(Question(f"p{i}", 1.0, answers))
            if len(questions) > cap:
                raise ValueError(f"more than {cap} partition questions")
    else:
        for i, assignment in enumerate(_set_partitions(n, max_blocks)):
            blocks = max(assignment) + 1
            if blocks < 2:
                continue
            questions.append(Question(f"p{i}", math.log2(blocks), assignment))
            if len(questions) > cap:
                raise ValueError(f"more than {cap} partition questions")
    return Instance(
        tuple(f"h{i}" for i in range(n)),
        prior,
        tuple(questions),
    )


def _set_partitions(n: int, max_blocks: int):
    """Restricted-growth strings: every partition of n items into <= max_blocks."""

    def grow(prefix: list[int], used: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for value in range(min(used + 1, max_blocks - 1) + 1):
            prefix.append(value)
            yield from grow(prefix, max(used, value))
            prefix.pop()

    yield from grow([0], 0)
