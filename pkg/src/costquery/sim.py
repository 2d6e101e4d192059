"""Identification sessions: Monte Carlo estimation and oracle-driven runs.

A session asks questions until one hypothesis remains, either by walking a
prebuilt query tree or by recomputing the greedy choice at every surviving
version space (the online strategy; both agree step for step).  Answers come
from an oracle callable; an oracle that contradicts every surviving
hypothesis aborts the session with :class:`InconsistentOracleError`.

Randomness uses numpy's seeded PCG64 generator, so results are reproducible
bit for bit for a given seed and numpy version.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .builders import select_question
from .instance import Instance, Question, VersionSpace, require_valid, restrict
from .tree import Internal, Node, leaves, validate_tree

#: Answer source: receives the question being asked and the surviving
#: version space, returns one answer value.
AnswerOracle = Callable[[Question, VersionSpace], int]


@dataclass(frozen=True)
class SessionStep:
    question_id: str
    answer: int
    cumulative_cost: float


@dataclass(frozen=True)
class SessionTranscript:
    """Ordered record of one identification run."""

    steps: tuple[SessionStep, ...]
    identified: int
    total_cost: float


class InconsistentOracleError(RuntimeError):
    """The oracle gave an answer no surviving hypothesis gives."""

    def __init__(self, question_id: str, answer: int, step_index: int):
        super().__init__(
            f"answer {answer} to question {question_id!r} (step {step_index}) "
            "eliminates every remaining hypothesis"
        )
        self.question_id = question_id
        self.answer = answer
        self.step_index = step_index


def hypothesis_oracle(inst: Instance, h: int) -> AnswerOracle:
    """Oracle that answers exactly as hypothesis ``h`` would."""

    def answer(question: Question, s: VersionSpace) -> int:
        return question.answers[h]

    return answer


def run_session(
    inst: Instance, oracle: AnswerOracle, tree: Node | None = None
) -> SessionTranscript:
    """Run one identification session to completion.

    With a ``tree``, descend it from its root to a leaf (so partial trees
    over a subset of hypotheses work); otherwise recompute the greedy
    question at every step from the surviving version space.  Both
    strategies take the same argmax with the same tie-break, so on a greedy
    tree they produce identical transcripts for the same oracle.
    """
    require_valid(inst)
    steps: list[SessionStep] = []
    cost = 0.0

    if tree is not None:
        node = tree
        s = leaves(tree)
        while isinstance(node, Internal):
            q = inst.questions_by_id[node.question]
            answer = oracle(q, s)
            survivors = tuple(h for h in s if q.answers[h] == answer)
            if not survivors:
                raise InconsistentOracleError(q.id, answer, len(steps))
            cost += q.cost
            steps.append(SessionStep(q.id, answer, cost))
            s = survivors
            child = node.children.get(answer)
            if child is None:
                raise ValueError(f"tree has no branch for answer {answer} to {q.id!r}")
            node = child
        return SessionTranscript(tuple(steps), identified=node.hypothesis, total_cost=cost)

    s = inst.full_space()
    while len(s) > 1:
        pos = select_question(inst, s, restrict(inst.prior.mass, s))
        q = inst.questions[pos]
        answer = oracle(q, s)
        survivors = tuple(h for h in s if q.answers[h] == answer)
        if not survivors:
            raise InconsistentOracleError(q.id, answer, len(steps))
        cost += q.cost
        steps.append(SessionStep(q.id, answer, cost))
        s = survivors
    return SessionTranscript(tuple(steps), identified=s[0], total_cost=cost)


def simulate(
    tree: Node,
    inst: Instance,
    trials: int,
    seed: int,
    dist: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Monte Carlo estimate of the tree's expected cost: (mean, standard error).

    Targets are sampled i.i.d. from ``dist`` (default: the instance prior);
    each realized target's cost comes from actually descending the tree in a
    session.  Descent is deterministic per target, so each distinct target
    is descended once and weighted by its sample count; the estimate is
    identical to per-trial descent.  Deterministic per seed.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if dist is None:
        dist = inst.prior.mass
    dist = np.asarray(dist, dtype=float)
    tree_leaves = set(leaves(tree))
    if tree_leaves == set(inst.full_space()):
        report = validate_tree(tree, inst)
        if not report.ok:
            raise ValueError(f"invalid tree: {'; '.join(report.errors)}")
    else:
        # Partial tree: only makes sense for a distribution on its leaves.
        support = {h for h, p in enumerate(dist) if p > 0}
        if not support <= tree_leaves:
            raise ValueError("sampling distribution puts mass outside the tree's leaves")

    rng = np.random.default_rng(seed)
    targets = rng.choice(inst.n, size=trials, p=dist)
    counts = np.bincount(targets, minlength=inst.n)

    costs = np.zeros(inst.n)
    for h in range(inst.n):
        if counts[h] == 0:
            continue
        transcript = run_session(inst, hypothesis_oracle(inst, h), tree)
        assert transcript.identified == h
        costs[h] = transcript.total_cost

    mean = float(np.dot(counts, costs) / trials)
    if trials > 1:
        variance = float(np.dot(counts, (costs - mean) ** 2) / (trials - 1))
    else:
        variance = 0.0
    stderr = math.sqrt(variance / trials)
    return mean, stderr


def transcript_to_jsonl(transcript: SessionTranscript, inst: Instance) -> str:
    """One JSON line per step, then a summary line with the identified target."""
    lines = [
        json.dumps(
            {
                "question": step.question_id,
                "answer": step.answer,
                "cumulative_cost": step.cumulative_cost,
            }
        )
        for step in transcript.steps
    ]
    lines.append(
        json.dumps(
            {
                "identified": inst.hypotheses[transcript.identified],
                "total_cost": transcript.total_cost,
            }
        )
    )
    return "\n".join(lines) + "\n"
