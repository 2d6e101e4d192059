"""Problem instances: hypotheses, a prior over them, and cost-weighted questions.

An instance is the full statement of an identification problem: a finite set
of hypotheses, a strictly positive prior from which the hidden target is
drawn, and a bank of questions.  Each question maps every hypothesis to one
answer from a small integer alphabet and carries a positive cost.  Asking a
question reveals the target's answer and eliminates every hypothesis that
answers differently.

Everything in this module is immutable after construction and all operations
are pure, so values can be shared freely across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

#: Comparison tolerance for probability arithmetic throughout the package.
TOL = 1e-9

#: A prior whose total mass is off by less than this is renormalized on load;
#: anything worse is rejected.
RENORM_TOL = 1e-6

#: Canonical version-space form: strictly increasing hypothesis indices.
#: Hashable, so usable directly as a memoization key.
VersionSpace = tuple[int, ...]


class InvalidInstanceError(ValueError):
    """Raised when an instance fails validation or a file cannot be parsed."""


@dataclass(frozen=True)
class Question:
    """One question: an id, a positive cost, and its answer for every hypothesis."""

    id: str
    cost: float
    answers: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "answers", tuple(int(a) for a in self.answers))
        object.__setattr__(self, "cost", float(self.cost))

    def answer_alphabet(self) -> tuple[int, ...]:
        """Distinct answer values this question can produce, ascending."""
        return tuple(sorted(set(self.answers)))


@dataclass(frozen=True)
class Prior:
    """A strictly positive distribution over the hypotheses."""

    mass: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mass", tuple(float(p) for p in self.mass))

    def __len__(self) -> int:
        return len(self.mass)

    @property
    def min_mass(self) -> float:
        return min(self.mass)

    @classmethod
    def uniform(cls, n: int) -> "Prior":
        return cls((1.0 / n,) * n)


@dataclass(frozen=True)
class Instance:
    """Hypotheses, prior, and question bank.

    Construction only enforces structural consistency (index alignment);
    semantic requirements such as identifiability are checked by
    :func:`validate_instance` so that broken instances can still be loaded
    and reported on.
    """

    hypotheses: tuple[str, ...]
    prior: Prior
    questions: tuple[Question, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hypotheses", tuple(str(h) for h in self.hypotheses))
        object.__setattr__(self, "questions", tuple(self.questions))
        n = len(self.hypotheses)
        if len(self.prior) != n:
            raise InvalidInstanceError(
                f"prior has {len(self.prior)} entries for {n} hypotheses"
            )
        for q in self.questions:
            if len(q.answers) != n:
                raise InvalidInstanceError(
                    f"question {q.id!r} has {len(q.answers)} answers for {n} hypotheses"
                )

    @property
    def n(self) -> int:
        return len(self.hypotheses)

    @property
    def m(self) -> int:
        return len(self.questions)

    @cached_property
    def questions_by_id(self) -> Mapping[str, Question]:
        return {q.id: q for q in self.questions}

    @cached_property
    def question_positions(self) -> Mapping[str, int]:
        return {q.id: i for i, q in enumerate(self.questions)}

    @cached_property
    def hypothesis_index(self) -> Mapping[str, int]:
        return {h: i for i, h in enumerate(self.hypotheses)}

    def with_prior(self, mass: Sequence[float]) -> "Instance":
        """Same hypotheses and questions under a different prior."""
        return Instance(self.hypotheses, Prior(tuple(mass)), self.questions)

    def full_space(self) -> VersionSpace:
        return tuple(range(self.n))


@dataclass(frozen=True)
class ValidationReport:
    """Violations found by a validation pass, split by severity."""

    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        if self.ok and not self.warnings:
            return "valid"
        lines = [f"error: {e}" for e in self.errors]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def version_space(members: Iterable[int], n: int | None = None) -> VersionSpace:
    """Canonicalize a collection of hypothesis indices.

    Rejects empty input, duplicates, and (when ``n`` is given) out-of-range
    indices.
    """
    vs = tuple(sorted(int(i) for i in members))
    if not vs:
        raise ValueError("version space must be non-empty")
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate indices in version space {vs}")
    if vs[0] < 0 or (n is not None and vs[-1] >= n):
        raise ValueError(f"index out of range in version space {vs}")
    return vs


def validate_instance(inst: Instance) -> ValidationReport:
    """Check every instance invariant and report violations.

    Hard errors: fewer than two hypotheses, no questions, non-positive or
    non-finite costs, duplicate question ids, zero/negative prior mass,
    total prior mass off by 1e-6 or more, negative answer ids, and any pair
    of hypotheses that no question separates.  A total prior mass off by
    less than 1e-6 is only a warning (loaders renormalize it).
    """
    errors: list[str] = []
    warnings: list[str] = []

    if inst.n < 2:
        errors.append(f"need at least 2 hypotheses, got {inst.n}")
    if inst.m < 1:
        errors.append("need at least 1 question")

    seen_ids: set[str] = set()
    for q in inst.questions:
        if q.id in seen_ids:
            errors.append(f"duplicate question id {q.id!r}")
        seen_ids.add(q.id)
        if not math.isfinite(q.cost) or q.cost <= 0:
            errors.append(f"question {q.id!r} has non-positive cost {q.cost}")
        if any(a < 0 for a in q.answers):
            errors.append(f"question {q.id!r} has negative answer ids")

    for i, p in enumerate(inst.prior.mass):
        if not math.isfinite(p) or p <= 0:
            errors.append(f"zero prior mass: hypothesis {inst.hypotheses[i]!r} has {p}")
    total = sum(inst.prior.mass)
    dev = abs(total - 1.0)
    if dev >= RENORM_TOL:
        errors.append(f"prior sums to {total}, off by {dev:.3g}")
    elif dev > TOL:
        warnings.append(f"prior sums to {total}; renormalized on load")

    # Identifiability: two hypotheses are separable iff their full answer
    # signatures differ.
    if inst.n >= 2 and inst.m >= 1:
        signatures: dict[tuple[int, ...], int] = {}
        for h in range(inst.n):
            sig = tuple(q.answers[h] for q in inst.questions)
            if sig in signatures:
                errors.append(
                    "not identifiable: hypotheses "
                    f"{inst.hypotheses[signatures[sig]]!r} and {inst.hypotheses[h]!r} "
                    "answer every question identically"
                )
            else:
                signatures[sig] = h

    return ValidationReport(tuple(errors), tuple(warnings))


def require_valid(inst: Instance) -> None:
    """Raise :class:`InvalidInstanceError` unless the instance validates."""
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstanceError("; ".join(report.errors))


def mass(pi: Sequence[float], s: VersionSpace) -> float:
    """Total measure of the version space under ``pi``."""
    if not s:
        raise ValueError("mass of an empty version space is undefined")
    return sum(pi[i] for i in s)


def restrict(pi: Sequence[float], s: VersionSpace) -> tuple[float, ...]:
    """Condition ``pi`` on the version space.

    Returns a full-length vector: entries outside ``s`` are zero, entries on
    ``s`` are proportional to ``pi`` and sum to one.
    """
    total = mass(pi, s)
    if total <= 0:
        raise ValueError("cannot restrict to a set of zero mass")
    members = set(s)
    return tuple(pi[i] / total if i in members else 0.0 for i in range(len(pi)))


def partition(s: VersionSpace, q: Question) -> dict[int, VersionSpace]:
    """Split a version space by the answers ``q`` gives on it.

    Blocks are keyed by answer value, in order of first appearance while
    scanning ``s`` ascending; they are disjoint, non-empty, and union to ``s``.
    """
    if not s:
        raise ValueError("cannot partition an empty version space")
    blocks: dict[int, list[int]] = {}
    for h in s:
        blocks.setdefault(q.answers[h], []).append(h)
    return {a: tuple(members) for a, members in blocks.items()}


# ---------------------------------------------------------------------------
# Instance file format (UTF-8 JSON)
# ---------------------------------------------------------------------------


def instance_to_dict(inst: Instance) -> dict:
    return {
        "hypotheses": list(inst.hypotheses),
        "prior": list(inst.prior.mass),
        "questions": [
            {"id": q.id, "cost": q.cost, "answers": list(q.answers)}
            for q in inst.questions
        ],
    }


def instance_from_dict(data: Mapping) -> Instance:
    """Build an instance from parsed JSON, renormalizing a slightly-off prior.

    A prior whose total mass deviates by less than 1e-6 is renormalized;
    a larger deviation is rejected.
    """
    try:
        hypotheses = tuple(str(h) for h in data["hypotheses"])
        raw_prior = [float(p) for p in data["prior"]]
        questions = tuple(
            Question(str(q["id"]), float(q["cost"]), tuple(q["answers"]))
            for q in data["questions"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInstanceError(f"malformed instance: {exc}") from exc

    total = sum(raw_prior)
    if abs(total - 1.0) >= RENORM_TOL:
        raise InvalidInstanceError(f"prior sums to {total}; refusing to renormalize")
    if total > 0 and abs(total - 1.0) > 0:
        raw_prior = [p / total for p in raw_prior]
    return Instance(hypotheses, Prior(tuple(raw_prior)), questions)


def load_instance(path: str | Path) -> Instance:
    """Read an instance file; see the README for the JSON schema."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read instance file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_dict(data)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(instance_to_dict(inst), indent=2) + "\n", encoding="utf-8"
    )
