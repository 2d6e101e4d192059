"""Batch verification: empirical checks of the cost guarantees.

Generates seeded random instances, builds greedy / epsilon-greedy / rounded
trees, solves each instance exactly, and checks every tree's cost against
its guarantee:

    greedy          cost <= 12 * C* * ln(1 / min prior)
    epsilon-greedy  cost <= 12/(1-eps) * C* * ln(1 / min prior)
    rounded greedy  cost <= 108 * C* * ln(n * c_max / c_min)

Rows are emitted as CSV (fixed column set, see ``CSV_COLUMNS``) plus a human
summary; any failed row marks the whole report failed.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass

import numpy as np

from .builders import epsilon_greedy_tree, greedy_rounded_tree, greedy_tree
from .instance import Instance
from .oracle import DEFAULT_CAP, optimal_tree
from .scenarios import GeneratorConfig, gen_random, min_questions
from .tree import tree_cost

#: Slack added to every bound comparison, absorbing float noise only.
BOUND_TOL = 1e-6

CSV_COLUMNS = (
    "instance",
    "seed",
    "n",
    "m",
    "algorithm",
    "epsilon",
    "cost",
    "c_star",
    "min_prior",
    "bound",
    "ratio",
    "passed",
)


@dataclass(frozen=True)
class BoundRow:
    instance: str
    seed: int
    n: int
    m: int
    algorithm: str
    epsilon: float
    cost: float
    c_star: float
    min_prior: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.cost / self.c_star if self.c_star > 0 else math.inf

    @property
    def passed(self) -> bool:
        return self.cost <= self.bound + BOUND_TOL


@dataclass(frozen=True)
class BoundReport:
    rows: tuple[BoundRow, ...]

    @property
    def failures(self) -> int:
        return sum(not row.passed for row in self.rows)

    @property
    def max_ratio(self) -> float:
        return max((row.ratio for row in self.rows), default=0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow(
                [
                    r.instance,
                    r.seed,
                    r.n,
                    r.m,
                    r.algorithm,
                    f"{r.epsilon:g}",
                    f"{r.cost:.12g}",
                    f"{r.c_star:.12g}",
                    f"{r.min_prior:.12g}",
                    f"{r.bound:.12g}",
                    f"{r.ratio:.12g}",
                    int(r.passed),
                ]
            )
        return buf.getvalue()

    def summary(self) -> str:
        instances = len({r.instance for r in self.rows})
        return (
            f"{instances} instances, {len(self.rows)} bound checks, "
            f"max cost/optimal ratio {self.max_ratio:.4f}, "
            f"{self.failures} failure(s)"
        )


@dataclass(frozen=True)
class ReportConfig:
    count: int = 50
    seed: int = 0
    min_n: int = 3
    max_n: int = 8
    max_m: int = 10
    max_k: int = 4
    cost_range: tuple[float, float] = (0.1, 10.0)
    concentrations: tuple[float, ...] = (0.3, 1.0, 10.0)
    epsilons: tuple[float, ...] = (0.1, 0.5)
    oracle_cap: int = DEFAULT_CAP

    def __post_init__(self) -> None:
        if self.max_n > self.oracle_cap:
            raise ValueError(
                f"max_n {self.max_n} exceeds the exact-solver cap {self.oracle_cap}"
            )


def sample_instances(cfg: ReportConfig) -> list[tuple[str, int, Instance]]:
    """Deterministic stream of (id, seed, instance) per the report config.

    Question counts are drawn large enough (k^m comfortably above n) that
    the generator's identifiability resampling terminates quickly.
    """
    rng = np.random.default_rng(cfg.seed)
    out = []
    for i in range(cfg.count):
        n = int(rng.integers(cfg.min_n, cfg.max_n + 1))
        k = int(rng.integers(2, cfg.max_k + 1))
        soft = min_questions(n, k)
        low = soft if soft <= cfg.max_m else min_questions(n, k, margin=1)
        m = int(rng.integers(max(2, low), max(cfg.max_m, low) + 1))
        concentration = float(rng.choice(cfg.concentrations))
        inst_seed = int(rng.integers(0, 2**63 - 1))
        inst = gen_random(
            GeneratorConfig(
                seed=inst_seed,
                n=n,
                m=m,
                k=k,
                cost_range=cfg.cost_range,
                concentration=concentration,
            )
        )
        out.append((f"i{i:04d}", inst_seed, inst))
    return out


def greedy_bound(c_star: float, min_prior: float) -> float:
    return 12.0 * c_star * math.log(1.0 / min_prior)


def epsilon_bound(c_star: float, min_prior: float, epsilon: float) -> float:
    return 12.0 / (1.0 - epsilon) * c_star * math.log(1.0 / min_prior)


def rounded_bound(c_star: float, n: int, c_max: float, c_min: float) -> float:
    return 108.0 * c_star * math.log(n * c_max / c_min)


def run_bound_report(cfg: ReportConfig) -> BoundReport:
    rows: list[BoundRow] = []
    for name, seed, inst in sample_instances(cfg):
        c_star = optimal_tree(inst, cap=cfg.oracle_cap).cost
        min_prior = inst.prior.min_mass
        costs = [q.cost for q in inst.questions]

        def row(algorithm: str, epsilon: float, cost: float, bound: float) -> BoundRow:
            return BoundRow(
                instance=name,
                seed=seed,
                n=inst.n,
                m=inst.m,
                algorithm=algorithm,
                epsilon=epsilon,
                cost=cost,
                c_star=c_star,
                min_prior=min_prior,
                bound=bound,
            )

        greedy_cost = tree_cost(greedy_tree(inst), inst).expected_cost
        rows.append(row("greedy", 0.0, greedy_cost, greedy_bound(c_star, min_prior)))

        for eps in cfg.epsilons:
            eps_cost = tree_cost(epsilon_greedy_tree(inst, eps), inst).expected_cost
            rows.append(
                row("epsilon", eps, eps_cost, epsilon_bound(c_star, min_prior, eps))
            )

        if inst.n > 2:
            _, rounded_report = greedy_rounded_tree(inst)
            rows.append(
                row(
                    "rounded",
                    0.0,
                    rounded_report.expected_cost,
                    rounded_bound(c_star, inst.n, max(costs), min(costs)),
                )
            )
    return BoundReport(tuple(rows))
