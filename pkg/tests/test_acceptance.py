"""End-to-end acceptance suite for the package's cost guarantees.

Each test evaluates one guarantee at its stated tolerance over seeded random
workloads and prints a single pass/fail line (visible with ``pytest -s`` or
on failure).  The exact solver serves as the reference optimum throughout;
it is itself cross-validated here against an explicit enumeration of every
tree.
"""

import math
import time
from dataclasses import dataclass

import numpy as np
import pytest

from costquery import (
    GeneratorConfig,
    Instance,
    OptimalResult,
    Prior,
    Question,
    collision_probability,
    distinct_fraction,
    decomposition_check,
    entropy,
    epsilon_greedy_tree,
    gen_compression,
    gen_random,
    greedy_rounded_tree,
    greedy_tree,
    huffman_cost,
    hypothesis_oracle,
    majority_hypothesis,
    optimal_tree,
    path_cost,
    restrict,
    round_distribution,
    rounding_threshold,
    run_session,
    shrinkage,
    simulate,
    tree_cost,
    tree_to_json,
    validate_instance,
)
from costquery.scenarios import min_questions
from costquery.tree import Internal, Node, iter_nodes
from helpers import brute_force_optimal_cost, random_instance

SUITE_SEED = 20250810
SUITE_SIZE = 500
EPSILONS = (0.1, 0.5)


def verdict(label: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {label}" + (f" ({detail})" if detail else ""))
    return ok


@dataclass
class SuiteEntry:
    inst: Instance
    greedy: Node
    greedy_cost: float
    eps_trees: dict[float, Node]
    eps_costs: dict[float, float]
    optimal: OptimalResult


def suite_configs(count: int, master_seed: int):
    rng = np.random.default_rng(master_seed)
    for _ in range(count):
        n = int(rng.integers(3, 11))
        k = int(rng.integers(2, 5))
        m = int(rng.integers(max(2, min_questions(n, k)), 13))
        concentration = float(rng.choice([0.3, 1.0, 10.0]))
        seed = int(rng.integers(0, 2**62))
        yield GeneratorConfig(
            seed=seed,
            n=n,
            m=m,
            k=k,
            cost_range=(0.1, 10.0),
            concentration=concentration,
        )


@pytest.fixture(scope="module")
def suite():
    start = time.monotonic()
    entries = []
    for cfg in suite_configs(SUITE_SIZE, SUITE_SEED):
        inst = gen_random(cfg)
        greedy = greedy_tree(inst)
        eps_trees = {eps: epsilon_greedy_tree(inst, eps) for eps in EPSILONS}
        entries.append(
            SuiteEntry(
                inst=inst,
                greedy=greedy,
                greedy_cost=tree_cost(greedy, inst).expected_cost,
                eps_trees=eps_trees,
                eps_costs={
                    eps: tree_cost(t, inst).expected_cost
                    for eps, t in eps_trees.items()
                },
                optimal=optimal_tree(inst),
            )
        )
    elapsed = time.monotonic() - start
    return entries, elapsed


def test_1_main_greedy_bound(suite):
    entries, build_time = suite
    violations = 0
    worst_ratio = 0.0
    for e in entries:
        bound = 12.0 * e.optimal.cost * math.log(1.0 / e.inst.prior.min_mass)
        if e.greedy_cost > bound + 1e-6:
            violations += 1
        if e.greedy_cost < e.optimal.cost - 1e-9:
            violations += 1  # greedy cannot beat the optimum
        worst_ratio = max(worst_ratio, e.greedy_cost / e.optimal.cost)
    ok = violations == 0 and build_time < 120.0
    assert verdict(
        "1 main greedy bound",
        ok,
        f"{len(entries)} instances, max cost/optimal {worst_ratio:.3f}, "
        f"suite built in {build_time:.1f}s",
    )


def test_2_epsilon_bound_and_zero_epsilon_identity(suite):
    entries, _ = suite
    violations = 0
    for e in entries:
        log_term = math.log(1.0 / e.inst.prior.min_mass)
        for eps in EPSILONS:
            bound = 12.0 / (1.0 - eps) * e.optimal.cost * log_term
            if e.eps_costs[eps] > bound + 1e-6:
                violations += 1
    identical = all(
        tree_to_json(epsilon_greedy_tree(e.inst, 0.0), e.inst)
        == tree_to_json(e.greedy, e.inst)
        for e in entries
    )
    ok = violations == 0 and identical
    assert verdict(
        "2 epsilon-greedy bound",
        ok,
        f"eps in {EPSILONS}, zero-eps byte-identical: {identical}",
    )


def test_3_rounding_distortion_and_distribution_independent_bound(suite):
    entries, _ = suite
    violations = 0
    checked_trees = 0
    for e in entries:
        inst = e.inst
        rounded = round_distribution(inst)
        t = rounding_threshold(inst)
        if min(rounded.mass) < t - 1e-12:
            violations += 1
        if abs(sum(rounded.mass) - 1.0) > 1e-9:
            violations += 1
        rounded_tree, rounded_report = greedy_rounded_tree(inst)
        trees = [e.greedy, *e.eps_trees.values(), e.optimal.tree, rounded_tree]
        for tree in trees:
            original = tree_cost(tree, inst).expected_cost
            lifted = tree_cost(tree, inst, rounded.mass).expected_cost
            if not (
                0.5 * original - 1e-9 <= lifted <= 1.5 * original + 1e-9
            ):
                violations += 1
            checked_trees += 1
        costs = [q.cost for q in inst.questions]
        bound = 108.0 * e.optimal.cost * math.log(inst.n * max(costs) / min(costs))
        if rounded_report.expected_cost > bound + 1e-6:
            violations += 1
    ok = violations == 0
    assert verdict(
        "3 rounding distortion + distribution-independent bound",
        ok,
        f"{checked_trees} trees in the half-to-threehalves band",
    )


def test_4_monotone_shrinkage():
    rng = np.random.default_rng(424242)
    cases = 10_000
    start = time.monotonic()
    violations = 0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        measure = rng.uniform(0.01, 1.0, size=n)
        q = Question("q", 1.0, tuple(int(a) for a in rng.integers(0, 4, size=n)))
        size_s = int(rng.integers(1, n + 1))
        s = tuple(sorted(rng.choice(n, size=size_s, replace=False).tolist()))
        size_t = int(rng.integers(1, size_s + 1))
        t_sub = tuple(sorted(rng.choice(s, size=size_t, replace=False).tolist()))
        if shrinkage(t_sub, measure, q).delta > shrinkage(s, measure, q).delta + 1e-9:
            violations += 1
    elapsed = time.monotonic() - start
    ok = violations == 0 and elapsed < 5.0
    assert verdict(
        "4 monotone shrinkage", ok, f"{cases} cases in {elapsed:.2f}s"
    )


def test_5_cost_decomposition():
    rng = np.random.default_rng(555)
    violations = 0
    cases = 0
    for seed in range(100):
        inst = random_instance(seed)
        tree = greedy_tree(inst)
        for _ in range(10):
            size = int(rng.integers(1, inst.n + 1))
            members = sorted(rng.choice(inst.n, size=size, replace=False).tolist())
            assignment = rng.integers(0, int(rng.integers(1, 4)), size=size)
            blocks: dict[int, list[int]] = {}
            for h, b in zip(members, assignment):
                blocks.setdefault(int(b), []).append(h)
            cover = [tuple(v) for v in blocks.values()]
            if decomposition_check(tree, inst, cover) >= 1e-9:
                violations += 1
            cases += 1
    ok = violations == 0 and cases == 1000
    assert verdict("5 cost decomposition", ok, f"{cases} (tree, cover) cases")


def test_6_high_ratio_certificate(suite):
    entries, _ = suite
    violations = 0
    nodes = 0
    for e in entries:
        inst = e.inst
        for _, vs in iter_nodes(e.optimal.tree):
            if len(vs) < 2:
                continue
            dist = restrict(inst.prior.mass, vs)
            cp = collision_probability(dist)
            tree_cost_here = tree_cost(e.optimal.tree, inst, dist).expected_cost
            best = max(shrinkage(vs, dist, q).ratio for q in inst.questions)
            if best < (1.0 - cp) / tree_cost_here - 1e-9:
                violations += 1
            nodes += 1
    ok = violations == 0 and nodes > 0
    assert verdict("6 high-ratio certificate", ok, f"{nodes} optimal-tree nodes")


def test_7_heavy_hypothesis_selection_bounds(suite):
    entries, _ = suite
    violations = 0
    nodes = 0
    for e in entries:
        inst = e.inst
        for node, vs in iter_nodes(e.greedy):
            if len(vs) < 2 or not isinstance(node, Internal):
                continue
            dist = restrict(inst.prior.mass, vs)
            if collision_probability(dist) <= 0.5:
                continue
            h0 = majority_hypothesis(dist)
            if h0 is None:
                violations += 1
                continue
            c_star_h0 = path_cost(e.optimal.tree, inst, h0)
            best = max(
                distinct_fraction(vs, h0, dist, q) / q.cost for q in inst.questions
            )
            if best < 1.0 / c_star_h0 - 1e-9:
                violations += 1
            chosen = inst.questions_by_id[node.question]
            chosen_ratio = distinct_fraction(vs, h0, dist, chosen) / chosen.cost
            if chosen_ratio < 1.0 / (2.0 * c_star_h0) - 1e-9:
                violations += 1
            nodes += 1
    ok = violations == 0 and nodes > 0
    assert verdict("7 heavy-hypothesis selection bounds", ok, f"{nodes} heavy-mass nodes")


def test_8_oracle_cross_validation():
    violations = 0
    for seed in range(100):
        inst = random_instance(seed, max_n=5, max_m=4, min_n=2)
        if abs(optimal_tree(inst).cost - brute_force_optimal_cost(inst)) > 1e-9:
            violations += 1

    huffman_checked = 0
    entropy_checked = 0
    rng = np.random.default_rng(888)
    for n in (3, 4, 6, 8, 10):
        masses = rng.dirichlet(np.ones(n))
        masses = np.maximum(masses, 1e-4)
        masses = masses / masses.sum()
        prior = Prior(tuple(float(p) for p in masses))
        inst = gen_compression(prior, cap_n=10)
        result = optimal_tree(inst)
        if abs(result.cost - huffman_cost(prior)) > 1e-9:
            violations += 1
        huffman_checked += 1
        floor = entropy(prior)
        for tree in (greedy_tree(inst), epsilon_greedy_tree(inst, 0.5), result.tree):
            if tree_cost(tree, inst).expected_cost < floor - 1e-9:
                violations += 1
            entropy_checked += 1
    ok = violations == 0
    assert verdict(
        "8 oracle cross-validation",
        ok,
        f"100 brute-force, {huffman_checked} Huffman, {entropy_checked} entropy floors",
    )


def test_9_simulation_consistency():
    violations = 0
    for i in range(20):
        rng = np.random.default_rng(9000 + i)
        cfg = GeneratorConfig(
            seed=int(rng.integers(0, 2**62)),
            n=int(rng.integers(4, 9)),
            m=int(rng.integers(4, 10)),
            k=3,
            cost_range=(0.1, 10.0),
            concentration=1.0,
        )
        inst = gen_random(cfg)
        tree = greedy_tree(inst)
        expected = tree_cost(tree, inst).expected_cost
        mean, stderr = simulate(tree, inst, trials=100_000, seed=i)
        if abs(mean - expected) > 4.0 * stderr:
            violations += 1

    mismatches = 0
    for seed in range(50):
        inst = random_instance(seed, max_n=8)
        tree = greedy_tree(inst)
        for h in range(inst.n):
            oracle = hypothesis_oracle(inst, h)
            if run_session(inst, oracle) != run_session(inst, oracle, tree):
                mismatches += 1
    ok = violations == 0 and mismatches == 0
    assert verdict(
        "9 simulation consistency",
        ok,
        f"20 Monte Carlo pins, 50 instances of online/tree session equality",
    )


# Found by seeded randomized search (seed 777 over 4-valued answer tables
# with one heavy hypothesis; see derive_separation_counterexample below)
# and pinned: the question with maximum shrinkage is q1, while the question
# separating the most residual mass from the heavy hypothesis is q0.
FIG2_FIXTURE = Instance(
    hypotheses=("h0", "h1", "h2", "h3"),
    prior=Prior(
        (
            0.7022817673819995,
            0.16227394833507747,
            0.12071309027673607,
            0.014731194006186962,
        )
    ),
    questions=(
        Question("q0", 1.0, (3, 1, 1, 2)),
        Question("q1", 1.0, (3, 1, 2, 3)),
        Question("q2", 1.0, (0, 0, 3, 0)),
        Question("q3", 1.0, (0, 0, 1, 2)),
    ),
)


def derive_separation_counterexample(seed: int, trials: int = 20_000):
    """Randomized search for an instance where the max-shrinkage question is
    not the question separating the most mass from the heavy hypothesis."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        n = int(rng.integers(4, 7))
        m = int(rng.integers(3, 7))
        heavy = float(rng.uniform(0.52, 0.75))
        rest = rng.dirichlet(np.ones(n - 1)) * (1.0 - heavy)
        masses = np.maximum(np.concatenate([[heavy], rest]), 1e-4)
        masses = masses / masses.sum()
        if masses[0] <= 0.5:
            continue
        answers = rng.integers(0, 4, size=(m, n))
        inst = Instance(
            tuple(f"h{i}" for i in range(n)),
            Prior(tuple(float(p) for p in masses)),
            tuple(
                Question(f"q{j}", 1.0, tuple(int(a) for a in answers[j]))
                for j in range(m)
            ),
        )
        if not validate_instance(inst).ok:
            continue
        s = inst.full_space()
        dist = restrict(inst.prior.mass, s)
        if majority_hypothesis(dist) != 0:
            continue
        deltas = [shrinkage(s, dist, q).delta for q in inst.questions]
        seps = [distinct_fraction(s, 0, dist, q) for q in inst.questions]
        i_delta = max(range(m), key=lambda i: deltas[i])
        i_sep = max(range(m), key=lambda i: seps[i])
        if i_delta == i_sep:
            continue
        if sorted(deltas)[-1] - sorted(deltas)[-2] < 1e-3:
            continue
        if sorted(seps)[-1] - sorted(seps)[-2] < 1e-3:
            continue
        if len(set(inst.questions[i_delta].answers)) < 3:
            continue
        return inst
    return None


def test_10_max_shrinkage_is_not_max_separation():
    inst = FIG2_FIXTURE
    assert validate_instance(inst).ok
    s = inst.full_space()
    dist = restrict(inst.prior.mass, s)
    h0 = majority_hypothesis(dist)
    assert h0 == 0

    deltas = [shrinkage(s, dist, q).delta for q in inst.questions]
    seps = [distinct_fraction(s, h0, dist, q) for q in inst.questions]
    i_delta = max(range(inst.m), key=lambda i: deltas[i])
    i_sep = max(range(inst.m), key=lambda i: seps[i])

    structurally_distinct = (
        i_delta != i_sep
        and i_delta == 1
        and i_sep == 0
        and len(set(inst.questions[i_delta].answers)) >= 3
    )
    # The search that produced the pin still finds such instances.
    rediscovered = derive_separation_counterexample(777) is not None
    ok = structurally_distinct and rediscovered
    assert verdict(
        "10 max-shrinkage vs max-separation counterexample",
        ok,
        f"argmax shrinkage q{i_delta}, argmax separation q{i_sep}",
    )
