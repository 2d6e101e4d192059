"""Command-line interface.

Subcommands: validate, build, eval, optimal, simulate, play, gen, report.

Exit codes: 0 success, 1 invalid instance or tree, 2 I/O failure, 3 bad
flags or configuration, 4 inconsistent oracle answers, 5 bound violation in
a report.  The environment variable COSTQUERY_ORACLE_CAP overrides the
exact-solver size cap wherever the oracle runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .builders import (
    EpsilonPolicy,
    epsilon_greedy_tree,
    greedy_rounded_tree,
    greedy_tree,
)
from .instance import (
    Instance,
    InvalidInstanceError,
    Prior,
    instance_to_dict,
    load_instance,
    partition,
    validate_instance,
)
from .oracle import DEFAULT_CAP, OracleCapError, optimal_tree
from .report import ReportConfig, run_bound_report
from .scenarios import (
    GeneratorConfig,
    gen_batch,
    gen_compression,
    gen_label_cost,
    gen_partial_label,
    gen_random,
)
from .sim import InconsistentOracleError, run_session, simulate
from .tree import (
    Node,
    tree_cost,
    tree_from_dict,
    tree_to_dot,
    tree_to_json,
    validate_tree,
)

EXIT_OK = 0
EXIT_INVALID_INSTANCE = 1
EXIT_IO = 2
EXIT_FLAGS = 3
EXIT_INCONSISTENT = 4
EXIT_BOUND_VIOLATION = 5


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports flag problems with exit code 3."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_FLAGS)


def _oracle_cap(args: argparse.Namespace) -> int:
    if getattr(args, "cap_n", None) is not None:
        return args.cap_n
    env = os.environ.get("COSTQUERY_ORACLE_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"COSTQUERY_ORACLE_CAP={env!r} is not an integer") from exc
    return DEFAULT_CAP


def _load_tree(path: str, inst: Instance) -> Node:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError:
        raise
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return tree_from_dict(data, inst)
    except ValueError as exc:
        raise InvalidInstanceError(f"bad tree file {path}: {exc}") from exc


def _write_instance(inst: Instance, out: str | None) -> None:
    text = json.dumps(instance_to_dict(inst), indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"instance written: {out}")
    else:
        sys.stdout.write(text)


def cmd_validate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    report = validate_instance(inst)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID_INSTANCE


def cmd_build(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if args.algorithm == "greedy":
        tree = greedy_tree(inst)
        cost = tree_cost(tree, inst).expected_cost
    elif args.algorithm == "eps":
        policy = EpsilonPolicy(args.epsilon)
        tree = epsilon_greedy_tree(inst, policy)
        cost = tree_cost(tree, inst).expected_cost
    else:
        tree, report = greedy_rounded_tree(inst)
        cost = report.expected_cost
    print(f"algorithm: {args.algorithm}")
    print(f"expected cost: {cost}")
    if args.out:
        Path(args.out).write_text(tree_to_json(tree, inst) + "\n", encoding="utf-8")
        print(f"tree written: {args.out}")
    if args.dot:
        Path(args.dot).write_text(tree_to_dot(tree, inst), encoding="utf-8")
        print(f"dot written: {args.dot}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    tree = _load_tree(args.tree, inst)
    report = validate_tree(tree, inst)
    if not report.ok:
        print(report, file=sys.stderr)
        return EXIT_INVALID_INSTANCE
    cost = tree_cost(tree, inst)
    print(f"expected cost: {cost.expected_cost}")
    print(f"max depth: {cost.max_depth}")
    for h, c in sorted(cost.per_hypothesis.items()):
        print(f"  {inst.hypotheses[h]}: {c}")
    return EXIT_OK


def cmd_optimal(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    result = optimal_tree(inst, cap=_oracle_cap(args))
    print(f"optimal cost: {result.cost}")
    print(f"subproblems solved: {result.subproblems_solved}")
    if args.out:
        Path(args.out).write_text(
            tree_to_json(result.tree, inst) + "\n", encoding="utf-8"
        )
        print(f"tree written: {args.out}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    tree = _load_tree(args.tree, inst)
    mean, stderr = simulate(tree, inst, trials=args.trials, seed=args.seed)
    print(f"trials: {args.trials}")
    print(f"mean cost: {mean}")
    print(f"stderr: {stderr}")
    return EXIT_OK


def cmd_play(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)

    def stdin_oracle(question, survivors):
        alphabet = set(question.answers)
        blocks = partition(survivors, question)
        while True:
            print(f"Q {question.id} {question.cost:g} which answer?")
            for answer in sorted(blocks):
                count = len(blocks[answer])
                noun = "hypothesis" if count == 1 else "hypotheses"
                print(f"  {answer}: {count} {noun}")
            line = sys.stdin.readline()
            if not line:
                raise OSError("input closed before identification finished")
            token = line.strip()
            try:
                value = int(token)
            except ValueError:
                print(f"invalid answer {token!r}, try again")
                continue
            if value not in alphabet:
                print(f"invalid answer {token!r}, try again")
                continue
            return value

    transcript = run_session(inst, stdin_oracle)
    print(f"identified: {inst.hypotheses[transcript.identified]}")
    print(f"total cost: {transcript.total_cost}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.generator == "random":
        inst = gen_random(
            GeneratorConfig(
                seed=args.seed,
                n=args.n,
                m=args.m,
                k=args.k,
                cost_range=(args.cost_low, args.cost_high),
                concentration=args.concentration,
            )
        )
    elif args.generator == "compression":
        if args.prior_file:
            masses = json.loads(Path(args.prior_file).read_text(encoding="utf-8"))
            prior = Prior(tuple(float(p) for p in masses))
        else:
            prior = Prior.uniform(args.n)
        inst = gen_compression(prior, cap_n=args.cap_n or 10, max_blocks=args.max_blocks)
    elif args.generator == "batch":
        base = load_instance(args.instance)
        inst = gen_batch(
            base, overhead=args.overhead, max_batch=args.max_batch, mode=args.mode
        )
    elif args.generator == "label-cost":
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        prior = Prior(tuple(config["prior"])) if "prior" in config else None
        inst = gen_label_cost(config["labelings"], config["costs"], prior=prior)
    else:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        prior = Prior(tuple(config["prior"])) if "prior" in config else None
        inst = gen_partial_label(
            config["labels"], config["full_cost"], config["partial_cost"], prior=prior
        )
    _write_instance(inst, args.out)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = ReportConfig(
        count=args.count,
        seed=args.seed,
        min_n=args.min_n,
        max_n=args.max_n,
        max_m=args.max_m,
        max_k=args.max_k,
        cost_range=(args.cost_low, args.cost_high),
        epsilons=tuple(args.epsilon) if args.epsilon else (0.1, 0.5),
        oracle_cap=_oracle_cap(args),
    )
    report = run_bound_report(cfg)
    csv_text = report.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"report written: {args.out}")
        print(report.summary())
    else:
        sys.stdout.write(csv_text)
        print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.failures == 0 else EXIT_BOUND_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="costquery", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="build a query tree")
    p.add_argument("--instance", required=True)
    p.add_argument(
        "--algorithm", choices=("greedy", "eps", "rounded"), default="greedy"
    )
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="evaluate a tree file against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimal", help="solve an instance exactly")
    p.add_argument("--instance", required=True)
    p.add_argument("--cap-n", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of a tree's cost")
    p.add_argument("--instance", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("play", help="interactive identification session")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("gen", help="generate instances")
    gsub = p.add_subparsers(dest="generator", required=True)

    g = gsub.add_parser("random", help="random identifiable instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--cost-low", type=float, default=1.0)
    g.add_argument("--cost-high", type=float, default=1.0)
    g.add_argument("--concentration", type=float, default=1.0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    g = gsub.add_parser("compression", help="all-partitions coding instance")
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--prior-file")
    g.add_argument("--max-blocks", type=int, default=2)
    g.add_argument("--cap-n", type=int, default=None)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    g = gsub.add_parser("batch", help="subset questions over a base instance")
    g.add_argument("--instance", required=True)
    g.add_argument("--overhead", type=float, default=0.0)
    g.add_argument("--max-batch", type=int, default=2)
    g.add_argument("--mode", choices=("sum", "max"), default="sum")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    g = gsub.add_parser("label-cost", help="one question per data point")
    g.add_argument("--config", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    g = gsub.add_parser("partial-label", help="full plus one-vs-rest questions")
    g.add_argument("--config", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("report", help="empirical bound verification")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-n", type=int, default=3)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--max-m", type=int, default=10)
    p.add_argument("--max-k", type=int, default=4)
    p.add_argument("--cost-low", type=float, default=0.1)
    p.add_argument("--cost-high", type=float, default=10.0)
    p.add_argument("--epsilon", type=float, action="append")
    p.add_argument("--cap-n", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INSTANCE
    except InconsistentOracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (ValueError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS


if __name__ == "__main__":
    sys.exit(main())
