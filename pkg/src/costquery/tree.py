"""Query trees: structure, expected-cost evaluation, validation, and export.

A query tree encodes a deterministic question-asking strategy: internal
nodes name questions (by id; the instance stays the single source of truth
for costs and answers), edges carry answer values, and leaves carry
hypothesis indices.  Trees are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

from .instance import (
    Instance,
    ValidationReport,
    VersionSpace,
    mass,
    partition,
    restrict,
)


@dataclass(frozen=True)
class Leaf:
    hypothesis: int


@dataclass(frozen=True)
class Internal:
    question: str
    children: Mapping[int, "Node"]


Node = Union[Leaf, Internal]

#: A query tree is just its root node.
QueryTree = Node


@dataclass(frozen=True)
class CostReport:
    """Expected cost of a tree plus the per-hypothesis path costs behind it."""

    expected_cost: float
    per_hypothesis: Mapping[int, float]
    max_depth: int


def leaves(tree: Node) -> VersionSpace:
    """Hypothesis indices at the leaves, ascending."""
    out: list[int] = []

    def walk(node: Node) -> None:
        if isinstance(node, Leaf):
            out.append(node.hypothesis)
        else:
            for child in node.children.values():
                walk(child)

    walk(tree)
    return tuple(sorted(out))


def iter_nodes(tree: Node) -> Iterator[tuple[Node, VersionSpace]]:
    """Yield every node with its version space (its subtree's leaf set)."""

    def walk(node: Node) -> VersionSpace:
        if isinstance(node, Leaf):
            vs: VersionSpace = (node.hypothesis,)
        else:
            members: list[int] = []
            for child in node.children.values():
                members.extend(walk(child))
            vs = tuple(sorted(members))
        collected.append((node, vs))
        return vs

    collected: list[tuple[Node, VersionSpace]] = []
    walk(tree)
    return iter(collected)


def path_costs(tree: Node, inst: Instance) -> dict[int, float]:
    """Root-to-leaf question-cost sums for every hypothesis in the tree."""
    costs: dict[int, float] = {}

    def walk(node: Node, acc: float) -> None:
        if isinstance(node, Leaf):
            costs[node.hypothesis] = acc
        else:
            c = inst.questions_by_id[node.question].cost
            for child in node.children.values():
                walk(child, acc + c)

    walk(tree, 0.0)
    return costs


def path_cost(tree: Node, inst: Instance, h: int) -> float:
    """Cost of identifying hypothesis ``h``: zero iff the tree is a single leaf."""
    costs = path_costs(tree, inst)
    if h not in costs:
        raise ValueError(f"hypothesis {h} is not a leaf of the tree")
    return costs[h]


def max_depth(tree: Node) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(max_depth(child) for child in tree.children.values())


def tree_cost(
    tree: Node, inst: Instance, dist: Sequence[float] | None = None
) -> CostReport:
    """Expected cost of the tree under ``dist`` (default: the instance prior).

    The expectation is the distribution-weighted sum of root-to-leaf path
    costs; every hypothesis carrying mass must appear as a leaf.
    """
    if dist is None:
        dist = inst.prior.mass
    costs = path_costs(tree, inst)
    expected = 0.0
    for h, p in enumerate(dist):
        if p == 0.0:
            continue
        if h not in costs:
            raise ValueError(
                f"hypothesis {inst.hypotheses[h]!r} carries mass but is not a leaf"
            )
        expected += p * costs[h]
    return CostReport(
        expected_cost=expected,
        per_hypothesis=costs,
        max_depth=max_depth(tree),
    )


def validate_tree(tree: Node, inst: Instance) -> ValidationReport:
    """Structural validation against an instance.

    Checks that leaves cover exactly the instance's hypotheses (once each),
    that every internal node references a known question and its edges agree
    with the answer table, and that the tree is irreducible (every internal
    node splits, i.e. has at least two children).
    """
    errors: list[str] = []

    all_leaves = _leaf_list(tree)
    leaf_set = leaves(tree)
    expected = inst.full_space()
    if leaf_set != expected or len(all_leaves) != len(leaf_set):
        seen: set[int] = set()
        dupes: list[int] = []
        for h in all_leaves:
            if h in seen:
                dupes.append(h)
            seen.add(h)
        missing = sorted(set(expected) - set(leaf_set))
        extra = sorted(set(leaf_set) - set(expected))
        if dupes:
            errors.append(f"incomplete cover: duplicated leaves {sorted(set(dupes))}")
        if missing:
            errors.append(
                "incomplete cover: missing hypotheses "
                f"{[inst.hypotheses[h] for h in missing]}"
            )
        if extra:
            errors.append(f"incomplete cover: unknown leaf indices {extra}")
            # Indices outside the instance make the answer-table walk unsafe.
            return ValidationReport(tuple(errors))

    def walk(node: Node, vs: VersionSpace) -> None:
        if isinstance(node, Leaf):
            return
        if node.question not in inst.questions_by_id:
            errors.append(f"unknown question id {node.question!r}")
            return
        if len(node.children) < 2:
            errors.append(
                f"reducible: question {node.question!r} has "
                f"{len(node.children)} child(ren) on {vs}"
            )
        q = inst.questions_by_id[node.question]
        blocks = partition(vs, q)
        for answer, child in node.children.items():
            child_vs = leaves(child)
            if answer not in blocks:
                errors.append(
                    f"question {node.question!r} never answers {answer} on {vs}"
                )
            elif blocks[answer] != child_vs:
                errors.append(
                    f"child mismatch under {node.question!r} answer {answer}: "
                    f"expected {blocks[answer]}, found {child_vs}"
                )
            walk(child, child_vs)

    walk(tree, leaf_set)
    return ValidationReport(tuple(errors))


def _leaf_list(tree: Node) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.hypothesis]
    out: list[int] = []
    for child in tree.children.values():
        out.extend(_leaf_list(child))
    return out


def decomposition_check(
    tree: Node,
    inst: Instance,
    blocks: Sequence[VersionSpace],
    pi: Sequence[float] | None = None,
) -> float:
    """Residual of the cost decomposition over a disjoint cover.

    For S the union of the blocks, returns

        | C(tree, pi_S) - sum_i pi_S(S_i) * C(tree, pi_{S_i}) |

    which is zero (up to rounding) for any tree and any disjoint cover.
    """
    if pi is None:
        pi = inst.prior.mass
    union: list[int] = []
    seen: set[int] = set()
    for block in blocks:
        for h in block:
            if h in seen:
                raise ValueError(f"blocks overlap at hypothesis {h}")
            seen.add(h)
        union.extend(block)
    s = tuple(sorted(union))
    pi_s = restrict(pi, s)
    whole = tree_cost(tree, inst, pi_s).expected_cost
    parts = 0.0
    for block in blocks:
        weight = mass(pi_s, block)
        parts += weight * tree_cost(tree, inst, restrict(pi, block)).expected_cost
    return abs(whole - parts)


# ---------------------------------------------------------------------------
# Export: nested JSON mirroring the node structure, and DOT for rendering
# ---------------------------------------------------------------------------


def tree_to_dict(
    tree: Node, inst: Instance, include_version_spaces: bool = False
) -> dict:
    """JSON-ready form: {"question", "children"} for splits, {"leaf"} at leaves.

    ``include_version_spaces`` additionally records each node's surviving
    hypothesis names under "members" (debug aid; canonical output omits it).
    """
    if isinstance(tree, Leaf):
        out: dict = {"leaf": inst.hypotheses[tree.hypothesis]}
        if include_version_spaces:
            out["members"] = [inst.hypotheses[tree.hypothesis]]
        return out
    out = {
        "question": tree.question,
        "children": {
            str(answer): tree_to_dict(child, inst, include_version_spaces)
            for answer, child in tree.children.items()
        },
    }
    if include_version_spaces:
        out["members"] = [inst.hypotheses[h] for h in leaves(tree)]
    return out


def tree_to_json(
    tree: Node, inst: Instance, include_version_spaces: bool = False
) -> str:
    """Canonical (sorted-key) JSON text for the tree."""
    return json.dumps(
        tree_to_dict(tree, inst, include_version_spaces), indent=2, sort_keys=True
    )


def tree_from_dict(data: Mapping, inst: Instance) -> Node:
    if "leaf" in data:
        label = data["leaf"]
        if label not in inst.hypothesis_index:
            raise ValueError(f"unknown hypothesis {label!r} in tree file")
        return Leaf(inst.hypothesis_index[label])
    if "question" not in data or "children" not in data:
        raise ValueError("tree node must have either 'leaf' or 'question'+'children'")
    children = {
        int(answer): tree_from_dict(child, inst)
        for answer, child in data["children"].items()
    }
    return Internal(str(data["question"]), children)


def tree_to_dot(tree: Node, inst: Instance) -> str:
    """GraphViz rendering: questions with costs at internal nodes, answers on
    edges, hypothesis names at leaves."""
    lines = ["digraph querytree {"]
    counter = 0

    def emit(node: Node) -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        if isinstance(node, Leaf):
            label = inst.hypotheses[node.hypothesis]
            lines.append(f'  {name} [shape=box, label="{label}"];')
        else:
            q = inst.questions_by_id[node.question]
            lines.append(f'  {name} [label="q:{q.id} c:{q.cost:g}"];')
            for answer, child in node.children.items():
                child_name = emit(child)
                lines.append(f'  {name} -> {child_name} [label="{answer}"];')
        return name

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"
