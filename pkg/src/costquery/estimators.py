"""Scikit-learn style estimator over the query-tree builders.

Rows of X are the hypotheses, columns are the questions, entries are answer
ids: fitting builds an identification tree over the rows, and prediction
identifies which fitted row a new answer vector belongs to by descending the
tree, reading only the features along its path.  This makes the builders
composable with sklearn tooling (``get_params``, ``clone``, pipelines that
pass integer matrices through).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .builders import epsilon_greedy_tree, greedy_tree, greedy_rounded_tree
from .instance import Instance, Prior, Question
from .oracle import optimal_tree
from .tree import Internal, tree_cost

_ALGORITHMS = ("greedy", "epsilon", "rounded", "optimal")


class QueryTreeIdentifier(BaseEstimator):
    """Cost-sensitive identification tree with a fit/predict interface.

    Parameters
    ----------
    algorithm : {"greedy", "epsilon", "rounded", "optimal"}
        Tree construction strategy.  "epsilon" relaxes the greedy argmax by
        the ``epsilon`` factor; "rounded" runs greedy on a rounded prior
        (needs more than two rows); "optimal" runs the exact solver (bounded
        by ``oracle_cap`` rows).
    epsilon : float
        Selection slack in [0, 1); only used by ``algorithm="epsilon"``.
    oracle_cap : int
        Row limit for the exact solver.

    Attributes
    ----------
    tree_ : query tree over the fitted rows
    instance_ : the underlying problem instance
    expected_cost_ : prior-weighted cost of identification
    hypotheses_ : per-row labels returned by :meth:`predict`
    """

    def __init__(self, algorithm="greedy", epsilon=0.0, oracle_cap=14):
        self.algorithm = algorithm
        self.epsilon = epsilon
        self.oracle_cap = oracle_cap

    def fit(self, X, y=None, costs=None, prior=None):
        """Build the identification tree for the rows of X.

        ``costs`` (per column, default 1) and ``prior`` (per row, default
        uniform) complete the problem statement.  ``y`` supplies the labels
        predict returns; row indices are used when omitted.
        """
        X = check_array(X, dtype=int)
        n, m = X.shape
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(
                f"algorithm must be one of {_ALGORITHMS}, got {self.algorithm!r}"
            )
        if y is None:
            labels = np.arange(n)
        else:
            labels = np.asarray(y)
            if labels.shape[0] != n:
                raise ValueError(f"y has {labels.shape[0]} entries for {n} rows")
        if costs is None:
            costs = np.ones(m)
        else:
            costs = np.asarray(costs, dtype=float)
            if costs.shape != (m,):
                raise ValueError(f"costs must have shape ({m},)")
        if prior is None:
            prior_mass = np.full(n, 1.0 / n)
        else:
            prior_mass = np.asarray(prior, dtype=float)
            if prior_mass.shape != (n,):
                raise ValueError(f"prior must have shape ({n},)")

        inst = Instance(
            hypotheses=tuple(str(i) for i in range(n)),
            prior=Prior(tuple(prior_mass)),
            questions=tuple(
                Question(f"q{j}", float(costs[j]), tuple(int(a) for a in X[:, j]))
                for j in range(m)
            ),
        )

        if self.algorithm == "greedy":
            tree = greedy_tree(inst)
        elif self.algorithm == "epsilon":
            tree = epsilon_greedy_tree(inst, self.epsilon)
        elif self.algorithm == "rounded":
            tree, _ = greedy_rounded_tree(inst)
        else:
            tree = optimal_tree(inst, cap=self.oracle_cap).tree

        report = tree_cost(tree, inst)
        self.instance_ = inst
        self.tree_ = tree
        self.cost_report_ = report
        self.expected_cost_ = report.expected_cost
        self.hypotheses_ = labels
        self.n_features_in_ = m
        return self

    def predict(self, X):
        """Identify each row of X by descending the fitted tree.

        Only the features on the root-to-leaf path are read; a row whose
        answers match no fitted hypothesis raises ``ValueError``.
        """
        check_is_fitted(self, "tree_")
        X = check_array(X, dtype=int)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        positions = self.instance_.question_positions
        out = []
        for row in X:
            node = self.tree_
            while isinstance(node, Internal):
                answer = int(row[positions[node.question]])
                child = node.children.get(answer)
                if child is None:
                    raise ValueError(
                        f"answer {answer} to question {node.question!r} matches "
                        "no fitted hypothesis"
                    )
                node = child
            out.append(self.hypotheses_[node.hypothesis])
        return np.asarray(out)

    def decision_path_cost(self, X):
        """Identification cost incurred for each row of X."""
        check_is_fitted(self, "tree_")
        X = check_array(X, dtype=int)
        positions = self.instance_.question_positions
        by_id = self.instance_.questions_by_id
        out = []
        for row in X:
            node = self.tree_
            cost = 0.0
            while isinstance(node, Internal):
                cost += by_id[node.question].cost
                answer = int(row[positions[node.question]])
                child = node.children.get(answer)
                if child is None:
                    raise ValueError(
                        f"answer {answer} to question {node.question!r} matches "
                        "no fitted hypothesis"
                    )
                node = child
            out.append(cost)
        return np.asarray(out)
