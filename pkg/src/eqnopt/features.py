"""The 7-entry regression feature vector and its sklearn-style transformer.

Feature order is fixed everywhere (CSV columns, model JSON, trainer):
and_count, or_count, not_count, node_count, depth, density, edge_sum.
Counts are taken over the structurally shared DAG; a CONCAT root counts as a
node but not as a Boolean operator.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .expr import AND, NOT, OR, Circuit, Term, circuit_to_term, dag_stats, postorder


class FeatureVector(NamedTuple):
    and_count: int
    or_count: int
    not_count: int
    node_count: int
    depth: int
    density: float
    edge_sum: int

    def to_array(self) -> np.ndarray:
        return np.asarray(self, dtype=np.float64)


FEATURE_NAMES = tuple(FeatureVector._fields)


def extract_features(t: Term) -> FeatureVector:
    counts = {AND: 0, OR: 0, NOT: 0}
    for node in postorder(t):
        if node.op in counts:
            counts[node.op] += 1
    stats = dag_stats(t)
    return FeatureVector(
        and_count=counts[AND],
        or_count=counts[OR],
        not_count=counts[NOT],
        node_count=stats.node_count,
        depth=stats.depth,
        density=stats.density,
        edge_sum=stats.edge_sum,
    )


def _as_term(x) -> Term:
    if isinstance(x, Term):
        return x
    if isinstance(x, Circuit):
        return circuit_to_term(x)
    raise TypeError(f"expected Term or Circuit, got {type(x).__name__}")


class TermFeaturizer(TransformerMixin, BaseEstimator):
    """Stateless transformer: a sequence of terms or circuits becomes the
    (n, 7) float feature matrix, so downstream regressors can consume
    circuits straight from the parser.
    """

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        rows = [extract_features(_as_term(x)) for x in X]
        return np.asarray(rows, dtype=np.float64).reshape(len(rows), len(FEATURE_NAMES))

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURE_NAMES, dtype=object)
