"""Cost models that score candidate terms.

Three variants: analytic (a LocalCost evaluated on the term's tree), a
portable additive tree ensemble loaded from JSON (inference only; training
lives in the separate trainer package), and a balanced objective combining a
delay and an area ensemble through normalized geometric mean.

Model JSON schema::

    {"objective": "delay"|"area", "base_score": number,
     "feature_names": [the 7 names in fixed order],
     "trees": [node, ...], "meta": {...}}
    node := {"split": int, "threshold": number, "default_left": bool,
             "left": node, "right": node}
          | {"leaf": number}

Numbers are IEEE-754 doubles and round-trip losslessly through save/load.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import ModelError
from .extraction import LocalCost
from .features import FEATURE_NAMES, FeatureVector, extract_features
from .expr import Term

# Parsed tree nodes: ("leaf", value) or ("split", feature, threshold,
# default_left, left, right). Tuples keep prediction tight.
_LEAF = "leaf"
_SPLIT = "split"

OBJECTIVES = ("delay", "area")


def _parse_node(doc, path):
    if not isinstance(doc, dict):
        raise ModelError(f"{path}: node must be an object")
    if "leaf" in doc:
        value = doc["leaf"]
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ModelError(f"{path}.leaf: non-finite leaf value")
        return (_LEAF, float(value))
    if "split" not in doc:
        raise ModelError(f"{path}: node needs 'leaf' or 'split'")
    feature = doc["split"]
    if not isinstance(feature, int) or not 0 <= feature < len(FEATURE_NAMES):
        raise ModelError(f"{path}.split: unknown feature {feature!r}")
    threshold = doc.get("threshold")
    if not isinstance(threshold, (int, float)) or not math.isfinite(threshold):
        raise ModelError(f"{path}.threshold: non-finite threshold")
    for side in ("left", "right"):
        if side not in doc:
            raise ModelError(f"{path}: split is missing {side!r}")
    left = _parse_node(doc["left"], path + ".left")
    right = _parse_node(doc["right"], path + ".right")
    return (_SPLIT, feature, float(threshold), bool(doc.get("default_left", True)),
            left, right)


def _node_to_doc(node):
    if node[0] == _LEAF:
        return {"leaf": node[1]}
    _, feature, threshold, default_left, left, right = node
    return {
        "split": feature,
        "threshold": threshold,
        "default_left": default_left,
        "left": _node_to_doc(left),
        "right": _node_to_doc(right),
    }


def _node_depth(node):
    if node[0] == _LEAF:
        return 0
    return 1 + max(_node_depth(node[4]), _node_depth(node[5]))


@dataclass(frozen=True)
class TreeEnsembleModel:
    objective: str
    base_score: float
    trees: tuple
    meta: dict = field(default_factory=dict)

    def predict(self, features: Union[FeatureVector, Sequence[float]]) -> float:
        """base_score plus the leaf reached in every tree; a feature below
        the threshold descends left, otherwise right (NaN takes the default
        branch; the featurizer never produces NaN, the schema keeps it for
        trainer compatibility).
        """
        x = tuple(features)
        total = self.base_score
        for tree in self.trees:
            node = tree
            while node[0] == _SPLIT:
                _, feature, threshold, default_left, left, right = node
                value = x[feature]
                if value != value:  # NaN
                    node = left if default_left else right
                elif value < threshold:
                    node = left
                else:
                    node = right
            total += node[1]
        return total

    def max_tree_depth(self) -> int:
        return max((_node_depth(t) for t in self.trees), default=0)

    def to_doc(self) -> dict:
        return {
            "objective": self.objective,
            "base_score": self.base_score,
            "feature_names": list(FEATURE_NAMES),
            "trees": [_node_to_doc(t) for t in self.trees],
            "meta": self.meta,
        }


def model_from_doc(doc: dict) -> TreeEnsembleModel:
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    objective = doc.get("objective")
    if objective not in OBJECTIVES:
        raise ModelError(f"objective: expected one of {OBJECTIVES}, got {objective!r}")
    base = doc.get("base_score", 0.0)
    if not isinstance(base, (int, float)) or not math.isfinite(base):
        raise ModelError("base_score: non-finite")
    names = doc.get("feature_names")
    if names is not None and tuple(names) != FEATURE_NAMES:
        raise ModelError(f"feature_names: unknown feature order {names!r}")
    trees_doc = doc.get("trees")
    if not isinstance(trees_doc, list):
        raise ModelError("trees: expected a list")
    trees = tuple(
        _parse_node(t, f"trees[{i}]") for i, t in enumerate(trees_doc))
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ModelError("meta: expected an object")
    return TreeEnsembleModel(objective, float(base), trees, meta)


def load_model(source) -> TreeEnsembleModel:
    """Parse and validate a model from a JSON string, bytes, file path or
    already-decoded dict. All validation happens here: predict never fails.
    """
    if isinstance(source, dict):
        return model_from_doc(source)
    if isinstance(source, bytes):
        text = source
    elif hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:  # a filesystem path
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid model JSON: {exc}") from exc
    return model_from_doc(doc)


def save_model(model: TreeEnsembleModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_doc(), fh, indent=1)
        fh.write("\n")


class AnalyticCostModel:
    """Wraps a LocalCost as a cost model over terms (tree semantics)."""

    def __init__(self, local_cost: LocalCost):
        self.local_cost = local_cost

    def cost(self, t: Term) -> float:
        return float(self.local_cost.term_cost(t))

    def describe(self) -> str:
        return f"analytic:{self.local_cost.kind}"


class EnsembleCostModel:
    def __init__(self, model: TreeEnsembleModel):
        self.model = model

    def cost(self, t: Term) -> float:
        return self.model.predict(extract_features(t))

    def describe(self) -> str:
        return f"ensemble:{self.model.objective}"


class BalancedCostModel:
    """Geometric mean of delay and area predictions, each normalized by a
    positive reference scale (typically the min-size seed's predictions).
    """

    def __init__(self, delay_model: TreeEnsembleModel,
                 area_model: TreeEnsembleModel,
                 delay_ref: float, area_ref: float):
        if not (delay_ref > 0 and area_ref > 0):
            raise ModelError("balanced cost needs positive reference scales")
        self.delay_model = delay_model
        self.area_model = area_model
        self.delay_ref = delay_ref
        self.area_ref = area_ref

    def cost(self, t: Term) -> float:
        f = extract_features(t)
        d = max(self.delay_model.predict(f), 0.0) / self.delay_ref
        a = max(self.area_model.predict(f), 0.0) / self.area_ref
        return math.sqrt(d * a)

    def describe(self) -> str:
        return "balanced"


CostModel = Union[AnalyticCostModel, EnsembleCostModel, BalancedCostModel]
