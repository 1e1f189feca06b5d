import json
import math
import random

import pytest

from eqnopt import STORE, FeatureVector, load_model, save_model
from eqnopt.costmodel import (
    AnalyticCostModel,
    BalancedCostModel,
    EnsembleCostModel,
    TreeEnsembleModel,
    model_from_doc,
)
from eqnopt.errors import ModelError
from eqnopt.extraction import AST_SIZE, LocalCost
from eqnopt.features import FEATURE_NAMES


def leaf(v):
    return {"leaf": v}


def split(feature, threshold, left, right):
    return {"split": feature, "threshold": threshold, "default_left": True,
            "left": left, "right": right}


def doc(trees, base=0.0, objective="delay"):
    return {"objective": objective, "base_score": base,
            "feature_names": list(FEATURE_NAMES), "trees": trees, "meta": {}}


def vec(**kw):
    base = dict(and_count=0, or_count=0, not_count=0, node_count=1,
                depth=1, density=0.0, edge_sum=0)
    base.update(kw)
    return FeatureVector(**base)


def test_constant_model():
    m = model_from_doc(doc([leaf(3.5)]))
    assert m.predict(vec()) == 3.5
    assert m.predict(vec(node_count=100)) == 3.5


def test_single_split():
    m = model_from_doc(doc([split(3, 4.0, leaf(1.0), leaf(2.0))]))
    assert m.predict(vec(node_count=6)) == 2.0
    assert m.predict(vec(node_count=3)) == 1.0
    assert m.predict(vec(node_count=4)) == 2.0  # boundary goes right


def test_two_trees_sum():
    m = model_from_doc(doc([split(3, 4.0, leaf(1.0), leaf(2.0))] * 2))
    assert m.predict(vec(node_count=6)) == 4.0


def test_base_score_added():
    m = model_from_doc(doc([leaf(1.0)], base=10.0))
    assert m.predict(vec()) == 11.0


def test_tree_order_invariance():
    trees = [split(3, 4.0, leaf(1.0), leaf(2.0)),
             split(4, 2.0, leaf(-1.0), leaf(0.5)),
             leaf(0.25)]
    a = model_from_doc(doc(trees))
    b = model_from_doc(doc(list(reversed(trees))))
    for _ in range(20):
        f = vec(node_count=random.randint(1, 10), depth=random.randint(1, 6))
        assert a.predict(f) == b.predict(f)


def test_load_rejects_unknown_feature():
    with pytest.raises(ModelError) as err:
        model_from_doc(doc([split(9, 1.0, leaf(0.0), leaf(1.0))]))
    assert "unknown feature" in str(err.value)
    assert "trees[0]" in str(err.value)


def test_load_error_paths():
    with pytest.raises(ModelError, match=r"trees\[0\].left"):
        model_from_doc(doc([split(0, 1.0, {"bogus": 1}, leaf(1.0))]))
    with pytest.raises(ModelError, match="non-finite"):
        model_from_doc(doc([leaf(float("nan"))]))
    with pytest.raises(ModelError, match="objective"):
        model_from_doc(doc([leaf(0.0)], objective="power"))
    with pytest.raises(ModelError, match="feature_names"):
        bad = doc([leaf(0.0)])
        bad["feature_names"] = ["foo"] * 7
        model_from_doc(bad)
    with pytest.raises(ModelError, match="missing"):
        model_from_doc(doc([{"split": 0, "threshold": 1.0, "left": leaf(0.0)}]))
    with pytest.raises(ModelError, match="JSON"):
        load_model("{not json")


def test_save_load_round_trip_exact(tmp_path):
    rng = random.Random(42)
    trees = []
    for _ in range(6):
        trees.append(split(rng.randrange(7), rng.random() * 10,
                           leaf(rng.gauss(0, 1)),
                           split(rng.randrange(7), rng.random() * 5,
                                 leaf(rng.gauss(0, 1)), leaf(rng.gauss(0, 1)))))
    model = model_from_doc(doc(trees, base=rng.gauss(0, 1)))
    path = tmp_path / "m.json"
    save_model(model, str(path))
    again = load_model(str(path))
    for _ in range(100):
        f = FeatureVector(*(rng.random() * 20 for _ in range(7)))
        assert model.predict(f) == again.predict(f)  # bit-exact


def test_analytic_cost_is_tree_size():
    x, y, z = (STORE.var(n) for n in "xyz")
    factored = STORE.and_(x, STORE.or_(y, z))
    assert AnalyticCostModel(LocalCost(AST_SIZE)).cost(factored) == 5.0


def test_ensemble_cost_uses_features():
    m = model_from_doc(doc([split(3, 4.0, leaf(1.0), leaf(2.0))]))
    x, y, z = (STORE.var(n) for n in "xyz")
    t = STORE.or_(STORE.and_(x, y), STORE.and_(x, z))  # node_count 6
    assert EnsembleCostModel(m).cost(t) == 2.0


def test_balanced_normalizes_reference_to_one():
    delay = model_from_doc(doc([leaf(2.0)], base=1.0))
    area = model_from_doc(doc([leaf(5.0)], base=1.0, objective="area"))
    t = STORE.var("a")
    d_ref = delay.predict(FeatureVector(*map(float, (0, 0, 0, 1, 1, 0, 0))))
    a_ref = area.predict(FeatureVector(*map(float, (0, 0, 0, 1, 1, 0, 0))))
    model = BalancedCostModel(delay, area, d_ref, a_ref)
    assert math.isclose(model.cost(t), 1.0)


def test_balanced_requires_positive_refs():
    m = model_from_doc(doc([leaf(1.0)]))
    a = model_from_doc(doc([leaf(1.0)], objective="area"))
    with pytest.raises(ModelError):
        BalancedCostModel(m, a, 0.0, 1.0)


def test_max_tree_depth():
    m = model_from_doc(doc([split(0, 1.0, leaf(0.0),
                                  split(1, 2.0, leaf(0.0), leaf(1.0)))]))
    assert m.max_tree_depth() == 2
    assert model_from_doc(doc([leaf(1.0)])).max_tree_depth() == 0


def test_bundled_toy_models_load():
    from eqnopt.optimizer import bundled_model_path

    delay = load_model(bundled_model_path("delay"))
    area = load_model(bundled_model_path("area"))
    assert delay.objective == "delay"
    assert area.objective == "area"
    assert json.loads(json.dumps(delay.to_doc())) == delay.to_doc()
