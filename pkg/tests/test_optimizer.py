import json

import pytest
from sklearn.base import clone

from eqnopt import LogicOptimizer, RunConfig, check_equiv, parse_eqn, run_optimize
from eqnopt.errors import ModelError, StructuralError
from eqnopt.expr import AND, OR, tree_size
from eqnopt.extraction import PoolConfig
from eqnopt.optimizer import bundled_model_path
from eqnopt.saturation import TEST_LIMITS

FIG = "INORDER = x y z; OUTORDER = f; f = x*y + x*z;"


def cfg(**kw):
    kw.setdefault("limits", TEST_LIMITS)
    return RunConfig(**kw)


def test_identity_circuit_stays_identity():
    circuit = parse_eqn("INORDER = a; OUTORDER = f; f = a;")
    for objective in ("area", "ast-size"):
        optimized, report = run_optimize(circuit, cfg(objective=objective))
        assert report.cec.verdict == "equivalent"
        assert check_equiv(circuit, optimized).verdict == "equivalent"


def test_factoring_run_with_ast_size():
    circuit = parse_eqn(FIG)
    optimized, report = run_optimize(circuit, cfg(objective="ast-size"))
    root = optimized.outputs[0][1]
    assert tree_size(root) == 5
    assert root.op == AND
    assert {c.op for c in root.children} == {"var", OR}
    assert report.selected_cost == 5.0
    assert report.cec.verdict == "equivalent"
    assert report.input_features.node_count == 6


def test_all_objectives_run_and_verify():
    circuit = parse_eqn(FIG)
    for objective in ("delay", "area", "balanced", "ast-size", "ast-depth"):
        optimized, report = run_optimize(circuit, cfg(objective=objective))
        assert report.cec.verdict == "equivalent", objective
        assert report.objective == objective


def test_deterministic_given_seed(small_corpus):
    from eqnopt import write_eqn

    _, circuit = small_corpus[3]
    outs = []
    reports = []
    for _ in range(2):
        optimized, report = run_optimize(
            circuit, cfg(objective="area", pool=PoolConfig(seed=77)))
        outs.append(write_eqn(optimized))
        doc = report.to_json_dict()
        del doc["wall_times_s"]
        reports.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]
    assert reports[0] == reports[1]


def test_report_json_round_trips():
    circuit = parse_eqn(FIG)
    _, report = run_optimize(circuit, cfg())
    doc = report.to_json_dict()
    assert json.loads(json.dumps(doc)) == doc
    assert set(doc) == {"objective", "seed", "input", "saturation", "pool",
                        "selected", "cec", "wall_times_s"}
    assert doc["pool"]["requested"] == 122


def test_selected_never_worse_than_seeds(small_corpus):
    from eqnopt.costmodel import EnsembleCostModel, load_model
    from eqnopt import EGraph, circuit_to_term, saturate, build_pool

    model = EnsembleCostModel(load_model(bundled_model_path("area")))
    for _, circuit in small_corpus[:6]:
        g = EGraph()
        root = g.add_term(circuit_to_term(circuit))
        saturate(g, limits=TEST_LIMITS)
        pool = build_pool(g, root, PoolConfig(seed=5))
        costs = {c.provenance: model.cost(c.term) for c in pool.candidates}
        best = min(model.cost(c.term) for c in pool.candidates)
        assert best <= costs["min_size"] + 1e-12
        if "min_depth" in costs:
            assert best <= costs["min_depth"] + 1e-12


def test_objective_model_mismatch_rejected():
    circuit = parse_eqn(FIG)
    with pytest.raises(ModelError):
        run_optimize(circuit, cfg(objective="delay",
                                  delay_model=bundled_model_path("area")))


def test_bad_objective_rejected():
    with pytest.raises(StructuralError):
        RunConfig(objective="speed")


def test_logic_optimizer_sklearn_surface():
    opt = LogicOptimizer(objective="ast-size", pool_size=10, seed=4,
                         time_limit=5.0, node_limit=20_000, iter_limit=3)
    params = opt.get_params()
    assert params["pool_size"] == 10
    cloned = clone(opt)
    assert cloned.get_params() == params
    opt.set_params(seed=5)
    assert opt.seed == 5

    circuits = [parse_eqn(FIG), parse_eqn("INORDER = a; OUTORDER = f; f = a;")]
    out = opt.fit(circuits).transform(circuits)
    assert len(out) == 2
    assert len(opt.reports_) == 2
    assert all(r.cec.verdict == "equivalent" for r in opt.reports_)
    with pytest.raises(TypeError):
        opt.optimize("not a circuit")


def test_multi_output_circuit_round_trip():
    circuit = parse_eqn(
        "INORDER = a b c; OUTORDER = f g; f = a*b + a*c; g = !(a + b);")
    optimized, report = run_optimize(circuit, cfg(objective="ast-size"))
    assert optimized.output_names == ("f", "g")
    assert report.cec.verdict == "equivalent"
