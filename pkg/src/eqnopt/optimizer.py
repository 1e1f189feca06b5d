"""End-to-end optimization pipeline and its estimator-style wrapper.

run_optimize drives one circuit through saturate -> pool-extract -> select
-> verify and returns the optimized circuit plus a full report. The
LogicOptimizer class wraps the same pipeline behind the familiar
fit/transform surface (get_params/set_params included) so it slots into
sklearn-style tooling; transform maps a sequence of circuits to their
optimized forms.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

from sklearn.base import BaseEstimator

from .costmodel import (
    AnalyticCostModel,
    BalancedCostModel,
    EnsembleCostModel,
    TreeEnsembleModel,
    load_model,
)
from .egraph import EGraph
from .equiv import EquivReport, check_equiv
from .errors import ModelError, StructuralError
from .expr import Circuit, STORE, circuit_to_term, term_to_circuit
from .extraction import (
    AST_DEPTH,
    AST_SIZE,
    CandidatePool,
    FeasibleCostTable,
    LocalCost,
    PoolConfig,
    build_pool,
    select_best_candidate,
)
from .features import FeatureVector, extract_features
from .rules import default_ruleset
from .saturation import SaturationLimits, SaturationReport, saturate

OBJECTIVES = ("delay", "area", "balanced", "ast-size", "ast-depth")

#: Floor for balanced-cost reference scales when a degenerate model predicts
#: a nonpositive value for the seed candidate.
_REF_FLOOR = 1e-9


def bundled_model_path(objective: str) -> str:
    name = {"delay": "toy_delay.json", "area": "toy_area.json"}[objective]
    return str(resources.files("eqnopt").joinpath("models", name))


@dataclass(frozen=True)
class RunConfig:
    objective: str = "area"
    delay_model: Optional[str] = None
    area_model: Optional[str] = None
    limits: SaturationLimits = SaturationLimits()
    pool: PoolConfig = PoolConfig()
    cec_exhaustive_limit: int = 12
    cec_vectors: int = 10_000
    include_double_negation: bool = True

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise StructuralError(f"unknown objective {self.objective!r}")
        if self.cec_exhaustive_limit < 0 or self.cec_vectors <= 0:
            raise StructuralError("CEC settings must be positive")
        self.limits.validate()


def _load_models(cfg: RunConfig):
    """Resolve the ensemble models the objective needs (bundled toys by
    default). Analytic objectives need none.
    """
    need_delay = cfg.objective in ("delay", "balanced")
    need_area = cfg.objective in ("area", "balanced")
    delay = area = None
    if need_delay:
        delay = load_model(cfg.delay_model or bundled_model_path("delay"))
        if delay.objective != "delay":
            raise ModelError(f"expected a delay model, got {delay.objective!r}")
    if need_area:
        area = load_model(cfg.area_model or bundled_model_path("area"))
        if area.objective != "area":
            raise ModelError(f"expected an area model, got {area.objective!r}")
    return delay, area


def _make_cost_model(cfg: RunConfig, delay: Optional[TreeEnsembleModel],
                     area: Optional[TreeEnsembleModel], seed_features):
    if cfg.objective == "ast-size":
        return AnalyticCostModel(LocalCost(AST_SIZE))
    if cfg.objective == "ast-depth":
        return AnalyticCostModel(LocalCost(AST_DEPTH))
    if cfg.objective == "delay":
        return EnsembleCostModel(delay)
    if cfg.objective == "area":
        return EnsembleCostModel(area)
    delay_ref = max(delay.predict(seed_features), _REF_FLOOR)
    area_ref = max(area.predict(seed_features), _REF_FLOOR)
    return BalancedCostModel(delay, area, delay_ref, area_ref)


@dataclass
class RunReport:
    objective: str
    seed: int
    input_features: FeatureVector
    saturation: SaturationReport
    pool_requested: int
    pool_size: int
    draw_counts: "dict[str, int]"
    pool_provenance: "dict[str, int]"
    selected_provenance: str
    selected_cost: float
    selected_features: FeatureVector
    cost_model: str
    cec: EquivReport
    wall_times: "dict[str, float]" = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        """Everything timing-dependent lives under wall_times_s so reports
        from identical seeded runs are byte-identical after dropping it.
        """
        return {
            "objective": self.objective,
            "seed": self.seed,
            "input": {"features": self.input_features._asdict()},
            "saturation": self.saturation.to_dict(),
            "pool": {
                "requested": self.pool_requested,
                "size_after_dedup": self.pool_size,
                "draw_counts": self.draw_counts,
                "provenance_counts": self.pool_provenance,
            },
            "selected": {
                "provenance": self.selected_provenance,
                "model_cost": self.selected_cost,
                "cost_model": self.cost_model,
                "features": self.selected_features._asdict(),
            },
            "cec": self.cec.to_dict(),
            "wall_times_s": {k: round(v, 6) for k, v in self.wall_times.items()},
        }

    def to_table(self) -> str:
        rows = [
            ("objective", self.objective),
            ("stop reason", self.saturation.stop_reason),
            ("iterations", self.saturation.iterations),
            ("e-nodes", self.saturation.enodes),
            ("e-classes", self.saturation.classes),
            ("pool size", f"{self.pool_size}/{self.pool_requested}"),
            ("selected", self.selected_provenance),
            ("model cost", f"{self.selected_cost:.6g}"),
            ("cec", self.cec.verdict),
            ("total wall s", f"{self.wall_times.get('total', 0.0):.3f}"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def run_optimize(circuit: Circuit, cfg: RunConfig = RunConfig(),
                 store=STORE) -> "tuple[Circuit, RunReport]":
    """Optimize one circuit and equivalence-check the result against it.
    The CEC verdict is recorded in the report; gating on it is the caller's
    job (the CLI exits nonzero on inequivalent).
    """
    times: "dict[str, float]" = {}
    t_start = time.monotonic()
    delay_model, area_model = _load_models(cfg)

    root_term = circuit_to_term(circuit, store)
    input_features = extract_features(root_term)

    t0 = time.monotonic()
    g = EGraph()
    root = g.add_term(root_term)
    rules = default_ruleset(cfg.include_double_negation)
    sat_report = saturate(g, rules, cfg.limits)
    times["saturate"] = time.monotonic() - t0

    t0 = time.monotonic()
    pool = build_pool(g, root, cfg.pool, store)
    times["extract"] = time.monotonic() - t0

    t0 = time.monotonic()
    seed_features = extract_features(pool.candidates[0].term)
    model = _make_cost_model(cfg, delay_model, area_model, seed_features)
    best, best_cost = select_best_candidate(pool, model)
    times["select"] = time.monotonic() - t0

    optimized = term_to_circuit(best.term, circuit.inputs, circuit.output_names)

    t0 = time.monotonic()
    cec = check_equiv(circuit, optimized, cfg.cec_exhaustive_limit,
                      cfg.cec_vectors, cfg.pool.seed)
    times["cec"] = time.monotonic() - t0
    times["total"] = time.monotonic() - t_start

    report = RunReport(
        objective=cfg.objective,
        seed=cfg.pool.seed,
        input_features=input_features,
        saturation=sat_report,
        pool_requested=pool.requested,
        pool_size=len(pool),
        draw_counts=pool.draw_counts,
        pool_provenance=pool.provenance_counts(),
        selected_provenance=best.provenance,
        selected_cost=best_cost,
        selected_features=extract_features(best.term),
        cost_model=model.describe(),
        cec=cec,
        wall_times=times,
    )
    return optimized, report


class LogicOptimizer(BaseEstimator):
    """Estimator-style wrapper around the optimization pipeline.

    Parameters mirror RunConfig; fit() validates them and loads the cost
    models once, transform() optimizes a sequence of circuits.
    """

    def __init__(self, objective="area", delay_model=None, area_model=None,
                 time_limit=300.0, node_limit=2_500_000, iter_limit=30,
                 pool_size=122, p_suboptimal=0.2, strategy_ratio=(1, 3),
                 seed=0, cec_exhaustive_limit=12, cec_vectors=10_000,
                 include_double_negation=True):
        self.objective = objective
        self.delay_model = delay_model
        self.area_model = area_model
        self.time_limit = time_limit
        self.node_limit = node_limit
        self.iter_limit = iter_limit
        self.pool_size = pool_size
        self.p_suboptimal = p_suboptimal
        self.strategy_ratio = strategy_ratio
        self.seed = seed
        self.cec_exhaustive_limit = cec_exhaustive_limit
        self.cec_vectors = cec_vectors
        self.include_double_negation = include_double_negation

    def _config(self) -> RunConfig:
        return RunConfig(
            objective=self.objective,
            delay_model=self.delay_model,
            area_model=self.area_model,
            limits=SaturationLimits(self.time_limit, self.node_limit,
                                    self.iter_limit),
            pool=PoolConfig(pool_size=self.pool_size,
                            p_suboptimal=self.p_suboptimal,
                            strategy_ratio=tuple(self.strategy_ratio),
                            seed=self.seed),
            cec_exhaustive_limit=self.cec_exhaustive_limit,
            cec_vectors=self.cec_vectors,
            include_double_negation=self.include_double_negation,
        )

    def fit(self, X=None, y=None):
        self.config_ = self._config()
        self.models_ = _load_models(self.config_)
        return self

    def optimize(self, circuit: Circuit) -> "tuple[Circuit, RunReport]":
        if not hasattr(self, "config_"):
            self.fit()
        if not isinstance(circuit, Circuit):
            raise TypeError(f"expected Circuit, got {type(circuit).__name__}")
        return run_optimize(circuit, self.config_)

    def transform(self, X: Sequence[Circuit]) -> "list[Circuit]":
        out = []
        self.reports_ = []
        for circuit in X:
            optimized, report = self.optimize(circuit)
            self.reports_.append(report)
            out.append(optimized)
        return out

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)
