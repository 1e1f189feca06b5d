"""eqnopt: Boolean circuit optimization with e-graph rewriting.

Parse ABC-style equation files, explore equivalent logic forms by equality
saturation over Boolean-algebra rules, pick an implementation via pool
extraction under analytic or learned cost models, and verify every result
with combinational equivalence checking.
"""

from .egraph import EGraph, ENode, PNode, PVar
from .equiv import EquivReport, check_equiv
from .eqnformat import parse_eqn, sexpr_to_term, term_to_sexpr, write_eqn
from .errors import (
    CapacityError,
    EqnOptError,
    EvalError,
    ExtractionError,
    InterfaceError,
    ModelError,
    ParseError,
    SelectionError,
    StructuralError,
)
from .expr import (
    Circuit,
    DagStats,
    STORE,
    Term,
    TermStore,
    circuit_to_term,
    dag_stats,
    evaluate,
    evaluate_packed,
    term_to_circuit,
    tree_size,
)
from .extraction import (
    AST_DEPTH,
    AST_SIZE,
    WEIGHTED_OPS,
    CandidatePool,
    FeasibleCostTable,
    LocalCost,
    PoolConfig,
    build_pool,
    compute_feasible,
    extract_greedy,
    sample_candidate,
    select_best,
)
from .features import FEATURE_NAMES, FeatureVector, TermFeaturizer, extract_features
from .costmodel import (
    AnalyticCostModel,
    BalancedCostModel,
    EnsembleCostModel,
    TreeEnsembleModel,
    load_model,
    save_model,
)
from .fuzz import fuzz_corpus, random_circuit
from .optimizer import LogicOptimizer, RunConfig, RunReport, run_optimize
from .rules import RewriteRule, default_ruleset, parse_pattern
from .saturation import TEST_LIMITS, SaturationLimits, SaturationReport, saturate

__version__ = "0.1.0"
