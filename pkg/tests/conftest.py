import pytest

from eqnopt import (
    EGraph,
    SaturationLimits,
    circuit_to_term,
    parse_eqn,
    saturate,
)
from eqnopt.fuzz import fuzz_corpus

FIG_EQN = "INORDER = x y z; OUTORDER = f; f = x*y + x*z;"


@pytest.fixture(scope="session")
def factoring_graph():
    """The x*y + x*z circuit saturated to fixpoint with the full rule set."""
    circuit = parse_eqn(FIG_EQN)
    term = circuit_to_term(circuit)
    graph = EGraph()
    root = graph.add_term(term)
    report = saturate(graph, limits=SaturationLimits(10.0, 10_000, 10))
    assert report.stop_reason == "saturated"
    return circuit, term, graph, graph.find(root), report


@pytest.fixture(scope="session")
def small_corpus():
    """Forty deterministic random circuits for module-level property tests."""
    return fuzz_corpus(40, seed=7)
