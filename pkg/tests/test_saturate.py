import time

from eqnopt import (
    EGraph,
    STORE,
    SaturationLimits,
    check_equiv,
    circuit_to_term,
    parse_eqn,
    sample_candidate,
    saturate,
    term_to_circuit,
)
from eqnopt.expr import CONCAT, CONST
from eqnopt.extraction import AST_SIZE, FeasibleCostTable, LocalCost

import random


def test_bare_var_saturates_immediately():
    g = EGraph()
    g.add_term(STORE.var("a"))
    report = saturate(g)
    assert report.stop_reason == "saturated"
    assert report.iterations == 1
    assert report.enodes == 1


def test_factoring_reaches_factored_shape(factoring_graph):
    _, _, g, root, _ = factoring_graph
    x, y, z = (STORE.var(n) for n in "xyz")
    factored = STORE.and_(x, STORE.or_(y, z))
    assert g.lookup_term(factored) == root


def test_contradiction_folds_to_zero():
    g = EGraph()
    a = STORE.var("a")
    root = g.add_term(STORE.and_(a, STORE.not_(a)))
    report = saturate(g, limits=SaturationLimits(5.0, 10_000, 10))
    assert report.stop_reason == "saturated"
    zero = g.lookup_term(STORE.const(0))
    assert zero is not None and zero == g.find(root)


def test_tautology_folds_to_one():
    g = EGraph()
    a = STORE.var("a")
    root = g.add_term(STORE.or_(STORE.not_(a), a))
    saturate(g, limits=SaturationLimits(5.0, 10_000, 10))
    assert g.lookup_term(STORE.const(1)) == g.find(root)


def test_node_limit_stops_with_reason():
    circuit = parse_eqn(
        "INORDER = a b c d; OUTORDER = f;"
        "f = (a*b + !c)*(c + d*a) + !(a*d) + b*!d;")
    g = EGraph()
    g.add_term(circuit_to_term(circuit))
    report = saturate(g, limits=SaturationLimits(30.0, 120, 20))
    assert report.stop_reason == "nodes"


def test_time_limit_stops_quickly(small_corpus):
    _, circuit = small_corpus[0]
    g = EGraph()
    g.add_term(circuit_to_term(circuit))
    t0 = time.monotonic()
    report = saturate(g, limits=SaturationLimits(0.3, 10_000_000, 1000))
    wall = time.monotonic() - t0
    assert report.stop_reason == "time"
    assert wall < 0.8


def test_saturation_only_coarsens_equivalences(small_corpus):
    # classes equal after k rounds stay equal after more rounds, and every
    # represented term stays represented
    _, circuit = small_corpus[1]
    term = circuit_to_term(circuit)
    g = EGraph()
    g.add_term(term)
    saturate(g, limits=SaturationLimits(5.0, 20_000, 1))
    shapes = list(g.hashcons)
    pairs = []
    ids = sorted(g.classes)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if g.find(a) == g.find(b):
                pairs.append((a, b))
    saturate(g, limits=SaturationLimits(5.0, 20_000, 2))
    for a, b in pairs:
        assert g.find(a) == g.find(b)
    for shape in shapes:
        canon = tuple(g.find(c) for c in shape.children)
        assert type(shape)(shape.op, shape.payload, canon) in g.hashcons


def test_concat_is_opaque_to_rules():
    circuit = parse_eqn(
        "INORDER = a b; OUTORDER = f g; f = a * b; g = !(a + b);")
    g = EGraph()
    root = g.add_term(circuit_to_term(circuit))
    saturate(g, limits=SaturationLimits(5.0, 5_000, 6))
    root = g.find(root)
    for cid, nodes in g.classes.items():
        for node in nodes:
            if node.op == CONCAT:
                assert cid == root
    # the concat class contains nothing but the concat shape
    assert all(n.op == CONCAT for n in g.classes[root])


def test_determinism_same_input_same_graph(small_corpus):
    _, circuit = small_corpus[2]
    term = circuit_to_term(circuit)
    dumps = []
    for _ in range(2):
        g = EGraph()
        g.add_term(term)
        saturate(g, limits=SaturationLimits(60.0, 5_000, 3))
        dumps.append(g.dump())
    assert dumps[0] == dumps[1]


def test_sampled_terms_stay_equivalent(small_corpus):
    # soundness: anything extractable from the saturated root class computes
    # the same function as the input circuit
    for _, circuit in small_corpus[:6]:
        term = circuit_to_term(circuit)
        g = EGraph()
        root = g.add_term(term)
        saturate(g, limits=SaturationLimits(5.0, 8_000, 3))
        table = FeasibleCostTable(g, LocalCost(AST_SIZE))
        for k in range(8):
            rng = random.Random(f"sound:{k}")
            t = sample_candidate(g, g.find(root), table, "b", rng,
                                 p_suboptimal=1.0)
            sampled = term_to_circuit(t, circuit.inputs, circuit.output_names)
            assert check_equiv(circuit, sampled).verdict == "equivalent"
