import itertools
import random

import pytest

from eqnopt import STORE, Circuit, dag_stats, evaluate, tree_size
from eqnopt.errors import EvalError, StructuralError
from eqnopt.expr import circuit_to_term, postorder, term_to_circuit

from oracles import naive_tree_size, truth_table


def fig3_term():
    x, y, z = STORE.var("x"), STORE.var("y"), STORE.var("z")
    return STORE.or_(STORE.and_(x, y), STORE.and_(x, z))


def test_interning_idempotent():
    assert STORE.var("a") is STORE.var("a")
    a, b = STORE.var("a"), STORE.var("b")
    assert STORE.and_(a, b) is STORE.and_(a, b)
    assert STORE.and_(a, b) is not STORE.and_(b, a)


def test_interning_shares_subterms():
    # (x*y)+(x*z) has exactly 6 distinct nodes: x, y, z, x*y, x*z, the sum.
    t = fig3_term()
    assert len(list(postorder(t))) == 6


def test_arity_checked():
    a = STORE.var("a")
    with pytest.raises(StructuralError):
        STORE.intern("and", (a,))
    with pytest.raises(StructuralError):
        STORE.intern("not", (a, a))
    with pytest.raises(StructuralError):
        STORE.intern("bogus", ())
    with pytest.raises(StructuralError):
        STORE.const(2)


def test_concat_only_at_root():
    a, b = STORE.var("a"), STORE.var("b")
    c = STORE.concat(a, b)
    with pytest.raises(StructuralError):
        STORE.concat(c, a)
    with pytest.raises(StructuralError):
        STORE.concat()


def test_evaluate_basics():
    a, b = STORE.var("a"), STORE.var("b")
    assert evaluate(a, {"a": 1}) == 1
    assert evaluate(STORE.not_(STORE.and_(a, b)), {"a": 1, "b": 1}) == 0
    assert evaluate(fig3_term(), {"x": 1, "y": 0, "z": 1}) == 1


def test_evaluate_unbound_variable():
    with pytest.raises(EvalError):
        evaluate(STORE.var("q"), {})


def test_evaluate_concat_returns_vector():
    a, b = STORE.var("a"), STORE.var("b")
    t = STORE.concat(a, STORE.not_(b))
    assert evaluate(t, {"a": 1, "b": 1}) == (1, 0)


def test_evaluate_matches_reference_on_all_rows():
    t = fig3_term()
    rows = truth_table(t, ("x", "y", "z"))
    for i, bits in enumerate(itertools.product((0, 1), repeat=3)):
        assert evaluate(t, dict(zip(("x", "y", "z"), bits))) == rows[i]


def test_dag_stats_single_node():
    stats = dag_stats(STORE.var("a"))
    assert stats == (1, 0, 1, 0.0)


def test_dag_stats_not():
    stats = dag_stats(STORE.not_(STORE.var("a")))
    assert stats.node_count == 2
    assert stats.edge_sum == 1
    assert stats.depth == 2
    assert stats.density == 0.5  # 1 / (2*1)


def test_dag_stats_shared_dag():
    stats = dag_stats(fig3_term())
    assert stats == (6, 6, 3, 0.2)  # 6 edges / (6*5)


def test_tree_without_sharing_has_n_minus_1_edges():
    rng = random.Random(11)
    for i in range(25):
        # fresh variables everywhere -> a pure tree
        counter = itertools.count()
        def tree(depth):
            if depth == 0 or rng.random() < 0.3:
                return STORE.var(f"v{i}_{next(counter)}")
            if rng.random() < 0.3:
                return STORE.not_(tree(depth - 1))
            op = STORE.and_ if rng.random() < 0.5 else STORE.or_
            return op(tree(depth - 1), tree(depth - 1))
        t = tree(4)
        stats = dag_stats(t)
        assert stats.edge_sum == stats.node_count - 1
        assert tree_size(t) == stats.node_count


def test_density_bounds_on_random_circuits(small_corpus):
    for _, circuit in small_corpus:
        stats = dag_stats(circuit_to_term(circuit))
        assert 0.0 <= stats.density <= 1.0
        assert stats.edge_sum <= stats.node_count * (stats.node_count - 1)


def test_tree_size_matches_reference(small_corpus):
    for _, circuit in small_corpus[:10]:
        t = circuit_to_term(circuit)
        assert tree_size(t) == naive_tree_size(t)


def test_circuit_validation():
    a = STORE.var("a")
    with pytest.raises(StructuralError):
        Circuit(("a", "a"), (("f", a),)).validate()
    with pytest.raises(StructuralError):
        Circuit(("a",), (("a", a),)).validate()  # name clash
    with pytest.raises(StructuralError):
        Circuit(("b",), (("f", a),)).validate()  # undeclared input


def test_circuit_term_bridge_round_trip():
    a, b = STORE.var("a"), STORE.var("b")
    c = Circuit(("a", "b"), (("f", STORE.and_(a, b)), ("g", STORE.not_(a)))).validate()
    t = circuit_to_term(c)
    assert t.op == "concat"
    back = term_to_circuit(t, c.inputs, c.output_names)
    assert back == c
    single = Circuit(("a",), (("f", a),))
    assert circuit_to_term(single) is a
