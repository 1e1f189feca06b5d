import itertools

import pytest

from eqnopt import STORE, default_ruleset, parse_pattern
from eqnopt.egraph import PNode, PVar, pattern_to_term, pattern_variables
from eqnopt.errors import StructuralError
from eqnopt.expr import AND, CONST, NOT
from eqnopt.rules import RewriteRule

from oracles import truth_table


def test_ruleset_size():
    assert len(default_ruleset(include_double_negation=False)) == 22
    assert len(default_ruleset()) == 23


def test_every_rule_is_truth_table_sound():
    # independent check: instantiate both sides as concrete terms over fresh
    # variables and compare full truth tables
    for rule in default_ruleset():
        vs = sorted(pattern_variables(rule.lhs) | pattern_variables(rule.rhs))
        env = {v: STORE.var(f"tt_{v}") for v in vs}
        names = [f"tt_{v}" for v in vs]
        lhs = pattern_to_term(rule.lhs, env)
        rhs = pattern_to_term(rule.rhs, env)
        assert truth_table(lhs, names) == truth_table(rhs, names), rule.name


def test_directions():
    rules = {r.name: r for r in default_ruleset()}
    assert not rules["and-identity"].bidirectional  # a * 1 => a, one way
    assert rules["and-identity"].rhs == PVar("a")
    assert rules["and-identity"].lhs == PNode(
        AND, None, (PVar("a"), PNode(CONST, 1, ())))
    for name in ("commute-and", "commute-or", "assoc-and", "assoc-or"):
        assert rules[name].bidirectional
    directed = [v for r in rules.values() for v in r.directed_views()]
    assert len(directed) == 23 + 4  # four bidirectional rules add a reverse


def test_rule_groups_present():
    names = {r.name for r in default_ruleset(include_double_negation=False)}
    assert {"and-null", "or-null", "and-complement", "or-complement",
            "cover-and", "cover-or", "combine-and", "combine-or",
            "idem-and", "idem-or", "distrib-and", "factor-and", "factor-or",
            "consensus-and", "consensus-or",
            "demorgan-and", "demorgan-or"} <= names


def test_unsound_rule_is_unconstructible():
    with pytest.raises(StructuralError):
        RewriteRule("broken", parse_pattern("(& a b)"), parse_pattern("(| a b)"))


def test_rhs_variables_must_be_bound():
    with pytest.raises(StructuralError):
        RewriteRule("unbound", parse_pattern("a"), parse_pattern("(& a b)"))


def test_pattern_parse_errors():
    for bad in ["(& a", "(?? a b)", "(& a b c)", "(! a) b"]:
        with pytest.raises(StructuralError):
            parse_pattern(bad)


def test_pattern_parse_shapes():
    p = parse_pattern("(! (& a 1))")
    assert p == PNode(NOT, None,
                      (PNode(AND, None, (PVar("a"), PNode(CONST, 1, ()))),))
