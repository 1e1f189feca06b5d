"""The Boolean-algebra rewrite rule set.

Rules are written as S-expression pattern pairs over the pattern variables
a, b, c. "=>" rules fire left-to-right only (pure simplifications); "<=>"
rules fire both ways. Every rule is checked for truth-table equivalence at
construction time, so an unsound rule cannot be built.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from .egraph import PNode, PVar, PatternLike, pattern_variables
from .errors import StructuralError
from .expr import AND, CONST, NOT, OR

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_OPS = {"&": (AND, 2), "|": (OR, 2), "!": (NOT, 1)}


def parse_pattern(text: str) -> PatternLike:
    """Pattern syntax mirrors the S-expression term format; bare identifiers
    are pattern variables and 0/1 are constants.
    """
    tokens = _TOKEN.findall(text)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise StructuralError(f"truncated pattern {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            op_tok = tokens[pos]
            pos += 1
            if op_tok not in _OPS:
                raise StructuralError(f"unknown pattern operator {op_tok!r}")
            op, arity = _OPS[op_tok]
            children = []
            while pos < len(tokens) and tokens[pos] != ")":
                children.append(parse())
            if pos >= len(tokens):
                raise StructuralError(f"unbalanced pattern {text!r}")
            pos += 1  # ")"
            if len(children) != arity:
                raise StructuralError(f"{op_tok} arity in {text!r}")
            return PNode(op, None, tuple(children))
        if tok in ("0", "1"):
            return PNode(CONST, int(tok), ())
        if tok == ")":
            raise StructuralError(f"unbalanced pattern {text!r}")
        return PVar(tok)

    result = parse()
    if pos != len(tokens):
        raise StructuralError(f"trailing tokens in pattern {text!r}")
    return result


def eval_pattern(pattern: PatternLike, assignment: "dict[str, int]") -> int:
    if isinstance(pattern, PVar):
        return assignment[pattern.name]
    if pattern.op == CONST:
        return pattern.payload
    if pattern.op == NOT:
        return 1 - eval_pattern(pattern.children[0], assignment)
    vals = [eval_pattern(c, assignment) for c in pattern.children]
    return vals[0] & vals[1] if pattern.op == AND else vals[0] | vals[1]


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: PatternLike
    rhs: PatternLike
    bidirectional: bool = False

    def __post_init__(self):
        lv, rv = pattern_variables(self.lhs), pattern_variables(self.rhs)
        if self.bidirectional:
            if lv != rv:
                raise StructuralError(f"{self.name}: variable sets differ")
        elif not rv <= lv:
            raise StructuralError(f"{self.name}: rhs has unbound variables")
        vs = sorted(lv | rv)
        if len(vs) <= 8:
            for bits in product((0, 1), repeat=len(vs)):
                env = dict(zip(vs, bits))
                if eval_pattern(self.lhs, env) != eval_pattern(self.rhs, env):
                    raise StructuralError(f"{self.name}: not truth-table equal")

    def directed_views(self):
        """(name, lhs, rhs) triples the saturation runner actually applies."""
        yield (self.name, self.lhs, self.rhs)
        if self.bidirectional:
            yield (self.name + "-rev", self.rhs, self.lhs)


def _rule(name, lhs, rhs, bidirectional=False):
    return RewriteRule(name, parse_pattern(lhs), parse_pattern(rhs), bidirectional)


def default_ruleset(include_double_negation: bool = True) -> "list[RewriteRule]":
    """The 22-rule Boolean set, grouped: complements, covering, combining,
    idempotency, commutativity, associativity, distributivity, consensus,
    De Morgan. Double negation is an extra simplification (needed so the
    negations De Morgan introduces can collapse again) and can be switched
    off to get the bare 22.
    """
    rules = [
        # complements / constants
        _rule("and-identity", "(& a 1)", "a"),
        _rule("and-null", "(& a 0)", "0"),
        _rule("or-null", "(| a 1)", "1"),
        _rule("and-complement", "(& (! a) a)", "0"),
        _rule("or-complement", "(| (! a) a)", "1"),
        # covering
        _rule("cover-and", "(& a (| a b))", "a"),
        _rule("cover-or", "(| a (& a b))", "a"),
        # combining
        _rule("combine-or", "(| (& a b) (& a (! b)))", "a"),
        _rule("combine-and", "(& (| a b) (| a (! b)))", "a"),
        # idempotency
        _rule("idem-and", "(& a a)", "a"),
        _rule("idem-or", "(| a a)", "a"),
        # commutativity
        _rule("commute-and", "(& a b)", "(& b a)", bidirectional=True),
        _rule("commute-or", "(| a b)", "(| b a)", bidirectional=True),
        # associativity
        _rule("assoc-and", "(& (& a b) c)", "(& a (& b c))", bidirectional=True),
        _rule("assoc-or", "(| (| a b) c)", "(| a (| b c))", bidirectional=True),
        # distributivity
        _rule("distrib-and", "(& a (| b c))", "(| (& a b) (& a c))"),
        _rule("factor-and", "(& (| a b) (| a c))", "(| a (& b c))"),
        _rule("factor-or", "(| (& a b) (& a c))", "(& a (| b c))"),
        # consensus
        _rule("consensus-or",
              "(| (| (& a b) (& (! a) c)) (& b c))",
              "(| (& a b) (& (! a) c))"),
        _rule("consensus-and",
              "(& (& (| a b) (| (! a) c)) (| b c))",
              "(& (| a b) (| (! a) c))"),
        # De Morgan
        _rule("demorgan-and", "(! (& a b))", "(| (! a) (! b))"),
        _rule("demorgan-or", "(! (| a b))", "(& (! a) (! b))"),
    ]
    if include_double_negation:
        rules.append(_rule("double-negation", "(! (! a))", "a"))
    return rules
