"""Immutable Boolean terms with hashconsing, evaluation and DAG statistics.

A Term is a node in a shared DAG: structurally identical subterms built
through the same TermStore are the same object, so structural equality is
reference equality and DAG walks can memoize on id().
"""
from __future__ import annotations

from typing import Iterator, NamedTuple, Optional, Union

from .errors import EvalError, StructuralError

# Operator tags. VAR carries the variable name as payload, CONST carries 0/1.
VAR = "var"
CONST = "const"
NOT = "not"
AND = "and"
OR = "or"
CONCAT = "concat"

BOOL_OPS = (NOT, AND, OR)

_ARITY = {VAR: 0, CONST: 0, NOT: 1, AND: 2, OR: 2}


class Term:
    """One interned node. Do not construct directly; go through a TermStore."""

    __slots__ = ("op", "payload", "children", "uid")

    op: str
    payload: Optional[Union[str, int]]
    children: "tuple[Term, ...]"
    uid: int

    def __init__(self, op, payload, children, uid):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "uid", uid)

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __hash__(self):
        return self.uid

    def __repr__(self):
        if self.op == VAR:
            return f"Term(var {self.payload})"
        if self.op == CONST:
            return f"Term(const {self.payload})"
        return f"Term({self.op}/{len(self.children)} uid={self.uid})"


class TermStore:
    """Hashconsing arena. Interning twice with equal arguments returns the
    identical Term object; stores are append-only and safe to read from
    multiple threads once construction is done (single writer while building).
    """

    def __init__(self):
        self._table: dict = {}
        self._next_uid = 0

    def __len__(self):
        return len(self._table)

    def intern(self, op, children=(), payload=None) -> Term:
        children = tuple(children)
        if op == CONCAT:
            if len(children) < 1:
                raise StructuralError("concat needs at least one child")
            if any(c.op == CONCAT for c in children):
                raise StructuralError("concat cannot be nested")
        elif op in _ARITY:
            if len(children) != _ARITY[op]:
                raise StructuralError(
                    f"{op} expects {_ARITY[op]} children, got {len(children)}"
                )
        else:
            raise StructuralError(f"unknown operator {op!r}")
        if op == VAR and not isinstance(payload, str):
            raise StructuralError("var payload must be a name")
        if op == CONST and payload not in (0, 1):
            raise StructuralError("const payload must be 0 or 1")

        key = (op, payload, tuple(c.uid for c in children))
        hit = self._table.get(key)
        if hit is not None:
            return hit
        term = Term(op, payload, children, self._next_uid)
        self._next_uid += 1
        self._table[key] = term
        return term

    # Convenience constructors used throughout the package and the tests.
    def var(self, name: str) -> Term:
        return self.intern(VAR, (), name)

    def const(self, value: int) -> Term:
        return self.intern(CONST, (), value)

    def not_(self, t: Term) -> Term:
        return self.intern(NOT, (t,))

    def and_(self, a: Term, b: Term) -> Term:
        return self.intern(AND, (a, b))

    def or_(self, a: Term, b: Term) -> Term:
        return self.intern(OR, (a, b))

    def concat(self, *ts: Term) -> Term:
        return self.intern(CONCAT, ts)


#: Default process-wide store. Parsers, the e-graph and the CLI all intern
#: into this one unless told otherwise, so identity checks work across modules.
STORE = TermStore()


def postorder(t: Term) -> Iterator[Term]:
    """Yield each distinct node of the shared DAG once, children first."""
    seen = set()
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node.uid in seen:
            continue
        if expanded:
            seen.add(node.uid)
            yield node
        else:
            stack.append((node, True))
            for c in node.children:
                if c.uid not in seen:
                    stack.append((c, False))


def variables(t: Term) -> "set[str]":
    return {n.payload for n in postorder(t) if n.op == VAR}


def evaluate(t: Term, assignment: "dict[str, int]"):
    """Standard Boolean semantics; a CONCAT root yields the tuple of child
    values in order. Raises EvalError on a variable missing from assignment.
    """
    masks = {}
    for name in variables(t):
        if name not in assignment:
            raise EvalError(f"unbound variable {name!r}")
        masks[name] = assignment[name] & 1
    return evaluate_packed(t, masks, 1)


def evaluate_packed(t: Term, masks: "dict[str, int]", width: int):
    """Bit-parallel evaluation: each variable maps to a width-bit integer and
    every row is evaluated at once. Returns an int, or a tuple for CONCAT.
    """
    full = (1 << width) - 1
    vals: "dict[int, int]" = {}
    for node in postorder(t):
        if node.op == VAR:
            try:
                vals[node.uid] = masks[node.payload] & full
            except KeyError:
                raise EvalError(f"unbound variable {node.payload!r}") from None
        elif node.op == CONST:
            vals[node.uid] = full if node.payload else 0
        elif node.op == NOT:
            vals[node.uid] = vals[node.children[0].uid] ^ full
        elif node.op == AND:
            vals[node.uid] = vals[node.children[0].uid] & vals[node.children[1].uid]
        elif node.op == OR:
            vals[node.uid] = vals[node.children[0].uid] | vals[node.children[1].uid]
        else:  # CONCAT
            vals[node.uid] = tuple(vals[c.uid] for c in node.children)
    return vals[t.uid]


class DagStats(NamedTuple):
    node_count: int
    edge_sum: int
    depth: int
    density: float


def dag_stats(t: Term) -> DagStats:
    """Counts on the shared DAG, not the expanded tree.

    depth is the longest root-to-leaf path measured in nodes (a leaf has
    depth 1); density is edge_sum / (n * (n - 1)) and 0 for a single node.
    """
    depth = {}
    node_count = 0
    edge_sum = 0
    for node in postorder(t):
        node_count += 1
        edge_sum += len(node.children)
        if node.children:
            depth[node.uid] = 1 + max(depth[c.uid] for c in node.children)
        else:
            depth[node.uid] = 1
    density = edge_sum / (node_count * (node_count - 1)) if node_count > 1 else 0.0
    return DagStats(node_count, edge_sum, depth[t.uid], density)


def tree_size(t: Term) -> int:
    """Node count of the fully expanded tree (shared nodes counted per use)."""
    memo = {}
    for node in postorder(t):
        memo[node.uid] = 1 + sum(memo[c.uid] for c in node.children)
    return memo[t.uid]


def tree_depth(t: Term) -> int:
    return dag_stats(t).depth


class Circuit(NamedTuple):
    """A multi-output combinational circuit over named inputs.

    Output roots are interned terms whose every VAR leaf names an input;
    intermediates from source files are inlined away at parse time.
    """

    inputs: "tuple[str, ...]"
    outputs: "tuple[tuple[str, Term], ...]"

    @property
    def output_names(self):
        return tuple(name for name, _ in self.outputs)

    def validate(self):
        if len(set(self.inputs)) != len(self.inputs):
            raise StructuralError("duplicate input name")
        names = self.output_names
        if len(set(names)) != len(names):
            raise StructuralError("duplicate output name")
        if set(names) & set(self.inputs):
            raise StructuralError("input and output names must be disjoint")
        known = set(self.inputs)
        for name, root in self.outputs:
            missing = variables(root) - known
            if missing:
                raise StructuralError(
                    f"output {name!r} reads undeclared inputs {sorted(missing)}"
                )
        return self


def circuit_to_term(c: Circuit, store: TermStore = STORE) -> Term:
    """Bridge a circuit into a single rooted term: a lone output is its root,
    several outputs hang under one CONCAT root (opaque to Boolean rewriting).
    """
    roots = [root for _, root in c.outputs]
    if not roots:
        raise StructuralError("circuit has no outputs")
    if len(roots) == 1:
        return roots[0]
    return store.concat(*roots)


def term_to_circuit(t: Term, inputs, output_names) -> Circuit:
    roots = list(t.children) if t.op == CONCAT else [t]
    if len(roots) != len(output_names):
        raise StructuralError(
            f"term has {len(roots)} outputs, expected {len(output_names)}"
        )
    return Circuit(tuple(inputs), tuple(zip(output_names, roots))).validate()
