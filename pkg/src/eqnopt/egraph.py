"""E-graph: union-find over class ids, hashconsed e-nodes, congruence closure.

The graph stores one ENode per canonical shape. merge() only records the
union; rebuild() restores all invariants (congruence closure, canonical
hashcons keys, the per-class node and parent views) and is a fixpoint.
Matching and extraction expect a rebuilt graph.
"""
from __future__ import annotations

import time
from typing import NamedTuple, Optional, Union

from .errors import CapacityError
from .expr import AND, CONCAT, CONST, NOT, OR, STORE, VAR, Term, TermStore

PatternLike = Union["PVar", "PNode"]


class ENode(NamedTuple):
    op: str
    payload: Optional[Union[str, int]]
    children: "tuple[int, ...]"


class PVar(NamedTuple):
    name: str


class PNode(NamedTuple):
    op: str
    payload: Optional[Union[str, int]]
    children: "tuple[PatternLike, ...]"


class _Deadline(Exception):
    pass


class EGraph:
    def __init__(self, max_nodes: Optional[int] = None):
        self._uf: "list[int]" = []
        self.hashcons: "dict[ENode, int]" = {}
        # Views kept valid between rebuilds only.
        self.classes: "dict[int, list[ENode]]" = {}
        self.parents: "dict[int, list[tuple[ENode, int]]]" = {}
        self.max_nodes = max_nodes
        self.union_count = 0
        self._dirty = False
        self._deadline: Optional[float] = None
        self._steps = 0

    # -- union-find ---------------------------------------------------------
    def find(self, cid: int) -> int:
        uf = self._uf
        while uf[cid] != cid:
            uf[cid] = uf[uf[cid]]
            cid = uf[cid]
        return cid

    def union(self, a: int, b: int) -> bool:
        """Unite two classes; smaller id becomes the representative.
        Returns True when they were distinct. Invariants are restored lazily
        by rebuild().
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self._uf[rb] = ra
        self.union_count += 1
        self._dirty = True
        return True

    def merge(self, a: int, b: int) -> int:
        """Unite and return the canonical id (idempotent, order-insensitive)."""
        self.union(a, b)
        return self.find(a)

    # -- construction -------------------------------------------------------
    def _canon(self, node: ENode) -> ENode:
        return ENode(node.op, node.payload,
                     tuple(self.find(c) for c in node.children))

    def add_enode(self, op, payload, children) -> int:
        node = ENode(op, payload, tuple(self.find(c) for c in children))
        cid = self.hashcons.get(node)
        if cid is not None:
            return self.find(cid)
        if self.max_nodes is not None and len(self.hashcons) >= self.max_nodes:
            raise CapacityError(
                f"e-graph node limit {self.max_nodes} exceeded")
        cid = len(self._uf)
        self._uf.append(cid)
        self.hashcons[node] = cid
        self.classes[cid] = [node]
        self.parents.setdefault(cid, [])
        for child in set(node.children):
            self.parents.setdefault(child, []).append((node, cid))
        return cid

    def add_term(self, t: Term) -> int:
        memo: "dict[int, int]" = {}
        stack = [(t, False)]
        while stack:
            node, expanded = stack.pop()
            if node.uid in memo:
                continue
            if not expanded:
                stack.append((node, True))
                for c in reversed(node.children):
                    stack.append((c, False))
                continue
            memo[node.uid] = self.add_enode(
                node.op, node.payload, [memo[c.uid] for c in node.children])
        return memo[t.uid]

    def lookup_term(self, t: Term) -> Optional[int]:
        """Class containing the term's shape, or None. Never mutates."""
        memo: "dict[int, Optional[int]]" = {}
        stack = [(t, False)]
        while stack:
            node, expanded = stack.pop()
            if node.uid in memo:
                continue
            if not expanded:
                stack.append((node, True))
                for c in node.children:
                    stack.append((c, False))
                continue
            cids = [memo[c.uid] for c in node.children]
            if any(c is None for c in cids):
                memo[node.uid] = None
                continue
            shape = ENode(node.op, node.payload, tuple(self.find(c) for c in cids))
            hit = self.hashcons.get(shape)
            memo[node.uid] = None if hit is None else self.find(hit)
        return memo[t.uid]

    # -- congruence restoration ---------------------------------------------
    def rebuild(self):
        """Global fixpoint pass: canonicalize every stored shape, merging
        classes that become congruent, until nothing changes. Rebuilding a
        clean graph is a no-op.
        """
        if not self._dirty:
            return
        while True:
            changed = False
            new_hc: "dict[ENode, int]" = {}
            for node, cid in self.hashcons.items():
                node2 = self._canon(node)
                cid2 = self.find(cid)
                prev = new_hc.get(node2)
                if prev is None:
                    new_hc[node2] = cid2
                elif self.find(prev) != cid2:
                    self.union(prev, cid2)
                    changed = True
            self.hashcons = new_hc
            if not changed:
                break
        self.hashcons = {node: self.find(cid) for node, cid in self.hashcons.items()}
        self.classes = {}
        self.parents = {}
        for node, cid in self.hashcons.items():
            self.classes.setdefault(cid, []).append(node)
            self.parents.setdefault(cid, [])
        for node, cid in self.hashcons.items():
            for child in set(node.children):
                self.parents[child].append((node, cid))
        self._dirty = False

    # -- stats / debug -------------------------------------------------------
    @property
    def node_count(self) -> int:
        return len(self.hashcons)

    @property
    def class_count(self) -> int:
        return len({self.find(c) for c in self.hashcons.values()})

    def canonical_ids(self) -> "list[int]":
        return sorted(self.classes)

    def class_nodes(self, cid: int) -> "list[ENode]":
        return self.classes.get(self.find(cid), [])

    def dump(self) -> dict:
        """JSON-friendly listing of classes and e-nodes for inspection."""
        out = []
        for cid in self.canonical_ids():
            nodes = [
                {"op": n.op, "payload": n.payload, "children": list(n.children)}
                for n in self.classes[cid]
            ]
            out.append({"id": cid, "nodes": nodes})
        return {"classes": out, "node_count": self.node_count}

    # -- pattern matching ----------------------------------------------------
    def ematch(self, pattern: PatternLike, deadline: Optional[float] = None):
        """Every (class, substitution) pair under which the pattern is
        represented in that class, relative to the current rebuilt graph.
        """
        results: "list[tuple[int, dict]]" = []
        seen = set()
        self._deadline = deadline
        self._steps = 0
        try:
            for cid in self.canonical_ids():
                for subst in self._match_class(pattern, cid, {}):
                    key = (cid, tuple(sorted(subst.items())))
                    if key not in seen:
                        seen.add(key)
                        results.append((cid, subst))
        finally:
            self._deadline = None
        return results

    def _match_class(self, pattern, cid, subst):
        # the backtracking search can spend a long time between matches, so
        # the time budget is checked on visit counts, not on yields
        if self._deadline is not None:
            self._steps += 1
            if self._steps & 1023 == 0 and time.monotonic() > self._deadline:
                raise _Deadline
        cid = self.find(cid)
        if isinstance(pattern, PVar):
            bound = subst.get(pattern.name)
            if bound is not None:
                if self.find(bound) == cid:
                    yield subst
                return
            new = dict(subst)
            new[pattern.name] = cid
            yield new
            return
        for node in self.classes.get(cid, ()):
            if node.op != pattern.op or node.payload != pattern.payload:
                continue
            if len(node.children) != len(pattern.children):
                continue
            yield from self._match_children(pattern.children, node.children,
                                            0, subst)

    def _match_children(self, pats, cids, i, subst):
        # lazy backtracking over the child patterns: combinations stream out
        # one at a time instead of materializing the whole product
        if i == len(pats):
            yield subst
            return
        for s in self._match_class(pats[i], cids[i], subst):
            yield from self._match_children(pats, cids, i + 1, s)

    def instantiate(self, pattern: PatternLike, subst: dict) -> int:
        if isinstance(pattern, PVar):
            return self.find(subst[pattern.name])
        children = [self.instantiate(c, subst) for c in pattern.children]
        return self.add_enode(pattern.op, pattern.payload, children)


def pattern_variables(pattern: PatternLike) -> "set[str]":
    if isinstance(pattern, PVar):
        return {pattern.name}
    out = set()
    for c in pattern.children:
        out |= pattern_variables(c)
    return out


def pattern_to_term(pattern: PatternLike, assignment: "dict[str, Term]",
                    store: TermStore = STORE) -> Term:
    """Instantiate a pattern as a concrete term (used for rule soundness)."""
    if isinstance(pattern, PVar):
        return assignment[pattern.name]
    children = [pattern_to_term(c, assignment, store) for c in pattern.children]
    return store.intern(pattern.op, children, pattern.payload)
