"""Selecting concrete terms from a saturated e-graph.

Two layers: a Bellman fixpoint over local costs (size, depth, weighted ops)
that records, per class, the best achievable cost and the set of feasible
e-nodes (those from which an acyclic term exists), and on top of it the
greedy extractor plus the randomized pool builder. Random choices are always
restricted to feasible e-nodes; the rare choice function that still closes a
cycle (self-references and mutual references appear naturally after merges)
is repaired class-by-class back to the greedy argmin, which can never cycle.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .egraph import EGraph, ENode
from .errors import ExtractionError, SelectionError, StructuralError
from .expr import AND, CONCAT, CONST, NOT, OR, STORE, VAR, Term, TermStore, postorder

AST_SIZE = "ast-size"
AST_DEPTH = "ast-depth"
WEIGHTED_OPS = "weighted-ops"

#: NOT is cheaper than AND/OR (an inverter is a small gate); leaves are free.
DEFAULT_WEIGHTS = {NOT: 1.0, AND: 2.0, OR: 2.0, CONCAT: 0.0}


@dataclass(frozen=True)
class LocalCost:
    kind: str
    weights: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in (AST_SIZE, AST_DEPTH, WEIGHTED_OPS):
            raise StructuralError(f"unknown local cost kind {self.kind!r}")
        if self.kind == WEIGHTED_OPS:
            w = dict(DEFAULT_WEIGHTS)
            if self.weights:
                w.update(self.weights)
            if w[AND] <= 0 or w[OR] <= 0 or w[AND] != w[OR]:
                raise StructuralError("AND/OR weights must be positive and equal")
            if not 0 <= w[NOT] < w[AND]:
                raise StructuralError("NOT weight must be below AND/OR")
            object.__setattr__(self, "weights", w)

    def combine(self, op: str, child_costs) -> float:
        if self.kind == AST_SIZE:
            return 1 + sum(child_costs)
        if self.kind == AST_DEPTH:
            return 1 + max(child_costs, default=0)
        if op in (VAR, CONST):
            return 0.0
        return self.weights.get(op, 0.0) + sum(child_costs)

    def term_cost(self, t: Term) -> float:
        """Cost of the term's fully expanded tree (memoized over the DAG)."""
        memo = {}
        for node in postorder(t):
            memo[node.uid] = self.combine(node.op, [memo[c.uid] for c in node.children])
        return memo[t.uid]


LOCAL_COSTS = (LocalCost(AST_SIZE), LocalCost(AST_DEPTH), LocalCost(WEIGHTED_OPS))

_NODE_KEY = lambda n: (n.op, repr(n.payload), n.children)  # noqa: E731


class FeasibleCostTable:
    """Bellman fixpoint for one local cost over the whole graph.

    A class is feasible iff some acyclic term is extractable from it; its
    best cost then satisfies cost(class) = min over feasible e-nodes of
    combine(op, children costs).
    """

    def __init__(self, g: EGraph, cost: LocalCost):
        self.graph = g
        self.cost = cost
        self.best: "dict[int, float]" = {}
        self.best_node: "dict[int, ENode]" = {}
        self.feasible_nodes: "dict[int, list[ENode]]" = {}
        self.sample_nodes: "dict[int, list[ENode]]" = {}
        self.tie_nodes: "dict[int, list[ENode]]" = {}
        self._solve()

    def node_cost(self, node: ENode) -> float:
        return self.cost.combine(
            node.op, [self.best[self.graph.find(c)] for c in node.children])

    def _solve(self):
        g = self.graph
        best, best_node = self.best, self.best_node
        agenda = list(g.classes)
        in_agenda = set(agenda)
        while agenda:
            cid = agenda.pop()
            in_agenda.discard(cid)
            entry = None
            winner = None
            for node in g.classes[cid]:
                if any(g.find(c) not in best for c in node.children):
                    continue
                cand = (self.node_cost(node), _NODE_KEY(node))
                if entry is None or cand < entry:
                    entry, winner = cand, node
            if winner is None:
                continue
            stored = (best[cid], _NODE_KEY(best_node[cid])) if cid in best else None
            if stored is None or entry < stored:
                best[cid] = entry[0]
                best_node[cid] = winner
                for _, parent_cid in g.parents.get(cid, ()):
                    parent_cid = g.find(parent_cid)
                    if parent_cid not in in_agenda:
                        agenda.append(parent_cid)
                        in_agenda.add(parent_cid)
        for cid, nodes in g.classes.items():
            if cid not in best:
                continue
            feas = [n for n in nodes
                    if all(g.find(c) in best for c in n.children)]
            self.feasible_nodes[cid] = feas
            sample = [
                n for n in feas if cid not in {g.find(c) for c in n.children}]
            self.sample_nodes[cid] = sample
            costs = [self.node_cost(n) for n in sample]
            lo = min(costs)
            self.tie_nodes[cid] = [n for n, c in zip(sample, costs) if c == lo]

    def require(self, cid: int) -> int:
        cid = self.graph.find(cid)
        if cid not in self.best:
            raise ExtractionError(f"no acyclic term extractable from class {cid}")
        return cid


def compute_feasible(g: EGraph, root: int, cost: LocalCost) -> FeasibleCostTable:
    table = FeasibleCostTable(g, cost)
    table.require(root)
    return table


def _unfold(g: EGraph, root: int, choice: "dict[int, ENode]",
            store: TermStore) -> Term:
    memo: "dict[int, Term]" = {}
    stack = [(root, False)]
    while stack:
        cid, expanded = stack.pop()
        cid = g.find(cid)
        if cid in memo:
            continue
        node = choice[cid]
        if not expanded:
            stack.append((cid, True))
            for c in node.children:
                stack.append((c, False))
            continue
        memo[cid] = store.intern(
            node.op, [memo[g.find(c)] for c in node.children], node.payload)
    return memo[g.find(root)]


def extract_greedy(g: EGraph, root: int, cost: LocalCost,
                   table: Optional[FeasibleCostTable] = None,
                   store: TermStore = STORE) -> Term:
    """Per-class argmin extraction; ties break on the lowest canonical
    e-node order so results are reproducible.
    """
    if table is None:
        table = FeasibleCostTable(g, cost)
    root = table.require(root)
    return _unfold(g, root, table.best_node, store)


def _cycle_classes(g: EGraph, choice: "dict[int, ENode]", root: int) -> "set[int]":
    """Classes reachable from root that sit on a cycle of the chosen
    subgraph (Tarjan SCCs of size > 1, plus self-loops)."""
    edges = {
        cid: tuple({g.find(c) for c in node.children})
        for cid, node in choice.items()
    }
    index: "dict[int, int]" = {}
    low: "dict[int, int]" = {}
    onstack: "set[int]" = set()
    stack: "list[int]" = []
    result: "set[int]" = set()
    counter = 0
    frames = [(root, 0)]
    while frames:
        v, ci = frames[-1]
        if ci == 0:
            index[v] = low[v] = counter
            counter += 1
            stack.append(v)
            onstack.add(v)
        advanced = False
        succ = edges[v]
        while ci < len(succ):
            w = succ[ci]
            ci += 1
            if w not in index:
                frames[-1] = (v, ci)
                frames.append((w, 0))
                advanced = True
                break
            if w in onstack:
                low[v] = min(low[v], index[w])
        if advanced:
            continue
        frames.pop()
        if low[v] == index[v]:
            scc = []
            while True:
                w = stack.pop()
                onstack.discard(w)
                scc.append(w)
                if w == v:
                    break
            if len(scc) > 1 or v in edges[v]:
                result.update(scc)
        if frames:
            parent = frames[-1][0]
            low[parent] = min(low[parent], low[v])
    return result


def sample_candidate(g: EGraph, root: int, table: FeasibleCostTable,
                     strategy: str, rng: random.Random,
                     p_suboptimal: float = 0.2,
                     store: TermStore = STORE) -> Term:
    """One randomized extraction.

    strategy "a": per class, uniform among feasible e-nodes tied at the
    minimum local cost. strategy "b": with probability p_suboptimal pick
    uniformly among all feasible e-nodes, otherwise as in "a".
    """
    if strategy not in ("a", "b"):
        raise StructuralError(f"unknown sampling strategy {strategy!r}")
    root = table.require(root)

    def pick(cid: int) -> ENode:
        nodes = table.sample_nodes[cid]
        if len(nodes) == 1:
            return nodes[0]
        if strategy == "b" and rng.random() < p_suboptimal:
            return nodes[rng.randrange(len(nodes))]
        ties = table.tie_nodes[cid]
        return ties[rng.randrange(len(ties))]

    choice: "dict[int, ENode]" = {}

    def fill(agenda):
        while agenda:
            cid = g.find(agenda.pop())
            if cid in choice:
                continue
            node = pick(cid)
            choice[cid] = node
            agenda.extend(node.children)

    fill([root])
    rounds = 0
    while True:
        cyc = _cycle_classes(g, choice, root)
        if not cyc:
            break
        rounds += 1
        if rounds > len(g.classes) + 1:  # argmin repair must have converged
            raise ExtractionError("cycle repair failed to converge")
        agenda = []
        for cid in cyc:
            choice[cid] = table.best_node[cid]
            agenda.extend(choice[cid].children)
        fill(agenda)
    return _unfold(g, root, choice, store)


@dataclass(frozen=True)
class PoolConfig:
    pool_size: int = 122
    p_suboptimal: float = 0.2
    strategy_ratio: "tuple[int, int]" = (1, 3)
    seed: int = 0
    cost_kinds: "tuple[LocalCost, ...]" = LOCAL_COSTS

    def __post_init__(self):
        if self.pool_size < 2:
            raise StructuralError("pool_size must be at least 2 (the seeds)")
        if not 0.0 <= self.p_suboptimal <= 1.0:
            raise StructuralError("p_suboptimal must be in [0, 1]")
        ra, rb = self.strategy_ratio
        if ra < 0 or rb < 0 or ra + rb == 0:
            raise StructuralError("strategy ratio must be nonnegative, not 0:0")
        if not self.cost_kinds:
            raise StructuralError("need at least one local cost kind")


@dataclass(frozen=True)
class Candidate:
    term: Term
    provenance: str  # min_size | min_depth | strategy_a | strategy_b
    index: int


@dataclass
class CandidatePool:
    candidates: "list[Candidate]"
    draw_counts: "dict[str, int]" = field(default_factory=dict)
    requested: int = 0

    def __len__(self):
        return len(self.candidates)

    def provenance_counts(self):
        return dict(Counter(c.provenance for c in self.candidates))


def build_pool(g: EGraph, root: int, cfg: PoolConfig = PoolConfig(),
               store: TermStore = STORE,
               tables: "Optional[dict[str, FeasibleCostTable]]" = None) -> CandidatePool:
    """Greedy min-size and min-depth seeds plus pool_size - 2 samples split
    strategy a : b per the configured ratio, rotating local cost kinds
    round-robin. Sample i draws from its own RNG stream derived from
    (seed, i), so pools with the same seed are prefixes of one another.
    Structural duplicates are dropped (no resampling).
    """
    if tables is None:
        tables = {}
    for kind in (LocalCost(AST_SIZE), LocalCost(AST_DEPTH)) + tuple(cfg.cost_kinds):
        if kind.kind not in tables:
            tables[kind.kind] = FeasibleCostTable(g, kind)
    root = tables[AST_SIZE].require(root)

    draws: "list[Candidate]" = [
        Candidate(extract_greedy(g, root, LocalCost(AST_SIZE),
                                 tables[AST_SIZE], store), "min_size", 0),
        Candidate(extract_greedy(g, root, LocalCost(AST_DEPTH),
                                 tables[AST_DEPTH], store), "min_depth", 1),
    ]
    ra, rb = cfg.strategy_ratio
    for i in range(cfg.pool_size - 2):
        kind = cfg.cost_kinds[i % len(cfg.cost_kinds)]
        strategy = "a" if (i % (ra + rb)) < ra else "b"
        rng = random.Random(f"{cfg.seed}:{i}")
        term = sample_candidate(g, root, tables[kind.kind], strategy, rng,
                                cfg.p_suboptimal, store)
        draws.append(Candidate(term, f"strategy_{strategy}", i + 2))

    draw_counts = dict(Counter(c.provenance for c in draws))
    seen = set()
    unique = []
    for cand in draws:
        if cand.term.uid not in seen:
            seen.add(cand.term.uid)
            unique.append(cand)
    return CandidatePool(unique, draw_counts, cfg.pool_size)


def select_best_candidate(pool: CandidatePool, model) -> "tuple[Candidate, float]":
    """Arg-min of model cost over the pool; ties keep the earliest candidate
    (seed provenance order, then sample index).
    """
    if not pool.candidates:
        raise SelectionError("pool is empty")
    best = None
    best_cost = None
    for cand in pool.candidates:
        try:
            c = float(model.cost(cand.term))
        except Exception as exc:
            raise SelectionError(
                f"cost model failed on candidate #{cand.index}"
                f" ({cand.provenance}): {exc}") from exc
        if best is None or c < best_cost:
            best, best_cost = cand, c
    return best, best_cost


def select_best(pool: CandidatePool, model) -> "tuple[Term, float]":
    cand, cost = select_best_candidate(pool, model)
    return cand.term, cost
