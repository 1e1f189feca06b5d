"""Equality-saturation runner.

Each iteration matches every directed rule against a frozen snapshot of the
graph, then applies all recorded matches (instantiate RHS, merge), then
rebuilds once. The run stops at saturation (a round that changed nothing) or
at the first exceeded limit; limit stops are reported, never raised.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .egraph import EGraph, _Deadline
from .rules import RewriteRule, default_ruleset


class SaturationLimits(NamedTuple):
    time_limit: float = 300.0
    node_limit: int = 2_500_000
    iter_limit: int = 30

    def validate(self):
        if self.time_limit <= 0 or self.node_limit <= 0 or self.iter_limit <= 0:
            raise ValueError("saturation limits must be positive")
        return self


#: Desk-scale profile used by the test suites so runs finish quickly.
TEST_LIMITS = SaturationLimits(time_limit=5.0, node_limit=50_000, iter_limit=3)


@dataclass
class SaturationReport:
    stop_reason: str  # saturated | time | nodes | iterations
    iterations: int
    enodes: int
    classes: int
    wall_time: float

    def to_dict(self):
        return {
            "stop_reason": self.stop_reason,
            "iterations": self.iterations,
            "enodes": self.enodes,
            "classes": self.classes,
        }


def saturate(g: EGraph, rules: "Optional[list[RewriteRule]]" = None,
             limits: SaturationLimits = SaturationLimits()) -> SaturationReport:
    if rules is None:
        rules = default_ruleset()
    limits.validate()
    directed = [view for rule in rules for view in rule.directed_views()]
    start = time.monotonic()
    deadline = start + limits.time_limit
    # Part of the budget is held back for the closing rebuild, which cannot
    # be aborted; its cost is extrapolated from the last rebuild, scaled by
    # how much the graph has grown since.
    rb_time, rb_nodes = 0.005, max(len(g.hashcons), 1)

    def rebuild_reserve():
        growth = max(1.0, len(g.hashcons) / rb_nodes)
        return min(0.5 * limits.time_limit, max(0.01, 2.0 * rb_time * growth))

    applied = set()
    stop = None
    iterations = 0

    g.rebuild()
    while iterations < limits.iter_limit and stop is None:
        iterations += 1
        unions_before = g.union_count
        nodes_before = len(g.hashcons)
        phase_deadline = deadline - rebuild_reserve()

        # Match phase: read-only over the rebuilt snapshot.
        batches = []
        try:
            for name, lhs, rhs in directed:
                batches.append(g.ematch(lhs, deadline=phase_deadline))
                if time.monotonic() > phase_deadline:
                    raise _Deadline
        except _Deadline:
            stop = "time"
            break

        # Apply phase: each (rule, class, substitution) fires at most once
        # per run; limits are checked after every application so overshoot
        # stays within a single rule instantiation.
        for (name, lhs, rhs), matches in zip(directed, batches):
            for cid, subst in matches:
                ccid = g.find(cid)
                key = (name, ccid,
                       tuple(sorted((v, g.find(c)) for v, c in subst.items())))
                if key in applied:
                    continue
                applied.add(key)
                g.union(ccid, g.instantiate(rhs, subst))
                if len(g.hashcons) >= limits.node_limit:
                    stop = "nodes"
                    break
                if time.monotonic() > deadline - rebuild_reserve():
                    stop = "time"
                    break
            if stop:
                break

        rebuild_started = time.monotonic()
        rb_nodes = max(len(g.hashcons), 1)
        g.rebuild()
        rb_time = max(time.monotonic() - rebuild_started, 0.001)
        if stop is None and g.union_count == unions_before \
                and len(g.hashcons) == nodes_before:
            stop = "saturated"

    g.rebuild()
    if stop is None:
        stop = "iterations"
    return SaturationReport(
        stop_reason=stop,
        iterations=iterations,
        enodes=g.node_count,
        classes=g.class_count,
        wall_time=time.monotonic() - start,
    )
