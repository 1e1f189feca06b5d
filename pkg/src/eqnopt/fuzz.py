"""Seeded random circuit generator for corpus building and stress tests.

Circuits grow mostly tree-like (each gate consumed once) with a handful of
small shared gadget nodes referenced repeatedly, so the DAGs have genuine
sharing while the expanded tree stays within a small factor of the DAG.
"""
from __future__ import annotations

import random

from .expr import STORE, Circuit, TermStore


def random_circuit(rng: random.Random, max_inputs: int = 10,
                   max_gates: int = 48, max_outputs: int = 3,
                   store: TermStore = STORE) -> Circuit:
    n_inputs = rng.randint(2, max_inputs)
    n_gates = rng.randint(4, max_gates)
    n_outputs = rng.randint(1, max_outputs)
    inputs = tuple(f"x{i}" for i in range(n_inputs))

    leaves = [store.var(name) for name in inputs]
    if rng.random() < 0.1:
        leaves.append(store.const(rng.randint(0, 1)))
    uids = {t.uid for t in leaves}

    budget = n_gates

    def fresh(t):
        nonlocal budget
        if t.uid not in uids:
            uids.add(t.uid)
            budget -= 1
        return t

    # shared inverter gadgets over the leaves: real multi-parent nodes, but
    # each extra reference expands the tree by the same small amount
    shared = []
    for _ in range(rng.randint(0, 3)):
        if budget <= n_outputs:
            break
        shared.append(fresh(store.not_(leaves[rng.randrange(len(leaves))])))

    unconsumed: list = []

    def operand(popped):
        roll = rng.random()
        if roll < 0.75 and unconsumed:
            t = unconsumed.pop(rng.randrange(len(unconsumed)))
            popped.append(t)
            return t
        if roll < 0.81 and shared:
            return shared[rng.randrange(len(shared))]
        return leaves[rng.randrange(len(leaves))]

    attempts = 0
    while budget > 0 and attempts < n_gates * 20:
        attempts += 1
        popped: list = []
        roll = rng.random()
        if roll < 0.25:
            t = store.not_(operand(popped))
        elif roll < 0.625:
            t = store.and_(operand(popped), operand(popped))
        else:
            t = store.or_(operand(popped), operand(popped))
        if t.uid in uids:
            unconsumed.extend(popped)  # the draw was a duplicate, restore
            continue
        fresh(t)
        unconsumed.append(t)

    roots = [t for t in unconsumed if t.children] or shared or leaves
    # fold leftovers so every built gate feeds some output
    while len(roots) > n_outputs:
        op = store.and_ if rng.random() < 0.5 else store.or_
        b, a = roots.pop(), roots.pop()
        merged = op(a, b)
        uids.add(merged.uid)
        roots.append(merged)
    outputs = tuple((f"f{i}", root) for i, root in enumerate(roots))
    return Circuit(inputs, outputs).validate()


def fuzz_corpus(count: int, seed: int = 0, store: TermStore = STORE, **kwargs):
    """Deterministic list of (name, Circuit) pairs."""
    out = []
    for i in range(count):
        rng = random.Random(f"fuzz:{seed}:{i}")
        out.append((f"fuzz{i:04d}", random_circuit(rng, store=store, **kwargs)))
    return out
