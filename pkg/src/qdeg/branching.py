"""Two ways of running a measurement-driven algorithm: sampled and enumerated.

Algorithms are written once against an execution context ``ctx``:

* ``ctx.simulate(oracle, start, steps)`` - outcome probabilities of measuring
  the search register after ``steps`` Grover iterates;
* ``ctx.measure(probs)`` - a measurement (or classical coin) over ``probs``;
* ``ctx.verify(oracle, i)`` - one classical query of position ``i``;
* ``ctx.bind(value, fn)`` / ``ctx.map(value, fn)`` / ``ctx.pure(x)`` - sequencing;
* ``ctx.memo(key, thunk)`` - a sub-computation determined by ``key``.

Under :class:`Sampler` a "value" is a single outcome and ``bind`` just calls
``fn``.  Under :class:`Enumerator` a value is a :class:`Dist`; ``bind`` mixes
the continuations of every outcome and merges equal results, which keeps
the enumeration of long measurement chains polynomial instead of exponential.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DEFAULT_PRUNE = 1e-14
DEFAULT_NODE_BUDGET = 5_000_000


class ResourceError(RuntimeError):
    pass


class BranchBudgetError(ResourceError):
    """Enumeration visited more nodes than allowed."""

    def __init__(self, nodes, partial_mass):
        super().__init__(f"branch budget exceeded after {nodes} nodes "
                         f"({partial_mass:.6g} of the probability mass resolved)")
        self.nodes = nodes
        self.partial_mass = partial_mass


@dataclass
class Dist:
    probs: dict
    pruned: float = 0.0

    def __iter__(self):
        return iter(self.probs.items())

    def __len__(self):
        return len(self.probs)

    @property
    def total(self):
        return sum(self.probs.values())

    def mass(self, pred) -> float:
        return sum(p for o, p in self.probs.items() if pred(o))


class Sampler:
    """Draws a single execution from a seeded generator, recording a transcript."""

    def __init__(self, seed=0):
        self.rng = np.random.default_rng(seed)
        self.transcript = []

    def simulate(self, oracle, start, steps):
        from .grover import SearchState, grover_iterate
        state = SearchState.initial(oracle.n, start)
        for _ in range(steps):
            state = grover_iterate(state, oracle)
        return state.outcome_probabilities()

    def measure(self, probs):
        outcomes = list(probs)
        p = np.array([probs[o] for o in outcomes], dtype=np.float64)
        choice = outcomes[self.rng.choice(len(outcomes), p=p / p.sum())]
        self.transcript.append(choice)
        return choice

    def verify(self, oracle, i):
        return oracle.verify(i)

    def bind(self, value, fn):
        return fn(value)

    map = bind

    def pure(self, x):
        return x

    def memo(self, key, thunk):
        return thunk()


@lru_cache(maxsize=None)
def _class_probabilities(n, solutions, start, steps):
    # Uniform-over-indices start states keep every solution (resp. non-solution)
    # at the same amplitude, so one canonical simulation serves any input
    # with the same solution count.
    from .grover import PhaseOracle, SearchState, grover_iterate
    oracle = PhaseOracle([1] * solutions + [0] * (n - solutions))
    state = SearchState.initial(n, start)
    for _ in range(steps):
        state = grover_iterate(state, oracle)
    p = state.probabilities()
    p_sol = p[0] if solutions else 0.0
    p_non = p[n - 1] if solutions < n else 0.0
    return float(p_sol), float(p_non), float(p[n])


class Enumerator:
    """Exact outcome distributions by exhaustive, merging branch enumeration."""

    def __init__(self, prune=DEFAULT_PRUNE, node_budget=DEFAULT_NODE_BUDGET):
        self.prune = prune
        self.node_budget = node_budget
        self.nodes = 0
        self._depth = 0
        self._resolved = 0.0
        self._memo = {}

    def simulate(self, oracle, start, steps):
        from .grover import DUMMY
        mask = oracle.effective()
        p_sol, p_non, p_dummy = _class_probabilities(oracle.n, int(mask.sum()), start, steps)
        probs = {i + 1: (p_sol if mask[i] else p_non) for i in range(oracle.n)}
        probs[DUMMY] = p_dummy
        return probs

    def measure(self, probs):
        total = sum(probs.values())
        kept, pruned = {}, 0.0
        for o, p in probs.items():
            p = p / total
            if p > self.prune:
                kept[o] = p
            else:
                pruned += p
        self.nodes += len(kept)
        if self.nodes > self.node_budget:
            raise BranchBudgetError(self.nodes, self._resolved)
        return Dist(kept, pruned)

    def verify(self, oracle, i):
        return oracle.peek(i)

    def bind(self, dist, fn):
        out = defaultdict(float)
        pruned = dist.pruned
        top = self._depth == 0
        self._depth += 1
        try:
            for o, p in dist.probs.items():
                sub = fn(o)
                for o2, p2 in sub.probs.items():
                    out[o2] += p * p2
                pruned += p * sub.pruned
                if top:
                    self._resolved += p
        finally:
            self._depth -= 1
        return Dist(dict(out), pruned)

    def map(self, dist, fn):
        out = defaultdict(float)
        for o, p in dist.probs.items():
            out[fn(o)] += p
        return Dist(dict(out), dist.pruned)

    def pure(self, x):
        return Dist({x: 1.0})

    def memo(self, key, thunk):
        """Reuse the distribution of a sub-computation keyed by everything it depends on."""
        if key not in self._memo:
            self._memo[key] = thunk()
        return self._memo[key]


@dataclass
class Leaf:
    result: object
    probability: float
    grover_queries: int
    verify_queries: int

    @property
    def queries(self):
        return self.grover_queries + self.verify_queries


@dataclass
class BranchTree:
    """Merged leaves of an enumerated run.

    Outcomes that agree on result and query counts are merged into a single
    leaf, so ``leaves`` is the exact joint distribution of (result, queries).
    """
    leaves: list[Leaf]
    pruned_mass: float = 0.0
    nodes: int = 0
    raw: Dist | None = field(default=None, repr=False)

    @property
    def total_mass(self):
        return sum(leaf.probability for leaf in self.leaves)

    def mass(self, pred) -> float:
        return sum(leaf.probability for leaf in self.leaves if pred(leaf.result))

    def result_distribution(self) -> dict:
        out = defaultdict(float)
        for leaf in self.leaves:
            out[leaf.result] += leaf.probability
        return dict(out)

    @property
    def max_queries(self) -> int:
        return max(leaf.queries for leaf in self.leaves)

    @property
    def max_grover_queries(self) -> int:
        return max(leaf.grover_queries for leaf in self.leaves)


def _split(outcome):
    gq = getattr(outcome, "grover_queries", 0)
    vq = getattr(outcome, "verify_queries", 0)
    result = outcome.result if hasattr(outcome, "result") else outcome
    return result, gq, vq


def run_sampled(algorithm, oracle, seed=0):
    """One execution of ``algorithm(ctx, oracle)``; returns (outcome, queries, transcript)."""
    ctx = Sampler(seed)
    before = oracle.queries
    outcome = algorithm(ctx, oracle)
    return outcome, oracle.queries - before, ctx.transcript


def run_enumerated(algorithm, oracle, prune=DEFAULT_PRUNE, node_budget=DEFAULT_NODE_BUDGET):
    """Exact outcome distribution of ``algorithm(ctx, oracle)`` as a BranchTree."""
    ctx = Enumerator(prune=prune, node_budget=node_budget)
    dist = algorithm(ctx, oracle)
    merged = defaultdict(float)
    for o, p in dist.probs.items():
        merged[_split(o)] += p
    leaves = [Leaf(r, p, gq, vq) for (r, gq, vq), p in merged.items()]
    return BranchTree(leaves, dist.pruned, ctx.nodes, dist)
