"""Four-step eps-error algorithm for functions constant on the middle Hamming weights.

Steps 1-2 look for ones (find-all with budget t, then one more with
eps/2-error search); steps 3-4 repeat this for zeros on the complemented
oracle.  Whichever side ends with "found fewer than t and nothing more"
has recovered x completely.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .branching import DEFAULT_PRUNE, run_enumerated
from .grover import PhaseOracle, eps_error_bound, eps_error_grover, find_all, find_all_bound
from .symfun import ParameterError, SymmetricFunction, jump_parameter, middle_value

LOW, MIDDLE, HIGH = "LOW", "MIDDLE", "HIGH"


class SpecificationError(KeyError):
    pass


class WeightClassification(NamedTuple):
    verdict: str
    x: tuple | None = None  # the recovered input for LOW / HIGH

    def correct_for(self, x, t) -> bool:
        x = tuple(int(b) for b in x)
        if self.verdict == MIDDLE:
            return t <= sum(x) <= len(x) - t
        return self.x == x


class Outcome(NamedTuple):
    result: object
    grover_queries: int = 0
    verify_queries: int = 0


class _Side(NamedTuple):
    known: frozenset | None  # all solutions, when the side pinned them down
    grover_queries: int
    verify_queries: int


def _search_side(ctx, view: PhaseOracle, t: int, eps: float):
    def after_find(fa):
        rest = view.crossing(fa.result)
        # Only success matters here, and its distribution depends on the
        # solution count alone, so equal counts share one enumeration.
        key = ("eps-found", rest.n, int(rest.effective().sum()), eps / 2)
        found = ctx.memo(key, lambda: ctx.map(eps_error_grover(ctx, rest, eps / 2),
                                              lambda s: s._replace(result=s.found)))
        return ctx.map(found, lambda s: _Side(
            fa.result if len(fa.result) < t and not s.result else None,
            fa.grover_queries + s.grover_queries,
            fa.verify_queries + s.verify_queries))

    return ctx.bind(find_all(ctx, view, t), after_find)


def classify_weight(ctx, oracle: PhaseOracle, t: int, eps: float):
    """Decide whether |x| < t (recovering x), |x| > n - t (recovering x), or neither.

    When both sides claim to have recovered x the ones-side wins; each claim
    is wrong with probability at most eps/2, so the verdict errs with
    probability at most eps.
    """
    n = oracle.n
    if not 0 < t <= n // 2 + 1:
        raise ParameterError(f"t must lie in 1..{n // 2 + 1}, got {t}")
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    low = _search_side(ctx, oracle, t, eps)
    high = _search_side(ctx, oracle.complement(), t, eps)

    def combine(lo, hi):
        if lo.known is not None:
            c = WeightClassification(LOW, tuple(int(i in lo.known) for i in range(1, n + 1)))
        elif hi.known is not None:
            c = WeightClassification(HIGH, tuple(int(i not in hi.known) for i in range(1, n + 1)))
        else:
            c = WeightClassification(MIDDLE)
        return Outcome(c, lo.grover_queries + hi.grover_queries, lo.verify_queries + hi.verify_queries)

    return ctx.bind(low, lambda lo: ctx.map(high, lambda hi: combine(lo, hi)))


def compute_symmetric(ctx, f: SymmetricFunction, oracle: PhaseOracle, eps: float):
    """f(x) with error probability at most eps."""
    if f.is_constant:
        raise ParameterError("f must be non-constant")
    if oracle.n != f.n:
        raise ParameterError(f"oracle has {oracle.n} bits, f has {f.n}")
    t = jump_parameter(f)
    mid = middle_value(f, t)

    def decide(o):
        c = o.result
        bit = mid if c.verdict == MIDDLE else f.spectrum[sum(c.x)]
        return Outcome(bit, o.grover_queries, o.verify_queries)

    return ctx.map(classify_weight(ctx, oracle, t, eps), decide)


def _bits(key):
    if isinstance(key, str):
        return tuple(int(c) for c in key)
    return tuple(int(b) for b in key)


def compute_promise(ctx, low_table, high_table, middle, t, oracle: PhaseOracle, eps):
    """Evaluate a function that is constant (``middle``) on weights t..n-t.

    ``low_table`` must give a bit for every input of weight < t and
    ``high_table`` one for every input of weight > n - t; the function need
    not be symmetric there.
    """
    n = oracle.n
    low = {_bits(k): int(v) for k, v in low_table.items()}
    high = {_bits(k): int(v) for k, v in high_table.items()}
    for x in itertools.product((0, 1), repeat=n):
        w = sum(x)
        if w < t and x not in low:
            raise SpecificationError(f"low_table has no entry for {''.join(map(str, x))}")
        if w > n - t and x not in high:
            raise SpecificationError(f"high_table has no entry for {''.join(map(str, x))}")

    def decide(o):
        c = o.result
        if c.verdict == LOW:
            bit = low[c.x]
        elif c.verdict == HIGH:
            bit = high[c.x]
        else:
            bit = int(middle)
        return Outcome(bit, o.grover_queries, o.verify_queries)

    return ctx.map(classify_weight(ctx, oracle, t, eps), decide)


@dataclass(frozen=True)
class PromiseFunction:
    """A function constant on weights t..n-t and arbitrary (tabulated) outside."""
    n: int
    t: int
    low_table: dict
    high_table: dict
    middle: int

    def __call__(self, x) -> int:
        x = _bits(x)
        w = sum(x)
        if w < self.t:
            return int(self.low_table[_key(x, self.low_table)])
        if w > self.n - self.t:
            return int(self.high_table[_key(x, self.high_table)])
        return int(self.middle)

    def algorithm(self, eps):
        return lambda ctx, o: compute_promise(ctx, self.low_table, self.high_table, self.middle, self.t, o, eps)


def _key(x, table):
    s = "".join(map(str, x))
    return s if s in table else x


def query_budget(n: int, t: int, eps: float) -> int:
    """Worst-case total queries (iterates plus checks) of the four-step algorithm."""
    side_g = find_all_bound(n, t)
    side_v = min(t, n)
    g, v = eps_error_bound(n, eps / 2)
    return 2 * (side_g + side_v + g + v)


@dataclass
class AlgorithmReport:
    error: dict = field(default_factory=dict)  # input -> probability of a wrong answer
    max_grover_queries: int = 0
    max_verify_queries: int = 0
    max_queries: int = 0
    leaves: int = 0
    pruned_mass: float = 0.0

    @property
    def worst_error(self) -> float:
        return max(self.error.values())


def analyze(f: SymmetricFunction, eps: float, inputs=None, prune=DEFAULT_PRUNE) -> AlgorithmReport:
    """Enumerate :func:`compute_symmetric` exactly on every input (default: all 2^n)."""
    if inputs is None:
        inputs = itertools.product((0, 1), repeat=f.n)
    rep = AlgorithmReport()
    for x in inputs:
        x = tuple(x)
        tree = run_enumerated(lambda ctx, o: compute_symmetric(ctx, f, o, eps), PhaseOracle(x), prune=prune)
        want = f(x)
        rep.error[x] = tree.mass(lambda b: b != want) + tree.pruned_mass
        rep.max_grover_queries = max(rep.max_grover_queries, tree.max_grover_queries)
        rep.max_verify_queries = max(rep.max_verify_queries, max(l.verify_queries for l in tree.leaves))
        rep.max_queries = max(rep.max_queries, tree.max_queries)
        rep.leaves += len(tree.leaves)
        rep.pruned_mass = max(rep.pruned_mass, tree.pruned_mass)
    return rep


def theoretical_scale(n: int, t: int, eps: float) -> float:
    return math.sqrt(t * n) + math.sqrt(n * math.log(1 / eps))
