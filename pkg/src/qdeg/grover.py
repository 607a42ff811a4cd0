"""State-vector Grover search with a phase oracle, and the search routines built on it.

The search register has ``n`` real amplitudes (indices 1..n) plus one dummy
coordinate.  The dummy only carries amplitude for exact Grover, whose start
state parks a little weight there so that the rotation angle divides pi/2
exactly.  Measuring the dummy never yields a candidate.

Search routines take an execution context (see :mod:`qdeg.branching`) and
return :class:`SearchResult` values.  Every measured candidate index is
checked with one classical query before being reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import NamedTuple

import numpy as np

from . import _kernels

DUMMY = 0


@dataclass
class QueryCounter:
    grover: int = 0
    verify: int = 0

    @property
    def total(self):
        return self.grover + self.verify


class PhaseOracle:
    """Query access to a bit string x, with a crossed-out overlay and a complement switch.

    Derived views (:meth:`crossing`, :meth:`complement`) share the query
    counter of the oracle they came from.
    """

    def __init__(self, x, crossed=frozenset(), flipped=False, counter=None):
        self.x = np.asarray([int(b) for b in x], dtype=np.int8)
        if self.x.ndim != 1 or len(self.x) == 0 or np.any((self.x != 0) & (self.x != 1)):
            raise ValueError("x must be a non-empty bit string")
        self.crossed = frozenset(crossed)
        if any(not 1 <= i <= self.n for i in self.crossed):
            raise ValueError(f"crossed indices must lie in 1..{self.n}")
        self.flipped = bool(flipped)
        self.counter = counter if counter is not None else QueryCounter()
        mask = (self.x == 0) if self.flipped else (self.x == 1)
        for i in self.crossed:
            mask[i - 1] = False
        mask.flags.writeable = False
        self._mask = mask

    def __repr__(self):
        bits = "".join(map(str, self.x))
        return f"PhaseOracle(x={bits}, crossed={sorted(self.crossed)}, flipped={self.flipped})"

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def queries(self) -> int:
        return self.counter.total

    def effective(self) -> np.ndarray:
        """Boolean mask of indices the oracle currently marks as solutions (read-only)."""
        return self._mask

    def solutions(self) -> frozenset[int]:
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.effective()))

    def crossing(self, indices) -> PhaseOracle:
        return PhaseOracle(self.x, self.crossed | frozenset(indices), self.flipped, self.counter)

    def complement(self) -> PhaseOracle:
        """View answering on the complement of x, with a fresh crossing overlay."""
        return PhaseOracle(self.x, frozenset(), not self.flipped, self.counter)

    def phase_signs(self) -> np.ndarray:
        """+-1 per coordinate of the search register (dummy last, never flipped)."""
        signs = np.ones(self.n + 1)
        signs[:-1][self._mask] = -1.0
        self.counter.grover += 1
        return signs

    def peek(self, i) -> bool:
        """Solution test without charging a query (for bookkeeping only)."""
        return bool(self._mask[i - 1])

    def verify(self, i) -> bool:
        self.counter.verify += 1
        return self.peek(i)


@dataclass
class SearchState:
    amp: np.ndarray
    start: np.ndarray = field(repr=False)

    @classmethod
    def initial(cls, n, dummy_weight=0.0):
        """Start state: weight ``dummy_weight`` on the dummy, the rest uniform over 1..n."""
        start = np.full(n + 1, math.sqrt((1.0 - dummy_weight) / n))
        start[n] = math.sqrt(dummy_weight)
        return cls(start.copy(), start)

    @property
    def n(self):
        return len(self.amp) - 1

    def norm(self) -> float:
        return float(np.sqrt(self.amp @ self.amp))

    def probabilities(self) -> np.ndarray:
        return self.amp ** 2

    def solution_mass(self, oracle: PhaseOracle) -> float:
        return float(self.probabilities()[:-1][oracle.effective()].sum())

    def outcome_probabilities(self) -> dict:
        p = self.probabilities()
        out = {i + 1: float(p[i]) for i in range(self.n)}
        out[DUMMY] = float(p[self.n])
        return out


def grover_iterate(state: SearchState, oracle: PhaseOracle) -> SearchState:
    """One query: phase flip on effective solutions, then reflection about the start state."""
    amp = _kernels.grover_iterations(state.amp.copy(), state.start, oracle.phase_signs(), 1)
    return SearchState(amp, state.start)


def success_probability(n: int, k: int, steps: int) -> float:
    theta = math.asin(math.sqrt(k / n))
    return math.sin((2 * steps + 1) * theta) ** 2


def exact_schedule(n: int, k: int) -> tuple[int, float]:
    """Iteration count and dummy weight for exact Grover assuming k of n solutions.

    T = ceil(pi/(4 theta) - 1/2); the dummy weight shrinks the effective
    angle to pi/(4T + 2) so that T iterates land exactly on the solutions.
    """
    theta = math.asin(math.sqrt(k / n))
    steps = max(0, math.ceil(math.pi / (4 * theta) - 0.5 - 1e-9))
    target = math.pi / (4 * steps + 2)
    gamma = 1.0 - (n / k) * math.sin(target) ** 2
    return steps, min(max(gamma, 0.0), 1.0)


def usual_iterations(n: int, k: float) -> int:
    theta = math.asin(math.sqrt(min(k / n, 1.0)))
    return int(math.floor(math.pi / (4 * theta) + 1e-9))


def halving_schedule(n: int, t_min: int) -> list[float]:
    """Assumed solution counts n, n/2, n/4, ... down to t_min."""
    ks = [float(n)]
    k = n / 2
    while k >= t_min:
        ks.append(k)
        k /= 2
    if ks[-1] > t_min:
        ks.append(float(t_min))
    return ks


class SearchResult(NamedTuple):
    result: int | None
    grover_queries: int = 0
    verify_queries: int = 0

    @property
    def found(self) -> bool:
        return self.result is not None

    def after(self, prior: SearchResult) -> SearchResult:
        return SearchResult(self.result, self.grover_queries + prior.grover_queries,
                            self.verify_queries + prior.verify_queries)


def search_attempt(ctx, oracle: PhaseOracle, steps: int, dummy_weight: float = 0.0):
    """Run ``steps`` iterates, measure, and check the candidate with one query."""
    probs = ctx.simulate(oracle, dummy_weight, steps)

    def check(i):
        if i == DUMMY:
            return SearchResult(None, steps, 0)
        hit = ctx.verify(oracle, i)
        return SearchResult(i if hit else None, steps, 1)

    return ctx.map(ctx.measure(probs), check)


def first_success(ctx, attempts):
    """Run zero-argument attempts in order until one returns a found result."""
    if not attempts:
        return ctx.pure(SearchResult(None))
    head, rest = attempts[0], attempts[1:]

    def cont(r):
        if r.found or not rest:
            return ctx.pure(r)
        return ctx.map(first_success(ctx, rest), lambda s: s.after(r))

    return ctx.bind(head(), cont)


def exact_grover(ctx, oracle: PhaseOracle, k: int):
    """Find a solution with certainty when exactly k effective solutions exist.

    Uses at most ceil((pi/4) sqrt(n/k)) Grover iterates plus one check.  With
    a different solution count the result is still checked, so a reported
    index is always a true solution.
    """
    if k < 1:
        raise ValueError(f"exact Grover needs k >= 1, got {k}")
    if k > oracle.n:
        raise ValueError(f"k={k} exceeds n={oracle.n}")
    steps, gamma = exact_schedule(oracle.n, k)
    return search_attempt(ctx, oracle, steps, gamma)


def usual_grover(ctx, oracle: PhaseOracle, t_min: int = 1):
    """Search when at least ``t_min`` solutions are promised, count otherwise unknown.

    One pass tries the assumed counts n, n/2, ..., t_min; a second pass runs
    if the first finds nothing.
    """
    if t_min < 1:
        raise ValueError(f"t_min must be >= 1, got {t_min}")
    n = oracle.n
    t_min = min(t_min, n)
    one_pass = [partial(search_attempt, ctx, oracle, usual_iterations(n, k)) for k in halving_schedule(n, t_min)]
    return first_success(ctx, one_pass * 2)


def eps_error_levels(eps: float) -> int:
    """ceil(log2(1/eps)), the number of exact passes in eps-error Grover."""
    return max(1, math.ceil(math.log2(1.0 / eps) - 1e-12))


def eps_error_grover(ctx, oracle: PhaseOracle, eps: float):
    """Find a solution with failure probability at most ``eps`` if one exists."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return ctx.memo(("eps", oracle.solutions(), oracle.n, eps), lambda: _eps_error(ctx, oracle, eps))


def _eps_error(ctx, oracle, eps):
    n = oracle.n
    levels = eps_error_levels(eps)
    attempts = [partial(exact_grover, ctx, oracle, j) for j in range(1, min(levels, n) + 1)]
    if levels < n:
        reps = math.ceil(math.log2(2.0 / eps) - 1e-12)
        attempts += [partial(usual_grover, ctx, oracle, levels)] * reps
    return first_success(ctx, attempts)


class FindAllResult(NamedTuple):
    result: frozenset
    remaining: tuple  # effective solutions left after each run
    grover_queries: int = 0
    verify_queries: int = 0


def find_all(ctx, oracle: PhaseOracle, t: int):
    """Find every effective solution, given that there are at most ``t`` of them.

    Exact Grover runs with assumed counts t, t-1, ..., 1; each confirmed
    solution is crossed out before the next run.  Runs whose assumed count
    exceeds the number of uncrossed positions are skipped for free.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")

    def run(view, k):
        key = ("find", view.solutions(), len(view.crossed), view.n, k)
        return ctx.memo(key, lambda: _run(view, k))

    def _run(view, k):
        if k == 0:
            return ctx.pure(FindAllResult(frozenset(), ()))
        if k > view.n - len(view.crossed):
            left = int(view.effective().sum())
            return ctx.map(run(view, k - 1), lambda rest: rest._replace(remaining=(left,) + rest.remaining))

        def cont(r):
            nxt = view.crossing([r.result]) if r.found else view
            left = int(nxt.effective().sum())
            return ctx.map(run(nxt, k - 1), lambda rest: FindAllResult(
                rest.result | ({r.result} if r.found else set()),
                (left,) + rest.remaining,
                rest.grover_queries + r.grover_queries,
                rest.verify_queries + r.verify_queries))

        return ctx.bind(exact_grover(ctx, view, k), cont)

    return run(oracle, t)


def find_all_bound(n: int, t: int) -> int:
    """Worst-case Grover iterates of :func:`find_all` (the sum of exact-Grover counts)."""
    return sum(exact_schedule(n, i)[0] for i in range(1, min(t, n) + 1))


def usual_grover_bound(n: int, t_min: int) -> tuple[int, int]:
    t_min = min(t_min, n)
    sched = halving_schedule(n, t_min)
    return 2 * sum(usual_iterations(n, k) for k in sched), 2 * len(sched)


def eps_error_bound(n: int, eps: float) -> tuple[int, int]:
    """Worst-case (Grover iterates, checks) of :func:`eps_error_grover`."""
    levels = eps_error_levels(eps)
    g = sum(exact_schedule(n, j)[0] for j in range(1, min(levels, n) + 1))
    v = min(levels, n)
    if levels < n:
        reps = math.ceil(math.log2(2.0 / eps) - 1e-12)
        ug, uv = usual_grover_bound(n, levels)
        g += reps * ug
        v += reps * uv
    return g, v
