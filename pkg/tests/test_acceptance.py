"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (also collected
into the terminal summary by conftest) and then asserts.  Thresholds are the
stated ones; frozen regression constants are marked as such.
"""
import contextlib
import itertools
import math
import random
import time

import numpy as np
import pytest

from oracles import minimax_by_subsets
from qdeg.branching import run_enumerated
from qdeg.degree import approx_degree, lower_bound_check, minimax_error
from qdeg.grover import (PhaseOracle, SearchState, eps_error_grover, exact_grover, find_all, grover_iterate)
from qdeg.polyx import COEFF_TOL, acceptance_surface, bits_of, mobius_transform, poly_degree, symmetrize
from qdeg.qsym import analyze, compute_symmetric, query_budget
from qdeg.symfun import Restriction, jump_parameter, make_named, restrict

RESULTS = {}

# frozen at first measurement (regression values, not derived bounds)
C_SEARCH = 11.7                      # measured max 11.678
OR_BAND = (0.38929851144569005, 0.9283056451410983)
PATURI_BAND = (0.5, 0.75)
BAND_TOL = 1e-9

MAIN_CONFIGS = [(fam, n, eps) for fam in ("or", "and", "threshold2", "threshold3")
                for n in (6, 8) for eps in (1 / 3, 0.1)]


@contextlib.contextmanager
def criterion(number, title, limit_s):
    t0 = time.perf_counter()
    info = {}
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        in_time = elapsed < limit_s
        status = "PASS" if ok and in_time else "FAIL"
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        line = f"ACCEPTANCE {number} {status}  {title}  [{elapsed:.1f}s / {limit_s:.0f}s]  {detail}"
        RESULTS[number] = line
        print(line)
    assert in_time, f"criterion {number} took {elapsed:.1f}s (limit {limit_s}s)"


def _weight_reps(n, k, count, rng):
    """Inputs of weight k: the prefix pattern plus ``count`` random placements."""
    reps = {tuple([1] * k + [0] * (n - k))}
    for _ in range(count):
        s = set(rng.sample(range(n), k))
        reps.add(tuple(int(i in s) for i in range(n)))
    return sorted(reps)


def test_criterion_1_formula_fidelity():
    with criterion(1, "state-vector mass matches sin^2((2T+1)theta)", 1.0) as info:
        worst = 0.0
        for n in (2, 4, 8, 16, 32, 64):
            for k in range(n + 1):
                oracle = PhaseOracle([1] * k + [0] * (n - k))
                theta = math.asin(math.sqrt(k / n))
                state = SearchState.initial(n)
                for T in range(21):
                    if T:
                        state = grover_iterate(state, oracle)
                    worst = max(worst, abs(state.solution_mass(oracle) - math.sin((2 * T + 1) * theta) ** 2))
        info["max_abs_dev"] = f"{worst:.2e}"
        assert worst <= 1e-10


def test_criterion_2_exact_grover():
    with criterion(2, "exact Grover succeeds w.p. 1 within ceil(pi/4 sqrt(n/k)) iterates", 5.0) as info:
        worst_fail, checked = 0.0, 0
        for n in range(1, 65):
            for k in range(1, n + 1):
                tree = run_enumerated(lambda ctx, o: exact_grover(ctx, o, k), PhaseOracle([1] * k + [0] * (n - k)))
                fail = 1 - tree.mass(lambda r: r is not None)
                worst_fail = max(worst_fail, fail)
                assert fail <= 1e-9, (n, k, fail)
                assert tree.max_grover_queries <= math.ceil(math.pi / 4 * math.sqrt(n / k)), (n, k)
                checked += 1
        info["pairs"] = checked
        info["max_failure"] = f"{worst_fail:.1e}"


def test_criterion_3_find_all():
    with criterion(3, "find-all returns every solution; loop invariant on every branch", 30.0) as info:
        rng = random.Random(3)
        runs, worst_ratio = 0, 0.0
        for n in range(1, 11):
            for t in range(1, 5):
                bound = math.pi / 2 * math.sqrt(t * n) + t
                for k in range(0, min(t, n) + 1):
                    for x in _weight_reps(n, k, 2, rng):
                        oracle = PhaseOracle(x)
                        want = oracle.solutions()
                        tree = run_enumerated(lambda ctx, o: find_all(ctx, o, t), oracle)
                        assert tree.mass(lambda r: r == want) >= 1 - 1e-9, (x, t)
                        assert tree.max_grover_queries <= bound, (x, t)
                        for outcome in tree.raw.probs:
                            left = [len(want)] + list(outcome.remaining)
                            assert all(l <= a for a, l in zip(range(t, 0, -1), left)), (x, t, outcome)
                        worst_ratio = max(worst_ratio, tree.max_grover_queries / bound)
                        runs += 1
        info["runs"] = runs
        info["max_queries/bound"] = f"{worst_ratio:.3f}"


def test_criterion_4_eps_error_search():
    with criterion(4, f"eps-error search fails w.p. <= eps, queries <= {C_SEARCH} sqrt(n ln 1/eps)", 60.0) as info:
        rng = random.Random(4)
        worst_fail, worst_c, runs = 0.0, 0.0, 0
        for n in (8, 16):
            if n == 8:
                inputs = [x for x in itertools.product((0, 1), repeat=8) if any(x)]
            else:
                inputs = [x for k in range(1, n + 1) for x in _weight_reps(n, k, 3, rng)]
            for eps in (1 / 4, 1 / 8, 1 / 16):
                scale = math.sqrt(n * math.log(1 / eps))
                for x in inputs:
                    tree = run_enumerated(lambda ctx, o: eps_error_grover(ctx, o, eps), PhaseOracle(x))
                    fail = tree.mass(lambda r: r is None) + tree.pruned_mass
                    worst_fail = max(worst_fail, fail / eps)
                    worst_c = max(worst_c, tree.max_queries / scale)
                    assert fail <= eps, (x, eps, fail)
                    assert tree.max_queries <= C_SEARCH * scale, (x, eps, tree.max_queries)
                    runs += 1
        info["runs"] = runs
        info["max_fail/eps"] = f"{worst_fail:.2e}"
        info["max_C"] = f"{worst_c:.3f}"


_REPORTS = {}


def _main_reports():
    if not _REPORTS:
        _REPORTS.update({cfg: analyze(make_named(cfg[0], cfg[1]), cfg[2]) for cfg in MAIN_CONFIGS})
    return _REPORTS


@pytest.fixture(scope="module")
def main_reports():
    return _main_reports()


def test_criterion_5_main_algorithm():
    with criterion(5, "four-step algorithm: worst error <= eps, queries <= budget", 300.0) as info:
        main_reports = _main_reports()  # timed here; criteria 6 and 8 reuse it
        worst = 0.0
        for (fam, n, eps), rep in main_reports.items():
            f = make_named(fam, n)
            budget = query_budget(n, jump_parameter(f), eps)
            assert len(rep.error) == 2 ** n
            assert rep.worst_error <= eps, (fam, n, eps, rep.worst_error)
            assert rep.max_queries <= budget, (fam, n, eps, rep.max_queries, budget)
            worst = max(worst, rep.worst_error / eps)
        info["configs"] = len(main_reports)
        info["max_error/eps"] = f"{worst:.2e}"


def test_criterion_6_polynomial_connection(main_reports):
    with criterion(6, "acceptance polynomial: degree <= 2T and eps-approximation", 120.0) as info:
        runs = 0
        for (fam, n, eps), rep in main_reports.items():
            if n > 6:
                continue
            f = make_named(fam, n)
            surface, max_q = acceptance_surface(lambda ctx, o: compute_symmetric(ctx, f, o, eps), n)
            assert max_q == rep.max_queries
            target = np.array([f(bits_of(m, n)) for m in range(1 << n)])
            p = mobius_transform(surface, n)
            assert poly_degree(p, COEFF_TOL) <= 2 * max_q
            assert np.abs(surface - target).max() <= eps
            q = symmetrize(p)
            assert np.abs(q.values() - np.array(f.spectrum)).max() <= eps
            runs += 1
        info["runs"] = runs


ZOO = [make_named(fam, n) for n in (1, 2, 3, 5, 8, 13) for fam in ("or", "and", "parity", "majority")] + \
      [make_named(f"threshold{tau}", n) for n in (4, 9, 16) for tau in (2, 3)]


def test_criterion_7_degree_oracle():
    with criterion(7, "LP degree oracle: parity, OR_1, endpoints, brute-force agreement", 60.0) as info:
        for n in range(1, 13):
            assert approx_degree(make_named("parity", n), 1 / 3) == n
        assert approx_degree(make_named("or", 1), 1 / 3) == 1
        for f in ZOO:
            assert minimax_error(f, f.n).error == 0.0
            assert minimax_error(f, 0).error == pytest.approx(0.5, abs=1e-12)
        worst, cases = 0.0, 0
        for n in range(1, 7):
            for spec in itertools.product((0, 1), repeat=n + 1):
                if len(set(spec)) < 2:
                    continue
                for d in range(n + 1):
                    diff = abs(minimax_error(spec, d).error - float(minimax_by_subsets(spec, d)))
                    worst = max(worst, diff)
                    cases += 1
        info["lp_cases"] = cases
        info["max_lp_vs_bruteforce"] = f"{worst:.1e}"
        assert worst <= 1e-6


def _or_embedding(f):
    """An explicit OR_m restriction for the threshold-like zoo members."""
    chk = lower_bound_check(f, 1 / 3)
    if chk.m is not None:
        return None
    # t >= n/4: fix tau-1 ones, the remaining bits compute OR
    tau = next(k for k, v in enumerate(f.spectrum) if v)
    r = Restriction(f.n, ones=set(range(1, tau)))
    g = restrict(f, r)
    assert g.spectrum == make_named("or", g.n).spectrum
    return g


def test_criterion_8_theorem_consistency(main_reports):
    with criterion(8, "LP degree <= 2 * max branch queries and >= embedded OR degree", 60.0) as info:
        gaps = []
        for (fam, n, eps), rep in main_reports.items():
            f = make_named(fam, n)
            deg = approx_degree(f, eps)
            assert deg <= 2 * rep.max_queries
            chk = lower_bound_check(f, eps)
            if chk.m is not None:
                assert chk.passed and deg >= chk.deg_or
                m = chk.m
            else:
                g = _or_embedding(f)
                m = g.n
                assert deg >= approx_degree(g, eps)
            gaps.append((fam, n, eps, deg, 2 * rep.max_queries, m))
        info["min_slack"] = min(b - d for *_, d, b, _ in gaps)


def test_criterion_9_scaling_bands():
    from qdeg.degree import paturi_ratio, theorem_band
    with criterion(9, "frozen scaling bands for OR and THRESHOLD", 120.0) as info:
        rep = theorem_band("or", list(range(8, 65, 8)), [1 / 3, 2 ** -4, 2 ** -8])
        assert rep.monotone_n and rep.monotone_eps
        assert OR_BAND[0] - BAND_TOL <= rep.band_min and rep.band_max <= OR_BAND[1] + BAND_TOL
        info["or_band"] = f"[{rep.band_min:.4f}, {rep.band_max:.4f}]"
        ratios = {}
        for tau in (1, 2, 3, 4):
            degs = []
            for n in (16, 32, 64):
                f = make_named(f"threshold{tau}", n)
                ratios[tau, n] = paturi_ratio(f)
                degs.append(approx_degree(f, 1 / 3))
            assert degs == sorted(degs)
        for n in (16, 32, 64):
            d = [approx_degree(make_named(f"threshold{tau}", n), 1 / 3) for tau in (1, 2, 3, 4)]
            assert d == sorted(d)
        lo, hi = min(ratios.values()), max(ratios.values())
        assert PATURI_BAND[0] - BAND_TOL <= lo and hi <= PATURI_BAND[1] + BAND_TOL
        info["paturi_band"] = f"[{lo:.4f}, {hi:.4f}]"
