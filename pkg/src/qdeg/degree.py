"""Exact eps-approximate degrees of symmetric functions, and the bound checks built on them.

By symmetrization the best degree-d approximation of a symmetric f can be
taken univariate in the Hamming weight, so deg_eps(f) is decided by a
discrete minimax problem on the n+1 weights, solved as a small LP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial import chebyshev as C

from . import simplex
from .polyx import COEFF_TOL, UnivariatePoly, acceptance_surface, bits_of, mobius_transform, poly_degree
from .symfun import (SymmetricFunction, NotApplicableError, apply_polarity, embed_or, jump_parameter,
                     make_named, restrict)

FEAS_TOL = 1e-9


class NumericalError(ArithmeticError):
    pass


@dataclass
class MinimaxResult:
    degree: int
    error: float
    witness: UnivariatePoly
    certificate: list = field(default_factory=list)  # (weight, sign of witness - f)

    def residuals(self, spectrum) -> np.ndarray:
        return self.witness.values() - np.asarray(spectrum, dtype=np.float64)


def chebyshev_matrix(n: int, d: int) -> np.ndarray:
    nodes = 2.0 * np.arange(n + 1) / n - 1.0
    return C.chebvander(nodes, d)


def _reference(n: int, d: int) -> list:
    """d+2 distinct weights near the Chebyshev extrema of [0, n]: a well-conditioned start."""
    target = n / 2 * (1 - np.cos(np.pi * np.arange(d + 2) / (d + 1)))
    ks = []
    for j, x in enumerate(target):
        k = max(int(round(x)), ks[-1] + 1 if ks else 0)
        ks.append(min(k, n - (d + 1 - j)))
    return ks


@lru_cache(maxsize=4096)
def _minimax(values: tuple, d: int) -> MinimaxResult:
    y = np.asarray(values, dtype=np.float64)
    n = len(y) - 1
    if d >= n:
        coeffs = np.zeros(d + 1)
        coeffs[:n + 1] = np.linalg.solve(chebyshev_matrix(n, n), y)
        return MinimaxResult(d, 0.0, UnivariatePoly(n, coeffs), [(k, 0) for k in range(n + 1)])
    A = chebyshev_matrix(n, d)
    # Dual of  min e  s.t. |A c - y| <= e :
    #   max y.(u - v)  s.t.  A^T (u - v) = 0,  sum(u + v) = 1,  u, v >= 0.
    # Its multipliers are the coefficients c (first d+1) and the error e (last).
    eq = np.vstack([np.hstack([A.T, -A.T]), np.ones((1, 2 * (n + 1)))])
    rhs = np.zeros(d + 2)
    rhs[-1] = 1.0
    ref = _reference(n, d)
    # null vector of A[ref]^T: alternating signs decide u (+) or v (-) per point
    w = np.linalg.svd(A[ref].T)[2][-1]
    basis = [k if wk > 0 else k + n + 1 for k, wk in zip(ref, w)]
    try:
        _, value, duals, _ = simplex.solve_equality(np.concatenate([y, -y]), eq, rhs, basis=basis)
    except (simplex.LPError, np.linalg.LinAlgError) as exc:
        raise NumericalError(f"minimax LP failed for n={n}, d={d}: {exc}") from exc
    coeffs = duals[:d + 1]
    err = max(value, 0.0)
    witness = UnivariatePoly(n, coeffs)
    res = A @ coeffs - y
    if np.abs(res).max() > err + 1e-7:
        raise NumericalError(f"LP witness violates its own bound: {np.abs(res).max()} > {err}")
    cert = [(k, int(np.sign(r))) for k, r in enumerate(res) if abs(r) >= err - 1e-9]
    return MinimaxResult(d, err, witness, cert)


def minimax_error(f, d: int) -> MinimaxResult:
    """Best uniform error of a degree-<=d polynomial on the weights 0..n."""
    spectrum = f.spectrum if isinstance(f, SymmetricFunction) else tuple(f)
    n = len(spectrum) - 1
    if not 0 <= d <= n:
        raise ValueError(f"degree must lie in 0..{n}, got {d}")
    return _minimax(tuple(float(v) for v in spectrum), d)


def approx_degree(f, eps: float) -> int:
    """Smallest d whose minimax error is at most eps (binary search; error is monotone in d)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    spectrum = f.spectrum if isinstance(f, SymmetricFunction) else tuple(f)
    lo, hi = 0, len(spectrum) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if minimax_error(spectrum, mid).error <= eps + FEAS_TOL:
            hi = mid
        else:
            lo = mid + 1
    return lo


class LowerBoundCheck(NamedTuple):
    m: int | None
    passed: bool
    deg_eps: int
    deg_or: int | None
    deg_13: int


def lower_bound_check(f: SymmetricFunction, eps: float) -> LowerBoundCheck:
    """deg_eps(f) >= deg_eps(OR_m) for an embedded OR_m, and >= deg_1/3(f) when eps <= 1/3.

    When t >= n/4 no OR embedding is attempted and only the second
    inequality is checked.
    """
    deg_eps = approx_degree(f, eps)
    deg_13 = approx_degree(f, 1 / 3)
    mono = deg_eps >= deg_13 if eps <= 1 / 3 else True
    try:
        m, r, polarity = embed_or(f)
    except NotApplicableError:
        return LowerBoundCheck(None, mono, deg_eps, None, deg_13)
    g = restrict(apply_polarity(f, polarity), r)
    if g.spectrum != make_named("or", m).spectrum:
        raise AssertionError(f"embedding of {f.name} is not OR_{m}")
    deg_or = approx_degree(g, eps)
    return LowerBoundCheck(m, mono and deg_eps >= deg_or, deg_eps, deg_or, deg_13)


class UpperBoundCheck(NamedTuple):
    deg_lp: int | None
    two_T: int
    poly_ok: bool
    surface_degree: int
    max_error: float


def upper_bound_check(f, eps: float, budget: int = 8) -> UpperBoundCheck:
    """Run the eps-error algorithm on every input and check what its acceptance polynomial gives.

    ``f`` is a SymmetricFunction or a :class:`qdeg.qsym.PromiseFunction`;
    for the latter no LP degree is available (``deg_lp`` is None).
    """
    from .qsym import PromiseFunction, compute_symmetric
    if isinstance(f, PromiseFunction):
        algorithm = f.algorithm(eps)
        deg_lp = None
    else:
        algorithm = lambda ctx, o: compute_symmetric(ctx, f, o, eps)  # noqa: E731
        deg_lp = approx_degree(f, eps)
    surface, max_q = acceptance_surface(algorithm, f.n, budget=budget)
    target = np.array([f(bits_of(m, f.n)) for m in range(1 << f.n)])
    max_err = float(np.abs(surface - target).max())
    p = mobius_transform(surface, f.n)
    two_T = 2 * max_q
    surface_degree = poly_degree(p, COEFF_TOL)
    return UpperBoundCheck(deg_lp, two_T, max_err <= eps + FEAS_TOL and surface_degree <= two_T,
                           surface_degree, max_err)


class BandRow(NamedTuple):
    family: str
    n: int
    t: int
    eps: float
    deg_eps: int
    deg_13: int
    ratio: float
    e_star: float
    excluded: bool = False


@dataclass
class BandReport:
    rows: list
    band_min: float
    band_max: float
    monotone_n: bool
    monotone_eps: bool
    band_limit: float | None = None

    @property
    def passed(self) -> bool:
        ok = self.monotone_n and self.monotone_eps
        if self.band_limit is not None:
            ok = ok and self.band_max / self.band_min <= self.band_limit
        return ok

    def summary(self) -> dict:
        return {"band_min": self.band_min, "band_max": self.band_max,
                "width": self.band_max / self.band_min if self.band_min else math.inf,
                "monotone_n": self.monotone_n, "monotone_eps": self.monotone_eps,
                "band_limit": self.band_limit, "passed": self.passed}


def band_row(f: SymmetricFunction, eps: float, family: str | None = None) -> BandRow:
    """One theorem-band measurement: deg_eps / (deg_1/3 + sqrt(n ln(1/eps)))."""
    t = jump_parameter(f)
    deg_eps = approx_degree(f, eps)
    deg_13 = approx_degree(f, 1 / 3)
    ratio = deg_eps / (deg_13 + math.sqrt(f.n * math.log(1 / eps)))
    e_star = minimax_error(f, deg_eps).error
    return BandRow(family or f.name, f.n, t, eps, deg_eps, deg_13, ratio, e_star, 4 * t >= f.n)


def theorem_band(family: str, n_grid, eps_grid, band_limit: float | None = None) -> BandReport:
    """Ratios deg_eps / (deg_1/3 + sqrt(n ln 1/eps)) over a grid, with monotonicity checks.

    Natural logarithms throughout.  Rows whose jump parameter is at least
    n/4 are reported but excluded from the band.
    """
    rows = []
    for n in n_grid:
        for eps in eps_grid:
            if eps < 2.0 ** -n or eps > 1 / 3 + 1e-12:
                raise ValueError(f"eps={eps} outside [2^-{n}, 1/3]")
            rows.append(band_row(make_named(family, n), eps, family))
    ratios = [r.ratio for r in rows if not r.excluded]
    by_eps = {}
    for r in rows:
        by_eps.setdefault(r.eps, []).append(r)
    monotone_n = all(all(a.deg_eps <= b.deg_eps for a, b in zip(rs, rs[1:]))
                     for rs in (sorted(v, key=lambda r: r.n) for v in by_eps.values()))
    by_n = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(r)
    monotone_eps = all(all(a.deg_eps <= b.deg_eps for a, b in zip(rs, rs[1:]))
                       for rs in (sorted(v, key=lambda r: -r.eps) for v in by_n.values()))
    lo = min(ratios) if ratios else math.nan
    hi = max(ratios) if ratios else math.nan
    return BandReport(rows, lo, hi, monotone_n, monotone_eps, band_limit)


def paturi_ratio(f: SymmetricFunction) -> float:
    """deg_1/3(f) / sqrt(t n)."""
    return approx_degree(f, 1 / 3) / math.sqrt(jump_parameter(f) * f.n)
