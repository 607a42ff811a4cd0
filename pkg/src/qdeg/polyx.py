"""Acceptance-probability surfaces, their multilinear coefficients, and symmetrization.

Tables over {0,1}^n are numpy arrays indexed by bitmask, bit ``i-1`` holding
x_i.  A multilinear coefficient a_S lives at the mask of S.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from . import _kernels
from .branching import DEFAULT_PRUNE, ResourceError, run_enumerated
from .grover import PhaseOracle

COEFF_TOL = 1e-8


def bits_of(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def mask_of(x) -> int:
    return sum(int(b) << i for i, b in enumerate(x))


def popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    return np.array([bin(m).count("1") for m in masks])


def acceptance_surface(algorithm, n: int, prune=DEFAULT_PRUNE, budget: int | None = None):
    """Exact P[algorithm outputs 1] for every x in {0,1}^n.

    Returns ``(values, max_queries)`` where ``max_queries`` is the largest
    query total over all inputs and branches.
    """
    if budget is not None and n > budget:
        raise ResourceError(f"n={n} exceeds the enumeration budget {budget}")
    values = np.zeros(1 << n)
    max_q = 0
    for m in range(1 << n):
        tree = run_enumerated(algorithm, PhaseOracle(bits_of(m, n)), prune=prune)
        values[m] = tree.mass(lambda r: r == 1)
        max_q = max(max_q, tree.max_queries)
    return values, max_q


@dataclass
class MultilinearPoly:
    n: int
    coeffs: np.ndarray  # a_S at index mask(S)

    def evaluate(self, x) -> float:
        m = mask_of(x)
        # sum of a_S over S contained in x
        total = 0.0
        sub = m
        while True:
            total += self.coeffs[sub]
            if sub == 0:
                break
            sub = (sub - 1) & m
        return float(total)

    def table(self) -> np.ndarray:
        return _kernels.zeta(self.coeffs, self.n)

    def terms(self, tol=0.0):
        """(sorted index tuple, coefficient) for every |a_S| > tol."""
        out = []
        for m in np.flatnonzero(np.abs(self.coeffs) > tol):
            S = tuple(i + 1 for i in range(self.n) if (m >> i) & 1)
            out.append((S, float(self.coeffs[m])))
        return sorted(out, key=lambda st: (len(st[0]), st[0]))

    def to_json(self, tol=COEFF_TOL) -> dict:
        return {"basis": "monomial-subset", "n": self.n, "tolerance": tol,
                "coefficients": [{"S": list(S), "a": a} for S, a in self.terms(tol)]}


def mobius_transform(values, n: int | None = None) -> MultilinearPoly:
    """a_S = sum over T subset of S of (-1)^|S-T| values(T)."""
    values = np.asarray(values, dtype=np.float64)
    if n is None:
        n = int(round(math.log2(len(values))))
    if len(values) != 1 << n:
        raise ValueError(f"table has {len(values)} entries, expected {1 << n}")
    return MultilinearPoly(n, _kernels.mobius(values, n))


def poly_degree(p: MultilinearPoly, tol: float = 0.0) -> int:
    """Largest |S| with |a_S| > tol (0 for the zero polynomial)."""
    big = np.flatnonzero(np.abs(p.coeffs) > tol)
    if len(big) == 0:
        return 0
    return int(max(bin(int(m)).count("1") for m in big))


@dataclass
class UnivariatePoly:
    """Polynomial in the Hamming weight, stored in the Chebyshev basis mapped to [0, n]."""
    n: int
    coeffs: np.ndarray

    def __call__(self, k):
        return C.chebval(self._map(np.asarray(k, dtype=np.float64)), self.coeffs)

    def _map(self, k):
        return 2.0 * k / self.n - 1.0 if self.n else k

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    def values(self) -> np.ndarray:
        return self(np.arange(self.n + 1))

    def to_json(self, tol=COEFF_TOL) -> dict:
        return {"basis": "chebyshev", "domain": [0, self.n], "tolerance": tol,
                "coefficients": [float(c) for c in self.coeffs]}


def interpolate_weights(values) -> UnivariatePoly:
    """Degree-n interpolant through (k, values[k]) for k = 0..n."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values) - 1
    if n == 0:
        return UnivariatePoly(0, values.copy())
    nodes = 2.0 * np.arange(n + 1) / n - 1.0
    V = C.chebvander(nodes, n)
    return UnivariatePoly(n, np.linalg.solve(V, values))


def symmetrize(p, n: int | None = None) -> UnivariatePoly:
    """Average over each Hamming-weight class, then interpolate in the weight."""
    if isinstance(p, MultilinearPoly):
        n, table = p.n, p.table()
    else:
        table = np.asarray(p, dtype=np.float64)
        n = n if n is not None else int(round(math.log2(len(table))))
    w = popcounts(n)
    sums = np.bincount(w, weights=table, minlength=n + 1)
    counts = np.bincount(w, minlength=n + 1)
    return interpolate_weights(sums / counts)


def forward_differences(values) -> list:
    """[Delta^j v(0) for j = 0..n]."""
    diffs = [values[0]]
    row = list(values)
    while len(row) > 1:
        row = [b - a for a, b in zip(row, row[1:])]
        diffs.append(row[0])
    return diffs


def univariate_degree(q, tol: float = 1e-8) -> int:
    """Degree of the interpolant from its trailing forward differences.

    The j-th difference sums 2^j terms, so the threshold grows as tol * 2^j.
    """
    values = q.values() if isinstance(q, UnivariatePoly) else np.asarray(q, dtype=np.float64)
    d = 0
    for j, dj in enumerate(forward_differences(list(values))):
        if abs(dj) > tol * 2 ** j:
            d = j
    return d


def exact_degree(f) -> int:
    """Degree of the symmetric function's univariate representation, in integer arithmetic."""
    spectrum = f.spectrum if hasattr(f, "spectrum") else f
    d = 0
    for j, dj in enumerate(forward_differences([int(v) for v in spectrum])):
        if dj != 0:
            d = j
    return d


def dump(obj, path=None, **extra) -> str:
    payload = dict(obj.to_json(), **extra)
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
