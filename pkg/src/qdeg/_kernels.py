"""Hot inner loops, compiled with numba when available.

Set ``QDEG_NUMBA=0`` to force the pure-numpy path (useful for debugging and
for the benchmark in ``benchmarks/``).  Both paths are kept importable under
explicit names so they can be compared directly.
"""
import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("QDEG_NUMBA", "1") not in ("0", "false", "no")


# --- numpy reference path ---------------------------------------------------

def grover_iterations_np(amp, start, sign, steps):
    """Apply ``steps`` Grover iterates in place: phase flip then reflection."""
    for _ in range(steps):
        amp *= sign
        overlap = start @ amp
        amp *= -1.0
        amp += (2.0 * overlap) * start
    return amp


def mobius_np(values, n):
    a = np.array(values, dtype=np.float64)
    for bit in range(n):
        view = a.reshape(-1, 2, 1 << bit)
        view[:, 1, :] -= view[:, 0, :]
    return a


def zeta_np(coeffs, n):
    a = np.array(coeffs, dtype=np.float64)
    for bit in range(n):
        view = a.reshape(-1, 2, 1 << bit)
        view[:, 1, :] += view[:, 0, :]
    return a


def pivot_np(tab, row, col):
    tab[row] /= tab[row, col]
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])
    return tab


# --- numba path -------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def grover_iterations_nb(amp, start, sign, steps):
        m = amp.shape[0]
        for _ in range(steps):
            overlap = 0.0
            for i in range(m):
                amp[i] *= sign[i]
                overlap += start[i] * amp[i]
            for i in range(m):
                amp[i] = 2.0 * overlap * start[i] - amp[i]
        return amp

    @njit(cache=True)
    def _butterfly(a, n, sgn):
        size = a.shape[0]
        for bit in range(n):
            step = 1 << bit
            for mask in range(size):
                if mask & step:
                    a[mask] += sgn * a[mask ^ step]
        return a

    def mobius_nb(values, n):
        return _butterfly(np.array(values, dtype=np.float64), n, -1.0)

    def zeta_nb(coeffs, n):
        return _butterfly(np.array(coeffs, dtype=np.float64), n, 1.0)

    @njit(cache=True)
    def pivot_nb(tab, row, col):
        rows, cols = tab.shape
        p = tab[row, col]
        for j in range(cols):
            tab[row, j] /= p
        for i in range(rows):
            if i == row:
                continue
            f = tab[i, col]
            if f != 0.0:
                for j in range(cols):
                    tab[i, j] -= f * tab[row, j]
        return tab


if USE_NUMBA:
    grover_iterations = grover_iterations_nb
    mobius = mobius_nb
    zeta = zeta_nb
    pivot = pivot_nb
else:
    grover_iterations = grover_iterations_np
    mobius = mobius_np
    zeta = zeta_np
    pivot = pivot_np
