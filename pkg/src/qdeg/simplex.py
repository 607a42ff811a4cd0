"""Dense two-phase tableau simplex for  max c.x  s.t.  A x = b, x >= 0.

Bland's rule picks entering and leaving variables, so the method cannot
cycle on the heavily degenerate minimax problems it is used for.  Bland's
rule ignores pivot size, so the tableau is periodically rebuilt from the
original data and the current basis to keep rounding drift in check.
"""
import numpy as np

from . import _kernels


class LPError(ArithmeticError):
    pass


class InfeasibleError(LPError):
    pass


class UnboundedError(LPError):
    pass


class IterationLimitError(LPError):
    pass


class _Tableau:
    def __init__(self, A, b, c, basis, tol, refresh):
        self.A, self.b, self.c = A, b, c
        self.full = np.hstack([A, b[:, None]])
        self.m = A.shape[0]
        self.basis = list(basis)
        self.tol = tol
        self.refresh = refresh
        self.pivots = 0
        self.rebuild()

    def rebuild(self):
        B = self.A[:, self.basis]
        try:
            body = np.linalg.solve(B, self.full)
        except np.linalg.LinAlgError as exc:
            raise LPError("basis matrix became singular") from exc
        cb = self.c[self.basis]
        tab = np.empty((self.m + 1, self.full.shape[1]))
        tab[:self.m] = body
        tab[self.m, :-1] = cb @ body[:, :-1] - self.c
        tab[self.m, -1] = cb @ body[:, -1]
        self.tab = tab

    def pivot(self, row, col):
        _kernels.pivot(self.tab, row, col)
        self.basis[row] = col
        self.pivots += 1
        if self.pivots % self.refresh == 0:
            self.rebuild()

    def optimize(self, allowed, max_iter):
        tol, m = self.tol, self.m
        clean = True
        while True:
            reduced = self.tab[m, :-1]
            entering = [j for j in np.flatnonzero(reduced < -tol) if allowed[j]]
            if not entering:
                if clean:
                    return
                self.rebuild()
                clean = True
                continue
            col = int(entering[0])
            column = self.tab[:m, col]
            rows = np.flatnonzero(column > tol)
            if len(rows) == 0:
                raise UnboundedError(f"objective unbounded along column {col}")
            ratios = np.maximum(self.tab[rows, -1], 0.0) / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, best)]
            row = int(min(ties, key=lambda r: self.basis[r]))
            self.pivot(row, col)
            clean = self.pivots % self.refresh == 0
            if self.pivots >= max_iter:
                raise IterationLimitError(f"no optimum after {max_iter} pivots")

    def solution(self, nv):
        x = np.zeros(self.A.shape[1])
        x[self.basis] = np.maximum(self.tab[:self.m, -1], 0.0)
        return x[:nv]

    def duals(self):
        B = self.A[:, self.basis]
        return np.linalg.solve(B.T, self.c[self.basis])


def solve_equality(c, A, b, basis=None, tol=1e-10, max_iter=100_000, refresh=25):
    """Maximize c.x over {A x = b, x >= 0}.

    ``basis`` may name a known feasible starting basis (one column per row),
    which skips phase 1.  Returns ``(x, value, duals, pivots)``; at the
    optimum A^T duals >= c.
    """
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    m, nv = A.shape
    signs = np.where(neg, -1.0, 1.0)

    if basis is not None:
        t = _Tableau(A, b, c, basis, tol, refresh)
        if np.any(t.tab[:m, -1] < -1e-9):
            raise InfeasibleError("starting basis is not feasible")
        t.optimize(np.ones(nv, bool), max_iter)
        return t.solution(nv), float(c @ t.solution(nv)), t.duals() * signs, t.pivots

    # phase 1: minimize the sum of artificials
    A1 = np.hstack([A, np.eye(m)])
    c1 = np.concatenate([np.zeros(nv), -np.ones(m)])
    t = _Tableau(A1, b, c1, range(nv, nv + m), tol, refresh)
    t.optimize(np.ones(nv + m, bool), max_iter)
    if t.tab[m, -1] < -1e-8 * max(1.0, np.abs(b).max()):
        raise InfeasibleError(f"phase 1 ended with infeasibility {-t.tab[m, -1]:.3g}")
    # drive zero-level artificials out of the basis; drop rows where impossible
    keep = list(range(m))
    for r in range(m):
        if t.basis[r] >= nv:
            row = t.tab[r, :nv]
            cand = np.flatnonzero(np.abs(row) > 1e-9)
            if len(cand):
                t.pivot(r, int(cand[0]))
            else:
                keep.remove(r)
    basis = [t.basis[r] for r in keep]

    # phase 2 on the original columns
    t2 = _Tableau(A[keep], b[keep], c, basis, tol, refresh)
    t2.optimize(np.ones(nv, bool), max_iter)
    x = t2.solution(nv)
    y = np.zeros(m)
    y[keep] = t2.duals()
    return x, float(c @ x), y * signs, t.pivots + t2.pivots


def solve(c, A, b, **kw):
    """Maximize c.x over {A x <= b, x >= 0}; returns ``(x, value, pivots)``."""
    A = np.asarray(A, dtype=np.float64)
    m, nv = A.shape
    x, val, _, piv = solve_equality(np.concatenate([c, np.zeros(m)]), np.hstack([A, np.eye(m)]), b, **kw)
    return x[:nv], val, piv
