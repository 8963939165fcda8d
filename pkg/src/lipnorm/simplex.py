"""Dense two-phase simplex with Bland's rule.

Solves  min c.x  s.t.  A x = b, x >= 0  and returns both the optimal point
and the dual vector of the equality constraints.  Bland's rule makes cycling
impossible; the solver is meant for the small dense instances this package
produces (a few hundred variables), not for general-purpose LP work.

Every result is re-verified by the callers by substituting the certificates
back into the constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalError

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-8


@dataclass
class LPResult:
    status: str            # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    y: np.ndarray | None   # duals of the equality rows
    objective: float | None


def _simplex_phase(T, basis, ncols, allowed, max_iter):
    """Run simplex pivots on tableau T in place.  Returns "optimal" or "unbounded".

    T has shape (m+1, ncols+1); last row is the (negated-objective) cost row,
    last column the rhs.  ``allowed[j]`` marks columns permitted to enter.
    """
    m = T.shape[0] - 1
    stall = 0
    last_obj = -np.inf
    for _ in range(max_iter):
        # Dantzig rule (most negative reduced cost) for speed; fall back to
        # Bland's lowest-index rule after a degenerate stall, which restores
        # the cycling-free guarantee
        enter = -1
        if stall < 50:
            cand = np.where(allowed[:ncols] & (T[m, :ncols] < -PIVOT_TOL))[0]
            if cand.size:
                enter = int(cand[np.argmin(T[m, cand])])
        else:
            for j in range(ncols):
                if allowed[j] and T[m, j] < -PIVOT_TOL:
                    enter = j
                    break
        if enter < 0:
            return "optimal"
        obj = T[m, -1]
        # the stored value rises monotonically toward the optimum; no rise
        # means a degenerate pivot
        stall = stall + 1 if obj <= last_obj + 1e-13 else 0
        last_obj = obj
        # ratio test, ties broken by smallest basis variable index (Bland)
        leave = -1
        best = np.inf
        for i in range(m):
            a = T[i, enter]
            if a > PIVOT_TOL:
                ratio = T[i, -1] / a
                if ratio < best - PIVOT_TOL or (
                        abs(ratio - best) <= PIVOT_TOL
                        and (leave < 0 or basis[i] < basis[leave])):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)
    raise InternalError("simplex iteration cap exceeded")


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    piv = T[row]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * piv
    basis[row] = col


def solve_standard_lp(c, A, b, max_iter=None) -> LPResult:
    """min c.x  s.t.  A x = b, x >= 0."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise InternalError("LP shape mismatch")
    A = A.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    if max_iter is None:
        max_iter = 200 * (m + n + 10)

    ncols = n + m  # original + artificial
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :n] = A
    T[:m, n:ncols] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, ncols))

    # phase 1: minimize sum of artificials
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    allowed = np.ones(ncols, dtype=bool)
    status = _simplex_phase(T, basis, ncols, allowed, max_iter)
    if status != "optimal" or -T[m, -1] > FEAS_TOL:
        return LPResult("infeasible", None, None, None)

    # drive artificials out of the basis where a real pivot exists
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(T[i, j]) > 1e-7:
                    _pivot(T, basis, i, j)
                    break

    # phase 2
    allowed[n:] = False
    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        bi = basis[i]
        if bi < n and c[bi] != 0.0:
            T[m] -= c[bi] * T[i]
    status = _simplex_phase(T, basis, ncols, allowed, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None, None)

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    # duals from the basis columns of the (sign-corrected) original system
    Afull = np.hstack([A, np.eye(m)])
    cfull = np.concatenate([c, np.zeros(m)])
    B = Afull[:, basis]
    try:
        y = np.linalg.solve(B.T, cfull[basis])
    except np.linalg.LinAlgError:
        y = np.linalg.lstsq(B.T, cfull[basis], rcond=None)[0]
    y = y.copy()
    y[neg] *= -1.0
    return LPResult("optimal", x, y, float(c @ x))


def solve_min_geq_lp(c, G, h, max_iter=None) -> LPResult:
    """min c.w  s.t.  G w >= h, w >= 0  (surplus-variable reduction)."""
    G = np.asarray(G, dtype=float)
    h = np.asarray(h, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = G.shape
    A = np.hstack([G, -np.eye(m)])
    cc = np.concatenate([c, np.zeros(m)])
    res = solve_standard_lp(cc, A, h, max_iter=max_iter)
    if res.status != "optimal":
        return res
    return LPResult("optimal", res.x[:n], res.y, res.objective)
