"""The free Banach space over a finite pointed metric space.

Elements are coefficient vectors over the non-base points.  The norm (the
infimum of sum |lambda_i| d(x_i, y_i) over representations by two-point
molecules) is computed as a transportation LP; the triangle inequality
guarantees single-edge flows suffice, so the LP is polynomial-size.  The
optimal flow is the upper certificate, the optimal dual -- a Lipschitz-1
function vanishing at the base -- is the lower certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .errors import (CapacityError, DegenerateMoleculeError, InternalError,
                     StructuralError)
from .estimates import NormEstimate, exact_estimate
from .simplex import solve_standard_lp
from .spaces import PointedMetricSpace

COEFF_EPS = 1e-14
DUALITY_TOL = 1e-9


class FreeVector:
    """An element of the free space: coefficients of delta_x for x != base."""

    def __init__(self, space: PointedMetricSpace, coeffs):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape != (space.n - 1,):
            raise StructuralError(
                f"coefficient vector must have length {space.n - 1}, got {coeffs.shape}")
        coeffs[np.abs(coeffs) < COEFF_EPS] = 0.0
        coeffs.flags.writeable = False
        self.space = space
        self.coeffs = coeffs

    @classmethod
    def from_dict(cls, space: PointedMetricSpace, mapping: dict) -> "FreeVector":
        coeffs = np.zeros(space.n - 1)
        pos = {p: k for k, p in enumerate(space.nonbase)}
        for point, value in mapping.items():
            i = space.index(point)
            if i == space.base:
                raise StructuralError("base point carries no explicit coefficient")
            coeffs[pos[i]] = float(value)
        return cls(space, coeffs)

    def extended(self) -> np.ndarray:
        """Coefficients over all points; the base entry balances the sum to zero."""
        full = np.zeros(self.space.n)
        for k, i in enumerate(self.space.nonbase):
            full[i] = self.coeffs[k]
        full[self.space.base] = -self.coeffs.sum()
        return full

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __add__(self, other: "FreeVector") -> "FreeVector":
        self._check(other)
        return FreeVector(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        self._check(other)
        return FreeVector(self.space, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: float) -> "FreeVector":
        return FreeVector(self.space, float(scalar) * self.coeffs)

    __mul__ = __rmul__

    def __neg__(self):
        return FreeVector(self.space, -self.coeffs)

    def _check(self, other):
        if self.space != other.space:
            raise StructuralError("free vectors live over different spaces")

    def __repr__(self):
        terms = {self.space.points[i]: float(self.coeffs[k])
                 for k, i in enumerate(self.space.nonbase) if self.coeffs[k] != 0}
        return f"FreeVector({terms})"


@dataclass
class LipschitzFunctional:
    """A real function on the points, vanishing at the base."""

    space: PointedMetricSpace
    values: np.ndarray  # full length n, values[base] == 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.space.n,):
            raise StructuralError("functional values must cover every point")
        if abs(v[self.space.base]) > 1e-12:
            raise StructuralError("functional must vanish at the base point")
        self.values = v

    def lip_constant(self) -> float:
        d = self.space.dist
        v = self.values
        best = 0.0
        for i in range(self.space.n):
            for j in range(i + 1, self.space.n):
                best = max(best, abs(v[i] - v[j]) / d[i, j])
        return best

    def nonbase_values(self) -> np.ndarray:
        return self.values[list(self.space.nonbase)]


def molecule(space: PointedMetricSpace, x, y) -> FreeVector:
    """delta_x - delta_y as a coefficient vector."""
    i, j = space.index(x), space.index(y)
    if i == j:
        raise DegenerateMoleculeError(f"molecule endpoints coincide: {x!r}")
    coeffs = np.zeros(space.n - 1)
    pos = {p: k for k, p in enumerate(space.nonbase)}
    if i != space.base:
        coeffs[pos[i]] += 1.0
    if j != space.base:
        coeffs[pos[j]] -= 1.0
    return FreeVector(space, coeffs)


def pair(f: LipschitzFunctional, m: FreeVector) -> float:
    """The dual pairing sum_x coeff[x] f(x)."""
    if f.space != m.space:
        raise StructuralError("functional and vector live over different spaces")
    return float(m.coeffs @ f.nonbase_values())


def _transport_lp(m: FreeVector):
    """Primal/dual solve of the single-edge transportation LP for the norm."""
    space = m.space
    n = space.n
    d = space.dist
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    cost = np.array([d[i, j] for i, j in pairs])
    rows = [i for i in range(n) if i != space.base]  # base row is redundant
    A = np.zeros((len(rows), len(pairs)))
    full = m.extended()
    b = np.array([full[i] for i in rows])
    for col, (i, j) in enumerate(pairs):
        if i in rows:
            A[rows.index(i), col] = 1.0
        if j in rows:
            A[rows.index(j), col] = -1.0
    res = solve_standard_lp(cost, A, b)
    if res.status != "optimal":
        raise InternalError(f"balanced transportation LP reported {res.status}")
    values = np.zeros(n)
    for k, i in enumerate(rows):
        values[i] = res.y[k]
    return res, pairs, values


def ae_norm(m: FreeVector, cfg: Config = DEFAULT_CONFIG) -> NormEstimate:
    """The free-space norm with flow (upper) and Lipschitz-dual (lower) certificates."""
    if m.is_zero():
        return exact_estimate(0.0, {"kind": "zero"}, {"kind": "zero"})
    res, pairs, values = _transport_lp(m)
    space = m.space

    f = LipschitzFunctional(space, values)
    lipc = f.lip_constant()
    if lipc > 1.0:  # guard against round-off; certified side must be feasible
        f = LipschitzFunctional(space, values / lipc)
    lower = pair(f, m)

    flow = {f"{space.points[i]}->{space.points[j]}": float(v)
            for (i, j), v in zip(pairs, res.x) if v > 1e-13}
    upper = float(sum(space.d(i, j) * v
                      for (i, j), v in zip(pairs, res.x) if v > 0))
    exact = abs(upper - lower) <= DUALITY_TOL * max(1.0, upper)
    return NormEstimate(
        lower=min(lower, upper), upper=upper, exact=exact,
        lower_cert={"kind": "lipschitz_functional",
                    "values": {space.points[i]: float(f.values[i]) for i in range(space.n)}},
        upper_cert={"kind": "flow", "flow": flow})


def ae_dual_norm(m: FreeVector, cfg: Config = DEFAULT_CONFIG):
    """Maximize the pairing over the Lipschitz-1 ball; an LP independent of ae_norm.

    Returns (value, maximizing functional).
    """
    space = m.space
    n = space.n
    if m.is_zero():
        return 0.0, LipschitzFunctional(space, np.zeros(n))
    free = list(space.nonbase)
    k = len(free)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    # variables: f+ (k), f- (k), slacks (len(pairs)); constraints G f <= d
    A = np.zeros((len(pairs), 2 * k + len(pairs)))
    b = np.zeros(len(pairs))
    for r, (i, j) in enumerate(pairs):
        if i != space.base:
            c = free.index(i)
            A[r, c] += 1.0
            A[r, k + c] -= 1.0
        if j != space.base:
            c = free.index(j)
            A[r, c] -= 1.0
            A[r, k + c] += 1.0
        A[r, 2 * k + r] = 1.0
        b[r] = space.dist[i, j]
    obj = np.zeros(2 * k + len(pairs))
    obj[:k] = -m.coeffs
    obj[k:2 * k] = m.coeffs
    res = solve_standard_lp(obj, A, b)
    if res.status != "optimal":
        raise InternalError(f"Lipschitz-ball LP reported {res.status}")
    values = np.zeros(n)
    for c, i in enumerate(free):
        values[i] = res.x[c] - res.x[k + c]
    f = LipschitzFunctional(space, values)
    lipc = f.lip_constant()
    if lipc > 1.0:
        f = LipschitzFunctional(space, values / lipc)
    return pair(f, m), f


def lip_ball_vertices(space: PointedMetricSpace, cfg: Config = DEFAULT_CONFIG):
    """All vertices of {f : Lip(f) <= 1, f(base) = 0} as functionals.

    Half-space vertex enumeration via qhull; capped at |X| <= cfg.lip_vertex_cap.
    Each returned vertex is certified feasible with a full set of active,
    linearly independent constraints.
    """
    n = space.n
    if n > cfg.lip_vertex_cap:
        raise CapacityError(
            f"Lipschitz-ball vertex enumeration capped at |X| <= {cfg.lip_vertex_cap}, got {n}")
    dim = n - 1
    free = list(space.nonbase)
    rows = []
    offs = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a = np.zeros(dim)
            if i != space.base:
                a[free.index(i)] += 1.0
            if j != space.base:
                a[free.index(j)] -= 1.0
            rows.append(a)
            offs.append(space.dist[i, j])
    A = np.array(rows)
    b = np.array(offs)

    if dim == 1:
        lo = max(-b[r] for r in range(len(rows)) if A[r, 0] < 0)
        hi = min(b[r] for r in range(len(rows)) if A[r, 0] > 0)
        verts = np.array([[lo], [hi]])
    else:
        from scipy.spatial import HalfspaceIntersection
        hs = np.hstack([A, -b.reshape(-1, 1)])
        inter = HalfspaceIntersection(hs, np.zeros(dim))
        verts = np.unique(np.round(inter.intersections, 9), axis=0)

    out = []
    for v in verts:
        resid = A @ v - b
        if np.max(resid) > 1e-7:
            continue
        active = A[np.abs(resid) <= 1e-7]
        if np.linalg.matrix_rank(active, tol=1e-9) < dim:
            continue
        values = np.zeros(n)
        for c, i in enumerate(free):
            values[i] = v[c]
        f = LipschitzFunctional(space, values)
        lipc = f.lip_constant()
        if lipc > 1.0:  # rounding during dedupe can step just outside the ball
            f = LipschitzFunctional(space, values / lipc)
        out.append(f)
    if not out:
        raise InternalError("vertex enumeration produced no certified vertices")
    return out
