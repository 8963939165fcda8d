"""Finite pointed metric spaces and finite-dimensional l_q spaces.

The metric space carries a distinguished base point; the normed spaces are
the l_q^n family with symbolic exponents, their dual norms, and strong /
weak p-norms of finite vector sequences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .errors import CapacityError, StructuralError
from .estimates import NormEstimate, exact_estimate
from .exponents import Exponent, INF, exponent

METRIC_TOL = 1e-12


@dataclass(frozen=True)
class MetricViolation:
    kind: str          # "diagonal" | "symmetry" | "positivity" | "triangle"
    indices: tuple
    slack: float

    def __str__(self):
        return f"{self.kind} violation at {self.indices} (slack {self.slack:.3e})"


class PointedMetricSpace:
    """A finite metric space with a distinguished base point.

    ``points`` are string identifiers, ``base`` indexes the distinguished
    point, ``dist`` is the full symmetric distance matrix.  Instances are
    immutable after construction.
    """

    def __init__(self, points, base, dist):
        points = tuple(str(p) for p in points)
        dist = np.array(dist, dtype=float)
        n = len(points)
        if len(set(points)) != n:
            raise StructuralError("duplicate point identifiers")
        if dist.shape != (n, n):
            raise StructuralError(f"distance matrix shape {dist.shape} != ({n}, {n})")
        if not 0 <= int(base) < n:
            raise StructuralError(f"base index {base} out of range")
        dist.flags.writeable = False
        self.points = points
        self.base = int(base)
        self.dist = dist
        self.n = n
        self.nonbase = tuple(i for i in range(n) if i != self.base)

    def index(self, point) -> int:
        if isinstance(point, (int, np.integer)):
            if not 0 <= int(point) < self.n:
                raise StructuralError(f"point index {point} out of range")
            return int(point)
        try:
            return self.points.index(str(point))
        except ValueError:
            raise StructuralError(f"unknown point {point!r}") from None

    def d(self, i, j) -> float:
        return float(self.dist[self.index(i), self.index(j)])

    def __eq__(self, other):
        return (isinstance(other, PointedMetricSpace)
                and self.points == other.points
                and self.base == other.base
                and np.array_equal(self.dist, other.dist))

    def __hash__(self):
        return hash((self.points, self.base, self.dist.tobytes()))

    def __repr__(self):
        return f"PointedMetricSpace({len(self.points)} points, base={self.points[self.base]!r})"


def validate_metric(space: PointedMetricSpace, tol: float = METRIC_TOL):
    """All metric-axiom violations, each with the offending tuple and its slack."""
    d = space.dist
    n = space.n
    out = []
    for i in range(n):
        if abs(d[i, i]) > tol:
            out.append(MetricViolation("diagonal", (i,), abs(float(d[i, i]))))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i, j] - d[j, i]) > tol:
                out.append(MetricViolation("symmetry", (i, j), abs(float(d[i, j] - d[j, i]))))
            if d[i, j] <= tol:
                out.append(MetricViolation("positivity", (i, j), float(tol - d[i, j])))
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                slack = d[i, k] - d[i, j] - d[j, k]
                if slack > tol:
                    out.append(MetricViolation("triangle", (i, j, k), float(slack)))
    return out


def make_space(points, base, dist) -> PointedMetricSpace:
    """Construct and reject anything that fails the metric axioms."""
    space = PointedMetricSpace(points, base, dist)
    bad = validate_metric(space)
    if bad:
        raise StructuralError("invalid metric: " + "; ".join(str(v) for v in bad[:5]))
    return space


@dataclass(frozen=True)
class FinNormedSpace:
    """l_p^n with its dual l_{p*}^n."""

    dim: int
    p: Exponent

    def __post_init__(self):
        if self.dim < 1:
            raise StructuralError("dimension must be positive")
        object.__setattr__(self, "p", exponent(self.p))

    def norm(self, v) -> float:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise StructuralError(f"vector shape {v.shape} != ({self.dim},)")
        if self.p.is_inf:
            return float(np.max(np.abs(v))) if self.dim else 0.0
        pv = self.p.value
        if pv == 1.0:
            return float(np.sum(np.abs(v)))
        if pv == 2.0:
            return float(np.linalg.norm(v))
        return float(np.sum(np.abs(v) ** pv) ** (1.0 / pv))

    def dual(self) -> "FinNormedSpace":
        return FinNormedSpace(self.dim, self.p.conjugate())

    def dual_norm(self, v) -> float:
        return self.dual().norm(v)

    def norming_functional(self, v) -> np.ndarray:
        """x* in the dual unit sphere with <x*, v> = ||v||."""
        v = np.asarray(v, dtype=float)
        nv = self.norm(v)
        if nv == 0.0:
            out = np.zeros(self.dim)
            out[0] = 1.0
            return out
        if self.p.is_inf:
            j = int(np.argmax(np.abs(v)))
            out = np.zeros(self.dim)
            out[j] = np.sign(v[j]) if v[j] != 0 else 1.0
            return out
        pv = self.p.value
        if pv == 1.0:
            return np.where(v >= 0, 1.0, -1.0)
        w = np.sign(v) * np.abs(v) ** (pv - 1.0) / nv ** (pv - 1.0)
        return w

    def ball_vertices(self, cap: int = 16) -> np.ndarray:
        """Vertices of the unit ball when it is a polytope (p in {1, inf})."""
        if self.p.finite_value == 1.0:
            eye = np.eye(self.dim)
            return np.vstack([eye, -eye])
        if self.p.is_inf:
            if self.dim > cap:
                raise CapacityError(
                    f"sign enumeration needs 2^{self.dim} vertices, cap is dim <= {cap}")
            signs = np.array(list(itertools.product((-1.0, 1.0), repeat=self.dim)))
            return signs
        raise CapacityError(f"unit ball of l_{self.p} is not a polytope")

    def is_polytope_ball(self) -> bool:
        return self.p.is_inf or self.p.finite_value == 1.0


@dataclass
class VectorSequence:
    space: FinNormedSpace
    vectors: np.ndarray = field(default=None)  # shape (n, dim)

    def __post_init__(self):
        v = np.asarray(self.vectors if self.vectors is not None else
                       np.zeros((0, self.space.dim)), dtype=float)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2 or (v.size and v.shape[1] != self.space.dim):
            raise StructuralError("vector sequence shape mismatch")
        self.vectors = v.reshape(-1, self.space.dim)

    def __len__(self):
        return self.vectors.shape[0]


def strong_norm(seq: VectorSequence, p) -> float:
    """(sum_i ||x_i||^p)^(1/p); max for p = inf; 0 for the empty sequence."""
    p = exponent(p)
    norms = np.array([seq.space.norm(v) for v in seq.vectors])
    return _p_aggregate(norms, p)


def _p_aggregate(values: np.ndarray, p: Exponent) -> float:
    if values.size == 0:
        return 0.0
    values = np.abs(values)
    if p.is_inf:
        return float(np.max(values))
    pv = p.value
    if pv == 1.0:
        return float(np.sum(values))
    return float(np.sum(values ** pv) ** (1.0 / pv))


def weak_norm(seq: VectorSequence, p, cfg: Config = DEFAULT_CONFIG) -> NormEstimate:
    """Certified bracket for sup over the dual unit ball of the l_p pairing norm.

    Exact when the dual ball is a polytope (domain l_1 or l_inf), when
    p = 2 on l_2 (top singular value), or when p = inf (collapses to the
    strong norm).  Otherwise: restart ascent lower bound, Holder upper
    bound flagged loose.
    """
    p = exponent(p)
    E = seq.space
    X = seq.vectors
    if len(seq) == 0:
        return exact_estimate(0.0, {"kind": "empty"}, {"kind": "empty"})

    if p.is_inf:
        # sup_x* max_i |<x*, x_i>| = max_i ||x_i||
        i = int(np.argmax([E.norm(v) for v in X]))
        val = E.norm(X[i])
        f = E.norming_functional(X[i])
        return exact_estimate(val,
                              {"kind": "dual_vector", "vector": f.tolist(), "index": i},
                              {"kind": "collapse_to_strong", "index": i})

    if E.p.finite_value == 1.0 or E.p.is_inf:
        verts = E.dual().ball_vertices(cap=cfg.sign_enum_cap)
        vals = np.array([_p_aggregate(X @ v, p) for v in verts])
        j = int(np.argmax(vals))
        val = float(vals[j])
        cert = {"kind": "dual_vertex", "vector": verts[j].tolist()}
        return exact_estimate(val, cert, {"kind": "polytope_enumeration",
                                          "vertex_count": len(verts)})

    if E.p.finite_value == 2.0 and p.finite_value == 2.0:
        # spectral norm of the stacked matrix
        u, s, vt = np.linalg.svd(X, full_matrices=False)
        val = float(s[0]) if s.size else 0.0
        cert = {"kind": "dual_vector", "vector": vt[0].tolist()}
        return exact_estimate(val, cert, {"kind": "singular_value", "sigma": val})

    # general case: ascent lower, Holder upper (weak <= strong), flagged loose
    lower, best = _weak_ascent(X, E, p, cfg)
    upper = strong_norm(seq, p)
    return NormEstimate(
        lower=lower, upper=upper, exact=abs(upper - lower) <= 1e-9,
        lower_cert={"kind": "dual_vector", "vector": best.tolist()},
        upper_cert={"kind": "holder_strong", "loose": True},
        meta={"loose": True})


def _weak_ascent(X, E, p: Exponent, cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    dual = E.dual()
    dim = E.dim
    pv = p.value
    best_val, best_v = -np.inf, None
    starts = [E.norming_functional(x) for x in X[: 2 * dim]]
    starts += [rng.standard_normal(dim) for _ in range(max(4, cfg.restarts // 4))]
    for v0 in starts:
        v = np.asarray(v0, dtype=float)
        nv = dual.norm(v)
        v = v / nv if nv > 0 else np.eye(dim)[0]
        for _ in range(60):
            t = X @ v
            g = X.T @ (np.sign(t) * np.abs(t) ** (pv - 1.0))
            if np.linalg.norm(g) == 0:
                break
            cand = g / dual.norm(g)
            new = 0.5 * v + 0.5 * cand
            nn = dual.norm(new)
            if nn == 0:
                break
            new /= nn
            if _p_aggregate(X @ new, p) <= _p_aggregate(X @ v, p) + 1e-12:
                break
            v = new
        val = _p_aggregate(X @ v, p)
        if val > best_val:
            best_val, best_v = val, v
    return float(best_val), best_v
