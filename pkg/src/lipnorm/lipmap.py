"""Lipschitz maps into l_q^n, their linearizations, transposes and the
quotient map for subsets of a normed space.

Maps are tabulated (one codomain vector per point) rather than closures:
that keeps pair enumeration exact and maps serializable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .free_space import FreeVector, LipschitzFunctional, molecule
from .spaces import FinNormedSpace, PointedMetricSpace


@dataclass(frozen=True)
class FreeSpaceOf:
    """Domain descriptor: the free space over X, coordinates over non-base points."""

    space: PointedMetricSpace

    @property
    def dim(self) -> int:
        return self.space.n - 1


@dataclass(frozen=True)
class LipDualOf:
    """Codomain descriptor: Lipschitz functionals on X vanishing at base,
    under the Lipschitz norm; coordinates are the non-base values."""

    space: PointedMetricSpace

    @property
    def dim(self) -> int:
        return self.space.n - 1

    def norm(self, v) -> float:
        values = np.zeros(self.space.n)
        for c, i in enumerate(self.space.nonbase):
            values[i] = v[c]
        return LipschitzFunctional(self.space, values).lip_constant()


class LipschitzMap:
    """A map X -> E tabulated per point, with T(base) = 0 enforced."""

    def __init__(self, domain: PointedMetricSpace, codomain: FinNormedSpace, values):
        values = np.array(values, dtype=float)
        if values.shape != (domain.n, codomain.dim):
            raise StructuralError(
                f"value table shape {values.shape} != ({domain.n}, {codomain.dim})")
        if np.any(np.abs(values[domain.base]) > 1e-12):
            raise StructuralError("map must vanish at the base point (no auto-translation)")
        values.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.values = values

    def __call__(self, point) -> np.ndarray:
        return self.values[self.domain.index(point)]

    def lip_constant(self) -> float:
        d = self.domain.dist
        best = 0.0
        for i in range(self.domain.n):
            for j in range(i + 1, self.domain.n):
                best = max(best, self.codomain.norm(self.values[i] - self.values[j]) / d[i, j])
        return best

    def is_zero(self) -> bool:
        return not np.any(self.values)


@dataclass
class LinearOperator:
    """A matrix acting on free-space coefficients or on l_q^n coordinates.

    When the domain is a free space, column k is the image of the canonical
    embedding of the k-th non-base point.
    """

    domain: FreeSpaceOf | FinNormedSpace
    codomain: FinNormedSpace | LipDualOf
    matrix: np.ndarray  # shape (codomain.dim, domain dim)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        ddim = self.domain.dim if isinstance(self.domain, FreeSpaceOf) else self.domain.dim
        if self.matrix.shape != (self.codomain.dim, ddim):
            raise StructuralError(
                f"operator matrix shape {self.matrix.shape} != ({self.codomain.dim}, {ddim})")

    def apply(self, x) -> np.ndarray:
        if isinstance(x, FreeVector):
            if not isinstance(self.domain, FreeSpaceOf) or x.space != self.domain.space:
                raise StructuralError("operand space does not match operator domain")
            return self.matrix @ x.coeffs
        return self.matrix @ np.asarray(x, dtype=float)

    def codomain_norm(self, y) -> float:
        return self.codomain.norm(y)


def linearize(T: LipschitzMap) -> LinearOperator:
    """The unique linear extension through the free space: columns are the
    images of the non-base points, so molecules map to value differences."""
    cols = T.values[list(T.domain.nonbase)].T
    return LinearOperator(FreeSpaceOf(T.domain), T.codomain, cols)


def delta_embedding_matrix(space: PointedMetricSpace) -> np.ndarray:
    """Coordinates of the canonical point embeddings (identity on non-base)."""
    return np.eye(space.n - 1)


def transpose(T: LipschitzMap):
    """e* -> the functional x -> <e*, T(x)>."""
    def apply(e_star) -> LipschitzFunctional:
        e_star = np.asarray(e_star, dtype=float)
        if e_star.shape != (T.codomain.dim,):
            raise StructuralError("dual vector dimension mismatch")
        return LipschitzFunctional(T.domain, T.values @ e_star)
    return apply


def beta_map(space: PointedMetricSpace, ambient: FinNormedSpace, coords,
             tol: float = 1e-9) -> LinearOperator:
    """The quotient map onto a finite subset of a normed space.

    ``coords`` are the ambient coordinates of the points (base at the origin);
    the metric must be the one induced by the ambient norm.
    """
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (space.n, ambient.dim):
        raise StructuralError("coordinate table shape mismatch")
    if ambient.norm(coords[space.base]) > tol:
        raise StructuralError("base point must sit at the ambient origin")
    for i in range(space.n):
        for j in range(i + 1, space.n):
            induced = ambient.norm(coords[i] - coords[j])
            if abs(induced - space.dist[i, j]) > tol:
                raise StructuralError(
                    f"metric inconsistent with ambient norm at pair ({i},{j}): "
                    f"{space.dist[i, j]} vs {induced}")
    return LinearOperator(FreeSpaceOf(space), ambient,
                          coords[list(space.nonbase)].T)


def subset_space(ambient: FinNormedSpace, coords, labels=None) -> PointedMetricSpace:
    """The pointed metric space induced on a finite subset (first point = base 0)."""
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    labels = labels or [str(i) for i in range(n)]
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            dist[i, j] = ambient.norm(coords[i] - coords[j])
    return PointedMetricSpace(labels, 0, dist)


def compose_linear(u: LinearOperator, T: LipschitzMap) -> LipschitzMap:
    """u after T, as a tabulated Lipschitz map."""
    if not isinstance(u.domain, FinNormedSpace) or u.domain.dim != T.codomain.dim:
        raise StructuralError("composition dimension mismatch")
    if not isinstance(u.codomain, FinNormedSpace):
        raise StructuralError("composition requires a normed codomain")
    return LipschitzMap(T.domain, u.codomain, T.values @ u.matrix.T)


def compose_lip(T: LipschitzMap, g_points, domain: PointedMetricSpace) -> LipschitzMap:
    """T after g, where g sends each point of ``domain`` to a point of T's domain.

    g's values must be points of X exactly (no nearest-point snapping) and
    g must send base to base.
    """
    idx = [T.domain.index(p) for p in g_points]
    if len(idx) != domain.n:
        raise StructuralError("point map must cover the whole domain")
    if idx[domain.base] != T.domain.base:
        raise StructuralError("point map must send base to base")
    return LipschitzMap(domain, T.codomain, T.values[idx])
