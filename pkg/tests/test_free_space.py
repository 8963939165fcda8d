import numpy as np
import pytest
import scipy.optimize

from lipnorm import (FreeVector, LipschitzFunctional, ae_dual_norm, ae_norm,
                     lip_ball_vertices, make_space, molecule, pair)

from conftest import random_metric


def _space(dist, names=None):
    names = names or [str(i) for i in range(len(dist))]
    return make_space(names, 0, np.asarray(dist, float))


def _scipy_free_norm(space, coeffs):
    """Independent oracle: the single-edge transportation LP solved by
    scipy.  Variables are one flow per ordered pair; the flow divergence at
    each non-base point must equal the coefficient."""
    n = space.n
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    c = np.array([space.dist[i, j] for i, j in pairs])
    A = np.zeros((n - 1, len(pairs)))
    for col, (i, j) in enumerate(pairs):
        if i != space.base:
            A[i - 1 if i > space.base else i, col] += 1
        if j != space.base:
            A[j - 1 if j > space.base else j, col] -= 1
    res = scipy.optimize.linprog(c, A_eq=A, b_eq=coeffs, bounds=(0, None),
                                 method="highs")
    assert res.status == 0
    return res.fun


class TestFreeNorm:
    def test_hand_checked_three_points(self):
        # 0-a-b on a line with d(0,a)=1, d(a,b)=1: the vector with unit
        # mass at a and b costs d(0,a)+d(0,b) = 3, dual witness f=(0,1,2)
        X = _space([[0, 1, 2], [1, 0, 1], [2, 1, 0]], ["0", "a", "b"])
        est = ae_norm(FreeVector(X, np.array([1.0, 1.0])))
        assert est.exact
        assert est.lower == pytest.approx(3.0, abs=1e-12)
        assert est.upper == pytest.approx(3.0, abs=1e-12)

    def test_molecule_norm_is_distance(self, rng):
        _, dist = random_metric(6, rng)
        X = _space(dist)
        for _ in range(10):
            i, j = rng.choice(6, size=2, replace=False)
            if i == j:
                continue
            est = ae_norm(molecule(X, int(i), int(j)))
            assert est.lower == pytest.approx(X.dist[i, j], rel=1e-9)
            assert est.upper == pytest.approx(X.dist[i, j], rel=1e-9)

    @pytest.mark.parametrize("trial", range(10))
    def test_matches_scipy_oracle(self, trial):
        rng = np.random.default_rng(300 + trial)
        n = int(rng.integers(3, 8))
        _, dist = random_metric(n, rng)
        X = _space(dist)
        coeffs = rng.standard_normal(n - 1)
        est = ae_norm(FreeVector(X, coeffs))
        want = _scipy_free_norm(X, coeffs)
        assert est.lower == pytest.approx(want, rel=1e-8)
        assert est.upper == pytest.approx(want, rel=1e-8)

    def test_primal_dual_agree(self, rng):
        for _ in range(10):
            n = int(rng.integers(3, 9))
            _, dist = random_metric(n, rng)
            X = _space(dist)
            v = FreeVector(X, rng.standard_normal(n - 1))
            est = ae_norm(v)
            dual_val, f = ae_dual_norm(v)
            assert dual_val == pytest.approx(est.upper, rel=1e-9)
            assert f.lip_constant() <= 1 + 1e-9
            assert pair(f, v) == pytest.approx(dual_val, rel=1e-9)

    def test_zero_vector(self):
        X = _space([[0, 1], [1, 0]])
        est = ae_norm(FreeVector(X, np.zeros(1)))
        assert est.upper == 0.0


class TestLipBallVertices:
    def test_vertices_are_lip_one(self, rng):
        _, dist = random_metric(5, rng)
        X = _space(dist)
        verts = lip_ball_vertices(X)
        assert verts
        for f in verts:
            assert f.lip_constant() <= 1 + 1e-12

    def test_vertices_norm_every_molecule(self, rng):
        # some vertex attains the distance for every point pair
        _, dist = random_metric(4, rng)
        X = _space(dist)
        verts = lip_ball_vertices(X)
        for i in range(4):
            for j in range(i + 1, 4):
                m = molecule(X, i, j)
                best = max(abs(pair(f, m)) for f in verts)
                assert best == pytest.approx(X.dist[i, j], rel=1e-9)


class TestLipschitzFunctional:
    def test_lip_constant_matches_brute_force(self, rng):
        _, dist = random_metric(5, rng)
        X = _space(dist)
        vals = rng.standard_normal(5)
        vals[0] = 0.0
        f = LipschitzFunctional(X, vals)
        want = max(abs(vals[i] - vals[j]) / dist[i, j]
                   for i in range(5) for j in range(i + 1, 5))
        assert f.lip_constant() == pytest.approx(want, rel=1e-12)
