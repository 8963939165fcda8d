import numpy as np
import pytest

from lipnorm import (FinNormedSpace, LipschitzMap, linearize, make_space,
                     pi_norm, strictly_lip_p_summing_norm,
                     lip_p_summing_norm, strongly_p_summing_norm)
from lipnorm.lipmap import LinearOperator

from conftest import random_metric


def _id_operator(n, p=2):
    E = FinNormedSpace(n, p)
    return LinearOperator(E, E, np.eye(n))


class TestPiNorm:
    def test_identity_euclidean_is_sqrt_dim(self, cfg):
        # pi_2 of the identity on l_2^n is sqrt(n)
        for n in (1, 2, 3, 4):
            est = pi_norm(_id_operator(n), 2, cfg)
            assert est.lower == pytest.approx(np.sqrt(n), rel=1e-7)
            assert est.upper == pytest.approx(np.sqrt(n), rel=1e-7)

    def test_euclidean_pair_is_hilbert_schmidt(self, cfg, rng):
        # between Euclidean spaces pi_2 is the Hilbert-Schmidt norm
        A = rng.standard_normal((3, 4))
        u = LinearOperator(FinNormedSpace(4, 2), FinNormedSpace(3, 2), A)
        est = pi_norm(u, 2, cfg)
        hs = np.linalg.norm(A, "fro")
        assert est.lower == pytest.approx(hs, rel=1e-9)
        assert est.upper == pytest.approx(hs, rel=1e-9)

    def test_rank_one_factorizes(self, cfg, rng):
        # pi_p of f (x) y is the dual norm of f times the norm of y
        E, F = FinNormedSpace(3, 1), FinNormedSpace(2, 2)
        f = rng.standard_normal(3)
        y = rng.standard_normal(2)
        u = LinearOperator(E, F, np.outer(y, f))
        est = pi_norm(u, 2, cfg)
        want = E.dual_norm(f) * F.norm(y)
        assert est.lower == pytest.approx(want, rel=1e-9)
        assert est.upper == pytest.approx(want, rel=1e-9)

    def test_bracket_ordering_and_certificates(self, cfg, rng):
        # on a free-space domain the cutting plane closes to a small gap
        # and the domination certificate has a nonnegative residual
        _, dist = random_metric(4, rng)
        X = make_space([str(i) for i in range(4)], 0, dist)
        E = FinNormedSpace(2, 2)
        values = rng.standard_normal((4, 2))
        values[0] = 0.0
        u = linearize(LipschitzMap(X, E, values))
        est = pi_norm(u, 2, cfg)
        assert est.lower <= est.upper + 1e-12
        assert est.relative_width() < 1e-4
        cert = est.upper_cert
        if cert.get("kind") == "domination2":
            assert cert["residual"] >= -1e-9 * max(1.0, est.upper)
            assert all(w >= -1e-12 for w in cert["weights"])

    def test_dominated_by_operator_times_pi_of_identity(self, cfg, rng):
        # ideal property spot check: ||Au|| <= ||A||_op * pi(u)
        E = FinNormedSpace(3, 2)
        A = rng.standard_normal((3, 3))
        u = _id_operator(3)
        uA = LinearOperator(E, E, A)
        comp = LinearOperator(E, E, A)  # A composed with the identity
        lhs = pi_norm(comp, 2, cfg)
        from lipnorm import op_norm
        rhs = op_norm(uA, cfg).upper * pi_norm(u, 2, cfg).upper
        assert lhs.lower <= rhs + 1e-9 * max(1.0, rhs)


class TestLipschitzSumming:
    def test_strict_equals_linearization(self, cfg, rng):
        # the strict norm is computed through the linearization, so its
        # bracket must sit inside the linearization's pi bracket
        _, dist = random_metric(4, rng)
        X = make_space([str(i) for i in range(4)], 0, dist)
        E = FinNormedSpace(2, 2)
        values = rng.standard_normal((4, 2))
        values[0] = 0.0
        T = LipschitzMap(X, E, values)
        sl = strictly_lip_p_summing_norm(T, 2, cfg)
        hat = pi_norm(linearize(T), 2, cfg)
        assert sl.lower >= hat.lower - 1e-9
        assert sl.upper <= hat.upper + 1e-9

    def test_pairwise_norm_below_strict(self, cfg, rng):
        # molecule-ratio summing is weaker than strict summing
        _, dist = random_metric(4, rng)
        X = make_space([str(i) for i in range(4)], 0, dist)
        E = FinNormedSpace(2, 2)
        values = rng.standard_normal((4, 2))
        values[0] = 0.0
        T = LipschitzMap(X, E, values)
        lp = lip_p_summing_norm(T, 2, cfg)
        sl = strictly_lip_p_summing_norm(T, 2, cfg)
        assert lp.lower <= sl.upper + 1e-9
        assert lp.lower >= T.lip_constant() - 1e-9  # always at least Lip

    def test_single_molecule_map_value(self, cfg):
        # two points mapped isometrically: the linearization is rank one
        # with norm 1, so every summing norm equals the Lipschitz
        # constant 1
        X = make_space(["0", "1"], 0, np.array([[0.0, 2.0], [2.0, 0.0]]))
        E = FinNormedSpace(1, 2)
        T = LipschitzMap(X, E, np.array([[0.0], [2.0]]))
        for fn in (strictly_lip_p_summing_norm, lip_p_summing_norm):
            est = fn(T, 2, cfg)
            assert est.lower == pytest.approx(1.0, rel=1e-9)
            assert est.upper == pytest.approx(1.0, rel=1e-9)


class TestStronglySumming:
    def test_rank_one(self, cfg, rng):
        # strongly p-summing norm of a rank-one map is also multiplicative
        E, F = FinNormedSpace(3, 2), FinNormedSpace(2, 2)
        f = rng.standard_normal(3)
        y = rng.standard_normal(2)
        u = LinearOperator(E, F, np.outer(y, f))
        est = strongly_p_summing_norm(u, 2, cfg)
        want = E.dual_norm(f) * F.norm(y)
        assert est.lower == pytest.approx(want, rel=1e-7)
        assert est.upper == pytest.approx(want, rel=1e-7)

    def test_below_pi_times_constant(self, cfg, rng):
        # sanity: strongly 2-summing <= pi_2 on Euclidean instances
        A = rng.standard_normal((2, 3))
        u = LinearOperator(FinNormedSpace(3, 2), FinNormedSpace(2, 2), A)
        d2 = strongly_p_summing_norm(u, 2, cfg)
        p2 = pi_norm(u, 2, cfg)
        assert d2.lower <= p2.upper + 1e-9
