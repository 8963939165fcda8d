import numpy as np
import pytest

from lipnorm import (FinNormedSpace, VectorSequence, make_space, strong_norm,
                     validate_metric, weak_norm)
from lipnorm.errors import StructuralError
from lipnorm.exponents import INF, exponent

from conftest import random_metric


class TestMetricValidation:
    def test_valid_space(self, rng):
        _, dist = random_metric(5, rng)
        space = make_space([str(i) for i in range(5)], 0, dist)
        assert validate_metric(space) == []
        assert space.n == 5
        assert space.base == 0

    def test_asymmetry_rejected(self):
        dist = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(StructuralError):
            make_space(["a", "b"], 0, dist)

    def test_triangle_violation_detected(self):
        from lipnorm.spaces import PointedMetricSpace
        dist = np.array([[0.0, 1.0, 5.0],
                         [1.0, 0.0, 1.0],
                         [5.0, 1.0, 0.0]])
        space = PointedMetricSpace(["a", "b", "c"], 0, dist)
        violations = validate_metric(space)
        assert violations
        with pytest.raises(StructuralError):
            make_space(["a", "b", "c"], 0, dist)

    def test_zero_distance_off_diagonal_rejected(self):
        dist = np.array([[0.0, 0.0], [0.0, 0.0]])
        with pytest.raises(StructuralError):
            make_space(["a", "b"], 0, dist)

    def test_distance_lookup(self, rng):
        _, dist = random_metric(4, rng)
        space = make_space(list("abcd"), 0, dist)
        assert space.d("b", "c") == pytest.approx(dist[1, 2])
        assert space.index("d") == 3


class TestNormedSpace:
    @pytest.mark.parametrize("p", [1, 2, 3, INF])
    def test_norm_against_numpy(self, p, rng):
        E = FinNormedSpace(4, p)
        v = rng.standard_normal(4)
        want = np.linalg.norm(v, np.inf if exponent(p).is_inf else
                              exponent(p).value)
        assert E.norm(v) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("p", [1, 2, 3, INF])
    def test_norming_functional_attains(self, p, rng):
        E = FinNormedSpace(3, p)
        v = rng.standard_normal(3)
        f = E.norming_functional(v)
        assert E.dual_norm(f) <= 1 + 1e-9
        assert float(f @ v) == pytest.approx(E.norm(v), rel=1e-9)

    def test_dual_roundtrip(self):
        E = FinNormedSpace(3, 2)
        assert E.dual().dual().p.as_json() == E.p.as_json()
        F = FinNormedSpace(3, 1)
        assert F.dual().p.is_inf

    @pytest.mark.parametrize("p", [1, 1.5, 2, 4, INF])
    def test_weak_below_strong(self, p, rng):
        # the weak sequence norm never exceeds the strong one
        E = FinNormedSpace(3, 2)
        seq = VectorSequence(E, rng.standard_normal((5, 3)))
        w = weak_norm(seq, p)
        s = strong_norm(seq, p)
        assert w.upper <= s + 1e-9 * max(1.0, s)
        assert w.lower <= w.upper + 1e-12

    def test_weak_norm_single_vector(self, rng):
        # for one vector, weak and strong both reduce to the vector norm
        E = FinNormedSpace(3, 2)
        v = rng.standard_normal(3)
        seq = VectorSequence(E, v[None, :])
        w = weak_norm(seq, 2)
        assert w.lower == pytest.approx(E.norm(v), rel=1e-9)
        assert w.upper == pytest.approx(E.norm(v), rel=1e-9)

    def test_weak_norm_euclidean_closed_form(self, rng):
        # weak l_2 norm of a sequence in l_2^n is the largest singular
        # value of the stacked matrix
        E = FinNormedSpace(3, 2)
        A = rng.standard_normal((5, 3))
        w = weak_norm(VectorSequence(E, A), 2)
        want = np.linalg.svd(A, compute_uv=False)[0]
        assert w.lower == pytest.approx(want, rel=1e-7)
        assert w.upper == pytest.approx(want, rel=1e-7)


class TestExponents:
    def test_conjugates(self):
        assert exponent(2).conjugate().value == pytest.approx(2)
        assert exponent(1).conjugate().is_inf
        assert exponent(INF).conjugate().value == pytest.approx(1)
        assert exponent(4).conjugate().value == pytest.approx(4 / 3)

    def test_bad_exponent(self):
        with pytest.raises(StructuralError):
            exponent(0.5)
