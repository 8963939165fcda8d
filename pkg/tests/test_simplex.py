import numpy as np
import pytest
import scipy.optimize

from lipnorm.simplex import solve_min_geq_lp, solve_standard_lp


def _random_feasible_standard(rng, m, n):
    """Equality-form LP with a known feasible point (so it is never
    vacuously infeasible)."""
    A = rng.standard_normal((m, n))
    x0 = rng.uniform(0.5, 1.5, size=n)
    b = A @ x0
    c = rng.standard_normal(n)
    return c, A, b


class TestStandardForm:
    @pytest.mark.parametrize("trial", range(20))
    def test_matches_scipy(self, trial):
        rng = np.random.default_rng(1000 + trial)
        m, n = int(rng.integers(2, 5)), int(rng.integers(4, 8))
        c, A, b = _random_feasible_standard(rng, m, n)
        ours = solve_standard_lp(c, A, b)
        ref = scipy.optimize.linprog(c, A_eq=A, b_eq=b, bounds=(0, None),
                                     method="highs")
        if ref.status == 3:  # unbounded
            assert ours.status == "unbounded"
            return
        assert ref.status == 0 and ours.status == "optimal"
        assert ours.objective == pytest.approx(ref.fun, abs=1e-8)
        # primal feasibility of the returned point
        assert np.all(ours.x >= -1e-9)
        assert np.max(np.abs(A @ ours.x - b)) < 1e-8

    def test_dual_certificate(self):
        rng = np.random.default_rng(7)
        c, A, b = _random_feasible_standard(rng, 3, 6)
        res = solve_standard_lp(c, A, b)
        if res.status != "optimal":
            pytest.skip("unbounded draw")
        # weak duality with the returned multipliers: A^T y <= c and
        # b.y equals the optimum
        assert np.max(A.T @ res.y - c) < 1e-8
        assert float(b @ res.y) == pytest.approx(res.objective, abs=1e-8)


class TestGeqForm:
    @pytest.mark.parametrize("trial", range(20))
    def test_matches_scipy(self, trial):
        rng = np.random.default_rng(2000 + trial)
        m, n = int(rng.integers(2, 6)), int(rng.integers(2, 5))
        G = np.abs(rng.standard_normal((m, n))) + 0.1
        h = np.abs(rng.standard_normal(m))
        c = np.abs(rng.standard_normal(n)) + 0.1
        ours = solve_min_geq_lp(c, G, h)
        ref = scipy.optimize.linprog(c, A_ub=-G, b_ub=-h, bounds=(0, None),
                                     method="highs")
        assert ref.status == 0 and ours.status == "optimal"
        assert ours.objective == pytest.approx(ref.fun, abs=1e-8)
        assert np.all(G @ ours.x >= h - 1e-8)

    def test_infeasible_detected(self):
        # x >= 0 with -x >= 1 has no solution
        res = solve_min_geq_lp(np.ones(1), -np.eye(1), np.ones(1))
        assert res.status == "infeasible"
