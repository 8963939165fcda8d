import numpy as np
import pytest

from lipnorm import harness


class TestGenerators:
    def test_embedded_space_is_metric(self):
        from lipnorm import validate_metric
        rng = np.random.default_rng(1)
        for _ in range(5):
            X = harness.random_space_embedded(6, rng)
            assert validate_metric(X) == []

    def test_repaired_space_is_metric(self):
        from lipnorm import validate_metric
        rng = np.random.default_rng(2)
        for _ in range(5):
            X = harness.random_space_repaired(6, rng)
            assert validate_metric(X) == []

    def test_line_space(self):
        X = harness.line_space(4)
        assert X.n == 5
        assert X.d("0", "4") == pytest.approx(4.0)

    def test_line_embedding_is_isometry(self):
        T = harness.line_embedding(4)
        X = T.domain
        for i in range(5):
            for j in range(5):
                d = T.codomain.norm(T.values[i] - T.values[j])
                assert d == pytest.approx(X.dist[i, j], abs=1e-12)


class TestSuiteRunner:
    def test_small_runs_pass(self):
        report = harness.run_suite(["duality", "isometry"], trials=10, seed=5)
        assert report["verdict"] == "pass"
        assert set(report["suites"]) == {"duality", "isometry"}

    def test_unknown_suite_raises(self):
        from lipnorm.errors import LipnormError
        with pytest.raises(LipnormError):
            harness.run_suite(["nope"], trials=1, seed=5)

    def test_report_is_deterministic(self):
        a = harness.run_suite(["duality"], trials=5, seed=9)
        b = harness.run_suite(["duality"], trials=5, seed=9)
        from lipnorm.serialize import canonical_dumps
        assert canonical_dumps(a) == canonical_dumps(b)

    def test_render_text_mentions_verdict(self):
        report = harness.run_suite(["duality"], trials=3, seed=4)
        text = harness.render_text(report)
        assert "duality" in text
        assert "PASS" in text or "FAIL" in text
