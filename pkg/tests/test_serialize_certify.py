import numpy as np
import pytest

from lipnorm import (FinNormedSpace, FreeVector, LipschitzMap, TensorElement,
                     ae_norm, linearize, make_space, pi_norm, proj_norm)
from lipnorm import certify, serialize

from conftest import random_metric


def _space(rng, n=4):
    _, dist = random_metric(n, rng)
    return make_space([str(i) for i in range(n)], 0, dist)


class TestRoundTrips:
    def test_space(self, rng):
        X = _space(rng)
        back = serialize.space_from_dict(serialize.space_to_dict(X))
        assert back.points == X.points
        assert np.allclose(back.dist, X.dist)
        assert back.base == X.base

    def test_free_vector(self, rng):
        X = _space(rng)
        v = FreeVector(X, rng.standard_normal(3))
        back = serialize.free_vector_from_dict(
            X, serialize.free_vector_to_dict(v))
        assert np.allclose(back.coeffs, v.coeffs)

    def test_lip_map(self, rng):
        X = _space(rng)
        E = FinNormedSpace(2, 2)
        values = rng.standard_normal((4, 2))
        values[0] = 0.0
        T = LipschitzMap(X, E, values)
        back = serialize.lip_map_from_dict(serialize.lip_map_to_dict(T))
        assert np.allclose(back.values, T.values)
        assert back.codomain.p.as_json() == E.p.as_json()

    def test_operator(self, rng):
        X = _space(rng)
        E = FinNormedSpace(2, 2)
        values = rng.standard_normal((4, 2))
        values[0] = 0.0
        u = linearize(LipschitzMap(X, E, values))
        back = serialize.operator_from_dict(serialize.operator_to_dict(u))
        assert np.allclose(back.matrix, u.matrix)

    def test_tensor(self, rng):
        X = _space(rng)
        E = FinNormedSpace(2, 2)
        u = TensorElement(X, E, [(1, 2, rng.standard_normal(2))])
        back = serialize.tensor_from_dict(serialize.tensor_to_dict(u))
        assert np.allclose(back.matrix(), u.matrix())


class TestCanonicalDumps:
    def test_deterministic_output(self):
        doc = {"b": 1.23456789012345678, "a": [1, 2.0, {"z": np.float64(3)}]}
        assert serialize.canonical_dumps(doc) == serialize.canonical_dumps(doc)

    def test_sorted_keys_and_trailing_newline(self):
        out = serialize.canonical_dumps({"b": 1, "a": 2})
        assert out.index('"a"') < out.index('"b"')
        assert out.endswith("\n")

    def test_float_rounding(self):
        out = serialize.canonical_dumps({"x": 0.1 + 0.2})
        assert "0.3" in out and "0.30000000000000004" not in out


class TestCertify:
    def test_aenorm_document_verifies(self, cfg, rng):
        X = _space(rng)
        v = FreeVector(X, rng.standard_normal(3))
        est = ae_norm(v, cfg)
        doc = serialize.estimate_document(
            "aenorm", {"space": serialize.space_to_dict(X),
                       "vector": serialize.free_vector_to_dict(v)}, est, cfg)
        res = certify.verify_document(doc)
        assert res.ok, res.messages

    def test_tampered_bracket_rejected(self, cfg, rng):
        X = _space(rng)
        v = FreeVector(X, rng.standard_normal(3))
        est = ae_norm(v, cfg)
        doc = serialize.estimate_document(
            "aenorm", {"space": serialize.space_to_dict(X),
                       "vector": serialize.free_vector_to_dict(v)}, est, cfg)
        doc["estimate"]["lower"] = doc["estimate"]["upper"] * 2 + 1
        res = certify.verify_document(doc)
        assert not res.ok

    def test_pi_document_verifies(self, cfg, rng):
        X = _space(rng)
        E = FinNormedSpace(2, 2)
        values = rng.standard_normal((4, 2))
        values[0] = 0.0
        u = linearize(LipschitzMap(X, E, values))
        est = pi_norm(u, 2, cfg)
        doc = serialize.estimate_document(
            "norm", {"operator": serialize.operator_to_dict(u)}, est, cfg,
            {"kind": "pi", "p": 2})
        res = certify.verify_document(doc)
        assert res.ok, res.messages

    def test_crossnorm_document_verifies(self, cfg, rng):
        X = _space(rng, 3)
        E = FinNormedSpace(2, 2)
        u = TensorElement(X, E, [(1, 2, rng.standard_normal(2))])
        est = proj_norm(u, cfg)
        doc = serialize.estimate_document(
            "crossnorm", {"tensor": serialize.tensor_to_dict(u)}, est, cfg,
            {"kind": "piL"})
        res = certify.verify_document(doc)
        assert res.ok, res.messages

    def test_tampered_certificate_rejected(self, cfg, rng):
        X = _space(rng, 3)
        E = FinNormedSpace(2, 2)
        u = TensorElement(X, E, [(1, 2, rng.standard_normal(2))])
        est = proj_norm(u, cfg)
        doc = serialize.estimate_document(
            "crossnorm", {"tensor": serialize.tensor_to_dict(u)}, est, cfg,
            {"kind": "piL"})
        cert = doc["estimate"]["certificates"]["upper"]
        if "left_columns" in cert:
            cert["left_columns"][0][0] += 1.0
        elif "vectors" in cert:
            cert["vectors"][0][0] += 1.0
        else:
            doc["estimate"]["upper"] *= 0.5
        res = certify.verify_document(doc, recompute=False)
        assert not res.ok
