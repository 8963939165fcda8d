import json

import numpy as np
import pytest
from click.testing import CliRunner

from lipnorm import serialize
from lipnorm.cli import main

from conftest import random_metric


@pytest.fixture()
def runner():
    return CliRunner()


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _space_doc(rng, n=4):
    _, dist = random_metric(n, rng)
    return {"points": [str(i) for i in range(n)], "base": "0",
            "dist": dist.tolist()}


def _map_doc(rng, n=4, dim=2):
    values = rng.standard_normal((n, dim))
    values[0] = 0.0
    return {"space": _space_doc(rng, n),
            "codomain": {"dim": dim, "p": 2},
            "values": values.tolist()}


class TestValidate:
    def test_valid_space(self, runner, tmp_path, rng):
        path = _write(tmp_path, "space.json", _space_doc(rng))
        res = runner.invoke(main, ["validate", path])
        assert res.exit_code == 0
        assert json.loads(res.output)["valid"] is True

    def test_broken_metric_exit_2(self, runner, tmp_path):
        doc = {"points": ["a", "b", "c"], "base": "a",
               "dist": [[0, 1, 9], [1, 0, 1], [9, 1, 0]]}
        path = _write(tmp_path, "space.json", doc)
        res = runner.invoke(main, ["validate", path])
        assert res.exit_code == 2
        assert json.loads(res.output)["valid"] is False

    def test_malformed_json_exit_2(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        res = runner.invoke(main, ["validate", str(path)])
        assert res.exit_code == 2


class TestNormCommands:
    def test_aenorm_outputs_document(self, runner, tmp_path, rng):
        sp = _write(tmp_path, "space.json", _space_doc(rng))
        vec = _write(tmp_path, "vec.json",
                     {"coeffs": {"1": 1.0, "2": -0.5, "3": 0.25}})
        res = runner.invoke(main, ["aenorm", sp, vec])
        assert res.exit_code == 0, res.output
        doc = json.loads(res.output)
        est = doc["estimate"]
        assert est["lower"] <= est["upper"]
        assert "certificates" in est

    def test_lip_constant(self, runner, tmp_path, rng):
        path = _write(tmp_path, "map.json", _map_doc(rng))
        res = runner.invoke(main, ["lip", path])
        assert res.exit_code == 0
        assert json.loads(res.output)["lip_constant"] > 0

    def test_norm_pi(self, runner, tmp_path, rng):
        mp = _map_doc(rng, n=3)
        path = _write(tmp_path, "map.json", mp)
        lin = runner.invoke(main, ["linearize", path])
        assert lin.exit_code == 0
        op_path = _write(tmp_path, "op.json", json.loads(lin.output))
        res = runner.invoke(main, ["norm", "--kind", "pi", "--p", "2", op_path])
        assert res.exit_code == 0, res.output
        doc = json.loads(res.output)
        assert doc["estimate"]["lower"] <= doc["estimate"]["upper"]

    def test_crossnorm_and_certify_roundtrip(self, runner, tmp_path, rng):
        tdoc = {"space": _space_doc(rng, 3),
                "codomain": {"dim": 2, "p": 2},
                "terms": [{"x": "1", "y": "2", "e": [1.0, 0.5]}]}
        path = _write(tmp_path, "tensor.json", tdoc)
        res = runner.invoke(main, ["crossnorm", "--kind", "piL", path])
        assert res.exit_code == 0, res.output
        est_path = _write(tmp_path, "est.json", json.loads(res.output))
        ver = runner.invoke(main, ["certify", est_path])
        assert ver.exit_code == 0, ver.output
        assert json.loads(ver.output)["ok"] is True


class TestDeterminism:
    def test_same_seed_same_bytes(self, runner, tmp_path, rng):
        tdoc = {"space": _space_doc(rng, 3),
                "codomain": {"dim": 2, "p": 2},
                "terms": [{"x": "1", "y": "2", "e": [1.0, 0.5]},
                          {"x": "0", "y": "1", "e": [-0.3, 0.7]}]}
        path = _write(tmp_path, "tensor.json", tdoc)
        outs = [runner.invoke(main, ["--seed", "11", "crossnorm",
                                     "--kind", "gpL", path]).output
                for _ in range(2)]
        assert outs[0] == outs[1]

    def test_check_small_suite(self, runner):
        res = runner.invoke(main, ["check", "--suite", "duality",
                                   "--trials", "5", "--seed", "3"])
        assert res.exit_code == 0, res.output
        assert json.loads(res.output)["verdict"] == "pass"
