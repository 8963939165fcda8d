"""Acceptance gate: one test per release criterion.

Each test prints a single PASS/FAIL line with the measured quantities, so
the log doubles as a scoreboard.  All tolerances are stated inline; the
harness suites do the instance generation so the same code paths are
exercised here and by `lipnorm check`.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from lipnorm import FinNormedSpace, TensorElement, make_space
from lipnorm import certify, harness, serialize
from lipnorm.config import Config

SEED = 20260826


def _line(name, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, detail


def _counts(report, suite):
    return report["suites"][suite]["counts"]


@pytest.fixture(scope="module")
def suite_cache():
    """Run each harness suite once at its acceptance size and share the
    results (and their emitted certificate documents) across criteria."""
    cache = {}

    def get(name, trials):
        key = (name, trials)
        if key not in cache:
            t0 = time.time()
            cache[key] = (harness.run_suite([name], trials=trials, seed=SEED),
                          time.time() - t0)
        return cache[key]

    return get


def test_criterion_1_transport_duality(suite_cache):
    # primal and dual free-space norms agree to 1e-9 on 100 random
    # spaces with up to 12 points, inside 10 seconds
    report, elapsed = suite_cache("duality", 100)
    c = _counts(report, "duality")
    ok = report["verdict"] == "pass" and c["fail"] == 0 and elapsed < 10
    _line("transport duality 1e-9",
          ok, f"{c['pass']} agree, {c['fail']} fail, {elapsed:.1f}s")


def test_criterion_2_linearization_isometry(suite_cache):
    # operator norm of the linear extension equals the Lipschitz constant
    # to 1e-9 on 200 random maps, inside 10 seconds
    report, elapsed = suite_cache("isometry", 200)
    c = _counts(report, "isometry")
    ok = report["verdict"] == "pass" and c["fail"] == 0 and elapsed < 10
    _line("linearization isometry 1e-9",
          ok, f"{c['pass']} agree, {c['fail']} fail, {elapsed:.1f}s")


def test_criterion_3_cross_norm_axiom():
    # all six cross-norm estimators return d(x,y)*||e|| on 50 random
    # single-term tensors within 1e-6
    from lipnorm import cs_norm, dp_norm, gp_norm, inj_norm, mu_norm, proj_norm
    cfg = Config(seed=SEED)
    rng = np.random.default_rng(SEED)
    fns = [lambda u: proj_norm(u, cfg), lambda u: inj_norm(u, cfg),
           lambda u: dp_norm(u, 2, cfg), lambda u: gp_norm(u, 2, cfg),
           lambda u: cs_norm(u, 2, cfg), lambda u: mu_norm(u, 2, cfg)]
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(3, 6))
        X = harness.random_space_embedded(n, rng)
        dim = int(rng.integers(1, 4))
        E = FinNormedSpace(dim, 2)
        i, j = rng.choice(n, size=2, replace=False)
        e = rng.standard_normal(dim)
        u = TensorElement(X, E, [(int(i), int(j), e)])
        want = X.dist[i, j] * E.norm(e)
        for fn in fns:
            est = fn(u)
            err = max(abs(est.lower - want), abs(est.upper - want))
            worst = max(worst, err / max(1.0, want))
    ok = worst < 1e-6
    _line("cross-norm axiom 1e-6 on 50 single terms",
          ok, f"worst relative error {worst:.2e}")


def test_criterion_4_pairing_ratio(suite_cache):
    # on 30 small Euclidean instances the independent pairing-ratio
    # witness reaches >= 0.9x the certified 2-summing lower bound and
    # never beats the upper bound + 1e-6, inside 5 minutes
    report, elapsed = suite_cache("thm35", 30)
    c = _counts(report, "thm35")
    ok = report["verdict"] == "pass" and c["fail"] == 0 and elapsed < 300
    _line("pairing ratio within [0.9 x lower, upper + 1e-6]",
          ok, f"{c['pass']} pass, {c['fail']} fail, {elapsed:.1f}s")


def test_criterion_5_right_weak_coincidence(suite_cache):
    # free-factor and molecule-factor right-weak brackets overlap on 30
    # two-term tensors over 3-point spaces, each width <= 5% of its
    # midpoint, inside 5 minutes
    report, elapsed = suite_cache("cor314", 30)
    c = _counts(report, "cor314")
    ok = (report["verdict"] == "pass" and c["fail"] == 0
          and c["inconclusive"] == 0 and elapsed < 300)
    _line("right-weak coincidence, widths <= 5%",
          ok, f"{c['pass']} overlap, {c['inconclusive']} too wide, "
              f"{elapsed:.1f}s")


def test_criterion_6_quotient_monotonicity(suite_cache):
    # composing a linear map with the subset quotient cannot raise its
    # certified 2-summing upper bound (tolerance 1e-6), and the three
    # summing brackets overlap, on 30 random maps
    report, elapsed = suite_cache("prop38", 30)
    c = _counts(report, "prop38")
    ok = report["verdict"] == "pass" and c["fail"] == 0
    _line("quotient monotonicity + three-bracket overlap",
          ok, f"{c['pass']} pass, {c['fail']} fail, {elapsed:.1f}s")


def test_criterion_7_strictness_growth(suite_cache):
    # along the integer line spaces the strict-summing lower bound grows
    # strictly in n and exceeds 1.8 at n=4, while the molecule-ratio
    # upper stays below a fixed cap, inside 5 minutes
    report, elapsed = suite_cache("cor37", None)
    c = _counts(report, "cor37")
    ok = report["verdict"] == "pass" and c["fail"] == 0 and elapsed < 300
    _line("strict lower grows (> 1.8 at n=4), molecule-ratio upper capped",
          ok, f"{c['pass']} pass, {c['fail']} fail, {elapsed:.1f}s")


def test_criterion_8_certificate_integrity(suite_cache):
    # every certificate emitted by the harness suites re-verifies with
    # residual tolerance 1e-9 (structural checks on all documents, full
    # recomputation on a sample)
    docs = []
    for name, trials in [("duality", 100), ("isometry", 200), ("thm35", 30),
                         ("cor314", 30), ("prop38", 30), ("cor37", None)]:
        report, _ = suite_cache(name, trials)
        for suite in report["suites"].values():
            for chk in suite["checks"]:
                docs.extend(chk.get("documents", []))
    assert docs
    bad = 0
    for doc in docs:
        if not certify.verify_document(doc, recompute=False).ok:
            bad += 1
    rng = np.random.default_rng(SEED)
    sample = rng.choice(len(docs), size=min(10, len(docs)), replace=False)
    for k in sample:
        res = certify.verify_document(docs[int(k)], recompute=True)
        if not res.ok:
            bad += 1
    ok = bad == 0
    _line("certificate integrity (100% re-verify < 1e-9)",
          ok, f"{len(docs)} structural + {len(sample)} recomputed, {bad} bad")


def test_criterion_9_determinism():
    # two CLI runs of `check --suite all` with the same seed produce
    # byte-identical reports
    cmd = [sys.executable, "-m", "lipnorm.cli", "check", "--suite", "all",
           "--trials", "5", "--seed", "17"]
    outs = []
    for _ in range(2):
        res = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
        assert res.returncode == 0, res.stderr[-2000:]
        outs.append(res.stdout.encode())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    _line("deterministic check reports",
          ok, f"{len(outs[0])} bytes, identical={outs[0] == outs[1]}")
