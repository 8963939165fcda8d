"""Randomized verification of the package's isometric identities.

Five suites: duality of the free-space norm computations, the linearization
isometry, the pairing-ratio characterization of the strict summing norm, the
coincidence of the two right-weak cross norms, the quotient-composition
monotonicity on Euclidean subsets, and the strictness growth scan on line
spaces.  Every pass embeds re-verifiable certificate documents; certificates
are structurally re-checked before a verdict is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .errors import LipnormError
from .estimates import NormEstimate
from .free_space import FreeVector, ae_dual_norm, ae_norm
from .lipmap import (FreeSpaceOf, LinearOperator, LipschitzMap, beta_map,
                     linearize, subset_space)
from .spaces import FinNormedSpace, PointedMetricSpace, make_space
from .summing import (lip_p_summing_norm, op_norm, pi_norm,
                      strictly_lip_p_summing_norm)
from .tensor import TensorElement, dp_norm, gp_norm, mu_norm

EXACT_TOL = 1e-9
PAIR_TOL = 1e-6


# ---------------------------------------------------------------------------
# random instances

def random_space_embedded(n: int, rng, k: int = 3,
                          min_dist: float = 1e-2) -> PointedMetricSpace:
    """n points sampled in l_2^k with the induced metric; point 0 is the base."""
    for _ in range(64):
        pts = rng.standard_normal((n, k))
        dist = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
        if n == 1 or dist[np.triu_indices(n, 1)].min() >= min_dist:
            return make_space([str(i) for i in range(n)], 0, dist)
    raise LipnormError("could not sample a well-separated point set")


def random_space_repaired(n: int, rng) -> PointedMetricSpace:
    """Random symmetric weights repaired into a metric by shortest-path closure."""
    W = np.abs(rng.standard_normal((n, n))) + 0.1
    W = 0.5 * (W + W.T)
    np.fill_diagonal(W, 0.0)
    for k in range(n):  # Floyd-Warshall closure
        W = np.minimum(W, W[:, k, None] + W[None, k, :])
    return make_space([str(i) for i in range(n)], 0, W)


def random_lip_map(space: PointedMetricSpace, E: FinNormedSpace,
                   rng) -> LipschitzMap:
    values = rng.standard_normal((space.n, E.dim))
    values[space.base] = 0.0
    return LipschitzMap(space, E, values)


# ---------------------------------------------------------------------------
# reports

@dataclass
class CheckReport:
    check_id: str
    instance: str
    relation: str
    brackets: dict
    verdict: str  # pass | fail | inconclusive
    seed: int
    detail: str = ""
    documents: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"check_id": self.check_id, "instance": self.instance,
                "relation": self.relation, "brackets": self.brackets,
                "verdict": self.verdict, "seed": self.seed,
                "detail": self.detail, "documents": self.documents}


def _doc(kind, operand, est, cfg, params=None):
    from .serialize import estimate_document
    return estimate_document(kind, operand, est, cfg, params)


def _bracket_list(est: NormEstimate):
    return [est.lower, est.upper]


# ---------------------------------------------------------------------------
# suites

def check_duality(trials: int = 100, seed: int = DEFAULT_CONFIG.seed,
                  cfg: Config = DEFAULT_CONFIG, max_points: int = 12):
    """Primal flow value against the Lipschitz-ball maximization, to 1e-9."""
    from .serialize import free_vector_to_dict, space_to_dict
    rng = np.random.default_rng(seed)
    reports = []
    for t in range(trials):
        n = int(rng.integers(2, max_points + 1))
        space = (random_space_embedded(n, rng) if t % 2 == 0
                 else random_space_repaired(n, rng))
        vec = FreeVector(space, rng.standard_normal(n - 1))
        est = ae_norm(vec, cfg)
        dual_val, _ = ae_dual_norm(vec, cfg)
        gap = abs(est.upper - dual_val)
        ok = gap <= EXACT_TOL * max(1.0, est.upper) and est.exact
        reports.append(CheckReport(
            check_id="duality", instance=f"trial {t}, |X|={n}",
            relation="primal transport value = Lipschitz-ball maximum",
            brackets={"primal": _bracket_list(est), "dual": [dual_val, dual_val]},
            verdict="pass" if ok else "fail", seed=seed,
            detail=f"gap={gap:.3e}",
            documents=[_doc("aenorm", {"space": space_to_dict(space),
                                       "vector": free_vector_to_dict(vec)},
                            est, cfg)]))
    return reports


def check_linearization_isometry(trials: int = 200,
                                 seed: int = DEFAULT_CONFIG.seed,
                                 cfg: Config = DEFAULT_CONFIG,
                                 max_points: int = 10):
    """Operator norm of the linear extension equals the Lipschitz constant."""
    from .serialize import operator_to_dict
    rng = np.random.default_rng(seed)
    reports = []
    for t in range(trials):
        n = int(rng.integers(2, max_points + 1))
        if t % 10 == 9:  # near-degenerate metrics must still agree
            space = random_space_embedded(n, rng, min_dist=0.0)
            space = make_space(space.points, 0, space.dist * 1e-6 +
                               space.dist)
        elif t % 2 == 0:
            space = random_space_embedded(n, rng)
        else:
            space = random_space_repaired(n, rng)
        E = FinNormedSpace(int(rng.integers(1, 5)),
                           [1, 2, "inf"][int(rng.integers(0, 3))])
        T = random_lip_map(space, E, rng)
        uhat = linearize(T)
        est = op_norm(uhat, cfg)
        lip = T.lip_constant()
        gap = abs(est.upper - lip)
        ok = gap <= EXACT_TOL * max(1.0, lip)
        reports.append(CheckReport(
            check_id="isometry", instance=f"trial {t}, |X|={n}, E=l_{E.p}^{E.dim}",
            relation="op norm of linear extension = Lipschitz constant",
            brackets={"op_norm": _bracket_list(est), "lip": [lip, lip]},
            verdict="pass" if ok else "fail", seed=seed,
            detail=f"gap={gap:.3e}",
            documents=[_doc("norm", {"operator": operator_to_dict(uhat)},
                            est, cfg, {"kind": "op"})]))
    return reports


def check_pairing_ratio(trials: int = 30, p=2, seed: int = DEFAULT_CONFIG.seed,
                        cfg: Config = DEFAULT_CONFIG):
    """The independent pairing-ratio witness reaches 90% of the certified
    lower bound of the strict summing norm and never exceeds the upper."""
    from .serialize import lip_map_to_dict
    rng = np.random.default_rng(seed)
    reports = []
    for t in range(trials):
        n = int(rng.integers(2, 5))
        space = random_space_embedded(n, rng, k=2)
        E = FinNormedSpace(int(rng.integers(1, 4)), 2)
        T = random_lip_map(space, E, rng)
        est = strictly_lip_p_summing_norm(T, p, cfg)
        ratio = float(est.meta.get("pairing_ratio", 0.0))
        ok = (ratio >= 0.9 * est.lower - EXACT_TOL
              and ratio <= est.upper + PAIR_TOL)
        # pairing-form sanity on a random tensor element
        u = TensorElement(space, E, [
            (int(rng.integers(0, n)), int(rng.integers(0, n)),
             rng.standard_normal(E.dim)) for _ in range(2)])
        detail = f"ratio={ratio:.6f}"
        if not u.is_zero():
            dpu = dp_norm(u, p, cfg)
            Y = T.values  # pairing of T against u through its value table
            pairing = abs(u.pair_with_table(Y))
            bound = est.upper * dpu.upper
            if pairing > bound + PAIR_TOL * max(1.0, bound):
                ok = False
                detail += f"; pairing {pairing:.6f} > bound {bound:.6f}"
        reports.append(CheckReport(
            check_id="pairing_ratio", instance=f"trial {t}, |X|={n}, dimE={E.dim}",
            relation="pairing ratio within [0.9 * lower, upper]",
            brackets={"strict_summing": _bracket_list(est),
                      "ratio": [ratio, ratio]},
            verdict="pass" if ok else "fail", seed=seed, detail=detail,
            documents=[_doc("norm", {"map": lip_map_to_dict(T)}, est, cfg,
                            {"kind": "pisl", "p": 2})]))
    return reports


def check_right_weak_coincidence(trials: int = 30, p=2,
                                 seed: int = DEFAULT_CONFIG.seed,
                                 cfg: Config = DEFAULT_CONFIG):
    """The free-factor and molecule-factor right-weak norms coincide:
    brackets overlap and the free-factor upper never exceeds the
    molecule-factor upper."""
    from .serialize import tensor_to_dict
    rng = np.random.default_rng(seed)
    reports = []
    for t in range(trials):
        space = random_space_embedded(3, rng, k=2)
        E = FinNormedSpace(2, 2)
        u = TensorElement(space, E, [
            (int(rng.integers(0, 3)), int((rng.integers(0, 3))),
             rng.standard_normal(2)) for _ in range(2)])
        if u.is_zero():
            continue
        g = gp_norm(u, p, cfg)
        m = mu_norm(u, p, cfg)
        overlap = g.overlaps(m, tol=PAIR_TOL)
        chain = g.upper <= m.upper + PAIR_TOL
        wide = max(g.relative_width(), m.relative_width()) > 0.05
        verdict = ("fail" if not (overlap and chain)
                   else "inconclusive" if wide else "pass")
        reports.append(CheckReport(
            check_id="right_weak", instance=f"trial {t}",
            relation="free-factor and molecule-factor right-weak norms coincide",
            brackets={"free_factor": _bracket_list(g),
                      "molecule_factor": _bracket_list(m)},
            verdict=verdict, seed=seed,
            detail=f"widths {g.relative_width():.4f}/{m.relative_width():.4f}",
            documents=[
                _doc("crossnorm", {"tensor": tensor_to_dict(u)}, g, cfg,
                     {"kind": "gpL", "p": 2}),
                _doc("crossnorm", {"tensor": tensor_to_dict(u)}, m, cfg,
                     {"kind": "mu", "p": 2})]))
    return reports


def _pullback_certificate(A: np.ndarray, coords_nonbase: np.ndarray):
    """A 2-domination system for A restricted to an embedded point set,
    pulled back from the exact Euclidean certificate of A."""
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    vectors = [coords_nonbase @ Vt[k] for k in range(len(s))]
    weights = [float(s[k] ** 2) for k in range(len(s))]
    value = float(np.linalg.norm(s))
    cert = {"kind": "domination2",
            "vectors": [v.tolist() for v in vectors],
            "weights": weights, "residual": 0.0}
    return value, cert


def _min_upper(est: NormEstimate, value: float, cert: dict) -> NormEstimate:
    if value < est.upper:
        return NormEstimate(lower=min(est.lower, value), upper=value,
                            exact=value - est.lower <= EXACT_TOL * max(1.0, value),
                            lower_cert=est.lower_cert, upper_cert=cert,
                            meta=dict(est.meta))
    return est


def check_quotient_monotonicity(trials: int = 30, p=2,
                                seed: int = DEFAULT_CONFIG.seed,
                                cfg: Config = DEFAULT_CONFIG):
    """For linear maps restricted to Euclidean point sets: composing with the
    quotient map cannot increase the 2-summing norm, and the three summing
    estimates overlap."""
    from .serialize import lip_map_to_dict, operator_to_dict
    rng = np.random.default_rng(seed)
    ambient = FinNormedSpace(3, 2)
    reports = []
    for t in range(trials):
        npts = int(rng.integers(3, 6))
        coords = rng.standard_normal((npts, 3))
        coords[0] = 0.0
        space = subset_space(ambient, coords)
        mdim = int(rng.integers(2, 4))
        A = rng.standard_normal((mdim, 3))
        cod = FinNormedSpace(mdim, 2)
        ambient_op = LinearOperator(ambient, cod, A)
        est_T = pi_norm(ambient_op, p, cfg)  # exact (Euclidean both sides)
        beta = beta_map(space, ambient, coords)
        uhat = LinearOperator(FreeSpaceOf(space), cod, A @ beta.matrix)
        pb_value, pb_cert = _pullback_certificate(A, coords[1:])
        est_hat = _min_upper(pi_norm(uhat, p, cfg), pb_value, pb_cert)
        T = LipschitzMap(space, cod, coords @ A.T)
        est_sl = _min_upper(strictly_lip_p_summing_norm(T, p, cfg),
                            pb_value, pb_cert)
        est_l = _min_upper(lip_p_summing_norm(T, p, cfg), pb_value, pb_cert)
        mono = est_hat.upper <= est_T.upper + PAIR_TOL
        overlap = (est_hat.overlaps(est_sl, tol=PAIR_TOL)
                   and est_hat.overlaps(est_l, tol=PAIR_TOL)
                   and est_sl.overlaps(est_l, tol=PAIR_TOL))
        reports.append(CheckReport(
            check_id="quotient_monotonicity", instance=f"trial {t}, |X|={npts}",
            relation="summing norm of the composed map <= ambient; brackets overlap",
            brackets={"ambient": _bracket_list(est_T),
                      "composed": _bracket_list(est_hat),
                      "strict": _bracket_list(est_sl),
                      "lipschitz": _bracket_list(est_l)},
            verdict="pass" if (mono and overlap) else "fail", seed=seed,
            detail=f"mono={mono}, overlap={overlap}",
            documents=[
                _doc("norm", {"operator": operator_to_dict(uhat)}, est_hat, cfg,
                     {"kind": "pi", "p": 2}),
                _doc("norm", {"map": lip_map_to_dict(T)}, est_l, cfg,
                     {"kind": "pil", "p": 2})]))
    return reports


def line_space(n: int) -> PointedMetricSpace:
    pts = [str(k) for k in range(n + 1)]
    idx = np.arange(n + 1, dtype=float)
    return make_space(pts, 0, np.abs(idx[:, None] - idx[None, :]))


def line_embedding(n: int) -> LipschitzMap:
    """The point embedding of {0..n} into l_1^n via increment coordinates
    (an isometry onto its image)."""
    E = FinNormedSpace(n, 1)
    values = np.tril(np.ones((n + 1, n)), k=-1)
    return LipschitzMap(line_space(n), E, values)


def scan_strictness_growth(n_range=range(1, 6), p=2,
                           seed: int = DEFAULT_CONFIG.seed,
                           cfg: Config = DEFAULT_CONFIG, cap: float = 1.5):
    """Strict-summing lower bounds grow along line spaces while the
    molecule-ratio summing upper stays bounded: the two classes differ."""
    from .serialize import lip_map_to_dict
    reports = []
    sl_lowers = []
    for n in n_range:
        T = line_embedding(n)
        sl = strictly_lip_p_summing_norm(T, p, cfg)
        lp = lip_p_summing_norm(T, p, cfg)
        sl_lowers.append(sl.lower)
        grow = len(sl_lowers) < 2 or sl.lower > sl_lowers[-2] + 1e-6
        bounded = lp.upper < cap
        need = (n != 4) or sl.lower > 1.8
        reports.append(CheckReport(
            check_id="strictness_growth", instance=f"line space, n={n}",
            relation="strict lower grows with n; molecule-ratio upper bounded",
            brackets={"strict": _bracket_list(sl), "lipschitz": _bracket_list(lp)},
            verdict="pass" if (grow and bounded and need) else "fail",
            seed=seed,
            detail=f"strict lower={sl.lower:.6f}, lip upper={lp.upper:.6f}",
            documents=[_doc("norm", {"map": lip_map_to_dict(T)}, sl, cfg,
                            {"kind": "pisl", "p": 2})]))
    return reports


# ---------------------------------------------------------------------------
# suite runner

SUITES = {
    "duality": lambda trials, seed, cfg: check_duality(trials or 100, seed, cfg),
    "isometry": lambda trials, seed, cfg: check_linearization_isometry(
        trials or 200, seed, cfg),
    "thm35": lambda trials, seed, cfg: check_pairing_ratio(trials or 30, 2, seed, cfg),
    "cor314": lambda trials, seed, cfg: check_right_weak_coincidence(
        trials or 30, 2, seed, cfg),
    "prop38": lambda trials, seed, cfg: check_quotient_monotonicity(
        trials or 30, 2, seed, cfg),
    "cor37": lambda trials, seed, cfg: scan_strictness_growth(
        range(1, 6), 2, seed, cfg),
}


def run_suite(names, trials=None, seed: int = DEFAULT_CONFIG.seed,
              cfg: Config | None = None, verify_certificates: bool = True) -> dict:
    from .certify import _structural_only
    cfg = cfg or Config(seed=seed)
    if isinstance(names, str):
        names = list(SUITES) if names == "all" else [names]
    report = {"seed": seed, "config": cfg.as_dict(), "suites": {}}
    total = {"pass": 0, "fail": 0, "inconclusive": 0}
    for name in names:
        if name not in SUITES:
            raise LipnormError(f"unknown suite {name!r}")
        checks = SUITES[name](trials, seed, cfg)
        if verify_certificates:
            for c in checks:
                for doc in c.documents:
                    vr = _structural_only(doc)
                    if not vr.ok:
                        c.verdict = "fail"
                        c.detail += " | certificate: " + "; ".join(vr.messages)
        counts = {"pass": 0, "fail": 0, "inconclusive": 0}
        for c in checks:
            counts[c.verdict] += 1
        verdict = "fail" if counts["fail"] > 0 else (
            "fail" if counts["inconclusive"] > 0.1 * max(1, len(checks))
            else "pass")
        report["suites"][name] = {"checks": [c.as_dict() for c in checks],
                                  "counts": counts, "verdict": verdict}
        for k in total:
            total[k] += counts[k]
    report["counts"] = total
    report["verdict"] = "pass" if all(
        s["verdict"] == "pass" for s in report["suites"].values()) else "fail"
    return report


def render_text(report: dict) -> str:
    lines = [f"seed {report['seed']}  overall {report['verdict'].upper()}"]
    for name, suite in report["suites"].items():
        c = suite["counts"]
        lines.append(f"[{suite['verdict'].upper():4s}] {name}: "
                     f"{c['pass']} pass, {c['fail']} fail, "
                     f"{c['inconclusive']} inconclusive")
        for chk in suite["checks"]:
            if chk["verdict"] != "pass":
                lines.append(f"    {chk['verdict']}: {chk['instance']} "
                             f"({chk['detail']})")
    return "\n".join(lines) + "\n"
