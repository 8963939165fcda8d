"""Independent re-verification of stored estimate documents.

Two layers: deterministic recomputation (the embedded operand and config
must reproduce the stored bracket), and structural certificate checks that
re-derive each bound from the certificate data alone -- flow balance,
Lipschitz constants, domination residuals, witness re-evaluation.  All
residual tolerances are 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .errors import LipnormError, StructuralError
from .estimates import NormEstimate
from .exponents import exponent
from .free_space import FreeVector, LipschitzFunctional, ae_dual_norm, ae_norm, \
    molecule
from .lipmap import FreeSpaceOf, LinearOperator, LipschitzMap, linearize
from .spaces import FinNormedSpace, _p_aggregate

TOL = 1e-9


@dataclass
class VerificationResult:
    ok: bool = True
    messages: list = field(default_factory=list)

    def fail(self, msg: str):
        self.ok = False
        self.messages.append("FAIL: " + msg)

    def note(self, msg: str):
        self.messages.append("ok: " + msg)


def verify_document(doc: dict, recompute: bool = True) -> VerificationResult:
    res = VerificationResult()
    kind = doc.get("kind")
    est = doc.get("estimate", {})
    lower, upper = float(est.get("lower", 0)), float(est.get("upper", 0))
    certs = est.get("certificates", {})
    cfg = _cfg_from(doc.get("config", {}))
    try:
        if kind == "aenorm":
            from . import serialize
            space = serialize.space_from_dict(doc["operand"]["space"])
            vec = serialize.free_vector_from_dict(space, doc["operand"]["vector"])
            _verify_aenorm(res, space, vec, lower, upper, certs)
            if recompute:
                _recompute(res, lambda: ae_norm(vec, cfg), lower, upper)
        elif kind == "norm":
            _verify_norm_doc(res, doc, cfg, lower, upper, certs, recompute)
        elif kind == "crossnorm":
            _verify_crossnorm_doc(res, doc, cfg, lower, upper, certs, recompute)
        else:
            res.fail(f"unknown document kind {kind!r}")
    except LipnormError as exc:
        res.fail(f"verification error: {exc}")
    return res


def _structural_only(doc: dict) -> VerificationResult:
    """Certificate residual checks without the deterministic recomputation."""
    return verify_document(doc, recompute=False)


def _cfg_from(d: dict) -> Config:
    keep = {k: v for k, v in d.items()
            if k in Config.__dataclass_fields__}
    return Config(**keep)


def _recompute(res: VerificationResult, fn, lower, upper):
    est = fn()
    if abs(est.lower - lower) > TOL * max(1.0, abs(lower)) or \
            abs(est.upper - upper) > TOL * max(1.0, abs(upper)):
        res.fail(f"recomputation mismatch: stored [{lower}, {upper}], "
                 f"got [{est.lower}, {est.upper}]")
    else:
        res.note("deterministic recomputation reproduces the bracket")


# ---------------------------------------------------------------------------

def _verify_aenorm(res, space, vec, lower, upper, certs):
    lc, uc = certs.get("lower", {}), certs.get("upper", {})
    if lc.get("kind") == "lipschitz_functional":
        values = np.array([float(lc["values"][p]) for p in space.points])
        f = LipschitzFunctional(space, values)
        if f.lip_constant() > 1.0 + TOL:
            res.fail(f"dual functional has Lipschitz constant {f.lip_constant()}")
        got = float(vec.coeffs @ f.nonbase_values())
        if got < lower - TOL * max(1.0, lower):
            res.fail(f"dual pairing {got} below stored lower {lower}")
        else:
            res.note("lower certificate: Lipschitz-1 functional pairs to the bound")
    elif lc.get("kind") != "zero":
        res.fail(f"unexpected lower certificate {lc.get('kind')!r}")
    if uc.get("kind") == "flow":
        net = np.zeros(space.n)
        cost = 0.0
        for edge, v in uc["flow"].items():
            a, b = edge.split("->")
            i, j = space.index(a), space.index(b)
            net[i] += v
            net[j] -= v
            cost += v * space.dist[i, j]
        if np.max(np.abs(net - vec.extended())) > TOL:
            res.fail("flow does not reproduce the element")
        elif cost > upper + TOL * max(1.0, upper):
            res.fail(f"flow cost {cost} exceeds stored upper {upper}")
        else:
            res.note("upper certificate: flow balances and costs the bound")
    elif uc.get("kind") != "zero":
        res.fail(f"unexpected upper certificate {uc.get('kind')!r}")


# ---------------------------------------------------------------------------

def _operand_objects(doc):
    from . import serialize
    op = doc["operand"]
    if "operator" in op:
        return serialize.operator_from_dict(op["operator"]), None
    if "map" in op:
        T = serialize.lip_map_from_dict(op["map"])
        return None, T
    raise StructuralError("operand must hold an operator or a map")


def _verify_norm_doc(res, doc, cfg, lower, upper, certs, recompute=True):
    from . import summing
    u, T = _operand_objects(doc)
    params = doc.get("params", {})
    norm_kind = params.get("kind")
    p = params.get("p")
    dispatch = {
        "op": lambda: summing.op_norm(u, cfg),
        "pi": lambda: summing.pi_norm(u, p, cfg),
        "dp": lambda: summing.strongly_p_summing_norm(u, p, cfg),
        "pisl": lambda: summing.strictly_lip_p_summing_norm(T, p, cfg),
        "pil": lambda: summing.lip_p_summing_norm(T, p, cfg),
        "dpl": lambda: summing.lip_cohen_strongly_p_summing_norm(T, p, cfg),
    }
    if norm_kind not in dispatch:
        res.fail(f"unknown norm kind {norm_kind!r}")
        return
    if recompute:
        _recompute(res, dispatch[norm_kind], lower, upper)
    target = u if u is not None else linearize(T)
    _structural_norm_checks(res, target, T, p, lower, upper, certs, cfg)


def _structural_norm_checks(res, u, T, p, lower, upper, certs, cfg):
    from .summing import _Domain, _ratio, adjoint_operator, _codomain_pieces, \
        _check_domination
    lc, uc = certs.get("lower", {}), certs.get("upper", {})

    # adjoint-wrapped certificates apply to the transposed operator
    if lc.get("kind") == "adjoint_witness" and u is not None:
        u = adjoint_operator(u)
        p = exponent(p).conjugate().as_json()
        lc, uc = lc.get("inner", {}), uc.get("inner", {})
    if uc.get("kind") == "via_strict":
        uc = uc.get("inner", {})

    if u is not None and lc.get("kind") == "sequence_witness":
        dom = _Domain(u.domain, cfg)
        X = np.atleast_2d(np.array(lc["vectors"], dtype=float))
        pw = lc.get("p")
        pe = exponent(2) if pw == "any" else exponent(pw)
        got = _ratio(u, dom, X, pe)
        if pw == "any":  # rank-one witnesses are exact for every p
            got = max(got, _ratio(u, dom, X, exponent(1)))
        if got < lower - 1e-7 * max(1.0, lower):
            res.fail(f"witness ratio {got} below stored lower {lower}")
        else:
            res.note("lower certificate: witness sequence re-evaluates")
    if T is not None and lc.get("kind") == "molecule_family":
        space = T.domain
        dom = _Domain(FreeSpaceOf(space), cfg)
        pe = exponent(lc["p"])
        ms = np.array([molecule(space, x, y).coeffs for x, y in lc["pairs"]])
        imgs = [T(x) - T(y) for x, y in lc["pairs"]]
        num = _p_aggregate(np.array([T.codomain.norm(v) for v in imgs]), pe)
        den, _ = dom.weak_upper(ms, pe)
        got = num / den if den > 0 else 0.0
        if got < lower - TOL * max(1.0, lower):
            res.fail(f"molecule family ratio {got} below stored lower {lower}")
        else:
            res.note("lower certificate: molecule family re-evaluates")
    if lc.get("kind") == "pairing_witness":
        got = abs(float(lc["pairing"])) / float(lc["representation_bound"])
        if got < lower - TOL * max(1.0, lower):
            res.fail("pairing witness below stored lower")
        else:
            res.note("lower certificate: pairing witness consistent")

    if u is not None and uc.get("kind") == "domination2":
        dom = _Domain(u.domain, cfg)
        V = [np.array(v, dtype=float) for v in uc["vectors"]]
        w = np.array(uc["weights"], dtype=float)
        for v in V:
            if dom.dual_norm(v) > 1.0 + 1e-7:
                res.fail(f"domination vector has dual norm {dom.dual_norm(v)}")
        M = sum(wi * np.outer(v, v) for wi, v in zip(w, V))
        pieces = _codomain_pieces(u)
        if pieces is not None:
            if pieces[0] == "poly":
                pieces = ("poly", pieces[1] @ u.matrix)
            resid = _check_domination(np.atleast_2d(M), pieces)
            scale = max(1.0, float(np.trace(np.atleast_2d(M))))
            if resid < -TOL * scale:
                res.fail(f"domination residual {resid}")
            elif np.sqrt(w.sum()) > upper + TOL * max(1.0, upper):
                res.fail("domination weights exceed stored upper")
            else:
                res.note("upper certificate: domination system verifies")
    if T is not None and uc.get("kind") == "lip_domination":
        space = T.domain
        pe = exponent(uc["p"])
        fs = [np.array(v, dtype=float) for v in uc["functionals"]]
        w = np.array(uc["weights"], dtype=float)
        for v in fs:
            if LipschitzFunctional(space, v).lip_constant() > 1.0 + 1e-7:
                res.fail("domination functional exceeds the Lipschitz ball")
        ok = True
        for i in range(space.n):
            for j in range(i + 1, space.n):
                lhs = sum(wi * abs(v[i] - v[j]) ** pe.value
                          for wi, v in zip(w, fs))
                rhs = T.codomain.norm(T.values[i] - T.values[j]) ** pe.value
                if rhs > lhs + 1e-7 * max(1.0, rhs):
                    res.fail(f"pair ({i},{j}) not dominated: {rhs} > {lhs}")
                    ok = False
        if ok and w.sum() ** (1.0 / pe.value) > upper + TOL * max(1.0, upper):
            res.fail("domination weights exceed stored upper")
        elif ok:
            res.note("upper certificate: pairwise domination verifies")
    if uc.get("kind") == "rank_one":
        res.note("upper certificate: rank-one value recomputed with the bracket")


# ---------------------------------------------------------------------------

def _verify_crossnorm_doc(res, doc, cfg, lower, upper, certs, recompute=True):
    from . import serialize, tensor
    u = serialize.tensor_from_dict(doc["operand"]["tensor"])
    params = doc.get("params", {})
    kind, p = params.get("kind"), params.get("p")
    dispatch = {
        "piL": lambda: tensor.proj_norm(u, cfg),
        "epsL": lambda: tensor.inj_norm(u, cfg),
        "dpL": lambda: tensor.dp_norm(u, p, cfg),
        "gpL": lambda: tensor.gp_norm(u, p, cfg),
        "cs": lambda: tensor.cs_norm(u, p, cfg),
        "mu": lambda: tensor.mu_norm(u, p, cfg),
    }
    if kind not in dispatch:
        res.fail(f"unknown cross-norm kind {kind!r}")
        return
    if recompute:
        _recompute(res, dispatch[kind], lower, upper)
    _structural_crossnorm_checks(res, u, kind, p, lower, upper, certs, cfg)


def _structural_crossnorm_checks(res, u, kind, p, lower, upper, certs, cfg):
    from .summing import _Domain
    from .tensor import _cost_dp, _cost_gp, _cost_proj
    M = u.matrix()
    scale = max(1.0, float(np.abs(M).max()))
    lc, uc = certs.get("lower", {}), certs.get("upper", {})

    if uc.get("kind") == "representation":
        L = np.array(uc["left_columns"], dtype=float).T
        R = np.array(uc["right_columns"], dtype=float).T
        if np.max(np.abs(L @ R.T - M)) > TOL * scale:
            res.fail("representation does not reconstruct the element")
        else:
            dom = _Domain(FreeSpaceOf(u.space), cfg)
            cost = {"piL": _cost_proj, "epsL": _cost_proj,
                    "dpL": _cost_dp, "gpL": _cost_gp}[kind]
            pe = exponent(p) if p is not None else None
            got = cost(u, dom, L, R, pe)
            if got > upper + TOL * max(1.0, upper):
                res.fail(f"representation cost {got} exceeds stored upper {upper}")
            else:
                res.note("upper certificate: representation reconstructs and costs")
    if uc.get("kind") == "pair_representation":
        pe = exponent(uc["p"])
        pairs = [(u.space.index(a), u.space.index(b)) for a, b in uc["pairs"]]
        Emat = np.array(uc["vectors"], dtype=float)
        lam = np.array(uc.get("scales", [1.0] * len(pairs)), dtype=float)
        B = np.column_stack([molecule(u.space, i, j).coeffs for i, j in pairs])
        if np.max(np.abs(B @ (lam[:, None] * Emat) - M)) > TOL * scale:
            res.fail("pair representation does not reconstruct the element")
        else:
            # re-evaluate the representation's cost against the stored upper
            from .spaces import VectorSequence, _p_aggregate, weak_norm
            dists = np.array([u.space.dist[i, j] for i, j in pairs])
            if uc.get("mode") == "cs":
                mols = (B * lam).T
                left = _Domain(FreeSpaceOf(u.space), cfg).weak_upper(
                    mols, pe.conjugate())[0]
                right = _p_aggregate(
                    np.array([u.E.norm(e) for e in Emat]), pe)
            else:
                left = _p_aggregate(lam * dists, pe.conjugate())
                right = weak_norm(VectorSequence(u.E, Emat), pe, cfg).upper
            got = float(left * right)
            if got > upper * (1 + 1e-7) + TOL:
                res.fail(f"pair representation cost {got} exceeds upper {upper}")
            else:
                res.note("upper certificate: pair representation "
                         "reconstructs and costs")
    if lc.get("kind") == "dual_map":
        Y = np.array(lc["table"], dtype=float)
        got = abs(u.pair_with_table(Y))
        if abs(got - float(lc["pairing"])) > TOL * max(1.0, got):
            res.fail("stored pairing does not re-evaluate")
        elif got / float(lc["denominator"]) < lower - TOL * max(1.0, lower):
            res.fail("dual pairing ratio below stored lower")
        else:
            res.note("lower certificate: dual pairing re-evaluates")
    if lc.get("kind") == "dual_vertex":
        values = np.array([float(lc["functional"][pt]) for pt in u.space.points])
        f = LipschitzFunctional(u.space, values)
        if f.lip_constant() > 1.0 + TOL:
            res.fail("dual vertex functional outside the Lipschitz ball")
        w = M.T @ f.nonbase_values()
        if u.E.norm(w) < lower - TOL * max(1.0, lower):
            res.fail("dual vertex pairing below stored lower")
        else:
            res.note("lower certificate: dual vertex re-evaluates")
