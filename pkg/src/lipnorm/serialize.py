"""JSON interchange for spaces, vectors, maps, operators, tensors, estimates.

One format, deterministic output: keys sorted, floats written with 12
significant digits, so identical inputs and configuration produce
byte-identical documents.
"""

from __future__ import annotations

import json

import numpy as np

from .config import Config
from .errors import StructuralError
from .estimates import NormEstimate
from .exponents import exponent
from .free_space import FreeVector
from .lipmap import FreeSpaceOf, LinearOperator, LipDualOf, LipschitzMap
from .spaces import FinNormedSpace, PointedMetricSpace, make_space
from .tensor import TensorElement


def _canon(obj):
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _canon(obj.tolist())
    return obj


def canonical_dumps(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, indent=2) + "\n"


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise StructuralError(f"cannot read {path}: {exc}") from exc


# -- spaces -----------------------------------------------------------------

def space_to_dict(space: PointedMetricSpace) -> dict:
    return {"points": list(space.points), "base": space.points[space.base],
            "dist": space.dist.tolist()}


def space_from_dict(d: dict) -> PointedMetricSpace:
    try:
        points = [str(p) for p in d["points"]]
        base = points.index(str(d["base"])) if not isinstance(d["base"], int) \
            else int(d["base"])
        dist = np.asarray(d["dist"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise StructuralError(f"malformed space document: {exc}") from exc
    return make_space(points, base, dist)


def normed_to_dict(E: FinNormedSpace) -> dict:
    return {"dim": E.dim, "p": E.p.as_json()}


def normed_from_dict(d: dict) -> FinNormedSpace:
    try:
        return FinNormedSpace(int(d["dim"]), exponent(d["p"]))
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed normed-space document: {exc}") from exc


# -- vectors, maps ----------------------------------------------------------

def free_vector_to_dict(v: FreeVector) -> dict:
    return {"coeffs": {v.space.points[i]: float(v.coeffs[k])
                       for k, i in enumerate(v.space.nonbase)}}


def free_vector_from_dict(space: PointedMetricSpace, d: dict) -> FreeVector:
    try:
        return FreeVector.from_dict(space, d["coeffs"])
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed vector document: {exc}") from exc


def lip_map_to_dict(T: LipschitzMap) -> dict:
    return {"space": space_to_dict(T.domain),
            "codomain": normed_to_dict(T.codomain),
            "values": T.values.tolist()}


def lip_map_from_dict(d: dict) -> LipschitzMap:
    try:
        space = space_from_dict(d["space"])
        cod = normed_from_dict(d["codomain"])
        return LipschitzMap(space, cod, np.asarray(d["values"], dtype=float))
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed map document: {exc}") from exc


def operator_to_dict(u: LinearOperator) -> dict:
    def side(s):
        if isinstance(s, FreeSpaceOf):
            return {"free_space": space_to_dict(s.space)}
        if isinstance(s, LipDualOf):
            return {"lip_dual": space_to_dict(s.space)}
        return normed_to_dict(s)
    return {"domain": side(u.domain), "codomain": side(u.codomain),
            "matrix": u.matrix.tolist()}


def operator_from_dict(d: dict) -> LinearOperator:
    def side(s):
        if "free_space" in s:
            return FreeSpaceOf(space_from_dict(s["free_space"]))
        if "lip_dual" in s:
            return LipDualOf(space_from_dict(s["lip_dual"]))
        return normed_from_dict(s)
    try:
        return LinearOperator(side(d["domain"]), side(d["codomain"]),
                              np.asarray(d["matrix"], dtype=float))
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed operator document: {exc}") from exc


def tensor_to_dict(u: TensorElement) -> dict:
    return {"space": space_to_dict(u.space), "codomain": normed_to_dict(u.E),
            "terms": [{"x": u.space.points[i], "y": u.space.points[j],
                       "e": e.tolist()} for i, j, e in u.terms]}


def tensor_from_dict(d: dict) -> TensorElement:
    try:
        space = space_from_dict(d["space"])
        E = normed_from_dict(d["codomain"])
        terms = [(t["x"], t["y"], np.asarray(t["e"], dtype=float))
                 for t in d["terms"]]
        return TensorElement(space, E, terms)
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed tensor document: {exc}") from exc


# -- estimate documents -----------------------------------------------------

def estimate_document(kind: str, operand: dict, est: NormEstimate,
                      cfg: Config, params: dict | None = None) -> dict:
    """Self-contained record: the operand is embedded so certificates can be
    re-verified without the original input files."""
    return {"kind": kind, "operand": operand, "params": params or {},
            "estimate": est.as_dict(), "config": cfg.as_dict()}
