"""Certified norm brackets on free spaces over finite pointed metric spaces.

Core objects: pointed metric spaces and their free (Arens-Eells) spaces,
Lipschitz maps with linear extensions, tensor elements with six cross-norm
estimators, and summing-norm brackets with re-verifiable certificates.
"""

from .config import Config, DEFAULT_CONFIG, VERSION as __version__
from .errors import (CapacityError, DegenerateMoleculeError, InternalError,
                     LipnormError, StructuralError, UnsupportedExponentError)
from .estimates import NormEstimate
from .exponents import Exponent, INF, exponent
from .free_space import (FreeVector, LipschitzFunctional, ae_dual_norm,
                         ae_norm, lip_ball_vertices, molecule, pair)
from .lipmap import (FreeSpaceOf, LinearOperator, LipDualOf, LipschitzMap,
                     beta_map, linearize, subset_space, transpose)
from .spaces import (FinNormedSpace, PointedMetricSpace, VectorSequence,
                     make_space, strong_norm, validate_metric, weak_norm)
from .summing import (lip_cohen_strongly_p_summing_norm, lip_p_summing_norm,
                      op_norm, pi_norm, strictly_lip_p_summing_norm,
                      strongly_p_summing_norm)
from .tensor import (TensorElement, cs_norm, dp_norm, gp_norm, inj_norm,
                     mu_norm, proj_norm)

__all__ = [
    "Config", "DEFAULT_CONFIG", "NormEstimate", "Exponent", "INF", "exponent",
    "LipnormError", "StructuralError", "CapacityError", "InternalError",
    "UnsupportedExponentError", "DegenerateMoleculeError",
    "PointedMetricSpace", "FinNormedSpace", "VectorSequence", "make_space",
    "validate_metric", "strong_norm", "weak_norm",
    "FreeVector", "LipschitzFunctional", "molecule", "pair", "ae_norm",
    "ae_dual_norm", "lip_ball_vertices",
    "LipschitzMap", "LinearOperator", "FreeSpaceOf", "LipDualOf",
    "linearize", "transpose", "beta_map", "subset_space",
    "op_norm", "pi_norm", "strictly_lip_p_summing_norm", "lip_p_summing_norm",
    "strongly_p_summing_norm", "lip_cohen_strongly_p_summing_norm",
    "TensorElement", "proj_norm", "inj_norm", "dp_norm", "gp_norm",
    "cs_norm", "mu_norm",
]
