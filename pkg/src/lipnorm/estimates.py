"""Certified norm brackets.

Every nonconvex estimator in this package returns a bracket [lower, upper]
with re-verifiable certificates on both sides, never a bare point value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalError

BRACKET_SLACK = 1e-9


@dataclass
class NormEstimate:
    """A bracket lower <= value <= upper with witness and certificate data.

    ``lower_cert`` holds data whose re-evaluation reproduces ``lower``
    (a witness sequence, dual functional, ...).  ``upper_cert`` holds a
    feasibility certificate for ``upper`` (a flow, a representation, a
    domination weight system, ...).  ``exact`` is set when the two sides
    agree to certified tolerance.
    """

    lower: float
    upper: float
    exact: bool = False
    lower_cert: dict = field(default_factory=dict)
    upper_cert: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper + BRACKET_SLACK:
            raise InternalError(
                f"invalid bracket: lower {self.lower!r} > upper {self.upper!r}")
        # tiny numerical inversions are clamped, never hidden
        if self.lower > self.upper:
            self.lower = self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def relative_width(self) -> float:
        mid = self.midpoint
        if mid <= 0:
            return 0.0 if self.width == 0 else float("inf")
        return self.width / mid

    def overlaps(self, other: "NormEstimate", tol: float = 1e-9) -> bool:
        return self.lower <= other.upper + tol and other.lower <= self.upper + tol

    def is_loose(self) -> bool:
        return bool(self.meta.get("loose", False))

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "certificates": {"lower": self.lower_cert, "upper": self.upper_cert},
            "meta": self.meta,
        }


def exact_estimate(value: float, lower_cert=None, upper_cert=None, meta=None) -> NormEstimate:
    return NormEstimate(
        lower=value, upper=value, exact=True,
        lower_cert=lower_cert or {}, upper_cert=upper_cert or {}, meta=meta or {})


def zero_estimate(kind: str) -> NormEstimate:
    cert = {"kind": "zero", "note": f"zero element has {kind} norm 0"}
    return exact_estimate(0.0, cert, dict(cert))
