"""Extended exponents p in [1, inf].

Infinity is a distinct symbolic value, never a float sentinel, so that
arithmetic on exponents cannot silently produce inf/inf artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StructuralError


@dataclass(frozen=True)
class Exponent:
    """An exponent p with 1 <= p <= infinity.  ``finite_value is None`` means infinity."""

    finite_value: float | None

    def __post_init__(self):
        if self.finite_value is not None:
            v = float(self.finite_value)
            if not math.isfinite(v) or v < 1.0:
                raise StructuralError(f"exponent must lie in [1, inf], got {self.finite_value!r}")
            object.__setattr__(self, "finite_value", v)

    @property
    def is_inf(self) -> bool:
        return self.finite_value is None

    @property
    def value(self) -> float:
        if self.finite_value is None:
            raise StructuralError("infinite exponent has no finite value")
        return self.finite_value

    def conjugate(self) -> "Exponent":
        """The exponent p* with 1/p + 1/p* = 1."""
        if self.is_inf:
            return Exponent(1.0)
        if self.finite_value == 1.0:
            return INF
        return Exponent(self.finite_value / (self.finite_value - 1.0))

    def __repr__(self):
        return "Exponent(inf)" if self.is_inf else f"Exponent({self.finite_value:g})"

    def as_json(self):
        return "inf" if self.is_inf else self.finite_value


INF = Exponent(None)


def exponent(p) -> Exponent:
    """Coerce a number, the string ``"inf"``, or an Exponent into an Exponent."""
    if isinstance(p, Exponent):
        return p
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "oo"):
            return INF
        p = float(p)
    if p is None:
        return INF
    p = float(p)
    return INF if math.isinf(p) else Exponent(p)
