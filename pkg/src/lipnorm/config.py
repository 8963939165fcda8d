"""Run configuration: seeds, restart counts, capacity caps."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, asdict

VERSION = "0.1.0"

DEFAULT_SEED = 0xC0FFEE


@dataclass(frozen=True)
class Config:
    seed: int = DEFAULT_SEED
    restarts: int = 64
    # hard caps for enumeration-based exact paths
    sign_enum_cap: int = 16        # dual-ball vertex enumeration dimension cap
    lip_vertex_cap: int = 10       # max |X| for Lipschitz-ball vertex enumeration
    sequence_length_factor: int = 4  # witness sequences capped at this * dim
    cutting_plane_rounds: int = 200
    cutting_plane_stall: int = 5
    cutting_plane_rtol: float = 1e-7
    threads: int = 1
    tolerances: dict = field(default_factory=dict)

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["version"] = VERSION
        return d


def config_from_env(base: Config | None = None) -> Config:
    """Apply the LIPNORM_SEED environment override on top of ``base``."""
    cfg = base or Config()
    raw = os.environ.get("LIPNORM_SEED")
    if raw is not None:
        cfg = Config(**{**asdict(cfg), "seed": int(raw)})
    return cfg


DEFAULT_CONFIG = Config()
