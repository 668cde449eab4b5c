"""Run configuration shared by the theorem runners and the CLI."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .circle import DEFAULT_M, DEFAULT_R_GRID
from .star import DEFAULT_K, MARGIN_FACTOR

OUT_ENV = "CONVMEANS_OUT"


@dataclass(frozen=True)
class RunConfig:
    """Numerical knobs for a run.

    ``n_coeffs`` defaults to ``fft_size // 2 - 1``, the longest series the
    sampler accepts without aliasing; shorter series leave visible
    truncation tails at ``r = 0.99``.
    """

    n_coeffs: int | None = None
    fft_size: int = DEFAULT_M
    theta_points: int = DEFAULT_K
    r_grid: tuple = DEFAULT_R_GRID
    seed: int = 0
    margin_factor: float = MARGIN_FACTOR
    thm_trials: int = 200
    steiner_trials: int = 100
    q1_cap: int = 5000
    out_dir: str = "convmeans-out"

    def __post_init__(self):
        if self.n_coeffs is None:
            object.__setattr__(self, "n_coeffs", self.fft_size // 2 - 1)
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        m = self.fft_size
        if m < 8 or m & (m - 1):
            raise ValueError("fft_size must be a power of two >= 8")
        if m < 2 * (self.n_coeffs + 1):
            raise ValueError("fft_size must be at least 2 * (n_coeffs + 1)")
        if self.theta_points < 16:
            raise ValueError("theta_points must be at least 16")
        if not self.r_grid or any(not (0.0 < r < 1.0) for r in self.r_grid):
            raise ValueError("all radii must lie in (0, 1)")

    @property
    def N(self) -> int:
        return self.n_coeffs

    @property
    def M(self) -> int:
        return self.fft_size

    @property
    def K(self) -> int:
        return self.theta_points

    def output_path(self) -> Path:
        return Path(os.environ.get(OUT_ENV) or self.out_dir)

    def to_json(self) -> dict:
        d = asdict(self)
        d["r_grid"] = list(self.r_grid)
        return d

    @classmethod
    def from_json(cls, obj: dict, **overrides) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged = {**obj, **{k: v for k, v in overrides.items() if v is not None}}
        return cls(**merged)

    @classmethod
    def load(cls, path, **overrides) -> "RunConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh), **overrides)

