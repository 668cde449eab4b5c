"""Atomic measures on the unit circle and the convolvers they represent.

A measure ``mu`` defines ``F(z) = int dmu(xi) / (1 - z xi)`` whose Taylor
coefficients are the moments ``int xi^n dmu``. Convolving with ``F`` is
averaging rotations: ``(f * F)(z) = int f(xi z) dmu(xi)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circle import RingSamples, sample_circle
from .series import GrowthClass, TruncatedSeries

__all__ = [
    "UnitCircleMeasure",
    "cauchy_transform",
    "convolve_via_measure",
    "is_bound_preserving",
    "is_convexity_preserving",
    "random_measure",
    "one_minus_cos_measure",
    "dirac",
]

_MERGE_TOL = 1e-13
_TV_TOL = 1e-12


def _wrap(phi):
    return (np.asarray(phi, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class UnitCircleMeasure:
    """Atoms ``w_j`` at angles ``phi_j`` in ``[-pi, pi)``, sorted and merged."""

    angles: np.ndarray
    weights: np.ndarray
    tag: str | None = None

    def __post_init__(self):
        phi = _wrap(np.atleast_1d(self.angles))
        w = np.atleast_1d(np.asarray(self.weights, dtype=np.complex128))
        if phi.shape != w.shape:
            raise ValueError("angles and weights differ in length")
        order = np.argsort(phi, kind="stable")
        phi, w = phi[order], w[order]
        keep_phi, keep_w = [], []
        for a, b in zip(phi, w):
            if keep_phi and abs(a - keep_phi[-1]) <= _MERGE_TOL:
                keep_w[-1] += b
            else:
                keep_phi.append(float(a))
                keep_w.append(complex(b))
        phi = np.array(keep_phi, dtype=float)
        w = np.array(keep_w, dtype=np.complex128)
        phi.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "angles", phi)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "_tv", float(np.sum(np.abs(w))))

    @property
    def total_variation(self) -> float:
        return self._tv

    def __len__(self):
        return self.angles.size

    def to_json(self) -> dict:
        out = {
            "atoms": [
                [float(p), float(w.real), float(w.imag)]
                for p, w in zip(self.angles, self.weights)
            ]
        }
        if self.tag is not None:
            out["tag"] = self.tag
        return out

    @classmethod
    def from_json(cls, obj) -> "UnitCircleMeasure":
        if isinstance(obj, str):
            obj = json.loads(obj)
        atoms = obj["atoms"]
        phi = [a[0] for a in atoms]
        w = [complex(a[1], a[2] if len(a) > 2 else 0.0) for a in atoms]
        return cls(phi, w, obj.get("tag"))


def dirac(angle: float = 0.0, weight: complex = 1.0) -> UnitCircleMeasure:
    return UnitCircleMeasure([angle], [weight], tag=f"dirac({angle:g})")


def one_minus_cos_measure(nodes: int = 1024) -> UnitCircleMeasure:
    """Trapezoidal discretization of ``(1 - cos t) dt / 2 pi`` at ``nodes`` points.

    Its moments are exactly ``1, -1/2, 0, ...`` up to order ``nodes - 2``;
    from order ``nodes - 1`` on they alias back.
    """
    t = -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes
    w = (1.0 - np.cos(t)) / nodes
    return UnitCircleMeasure(t, w, tag=f"one_minus_cos/{nodes}")


def cauchy_transform(mu: UnitCircleMeasure, N: int) -> TruncatedSeries:
    """Series of ``int dmu / (1 - z xi)``: coefficient ``n`` is ``sum_j w_j e^{i n phi_j}``."""
    coeffs = np.empty(N + 1, dtype=np.complex128)
    block = max(1, 2**20 // max(len(mu), 1))
    for start in range(0, N + 1, block):
        n = np.arange(start, min(N + 1, start + block))
        coeffs[start : start + n.size] = np.exp(1j * np.outer(n, mu.angles)) @ mu.weights
    # moments are bounded by the total variation, up to rounding
    growth = GrowthClass.bounded(mu.total_variation * (1.0 + 1e-12) + 1e-15)
    return TruncatedSeries(coeffs, growth, mu.tag or "")


def convolve_via_measure(f: TruncatedSeries, mu: UnitCircleMeasure, r: float, M: int) -> RingSamples:
    """Samples of ``f * F`` on ``|z| = r`` as ``sum_j w_j f(r e^{i(t + phi_j)})``.

    Atoms on the sample grid reuse rotated samples of ``f``; others get a
    phase-shifted synthesis.
    """
    base = sample_circle(f, r, M)
    out = np.zeros(M, dtype=np.complex128)
    n = np.arange(len(f))
    for phi, w in zip(mu.angles, mu.weights):
        shift = phi * M / (2.0 * np.pi)
        k = round(shift)
        if abs(shift - k) < 1e-9:
            out += w * np.roll(base.values, -k)
        else:
            shifted = TruncatedSeries(f.coeffs * np.exp(1j * n * phi), f.growth)
            out += w * sample_circle(shifted, r, M).values
    return RingSamples(r, out, mu.total_variation * base.err_bound)


def is_bound_preserving(mu: UnitCircleMeasure) -> bool:
    return mu.total_variation <= 1.0 + _TV_TOL


def is_convexity_preserving(mu: UnitCircleMeasure) -> bool:
    """Probability measure: nonnegative real weights summing to one."""
    w = mu.weights
    if np.any(np.abs(w.imag) > _TV_TOL) or np.any(w.real < -_TV_TOL):
        return False
    return is_bound_preserving(mu) and abs(float(np.sum(w.real)) - 1.0) <= _TV_TOL


def random_measure(seed, kind: str = "probability", max_atoms: int = 8) -> UnitCircleMeasure:
    """Deterministic random measure for property tests.

    ``kind="probability"``: Dirichlet weights. ``kind="bound_preserving"``:
    complex weights of random phase whose total variation is uniform in
    ``(0, 1]``.
    """
    if max_atoms < 1:
        raise ValueError("max_atoms must be at least 1")
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, max_atoms + 1))
    phi = rng.uniform(-np.pi, np.pi, size=m)
    mags = rng.dirichlet(np.ones(m))
    if kind == "probability":
        w = mags.astype(np.complex128)
    elif kind == "bound_preserving":
        tv = 1.0 - rng.uniform(0.0, 1.0)  # in (0, 1]
        w = tv * mags * np.exp(1j * rng.uniform(-np.pi, np.pi, size=m))
    else:
        raise ValueError(f"unknown measure kind {kind!r}")
    mu = UnitCircleMeasure(phi, w, tag=f"random/{kind}/{seed}")
    if kind == "probability" and not math.isclose(mu.weights.real.sum(), 1.0, abs_tol=1e-14):
        mu = UnitCircleMeasure(mu.angles, mu.weights / mu.weights.real.sum(), mu.tag)
    return mu
