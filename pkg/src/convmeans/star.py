"""Star-function profiles on sampled circles.

For a real field ``u`` on ``|z| = r``::

    u*(r e^{i theta}) = sup_{|E| = 2 theta} int_E u(r e^{it}) dt

which equals the integral of the decreasing rearrangement of ``u`` over
``[0, 2 theta]``. On ``M`` equispaced samples each sample carries measure
``2 pi / M``; the supremum over unions of (fractional) sample cells is the
sorted prefix sum, linearly interpolated in the measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import RingSamples

__all__ = [
    "StarProfile",
    "StarVerdict",
    "PhiVerdict",
    "StarError",
    "DEFAULT_K",
    "MARGIN_FACTOR",
    "star_profile",
    "star_leq",
    "reflect_negate",
    "symmetric_decreasing_check",
    "phi_means_compare",
    "default_phi_family",
]

DEFAULT_K = 512
MARGIN_FACTOR = 10.0


class StarError(ValueError):
    pass


@dataclass(frozen=True)
class StarProfile:
    r: float
    thetas: np.ndarray
    values: np.ndarray
    circle_integral: float
    err_bound: float

    @property
    def K(self) -> int:
        return self.thetas.size - 1


def _prefix_profile(u: np.ndarray, thetas: np.ndarray) -> tuple[np.ndarray, float]:
    M = u.size
    dt = 2.0 * np.pi / M
    prefix = np.concatenate(([0.0], np.cumsum(np.sort(u)[::-1]) * dt))
    # measure 2 theta covers theta * M / pi sample cells
    x = thetas * M / np.pi
    return np.interp(x, np.arange(M + 1), prefix), float(prefix[-1])


def star_profile(u: RingSamples, K: int = DEFAULT_K) -> StarProfile:
    """Profile of ``u*`` at ``K + 1`` equispaced angles in ``[0, pi]``.

    ``err_bound`` is ``2 pi`` times the sample error plus the largest
    difference between the profiles built from all ``M`` samples and from
    every other sample.
    """
    if not u.is_real:
        raise StarError("star profiles need a real field")
    vals = u.values
    if not np.all(np.isfinite(vals)):
        raise StarError("non-finite samples")
    if K < 1:
        raise StarError("K must be positive")
    thetas = np.linspace(0.0, np.pi, K + 1)
    full, total = _prefix_profile(vals, thetas)
    coarse, _ = _prefix_profile(vals[::2], thetas)
    full[0] = 0.0
    err = float(np.max(np.abs(full - coarse))) + 2.0 * np.pi * u.err_bound
    return StarProfile(u.r, thetas, full, total, err)


@dataclass(frozen=True)
class StarVerdict:
    """Outcome of a star comparison ``u* <= v*``.

    ``holds`` is False only for a certified failure: ``gap`` exceeds
    ``margin + err``. ``within_tolerance`` marks holds that are not strict
    (``gap > -margin``).
    """

    holds: bool
    within_tolerance: bool
    theta: float
    gap: float
    err: float
    margin: float
    index: int
    neighbors: tuple = ()

    def to_json(self, r: float | None = None) -> dict:
        out = {"theta": self.theta, "gap": self.gap, "err": self.err + self.margin}
        if r is not None:
            out = {"r": r, **out}
        return out


def star_leq(u_star: StarProfile, v_star: StarProfile, margin: float | None = None) -> StarVerdict:
    """Compare two profiles on a shared angle grid.

    With ``margin=None`` the margin is ``MARGIN_FACTOR`` times the combined
    error bound, so discretization alone never produces a failure.
    """
    if u_star.thetas.shape != v_star.thetas.shape or not np.allclose(
        u_star.thetas, v_star.thetas, rtol=0, atol=1e-14
    ):
        raise StarError("profiles are on different angle grids")
    if abs(u_star.r - v_star.r) > 1e-14:
        raise StarError("profiles are on different circles")
    err = u_star.err_bound + v_star.err_bound
    if margin is None:
        margin = MARGIN_FACTOR * err
    gaps = u_star.values - v_star.values
    k = int(np.argmax(gaps))
    gap = float(gaps[k])
    neighbors = tuple(
        (float(u_star.thetas[j]), float(gaps[j]))
        for j in (k - 1, k + 1)
        if 0 <= j < gaps.size
    )
    holds = not (gap > margin + err)
    return StarVerdict(
        holds=holds,
        within_tolerance=holds and gap > -margin,
        theta=float(u_star.thetas[k]),
        gap=gap,
        err=err,
        margin=float(margin),
        index=k,
        neighbors=neighbors,
    )


def reflect_negate(u_star: StarProfile) -> StarProfile:
    """``(-u)*(theta) = -int u + u*(pi - theta)``."""
    mirrored = np.interp(np.pi - u_star.thetas, u_star.thetas, u_star.values)
    values = -u_star.circle_integral + mirrored
    values[0] = 0.0
    return StarProfile(
        u_star.r,
        u_star.thetas.copy(),
        values,
        -u_star.circle_integral,
        u_star.err_bound,
    )


def symmetric_decreasing_check(u: RingSamples, tol: float = 1e-9) -> bool:
    """Even in ``t`` and nonincreasing on ``[0, pi]``, both up to ``tol``."""
    vals = np.real(u.values)
    M = vals.size
    mirrored = np.roll(vals[::-1], 1)  # mirrored[j] = vals[-j mod M]
    if np.max(np.abs(vals - mirrored)) > tol:
        return False
    half = vals[: M // 2 + 1]
    return bool(np.all(np.diff(half) <= tol))


@dataclass(frozen=True)
class PhiVerdict:
    name: str
    lhs: float
    rhs: float
    tol: float
    holds: bool


def default_phi_family(lo: float, hi: float, n_hinges: int = 9):
    """``x -> exp(p x)`` for a few ``p`` and hinges ``max(x - c, 0)``."""
    family = []
    for p in (0.25, 0.5, 1.0, 2.0, 4.0):
        family.append((f"exp({p}x)", lambda x, p=p: np.exp(p * x)))
    for c in np.linspace(lo, hi, n_hinges):
        family.append((f"hinge({c:.6g})", lambda x, c=c: np.maximum(x - c, 0.0)))
    return family


def _circle_integral(phi, x):
    return float(np.mean(phi(x)) * 2.0 * np.pi)


def phi_means_compare(u: RingSamples, v: RingSamples, phi_family=None) -> list[PhiVerdict]:
    """Check ``int Phi(u) <= int Phi(v)`` for each convex nondecreasing ``Phi``.

    The tolerance is the ``M -> M/2`` quadrature difference on both sides
    plus the effect of shifting every sample by its error bound.
    """
    a = np.real(u.values)
    b = np.real(v.values)
    if phi_family is None:
        both = np.concatenate((a, b))
        phi_family = default_phi_family(float(both.min()), float(both.max()))
    out = []
    for name, phi in phi_family:
        lhs = _circle_integral(phi, a)
        rhs = _circle_integral(phi, b)
        tol = abs(lhs - _circle_integral(phi, a[::2])) + abs(rhs - _circle_integral(phi, b[::2]))
        if u.err_bound > 0:
            tol += _circle_integral(phi, a + u.err_bound) - lhs
        if v.err_bound > 0:
            tol += rhs - _circle_integral(phi, b - v.err_bound)
        if not math.isfinite(tol):
            tol = math.inf
        out.append(PhiVerdict(name, lhs, rhs, tol, lhs <= rhs + tol + 1e-12 * max(1.0, abs(rhs))))
    return out
