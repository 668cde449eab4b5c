"""Samples of series on circles ``|z| = r`` and integral means ``M_p(r, f)``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries

__all__ = [
    "RingSamples",
    "CircleError",
    "DEFAULT_M",
    "DEFAULT_R_GRID",
    "LOG_FLOOR",
    "sample_circle",
    "integral_mean",
    "integral_mean_err",
    "hardy_norm",
    "parseval_mean_sq",
]

DEFAULT_M = 4096
DEFAULT_R_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)
LOG_FLOOR = -1.0e3


class CircleError(ValueError):
    pass


def _is_pow2(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class RingSamples:
    """Values at ``t_j = 2 pi j / M`` on the circle of radius ``r``.

    ``err_bound`` is a uniform bound on ``|values[j] - true value|``.
    """

    r: float
    values: np.ndarray
    err_bound: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values)
        v = v.astype(np.complex128 if np.iscomplexobj(v) else np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if not (0.0 < self.r < 1.0):
            raise CircleError(f"radius {self.r} outside (0, 1)")
        if v.ndim != 1 or v.size < 8 or not _is_pow2(v.size):
            raise CircleError("sample count must be a power of two >= 8")
        if not (self.err_bound >= 0.0):
            raise CircleError("err_bound must be nonnegative")

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def t(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.M) / self.M

    def real(self) -> "RingSamples":
        return RingSamples(self.r, np.real(self.values).copy(), self.err_bound)

    def imag(self) -> "RingSamples":
        return RingSamples(self.r, np.imag(self.values).copy(), self.err_bound)

    def log_abs(self, floor: float = LOG_FLOOR) -> "RingSamples":
        """``log|f|`` floored at ``floor``.

        The sample error becomes ``delta / (min|f| - delta)``, infinite when
        the tail bound cannot exclude a zero on the circle.
        """
        mod = np.abs(self.values)
        with np.errstate(divide="ignore"):
            u = np.maximum(np.log(mod), floor)
        lo = float(mod.min()) - self.err_bound
        err = self.err_bound / lo if lo > 0 else math.inf
        if self.err_bound == 0.0:
            err = 0.0
        return RingSamples(self.r, u, err)

    def negate(self) -> "RingSamples":
        return RingSamples(self.r, -self.values, self.err_bound)

    def subsample(self) -> "RingSamples":
        """Every other sample: the same circle at ``M / 2`` points."""
        return RingSamples(self.r, self.values[::2].copy(), self.err_bound)


def sample_circle(f: TruncatedSeries, r: float, M: int = DEFAULT_M) -> RingSamples:
    """Evaluate ``f`` at ``r e^{i t_j}`` by a length-``M`` inverse FFT."""
    if not (0.0 < r < 1.0):
        raise CircleError(f"radius {r} outside (0, 1)")
    if not _is_pow2(M) or M < 8:
        raise CircleError("M must be a power of two >= 8")
    if M < 2 * len(f):
        raise CircleError(f"M={M} aliases a series with {len(f)} coefficients")
    a = np.zeros(M, dtype=np.complex128)
    a[: len(f)] = f.coeffs * r ** np.arange(len(f))
    values = np.fft.ifft(a) * M
    return RingSamples(r, values, f.tail_bound(r))


def _power_mean(mod: np.ndarray, p: float) -> float:
    with np.errstate(divide="ignore", over="ignore"):
        return float(np.mean(mod**p) ** (1.0 / p))


def integral_mean_err(s: RingSamples, p: float) -> tuple[float, float]:
    """``(M_p, err)`` by the periodic trapezoid rule.

    ``p = math.inf`` gives the grid maximum of ``|values|``. The error
    combines the ``M -> M/2`` difference of the rule with the spread of the
    mean when every sample is moved by ``err_bound``.
    """
    if p == 0:
        raise CircleError("p = 0 is not an integral mean")
    mod = np.abs(s.values)
    d = s.err_bound
    if math.isinf(p):
        if p < 0:
            raise CircleError("p = -inf is not supported")
        value = float(mod.max())
        # gap between grid maximum and true maximum, estimated by the largest
        # neighbour jump of |f|
        jump = float(np.max(np.abs(np.diff(np.append(mod, mod[0])))))
        return value, d + jump
    if p < 0 and mod.min() <= 0.0:
        raise CircleError("negative p needs a zero-free circle")
    value = _power_mean(mod, p)
    half = _power_mean(mod[::2], p)
    err = abs(value - half)
    if d > 0:
        hi = mod + d
        lo = np.maximum(mod - d, 0.0)
        if p < 0:
            hi, lo = lo, hi
        up = _power_mean(hi, p)
        down = _power_mean(lo, p)
        spread = max(abs(up - value), abs(value - down))
        if not math.isfinite(spread):
            spread = math.inf
        err += spread
    return value, err


def integral_mean(s: RingSamples, p: float) -> float:
    """``M_p(r, f) = (mean |f(r e^{it})|^p)^{1/p}``; ``p = inf`` is the grid maximum."""
    return integral_mean_err(s, p)[0]


def parseval_mean_sq(f: TruncatedSeries, r: float) -> float:
    """``sum |a_n|^2 r^{2n}``, the coefficient-side value of ``M_2(r, f)**2``."""
    n = np.arange(len(f))
    return float(np.sum(np.abs(f.coeffs) ** 2 * r ** (2 * n)))


def hardy_norm(f: TruncatedSeries, p: float, r_grid=DEFAULT_R_GRID, M: int = DEFAULT_M) -> float:
    """Largest ``M_p(r, f)`` over ``r_grid``: a lower bound for ``||f||_{H^p}``."""
    if p <= 0:
        raise CircleError("Hardy norms need p > 0")
    radii = list(r_grid)
    if not radii:
        raise CircleError("empty radius grid")
    return max(integral_mean(sample_circle(f, r, M), p) for r in radii)
