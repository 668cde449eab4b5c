"""Univalent functions from radial Loewner evolution with piecewise-constant driving.

Conventions (pinned by the Koebe test): the Loewner chain ``f(z, t) = e^t z + ...``
satisfies ``df/dt = z f'(z, t) (1 + kappa z) / (1 - kappa z)`` and its
transition maps ``w(z, t)`` (``f(z, 0) = f(w(z, t), t)``) solve
``dw/dt = -w (1 + kappa w) / (1 - kappa w)``, ``w(z, 0) = z``. Constant
driving ``kappa`` gives ``f(z, t) = e^t z / (1 + kappa z)^2``.

We integrate the rescaled transition ``v = e^t w``, for which::

    dv/dt = -2 v q / (1 - q),    q = kappa e^{-t} v,

coefficient by coefficient with classical RK4. The Jacobian of this system is
strictly lower triangular, so the truncated system is not stiff at any order.
Past the last breakpoint ``T`` the driving is constant and the chain is the
rotated Koebe function, giving ``H = v / (1 + kappa_tail e^{-T} v)^2``.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.optimize import minimize

from .series import (
    GrowthClass,
    SeriesError,
    TruncatedSeries,
    divide_by_z,
    odd_sqrt_transform,
    reciprocal,
)

__all__ = [
    "Driving",
    "LoewnerError",
    "FeketeSzegoResult",
    "loewner_coefficients",
    "fekete_szego_search",
    "univalence_sanity",
    "UnivalenceVerdict",
    "a2_closed_form",
    "a3_closed_form",
    "load_known_driving",
    "odd_function_from_driving",
    "default_step",
    "slit_map_values",
    "odd_quotient_coefficients",
    "MAX_ORDER",
    "MAX_STEP",
    "MAX_T",
]

log = logging.getLogger(__name__)

MAX_ORDER = 64
MAX_STEP = 1e-2
MAX_T = 50.0
CERTIFY_TOL = 1e-8
A5_THRESHOLD = 1.001


class LoewnerError(RuntimeError):
    pass


@dataclass(frozen=True)
class Driving:
    """``kappa(t) = exp(i angles[j])`` on ``[breakpoints[j], breakpoints[j+1])``."""

    breakpoints: tuple
    angles: tuple
    tail_angle: float

    def __post_init__(self):
        b = tuple(float(x) for x in self.breakpoints)
        a = tuple(float(x) for x in self.angles)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "tail_angle", float(self.tail_angle))
        if len(b) != len(a) + 1:
            raise ValueError("need one more breakpoint than segment angles")
        if b[0] != 0.0:
            raise ValueError("driving starts at t = 0")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if b[-1] > MAX_T:
            raise ValueError(f"final breakpoint exceeds T = {MAX_T}")

    @classmethod
    def constant(cls, angle: float = 0.0) -> "Driving":
        return cls((0.0,), (), angle)

    @property
    def T(self) -> float:
        return self.breakpoints[-1]

    def rotated(self, beta: float) -> "Driving":
        return Driving(
            self.breakpoints, tuple(a + beta for a in self.angles), self.tail_angle + beta
        )

    def to_json(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "angles": list(self.angles),
            "tail_angle": self.tail_angle,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Driving":
        return cls(tuple(obj["breakpoints"]), tuple(obj["angles"]), obj["tail_angle"])


def _mul(a, b, n):
    return np.convolve(a, b)[:n]


def _geometric(q, n):
    """``q + q^2 + ...`` truncated to ``n`` terms, for ``q`` without constant term."""
    total = q.copy()
    power = q
    span = 1
    while span < n - 1:
        # S_{2m} = S_m + q^m S_m, q^{2m} = (q^m)^2
        total = total + _mul(power, total, n)
        power = _mul(power, power, n)
        span *= 2
    return total


def _rhs(t, v, kappa, n):
    return -2.0 * _mul(v, _geometric(kappa * math.exp(-t) * v, n), n)


def default_step(N: int) -> float:
    """RK4 step for order ``N``: the ``n``-th coefficient is forced on a ``1/n`` time scale."""
    return min(MAX_STEP, 0.016 / max(N, 1))


def _integrate(d: Driving, N: int, step: float) -> np.ndarray:
    n = N + 1
    v = np.zeros(n, dtype=np.complex128)
    if n > 1:
        v[1] = 1.0
    for j, alpha in enumerate(d.angles):
        t0, t1 = d.breakpoints[j], d.breakpoints[j + 1]
        kappa = complex(math.cos(alpha), math.sin(alpha))
        steps = max(1, math.ceil((t1 - t0) / step - 1e-9))
        h = (t1 - t0) / steps
        for i in range(steps):
            t = t0 + i * h
            k1 = _rhs(t, v, kappa, n)
            k2 = _rhs(t + h / 2, v + h / 2 * k1, kappa, n)
            k3 = _rhs(t + h / 2, v + h / 2 * k2, kappa, n)
            k4 = _rhs(t + h, v + h * k3, kappa, n)
            v = v + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    # tail: H = v / (1 + c v)^2 with c = kappa_tail e^{-T}
    c = complex(math.cos(d.tail_angle), math.sin(d.tail_angle)) * math.exp(-d.T)
    denom = c * v
    denom[0] += 1.0
    g = reciprocal(denom)
    return _mul(v, _mul(g, g, n), n)


def loewner_coefficients(
    d: Driving, N: int = MAX_ORDER, step: float | None = None, certify: bool = True
) -> TruncatedSeries:
    """Coefficients ``0, 1, A_2, ..., A_N`` of the class-S function driven by ``d``.

    With ``certify`` the integration is repeated at ``step / 2`` and the
    finer result is returned only if every coefficient agrees within 1e-8.
    The default step is :func:`default_step`. The growth class is
    ``|A_n| <= n``, valid for every function in S.
    """
    if N > MAX_ORDER:
        raise LoewnerError(f"N={N} exceeds the cap {MAX_ORDER}")
    if N < 1:
        raise LoewnerError("N must be at least 1")
    if step is None:
        step = default_step(N)
    if step > MAX_STEP:
        raise LoewnerError(f"step {step} exceeds {MAX_STEP}")
    A = _integrate(d, N, step)
    if certify:
        fine = _integrate(d, N, step / 2.0)
        diff = float(np.max(np.abs(fine - A)))
        if diff >= CERTIFY_TOL:
            raise LoewnerError(f"step-halving disagreement {diff:.3g} >= {CERTIFY_TOL}")
        A = fine
    A[0] = 0.0
    A[1] = 1.0
    return TruncatedSeries(A, GrowthClass.polynomial(1, 1.0), "loewner")


def _segments(d: Driving):
    kap = [complex(math.cos(a), math.sin(a)) for a in d.angles]
    kap.append(complex(math.cos(d.tail_angle), math.sin(d.tail_angle)))
    lo = list(d.breakpoints)
    hi = list(d.breakpoints[1:]) + [math.inf]
    return zip(kap, lo, hi)


def a2_closed_form(d: Driving) -> complex:
    """``A_2 = -2 int_0^inf e^{-t} kappa(t) dt`` for piecewise-constant ``kappa``."""
    return -2.0 * sum(k * (math.exp(-a) - math.exp(-b)) for k, a, b in _segments(d))


def a3_closed_form(d: Driving) -> complex:
    """``A_3 = -2 int e^{-2t} kappa^2 dt + 4 (int e^{-t} kappa dt)^2``."""
    x = sum(k * (math.exp(-a) - math.exp(-b)) for k, a, b in _segments(d))
    y = sum(k * k * (math.exp(-2 * a) - math.exp(-2 * b)) / 2.0 for k, a, b in _segments(d))
    return -2.0 * y + 4.0 * x * x


@dataclass(frozen=True)
class UnivalenceVerdict:
    passed: bool
    normalized: bool
    simple_curve: bool
    winding_ok: bool
    no_critical_point: bool

    def __bool__(self):
        return self.passed


def _winding(values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Winding numbers of the closed polygon ``values`` around each point."""
    out = np.empty(points.size)
    for i, w in enumerate(points):
        d = values - w
        ang = np.angle(np.append(d[1:], d[:1]) / d)
        out[i] = ang.sum() / (2.0 * np.pi)
    return out


def univalence_sanity(H: TruncatedSeries, r: float = 0.8, M: int = 1024) -> UnivalenceVerdict:
    """Necessary-condition screen for membership of ``H`` in S on ``|z| <= r``.

    Checks the normalization, that the image of ``|z| = r`` is a simple
    closed polygon, that it winds once around interior grid points, and that
    ``H'`` has no zero inside (argument principle).
    """
    from shapely.geometry import LinearRing

    if r > 0.95:
        raise ValueError("univalence screen needs r <= 0.95")
    a = H.coeffs
    normalized = bool(abs(a[0]) < 1e-10 and len(a) > 1 and abs(a[1] - 1.0) < 1e-10)
    z = r * np.exp(2j * np.pi * np.arange(M) / M)
    vals = H(z)
    ring = LinearRing(np.column_stack([vals.real, vals.imag]))
    simple = bool(ring.is_valid and ring.is_simple)

    # interior points: a coarse grid inside the bounding box
    xs = np.linspace(vals.real.min(), vals.real.max(), 17)[1:-1]
    ys = np.linspace(vals.imag.min(), vals.imag.max(), 17)[1:-1]
    grid = (xs[:, None] + 1j * ys[None, :]).ravel()
    dist = np.min(np.abs(grid[:, None] - vals[None, :]), axis=1)
    step = float(np.max(np.abs(np.diff(np.append(vals, vals[:1])))))
    grid = grid[dist > 2.0 * step]
    wind = np.rint(_winding(vals, np.append(grid, 0.0)))
    winding_ok = bool(np.all((wind == 0) | (wind == 1)) and wind[-1] == 1)

    dvals = H.derivative()(z)
    crit = int(np.rint(_winding(dvals, np.array([0.0]))[0])) if np.all(dvals != 0) else 1
    no_crit = crit == 0
    return UnivalenceVerdict(
        passed=normalized and simple and winding_ok and no_crit,
        normalized=normalized,
        simple_curve=simple,
        winding_ok=winding_ok,
        no_critical_point=no_crit,
    )


@dataclass
class FeketeSzegoResult:
    driving: Driving
    H: TruncatedSeries
    h: TruncatedSeries
    h1: TruncatedSeries
    a5: complex
    success: bool
    evaluations: int
    history: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "driving": self.driving.to_json(),
            "a5": [self.a5.real, self.a5.imag],
            "abs_a5": abs(self.a5),
            "success": self.success,
            "evaluations": self.evaluations,
            "H": self.H.to_json(),
        }


def _decode(x: np.ndarray, m: int) -> Driving:
    durations = np.exp(np.clip(x[:m], -12.0, 2.5))
    breaks = np.concatenate(([0.0], np.cumsum(durations)))
    return Driving(tuple(breaks), tuple(x[m : 2 * m]), float(x[2 * m]))


def _a5_of(d: Driving, step: float | None) -> complex:
    H = loewner_coefficients(d, N=3, step=step, certify=False)
    return complex(odd_sqrt_transform(H).coeffs[5])


def fekete_szego_search(
    m_segments: int = 3,
    budget: int = 2000,
    seed: int = 0,
    n_coeffs: int = MAX_ORDER,
    step: float | None = None,
    starts: int = 4,
) -> FeketeSzegoResult:
    """Search piecewise-constant drivings for an odd univalent ``h`` with large ``|a_5|``.

    Multi-start Nelder-Mead on (log segment lengths, segment angles, tail
    angle), starting from constant driving plus seeded perturbations. The
    objective is ``|a_5|`` of ``sqrt(H(z^2))``. ``history`` records the
    best-so-far objective after every evaluation.
    """
    if m_segments < 2:
        raise ValueError("m_segments must be at least 2")
    rng = np.random.default_rng(seed)
    m = m_segments
    base = np.concatenate((np.full(m, math.log(0.5)), np.zeros(m), [0.0]))
    history: list[float] = []
    best = {"val": -math.inf, "x": base.copy()}
    evals = 0

    def objective(x):
        nonlocal evals
        if evals >= budget:
            return 0.0
        evals += 1
        val = abs(_a5_of(_decode(x, m), step))
        if val > best["val"]:
            best["val"], best["x"] = val, x.copy()
        history.append(best["val"])
        return -val

    per_start = max(1, budget // starts)
    for s in range(starts):
        if evals >= budget:
            break
        x0 = base if s == 0 else base + rng.normal(scale=0.8, size=base.size)
        minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxfev": per_start, "xatol": 1e-10, "fatol": 1e-13, "adaptive": True},
        )
        log.info("start %d: best |a5| = %.6f after %d evaluations", s, best["val"], evals)

    d = _decode(best["x"], m)
    H = loewner_coefficients(d, N=n_coeffs, step=step)
    h = odd_sqrt_transform(H)
    h1 = divide_by_z(h)
    a5 = complex(h.coeffs[5])
    ok = abs(a5) > A5_THRESHOLD and bool(univalence_sanity(H))
    return FeketeSzegoResult(d, H, h, h1, a5, ok, evals, history)


def _koebe_inverse(y):
    """Inverse of ``K(z) = z / (1 + z)^2`` on ``C \\ [1/4, inf)``."""
    s = np.sqrt(1.0 - 4.0 * y)
    return (1.0 - s) / (1.0 + s)


def slit_map_values(d: Driving, z) -> np.ndarray:
    """``H(z)`` in closed form, composing exact per-segment transition maps.

    For constant ``kappa`` on a segment of length ``D`` the transition is
    ``w = conj(kappa) K^{-1}(e^{-D} K(kappa z))``; past ``T`` the chain is
    ``e^t z / (1 + kappa z)^2``. Independent of the RK4 coefficient route.
    """
    w = np.asarray(z, dtype=np.complex128)
    for j, alpha in enumerate(d.angles):
        k = complex(math.cos(alpha), math.sin(alpha))
        span = d.breakpoints[j + 1] - d.breakpoints[j]
        kz = k * w
        w = _koebe_inverse(math.exp(-span) * kz / (1.0 + kz) ** 2) / k
    kt = complex(math.cos(d.tail_angle), math.sin(d.tail_angle))
    return math.exp(d.T) * w / (1.0 + kt * w) ** 2


def odd_quotient_coefficients(
    d: Driving, order: int = 2046, rho: float = 0.9995, M: int = 2**16
) -> TruncatedSeries:
    """Coefficients of ``h1(z) = sqrt(H(z^2)) / z`` to degree ``order``.

    ``h1`` is sampled on ``|z| = rho`` through :func:`slit_map_values`; the
    square root follows the branch with ``h1(0) = 1`` (``H(z)/z`` is zero-free,
    so the unwrapped argument has mean zero). Coefficients come from one FFT.
    The growth class is bounded by the largest computed coefficient.
    """
    z = rho * np.exp(2j * np.pi * np.arange(M) / M)
    g = slit_map_values(d, z * z) / (z * z)
    phase = np.unwrap(np.angle(g))
    phase -= 2.0 * np.pi * np.round(phase.mean() / (2.0 * np.pi))
    vals = np.sqrt(np.abs(g)) * np.exp(0.5j * phase)
    c = np.fft.fft(vals) / M
    c = c[: order + 1] / rho ** np.arange(order + 1)
    c[1::2] = 0.0  # h1 is even
    return TruncatedSeries(c, GrowthClass.bounded(float(np.max(np.abs(c)))), "h1")


def load_known_driving() -> Driving:
    """The shipped driving found by :func:`fekete_szego_search` with default settings."""
    text = resources.files("convmeans.data").joinpath("known_driving.json").read_text()
    return Driving.from_json(json.loads(text)["driving"])


def odd_function_from_driving(d: Driving, N: int = MAX_ORDER, step: float | None = None):
    """``(H, h, h1)`` for a driving: Loewner output, odd square root, and ``h / z``."""
    H = loewner_coefficients(d, N=N, step=step)
    h = odd_sqrt_transform(H)
    try:
        h1 = divide_by_z(h)
    except SeriesError as exc:  # pragma: no cover - h(0) = 0 by construction
        raise LoewnerError(str(exc)) from exc
    return H, h, h1
