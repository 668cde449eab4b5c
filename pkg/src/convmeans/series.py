"""Truncated Taylor series on the unit disc and their Hadamard algebra.

A :class:`TruncatedSeries` stores the first ``N + 1`` coefficients of an
analytic function together with a :class:`GrowthClass`, an envelope
``|a_n| <= C (n + 1)**d * rho**n`` that is used to bound the discarded tail
whenever the series is evaluated at a radius ``r < 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GrowthClass",
    "TruncatedSeries",
    "SeriesError",
    "hadamard",
    "catalog",
    "CATALOG_NAMES",
    "odd_sqrt_transform",
    "divide_by_z",
    "iterate_convolution",
    "formal_sqrt",
    "reciprocal",
]

_CHECK_SLACK = 1e-9


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class GrowthClass:
    """Coefficient envelope ``C * (n + 1)**degree * rho**n``.

    ``bounded`` is ``degree=0, rho=1``; ``polynomial(d)`` is ``rho=1``;
    ``geometric(rho)`` is ``degree=0``. ``finite=True`` marks a polynomial
    whose coefficients beyond the stored ones are exactly zero.
    """

    const: float = 1.0
    degree: float = 0.0
    rho: float = 1.0
    finite: bool = False

    @classmethod
    def bounded(cls, const=1.0):
        return cls(const=float(const))

    @classmethod
    def polynomial(cls, degree, const=1.0):
        return cls(const=float(const), degree=float(degree))

    @classmethod
    def geometric(cls, rho, const=1.0):
        return cls(const=float(const), rho=float(rho))

    @classmethod
    def exact(cls):
        return cls(const=0.0, finite=True)

    @property
    def kind(self) -> str:
        if self.finite:
            return "finite"
        if self.degree == 0 and self.rho == 1:
            return "bounded"
        if self.rho == 1:
            return "polynomial"
        if self.degree == 0:
            return "geometric"
        return "mixed"

    def envelope(self, n):
        n = np.asarray(n, dtype=float)
        return self.const * (n + 1.0) ** self.degree * self.rho**n

    def product(self, other: "GrowthClass") -> "GrowthClass":
        if self.finite or other.finite:
            return GrowthClass.exact()
        return GrowthClass(
            const=self.const * other.const,
            degree=self.degree + other.degree,
            rho=self.rho * other.rho,
        )

    def power(self, n: int) -> "GrowthClass":
        if self.finite:
            return GrowthClass.exact()
        return GrowthClass(
            const=self.const**n, degree=self.degree * n, rho=self.rho**n
        )

    def tail_bound(self, order: int, r: float) -> float:
        """Bound on ``sum_{n > order} C (n+1)^d rho^n r^n``."""
        if self.finite or self.const == 0.0:
            return 0.0
        q = self.rho * r
        if q >= 1.0:
            return math.inf
        if q == 0.0:
            return 0.0
        total = 0.0
        start = order + 1
        chunk = 4096
        while True:
            n = np.arange(start, start + chunk, dtype=float)
            logs = self.degree * np.log1p(n) + n * math.log(q)
            terms = np.exp(logs)
            total += float(terms.sum())
            last = n[-1]
            # term ratio is decreasing in n, so the remainder is geometric-bounded
            ratio = ((last + 2.0) / (last + 1.0)) ** self.degree * q
            if ratio < 1.0:
                rest = float(terms[-1]) * ratio / (1.0 - ratio)
                if rest <= 1e-17 * max(total, 1e-300) or rest < 1e-300:
                    total += rest
                    break
            start += chunk
            if start > 10**8:
                return math.inf
        return self.const * total

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "const": self.const,
            "degree": self.degree,
            "rho": self.rho,
            "finite": self.finite,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GrowthClass":
        return cls(
            const=float(obj.get("const", 1.0)),
            degree=float(obj.get("degree", 0.0)),
            rho=float(obj.get("rho", 1.0)),
            finite=bool(obj.get("finite", False)),
        )


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``a_0 .. a_N`` of an analytic function on the disc."""

    coeffs: np.ndarray
    growth: GrowthClass = field(default_factory=GrowthClass.bounded)
    name: str = ""

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=np.complex128).ravel()
        if a.size < 1:
            raise SeriesError("a truncated series needs at least one coefficient")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        if not self.growth.finite:
            env = self.growth.envelope(np.arange(a.size))
            excess = np.abs(a) - env
            tol = _CHECK_SLACK * np.maximum(1.0, env)
            if np.any(excess > tol):
                k = int(np.argmax(excess - tol))
                raise SeriesError(
                    f"coefficient {k} (|a|={abs(a[k]):.6g}) exceeds the "
                    f"{self.growth.kind} envelope {env[k]:.6g}"
                )

    @classmethod
    def from_coeffs(cls, coeffs, growth=None, name=""):
        """Build a series; without ``growth`` the coefficients are taken as exact."""
        if growth is None:
            growth = GrowthClass.exact()
        return cls(coeffs, growth, name)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __call__(self, z):
        """Evaluate the stored polynomial part at ``z`` (Horner)."""
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            out = out * z + a
        return out

    def tail_bound(self, r: float) -> float:
        return self.growth.tail_bound(self.order, r)

    def truncate(self, order: int) -> "TruncatedSeries":
        growth = self.growth
        if growth.finite and np.any(self.coeffs[order + 1:] != 0):
            growth = _measured_growth(self.coeffs)
        return TruncatedSeries(self.coeffs[: order + 1].copy(), growth, self.name)

    def derivative(self) -> "TruncatedSeries":
        n = np.arange(1, self.coeffs.size)
        c = self.coeffs[1:] * n if self.coeffs.size > 1 else np.zeros(1)
        g = self.growth
        if g.finite:
            growth = GrowthClass.exact()
        else:
            # (n+1)(n+2)^d rho^(n+1) <= 2^d rho (n+1)^(d+1) rho^n
            growth = GrowthClass(
                const=g.const * 2.0**g.degree * g.rho,
                degree=g.degree + 1.0,
                rho=g.rho,
            )
        return TruncatedSeries(c, growth, self.name + "'" if self.name else "")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs],
            "growth": self.growth.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "TruncatedSeries":
        if isinstance(obj, list):
            obj = {"coeffs": obj}
        coeffs = [complex(re, im) for re, im in obj["coeffs"]]
        growth = obj.get("growth")
        growth = GrowthClass.from_json(growth) if growth else GrowthClass.exact()
        return cls(coeffs, growth, obj.get("name", ""))


def _exact_below(f: TruncatedSeries, n: int) -> bool:
    """True when ``f`` is a polynomial whose nonzero coefficients all sit below ``n``."""
    if not f.growth.finite:
        return False
    nz = np.flatnonzero(f.coeffs)
    return nz.size == 0 or nz[-1] < n


def _cmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Complex product from real operations, so it is exactly commutative."""
    re = a.real * b.real - a.imag * b.imag
    im = a.real * b.imag + a.imag * b.real
    return re + 1j * im


def hadamard(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Coefficient-wise product; the result keeps the shorter length."""
    n = min(len(f), len(g))
    if _exact_below(f, n) or _exact_below(g, n):
        growth = GrowthClass.exact()
    elif f.growth.finite or g.growth.finite:
        fin, other = (f, g) if f.growth.finite else (g, f)
        growth = other.growth.product(_measured_growth(fin.coeffs))
    else:
        growth = f.growth.product(g.growth)
    name = f"{f.name}*{g.name}" if f.name and g.name else ""
    return TruncatedSeries(_cmul(f.coeffs[:n], g.coeffs[:n]), growth, name)


def iterate_convolution(h1: TruncatedSeries, n: int) -> TruncatedSeries:
    """``h1 * h1 * ... * h1`` (``n`` factors), i.e. coefficient-wise ``n``-th power."""
    if n < 1:
        raise SeriesError("n must be a positive integer")
    name = f"{h1.name}^*{n}" if h1.name else ""
    return TruncatedSeries(h1.coeffs**n, h1.growth.power(n), name)


def _finite(c, N):
    a = np.zeros(N + 1, dtype=np.complex128)
    m = min(len(c), N + 1)
    a[:m] = c[:m]
    growth = GrowthClass.exact() if N + 1 >= len(c) else GrowthClass.bounded(max(abs(x) for x in c))
    return a, growth


def catalog(name: str, N: int = 256) -> TruncatedSeries:
    """Exact Taylor coefficients ``a_0 .. a_N`` of a named function.

    ============================  =====================
    ``I``                         1/(1-z)
    ``koebe``                     z/(1-z)^2
    ``k2``                        z/(1-z^2)
    ``J``                         1/(1-z^2)
    ``inv_sq``                    1/(1-z)^2
    ``one_minus_half_z``          1 - z/2
    ``one_minus_z``               1 - z
    ``strip``                     log((1+z)/(1-z))
    ``cayley``                    z/(1-z)
    ``halfplane_conv``            z - z^2/2
    ``z``                         z
    ============================  =====================
    """
    if N < 0:
        raise SeriesError("N must be nonnegative")
    n = np.arange(N + 1)
    if name == "I":
        a, g = np.ones(N + 1), GrowthClass.bounded(1.0)
    elif name == "koebe":
        a, g = n.astype(float), GrowthClass.polynomial(1, 1.0)
    elif name == "k2":
        a, g = (n % 2 == 1).astype(float), GrowthClass.bounded(1.0)
    elif name == "J":
        a, g = (n % 2 == 0).astype(float), GrowthClass.bounded(1.0)
    elif name == "inv_sq":
        a, g = (n + 1).astype(float), GrowthClass.polynomial(1, 1.0)
    elif name == "strip":
        a = np.where(n % 2 == 1, 2.0 / np.maximum(n, 1), 0.0)
        g = GrowthClass.bounded(2.0)
    elif name == "cayley":
        a, g = (n >= 1).astype(float), GrowthClass.bounded(1.0)
    elif name == "one_minus_half_z":
        a, g = _finite([1.0, -0.5], N)
    elif name == "one_minus_z":
        a, g = _finite([1.0, -1.0], N)
    elif name == "halfplane_conv":
        a, g = _finite([0.0, 1.0, -0.5], N)
    elif name == "z":
        a, g = _finite([0.0, 1.0], N)
    else:
        raise SeriesError(f"unknown catalog function {name!r}")
    return TruncatedSeries(a, g, name)


CATALOG_NAMES = (
    "I",
    "koebe",
    "k2",
    "J",
    "inv_sq",
    "one_minus_half_z",
    "one_minus_z",
    "strip",
    "cayley",
    "halfplane_conv",
    "z",
)


def formal_sqrt(u: np.ndarray) -> np.ndarray:
    """Coefficients of ``sqrt(1 + u)`` for a formal series ``u`` with ``u[0] == 0``."""
    u = np.asarray(u, dtype=np.complex128)
    s = np.zeros_like(u)
    s[0] = 1.0
    for k in range(1, u.size):
        acc = np.dot(s[1:k], s[k - 1:0:-1]) if k > 1 else 0.0
        s[k] = (u[k] - acc) / 2.0
    return s


def reciprocal(a: np.ndarray) -> np.ndarray:
    """Coefficients of ``1 / a`` as a formal series; needs ``a[0] != 0``."""
    a = np.asarray(a, dtype=np.complex128)
    if a[0] == 0:
        raise SeriesError("series with zero constant term has no reciprocal")
    g = np.zeros_like(a)
    g[0] = 1.0 / a[0]
    for k in range(1, a.size):
        g[k] = -np.dot(a[1:k + 1], g[k - 1::-1]) / a[0]
    return g


def _measured_growth(c: np.ndarray) -> GrowthClass:
    return GrowthClass.bounded(float(np.max(np.abs(c))) if c.size else 0.0)


def odd_sqrt_transform(H: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """Odd function ``h`` with ``h(z)**2 == H(z**2)``, branch ``h'(0) = sqrt(H'(0))``.

    ``H`` with coefficients up to ``A_M`` determines ``h`` up to degree
    ``2M - 1``. The tail envelope of the result is the measured maximum of
    the computed coefficients (a bounded class); for odd univalent functions
    no smaller a-priori bound is available for the coefficient powers used
    downstream.
    """
    A = H.coeffs
    if abs(A[0]) > 1e-12:
        raise SeriesError("H(0) must vanish")
    if A.size < 2 or abs(A[1]) < 1e-12:
        raise SeriesError("H'(0) = 0: square-root branch undefined")
    M = H.order
    u = A[1:] / A[1]
    u[0] = 0.0
    s = formal_sqrt(u) * np.sqrt(A[1])
    top = 2 * M - 1
    if order is not None:
        if order > top:
            raise SeriesError(f"H determines h only up to degree {top}")
        top = order
    h = np.zeros(top + 1, dtype=np.complex128)
    h[1::2] = s[: h[1::2].size]
    if H.growth.finite and not np.any(u):
        growth = GrowthClass.exact()
    else:
        growth = _measured_growth(h)
    name = f"sqrt({H.name}(z^2))" if H.name else ""
    return TruncatedSeries(h, growth, name)


def divide_by_z(h: TruncatedSeries) -> TruncatedSeries:
    """``h(z) / z`` for a series with ``h(0) = 0``."""
    a = h.coeffs
    scale = max(1.0, float(np.max(np.abs(a))))
    if abs(a[0]) > 1e-12 * scale:
        raise SeriesError("h(0) != 0; cannot divide by z")
    if a.size < 2:
        return TruncatedSeries(np.zeros(1), GrowthClass.exact(), "")
    g = h.growth
    if g.finite:
        growth = GrowthClass.exact()
    else:
        # a_{n+1} <= C (n+2)^d rho^{n+1} <= C 2^d rho (n+1)^d rho^n
        growth = GrowthClass(
            const=g.const * 2.0**g.degree * g.rho, degree=g.degree, rho=g.rho
        )
    name = f"{h.name}/z" if h.name else ""
    return TruncatedSeries(a[1:].copy(), growth, name)
