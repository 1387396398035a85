"""Fiber maps of the coupled problem.

Along pairs (u, t u) built on a scalar extremal, the sharp constant reduces
to the scalar function

    g(t) = (1 + t^2) / D(t)^{2/p},   D(t) = lam + mu t^p + p kappa t^beta,

with p the critical exponent. Its derivative factors through

    h(t) = mu t^{p-2} - kappa alpha t^beta + kappa beta t^{beta-2} - lam,
    g'(t) = -2 t D(t)^{-2/p-1} h(t),

so interior critical points of g are the positive roots of h.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from hardysob.coupling import CouplingParams
from hardysob.radial import dirichlet_energy

SCAN_T_MIN = 1e-8
SCAN_T_MAX = 1e8
SCAN_POINTS = 2048
TIE_TOL = 1e-10
ROOT_XTOL = 1e-14


class _AtInfinity:
    """Marker for a minimum attained only in the limit t -> infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_INFINITY"

    def __reduce__(self):
        return (_AtInfinity, ())


AT_INFINITY = _AtInfinity()


@dataclass(frozen=True)
class FiberMap:
    params: CouplingParams
    two_star_s: float

    def __post_init__(self):
        if not self.two_star_s > 2.0:
            raise ValueError(f"critical exponent must exceed 2, got {self.two_star_s}")
        self.params.check_critical(self.two_star_s)

    @property
    def g_zero(self) -> float:
        return self.params.lam ** (-2.0 / self.two_star_s)

    @property
    def g_infinity(self) -> float:
        return self.params.mu ** (-2.0 / self.two_star_s)

    def denominator(self, t):
        """D(t) = lam + mu t^p + p kappa t^beta."""
        P, p = self.params, self.two_star_s
        t = np.asarray(t, dtype=float)
        return P.lam + P.mu * t**p + p * P.kappa * t**P.beta


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def g_eval(fiber: FiberMap, t):
    """g(t) for t >= 0 (scalar or array); ``AT_INFINITY`` gives the limit value."""
    if t is AT_INFINITY:
        return fiber.g_infinity
    P, p = fiber.params, fiber.two_star_s
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(~np.isfinite(t)):
        raise ValueError("g is evaluated at finite t >= 0 only")
    out = np.empty_like(t)
    small = t <= 1.0
    ts = t[small]
    d_small = P.lam + P.mu * ts**p + p * P.kappa * ts**P.beta
    # divide through by t^p for t > 1 so large t neither overflows nor cancels
    tl = t[~small]
    d_large = P.lam * tl**-p + P.mu + p * P.kappa * tl**-P.alpha
    if np.any(d_small <= 0) or np.any(d_large <= 0):
        raise ValueError("fiber denominator is nonpositive: kappa is inadmissible")
    out[small] = (1.0 + ts**2) / d_small ** (2.0 / p)
    out[~small] = (1.0 + tl**-2.0) / d_large ** (2.0 / p)
    return _scalar_or_array(out)


def h_eval(fiber: FiberMap, t):
    """h(t) for t > 0 (scalar or array)."""
    P, p = fiber.params, fiber.two_star_s
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("h is evaluated at t > 0 only")
    h = (
        P.mu * t ** (p - 2.0)
        - P.kappa * P.alpha * t**P.beta
        + P.kappa * P.beta * t ** (P.beta - 2.0)
        - P.lam
    )
    return _scalar_or_array(h)


def g_prime(fiber: FiberMap, t):
    """Analytic derivative -2 t D^{-2/p-1} h."""
    p = fiber.two_star_s
    t = np.asarray(t, dtype=float)
    d = fiber.denominator(t)
    return _scalar_or_array(-2.0 * t * d ** (-2.0 / p - 1.0) * np.asarray(h_eval(fiber, t)))


class FiberMinimum(NamedTuple):
    """Infimum of g over [0, inf].

    ``location`` is one of ``interior``, ``zero``, ``infinity``, ``tie``
    (both endpoints, no interior winner) or ``degenerate`` (g constant on
    the scan; t_star is then the representative 1).
    """

    t_star: object
    g_min: float
    location: str

    @property
    def is_interior(self) -> bool:
        return self.location == "interior"


def h_roots(fiber: FiberMap, t_min=SCAN_T_MIN, t_max=SCAN_T_MAX, n=SCAN_POINTS) -> list[float]:
    """Sign changes of h on a log scan, each polished by Brent's method."""
    ts = np.geomspace(t_min, t_max, n)
    hv = np.asarray(h_eval(fiber, ts))
    roots = []
    for i in np.flatnonzero(hv == 0.0):
        roots.append(float(ts[i]))
    for i in np.flatnonzero(hv[:-1] * hv[1:] < 0.0):
        roots.append(
            brentq(lambda x: h_eval(fiber, x), ts[i], ts[i + 1], xtol=ROOT_XTOL, maxiter=200)
        )
    return sorted(roots)


def minimize_g(fiber: FiberMap) -> FiberMinimum:
    ts = np.geomspace(SCAN_T_MIN, SCAN_T_MAX, SCAN_POINTS)
    gv = np.asarray(g_eval(fiber, ts))
    g0, ginf = fiber.g_zero, fiber.g_infinity
    g_end = min(g0, ginf)
    lo = min(gv.min(), g0, ginf)
    hi = max(gv.max(), g0, ginf)
    if hi - lo <= TIE_TOL * hi:
        return FiberMinimum(1.0, float(lo), "degenerate")

    best_t, best_g = None, math.inf
    for r in h_roots(fiber):
        val = g_eval(fiber, r)
        if val < best_g:
            best_t, best_g = r, val
    if best_t is not None and best_g < g_end - TIE_TOL * g_end:
        return FiberMinimum(best_t, best_g, "interior")
    if abs(g0 - ginf) <= TIE_TOL * g_end:
        return FiberMinimum(0.0, g_end, "tie")
    if g0 < ginf:
        return FiberMinimum(0.0, g0, "zero")
    return FiberMinimum(AT_INFINITY, ginf, "infinity")


def sample_fiber(fiber: FiberMap, ts) -> np.ndarray:
    """Rows (t, g(t), h(t)) for t > 0."""
    ts = np.asarray(ts, dtype=float)
    return np.column_stack([ts, g_eval(fiber, ts), h_eval(fiber, ts)])


def fiber_csv(fiber: FiberMap, ts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "g", "h"])
    for row in sample_fiber(fiber, ts):
        w.writerow([format(x, ".17g") for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------- Nehari


@dataclass(frozen=True)
class NehariCoefficients:
    """Integrals fixing the energy along the ray t (u, v).

    a = |grad u|^2 + |grad v|^2, b = int (lam|u|^p1 + mu|v|^p1)|x|^{-s1},
    c = int |u|^alpha |v|^beta |x|^{-s2}, with p1, p2 the critical exponents
    of s1, s2.
    """

    a: float
    b: float
    c: float
    two_star_s1: float
    two_star_s2: float
    kappa: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a}")
        if not self.b > 0:
            raise ValueError(f"b must be > 0, got {self.b}")
        if not self.c >= 0:
            raise ValueError(f"c must be >= 0, got {self.c}")
        if not (self.two_star_s1 > 2 and self.two_star_s2 > 2):
            raise ValueError("critical exponents must exceed 2")

    @classmethod
    def from_pair(cls, u, v, exps, params: CouplingParams) -> "NehariCoefficients":
        grid = u.grid
        p1, p2 = exps.two_star_s1, exps.two_star_s2
        a = dirichlet_energy(u) + dirichlet_energy(v)
        b = grid.integrate(
            params.lam * np.abs(u.values) ** p1 + params.mu * np.abs(v.values) ** p1, exps.s1
        )
        c = grid.integrate(
            np.abs(u.values) ** params.alpha * np.abs(v.values) ** params.beta, exps.s2
        )
        return cls(a, b, c, p1, p2, params.kappa)

    @property
    def coupling_weight(self) -> float:
        """p2 kappa c, the coefficient of t^{p2-2} in the fiber equation."""
        return self.two_star_s2 * self.kappa * self.c

    def residual(self, t: float) -> float:
        return (
            self.b * t ** (self.two_star_s1 - 2.0)
            + self.coupling_weight * t ** (self.two_star_s2 - 2.0)
            - self.a
        )


def nehari_positive(coeffs: NehariCoefficients) -> bool:
    """b + p kappa c > 0, the per-instance condition for a projection when s1 = s2."""
    return coeffs.b + coeffs.coupling_weight > 0


def nehari_project(coeffs: NehariCoefficients) -> float:
    """Positive root t of a = b t^{p1-2} + p2 kappa c t^{p2-2}.

    Solved in x = ln t so that exponents close to zero do not squeeze the
    bracket.
    """
    q1, q2 = coeffs.two_star_s1 - 2.0, coeffs.two_star_s2 - 2.0
    b, k, a = coeffs.b, coeffs.coupling_weight, coeffs.a

    def F(x):
        return b * math.exp(q1 * x) + k * math.exp(q2 * x) - a

    lo, hi = -1.0, 1.0
    limit = 700.0 / max(q1, q2)
    while F(lo) * F(hi) > 0:
        lo, hi = 2 * lo, 2 * hi
        if hi > limit:
            raise ValueError("fiber equation has no sign change; check a, b > 0 and kappa > 0")
    x = brentq(F, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    # a Newton step in x removes the last rounding from the bracket
    dF = q1 * b * math.exp(q1 * x) + q2 * k * math.exp(q2 * x)
    if dF != 0:
        x_new = x - F(x) / dF
        if abs(F(x_new)) < abs(F(x)):
            x = x_new
    t = math.exp(x)
    if abs(coeffs.residual(t)) >= 1e-12 * a:
        raise ArithmeticError(f"fiber equation residual {coeffs.residual(t)} too large")
    return t


def fiber_energy(coeffs: NehariCoefficients, t: float) -> float:
    """Energy at t (u, v) when t solves the fiber equation."""
    p1, p2 = coeffs.two_star_s1, coeffs.two_star_s2
    return (0.5 - 1.0 / p2) * coeffs.a * t**2 + (1.0 / p2 - 1.0 / p1) * coeffs.b * t**p1


def ray_energy(coeffs: NehariCoefficients, t: float) -> float:
    """Energy a t^2/2 - b t^p1/p1 - kappa c t^p2 at any t, no Nehari assumption."""
    p1, p2 = coeffs.two_star_s1, coeffs.two_star_s2
    return 0.5 * coeffs.a * t**2 - coeffs.b * t**p1 / p1 - coeffs.kappa * coeffs.c * t**p2
