"""Scalar extremal, its best constant, and ground-state pairs of the coupled system.

On R^N the scalar extremal is the instanton U(r) = (1 + r^{2-s})^{-(N-2)/(2-s)},
solving -Delta U = c_s U^{p-1} |x|^{-s} with c_s = (N-2)(N-s). Pairs are
built on the rescaled extremal U_hat with int U_hat^p |x|^{-s} = 1, which
(discretely and in the continuum) means -Delta U_hat = mu_s U_hat^{p-1}|x|^{-s}.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hardysob.coupling import CouplingParams
from hardysob.descent import DescentResult, projected_descent
from hardysob.exponents import Exponents, two_star
from hardysob.radial import (
    RadialGrid,
    RadialProfile,
    dirichlet_energy,
    laplacian_residual,
    signed_power,
    weighted_lp_norm,
)
from hardysob.fiber import AT_INFINITY, FiberMap, minimize_g
from hardysob.regime import Classification, RegimeReport, classify, ground_state_energy

RESIDUAL_TOL = 1e-3
POHOZAEV_TOL = 1e-3
ENERGY_TOL = 1e-6


def _check_s(s: float) -> None:
    if not 0.0 < s < 2.0:
        raise ValueError(f"s must lie in (0, 2), got {s}")


def instanton(grid: RadialGrid, s: float) -> RadialProfile:
    _check_s(s)
    N = grid.N
    r = grid.nodes
    return RadialProfile(grid, (1.0 + r ** (2.0 - s)) ** (-(N - 2.0) / (2.0 - s)))


def instanton_constant(N: int, s: float) -> float:
    """c_s with -Delta U = c_s U^{p-1}/|x|^s for the unit instanton."""
    return (N - 2.0) * (N - s)


def mu_s_quadrature(grid: RadialGrid, s: float) -> float:
    """Rayleigh quotient |grad U|^2 / |U|_{p,s}^2 at the instanton."""
    U = instanton(grid, s)
    p = two_star(grid.N, s)
    val = dirichlet_energy(U) / weighted_lp_norm(p, s, U) ** 2
    if not math.isfinite(val):
        raise ArithmeticError("non-finite Rayleigh quotient")
    return val


def mu_s_descent(
    grid: RadialGrid, s: float, seed: RadialProfile, tol: float = 1e-10, max_iter: int = 20000
) -> DescentResult:
    _check_s(s)
    p = two_star(grid.N, s)
    W = grid.measure(s)
    if not np.any(seed.values):
        raise ValueError("seed profile is identically zero")
    return projected_descent(
        grid,
        [seed.values],
        lambda X: float(np.dot(W, np.abs(X[0]) ** p)),
        lambda X: [W * p * signed_power(X[0], p - 1)],
        p,
        tol=tol,
        max_iter=max_iter,
    )


def mu_s_minimize(grid: RadialGrid, s: float, seed_profile: RadialProfile, **kw) -> float:
    """Minimized Rayleigh quotient from ``seed_profile``."""
    return mu_s_descent(grid, s, seed_profile, **kw).value


def normalized_extremal(grid: RadialGrid, s: float) -> RadialProfile:
    """Instanton scaled so that int U_hat^p |x|^{-s} = 1 on the grid."""
    U = instanton(grid, s)
    p = two_star(grid.N, s)
    return (1.0 / weighted_lp_norm(p, s, U)) * U


@dataclass(frozen=True, eq=False)
class GroundStatePair:
    u: RadialProfile
    v: RadialProfile
    t0: float
    C_t0: float
    energy: float
    sharp_constant: float

    def __post_init__(self):
        if self.u.grid is not self.v.grid and not np.array_equal(
            self.u.grid.nodes, self.v.grid.nodes
        ):
            raise ValueError("components live on different grids")

    @property
    def grid(self) -> RadialGrid:
        return self.u.grid

    def meta(self) -> dict:
        return {
            "t0": self.t0,
            "C_t0": self.C_t0,
            "energy": self.energy,
            "sharp_constant": self.sharp_constant,
        }

    def write(self, directory: str | Path) -> None:
        """profile.csv with columns r,u,v and meta.json."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        with open(d / "profile.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["r", "u", "v"])
            for row in zip(self.grid.nodes, self.u.values, self.v.values):
                w.writerow([format(x, ".17g") for x in row])
        (d / "meta.json").write_text(json.dumps(self.meta(), indent=2) + "\n")

    @classmethod
    def read(cls, directory: str | Path, N: int) -> "GroundStatePair":
        d = Path(directory)
        data = np.loadtxt(d / "profile.csv", delimiter=",", skiprows=1, ndmin=2)
        meta = json.loads((d / "meta.json").read_text())
        grid = RadialGrid(N, data[:, 0])
        return cls(
            RadialProfile(grid, data[:, 1]),
            RadialProfile(grid, data[:, 2]),
            meta["t0"],
            meta["C_t0"],
            meta["energy"],
            meta["sharp_constant"],
        )


def build_ground_state(
    report: RegimeReport,
    mu_s: float,
    grid: RadialGrid,
    s: float,
    params: CouplingParams,
    t0: float | None = None,
) -> GroundStatePair:
    """Pair (C U_hat, t0 C U_hat) realizing the sharp constant.

    ``mu_s`` should be the value of the same grid (``mu_s_quadrature``) so
    that discrete energies match the closed-form least energy.
    """
    cls = report.classification
    if cls not in (Classification.NONTRIVIAL, Classification.DEGENERATE):
        raise ValueError(f"no nontrivial pair for classification {cls.value} ({report.rule_fired})")
    if t0 is None:
        t0 = report.t0
    if t0 is None:
        if cls is Classification.DEGENERATE:
            t0 = 1.0
        else:
            raise ValueError("nontrivial report carries no interior fiber minimizer t0")
    if not t0 > 0:
        raise ValueError(f"t0 must be positive, got {t0}")
    p = two_star(grid.N, s)
    params.check_critical(p)
    S = report.sharp_ratio * mu_s
    D = params.lam + params.mu * t0**p + p * params.kappa * t0**params.beta
    C = S ** (1.0 / (p - 2.0)) * D ** (-1.0 / p)
    U_hat = normalized_extremal(grid, s)
    u = C * U_hat
    return GroundStatePair(
        u, t0 * u, float(t0), float(C), ground_state_energy(report.sharp_ratio, mu_s, p), S
    )


def _system_rhs(u, v, N, s1, s2, params: CouplingParams):
    r = u.grid.nodes
    p1 = two_star(N, s1)
    a, b, k = params.alpha, params.beta, params.kappa
    U, V = u.values, v.values
    au, av = np.abs(U), np.abs(V)
    fu = params.lam * signed_power(U, p1 - 1) * r**-s1
    fu = fu + k * a * signed_power(U, a - 1) * av**b * r**-s2
    fv = params.mu * signed_power(V, p1 - 1) * r**-s1
    fv = fv + k * b * au**a * signed_power(V, b - 1) * r**-s2
    return fu, fv


def system_residuals(pair: GroundStatePair, exps: Exponents, params: CouplingParams):
    """Relative residuals of both Euler-Lagrange equations."""
    fu, fv = _system_rhs(pair.u, pair.v, pair.grid.N, exps.s1, exps.s2, params)
    return laplacian_residual(pair.u, fu), laplacian_residual(pair.v, fv)


def _potential_terms(u, v, N, s1, s2, params: CouplingParams):
    """(int of the s1-pure part of G, int of the s2-coupling part of G)."""
    g = u.grid
    p1 = two_star(N, s1)
    au, av = np.abs(u.values), np.abs(v.values)
    pure = g.integrate(params.lam * au**p1 / p1 + params.mu * av**p1 / p1, s1)
    mixed = g.integrate(params.kappa * au**params.alpha * av**params.beta, s2)
    return pure, mixed


def pohozaev_residual(pair: GroundStatePair, s1: float, s2: float, params: CouplingParams) -> float:
    """|LHS - RHS| / |RHS| of the dilation identity on R^N.

    LHS = sum_i 2(N - s_i) int G_i with G split by singularity order,
    RHS = (N - 2) (|grad u|^2 + |grad v|^2).
    """
    N = pair.grid.N
    pure, mixed = _potential_terms(pair.u, pair.v, N, s1, s2, params)
    lhs = 2.0 * (N - s1) * pure + 2.0 * (N - s2) * mixed
    rhs = (N - 2.0) * (dirichlet_energy(pair.u) + dirichlet_energy(pair.v))
    if rhs == 0.0:
        if lhs == 0.0:
            return 0.0
        raise ZeroDivisionError("Dirichlet energy vanishes but the potential does not")
    return abs(lhs - rhs) / abs(rhs)


def direct_energy(pair: GroundStatePair, exps: Exponents, params: CouplingParams) -> float:
    """Energy functional evaluated by quadrature."""
    N = pair.grid.N
    pure, mixed = _potential_terms(pair.u, pair.v, N, exps.s1, exps.s2, params)
    return 0.5 * (dirichlet_energy(pair.u) + dirichlet_energy(pair.v)) - pure - mixed


def eigen_eta1_check(
    grid: RadialGrid, s: float, lam: float, test_profiles, mu_s: float | None = None
) -> tuple[float, float]:
    """Weighted Rayleigh quotient for -Delta v = eta U_lam^{p-2} v |x|^{-s}.

    U_lam = (mu_s/lam)^{1/(p-2)} U_hat solves the scalar problem with
    coefficient lam. Returns (quotient at U_lam, minimum over test_profiles).
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    p = two_star(grid.N, s)
    if mu_s is None:
        mu_s = mu_s_quadrature(grid, s)
    U_lam = (mu_s / lam) ** (1.0 / (p - 2.0)) * normalized_extremal(grid, s)
    W = grid.measure(s) * U_lam.values ** (p - 2.0)

    def quotient(v: RadialProfile) -> float:
        den = float(np.dot(W, v.values**2))
        if den == 0.0:
            raise ZeroDivisionError("test profile has zero weighted mass")
        return dirichlet_energy(v) / den

    at_ext = quotient(U_lam)
    tests = [quotient(v) for v in test_profiles]
    return at_ext, (min(tests) if tests else math.nan)


def decay_check(profile: RadialProfile, s: float | None = None) -> bool:
    """Flatness of |u| r^{N-2} over the outermost decade of nodes.

    The compensating rate N-2 is that of the instanton for every s.
    """
    r = profile.grid.nodes
    tail = r >= r[-1] / 10.0
    comp = np.abs(profile.values[tail]) * r[tail] ** (profile.grid.N - 2)
    return bool(comp.max() <= 2.0 * np.median(comp))


def verify_pair(pair: GroundStatePair, exps: Exponents, params: CouplingParams) -> dict:
    """Residual, dilation identity, tail decay and energy consistency with pass flags."""
    ru, rv = system_residuals(pair, exps, params)
    poh = pohozaev_residual(pair, exps.s1, exps.s2, params)
    dec_u = decay_check(pair.u, exps.s1)
    dec_v = decay_check(pair.v, exps.s1) if np.any(pair.v.values) else True
    e_direct = direct_energy(pair, exps, params)
    e_rel = abs(e_direct - pair.energy) / abs(pair.energy)
    return {
        "residual": {
            "u": ru,
            "v": rv,
            "tolerance": RESIDUAL_TOL,
            "pass": bool(ru < RESIDUAL_TOL and rv < RESIDUAL_TOL),
        },
        "pohozaev": {"value": poh, "tolerance": POHOZAEV_TOL, "pass": bool(poh < POHOZAEV_TOL)},
        "decay": {"u": dec_u, "v": dec_v, "pass": bool(dec_u and dec_v)},
        "energy_consistency": {
            "direct": e_direct,
            "formula": pair.energy,
            "relative_error": e_rel,
            "tolerance": ENERGY_TOL,
            "pass": bool(e_rel < ENERGY_TOL),
        },
    }


def sharp_constant_summary(exps: Exponents, params: CouplingParams, grid: RadialGrid) -> dict:
    """Fiber minimizer, mu_s, S = g_min mu_s and least energy c0 for one parameter set."""
    rep = classify(exps, params)
    if rep.classification is Classification.INADMISSIBLE:
        raise ValueError(f"coupling is inadmissible ({rep.rule_fired})")
    mn = minimize_g(FiberMap(params, exps.two_star_s))
    mu_s = mu_s_quadrature(grid, exps.s)
    return {
        "t0": "infinity" if mn.t_star is AT_INFINITY else float(mn.t_star),
        "location": mn.location,
        "g_min": mn.g_min,
        "mu_s": mu_s,
        "S": mn.g_min * mu_s,
        "c0": ground_state_energy(mn.g_min, mu_s, exps.two_star_s),
        "classification": rep.classification.value,
    }
