"""Regularized weights a_eps and the approximating sharp constants S^eps.

a_eps(r) = r^{-(s-eps)} inside the unit ball and r^{-(s+eps)} outside, so
a_eps <= |x|^{-s} with equality only on the unit sphere. Minimizers of the
regularized quotient exist for eps > 0 and split their constraint mass
evenly between the ball and its complement.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from hardysob.coupling import CouplingParams
from hardysob.descent import projected_descent
from hardysob.exponents import Exponents
from hardysob.groundstate import normalized_extremal
from hardysob.radial import RadialGrid, RadialProfile, laplacian_residual, signed_power
from hardysob.regime import Classification, classify


@dataclass(frozen=True)
class EpsWeight:
    s: float
    eps: float

    def __post_init__(self):
        if not 0.0 < self.s < 2.0:
            raise ValueError(f"s must lie in (0, 2), got {self.s}")
        if not 0.0 <= self.eps < self.s:
            raise ValueError(f"eps must lie in [0, s), got {self.eps}")


def eps_weight_eval(w: EpsWeight, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("a_eps is evaluated at r > 0 only")
    out = np.where(r < 1.0, r ** -(w.s - w.eps), r ** -(w.s + w.eps))
    return float(out) if out.ndim == 0 else out


def _density(exps, params, U, V):
    """Constraint integrand lam|u|^p + mu|v|^p + p kappa |u|^alpha |v|^beta."""
    p = exps.two_star_s
    au, av = np.abs(U), np.abs(V)
    return (
        params.lam * au**p
        + params.mu * av**p
        + p * params.kappa * au**params.alpha * av**params.beta
    )


class EpsMinimum(NamedTuple):
    S_eps: float
    u: RadialProfile
    v: RadialProfile
    iterations: int


def _default_seeds(grid: RadialGrid, exps: Exponents, params: CouplingParams):
    U = normalized_extremal(grid, exps.s)
    rep = classify(exps, params)
    if rep.classification is Classification.NONTRIVIAL and rep.t0 is not None:
        return U, rep.t0 * U
    return U, U


def minimize_S_eps(
    grid: RadialGrid,
    exps: Exponents,
    params: CouplingParams,
    eps: float,
    seeds=None,
    tol: float = 1e-8,
    max_iter: int = 20000,
) -> EpsMinimum:
    """Minimize |grad u|^2 + |grad v|^2 on {int a_eps [...] = 1}.

    Both components move together along the preconditioned gradient and
    the pair is renormalized after every step.
    """
    if not exps.is_single:
        raise ValueError("needs s1 = s2")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if params.kappa <= 0:
        raise ValueError("minimize_S_eps needs kappa > 0")
    w = EpsWeight(exps.s, eps)
    p = exps.two_star_s
    params.check_critical(p)
    if seeds is None:
        seeds = _default_seeds(grid, exps, params)
    u0, v0 = seeds
    W = grid.measure(0.0) * eps_weight_eval(w, grid.nodes)
    lam, mu, k, a, b = params.lam, params.mu, params.kappa, params.alpha, params.beta

    def F(X):
        return float(np.dot(W, _density(exps, params, X[0], X[1])))

    def dF(X):
        U, V = X
        au, av = np.abs(U), np.abs(V)
        gu = p * lam * signed_power(U, p - 1) + p * k * a * signed_power(U, a - 1) * av**b
        gv = p * mu * signed_power(V, p - 1) + p * k * b * au**a * signed_power(V, b - 1)
        return [W * gu, W * gv]

    res = projected_descent(grid, [u0.values, v0.values], F, dF, p, tol=tol, max_iter=max_iter)
    U, V = res.state
    return EpsMinimum(res.value, RadialProfile(grid, U), RadialProfile(grid, V), res.iterations)


def constraint_integral(u, v, exps, params, eps) -> float:
    grid = u.grid
    w = EpsWeight(exps.s, eps)
    W = grid.measure(0.0) * eps_weight_eval(w, grid.nodes)
    return float(np.dot(W, _density(exps, params, u.values, v.values)))


def ball_masses(u, v, exps, params, eps) -> tuple[float, float]:
    """Constraint mass inside and outside the unit ball.

    The trapezoid panel in ln r containing r = 1 is split there by linear
    interpolation, so the two parts add up to the full quadrature.
    """
    grid = u.grid
    w = EpsWeight(exps.s, eps)
    r = grid.nodes
    x = grid.log_nodes
    dens = (
        grid.omega
        * r**grid.N
        * eps_weight_eval(w, r)
        * _density(exps, params, u.values, v.values)
    )
    panels = 0.5 * np.diff(x) * (dens[:-1] + dens[1:])
    if r[-1] <= 1.0:
        return float(panels.sum()), 0.0
    if r[0] >= 1.0:
        return 0.0, float(panels.sum())
    k = int(np.searchsorted(x, 0.0, side="right")) - 1
    theta = (0.0 - x[k]) / (x[k + 1] - x[k])
    d0 = dens[k] + theta * (dens[k + 1] - dens[k])
    inside = panels[:k].sum() + 0.5 * (0.0 - x[k]) * (dens[k] + d0)
    outside = panels[k + 1 :].sum() + 0.5 * (x[k + 1] - 0.0) * (d0 + dens[k + 1])
    return float(inside), float(outside)


def half_mass_balance(u, v, exps, params, eps) -> float:
    inside, outside = ball_masses(u, v, exps, params, eps)
    return abs(inside - outside)


def euler_lagrange_residuals(res: EpsMinimum, exps, params, eps) -> tuple[float, float]:
    """Residuals of -Delta u = S^eps a_eps (lam u^{p-1} + alpha kappa u^{alpha-1} v^beta), same for v."""
    grid = res.u.grid
    p = exps.two_star_s
    a_e = eps_weight_eval(EpsWeight(exps.s, eps), grid.nodes)
    U, V = res.u.values, res.v.values
    au, av = np.abs(U), np.abs(V)
    P = params
    fu = P.lam * signed_power(U, p - 1) + P.kappa * P.alpha * signed_power(U, P.alpha - 1) * av**P.beta
    fv = P.mu * signed_power(V, p - 1) + P.kappa * P.beta * au**P.alpha * signed_power(V, P.beta - 1)
    return (
        laplacian_residual(res.u, res.S_eps * a_e * fu),
        laplacian_residual(res.v, res.S_eps * a_e * fv),
    )


def _sweep_one(args):
    grid, exps, params, eps, seeds = args
    return minimize_S_eps(grid, exps, params, eps, seeds).S_eps


def S_eps_monotonicity_sweep(
    grid: RadialGrid, exps: Exponents, params: CouplingParams, eps_list, seeds=None, jobs: int = 1
) -> list[tuple[float, float]]:
    """(eps, S^eps) for a strictly increasing list of eps in (0, s)."""
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ValueError("eps_list is empty")
    if any(b <= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly increasing")
    if eps_list[0] <= 0 or eps_list[-1] >= exps.s:
        raise ValueError(f"eps values must lie in (0, {exps.s})")
    if seeds is None:
        seeds = _default_seeds(grid, exps, params)
    tasks = [(grid, exps, params, e, seeds) for e in eps_list]
    if jobs <= 1:
        values = [_sweep_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(_sweep_one, tasks))
    return list(zip(eps_list, values))


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "S_eps"])
    for e, S in rows:
        w.writerow([format(e, ".17g"), format(S, ".17g")])
    return buf.getvalue()


def extrapolate_to_zero(rows) -> float:
    """Linear extrapolation to eps = 0 through the last two sweep points."""
    (e1, s1), (e2, s2) = rows[-2], rows[-1]
    return s1 - e1 * (s2 - s1) / (e2 - e1)
