"""Preconditioned projected descent for Rayleigh quotients on radial grids.

Minimizes E(X) / F(X)^{2/p} where E is the discrete Dirichlet energy (summed
over components) and F is p-homogeneous. Iterates stay on {F = 1}. The
search direction is the gradient in the energy inner product,

    d = X - (E/p) K^{-1} grad F,

so one step of length 1 is an inverse-iteration update. K is the tridiagonal
stiffness matrix of the energy with the outermost node held at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import solve_banded

from hardysob.radial import RadialGrid

ARMIJO = 1e-4
TAU_MIN = 1e-12


class DescentError(ArithmeticError):
    """The descent produced non-finite values or its line search collapsed."""


class Stiffness:
    """Banded stiffness matrix of the discrete Dirichlet energy."""

    def __init__(self, grid: RadialGrid):
        c = grid.edge_conductances()
        self.c = c
        diag = np.zeros(grid.M)
        diag[:-1] += c
        diag[1:] += c
        ab = np.zeros((3, grid.M - 1))
        ab[1] = diag[:-1]
        ab[0, 1:] = -c[:-1]
        ab[2, :-1] = -c[:-1]
        self._ab = ab

    def energy(self, u: np.ndarray) -> float:
        return float(np.dot(self.c, np.diff(u) ** 2))

    def solve(self, f: np.ndarray) -> np.ndarray:
        out = np.zeros_like(f)
        out[:-1] = solve_banded((1, 1), self._ab, f[:-1])
        return out


@dataclass
class DescentResult:
    value: float
    state: list
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


def projected_descent(
    grid: RadialGrid,
    seed: Sequence[np.ndarray],
    F: Callable[[list], float],
    dF: Callable[[list], list],
    p: float,
    tol: float = 1e-10,
    max_iter: int = 20000,
    tau0: float = 1.0,
) -> DescentResult:
    """Minimize sum_i E(X_i) subject to F(X) = 1 starting from ``seed``.

    Stops once an accepted step lowers the energy by less than ``tol``
    relative. The energy never increases on an accepted step.
    """
    K = Stiffness(grid)

    def normalize(X):
        f = F(X)
        if not np.isfinite(f):
            raise DescentError("constraint integral is not finite")
        if f <= 0:
            raise ValueError("constraint integral is nonpositive")
        scale = f ** (-1.0 / p)
        return [scale * x for x in X]

    def energy(X):
        return sum(K.energy(x) for x in X)

    X = normalize([np.array(x, dtype=float) for x in seed])
    q = energy(X)
    if q == 0:
        raise ValueError("seed has zero Dirichlet energy")
    history = [q]
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        G = dF(X)
        D = [x - (q / p) * K.solve(g) for x, g in zip(X, G)]
        slope = 2.0 * energy(D)
        if not np.isfinite(slope):
            raise DescentError("non-finite search direction")
        tau = tau0
        while True:
            Xn = normalize([x - tau * d for x, d in zip(X, D)])
            qn = energy(Xn)
            if np.isfinite(qn) and qn <= q - ARMIJO * tau * slope:
                break
            tau *= 0.5
            if tau < TAU_MIN:
                break
        if tau < TAU_MIN:
            # no admissible step left: either at a minimizer to rounding, or broken
            if slope <= 1e-8 * q:
                converged = True
                break
            raise DescentError(f"line search failed at iteration {it} (slope {slope:.3e})")
        rel = (q - qn) / q
        X, q = Xn, qn
        history.append(q)
        if rel < tol:
            converged = True
            break
    return DescentResult(q, X, it, converged, history)
