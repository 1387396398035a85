"""Radial functions on R^N sampled on a logarithmic grid.

Integrals of radial functions against |x|^{-s} reduce to

    int f(|x|) |x|^{-s} dx = omega_{N-1} int_0^inf f(r) r^{N-1-s} dr,

which is evaluated as a composite trapezoid rule in the variable x = ln r
with the factor r^{N-s} folded into the weights. Integrands decay
polynomially at both ends, so the rule converges fast and the truncation
[r_min, r_max] dominates the error.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

DEFAULT_R_MIN = 1e-6
DEFAULT_R_MAX = 1e6
DEFAULT_M = 4096


def sphere_area(N: int) -> float:
    """Surface measure 2 pi^{N/2} / Gamma(N/2) of the unit sphere in R^N."""
    return 2.0 * math.pi ** (N / 2) / math.gamma(N / 2)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing positive nodes in dimension ``N``."""

    N: int
    nodes: np.ndarray
    omega: float = field(init=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise ValueError(f"dimension N must be an integer >= 3, got {self.N}")
        nodes = _readonly(self.nodes)
        if nodes.ndim != 1 or nodes.size < 16:
            raise ValueError("a radial grid needs at least 16 nodes")
        if nodes[0] <= 0.0 or np.any(np.diff(nodes) <= 0.0):
            raise ValueError("grid nodes must be positive and strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "omega", sphere_area(self.N))

    @classmethod
    def logspaced(
        cls,
        N: int,
        r_min: float = DEFAULT_R_MIN,
        r_max: float = DEFAULT_R_MAX,
        M: int = DEFAULT_M,
    ) -> "RadialGrid":
        if not 0.0 < r_min < r_max:
            raise ValueError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
        return cls(N, np.geomspace(r_min, r_max, int(M)))

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def M(self) -> int:
        return self.nodes.size

    @property
    def log_nodes(self) -> np.ndarray:
        return np.log(self.nodes)

    def trapezoid_weights(self) -> np.ndarray:
        """Trapezoid weights in the variable ln r."""
        x = self.log_nodes
        w = np.empty_like(x)
        w[1:-1] = 0.5 * (x[2:] - x[:-2])
        w[0] = 0.5 * (x[1] - x[0])
        w[-1] = 0.5 * (x[-1] - x[-2])
        return w

    def measure(self, s: float = 0.0) -> np.ndarray:
        """Nodal weights for int f(|x|) |x|^{-s} dx over R^N."""
        return self.omega * self.trapezoid_weights() * self.nodes ** (self.N - s)

    def integrate(self, values: np.ndarray, s: float = 0.0) -> float:
        return float(np.dot(self.measure(s), values))

    def edge_conductances(self) -> np.ndarray:
        """Coefficients c_j of the discrete energy sum_j c_j (u_{j+1} - u_j)^2.

        Midpoint rule in ln r for omega * int u_x^2 r^{N-2} dx.
        """
        r = self.nodes
        rho = (r[:-1] * r[1:]) ** (0.5 * (self.N - 2))
        return self.omega * rho / np.diff(self.log_nodes)

    def refined(self, factor: int = 2) -> "RadialGrid":
        """Same truncation with ``factor`` times as many log-spaced nodes."""
        return RadialGrid.logspaced(self.N, self.r_min, self.r_max, self.M * factor)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Values of a radial function at the nodes of a grid."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values)
        if values.shape != self.grid.nodes.shape:
            raise ValueError(
                f"expected {self.grid.M} values, got array of shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite at every node")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: RadialGrid, fn: Callable[[np.ndarray], np.ndarray]):
        return cls(grid, fn(grid.nodes))

    @classmethod
    def zeros(cls, grid: RadialGrid) -> "RadialProfile":
        return cls(grid, np.zeros(grid.M))

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def __mul__(self, c: float) -> "RadialProfile":
        return RadialProfile(self.grid, float(c) * self.values)

    __rmul__ = __mul__

    def derivative(self) -> np.ndarray:
        """First derivative by 3-point centered differences on the nonuniform grid."""
        return np.gradient(self.values, self.grid.nodes, edge_order=2)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["r", "value"])
            for r, v in zip(self.grid.nodes, self.values):
                writer.writerow([format(r, ".17g"), format(v, ".17g")])

    @classmethod
    def from_csv(cls, path: str | Path, N: int) -> "RadialProfile":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != ["r", "value"]:
                raise ValueError(f"expected header 'r,value', got {header!r}")
            rows = [(float(a), float(b)) for a, b in reader]
        data = np.array(rows)
        return cls(RadialGrid(N, data[:, 0]), data[:, 1])


def signed_power(x: np.ndarray, q: float) -> np.ndarray:
    """sign(x) |x|^q, i.e. |x|^{q-1} x without 0 * inf at x = 0."""
    return np.sign(x) * np.abs(x) ** q


def weighted_lp_norm(p: float, s: float, profile: RadialProfile) -> float:
    """(omega int |u|^p r^{N-1-s} dr)^{1/p}, i.e. |u|_{p,s}."""
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if not 0.0 <= s <= 2.0:
        raise ValueError(f"s must lie in [0, 2], got {s}")
    total = profile.grid.integrate(np.abs(profile.values) ** p, s)
    if not math.isfinite(total):
        raise ArithmeticError("weighted norm is not finite; singularity under-resolved")
    return total ** (1.0 / p)


def dirichlet_energy(profile: RadialProfile) -> float:
    """int |grad u|^2 dx for a radial u.

    Uses two-point differences between neighbouring nodes in ln r, the
    quadratic form whose Euler-Lagrange operator is the 3-point centered
    radial Laplacian. Exactly quadratic: energy(c u) = c^2 energy(u).
    """
    c = profile.grid.edge_conductances()
    return float(np.dot(c, np.diff(profile.values) ** 2))


def radial_laplacian(profile: RadialProfile) -> np.ndarray:
    """u'' + (N-1) u'/r at interior nodes (3-point nonuniform stencils).

    Entries 0 and M-1 are NaN.
    """
    r = profile.grid.nodes
    u = profile.values
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    d2 = 2.0 * (hm * u[2:] - (hm + hp) * u[1:-1] + hp * u[:-2]) / (hm * hp * (hm + hp))
    d1 = (hm**2 * u[2:] + (hp**2 - hm**2) * u[1:-1] - hp**2 * u[:-2]) / (
        hm * hp * (hm + hp)
    )
    out = np.full(u.shape, np.nan)
    out[1:-1] = d2 + (profile.grid.N - 1) * d1 / r[1:-1]
    return out


def laplacian_residual(profile: RadialProfile, rhs: RadialProfile | np.ndarray) -> float:
    """Relative L2(R^N) residual of -Delta u = rhs over interior nodes.

    Both norms use the grid quadrature for int |f|^2 dx, restricted to the
    nodes two or more steps away from each end. Plain node sums would be
    dominated by the innermost nodes, where rhs is largest and float64
    rounding in second differences of u swamps the stencil error. A zero
    profile against a zero right-hand side has residual 0 by convention.
    """
    f = rhs.values if isinstance(rhs, RadialProfile) else np.asarray(rhs, dtype=float)
    inner = slice(2, -2)
    w = profile.grid.measure(0.0)[inner]
    res = -radial_laplacian(profile)[inner] - f[inner]
    denom = float(np.dot(w, f[inner] ** 2))
    if denom == 0.0:
        if not np.any(profile.values):
            return 0.0
        raise ZeroDivisionError("right-hand side has zero norm on interior nodes")
    return math.sqrt(float(np.dot(w, res**2)) / denom)


def bump(grid: RadialGrid, center: float, width: float) -> RadialProfile:
    """Smooth bump exp(-1/(1-z^2)) in z = ln(r/center)/width, zero for |z| >= 1."""
    z = np.log(grid.nodes / center) / width
    inside = np.abs(z) < 1.0
    vals = np.zeros(grid.M)
    vals[inside] = np.exp(-1.0 / (1.0 - z[inside] ** 2))
    return RadialProfile(grid, vals)


def random_bumps(
    grid: RadialGrid,
    n: int,
    rng: np.random.Generator,
    center_range: tuple[float, float] = (1e-2, 1e2),
    width_range: tuple[float, float] = (0.2, 3.0),
) -> list[RadialProfile]:
    """``n`` bumps with log-uniform centers and log-widths."""
    lc = rng.uniform(np.log(center_range[0]), np.log(center_range[1]), size=n)
    lw = rng.uniform(np.log(width_range[0]), np.log(width_range[1]), size=n)
    return [bump(grid, math.exp(c), math.exp(w)) for c, w in zip(lc, lw)]
