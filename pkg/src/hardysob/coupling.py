"""Coupling parameters, the best Young constant and the admissibility threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass

THRESHOLD_TOL = 1e-12
COUPLING_TOL = 1e-12


@dataclass(frozen=True)
class CouplingParams:
    lam: float
    mu: float
    kappa: float
    alpha: float
    beta: float

    def __post_init__(self):
        vals = (self.lam, self.mu, self.kappa, self.alpha, self.beta)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("coupling parameters must be finite")
        if self.lam <= 0:
            raise ValueError(f"lambda must be > 0, got {self.lam}")
        if self.mu <= 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        if self.alpha <= 1:
            raise ValueError(f"alpha must be > 1, got {self.alpha}")
        if self.beta <= 1:
            raise ValueError(f"beta must be > 1, got {self.beta}")

    def check_critical(self, two_star_s: float) -> None:
        """Raise unless alpha + beta equals the critical exponent."""
        if abs(self.alpha + self.beta - two_star_s) > COUPLING_TOL * two_star_s:
            raise ValueError(
                f"alpha + beta = {self.alpha + self.beta} does not match the "
                f"critical exponent {two_star_s}"
            )

    def scaled(self, c: float) -> "CouplingParams":
        """(c lambda, c mu, c kappa) with the same exponents."""
        return CouplingParams(c * self.lam, c * self.mu, c * self.kappa, self.alpha, self.beta)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "mu": self.mu,
            "kappa": self.kappa,
            "alpha": self.alpha,
            "beta": self.beta,
        }


def _check_positive(**kw) -> None:
    for k, v in kw.items():
        if not v > 0:
            raise ValueError(f"{k} must be positive, got {v}")


def best_young_constant(alpha: float, beta: float, lam: float, mu: float) -> float:
    """Largest k with lam X + mu Y >= k X^{a/(a+b)} Y^{b/(a+b)} for all X, Y >= 0."""
    _check_positive(alpha=alpha, beta=beta, lam=lam, mu=mu)
    p = alpha + beta
    return p * (lam / alpha) ** (alpha / p) * (mu / beta) ** (beta / p)


def young_extremal_ratio(alpha: float, beta: float, lam: float, mu: float) -> float:
    """t such that X = |u|^p, Y = |t u|^p attains equality in the Young bound."""
    _check_positive(alpha=alpha, beta=beta, lam=lam, mu=mu)
    return (lam * beta / (mu * alpha)) ** (1.0 / (alpha + beta))


def young_slack(alpha, beta, lam, mu, X, Y):
    """lam X + mu Y - k_best X^{a/(a+b)} Y^{b/(a+b)} (vectorizes over X, Y)."""
    k = best_young_constant(alpha, beta, lam, mu)
    p = alpha + beta
    return lam * X + mu * Y - k * X ** (alpha / p) * Y ** (beta / p)


def admissibility_threshold(
    alpha: float, beta: float, lam: float, mu: float, two_star_s: float
) -> float:
    """Infimum of couplings kappa for which the mixed functional stays positive.

    Equals -best_young_constant / (alpha + beta).
    """
    _check_positive(alpha=alpha, beta=beta, lam=lam, mu=mu)
    if abs(alpha + beta - two_star_s) > COUPLING_TOL * two_star_s:
        raise ValueError(
            f"alpha + beta = {alpha + beta} does not match the critical exponent {two_star_s}"
        )
    return -((lam / alpha) ** (alpha / two_star_s)) * (mu / beta) ** (beta / two_star_s)


def is_admissible(params: CouplingParams, two_star_s: float) -> bool:
    """kappa strictly above the threshold; within 1e-12 counts as inadmissible."""
    thr = admissibility_threshold(params.alpha, params.beta, params.lam, params.mu, two_star_s)
    return params.kappa > thr + THRESHOLD_TOL * max(1.0, abs(thr))
