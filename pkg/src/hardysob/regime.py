"""Classification of extremals for the coupled sharp constant with one singularity order."""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from hardysob.coupling import CouplingParams, admissibility_threshold, is_admissible
from hardysob.exponents import Exponents, varsigma
from hardysob.fiber import FiberMap, FiberMinimum, minimize_g

PARAM_RTOL = 1e-12


class Classification(str, enum.Enum):
    NONTRIVIAL = "NontrivialGroundState"
    SEMI_TRIVIAL = "SemiTrivialOnly"
    DEGENERATE = "DegenerateFamily"
    INADMISSIBLE = "Inadmissible"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class RegimeReport:
    """Verdict on the extremals plus the numeric ratio S / mu_s.

    ``sharp_ratio`` is None for inadmissible couplings, where the fiber
    denominator changes sign and the ratio is not defined.
    """

    classification: Classification
    sharp_ratio: float | None
    t0: float | None
    rule_fired: str
    numeric_agrees: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["classification"] = self.classification.value
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "RegimeReport":
        return cls(
            Classification(d["classification"]),
            d["sharp_ratio"],
            d["t0"],
            d["rule_fired"],
            bool(d["numeric_agrees"]),
        )


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=PARAM_RTOL, abs_tol=0.0)


def semi_trivial_ratio(params: CouplingParams, two_star_s: float) -> float:
    return max(params.lam, params.mu) ** (-2.0 / two_star_s)


def _nontrivial_rule(params: CouplingParams) -> str | None:
    """Which of the sufficient conditions for a nontrivial ground state holds.

    For an exponent equal to 2 the coupling must beat half of the dominant
    coefficient; that is exactly where h changes sign at the matching
    endpoint.
    """
    lam, mu, k, a, b = params.lam, params.mu, params.kappa, params.alpha, params.beta
    if _close(lam, mu):
        m = min(a, b)
        if m < 2 and not _close(m, 2.0):
            return "a2:min-exponent<2"
        if _close(m, 2.0) and k > lam / 2:
            return "a2:min-exponent=2,kappa>lambda/2"
    elif lam > mu:
        if b < 2 and not _close(b, 2.0):
            return "a1:beta<2"
        if _close(b, 2.0) and k > lam / 2:
            return "a1:beta=2,kappa>lambda/2"
    else:
        if a < 2 and not _close(a, 2.0):
            return "a3:alpha<2"
        if _close(a, 2.0) and k > mu / 2:
            return "a3:alpha=2,kappa>mu/2"
    return None


def _three_dim_rule(exps: Exponents, params: CouplingParams) -> bool:
    lam, mu, k, a, b = params.lam, params.mu, params.kappa, params.alpha, params.beta
    cond_b = (a > 2 and not _close(a, 2.0)) or (_close(a, 2.0) and mu >= 2 * k)
    cond_c = (b > 2 and not _close(b, 2.0)) or (_close(b, 2.0) and lam >= 2 * k)
    return exps.N == 3 and cond_b and cond_c


def _is_degenerate_family(exps: Exponents, params: CouplingParams) -> bool:
    return (
        exps.N == 3
        and _close(exps.s, 1.0)
        and _close(params.alpha, 2.0)
        and _close(params.beta, 2.0)
        and _close(params.lam, params.mu)
        and _close(params.lam, 2 * params.kappa)
    )


def classify(exps: Exponents, params: CouplingParams) -> RegimeReport:
    if not exps.is_single:
        raise ValueError("classification needs s1 = s2")
    p = exps.two_star_s
    params.check_critical(p)

    if not is_admissible(params, p):
        thr = admissibility_threshold(params.alpha, params.beta, params.lam, params.mu, p)
        return RegimeReport(
            Classification.INADMISSIBLE, None, None, f"inadmissible:kappa<={thr:.17g}", True
        )

    mn: FiberMinimum = minimize_g(FiberMap(params, p))
    ratio = float(mn.g_min)

    if params.kappa < 0:
        return RegimeReport(
            Classification.SEMI_TRIVIAL, ratio, None, "negative-coupling", not mn.is_interior
        )

    rule = _nontrivial_rule(params)
    if rule is not None:
        t0 = float(mn.t_star) if mn.is_interior else None
        return RegimeReport(Classification.NONTRIVIAL, ratio, t0, rule, mn.is_interior)

    if _three_dim_rule(exps, params):
        if _is_degenerate_family(exps, params):
            return RegimeReport(
                Classification.DEGENERATE,
                ratio,
                1.0,
                "three-dim:degenerate-family",
                mn.location == "degenerate",
            )
        return RegimeReport(
            Classification.SEMI_TRIVIAL, ratio, None, "three-dim:no-nontrivial", not mn.is_interior
        )

    t0 = float(mn.t_star) if mn.is_interior else None
    return RegimeReport(
        Classification.UNDETERMINED, ratio, t0, f"none:numeric-{mn.location}", True
    )


def classify_many(exps: Exponents, param_list, jobs: int = 1) -> list[RegimeReport]:
    """classify over a list of parameters, results in input order."""
    param_list = list(param_list)
    if jobs <= 1:
        return [classify(exps, p) for p in param_list]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(classify, [exps] * len(param_list), param_list))


def ground_state_energy(sharp_ratio: float, mu_s: float, two_star_s: float) -> float:
    """Least energy (1/2 - 1/p) S^{p/(p-2)} with S = sharp_ratio * mu_s."""
    if not (sharp_ratio > 0 and mu_s > 0 and two_star_s > 2):
        raise ValueError("ground state energy needs positive inputs and exponent > 2")
    p = two_star_s
    return (0.5 - 1.0 / p) * (sharp_ratio * mu_s) ** (p / (p - 2.0))


def scalar_level(lam: float, mu_s: float, two_star_s: float) -> float:
    """Least energy of the scalar problem with coefficient lam."""
    return ground_state_energy(lam ** (-2.0 / two_star_s), mu_s, two_star_s)


def nonexistence_check_s2_ge_s1(
    exps: Exponents, params: CouplingParams, kappa_small: bool = False
) -> bool:
    """Whether only semi-trivial pairs can realize the least energy when s2 >= s1.

    Holds for negative coupling, and for positive coupling when the caller
    asserts ``kappa_small`` and min(alpha, beta) * varsigma(s1, s2) > 2.
    The size of "small" has no explicit bound, so it is never inferred here.
    """
    if exps.s2 < exps.s1:
        raise ValueError("needs s2 >= s1")
    params.check_critical(exps.two_star_s2)
    if params.kappa < 0:
        return True
    return bool(
        kappa_small and min(params.alpha, params.beta) * varsigma(exps.N, exps.s1, exps.s2) > 2
    )
