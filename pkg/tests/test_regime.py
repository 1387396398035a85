import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import MU_3_1
from hardysob.coupling import CouplingParams
from hardysob.exponents import Exponents
from hardysob.fiber import FiberMap, minimize_g
from hardysob.regime import (
    Classification,
    RegimeReport,
    classify,
    classify_many,
    ground_state_energy,
    nonexistence_check_s2_ge_s1,
    scalar_level,
)

E31 = Exponents.single(3, 1.0)


def P(lam, mu, k, a=2.0, b=2.0):
    return CouplingParams(lam, mu, k, a, b)


def test_degenerate_family():
    r = classify(E31, P(2, 2, 1))
    assert r.classification is Classification.DEGENERATE
    assert r.sharp_ratio == pytest.approx(1 / math.sqrt(2), abs=1e-14)
    assert r.t0 == 1.0 and r.numeric_agrees


def test_semi_trivial_equal_coefficients():
    r = classify(E31, P(3, 3, 1))
    assert r.classification is Classification.SEMI_TRIVIAL
    assert r.sharp_ratio == pytest.approx(3**-0.5, abs=1e-15)
    assert r.numeric_agrees


def test_nontrivial_symmetric():
    r = classify(E31, P(1, 1, 1))
    assert r.classification is Classification.NONTRIVIAL
    assert r.t0 == pytest.approx(1.0, abs=1e-10)
    assert r.sharp_ratio == pytest.approx(2 / math.sqrt(6), abs=1e-12)
    assert r.numeric_agrees


def test_inadmissible_and_negative():
    r = classify(E31, P(2, 2, -5))
    assert r.classification is Classification.INADMISSIBLE and r.sharp_ratio is None
    assert classify(E31, P(2, 2, -1)).classification is Classification.INADMISSIBLE
    r = classify(E31, P(2, 2, -0.5))
    assert r.classification is Classification.SEMI_TRIVIAL
    assert r.sharp_ratio == 2**-0.5


def test_half_coefficient_band_is_semi_trivial():
    # kappa between lambda/p and lambda/2 with beta = 2: g(0) is the minimum
    r = classify(E31, P(2, 2, 0.8))
    assert r.classification is Classification.SEMI_TRIVIAL
    m = minimize_g(FiberMap(P(2, 2, 0.8), 4.0))
    assert not m.is_interior


def test_undetermined_reports_numeric_verdict():
    # lambda > mu with alpha < 2 is not covered by any sufficient condition
    r = classify(E31, P(2.0, 1.0, 0.5, 1.5, 2.5))
    assert r.classification is Classification.UNDETERMINED
    assert r.rule_fired.startswith("none:numeric-")


def test_preconditions():
    with pytest.raises(ValueError):
        classify(Exponents(3, 1.0, 0.5), P(1, 1, 1))
    with pytest.raises(ValueError):
        classify(E31, P(1, 1, 1, 2.0, 2.5))


def test_json_fields_exact():
    r = classify(E31, P(1, 1, 1))
    d = json.loads(r.to_json())
    assert list(d) == ["classification", "sharp_ratio", "t0", "rule_fired", "numeric_agrees"]
    assert RegimeReport.from_dict(d) == r


def test_ground_state_energy_values():
    assert ground_state_energy(1.0, 1.0, 4.0) == 0.25
    assert scalar_level(1.0, MU_3_1, 4.0) == pytest.approx(2 * math.pi / 3, rel=1e-14)
    lam, mu_s, p = 2.7, 3.1, 3.4
    m_lam = (0.5 - 1 / p) * mu_s ** (p / (p - 2)) * lam ** (-2 / (p - 2))
    assert scalar_level(lam, mu_s, p) == pytest.approx(m_lam, rel=1e-14)


def test_nonexistence_predicate():
    e = Exponents(3, 1.0, 1.0)
    assert nonexistence_check_s2_ge_s1(e, P(1, 1, -0.1))
    assert not nonexistence_check_s2_ge_s1(e, P(1, 1, 0.1), kappa_small=True)  # 2 * 1 = 2
    # s1 = 0.5, s2 = 1: varsigma = 2.5/3, times min exponent 2 gives 5/3 < 2
    e5 = Exponents(3, 0.5, 1.0)
    assert not nonexistence_check_s2_ge_s1(e5, P(1, 1, 0.1), kappa_small=True)
    # a case where the predicate holds
    e6 = Exponents(3, 0.1, 0.2)
    p2 = e6.two_star_s2
    params = CouplingParams(1, 1, 0.1, p2 / 2, p2 / 2)
    assert (p2 / 2) * (2.9 * 1.8) / (2.8 * 1.9) > 2
    assert nonexistence_check_s2_ge_s1(e6, params, kappa_small=True)
    assert not nonexistence_check_s2_ge_s1(e6, params, kappa_small=False)
    with pytest.raises(ValueError):
        nonexistence_check_s2_ge_s1(Exponents(3, 0.2, 0.1), params)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.05, 3), st.floats(1.2, 2.8), st.floats(0.1, 10))
def test_scale_consistency(lam, mu, k, a, c):
    p = P(lam, mu, k, a, 4 - a)
    r1, r2 = classify(E31, p), classify(E31, p.scaled(c))
    assert r1.classification == r2.classification
    assert r2.sharp_ratio == pytest.approx(c**-0.5 * r1.sharp_ratio, rel=1e-10)
    if r1.t0 is not None:
        assert r2.t0 == pytest.approx(r1.t0, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(-0.4, 3).filter(lambda k: abs(k) > 1e-3), st.floats(1.2, 2.8))
def test_sharp_ratio_is_fiber_minimum(lam, mu, k, a):
    p = P(lam, mu, k, a, 4 - a)
    r = classify(E31, p)
    if r.classification is Classification.INADMISSIBLE:
        return
    assert r.sharp_ratio == minimize_g(FiberMap(p, 4.0)).g_min
    assert r.sharp_ratio <= max(lam, mu) ** -0.5 + 1e-15
    if r.classification is Classification.NONTRIVIAL and r.numeric_agrees:
        assert r.sharp_ratio < max(lam, mu) ** -0.5 - 1e-12


def test_sweep_monotone_and_ordered():
    ks = np.linspace(0.1, 2.0, 12)
    reps = classify_many(E31, [P(1, 1, float(k)) for k in ks])
    ratios = [r.sharp_ratio for r in reps]
    assert all(b <= a + 1e-15 for a, b in zip(ratios, ratios[1:]))
    par = classify_many(E31, [P(1, 1, float(k)) for k in ks], jobs=2)
    assert par == reps
