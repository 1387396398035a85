"""Critical Hardy-Sobolev exponents and the interpolation inequalities between them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from hardysob.radial import RadialProfile, weighted_lp_norm


def _check_dimension(N: int) -> None:
    if int(N) != N or N < 3:
        raise ValueError(f"dimension N must be an integer >= 3, got {N}")


def two_star(N: int, s: float) -> float:
    """Critical exponent 2(N-s)/(N-2) for the weight |x|^{-s}."""
    _check_dimension(N)
    if not 0.0 <= s <= 2.0:
        raise ValueError(f"singularity order s must lie in [0, 2], got {s}")
    return 2.0 * (N - s) / (N - 2)


def interp_theta(N: int, s1: float, s2: float, s3: float) -> float:
    """Hölder interpolation exponent for the middle norm.

    For ``0 <= s1 < s2 < s3 <= 2`` the middle norm satisfies
    ``|u|_{2*(s2),s2} <= |u|_{2*(s1),s1}**theta * |u|_{2*(s3),s3}**(1-theta)``
    with ``theta = (N-s1)(s3-s2) / ((N-s2)(s3-s1))``, always in (0, 1).
    """
    _check_dimension(N)
    if not 0.0 <= s1 < s2 < s3 <= 2.0:
        raise ValueError(f"need 0 <= s1 < s2 < s3 <= 2, got ({s1}, {s2}, {s3})")
    return (N - s1) * (s3 - s2) / ((N - s2) * (s3 - s1))


def vartheta(N: int, s1: float, s2: float) -> float:
    """Lower end N(s2-s1)/(s2(N-s1)) of the admissible gradient-interpolation range."""
    _check_dimension(N)
    if s2 == 0.0:
        raise ZeroDivisionError("vartheta is undefined for s2 = 0")
    if not 0.0 <= s1 <= s2 <= 2.0:
        raise ValueError(f"need 0 <= s1 <= s2 <= 2, got ({s1}, {s2})")
    return N * (s2 - s1) / (s2 * (N - s1))


def varsigma(N: int, s1: float, s2: float) -> float:
    """Upper end (N-s1)(2-s2)/((N-s2)(2-s1)) of the admissible sigma range."""
    _check_dimension(N)
    if not 0.0 <= s1 <= s2 <= 2.0:
        raise ValueError(f"need 0 <= s1 <= s2 <= 2, got ({s1}, {s2})")
    if s1 == s2:
        return 1.0
    return (N - s1) * (2.0 - s2) / ((N - s2) * (2.0 - s1))


@dataclass(frozen=True)
class Exponents:
    """Dimension and singularity orders with their critical exponents."""

    N: int
    s1: float
    s2: float
    two_star_s1: float = field(init=False)
    two_star_s2: float = field(init=False)

    def __post_init__(self):
        _check_dimension(self.N)
        for name in ("s1", "s2"):
            val = getattr(self, name)
            if not 0.0 < val < 2.0:
                raise ValueError(f"{name} must lie in (0, 2), got {val}")
        object.__setattr__(self, "two_star_s1", two_star(self.N, self.s1))
        object.__setattr__(self, "two_star_s2", two_star(self.N, self.s2))

    @classmethod
    def single(cls, N: int, s: float) -> "Exponents":
        return cls(N, s, s)

    @property
    def is_single(self) -> bool:
        return self.s1 == self.s2

    @property
    def s(self) -> float:
        if not self.is_single:
            raise ValueError("exponents carry two distinct singularity orders")
        return self.s1

    @property
    def two_star_s(self) -> float:
        return self.two_star_s2 if self.is_single else self.two_star_s1


def certify_interpolation(
    profile: RadialProfile, N: int, s1: float, s2: float, s3: float
) -> float:
    """Slack of the three-norm interpolation inequality on one profile.

    Returns ``|u|_1**theta * |u|_3**(1-theta) - |u|_2`` where ``|u|_i`` is
    the weighted norm ``|u|_{2*(s_i), s_i}``. The inequality is Hölder's,
    so the slack is nonnegative up to quadrature rounding.
    """
    if profile.grid.N != N:
        raise ValueError(f"profile lives in dimension {profile.grid.N}, not {N}")
    theta = interp_theta(N, s1, s2, s3)
    n1 = weighted_lp_norm(two_star(N, s1), s1, profile)
    n2 = weighted_lp_norm(two_star(N, s2), s2, profile)
    n3 = weighted_lp_norm(two_star(N, s3), s3, profile)
    if n2 == 0.0 and n1 == 0.0:
        return 0.0
    slack = n1**theta * n3 ** (1.0 - theta) - n2
    if not math.isfinite(slack):
        raise ArithmeticError("non-finite weighted norm in interpolation check")
    return slack
