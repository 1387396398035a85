"""Calculus on cone-indexed sharp constants.

Constants of sub-cones are inputs: nothing here solves a PDE on a cone.
Tables map a half-aperture theta in (0, pi] to S(Omega_theta), which can
only decrease as the cone widens.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

ATTAIN_TOL = 1e-12
INCONSISTENT_TOL = 1e-9


@dataclass(frozen=True)
class ConeEntry:
    theta: float
    S: float
    provenance: str = "user"

    def __post_init__(self):
        if not 0.0 < self.theta <= math.pi:
            raise ValueError(f"theta must lie in (0, pi], got {self.theta}")
        if not self.S > 0:
            raise ValueError(f"cone constant must be positive, got {self.S}")


@dataclass(frozen=True)
class ConeConstantTable:
    entries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ents = tuple(e if isinstance(e, ConeEntry) else ConeEntry(*e) for e in self.entries)
        object.__setattr__(self, "entries", tuple(sorted(ents, key=lambda e: e.theta)))

    @classmethod
    def from_pairs(cls, pairs, provenance: str = "user") -> "ConeConstantTable":
        return cls(tuple(ConeEntry(t, S, provenance) for t, S in pairs))

    @classmethod
    def read_csv(cls, path: str | Path) -> "ConeConstantTable":
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
                "theta",
                "S",
                "provenance",
            ]:
                raise ValueError("expected header 'theta,S,provenance'")
            return cls(
                tuple(
                    ConeEntry(float(row["theta"]), float(row["S"]), row["provenance"])
                    for row in reader
                )
            )

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["theta", "S", "provenance"])
            for e in self.entries:
                w.writerow([format(e.theta, ".17g"), format(e.S, ".17g"), e.provenance])

    @property
    def thetas(self) -> list[float]:
        return [e.theta for e in self.entries]

    @property
    def values(self) -> list[float]:
        return [e.S for e in self.entries]


def whole_space_entry(S_RN: float, N: int) -> ConeEntry:
    """Entry at theta = pi from the whole-space constant.

    For N >= 4 removing a ray does not change the constant, so the
    half-aperture-pi cone inherits S(R^N).
    """
    if N < 4:
        raise ValueError("the theta = pi cone carries the whole-space constant only for N >= 4")
    return ConeEntry(math.pi, S_RN, "R^N-derived")


def validate_table(table: ConeConstantTable) -> list[tuple[int, int]]:
    """Index pairs (i, j) with theta_i < theta_j but S_i < S_j (indices into sorted entries)."""
    ents = table.entries
    bad = []
    for i in range(len(ents)):
        for j in range(i + 1, len(ents)):
            if ents[i].theta < ents[j].theta and ents[i].S < ents[j].S:
                bad.append((i, j))
    return bad


def intermediate_value_locate(table: ConeConstantTable, target_tau: float) -> tuple[float, float]:
    """Adjacent thetas whose constants bracket tau.

    By continuity of theta -> S(Omega_theta) a cone with constant exactly tau
    has its aperture in the returned interval. Above every entry the
    bracket is (0, smallest theta), since S blows up as the cone closes.
    """
    ents = table.entries
    if not ents:
        raise ValueError("empty table")
    if validate_table(table):
        raise ValueError("table is not monotone in theta")
    floor = ents[-1].S
    if target_tau < floor:
        raise ValueError(f"target {target_tau} is below the infimum entry {floor}")
    if target_tau > ents[0].S:
        return (0.0, ents[0].theta)
    for a, b in zip(ents, ents[1:]):
        if a.S >= target_tau >= b.S:
            return (a.theta, b.theta)
    return (ents[-1].theta, ents[-1].theta)


def gluing_energy(k: int, N: int, two_star_s: float, S_subcone: float) -> float:
    """(1/2 - 1/p) S^{2/(p-2)} 2^{k(N-1)} for 2^{k(N-1)} glued sub-cone bubbles."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k}")
    if not S_subcone > 0:
        raise ValueError("S_subcone must be positive")
    p = two_star_s
    return (0.5 - 1.0 / p) * S_subcone ** (2.0 / (p - 2.0)) * 2.0 ** (k * (N - 1))


class Attainment(str, enum.Enum):
    ATTAINED = "Attained"
    NOT_DECIDABLE = "NotDecidable"


def attainment_calculus(S_omega: float, S0: float, Sinf: float) -> Attainment:
    """Strictly below both local constants implies attainment; equality decides nothing."""
    for name, v in (("S_omega", S_omega), ("S0", S0), ("Sinf", Sinf)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    m = min(S0, Sinf)
    if S_omega > m + INCONSISTENT_TOL:
        raise ValueError(f"inconsistent input: S_omega = {S_omega} exceeds min(S0, Sinf) = {m}")
    if S_omega < m - ATTAIN_TOL:
        return Attainment.ATTAINED
    return Attainment.NOT_DECIDABLE
