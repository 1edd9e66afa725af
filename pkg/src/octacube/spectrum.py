"""Exact Bethe-Ansatz spectrum of the 6:2:1:3 hard-core chain.

Energies are exact integers in units of pi^2 hbar^2 / (6 m3 L^2); wavevectors
are integer 4-vectors in units of pi/L. The identity 4 E_int = |k_int|^2
ties the two together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .jacobi import PhysicalUnits

GROUND_QN = (3, 1, 1, 2)
GROUND_E_INT = 39


class InadmissibleError(ValueError):
    pass


class QuantumNumbers(NamedTuple):
    n1: int
    n2: int
    n3: int
    n4: int

    def is_admissible(self) -> bool:
        return self.n2 >= 1 and self.n1 > self.n4 > self.n3 >= 1


def _check(qn) -> QuantumNumbers:
    qn = QuantumNumbers(*(int(n) for n in qn))
    if not qn.is_admissible():
        raise InadmissibleError(f"{tuple(qn)} violates n2 >= 1 and n1 > n4 > n3 >= 1")
    return qn


def wavevector(qn) -> tuple[int, int, int, int]:
    n1, n2, n3, n4 = _check(qn)
    return (2 * n1 + 2 * n2 + n3 + n4, 2 * n2 + n3 + n4, n3 + n4, n4 - n3)


def _energy(n1, n2, n3, n4):
    return 2 * n2 * (n1 + n2 + n3 + n4) + n1 * n1 + n3 * n3 + n4 * n4 + n1 * n3 + n1 * n4 + n3 * n4


def energy(qn) -> int:
    return _energy(*_check(qn))


def quantum_numbers_from_k(k) -> QuantumNumbers:
    """Invert k = sum n_j kappa_j (k in units pi/L)."""
    k1, k2, k3, k4 = (int(c) for c in k)
    if (k3 + k4) % 2 or (k2 - k3) % 2 or (k1 - k2) % 2:
        raise InadmissibleError(f"{k} is not a reciprocal-lattice vector")
    n4 = (k3 + k4) // 2
    n3 = (k3 - k4) // 2
    n2 = (k2 - k3) // 2
    n1 = (k1 - k2) // 2
    return QuantumNumbers(n1, n2, n3, n4)


@dataclass(frozen=True)
class Level:
    qn: QuantumNumbers
    k_int: tuple[int, int, int, int]
    E_int: int

    @classmethod
    def from_qn(cls, qn) -> "Level":
        qn = _check(qn)
        return cls(qn, wavevector(qn), energy(qn))

    def E_phys(self, units: PhysicalUnits = PhysicalUnits()) -> float:
        return self.E_int * units.energy_quantum


@dataclass
class SpectrumTable:
    """Column store for large enumerations; rows sorted by (E_int, n1, n2, n3, n4)."""

    qn: np.ndarray  # (N, 4) int64
    k: np.ndarray  # (N, 4) int64
    E_int: np.ndarray  # (N,) int64

    def __len__(self) -> int:
        return len(self.E_int)

    def levels(self) -> list[Level]:
        return [
            Level(QuantumNumbers(*map(int, q)), tuple(map(int, kk)), int(e))
            for q, kk, e in zip(self.qn, self.k, self.E_int)
        ]

    def count_below(self, E_int_max) -> np.ndarray:
        """Number of levels with E_int <= each entry of ``E_int_max``."""
        return np.searchsorted(self.E_int, np.asarray(E_int_max), side="right")


def _n2_max(S: int, Q: int, E_max: int) -> int:
    # largest n2 with 2 n2^2 + 2 S n2 + Q <= E_max
    D = S * S - 2 * (Q - E_max)
    if D < 0:
        return 0
    n2 = (math.isqrt(D) - S) // 2
    while 2 * (n2 + 1) ** 2 + 2 * S * (n2 + 1) + Q <= E_max:
        n2 += 1
    while n2 > 0 and 2 * n2 * n2 + 2 * S * n2 + Q > E_max:
        n2 -= 1
    return max(n2, 0)


def enumerate_table(E_max_int: int) -> SpectrumTable:
    """All admissible levels with E_int <= E_max_int.

    E is increasing in every quantum number, so each loop stops as soon as
    its smallest completion (the remaining numbers at their minima) exceeds
    the cap; nothing admissible can be skipped.
    """
    E_max_int = int(E_max_int)
    blocks = []
    n3 = 1
    while _energy(n3 + 2, 1, n3, n3 + 1) <= E_max_int:
        n4 = n3 + 1
        while _energy(n4 + 1, 1, n3, n4) <= E_max_int:
            n1 = n4 + 1
            while True:
                S = n1 + n3 + n4
                Q = n1 * n1 + n3 * n3 + n4 * n4 + n1 * n3 + n1 * n4 + n3 * n4
                top = _n2_max(S, Q, E_max_int)
                if top < 1:
                    break
                blocks.append((n1, n3, n4, top))
                n1 += 1
            n4 += 1
        n3 += 1
    if not blocks:
        empty = np.zeros((0, 4), dtype=np.int64)
        return SpectrumTable(empty, empty.copy(), np.zeros(0, dtype=np.int64))

    b = np.array(blocks, dtype=np.int64)
    counts = b[:, 3]
    starts = np.cumsum(counts) - counts
    n2 = np.arange(counts.sum(), dtype=np.int64) - np.repeat(starts, counts) + 1
    n1 = np.repeat(b[:, 0], counts)
    n3 = np.repeat(b[:, 1], counts)
    n4 = np.repeat(b[:, 2], counts)
    E = _energy(n1, n2, n3, n4)
    order = np.lexsort((n4, n3, n2, n1, E))
    qn = np.stack([n1, n2, n3, n4], axis=1)[order]
    n1, n2, n3, n4 = qn.T
    k = np.stack([2 * n1 + 2 * n2 + n3 + n4, 2 * n2 + n3 + n4, n3 + n4, n4 - n3], axis=1)
    return SpectrumTable(qn, k, E[order])


def enumerate_levels(E_max_int: int) -> list[Level]:
    return enumerate_table(E_max_int).levels()


def weyl_count(E_phys: float, units: PhysicalUnits = PhysicalUnits()) -> float:
    """Leading-order Weyl estimate m3^2 L^4 E^2 / (32 pi^2 hbar^4)."""
    if E_phys < 0:
        raise ValueError("energy must be nonnegative")
    return units.m3**2 * units.L**4 * E_phys**2 / (32 * math.pi**2 * units.hbar**4)


def e_int_cap(E_phys: float, units: PhysicalUnits = PhysicalUnits()) -> int:
    """Largest integer energy not exceeding a physical energy."""
    q = E_phys / units.energy_quantum
    n = math.floor(q)
    # guard against q landing a hair under an integer
    if math.isclose(q, n + 1, rel_tol=1e-13):
        n += 1
    return int(n)


def staircase(
    E_max_int: int, n_points: int, units: PhysicalUnits = PhysicalUnits(), table: SpectrumTable | None = None
) -> list[tuple[float, int, float]]:
    """Exact counting function next to Weyl's estimate on a uniform energy grid.

    Rows are (E_phys, N_exact(E), N_weyl(E)) for E from 0 to the cap.
    """
    if n_points < 2:
        raise ValueError("need at least two grid points")
    if table is None:
        table = enumerate_table(E_max_int)
    E_top = E_max_int * units.energy_quantum
    grid = np.linspace(0.0, E_top, n_points)
    caps = np.floor(grid / units.energy_quantum + 1e-12).astype(np.int64)
    counts = table.count_below(caps)
    return [(float(E), int(n), weyl_count(float(E), units)) for E, n in zip(grid, counts)]
