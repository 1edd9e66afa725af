"""Mass chain, contact angles and the x -> y -> z coordinate frames.

Natural units throughout: m3 = L = hbar = 1. ``PhysicalUnits`` converts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

INF = math.inf

CANONICAL_MASSES = (INF, 6.0, 2.0, 1.0, 3.0, INF)
DIAGRAM_ANGLES = (math.pi / 3, math.pi / 3, math.pi / 4, math.pi / 3)

# reference transforms; T_ZX_12 is 12 * T_{z<-x}
_S2, _S3, _S6 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0)
T_ZY = np.array(
    [
        [-_S6, -_S2, -1.0, -_S3],
        [-_S6, _S2, 1.0, _S3],
        [0.0, -2 * _S2, 1.0, _S3],
        [0.0, 0.0, -3.0, _S3],
    ]
) / (2 * _S3)
T_ZX_12 = np.array(
    [
        [-6, -2, -1, -3],
        [-6, 2, 1, 3],
        [0, -4, 1, 3],
        [0, 0, -3, 3],
    ],
    dtype=np.int64,
)


class NoSolutionError(ValueError):
    pass


class UnsupportedChainError(ValueError):
    pass


@dataclass(frozen=True)
class PhysicalUnits:
    m3: float = 1.0
    L: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if min(self.m3, self.L, self.hbar) <= 0:
            raise ValueError("units must be positive")

    @property
    def energy_quantum(self) -> float:
        """pi^2 hbar^2 / (6 m3 L^2): the unit of the integer energies."""
        return math.pi**2 * self.hbar**2 / (6 * self.m3 * self.L**2)

    @property
    def natural_energy(self) -> float:
        """hbar^2 / (m3 L^2)."""
        return self.hbar**2 / (self.m3 * self.L**2)


@dataclass(frozen=True)
class MassChain:
    """Masses m0..m5 in units of m; m0 and m5 are the walls."""

    masses: tuple[float, ...] = CANONICAL_MASSES
    m: float = 1.0

    def __post_init__(self):
        if len(self.masses) != 6:
            raise ValueError("a chain has six masses, walls included")
        if any(not (x >= 0) for x in self.masses):
            raise ValueError("masses must be nonnegative")
        if any(math.isinf(x) for x in self.masses[1:5]):
            raise ValueError("only the outer masses may be infinite")

    @property
    def particles(self) -> tuple[float, ...]:
        return tuple(self.masses[1:5])

    @property
    def reduced_mass(self) -> float:
        """M = 2 m1."""
        return 2 * self.masses[1] * self.m

    def is_canonical(self) -> bool:
        return self.masses == CANONICAL_MASSES

    def scaled(self, c: float) -> "MassChain":
        return MassChain(tuple(x * c for x in self.masses), self.m)


def _tan2_angle(left: float, mid: float, right: float) -> float:
    if math.isinf(left) and math.isinf(right):
        raise ValueError("both outer masses of a triplet are infinite")
    if math.isinf(mid):
        raise ValueError("middle mass of a triplet is infinite")
    if math.isinf(left):
        return mid / right
    if math.isinf(right):
        return mid / left
    return mid * (left + mid + right) / (left * right)


def contact_angle(chain: MassChain, i: int) -> float:
    """Angle between the (i,i+1) and (i+1,i+2) contact hyperplanes.

    Infinite outer masses take the analytic limit of the formula.
    """
    if not 0 <= i <= 3:
        raise ValueError("triplet index must be in 0..3")
    m = chain.masses
    for a, b in ((m[i], m[i + 1]), (m[i + 1], m[i + 2])):
        if math.isinf(a) and math.isinf(b):
            raise ValueError("two adjacent infinite masses in one triplet")
    return math.atan(math.sqrt(_tan2_angle(m[i], m[i + 1], m[i + 2])))


def contact_angles(chain: MassChain = MassChain()) -> tuple[float, ...]:
    return tuple(contact_angle(chain, i) for i in range(4))


@dataclass
class MassSolution:
    ratios: tuple[float, float, float]  # (m1, m2, m4) / m3
    residual: float
    starts_converged: int


def _chain_residual(u: np.ndarray, target: np.ndarray) -> np.ndarray:
    r1, r2, r4 = np.exp(u)
    chain = MassChain((INF, r1, r2, 1.0, r4, INF))
    return np.log([_tan2_angle(*chain.masses[i:i + 3]) for i in range(4)]) - target


def solve_mass_chain(
    targets=DIAGRAM_ANGLES, n_starts: int = 64, seed: int = 0, tol: float = 1e-13, max_iter: int = 100
) -> MassSolution:
    """Recover (m1, m2, m4)/m3 from the four contact angles, walls infinite.

    Gauss-Newton on log mass ratios from many starts; every converged start
    must agree, otherwise the solution is not unique.
    """
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (4,):
        raise ValueError("need four target angles")
    if np.any(targets <= 0) or np.any(targets >= math.pi / 2 - 1e-12):
        raise NoSolutionError("target angles must lie strictly inside (0, pi/2)")
    goal = np.log(np.tan(targets) ** 2)

    rng = np.random.default_rng(seed)
    found = []
    for _ in range(n_starts):
        u = rng.uniform(-4, 4, size=3)
        for _ in range(max_iter):
            f = _chain_residual(u, goal)
            h = 1e-7
            J = np.empty((4, 3))
            for k in range(3):
                du = np.zeros(3)
                du[k] = h
                J[:, k] = (_chain_residual(u + du, goal) - _chain_residual(u - du, goal)) / (2 * h)
            step, *_ = np.linalg.lstsq(J, -f, rcond=None)
            u = u + np.clip(step, -2, 2)
            if np.max(np.abs(step)) < tol:
                break
        res = float(np.max(np.abs(_chain_residual(u, goal))))
        if res < 1e-11:
            found.append(np.exp(u))
    if not found:
        raise NoSolutionError("no positive mass ratios reproduce the target angles")
    sols = np.array(found)
    if np.max(np.ptp(sols, axis=0) / sols.mean(axis=0)) > 1e-8:
        raise NoSolutionError("multiple distinct mass solutions; the angles do not fix the chain")
    best = sols[np.argmin([np.max(np.abs(_chain_residual(np.log(s), goal))) for s in sols])]
    residual = float(np.max(np.abs(_chain_residual(np.log(best), goal))))
    return MassSolution(tuple(float(x) for x in best), residual, len(found))


@dataclass(frozen=True)
class FrameTransforms:
    T_zy: np.ndarray
    T_zx: np.ndarray
    det_zx: float
    T_zx_inv_T: np.ndarray = field(repr=False)

    def z_from_x(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.T_zx.T

    def pz_from_px(self, p) -> np.ndarray:
        return np.asarray(p, dtype=float) @ self.T_zx_inv_T.T


def reference_T_zx() -> np.ndarray:
    return T_ZX_12 / 12.0


def build_transforms(chain: MassChain = MassChain()) -> FrameTransforms:
    """Compose the mass scaling with the fixed rotation-inversion T_zy."""
    if not chain.is_canonical():
        raise UnsupportedChainError("only the (inf, 6, 2, 1, 3, inf) chain has an F4 kaleidoscope")
    M = chain.reduced_mass
    scale = np.diag(np.sqrt(np.array(chain.particles) * chain.m / M))
    T_zx = T_ZY @ scale
    if np.max(np.abs(T_zx - reference_T_zx())) > 1e-14:
        raise AssertionError("composed T_zx disagrees with the tabulated matrix")
    return FrameTransforms(T_ZY, T_zx, float(np.linalg.det(T_zx)), np.linalg.inv(T_zx).T)


@lru_cache(maxsize=1)
def canonical_transforms() -> FrameTransforms:
    return build_transforms(MassChain())


def det_T_zx_exact() -> Fraction:
    from .roots import _det

    return _det([[Fraction(int(c), 12) for c in row] for row in T_ZX_12])


# (normal, offset) with the open condition normal . z > offset
def simplex_inequalities() -> list[tuple[np.ndarray, float]]:
    from .roots import F4_ROOTS

    out = [(F4_ROOTS.minimal_root.to_array(), -1.0)]
    out += [(r.to_array(), 0.0) for r in F4_ROOTS.simple_roots]
    return out


def in_simplex_z(z, tol: float = 0.0) -> np.ndarray | bool:
    """Strict membership in the open fundamental simplex (``tol`` shrinks it)."""
    z = np.asarray(z, dtype=float)
    ok = np.ones(z.shape[:-1], dtype=bool)
    for n, c in simplex_inequalities():
        ok &= z @ n > c + tol
    return ok if ok.ndim else bool(ok)


def in_domain_x(x, L: float = 1.0) -> np.ndarray | bool:
    """-L < x1 < x2 < x3 < x4 < 0."""
    x = np.asarray(x, dtype=float)
    ok = (x[..., 0] > -L) & (x[..., 3] < 0)
    ok &= (x[..., 0] < x[..., 1]) & (x[..., 1] < x[..., 2]) & (x[..., 2] < x[..., 3])
    return ok if ok.ndim else bool(ok)


def simplex_vertices_x(L: float = 1.0) -> np.ndarray:
    return -L * np.array([[0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]], float)


def simplex_vertices_z() -> np.ndarray:
    return (simplex_vertices_x() @ T_ZX_12.T) / 12.0
