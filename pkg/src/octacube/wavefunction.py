"""Bethe-Ansatz eigenfunctions as signed plane-wave sums over F4.

psi(z) = (V_D |G|)^(-1/2) sum_g parity(g) exp(i (g k) . z)

F4 contains -1 and det(-g) = det(g) in four dimensions, so the terms for g
and -g pair into 2 cos((g k) . z). We sum over one representative of each
pair; psi comes out real.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .jacobi import PhysicalUnits, canonical_transforms
from .roots import D4_LATTICE, Group, f4_group
from .spectrum import Level
from .tiling import fold_many

CELL_VOLUME = 2.0
SIMPLEX_VOLUME = 1.0 / 576.0
CHUNK = 4096
DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    pass


def worker_count() -> int:
    cap = os.environ.get("OCTACUBE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


@dataclass(frozen=True)
class Eigenstate:
    level: Level
    group: Group

    @property
    def prefactor_z(self) -> float:
        return 1.0 / math.sqrt(SIMPLEX_VOLUME * len(self.group))

    def prefactor_x(self, units: PhysicalUnits = PhysicalUnits()) -> float:
        return 1.0 / math.sqrt(48.0 * units.L**4)

    @cached_property
    def rotated_k(self) -> np.ndarray:
        """All images g k, in units pi/L, as exact integers (one row per element)."""
        doubled = self.group.apply_int(np.asarray(self.level.k_int, dtype=np.int64) * 2)
        # k has entries of one parity, so every image is integral
        if np.any(doubled % 2):
            raise ArithmeticError("an image of k left the integer lattice")
        return doubled // 2

    @cached_property
    def _half(self) -> tuple[np.ndarray, np.ndarray]:
        neg = self.group.negation_index()
        if np.any(neg < 0):
            raise ValueError("group lacks -1; the cosine pairing does not apply")
        reps = np.flatnonzero(np.arange(len(neg)) < neg)
        gk = self.rotated_k[reps].astype(float) * math.pi
        return np.ascontiguousarray(gk.T), self.group.parity[reps].astype(float)

    @property
    def term_scale(self) -> float:
        """Sum of the magnitudes of all |G| terms in psi."""
        return self.prefactor_z * len(self.group)

    @property
    def typical_amplitude(self) -> float:
        """RMS of psi over the simplex: 1 / sqrt(V_D)."""
        return 1.0 / math.sqrt(SIMPLEX_VOLUME)


def make_state(qn_or_level, group: Group | None = None) -> Eigenstate:
    level = qn_or_level if isinstance(qn_or_level, Level) else Level.from_qn(qn_or_level)
    return Eigenstate(level, group or f4_group())


def _psi_chunk(gkT: np.ndarray, par: np.ndarray, z: np.ndarray) -> np.ndarray:
    c = np.cos(z @ gkT)
    c *= par
    # pairwise reduction along the contiguous axis keeps the cancellation error at O(eps log n)
    return c.sum(axis=1)


def eval_psi_z(state: Eigenstate, z) -> np.ndarray | complex:
    z = np.asarray(z, dtype=float)
    single = z.ndim == 1
    pts = np.ascontiguousarray(np.atleast_2d(z))
    gkT, par = state._half
    chunks = [pts[i:i + CHUNK] for i in range(0, len(pts), CHUNK)]
    nw = worker_count()
    if nw > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(nw) as ex:
            parts = list(ex.map(lambda c: _psi_chunk(gkT, par, c), chunks))
    else:
        parts = [_psi_chunk(gkT, par, c) for c in chunks]
    out = (2.0 * state.prefactor_z) * np.concatenate(parts) if parts else np.zeros(0)
    out = out.astype(complex)
    return complex(out[0]) if single else out


def check_domain(x, L: float = 1.0, tol: float = DOMAIN_TOL) -> None:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    t = tol * L
    ok = (x[:, 0] >= -L - t) & (x[:, 3] <= t)
    ok &= np.all(np.diff(x, axis=1) >= -t, axis=1)
    if not np.all(ok):
        raise DomainError("x lies outside -L <= x1 <= x2 <= x3 <= x4 <= 0; fold it first")


def eval_Psi_x(state: Eigenstate, x, units: PhysicalUnits = PhysicalUnits()) -> np.ndarray | complex:
    """sqrt|det T_zx| psi(T_zx x), normalized on the ordered simplex in x."""
    x = np.asarray(x, dtype=float)
    check_domain(x, units.L)
    tf = canonical_transforms()
    z = tf.z_from_x(x / units.L)
    scale = math.sqrt(abs(tf.det_zx)) / units.L**2
    return scale * eval_psi_z(state, z)


@dataclass(frozen=True)
class MCEstimate:
    value: complex
    std_error: float
    n_samples: int
    seed: int

    def to_json(self) -> dict:
        return {
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "std_error": float(self.std_error),
            "n_samples": int(self.n_samples),
            "seed": int(self.seed),
        }


def sample_ordered_simplex(n: int, seed: int, L: float = 1.0) -> np.ndarray:
    """Uniform points of -L < x1 < x2 < x3 < x4 < 0 (sorted i.i.d. uniforms)."""
    rng = np.random.Generator(np.random.Philox(seed))
    u = np.sort(rng.random((n, 4)), axis=1)
    return -L + L * u


CONTACT_NAMES = ("wall_left", "pair_12", "pair_23", "pair_34", "wall_right")


def onto_contact(x: np.ndarray, which: int, L: float = 1.0) -> np.ndarray:
    """Push points onto contact ``which``: 0 left wall, 1..3 pair (i, i+1), 4 right wall."""
    y = np.array(x, dtype=float, copy=True)
    if which == 0:
        y[:, 0] = -L
    elif which == 4:
        y[:, 3] = 0.0
    elif which in (1, 2, 3):
        y[:, which] = y[:, which - 1]
    else:
        raise ValueError("contact index must be 0..4")
    return y


def mc_integrate(f, n_samples: int, seed: int, L: float = 1.0) -> MCEstimate:
    """Monte Carlo integral of ``f(x)`` over the ordered simplex."""
    x = sample_ordered_simplex(n_samples, seed, L)
    vals = np.asarray(f(x), dtype=complex)
    if vals.shape == ():
        vals = np.full(n_samples, vals)
    vol = L**4 / 24.0
    mean = vals.mean()
    var = np.mean(np.abs(vals - mean) ** 2) * n_samples / max(n_samples - 1, 1)
    return MCEstimate(complex(vol * mean), float(vol * math.sqrt(var / n_samples)), n_samples, seed)


def mc_normalization(
    state: Eigenstate, n_samples: int = 200_000, seed: int = 0, units: PhysicalUnits = PhysicalUnits()
) -> MCEstimate:
    if n_samples < 1000:
        raise ValueError("use at least 1000 samples")
    return mc_integrate(lambda x: np.abs(eval_Psi_x(state, x, units)) ** 2, n_samples, seed, units.L)


def mc_overlap(
    a: Eigenstate, b: Eigenstate, n_samples: int = 200_000, seed: int = 0, units: PhysicalUnits = PhysicalUnits()
) -> MCEstimate:
    """Estimate of the integral of conj(Psi_a) Psi_b on one shared sample stream."""
    if n_samples < 1000:
        raise ValueError("use at least 1000 samples")

    def integrand(x):
        return np.conj(eval_Psi_x(a, x, units)) * eval_Psi_x(b, x, units)

    return mc_integrate(integrand, n_samples, seed, units.L)


def lattice_generators() -> np.ndarray:
    return np.array([a.to_array() for a in D4_LATTICE.generators])


def _plane_frame(normal: np.ndarray) -> np.ndarray:
    """Orthonormal basis (3 rows) of the hyperplane orthogonal to ``normal``."""
    n = normal / np.linalg.norm(normal)
    q, _ = np.linalg.qr(np.column_stack([n, np.eye(4)]))
    frame = q[:, 1:4].T
    # fix signs so the frame does not depend on LAPACK conventions
    for i, row in enumerate(frame):
        k = np.argmax(np.abs(row))
        if row[k] < 0:
            frame[i] = -row
    return frame


@dataclass
class DensitySection:
    lon: np.ndarray
    lat: np.ndarray
    density: np.ndarray
    points: np.ndarray  # z coordinates of the samples
    center: np.ndarray
    radius: float

    def rows(self):
        return zip(self.lon.ravel(), self.lat.ravel(), self.density.ravel())


def density_section(
    state: Eigenstate,
    plane: tuple,
    sphere: tuple,
    resolution: int = 64,
    view=(0.0, 0.0, 1.0),
    element: int | None = None,
) -> DensitySection:
    """|psi|^2 on the 2-sphere cut from a 3-sphere by a 3-plane, all in z.

    ``plane`` is (normal, offset) for normal . z = offset; ``sphere`` is
    (center, radius). The sample grid covers the hemisphere facing ``view``
    (a direction in the plane's own 3D frame): lat runs from the rim (0)
    to the pole (pi/2), lon all the way round. ``element`` maps the whole
    construction, frame included, through a group element.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    normal = np.asarray(plane[0], dtype=float)
    offset = float(plane[1])
    center = np.asarray(sphere[0], dtype=float)
    radius = float(sphere[1])
    if radius < 0 or not np.linalg.norm(normal) > 0:
        raise ValueError("need a nonzero plane normal and a nonnegative radius")
    nn = normal @ normal
    dist = (normal @ center - offset) / math.sqrt(nn)
    r2 = radius**2 - dist**2
    if r2 < -1e-14:
        raise ValueError("plane does not meet the sphere")
    r = math.sqrt(max(r2, 0.0))
    c = center - (normal @ center - offset) / nn * normal

    frame = _plane_frame(normal)
    v = np.asarray(view, dtype=float)
    v = v / np.linalg.norm(v)
    # local orthonormal frame (e1, e2, pole) inside the 3-plane
    helper = np.eye(3)[np.argmin(np.abs(v))]
    e1 = np.cross(v, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(v, e1)
    local = np.stack([e1, e2, v]) @ frame  # rows are 4-vectors

    if r == 0.0:
        lon = np.zeros((1, 1))
        lat = np.full((1, 1), math.pi / 2)
    else:
        lon, lat = np.meshgrid(
            np.linspace(0.0, 2 * math.pi, resolution, endpoint=False),
            np.linspace(0.0, math.pi / 2, resolution),
        )
    dirs = np.stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=-1)
    pts = c + r * (dirs.reshape(-1, 3) @ local)
    if element is not None:
        g = state.group.mats[element]
        pts = pts @ g.T
        c = g @ c
    folded = fold_many(pts)
    psi = eval_psi_z(state, folded.z_folded)
    dens = (np.abs(psi) ** 2).reshape(lon.shape)
    return DensitySection(lon, lat, dens, pts, c, r)
