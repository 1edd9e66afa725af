"""The 24-cell unit cell, folding into the fundamental simplex, tiling checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .roots import F4_ROOTS, Group, HalfIntVec4, f4_group, orbit, reflection_matrix

BOUNDARY_TOL = 1e-12
MAX_FOLD_STEPS = 10_000

# cycle order used by the descent: alpha_1..alpha_4, then alpha_0
_ALPHA = np.array([r.to_array() for r in F4_ROOTS.simple_roots] + [F4_ROOTS.minimal_root.to_array()])
_ALPHA_NORM2 = np.einsum("ij,ij->i", _ALPHA, _ALPHA)
_OFFSET = np.array([0.0, 0.0, 0.0, 0.0, -1.0])


class FoldError(RuntimeError):
    pass


@dataclass(frozen=True)
class Octacube:
    facet_normals: frozenset[HalfIntVec4]
    vertices: frozenset[HalfIntVec4]

    @property
    def facet_centers(self) -> frozenset[tuple]:
        return frozenset(tuple(c / 2 for c in n.components) for n in self.facet_normals)

    def normals_array(self) -> np.ndarray:
        return np.array(sorted(n.num for n in self.facet_normals), dtype=float) / 2.0


def _cell_vertices() -> frozenset[HalfIntVec4]:
    out = set()
    for i in range(4):
        for s in (-1, 1):
            v = [0, 0, 0, 0]
            v[i] = 2 * s
            out.add(HalfIntVec4(tuple(v)))
    for bits in range(16):
        out.add(HalfIntVec4(tuple(1 if bits >> i & 1 else -1 for i in range(4))))
    return frozenset(out)


@lru_cache(maxsize=1)
def octacube(group: Group | None = None) -> Octacube:
    group = group or f4_group()
    return Octacube(orbit(F4_ROOTS.minimal_root, group), _cell_vertices())


def cell_contains(z, strict_tol: float = 0.0) -> np.ndarray | bool:
    """All 24 facet inequalities (g alpha_0) . z > -1, strictly."""
    z = np.asarray(z, dtype=float)
    proj = z @ octacube().normals_array().T
    ok = np.all(proj > -1.0 + strict_tol, axis=-1)
    return ok if ok.ndim else bool(ok)


@dataclass(frozen=True)
class FoldResult:
    """Folded point plus the map back: z_in = element @ z_folded + translation."""

    z_folded: np.ndarray
    element: np.ndarray
    translation: np.ndarray
    parity: int
    steps: int
    on_boundary: bool

    def reconstruct(self) -> np.ndarray:
        return self.element @ self.z_folded + self.translation


@dataclass
class FoldBatch:
    z_folded: np.ndarray  # (N, 4)
    element: np.ndarray  # (N, 4, 4) linear part of the unfolding map
    translation: np.ndarray  # (N, 4)
    parity: np.ndarray  # (N,)
    steps: np.ndarray  # (N,)
    on_boundary: np.ndarray  # (N,)

    def reconstruct(self) -> np.ndarray:
        return np.einsum("nij,nj->ni", self.element, self.z_folded) + self.translation

    def __getitem__(self, i: int) -> FoldResult:
        return FoldResult(
            self.z_folded[i], self.element[i], self.translation[i],
            int(self.parity[i]), int(self.steps[i]), bool(self.on_boundary[i]),
        )


@lru_cache(maxsize=1)
def _fold_tables() -> tuple[np.ndarray, np.ndarray]:
    group = f4_group()
    normals = list(F4_ROOTS.simple_roots) + [F4_ROOTS.minimal_root]
    return group.left_mult_table([reflection_matrix(r) for r in normals]), group.inverse_index()


def fold_many(z, tol: float = BOUNDARY_TOL, max_steps: int = MAX_FOLD_STEPS) -> FoldBatch:
    """Reflect each point into the closed fundamental simplex.

    Sweeps the mirrors in the order 1, 2, 3, 4, 0 and reflects any point on
    the wrong side by more than ``tol``. Each reflection strictly decreases
    the number of affine mirrors separating the point from the simplex, so
    the sweep terminates.

    The accumulated map is z_folded = W z + b, with W tracked as a group
    index. We return its inverse: element = W^T and translation = -W^T b.
    """
    z = np.array(z, dtype=float, copy=True)
    if z.ndim == 1:
        z = z[None, :]
    if not np.all(np.isfinite(z)):
        raise FoldError("cannot fold non-finite coordinates")
    n = len(z)
    group = f4_group()
    mult, inv = _fold_tables()
    w = np.zeros(n, dtype=np.int64)  # index of W in the group table (0 = identity)
    b = np.zeros((n, 4))
    steps = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    while active.size:
        zl, wl, bl = z[active], w[active], b[active]
        moved = np.zeros(active.size, dtype=np.int64)
        for j in range(5):
            a = _ALPHA[j]
            h = zl @ a - _OFFSET[j]
            bad = h < -tol
            if not bad.any():
                continue
            c = np.where(bad, 2.0 / _ALPHA_NORM2[j], 0.0)
            zl = zl - (c * h)[:, None] * a
            # W <- s_j W ; b <- s_j b, minus alpha_0 for the affine mirror
            wl = np.where(bad, mult[j, wl], wl)
            bl = bl - (c * (bl @ a))[:, None] * a
            if j == 4:
                bl = bl - bad[:, None] * a
            moved += bad
        z[active], w[active], b[active] = zl, wl, bl
        steps[active] += moved
        if steps.max(initial=0) > max_steps:
            raise FoldError(f"fold did not terminate within {max_steps} reflections")
        active = active[moved > 0]

    element = group.mats[inv[w]]
    translation = -np.einsum("nij,nj->ni", element, b) + 0.0
    h = z @ _ALPHA.T - _OFFSET
    on_boundary = np.any(np.abs(h) <= tol, axis=1)
    parity = np.where(steps % 2 == 0, 1, -1)
    return FoldBatch(z, element, translation, parity, steps, on_boundary)


def fold(z, tol: float = BOUNDARY_TOL) -> FoldResult:
    return fold_many(np.asarray(z, dtype=float)[None, :], tol)[0]


def in_closed_simplex(z, tol: float = BOUNDARY_TOL) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=float))
    return np.all(z @ _ALPHA.T - _OFFSET >= -tol, axis=1)


def simplex_images_containing(z, group: Group | None = None, margin: float = 1e-9) -> np.ndarray:
    """How many open simplices D_g (g in F4) contain each point, away from a margin shell."""
    group = group or f4_group()
    z = np.atleast_2d(np.asarray(z, dtype=float))
    # D_g = g D_e: g^{-1} z must satisfy the five inequalities
    pre = np.einsum("gji,nj->ngi", group.mats, z)  # g^T z = g^{-1} z
    h = pre @ _ALPHA.T - _OFFSET
    return np.sum(np.all(h > margin, axis=2), axis=1)


@dataclass
class TilingReport:
    n_samples: int
    seed: int
    max_reconstruction_error: float
    all_translations_integer: bool
    all_translations_even: bool
    all_in_closed_simplex: bool
    parity_matches_det: bool
    cell_volume: float
    cell_volume_stderr: float
    max_images_per_point: int
    min_images_per_point: int

    @property
    def ok(self) -> bool:
        return (
            self.max_reconstruction_error < 1e-12
            and self.all_translations_integer
            and self.all_translations_even
            and self.all_in_closed_simplex
            and self.parity_matches_det
            and abs(self.cell_volume - 2.0) <= 3 * self.cell_volume_stderr
            and self.max_images_per_point == 1
            and self.min_images_per_point == 1
        )


def verify_tiling(n_samples: int = 100_000, seed: int = 0, half_width: float = 10.0) -> TilingReport:
    rng = np.random.Generator(np.random.Philox(seed))
    z = rng.uniform(-half_width, half_width, size=(n_samples, 4))
    res = fold_many(z)
    err = float(np.max(np.abs(res.reconstruct() - z)))
    t = res.translation
    t_int = np.rint(t)
    integer = bool(np.max(np.abs(t - t_int)) < 1e-9)
    even = bool(np.all(t_int.sum(axis=1).astype(np.int64) % 2 == 0))
    closed = bool(np.all(in_closed_simplex(res.z_folded)))
    dets = np.linalg.det(res.element)
    parity_ok = bool(np.all(np.rint(dets) == res.parity))

    box = rng.uniform(-1.0, 1.0, size=(n_samples, 4))
    hits = cell_contains(box)
    p = hits.mean()
    vol = 16.0 * p
    vol_err = 16.0 * np.sqrt(p * (1 - p) / n_samples)

    inside = box[hits][:2000]
    counts = simplex_images_containing(inside)
    # points within the margin shell of a mirror are counted 0 times; drop them
    counts = counts[counts > 0]
    return TilingReport(
        n_samples, seed, err, integer, even, closed, parity_ok, float(vol), float(vol_err),
        int(counts.max()) if counts.size else 0, int(counts.min()) if counts.size else 0,
    )
