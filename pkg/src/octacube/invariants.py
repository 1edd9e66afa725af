"""F4-invariant polynomials w_1..w_4 and the integrals of motion built on them.

w_M(v) = sum over i < j of (v_i - v_j)^l + (v_i + v_j)^l, l = 2, 6, 8, 12.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .jacobi import canonical_transforms
from .roots import Group, f4_group

DEGREES = {1: 2, 2: 6, 3: 8, 4: 12}
_PAIRS = tuple(combinations(range(4), 2))


def degree(M: int) -> int:
    try:
        return DEGREES[M]
    except KeyError:
        raise ValueError(f"no invariant with index {M}; use 1..4") from None


def eval_w(M: int, v: Sequence, weights: Sequence | None = None):
    """Exact for int/Fraction input, float otherwise; works on (..., 4) arrays too.

    ``weights`` (12 numbers, one per pair term in order (i-j, i+j) for i<j)
    exists only to build deliberately broken polynomials for negative tests.
    """
    l = degree(M)
    if isinstance(v, np.ndarray) and v.dtype != object:
        v = v.astype(float)
        out = np.zeros(v.shape[:-1])
        for n, (i, j) in enumerate(_PAIRS):
            wm, wp = (1.0, 1.0) if weights is None else (weights[2 * n], weights[2 * n + 1])
            out = out + wm * (v[..., i] - v[..., j]) ** l + wp * (v[..., i] + v[..., j]) ** l
        return out
    total = 0
    for n, (i, j) in enumerate(_PAIRS):
        wm, wp = (1, 1) if weights is None else (weights[2 * n], weights[2 * n + 1])
        total += wm * (v[i] - v[j]) ** l + wp * (v[i] + v[j]) ** l
    return total


def random_rational_points(n: int, seed: int, max_den: int = 7, max_num: int = 9) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    return [
        tuple(Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den)) for _ in range(4))
        for _ in range(n)
    ]


def check_invariance(
    M: int, group: Group | None = None, n_points: int = 5, seed: int = 0,
    weights: Sequence | None = None, points=None,
) -> bool:
    """Exact test of w(g v) == w(v) for every g at rational points.

    Points are cleared to integers by their common denominator D and the
    doubled group matrices act on them, so w(2 g D v) == 2^l D^l w(g v)
    stays in integer arithmetic.
    """
    group = group or f4_group()
    l = degree(M)
    pts = points if points is not None else random_rational_points(n_points, seed)
    for p in pts:
        p = [Fraction(c) for c in p]
        D = 1
        for c in p:
            D = D * c.denominator // np.gcd(D, c.denominator)
        u = np.array([int(c * D) for c in p], dtype=object)
        ref = 2**l * eval_w(M, list(u), weights)
        imgs = group.mats2.astype(object) @ u
        for img in imgs:
            if eval_w(M, list(img), weights) != ref:
                return False
    return True


def operator_eigenvalue(M: int, state_or_k) -> int:
    """w_M(k) for the state's integer wavevector, in units (pi hbar / L)^l."""
    k = getattr(getattr(state_or_k, "level", state_or_k), "k_int", state_or_k)
    return eval_w(M, [int(c) for c in k])


def hamiltonian_ratio(level) -> Fraction:
    """(hbar^2 w_1(k) / (144 m)) / E, exactly; equals 1 when I_1 / m = 144 H.

    Both sides are in units pi^2 hbar^2 / (m L^2), with m = m3.
    """
    lhs = Fraction(operator_eigenvalue(1, level), 144)
    return lhs / Fraction(level.E_int, 6)


def classical_I(M: int, p_x) -> np.ndarray | float:
    """w_M of the z-frame momenta ((T_zx)^-1)^T p_x."""
    pz = canonical_transforms().pz_from_px(p_x)
    out = eval_w(M, np.asarray(pz, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def jacobian(v, h: float = 1e-5) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    J = np.empty((4, 4))
    for k in range(4):
        dv = np.zeros(4)
        dv[k] = h
        for M in range(1, 5):
            J[M - 1, k] = (eval_w(M, v + dv) - eval_w(M, v - dv)) / (2 * h)
    return J


def independence_check(v=(1.0, 0.9, 0.7, 0.3), h: float = 1e-5, rel_tol: float = 1e-8) -> int:
    """Numerical rank of d(w_1..w_4)/dv at ``v``."""
    s = np.linalg.svd(jacobian(v, h), compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))
