from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from octacube import invariants as inv
from octacube.dynamics import KINDS, collision_matrix
from octacube.jacobi import MassChain, build_transforms
from octacube.spectrum import enumerate_table

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@given(st.lists(fracs, min_size=4, max_size=4))
def test_w1_is_six_times_norm(v):
    assert inv.eval_w(1, v) == 6 * sum(c * c for c in v)


def test_w2_example():
    # (1,0,0,0): pairs (0,j) give 2 terms of 1 each for j = 1..3, others vanish
    assert inv.eval_w(2, [1, 0, 0, 0]) == 6
    assert inv.eval_w(2, [1, 1, 0, 0]) == 2**6 + 4 * 2
    assert inv.eval_w(4, [Fraction(1, 2)] * 4) == 6 * 1


def test_degrees():
    assert [inv.degree(M) for M in range(1, 5)] == [2, 6, 8, 12]
    with pytest.raises(ValueError):
        inv.degree(5)


def test_float_path_matches_exact():
    v = [Fraction(3, 7), Fraction(-2, 5), Fraction(1, 3), Fraction(5, 4)]
    arr = np.array([float(c) for c in v])
    for M in range(1, 5):
        assert float(inv.eval_w(M, arr)) == pytest.approx(float(inv.eval_w(M, v)), rel=1e-13)


@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_exact_invariance(M):
    assert inv.check_invariance(M, n_points=3, seed=M)


def test_broken_weights_detected():
    w = [1] * 12
    w[3] = 2
    assert not inv.check_invariance(2, n_points=2, weights=w)


def test_mirror_point():
    # on a mirror the point is fixed by a reflection; invariance still holds exactly
    pts = [(Fraction(1), Fraction(1), Fraction(0), Fraction(0))]
    assert inv.check_invariance(3, points=pts)


def test_I1_equals_144H():
    for lv in enumerate_table(500).levels():
        assert inv.hamiltonian_ratio(lv) == 1
        assert inv.operator_eigenvalue(1, lv) == 24 * lv.E_int


@settings(max_examples=50)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_classical_I1_is_kinetic(p):
    # w1(p_z) = 6 |p_z|^2 = 144 sum p_i^2 / (2 m_i)
    masses = np.array([6.0, 2.0, 1.0, 3.0])
    T = np.sum(np.array(p) ** 2 / (2 * masses))
    assert inv.classical_I(1, p) == pytest.approx(144 * T, rel=1e-12, abs=1e-12)


def test_jacobian_rank_cases():
    assert inv.independence_check() == 4
    assert inv.independence_check((0, 0, 0, 0)) == 0
    assert inv.independence_check((1, 1, 0, 0)) < 4


@pytest.mark.parametrize("kind", KINDS)
def test_invariant_under_collisions(kind):
    rng = np.random.default_rng(hash(kind) % 2**32)
    p = rng.normal(size=(20, 4))
    C = collision_matrix(kind)
    for M in range(1, 5):
        before = inv.classical_I(M, p)
        after = inv.classical_I(M, p @ C.T)
        assert np.allclose(after, before, rtol=1e-11)
