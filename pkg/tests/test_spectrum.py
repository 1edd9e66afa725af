import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from octacube import spectrum
from octacube.jacobi import PhysicalUnits
from octacube.roots import F4_ROOTS, f4_group
from octacube.spectrum import (
    InadmissibleError,
    Level,
    QuantumNumbers,
    energy,
    enumerate_levels,
    enumerate_table,
    quantum_numbers_from_k,
    wavevector,
)
from oracles import chamber_oracle


def test_ground_state():
    assert energy((3, 1, 1, 2)) == 39
    assert wavevector((3, 1, 1, 2)) == (11, 5, 3, 1)
    lv = Level.from_qn((3, 1, 1, 2))
    u = PhysicalUnits()
    # 39 pi^2/6 = 13 pi^2 / 2
    assert lv.E_phys(u) == pytest.approx(13 * math.pi**2 / 2, rel=1e-15)


def test_first_levels():
    t = enumerate_table(60)
    assert tuple(t.qn[0]) == (3, 1, 1, 2)
    assert t.E_int[0] == 39
    assert tuple(t.qn[1]) == (4, 1, 1, 2)
    assert t.E_int[1] == 51


@pytest.mark.parametrize("qn", [(2, 1, 1, 2), (3, 0, 1, 2), (3, 1, 0, 2), (3, 1, 2, 2), (1, 1, 1, 1)])
def test_inadmissible(qn):
    with pytest.raises(InadmissibleError):
        energy(qn)
    with pytest.raises(InadmissibleError):
        wavevector(qn)
    assert not QuantumNumbers(*qn).is_admissible()


def test_empty_below_ground():
    assert len(enumerate_table(38)) == 0
    assert len(enumerate_table(39)) == 1


@pytest.mark.parametrize("E_max", [200, 2000])
def test_matches_chamber_oracle(E_max):
    got = {lv.k_int for lv in enumerate_levels(E_max)}
    assert got == chamber_oracle(E_max)


def test_table_sorted_and_consistent():
    t = enumerate_table(3000)
    assert np.all(np.diff(t.E_int) >= 0)
    assert np.all(4 * t.E_int == np.sum(t.k**2, axis=1))
    for lv in t.levels()[::97]:
        assert energy(lv.qn) == lv.E_int
        assert wavevector(lv.qn) == lv.k_int
    assert len({tuple(q) for q in t.qn}) == len(t)


@given(
    st.integers(1, 30), st.integers(1, 30), st.integers(1, 30), st.integers(1, 30),
)
def test_identity_4E_equals_k2(n2, n3, d4, d1):
    qn = (n3 + d4 + d1, n2, n3, n3 + d4)
    k = wavevector(qn)
    assert 4 * energy(qn) == sum(c * c for c in k)
    assert quantum_numbers_from_k(k) == qn


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-40, 40), min_size=4, max_size=4))
def test_generic_lattice_vector_has_one_chamber_image(n):
    base = np.array(n[0]) * np.array([2, 0, 0, 0]) + n[1] * np.array([2, 2, 0, 0]) \
        + n[2] * np.array([1, 1, 1, -1]) + n[3] * np.array([1, 1, 1, 1])
    G = f4_group()
    roots = np.array([r.to_array() for r in F4_ROOTS.all_roots])
    on_mirror = np.any(np.abs(roots @ base) < 1e-9)
    imgs = G.apply_int(2 * base) // 2
    hits = []
    for k in imgs:
        qn = quantum_numbers_from_k(k)
        if qn.is_admissible():
            hits.append(qn)
            assert 4 * spectrum._energy(*qn) == int(k @ k)
    assert len(hits) == (0 if on_mirror else 1)


def test_quantum_numbers_from_k_rejects_non_lattice():
    with pytest.raises(InadmissibleError):
        quantum_numbers_from_k((2, 1, 0, 0))


def test_weyl_count():
    assert spectrum.weyl_count(0.0) == 0.0
    assert spectrum.weyl_count(2e4) == pytest.approx(4e8 / (32 * math.pi**2), rel=1e-15)
    assert spectrum.weyl_count(2e4) == pytest.approx(1.2665e6, rel=1e-4)
    with pytest.raises(ValueError):
        spectrum.weyl_count(-1.0)


def test_e_int_cap():
    q = math.pi**2 / 6
    assert spectrum.e_int_cap(39 * q) == 39
    assert spectrum.e_int_cap(39 * q * (1 - 1e-9)) == 38
    assert spectrum.e_int_cap(2e4) == math.floor(2e4 / q)


def test_staircase_monotone():
    rows = spectrum.staircase(5000, 50)
    E = [r[0] for r in rows]
    N = [r[1] for r in rows]
    assert rows[0][1] == 0 and rows[0][2] == 0.0
    assert all(a <= b for a, b in zip(E, E[1:]))
    assert all(a <= b for a, b in zip(N, N[1:]))
    assert N[-1] == len(enumerate_table(5000))
    with pytest.raises(ValueError):
        spectrum.staircase(100, 1)
