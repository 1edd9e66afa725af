"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single PASS/FAIL line to the terminal, even under
output capture.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from octacube import dynamics, invariants, jacobi, spectrum, tiling, wavefunction
from octacube.roots import F4_ROOTS, coxeter_order_check, generate_group, orbit, reflection_matrix
from oracles import chamber_oracle


@pytest.fixture
def report(capsys):
    def _report(n, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n} {title}: {detail}")
        assert ok, detail

    return _report


def test_criterion_1_group(report):
    t0 = time.perf_counter()
    G = generate_group(F4_ROOTS.simple_roots)
    elapsed = time.perf_counter() - t0
    orth = all(g.is_orthogonal() for g in G)
    R2 = np.array(sorted(r.num for r in F4_ROOTS.all_roots), dtype=np.int64)
    imgs = np.einsum("gij,rj->gri", G.mats2, R2)
    stable = not np.any(imgs % 2) and all(
        sorted(map(tuple, (img // 2).tolist())) == [tuple(r) for r in R2.tolist()] for img in imgs
    )
    orb = orbit(F4_ROOTS.minimal_root, G)
    chain = tuple(coxeter_order_check(i, i + 1) for i in range(4))
    others = {coxeter_order_check(i, j) for i in range(5) for j in range(i + 2, 5)}
    ok = (len(G) == 1152 and orth and len(R2) == 48 and stable and len(orb) == 24
          and chain == (3, 3, 4, 3) and others == {2} and elapsed < 5)
    report(1, "group", ok, f"|G|={len(G)} roots={len(R2)} orbit={len(orb)} chain={chain} t={elapsed:.2f}s")


def test_criterion_2_masses(report):
    angles = jacobi.contact_angles(jacobi.MassChain((jacobi.INF, 6, 2, 1, 3, jacobi.INF)))
    a_err = max(abs(a - b) for a, b in zip(angles, (math.pi / 3, math.pi / 3, math.pi / 4, math.pi / 3)))
    sol = jacobi.solve_mass_chain((math.pi / 3, math.pi / 3, math.pi / 4, math.pi / 3))
    r_err = max(abs(a - b) for a, b in zip(sol.ratios, (6, 2, 3)))
    report(2, "masses", a_err < 1e-12 and r_err < 1e-10, f"angle err={a_err:.1e} ratio err={r_err:.1e}")


def test_criterion_3_transforms(report):
    tf = jacobi.build_transforms()
    reference = jacobi.reference_T_zx()
    t_err = float(np.max(np.abs(tf.T_zx - reference)))
    d_err = abs(abs(tf.det_zx) - 1 / 24)
    pref = math.sqrt(abs(tf.det_zx)) * math.sqrt(576 / 1152)
    p_err = abs(pref - 1 / math.sqrt(48))
    exact = abs(jacobi.det_T_zx_exact()) == Fraction(1, 24)
    ok = t_err < 1e-14 and d_err < 1e-14 and p_err < 1e-14 and exact
    report(3, "transforms", ok, f"T err={t_err:.1e} det err={d_err:.1e} prefactor err={p_err:.1e}")


def test_criterion_4_spectrum(report):
    t0 = time.perf_counter()
    e0 = spectrum.energy((3, 1, 1, 2))
    k0 = spectrum.wavevector((3, 1, 1, 2))
    table = spectrum.enumerate_table(10_000)
    ident = bool(np.all(4 * table.E_int == np.sum(table.k**2, axis=1)))
    got = {lv.k_int for lv in spectrum.enumerate_levels(2000)}
    oracle_ok = got == chamber_oracle(2000)
    elapsed = time.perf_counter() - t0
    ok = e0 == 39 and k0 == (11, 5, 3, 1) and ident and oracle_ok and elapsed < 60
    report(4, "spectrum", ok,
           f"E={e0} k={k0} identity over {len(table)} levels={ident} oracle={oracle_ok} t={elapsed:.1f}s")


def test_criterion_5_weyl(report):
    t0 = time.perf_counter()
    E = 2e4
    n_exact = len(spectrum.enumerate_table(spectrum.e_int_cap(E)))
    n_weyl = spectrum.weyl_count(E)
    ratio = n_exact / n_weyl
    elapsed = time.perf_counter() - t0
    report(5, "weyl", 0.95 <= ratio <= 1.05 and elapsed < 300,
           f"N_exact={n_exact} N_weyl={n_weyl:.1f} ratio={ratio:.4f} window=[0.95, 1.05] t={elapsed:.1f}s")


def test_criterion_6_wavefunction(report, ground, first_excited):
    x = wavefunction.sample_ordered_simplex(1000, seed=0)
    scale = ground.term_scale * math.sqrt(abs(jacobi.canonical_transforms().det_zx))
    node = max(
        float(np.max(np.abs(wavefunction.eval_Psi_x(ground, wavefunction.onto_contact(x, w))))) / scale
        for w in range(5)
    )
    rng = np.random.Generator(np.random.Philox(1))
    z = rng.uniform(-2, 2, (500, 4))
    psi = wavefunction.eval_psi_z(ground, z)
    ref = np.maximum(np.abs(psi), ground.typical_amplitude)
    sym = 0.0
    for r in F4_ROOTS.simple_roots:
        R = reflection_matrix(r).to_array()
        sym = max(sym, float(np.max(np.abs(wavefunction.eval_psi_z(ground, z @ R.T) + psi) / ref)))
    for a in wavefunction.lattice_generators():
        sym = max(sym, float(np.max(np.abs(wavefunction.eval_psi_z(ground, z + a) - psi) / ref)))
    norm = wavefunction.mc_normalization(ground, 200_000, seed=0)
    ov = wavefunction.mc_overlap(ground, first_excited, 200_000, seed=1)
    ok = (node < 1e-10 and sym < 1e-12
          and abs(norm.value - 1) <= 3 * norm.std_error and norm.std_error < 0.02
          and abs(ov.value) <= 3 * ov.std_error)
    report(6, "wavefunction", ok,
           f"node={node:.1e} sym={sym:.1e} norm={norm.value.real:.4f}+-{norm.std_error:.4f} "
           f"overlap={ov.value.real:.4f}+-{ov.std_error:.4f}")


def test_criterion_7_tiling(report):
    rep = tiling.verify_tiling(100_000, seed=0, half_width=10.0)
    ok = (rep.max_reconstruction_error < 1e-12 and rep.all_translations_integer and rep.all_translations_even
          and abs(rep.cell_volume - 2) <= 3 * rep.cell_volume_stderr)
    report(7, "tiling", ok,
           f"recon err={rep.max_reconstruction_error:.1e} even={rep.all_translations_even} "
           f"volume={rep.cell_volume:.4f}+-{rep.cell_volume_stderr:.4f}")


def test_criterion_8_invariants(report):
    inv_ok = all(invariants.check_invariance(M, n_points=5, seed=0) for M in range(1, 5))
    levels = spectrum.enumerate_levels(2000)
    h_ok = all(invariants.hamiltonian_ratio(lv) == 1 for lv in levels)
    rank = invariants.independence_check()
    report(8, "invariants", inv_ok and h_ok and rank == 4,
           f"invariance={inv_ok} I1=144H over {len(levels)} levels={h_ok} rank={rank}")


def test_criterion_9_dynamics(report):
    summ = dynamics.run(dynamics.random_state(0), 10_000)
    matches = {k: dynamics.match_group_element(k, tol=1e-10) for k in dynamics.KINDS}
    ok = (bool(np.all(summ.max_drift < 1e-9)) and summ.max_energy_drift < 1e-9
          and all(v is not None for v in matches.values()))
    report(9, "dynamics", ok,
           f"I drift={np.max(summ.max_drift):.1e} E drift={summ.max_energy_drift:.1e} elements={matches}")
