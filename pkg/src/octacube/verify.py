"""Property suites behind ``octacube verify``.

Each suite returns a list of checks ``{"name", "pass", "detail"}``. Details
hold only deterministic quantities so reports are byte-reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import dynamics, invariants, jacobi, spectrum, tiling, wavefunction
from .roots import D4_LATTICE, F4_ROOTS, coxeter_order_check, f4_group, orbit, reflection_matrix

SUITES = ("group", "masses", "spectrum", "tiling", "norm", "invariants", "dynamics")
COXETER_CHAIN = (3, 3, 4, 3)


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.15g}")
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_num(v) for v in x]
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    return x


def _check(name, ok, **detail) -> dict:
    return {"name": name, "pass": bool(ok), "detail": _num(detail)}


def suite_group(**_) -> list[dict]:
    G = f4_group()
    out = [_check("order", len(G) == 1152, order=len(G))]
    n_even = int(np.sum(G.parity == 1))
    out.append(_check("parity_split", n_even == 576 and len(G) - n_even == 576, even=n_even, odd=len(G) - n_even))
    out.append(_check("orthogonal", all(g.is_orthogonal() for g in G)))
    out.append(_check("det_equals_parity", all(g.det() == g.parity for g in G)))
    out.append(_check("parity_is_word_length_parity",
                      bool(np.all(G.parity == np.where(G.word_length % 2 == 0, 1, -1)))))
    entries = set(np.unique(G.mats2).tolist())
    out.append(_check("entries_half_integers", entries <= {-2, -1, 0, 1, 2}, entries=sorted(entries)))
    roots = F4_ROOTS.all_roots
    R2 = np.array(sorted(r.num for r in roots), dtype=np.int64)
    imgs = np.einsum("gij,rj->gri", G.mats2, R2)
    ok_int = not np.any(imgs % 2)
    stable = ok_int and all(
        sorted(map(tuple, (img // 2).tolist())) == [tuple(r) for r in R2.tolist()] for img in imgs
    )
    out.append(_check("roots_48_stable", len(roots) == 48 and stable, n_roots=len(roots)))
    orb = orbit(F4_ROOTS.minimal_root, G)
    out.append(_check("orbit_alpha0", len(orb) == 24 and all(v.norm2() == 2 for v in orb), size=len(orb)))
    chain = [coxeter_order_check(i, i + 1) for i in range(4)]
    others = [coxeter_order_check(i, j) for i in range(5) for j in range(i + 2, 5)]
    out.append(_check("coxeter_diagram", tuple(chain) == COXETER_CHAIN and set(others) == {2},
                      consecutive=chain, nonadjacent=sorted(set(others))))
    pairing = D4_LATTICE.pairing()
    ok = all(pairing[i, j] == (2 if i == j else 0) for i in range(4) for j in range(4))
    out.append(_check("reciprocal_lattice", ok and D4_LATTICE.cell_volume() == 2,
                      cell_volume=D4_LATTICE.cell_volume()))
    return out


def suite_masses(**_) -> list[dict]:
    angles = jacobi.contact_angles()
    err = max(abs(a - b) for a, b in zip(angles, jacobi.DIAGRAM_ANGLES))
    out = [_check("contact_angles", err < 1e-12, angles_over_pi=[a / math.pi for a in angles], max_error=err)]
    sol = jacobi.solve_mass_chain()
    r_err = max(abs(a - b) for a, b in zip(sol.ratios, (6.0, 2.0, 3.0)))
    out.append(_check("solve_mass_chain", r_err < 1e-10, ratios=sol.ratios, max_error=r_err))
    tf = jacobi.build_transforms()
    t_err = float(np.max(np.abs(tf.T_zx - jacobi.reference_T_zx())))
    out.append(_check("T_zx_matches_table", t_err < 1e-14, max_error=t_err))
    o_err = float(np.max(np.abs(tf.T_zy.T @ tf.T_zy - np.eye(4))))
    out.append(_check("T_zy_orthogonal", o_err < 1e-14, max_error=o_err))
    d_err = abs(abs(tf.det_zx) - 1 / 24)
    out.append(_check("det_T_zx", d_err < 1e-14 and abs(jacobi.det_T_zx_exact()) == Fraction(1, 24),
                      det_exact=jacobi.det_T_zx_exact(), error=d_err))
    pref = math.sqrt(abs(tf.det_zx)) * math.sqrt(576 / 1152)
    p_err = abs(pref - 1 / math.sqrt(48))
    out.append(_check("prefactor_consistency", p_err < 1e-14, error=p_err))
    return out


def suite_spectrum(**_) -> list[dict]:
    out = [
        _check("ground_energy", spectrum.energy(spectrum.GROUND_QN) == 39, E_int=spectrum.energy(spectrum.GROUND_QN)),
        _check("ground_wavevector", spectrum.wavevector(spectrum.GROUND_QN) == (11, 5, 3, 1),
               k=spectrum.wavevector(spectrum.GROUND_QN)),
    ]
    table = spectrum.enumerate_table(10_000)
    ident = bool(np.all(4 * table.E_int == np.sum(table.k**2, axis=1)))
    out.append(_check("four_E_equals_k2", ident, n_levels=len(table)))
    E = 2e4
    cap = spectrum.e_int_cap(E)
    full = spectrum.enumerate_table(cap)
    ratio = len(full) / spectrum.weyl_count(E)
    out.append(_check("weyl_ratio_at_2e4", 0.95 <= ratio <= 1.05, N_exact=len(full), ratio=ratio))
    return out


def suite_tiling(seed: int = 0, samples: int = 100_000, **_) -> list[dict]:
    rep = tiling.verify_tiling(samples, seed)
    oc = tiling.octacube()
    half = {tuple(c) for c in oc.facet_centers}
    out = [
        _check("fold_reconstruction", rep.max_reconstruction_error < 1e-12, max_error=rep.max_reconstruction_error),
        _check("folded_in_simplex", rep.all_in_closed_simplex),
        _check("translations_even", rep.all_translations_integer and rep.all_translations_even),
        _check("parity_equals_det", rep.parity_matches_det),
        _check("cell_volume", abs(rep.cell_volume - 2) <= 3 * rep.cell_volume_stderr,
               volume=rep.cell_volume, stderr=rep.cell_volume_stderr),
        _check("unique_simplex_image", rep.max_images_per_point == 1 and rep.min_images_per_point == 1),
        _check("facet_centers", len(half) == 24 and all(sorted(map(abs, c)) == [0, 0, 0.5, 0.5] for c in half)),
    ]
    return out


def suite_norm(seed: int = 0, samples: int = 200_000, **_) -> list[dict]:
    out = []
    states = {qn: wavefunction.make_state(qn) for qn in [(3, 1, 1, 2), (4, 1, 1, 2), (3, 2, 1, 2)]}
    for n, (qn, st) in enumerate(states.items()):
        est = wavefunction.mc_normalization(st, samples, seed + n)
        ok = abs(est.value - 1) <= 3 * est.std_error and est.std_error < 0.02
        out.append(_check(f"normalization_{''.join(map(str, qn))}", ok, **est.to_json()))
    est = wavefunction.mc_overlap(states[(3, 1, 1, 2)], states[(4, 1, 1, 2)], samples, seed + 10)
    out.append(_check("overlap_3112_4112", abs(est.value) <= 3 * est.std_error, **est.to_json()))
    res = node_residuals(states[(3, 1, 1, 2)], 1000, seed)
    out.append(_check("boundary_nodes", max(res.values()) < 1e-10, **res))
    sym = symmetry_residuals(states[(3, 1, 1, 2)], 200, seed)
    out.append(_check("antisymmetry_periodicity", max(sym.values()) < 1e-12, **sym))
    return out


def node_residuals(state, n: int, seed: int) -> dict:
    """Worst |Psi| / (sum of term magnitudes) on each contact or wall hyperplane."""
    x = wavefunction.sample_ordered_simplex(n, seed)
    scale = state.term_scale * math.sqrt(abs(jacobi.canonical_transforms().det_zx))
    out = {}
    for which, name in enumerate(wavefunction.CONTACT_NAMES):
        y = wavefunction.onto_contact(x, which)
        out[name] = float(np.max(np.abs(wavefunction.eval_Psi_x(state, y))) / scale)
    return out


def symmetry_residuals(state, n: int, seed: int) -> dict:
    """Antisymmetry under each simple reflection and periodicity under a_1..a_4.

    Residuals are relative to max(|psi(z)|, rms amplitude of psi).
    """
    rng = np.random.Generator(np.random.Philox(seed + 99))
    z = rng.uniform(-2, 2, size=(n, 4))
    psi = wavefunction.eval_psi_z(state, z)
    ref = np.maximum(np.abs(psi), state.typical_amplitude)
    out = {}
    for j, r in enumerate(F4_ROOTS.simple_roots, start=1):
        R = reflection_matrix(r).to_array()
        out[f"reflect_{j}"] = float(np.max(np.abs(wavefunction.eval_psi_z(state, z @ R.T) + psi) / ref))
    for i, a in enumerate(wavefunction.lattice_generators(), start=1):
        out[f"translate_{i}"] = float(np.max(np.abs(wavefunction.eval_psi_z(state, z + a) - psi) / ref))
    return out


def suite_invariants(seed: int = 0, **_) -> list[dict]:
    out = [_check(f"invariance_w{M}", invariants.check_invariance(M, n_points=5, seed=seed)) for M in range(1, 5)]
    table = spectrum.enumerate_table(2000)
    ok = all(invariants.hamiltonian_ratio(lv) == 1 for lv in table.levels())
    out.append(_check("I1_equals_144H", ok, n_levels=len(table)))
    rank = invariants.independence_check()
    out.append(_check("jacobian_rank", rank == 4, rank=rank))
    return out


def suite_dynamics(seed: int = 0, events: int = 10_000, **_) -> list[dict]:
    st = dynamics.random_state(seed)
    summ = dynamics.run(st, events)
    out = [
        _check("invariant_drift", bool(np.all(summ.max_drift < 1e-9)), max_drift=summ.max_drift),
        _check("energy_drift", summ.max_energy_drift < 1e-9, max_drift=summ.max_energy_drift),
        _check("single_event_conservation", bool(np.all(summ.max_step_drift < 1e-12)), max_step=summ.max_step_drift),
        _check("ordering", summ.ordering_ok, event_counts=summ.event_counts),
    ]
    matches = {k: dynamics.match_group_element(k) for k in dynamics.KINDS}
    out.append(_check("collisions_are_group_reflections", all(v is not None for v in matches.values()),
                      elements=matches))
    return out


_RUNNERS = {
    "group": suite_group,
    "masses": suite_masses,
    "spectrum": suite_spectrum,
    "tiling": suite_tiling,
    "norm": suite_norm,
    "invariants": suite_invariants,
    "dynamics": suite_dynamics,
}


def run_suite(name: str, seed: int = 0, samples: int | None = None) -> dict:
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        if n not in _RUNNERS:
            raise KeyError(n)
        kw = {"seed": seed}
        if samples is not None:
            kw["samples"] = samples
        for c in _RUNNERS[n](**kw):
            c["name"] = f"{n}.{c['name']}"
            checks.append(c)
    return {"suite": name, "checks": checks}
