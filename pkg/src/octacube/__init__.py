"""Exact spectrum of four hard-core particles (masses 6:2:1:3) in a box, via F4."""

from .roots import F4_ROOTS, D4_LATTICE, f4_group, generate_group, orbit, reflection_matrix
from .spectrum import Level, energy, enumerate_levels, enumerate_table, wavevector, weyl_count
from .wavefunction import eval_Psi_x, eval_psi_z, make_state

__version__ = "0.1.0"
