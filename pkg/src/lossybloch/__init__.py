"""Dynamics of a tilted lattice chain with staggered single-particle losses.

Submodules: lattice (chain description and operators), spectral (eigenvalue
ladders), bands (linear and nonlinear Bloch bands, stability), propagate
(wavefunction dynamics), semiclassics (phase-space packets and band
transfer), manybody (exact few-particle master equation), cli (experiment
runner).
"""

from .lattice import (LatticeSpec, build_chiral_operator, build_effective_hamiltonian,
                      build_translation_operator)
from .spectral import LadderSpectrum, converged_spectrum, extract_ladders
from .bands import (BandPoint, NonlinearBandPoint, NonlinearSolution, StabilitySpectrum,
                    bloch_hamiltonian, dispersion, exceptional_points_linear,
                    nonlinear_bloch_point, nonlinear_band_sweep, bdg_matrix,
                    stability_spectrum)
from .propagate import (DensityTrace, GaussianPacketSpec, WaveFunction, make_gaussian,
                        nonlinear_bloch_packet, evolve_single_particle,
                        evolve_mean_field, norm_derivative_check)
from .semiclassics import (PhaseSpaceState, band_hamiltonian, evolve_semiclassical,
                           landau_zener_probability, band_decompose,
                           measure_band_transfer)
from .manybody import (BECState, DensityMatrix, FockBasis, build_bh_hamiltonian,
                       build_fock_basis, evolve_lindblad, make_bec_state, spdm)

__version__ = "0.1.0"
