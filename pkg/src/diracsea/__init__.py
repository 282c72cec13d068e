"""Exactly solvable 1+1D massless Dirac dynamics on a circle.

The Hamiltonian is H0 + q V(z,t) with H0 = -i sigma_3 d/dz. Because the
two spinor components are chiral, the interacting solution is the free
solution times a diagonal unimodular phase matrix obtained by integrating
V along characteristics. On top of that exact solver the package builds
filled-sea orbital ensembles, energy ledgers relative to the sea, a Pauli
(Gram) audit, and packaged energy-extraction experiments in which a
traveling-wave potential drives the total energy below the sea's own.
"""

from .lattice import (Grid, ModeAmplitudes, SpinorField, inner_product,
                      make_grid, mode_amplitudes, norm, spectral_derivative,
                      synthesize, translate_component, zero_field)
from .free_field import (ModeIndex, eigenmode, free_energy, free_propagate,
                         mode_energy, mode_momentum, total_energy)
from .potential import (ConstantPotential, Potential, TabulatedPotential,
                        TravelingWavePotential, ZeroPotential, evaluate,
                        extraction_from_packet, load_tabulated_csv)
from .characteristics import (PhaseFields, apply_phase_matrix, evolve_exact,
                              integrate_phases, phase_consistency_residual)
from .oracle import CrosscheckRow, crosscheck, evolve_splitstep
from .observables import (DensityPair, charge_density, continuity_residual,
                          current_density, densities, energy_shift_direct,
                          energy_shift_formula, energy_shift_from_phases)
from .hole_theory import (EnergyLedger, OrbitalEnsemble, Packet, VacuumMode,
                          add_positive_packet, build_vacuum, energy_ledger,
                          ensemble_free_energy, evolve_ensemble, pauli_audit,
                          relative_energy, vacuum_reference_energy)
from .scenarios import (Check, ExtractionParams, ScenarioReport,
                        initial_ensemble, predicted_delta_packet,
                        predicted_packet_current, run_extraction, sweep_g,
                        sweep_slope, threshold_g, two_mode_packet)

__version__ = "0.1.0"

__all__ = [
    "Grid", "ModeAmplitudes", "SpinorField", "inner_product", "make_grid",
    "mode_amplitudes", "norm", "spectral_derivative", "synthesize",
    "translate_component", "zero_field",
    "ModeIndex", "eigenmode", "free_energy", "free_propagate", "mode_energy",
    "mode_momentum", "total_energy",
    "ConstantPotential", "Potential", "TabulatedPotential",
    "TravelingWavePotential", "ZeroPotential", "evaluate",
    "extraction_from_packet", "load_tabulated_csv",
    "PhaseFields", "apply_phase_matrix", "evolve_exact", "integrate_phases",
    "phase_consistency_residual",
    "CrosscheckRow", "crosscheck", "evolve_splitstep",
    "DensityPair", "charge_density", "continuity_residual", "current_density",
    "densities", "energy_shift_direct", "energy_shift_formula",
    "energy_shift_from_phases",
    "EnergyLedger", "OrbitalEnsemble", "Packet", "VacuumMode",
    "add_positive_packet", "build_vacuum", "energy_ledger",
    "ensemble_free_energy", "evolve_ensemble", "pauli_audit",
    "relative_energy", "vacuum_reference_energy",
    "Check", "ExtractionParams", "ScenarioReport", "initial_ensemble",
    "predicted_delta_packet", "predicted_packet_current", "run_extraction",
    "sweep_g", "sweep_slope", "threshold_g", "two_mode_packet",
    "__version__",
]
