"""Simulator for Kerr-parametric-oscillator cat qubits and their continuous
Rx gates driven through effective excited states."""

from .fock import (
    DriveKind,
    annihilation_operator,
    coherent_state,
    creation_operator,
    drive_operator,
    expectation,
    fock_state,
    number_operator,
    parity_operator,
    tail_population,
    vacuum_state,
)
from .spectrum import (
    KpoParams,
    Spectrum,
    build_kpo_hamiltonian,
    cat_states_analytic,
    computational_basis,
    diagonalize_and_label,
    drive_matrix_element,
    kpo_spectrum,
    xi,
)
from .pulse import DriveSpec, PulseParams, pulse_amplitude, total_hamiltonian
from .dynamics import Trajectory, evolve_lindblad, evolve_schrodinger
from .gate import (
    GateResult,
    canonical_angle,
    extract_gate_mixed,
    extract_gate_pure,
    leakage,
    rx_matrix,
    trajectory_observables,
)
from .adiabatic import (
    TwoLevelReduction,
    predicted_rotation,
    theta_g,
    two_level_eigensystem,
    two_level_reduction,
)
from .scans import (
    CalibrationResult,
    ScanGrid,
    ScanPoint,
    adiabatic_check,
    calibrate,
    default_kappa_grid,
    gate_scan,
    linear_loss_fit,
    loss_scan,
)

__version__ = "0.1.0"
