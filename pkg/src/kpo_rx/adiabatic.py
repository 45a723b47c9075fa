"""Two-level reduction of the driven KPO and the adiabatic phase integral.

For a ground state g, the near-resonant excited partner e (smallest
|delta_ge| among selection-rule-allowed states) defines an effective
two-level system with detuning delta_ge = ((E_g - E_e)/hbar - wd)/2 and
coupling gamma(t) = |<E_g|O|E_e>| p_d(t).  The accumulated rotation phase

    theta_g = sgn(delta) * integral_0^T (sqrt(delta^2 + gamma^2) - |delta|) dt

predicts the gate angle theta = theta_0 - theta_1 independently of full
dynamics, provided the pulse is slow on the 1/Omega scale.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import NoResonanceError
from .fock import DriveKind
from .gate import canonical_angle
from .pulse import DriveSpec, PulseParams, pulse_amplitude
from .spectrum import Spectrum, drive_matrix_element

DETUNING_WINDOW = 5.0
COUPLING_FLOOR = 1e-8


@dataclass(frozen=True)
class TwoLevelReduction:
    g: int  # ground index, 0 or 1
    e: int  # excited partner
    delta: float  # delta_ge in units of K
    gamma_scale: float  # |<E_g|O|E_e>|, multiplies p_d(t) to give gamma(t)


def two_level_reduction(
    spec: Spectrum,
    drive: DriveSpec,
    g: int,
    window: float = DETUNING_WINDOW,
) -> TwoLevelReduction:
    """Pick the excited state minimizing |delta_ge| for ground state g.

    Only selection-rule-allowed couplings count (|matrix element| above a
    small floor), and only within the reliable part of the spectrum.
    """
    if g not in (0, 1):
        raise ValueError("g must be 0 or 1")
    best = None
    for e in range(2, min(spec.reliable_cutoff + 1, spec.dim)):
        coupling = abs(drive_matrix_element(spec, drive.kind, g, e))
        if coupling < COUPLING_FLOOR:
            continue
        delta = ((spec.energies[g] - spec.energies[e]) - drive.wd_over_K) / 2
        if abs(delta) > window:
            continue
        if best is None or abs(delta) < abs(best[1]):
            best = (e, delta, coupling)
    if best is None:
        raise NoResonanceError(
            f"no allowed excited state within |delta| <= {window} K for g={g}, "
            f"kind={drive.kind}, wd/K={drive.wd_over_K}"
        )
    e, delta, coupling = best
    return TwoLevelReduction(g=g, e=e, delta=float(delta), gamma_scale=float(coupling))


def theta_g(red: TwoLevelReduction, pulse: PulseParams) -> float:
    """Evaluate the adiabatic phase integral for gamma(t) = gamma_scale * p_d(t)."""
    delta = red.delta
    if delta == 0 and red.gamma_scale * pulse.pd1_over_K != 0:
        warnings.warn(
            "delta = 0: adiabatic phase picture breaks down; using sgn(0) = +1",
            RuntimeWarning,
            stacklevel=2,
        )
    if pulse.pd1_over_K == 0 or red.gamma_scale == 0:
        return 0.0

    def integrand(t):
        gamma = red.gamma_scale * pulse_amplitude(t, pulse)
        return np.sqrt(delta * delta + gamma * gamma) - abs(delta)

    val, err = quad(integrand, 0.0, pulse.k_t, epsabs=1e-10, epsrel=1e-10, limit=400)
    if err > 1e-8:
        raise RuntimeError(f"phase quadrature error {err:.2e} above 1e-8")
    sign = 1.0 if delta >= 0 else -1.0
    return float(sign * val)


def predicted_rotation(theta0: float, theta1: float) -> float:
    """theta = theta_0 - theta_1, canonicalized to (-pi, pi]."""
    return canonical_angle(theta0 - theta1)


def two_level_eigensystem(delta: float, gamma: float):
    """Eigenvalues +/-Omega and eigenvectors u_pm of [[delta, gamma], [gamma, -delta]].

    Returns (omega, u_plus, u_minus, degenerate).  At delta = gamma = 0 the
    system is degenerate; the basis vectors are returned with the flag set.
    """
    omega = float(np.hypot(delta, gamma))
    if omega == 0.0:
        return 0.0, np.array([1.0, 0.0]), np.array([0.0, 1.0]), True
    r = delta / omega
    s = 1.0 if gamma >= 0 else -1.0
    u_plus = np.array([np.sqrt(1 + r), s * np.sqrt(1 - r)]) / np.sqrt(2)
    u_minus = np.array([s * np.sqrt(1 - r), -np.sqrt(1 + r)]) / np.sqrt(2)
    return omega, u_plus, u_minus, False
