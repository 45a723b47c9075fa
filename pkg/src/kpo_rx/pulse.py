"""Drive pulse envelope and the full time-dependent Hamiltonian.

The envelope p_d(t) = pd1 * {tanh(t/tau) tanh[(T-t)/tau] / tanh^2[T/(2 tau)]}^2
vanishes together with its first derivative at t = 0 and t = T, peaks at
exactly pd1 at t = T/2, and morphs from single-peaked (large tau) to
trapezoid-like (small tau).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import DriveKind
from .spectrum import KpoParams, build_kpo_hamiltonian
from .fock import drive_operator


@dataclass(frozen=True)
class PulseParams:
    """Envelope maximum pd1 (units K), rise time K*tau, gate time K*T."""

    pd1_over_K: float
    k_tau: float
    k_t: float

    def __post_init__(self):
        if self.pd1_over_K < 0:
            raise ValueError(f"pd1/K must be >= 0, got {self.pd1_over_K}")
        if self.k_tau <= 0 or self.k_t <= 0:
            raise ValueError("K*tau and K*T must be > 0")


@dataclass(frozen=True)
class DriveSpec:
    """Drive kind (operator a or a^2/2), frequency wd/K, and pulse shape."""

    kind: DriveKind
    wd_over_K: float
    pulse: PulseParams


def pulse_amplitude(t, p: PulseParams):
    """Envelope value at time t (units K); symmetric about T/2.

    Accepts scalars or arrays; raises for t outside [0, T].
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > p.k_t):
        raise ValueError(f"time outside [0, {p.k_t}]")
    norm = np.tanh(p.k_t / (2 * p.k_tau)) ** 2
    val = p.pd1_over_K * (np.tanh(t / p.k_tau) * np.tanh((p.k_t - t) / p.k_tau) / norm) ** 2
    return float(val) if val.ndim == 0 else val


def total_hamiltonian(t: float, params: KpoParams, drive: DriveSpec) -> np.ndarray:
    """H(t)/K = H_KPO/K + p_d(t)/K (O e^{-i wd t} + O^dag e^{i wd t})."""
    H0 = build_kpo_hamiltonian(params)
    op = drive_operator(drive.kind, params.dim)
    pd = pulse_amplitude(t, drive.pulse)
    phase = np.exp(-1j * drive.wd_over_K * t)
    return H0 + pd * (op * phase + op.conj().T * np.conj(phase))
