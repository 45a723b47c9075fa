"""Rotation-angle and fidelity extraction from final states.

F(theta) = |<psi_f| Rx(theta) |psi_i>|^2 (pure) or
<psi_i| Rx(theta)^dag rho_f Rx(theta) |psi_i> (mixed) reduces, in the
computational-basis 2x2 block, to P + Q cos(theta) + R sin(theta); the
maximizer is theta* = atan2(R, Q) with F* = P + sqrt(Q^2 + R^2), no grid
search needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import Trajectory
from .spectrum import Spectrum, computational_basis


def canonical_angle(theta: float) -> float:
    """Map to (-pi, pi]."""
    out = (theta + np.pi) % (2 * np.pi) - np.pi
    if out == -np.pi:
        out = np.pi
    return float(out)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


@dataclass
class GateResult:
    theta_star: float  # radians, in (-pi, pi]
    fidelity: float
    leakage: float
    degenerate: bool = False  # F independent of theta (Q = R = 0 tie)
    params_echo: dict = field(default_factory=dict)


def _pqr_pure(psi_f, basis, psi_i):
    z0, z1 = basis
    ci = np.array([z0.conj() @ psi_i, z1.conj() @ psi_i])
    cf = np.array([z0.conj() @ psi_f, z1.conj() @ psi_f])
    c = cf.conj() @ ci
    d = cf.conj() @ np.array([ci[1], ci[0]])
    P = (abs(c) ** 2 + abs(d) ** 2) / 2
    Q = (abs(c) ** 2 - abs(d) ** 2) / 2
    R = float(np.imag(np.conj(c) * d))
    return P, Q, R, cf


def _result_from_pqr(P, Q, R, leak, echo):
    amp = np.hypot(Q, R)
    degenerate = amp < 1e-15
    theta = 0.0 if degenerate else float(np.arctan2(R, Q))
    return GateResult(
        theta_star=canonical_angle(theta),
        fidelity=float(P + amp),
        leakage=float(leak),
        degenerate=bool(degenerate),
        params_echo=echo or {},
    )


def extract_gate_pure(
    psi_f: np.ndarray,
    basis: tuple[np.ndarray, np.ndarray],
    psi_i: np.ndarray,
    params_echo: dict | None = None,
) -> GateResult:
    for name, v in (("psi_f", psi_f), ("psi_i", psi_i)):
        if abs(np.linalg.norm(v) - 1) > 1e-6:
            raise ValueError(f"{name} must be unit-norm")
    z0, z1 = basis
    P, Q, R, cf = _pqr_pure(psi_f, basis, psi_i)
    leak = 1 - abs(cf[0]) ** 2 - abs(cf[1]) ** 2
    return _result_from_pqr(P, Q, R, leak, params_echo)


def extract_gate_mixed(
    rho_f: np.ndarray,
    basis: tuple[np.ndarray, np.ndarray],
    psi_i: np.ndarray,
    params_echo: dict | None = None,
) -> GateResult:
    z0, z1 = basis
    if np.max(np.abs(rho_f - rho_f.conj().T)) > 1e-6:
        raise ValueError("rho_f must be Hermitian")
    B = np.column_stack([z0, z1])
    r2 = B.conj().T @ rho_f @ B
    ci = np.array([z0.conj() @ psi_i, z1.conj() @ psi_i])
    xci = np.array([ci[1], ci[0]])
    aa = float((ci.conj() @ r2 @ ci).real)
    bb = float((xci.conj() @ r2 @ xci).real)
    m = ci.conj() @ r2 @ xci
    P, Q, R = (aa + bb) / 2, (aa - bb) / 2, float(np.imag(m))
    leak = 1 - float(np.trace(r2).real)
    return _result_from_pqr(P, Q, R, leak, params_echo)


def leakage(state: np.ndarray, spec: Spectrum) -> float:
    """Population outside span{|E_0>, |E_1>}."""
    e0, e1 = spec.state(0), spec.state(1)
    if state.ndim == 1:
        return float(1 - abs(e0.conj() @ state) ** 2 - abs(e1.conj() @ state) ** 2)
    return float(1 - (e0.conj() @ state @ e0).real - (e1.conj() @ state @ e1).real)


def trajectory_observables(traj: Trajectory, spec: Spectrum, top_m: int = 5) -> dict:
    """Per-sample observables behind the time-evolution figures.

    Returns eigenbasis populations for the top_m states (ranked by their
    final-time population), the ground-pair phases theta_k = -arg<E_k|psi>,
    the computational-basis populations, and the relative angle
    phi = arg(<1~|psi>/<0~|psi>) unwrapped continuously in time.  Samples
    where <0~|psi> vanishes get phi = nan and a flag.
    """
    if not traj.pure:
        raise ValueError("trajectory observables require a pure-state trajectory")
    z0, z1 = computational_basis(spec)
    psis = np.column_stack(traj.states)  # dim x n_samples
    amps = spec.states.conj().T @ psis  # <E_k|psi(t)>
    pops = np.abs(amps) ** 2
    order = np.argsort(-pops[:, -1])[:top_m]
    a0 = z0.conj() @ psis
    a1 = z1.conj() @ psis
    phi_defined = np.abs(a0) > 1e-10
    raw_phi = np.where(phi_defined, np.angle(np.where(phi_defined, a1 / np.where(phi_defined, a0, 1), 0)), np.nan)
    phi = raw_phi.copy()
    good = np.flatnonzero(phi_defined)
    if good.size:
        phi[good] = np.unwrap(raw_phi[good])
    return {
        "times": traj.times,
        "top_indices": order,
        "populations": pops[order],  # top_m x n_samples
        "theta_0": -np.angle(amps[0]),
        "theta_1": -np.angle(amps[1]),
        "pop_0tilde": np.abs(a0) ** 2,
        "pop_1tilde": np.abs(a1) ** 2,
        "phi": phi,
        "phi_defined": phi_defined,
    }
