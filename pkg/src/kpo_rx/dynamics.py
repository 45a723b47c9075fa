"""Time propagation: Schrodinger for pure states, Lindblad for lossy ones.

Both use an adaptive Dormand-Prince 5(4) pair (scipy's RK45).  The drive
oscillates at wd/K up to ~21, so steps are plentiful; the default local
tolerance 1e-10 keeps integration error two orders below the ~5e-4 gate
errors of interest.  Density operators are integrated as full dim x dim
matrices (no superoperator is materialized) and re-hermitized at sample
times only, with trace drift recorded rather than silently fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, TruncationError
from .fock import TAIL_LIMIT, annihilation_operator, drive_operator, number_operator, tail_population
from .pulse import DriveSpec, pulse_amplitude
from .spectrum import KpoParams, build_kpo_hamiltonian

DEFAULT_TOL = 1e-10
POSITIVITY_ABORT = -1e-5


@dataclass
class IntegratorStats:
    nfev: int
    n_steps: int
    drift: float  # worst |norm - 1| (pure) or |trace - 1| (mixed) over samples
    final_tail_population: float
    min_eigenvalue: float | None = None  # mixed only


@dataclass
class Trajectory:
    """States sampled at requested times, plus integrator bookkeeping."""

    times: np.ndarray
    states: list
    pure: bool
    stats: IntegratorStats = field(repr=False)


def _drive_term(params: KpoParams, drive: DriveSpec):
    op = np.asarray(drive_operator(drive.kind, params.dim))
    opd = op.conj().T.copy()
    wd = drive.wd_over_K
    pulse = drive.pulse

    def h_drive(t):
        pd = pulse_amplitude(t, pulse)
        ph = np.exp(-1j * wd * t)
        return pd * (op * ph + opd * np.conj(ph))

    return h_drive


def _check_samples(sample_times, k_t):
    ts = np.asarray(sample_times, dtype=float)
    if ts.size == 0:
        raise ValueError("sample_times is empty")
    if np.any(ts < 0) or np.any(ts > k_t + 1e-12):
        raise ValueError(f"sample times outside [0, {k_t}]")
    if np.any(np.diff(ts) <= 0):
        raise ValueError("sample times must be strictly increasing")
    return ts


def evolve_schrodinger(
    psi0: np.ndarray,
    params: KpoParams,
    drive: DriveSpec,
    sample_times,
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """Integrate i d|psi>/dt = H(t)|psi> and sample at the given times."""
    if abs(np.linalg.norm(psi0) - 1) > 1e-9:
        raise ValueError("psi0 must be unit-norm")
    ts = _check_samples(sample_times, drive.pulse.k_t)
    H0 = np.asarray(build_kpo_hamiltonian(params))
    h_drive = _drive_term(params, drive)

    def rhs(t, y):
        return -1j * ((H0 + h_drive(t)) @ y)

    t0, t1 = 0.0, float(ts[-1])
    y0 = psi0.astype(complex)
    t_eval = ts if ts[0] > 0 else ts
    sol = solve_ivp(rhs, (t0, t1), y0, t_eval=t_eval, rtol=tol, atol=tol, method="RK45")
    if not sol.success:
        raise IntegrationError(f"Schrodinger integration failed: {sol.message}")
    states = [sol.y[:, i].copy() for i in range(sol.y.shape[1])]
    drift = max(abs(np.linalg.norm(s) - 1) for s in states)
    tail = tail_population(states[-1])
    stats = IntegratorStats(
        nfev=sol.nfev, n_steps=len(sol.t), drift=float(drift), final_tail_population=tail
    )
    if tail > TAIL_LIMIT:
        raise TruncationError(
            f"final tail population {tail:.3e} exceeds {TAIL_LIMIT}; increase dim"
        )
    return Trajectory(times=ts, states=states, pure=True, stats=stats)


def evolve_lindblad(
    rho0: np.ndarray,
    params: KpoParams,
    drive: DriveSpec,
    kappa_over_K: float,
    sample_times,
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """Integrate the single-photon-loss master equation
    d rho/dt = -i[H, rho] + (kappa/2)(2 a rho a^dag - a^dag a rho - rho a^dag a).
    """
    dim = params.dim
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 must be {dim}x{dim}")
    if abs(np.trace(rho0).real - 1) > 1e-9 or np.max(np.abs(rho0 - rho0.conj().T)) > 1e-9:
        raise ValueError("rho0 must be Hermitian with unit trace")
    if kappa_over_K < 0:
        raise ValueError("kappa/K must be >= 0")
    ts = _check_samples(sample_times, drive.pulse.k_t)
    H0 = np.asarray(build_kpo_hamiltonian(params))
    h_drive = _drive_term(params, drive)
    a = np.asarray(annihilation_operator(dim))
    ad = a.conj().T.copy()
    n_op = np.asarray(number_operator(dim)).real.diagonal()

    kappa = kappa_over_K

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        H = H0 + h_drive(t)
        drho = -1j * (H @ rho - rho @ H)
        if kappa:
            drho += kappa * (a @ rho @ ad) - (kappa / 2) * (
                n_op[:, None] * rho + rho * n_op[None, :]
            )
        return drho.ravel()

    sol = solve_ivp(
        rhs, (0.0, float(ts[-1])), rho0.astype(complex).ravel(),
        t_eval=ts, rtol=tol, atol=tol, method="RK45",
    )
    if not sol.success:
        raise IntegrationError(f"Lindblad integration failed: {sol.message}")
    states = []
    drift = 0.0
    min_eig = np.inf
    for i in range(sol.y.shape[1]):
        rho = sol.y[:, i].reshape(dim, dim)
        rho = (rho + rho.conj().T) / 2  # sample-time hygiene only
        drift = max(drift, abs(np.trace(rho).real - 1))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(rho)[0]))
        states.append(rho)
    if min_eig < POSITIVITY_ABORT:
        raise IntegrationError(f"density operator lost positivity: min eigenvalue {min_eig:.3e}")
    tail = tail_population(states[-1])
    stats = IntegratorStats(
        nfev=sol.nfev, n_steps=len(sol.t), drift=float(drift),
        final_tail_population=tail, min_eigenvalue=min_eig,
    )
    if tail > TAIL_LIMIT:
        raise TruncationError(
            f"final tail population {tail:.3e} exceeds {TAIL_LIMIT}; increase dim"
        )
    return Trajectory(times=ts, states=states, pure=False, stats=stats)
