import numpy as np
import pytest

from kpo_rx import (
    DriveKind,
    DriveSpec,
    KpoParams,
    PulseParams,
    computational_basis,
    evolve_lindblad,
    evolve_schrodinger,
    extract_gate_mixed,
    extract_gate_pure,
    kpo_spectrum,
)


@pytest.fixture(scope="session")
def spec29():
    return kpo_spectrum(KpoParams(2.9))


@pytest.fixture(scope="session")
def spec47():
    return kpo_spectrum(KpoParams(4.7))


@pytest.fixture(scope="session")
def spec42():
    return kpo_spectrum(KpoParams(4.2))


def run_gate(p0, wd, pd1, k_tau, k_t, kind, dim=31, kappa=0.0, tol=1e-10):
    """Propagate |0~> through one gate and extract (theta*, 1-F, leakage)."""
    params = KpoParams(p0, dim)
    spec = kpo_spectrum(params)
    z0, z1 = computational_basis(spec)
    drive = DriveSpec(kind, wd, PulseParams(pd1, k_tau, k_t))
    if kappa > 0:
        traj = evolve_lindblad(np.outer(z0, z0.conj()), params, drive, kappa, [k_t], tol=tol)
        return extract_gate_mixed(traj.states[-1], (z0, z1), z0)
    traj = evolve_schrodinger(z0, params, drive, [k_t], tol=tol)
    psif = traj.states[-1] / np.linalg.norm(traj.states[-1])
    return extract_gate_pure(psif, (z0, z1), z0)
