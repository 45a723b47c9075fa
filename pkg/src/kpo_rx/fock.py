"""Truncated-Fock-space linear algebra.

Everything is dense numpy on a dim-dimensional photon-number basis
(default dim = 31, i.e. largest photon number 30).  Units are hbar = 1,
K = 1 throughout: times in 1/K, frequencies in K.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DimensionMismatchError, InvalidDimensionError, TruncationError

DEFAULT_DIM = 31

# number of top Fock levels inspected by the truncation-adequacy check
TAIL_LEVELS = 3
TAIL_LIMIT = 1e-6


class DriveKind(str, Enum):
    """Drive operator flavor: a (single-photon) or a^2/2 (two-photon)."""

    SINGLE = "single"
    TWO = "two"


def _check_dim(dim: int) -> None:
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim!r}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def annihilation_operator(dim: int) -> np.ndarray:
    """a: entries (n-1, n) = sqrt(n)."""
    _check_dim(dim)
    a = np.zeros((dim, dim), dtype=complex)
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return _frozen(a)


def creation_operator(dim: int) -> np.ndarray:
    """a^dagger."""
    return _frozen(annihilation_operator(dim).conj().T.copy())


def number_operator(dim: int) -> np.ndarray:
    """a^dagger a = diag(0, 1, ..., dim-1)."""
    _check_dim(dim)
    return _frozen(np.diag(np.arange(dim)).astype(complex))


def parity_operator(dim: int) -> np.ndarray:
    """exp(i pi a^dagger a) = diag((-1)^n)."""
    _check_dim(dim)
    return _frozen(np.diag((-1.0) ** np.arange(dim)).astype(complex))


def drive_operator(kind: DriveKind, dim: int) -> np.ndarray:
    """The drive operator O: a for single-photon, a^2/2 for two-photon."""
    a = annihilation_operator(dim)
    if DriveKind(kind) is DriveKind.SINGLE:
        return a
    return _frozen(a @ a / 2)


def coherent_state(alpha: complex, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Coherent state |alpha> truncated to dim levels and renormalized.

    Built by the stable recurrence psi_{n+1} = psi_n * alpha / sqrt(n+1)
    (no factorials).  Requires |alpha|^2 <= (dim-1)/4 so the photon-number
    distribution fits the truncation.
    """
    _check_dim(dim)
    if abs(alpha) ** 2 > (dim - 1) / 4:
        raise TruncationError(
            f"|alpha|^2 = {abs(alpha)**2:.3f} exceeds (dim-1)/4 = {(dim - 1) / 4:.3f}"
        )
    psi = np.zeros(dim, dtype=complex)
    psi[0] = 1.0
    for n in range(dim - 1):
        psi[n + 1] = psi[n] * alpha / np.sqrt(n + 1)
    return _frozen(psi / np.linalg.norm(psi))


def vacuum_state(dim: int = DEFAULT_DIM) -> np.ndarray:
    return coherent_state(0.0, dim)


def fock_state(n: int, dim: int = DEFAULT_DIM) -> np.ndarray:
    _check_dim(dim)
    if not 0 <= n < dim:
        raise InvalidDimensionError(f"Fock index {n} outside [0, {dim})")
    psi = np.zeros(dim, dtype=complex)
    psi[n] = 1.0
    return _frozen(psi)


def expectation(op: np.ndarray, psi: np.ndarray) -> complex:
    """<psi| op |psi>."""
    if op.shape != (psi.shape[0], psi.shape[0]):
        raise DimensionMismatchError(f"operator {op.shape} vs state length {psi.shape[0]}")
    return complex(psi.conj() @ op @ psi)


def tail_population(state: np.ndarray, n_levels: int = TAIL_LEVELS) -> float:
    """Population in the top n_levels Fock levels.

    Accepts a state vector or a density operator; used as the truncation
    adequacy check (must stay below TAIL_LIMIT for trustworthy dynamics).
    """
    if state.ndim == 1:
        return float(np.sum(np.abs(state[-n_levels:]) ** 2))
    return float(np.sum(np.diag(state).real[-n_levels:]))
