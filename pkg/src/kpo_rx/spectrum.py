"""KPO Hamiltonian, spectrum labeling, and drive matrix elements.

H/K = -(1/2) a^dag^2 a^2 + (p0/2K)(a^2 + a^dag^2) in the frame rotating at
the oscillator frequency.  The degenerate top eigenvalue pair p0^2/(2K^2)
is the cat-state qubit manifold; the remaining eigenstates act as
effective excited states.  Labels: eigenvalues sorted non-increasing,
eigenstate k carries photon-number parity (-1)^k, and each eigenvector's
global phase is fixed so its largest-magnitude Fock amplitude is real
positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .errors import LabelingError, TruncationError
from .fock import (
    DEFAULT_DIM,
    DriveKind,
    annihilation_operator,
    coherent_state,
    drive_operator,
    parity_operator,
)

DEGENERACY_TOL = 1e-6
PARITY_TOL = 1e-8
RELIABLE_INDEX_CUTOFF = 10


@dataclass(frozen=True)
class KpoParams:
    """Parametric drive amplitude p0 in units of K, plus Fock truncation."""

    p0_over_K: float
    dim: int = DEFAULT_DIM

    def __post_init__(self):
        if self.p0_over_K < 0:
            raise ValueError(f"p0/K must be >= 0, got {self.p0_over_K}")
        if self.p0_over_K > (self.dim - 1) / 4:
            raise TruncationError(
                f"p0/K = {self.p0_over_K} needs alpha^2 > (dim-1)/4 = {(self.dim - 1) / 4}; "
                "increase dim"
            )

    @property
    def alpha(self) -> float:
        return float(np.sqrt(self.p0_over_K))


@dataclass(frozen=True)
class Spectrum:
    """Labeled eigensystem of the KPO Hamiltonian.

    energies[k] is E_k in units of K (non-increasing), states[:, k] the
    corresponding eigenvector, parities[k] = (-1)^k by construction.
    """

    energies: np.ndarray
    states: np.ndarray
    parities: np.ndarray
    params: KpoParams
    reliable_cutoff: int = field(default=RELIABLE_INDEX_CUTOFF)

    @property
    def dim(self) -> int:
        return self.params.dim

    def state(self, k: int) -> np.ndarray:
        return self.states[:, k]


def build_kpo_hamiltonian(params: KpoParams) -> np.ndarray:
    a = annihilation_operator(params.dim)
    ad = a.conj().T
    H = -0.5 * (ad @ ad @ a @ a) + 0.5 * params.p0_over_K * (a @ a + ad @ ad)
    H.flags.writeable = False
    return H


def diagonalize_and_label(
    H: np.ndarray,
    params: KpoParams,
    degeneracy_tol: float = DEGENERACY_TOL,
    parity_tol: float = PARITY_TOL,
) -> Spectrum:
    """Diagonalize H and assign parity-resolved labels.

    Nearly degenerate eigenvalue clusters (gap < degeneracy_tol) are
    re-diagonalized in the parity operator so each returned eigenvector is
    a parity eigenstate; the cat pair at the top of the spectrum is the
    prime example.  States are then interleaved even/odd by descending
    energy, which reproduces the adiabatic continuation from the p0 = 0
    photon-number labels.
    """
    dim = params.dim
    w, v = eigh(H)
    pdiag = parity_operator(dim).real.diagonal()

    # cluster nearly degenerate eigenvalues
    clusters = []
    start = 0
    for i in range(1, dim + 1):
        if i == dim or w[i] - w[i - 1] > degeneracy_tol:
            clusters.append((start, i))
            start = i

    even, odd = [], []
    for s, e in clusters:
        block = v[:, s:e]
        if e - s > 1:
            pblock = block.conj().T @ (pdiag[:, None] * block)
            _, pv = eigh(pblock)
            block = block @ pv
        energy = float(np.mean(w[s:e]))
        for j in range(e - s):
            col = block[:, j].astype(complex)
            pexp = float(np.sum(pdiag * np.abs(col) ** 2))
            if abs(abs(pexp) - 1) > parity_tol:
                raise LabelingError(
                    f"eigenvector at E = {energy:.6g} has parity expectation {pexp:.6g}"
                )
            (even if pexp > 0 else odd).append((energy, col))
    even.sort(key=lambda t: -t[0])
    odd.sort(key=lambda t: -t[0])

    energies = np.empty(dim)
    states = np.empty((dim, dim), dtype=complex)
    parities = np.empty(dim, dtype=int)
    for k in range(dim):
        pool = even if k % 2 == 0 else odd
        energy, col = pool[k // 2]
        # global phase: largest-magnitude amplitude real positive
        j = int(np.argmax(np.abs(col)))
        col = col * np.exp(-1j * np.angle(col[j]))
        energies[k] = energy
        states[:, k] = col
        parities[k] = 1 if k % 2 == 0 else -1
    states.flags.writeable = False
    energies.flags.writeable = False
    parities.flags.writeable = False
    return Spectrum(energies=energies, states=states, parities=parities, params=params)


def kpo_spectrum(params: KpoParams) -> Spectrum:
    """Convenience: build and label in one call."""
    return diagonalize_and_label(build_kpo_hamiltonian(params), params)


def cat_states_analytic(params: KpoParams) -> tuple[np.ndarray, np.ndarray]:
    """Even/odd cat states N_pm (|alpha> pm |-alpha>), normalized.

    The odd branch diverges at alpha = 0 (N_- blows up) and raises.
    """
    alpha = params.alpha
    plus = coherent_state(alpha, params.dim)
    minus = coherent_state(-alpha, params.dim)
    even = plus + minus
    even = even / np.linalg.norm(even)
    odd = plus - minus
    nrm = np.linalg.norm(odd)
    if nrm < 1e-12:
        raise ValueError("odd cat state undefined at alpha = 0")
    odd = odd / nrm
    even.flags.writeable = False
    odd.flags.writeable = False
    return even, odd


def computational_basis(spec: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    """|0~> = (|E_0> + |E_1>)/sqrt2 and |1~> = (|E_0> - |E_1>)/sqrt2.

    The sign of |E_1> is anchored so that <0~|alpha> > 0, i.e. |0~> is the
    one approximating |+alpha>.  Without the anchor the Rx rotation sense
    would be convention-dependent.
    """
    e0 = spec.state(0)
    e1 = spec.state(1)
    alpha_state = coherent_state(spec.params.alpha, spec.dim)
    if ((e0 + e1).conj() @ alpha_state).real < 0:
        e1 = -e1
    z0 = (e0 + e1) / np.sqrt(2)
    z1 = (e0 - e1) / np.sqrt(2)
    z0.flags.writeable = False
    z1.flags.writeable = False
    return z0, z1


def drive_matrix_element(spec: Spectrum, kind: DriveKind, k: int, l: int) -> complex:
    """<E_k| O |E_l> with O = a (single) or a^2/2 (two)."""
    op = drive_operator(kind, spec.dim)
    return complex(spec.state(k).conj() @ op @ spec.state(l))


def xi(spec: Spectrum, k: int) -> float:
    """Transition frequency (E_0 - E_k) in units of K."""
    return float(spec.energies[0] - spec.energies[k])
