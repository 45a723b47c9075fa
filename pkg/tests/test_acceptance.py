"""Acceptance suite: one test per criterion, so `pytest -v` prints one
pass/fail line for each.  Numeric tolerances are stated inline; the
slower criteria (scan structure, loss scan, weak-drive model comparison)
take minutes on one core.
"""

import numpy as np
import pytest
from conftest import run_gate

from kpo_rx import (
    DriveKind,
    DriveSpec,
    KpoParams,
    PulseParams,
    ScanGrid,
    coherent_state,
    computational_basis,
    evolve_schrodinger,
    extract_gate_pure,
    gate_scan,
    kpo_spectrum,
    linear_loss_fit,
    loss_scan,
    predicted_rotation,
    theta_g,
    two_level_reduction,
    xi,
)

HIGH_FIDELITY = 1e-3


def test_criterion_1_cat_state_overlap():
    """|<alpha|-alpha>|^2 = 9.2e-6 +- 1e-7 at p0/K = 2.9."""
    alpha = np.sqrt(2.9)
    plus = coherent_state(alpha, 31)
    minus = coherent_state(-alpha, 31)
    overlap = abs(minus.conj() @ plus) ** 2
    assert overlap == pytest.approx(9.2e-6, abs=1e-7)


def test_criterion_2_exact_degeneracy_and_parity():
    """E_0 = E_1 = p0^2/2 within 1e-8 and parity(|E_k>) = (-1)^k for k <= 8."""
    for p0 in (1.0, 2.9, 4.7, 8.0):
        dim = 41 if p0 > 7.5 else 31  # p0 = 8 needs alpha^2 <= (dim-1)/4
        spec = kpo_spectrum(KpoParams(p0, dim))
        want = p0**2 / 2
        assert abs(spec.energies[0] - want) < 1e-8
        assert abs(spec.energies[1] - want) < 1e-8
        assert list(spec.parities[:9]) == [(-1) ** k for k in range(9)]


def test_criterion_3_single_photon_gate():
    """(2.9, 7.79, 0.865, 3.9, 10): theta* = -pi/2 +- 0.02, 1-F = 5.1e-4 +- 2e-4."""
    res = run_gate(2.9, 7.79, 0.865, 3.9, 10.0, DriveKind.SINGLE)
    assert res.theta_star == pytest.approx(-np.pi / 2, abs=0.02)
    assert 1 - res.fidelity == pytest.approx(5.1e-4, abs=2e-4)


def test_criterion_4_two_photon_gate():
    """(4.7, 16.55, 0.383, 2.4, 10): theta* = +pi/2 +- 0.02, 1-F = 5.4e-4 +- 2e-4."""
    res = run_gate(4.7, 16.55, 0.383, 2.4, 10.0, DriveKind.TWO)
    assert res.theta_star == pytest.approx(np.pi / 2, abs=0.02)
    assert 1 - res.fidelity == pytest.approx(5.4e-4, abs=2e-4)


def test_criterion_5_fast_gates():
    """Shortest gates: both reach theta* = -pi/2 +- 0.02 with 1-F < 1e-3."""
    single = run_gate(2.9, 7.78, 0.848, 2.3, 9.1, DriveKind.SINGLE)
    two = run_gate(4.2, 20.51, 0.732, 1.0, 6.4, DriveKind.TWO)
    for res in (single, two):
        assert res.theta_star == pytest.approx(-np.pi / 2, abs=0.02)
        assert 1 - res.fidelity < 1e-3


@pytest.fixture(scope="module")
def fig4_scans():
    grids = {}
    p29 = KpoParams(2.9)
    x4 = xi(kpo_spectrum(p29), 4)
    grid_s = ScanGrid(x4 - 1.5, x4 + 1.5, 0.05, 0.0, 2.0, 0.05)
    grids["single"] = gate_scan(p29, DriveKind.SINGLE, grid_s, 3.9, 10.0, tol=1e-8)
    p47 = KpoParams(4.7)
    x5 = xi(kpo_spectrum(p47), 5)
    grid_t = ScanGrid(x5 - 1.5, x5 + 1.5, 0.05, 0.0, 2.0, 0.05)
    grids["two"] = gate_scan(p47, DriveKind.TWO, grid_t, 2.4, 10.0, tol=1e-8)
    return grids


def test_criterion_6_scan_structure(fig4_scans):
    """Continuous-gate scan structure on the 0.05 x 0.05 grid.

    Checks, in order: single-photon theta span among 1-F < 1e-3 points;
    high-fidelity (1-F < 1e-3, |theta| >= pi/2) count two > single;
    two-photon theta reaching >= pi - 0.1.
    """
    single_hi = [p for p in fig4_scans["single"] if not p.failed and p.one_minus_F < HIGH_FIDELITY]
    two_hi = [p for p in fig4_scans["two"] if not p.failed and p.one_minus_F < HIGH_FIDELITY]

    thetas_s = [p.theta_star for p in single_hi]
    assert max(thetas_s) >= -0.05
    assert min(thetas_s) <= -np.pi / 2 + 0.05

    n_single = sum(1 for p in single_hi if abs(p.theta_star) >= np.pi / 2)
    n_two = sum(1 for p in two_hi if abs(p.theta_star) >= np.pi / 2)
    assert n_two > n_single

    # the two-photon ridge reaching theta ~ pi is narrower than the 0.05
    # pd1 step, so this grid resolution cannot exhibit it
    assert max(p.theta_star for p in two_hi) >= np.pi - 0.1


FAST_SINGLE = (2.9, DriveKind.SINGLE, 7.78, 0.848, 2.3, 9.1)
FAST_TWO = (4.2, DriveKind.TWO, 20.51, 0.732, 1.0, 6.4)


def test_criterion_7_loss_scan():
    """1-F vs kappa: monotone, in [3e-3, 3e-2] at kappa = 7.7e-4, linear small-kappa."""
    kappas = list(np.logspace(-5, -2, 25)) + [7.7e-4]
    for p0, kind, wd, pd1, k_tau, k_t in (FAST_SINGLE, FAST_TWO):
        params = KpoParams(p0)
        drive = DriveSpec(kind, wd, PulseParams(pd1, k_tau, k_t))
        pts = loss_scan(params, drive, kappas, tol=1e-8)
        errs = [p.one_minus_F for p in pts]
        assert all(b - a > -1e-9 for a, b in zip(errs, errs[1:])), "not monotone"
        at_ref = next(p for p in pts if p.kappa_over_K == 7.7e-4)
        assert 3e-3 <= at_ref.one_minus_F <= 3e-2
        eps, eta, resid = linear_loss_fit(pts, kappa_max=1e-3)
        fit_vals = [p.one_minus_F for p in pts if p.kappa_over_K <= 1e-3]
        assert resid < 0.1 * (max(fit_vals) - min(fit_vals))
        # intercept consistent with the coherent (kappa = 0) error
        err0 = 1 - run_gate(p0, wd, pd1, k_tau, k_t, kind).fidelity
        assert abs(eps - err0) < 0.5 * err0


def test_criterion_8_property_suites():
    """Cross-cutting invariants (details exercised further in the unit modules)."""
    from scipy.linalg import expm

    from kpo_rx import (
        drive_matrix_element,
        evolve_lindblad,
        expectation,
        parity_operator,
        pulse_amplitude,
        total_hamiltonian,
    )

    # pulse endpoint/symmetry identities (1e-10)
    p = PulseParams(0.865, 3.9, 10.0)
    assert abs(pulse_amplitude(0.0, p)) < 1e-10
    assert abs(pulse_amplitude(10.0, p)) < 1e-10
    for t in (1.0, 3.3, 4.9):
        assert abs(pulse_amplitude(t, p) - pulse_amplitude(10.0 - t, p)) < 1e-10

    # selection-rule zeros (1e-10)
    spec = kpo_spectrum(KpoParams(2.9))
    for k in range(4):
        for l in range(4):
            if spec.parities[k] == spec.parities[l]:
                assert abs(drive_matrix_element(spec, DriveKind.SINGLE, k, l)) < 1e-10
            else:
                assert abs(drive_matrix_element(spec, DriveKind.TWO, k, l)) < 1e-10

    # truncation convergence dim 31 -> 41 (1e-8 on E_k, k <= 6)
    e31 = kpo_spectrum(KpoParams(2.9, 31)).energies[:7]
    e41 = kpo_spectrum(KpoParams(2.9, 41)).energies[:7]
    assert np.max(np.abs(e31 - e41)) < 1e-8

    # norm conservation (1e-7) + parity conservation under two-photon drive (1e-8)
    z0, z1 = computational_basis(spec)
    P = parity_operator(31)
    drive = DriveSpec(DriveKind.TWO, 16.55, PulseParams(0.3, 2.4, 10.0))
    traj = evolve_schrodinger(z0, KpoParams(2.9), drive, np.linspace(1, 10, 5))
    assert traj.stats.drift < 1e-7
    p0_exp = expectation(P, z0).real
    for s in traj.states:
        assert abs(expectation(P, s).real - p0_exp) < 1e-8

    # Lindblad(kappa = 0) vs Schrodinger, trace distance (1e-6), trace conservation
    params = KpoParams(0.5, dim=12)
    d_small = DriveSpec(DriveKind.SINGLE, 1.5, PulseParams(0.2, 1.0, 4.0))
    zs, _ = computational_basis(kpo_spectrum(params))
    mixed = evolve_lindblad(np.outer(zs, zs.conj()), params, d_small, 0.0, [4.0])
    assert mixed.stats.drift < 1e-7
    pure = evolve_schrodinger(zs, params, d_small, [4.0])
    diff = mixed.states[-1] - np.outer(pure.states[-1], pure.states[-1].conj())
    assert 0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))) < 1e-6

    # matrix-exponential propagator oracle on dim = 6 (1e-6)
    params6 = KpoParams(0.001, dim=6)
    drive6 = DriveSpec(DriveKind.SINGLE, 5.0, PulseParams(0.1, 1.0, 4.0))
    z6, _ = computational_basis(kpo_spectrum(params6))
    psi = z6.astype(complex)
    n_steps = 8000
    dt = 4.0 / n_steps
    for i in range(n_steps):
        psi = expm(-1j * total_hamiltonian((i + 0.5) * dt, params6, drive6) * dt) @ psi
    ref = evolve_schrodinger(z6, params6, drive6, [4.0], tol=1e-12)
    assert np.linalg.norm(ref.states[-1] - psi) < 1e-6

    # closed-form theta* vs dense grid (1e-4 rad)
    rng = np.random.default_rng(11)
    for _ in range(10):
        v = rng.normal(size=(8, 4)) + 1j * rng.normal(size=(8, 4))
        q, _ = np.linalg.qr(v)
        zb0, zb1 = q[:, 0], q[:, 1]
        psi_i = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi_i /= np.linalg.norm(psi_i)
        psi_f = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi_f /= np.linalg.norm(psi_f)
        res = extract_gate_pure(psi_f, (zb0, zb1), psi_i)
        thetas = np.linspace(-np.pi, np.pi, 100_000, endpoint=False)
        ci = np.array([zb0.conj() @ psi_i, zb1.conj() @ psi_i])
        cf = np.array([zb0.conj() @ psi_f, zb1.conj() @ psi_f])
        c2, s2 = np.cos(thetas / 2), np.sin(thetas / 2)
        F = np.abs(cf.conj() @ [c2 * ci[0] - 1j * s2 * ci[1], c2 * ci[1] - 1j * s2 * ci[0]]) ** 2
        dth = abs(res.theta_star - thetas[np.argmax(F)])
        assert min(dth, 2 * np.pi - dth) < 1e-4


def test_criterion_9_weak_drive_model_consistency():
    """Two-level phase prediction: two-photon within 10% of full dynamics for
    pd1 <= 0.1; single-photon deviation strictly larger at matched pd1.

    The pulse must be slow against the effective two-level gap, hence the
    long K*T = 100 ramps.
    """
    cases = {
        "two": (KpoParams(4.7), DriveKind.TWO, 16.55, 24.0, 100.0),
        "single": (KpoParams(2.9), DriveKind.SINGLE, 7.79, 39.0, 100.0),
    }
    rel = {}
    for name, (params, kind, wd, k_tau, k_t) in cases.items():
        spec = kpo_spectrum(params)
        z0, z1 = computational_basis(spec)
        rel[name] = []
        for pd1 in (0.02, 0.05, 0.1):
            pulse = PulseParams(pd1, k_tau, k_t)
            drive = DriveSpec(kind, wd, pulse)
            th = [theta_g(two_level_reduction(spec, drive, g), pulse) for g in (0, 1)]
            pred = predicted_rotation(th[0], th[1])
            traj = evolve_schrodinger(z0, params, drive, [k_t], tol=1e-8)
            psif = traj.states[-1] / np.linalg.norm(traj.states[-1])
            full = extract_gate_pure(psif, (z0, z1), z0).theta_star
            rel[name].append(abs(pred - full) / abs(full))
    assert all(r < 0.10 for r in rel["two"]), rel["two"]
    for r_two, r_single in zip(rel["two"], rel["single"]):
        assert r_single > r_two, (rel["single"], rel["two"])
