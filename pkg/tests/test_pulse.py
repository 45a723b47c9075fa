import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpo_rx import DriveKind, DriveSpec, KpoParams, PulseParams, pulse_amplitude, total_hamiltonian


def test_endpoint_and_peak_identities():
    p = PulseParams(0.865, 3.9, 10.0)
    assert abs(pulse_amplitude(0.0, p)) < 1e-10
    assert abs(pulse_amplitude(p.k_t, p)) < 1e-10
    # normalization makes the midpoint value exactly pd1
    assert pulse_amplitude(p.k_t / 2, p) == pytest.approx(p.pd1_over_K, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.3, max_value=5.0),
    st.floats(min_value=2.0, max_value=20.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_symmetry_and_bounds(pd1, k_tau, k_t, frac):
    p = PulseParams(pd1, k_tau, k_t)
    t = frac * k_t
    v = pulse_amplitude(t, p)
    assert v == pytest.approx(pulse_amplitude(k_t - t, p), abs=1e-10)
    assert -1e-12 <= v <= pd1 + 1e-12


def test_array_evaluation_matches_scalar():
    p = PulseParams(0.5, 2.0, 9.0)
    ts = np.linspace(0, 9.0, 13)
    vals = pulse_amplitude(ts, p)
    assert vals.shape == ts.shape
    for t, v in zip(ts, vals):
        assert v == pytest.approx(pulse_amplitude(float(t), p), abs=1e-14)


def test_domain_checks():
    p = PulseParams(0.5, 2.0, 9.0)
    with pytest.raises(ValueError):
        pulse_amplitude(-0.1, p)
    with pytest.raises(ValueError):
        pulse_amplitude(9.1, p)
    with pytest.raises(ValueError):
        PulseParams(-0.1, 2.0, 9.0)
    with pytest.raises(ValueError):
        PulseParams(0.1, 0.0, 9.0)


def test_total_hamiltonian_hermitian():
    params = KpoParams(2.9)
    drive = DriveSpec(DriveKind.SINGLE, 7.79, PulseParams(0.865, 3.9, 10.0))
    for t in (0.0, 3.3, 5.0, 10.0):
        H = total_hamiltonian(t, params, drive)
        assert np.max(np.abs(H - H.conj().T)) < 1e-12


def test_total_hamiltonian_reduces_to_kpo_at_edges():
    from kpo_rx import build_kpo_hamiltonian

    params = KpoParams(2.9)
    drive = DriveSpec(DriveKind.TWO, 16.55, PulseParams(0.383, 2.4, 10.0))
    H0 = build_kpo_hamiltonian(params)
    assert np.max(np.abs(total_hamiltonian(0.0, params, drive) - H0)) < 1e-10
