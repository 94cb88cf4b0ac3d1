import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kdclone.hilbert import (
    HilbertError,
    Observable,
    OrthonormalBasis,
    PureState,
    computational_basis,
    haar_random_state,
    random_basis,
)
from kdclone.kd import OrthogonalPostSelectionError, weak_value
from kdclone.weakmeas import (
    WeakMeasConfig,
    pointer_estimate,
    pointer_weak_value,
    simulate_pointer_shift,
    weak_limit_extrapolate,
)

s2 = 1 / np.sqrt(2)
Z2 = computational_basis(2)
PLUS = PureState.normalized([1, 1])
ZERO = PureState([1, 0])
POST = np.array([2, -1]) / np.sqrt(5)


def meter_closed_form(psi, b, a_vec, theta):
    """Post-selected meter amplitudes <b|psi> ((1 - w + w cos t), w sin t), w the weak value of |a><a|."""
    overlap = np.vdot(b, psi)
    w = np.vdot(b, a_vec) * np.vdot(a_vec, psi) / overlap
    return overlap * np.array([1 - w + w * np.cos(theta), w * np.sin(theta)])


def cfg(theta, index=0, basis=Z2, post=POST, psi=PLUS):
    return WeakMeasConfig(theta, index, basis, post, psi)


def test_anomalous_projector_shift():
    x, y, _ = simulate_pointer_shift(cfg(0.01))
    assert x / 0.02 == pytest.approx(2, abs=5e-3)
    assert abs(y) < 1e-12


def test_eigenstate_shift():
    x, _, prob = simulate_pointer_shift(cfg(0.01, post=[1, 0], psi=ZERO))
    assert x / 0.02 == pytest.approx(1, abs=1e-4)
    assert prob == pytest.approx(1, abs=1e-12)


def test_imaginary_shift():
    X_basis = OrthonormalBasis([[s2, s2], [s2, -s2]])
    _, y, _ = simulate_pointer_shift(cfg(0.01, basis=X_basis, post=[s2, 1j * s2], psi=ZERO))
    assert y / 0.02 == pytest.approx(-0.5, abs=5e-3)


def test_shift_matches_closed_form_meter():
    for t in range(30):
        d = 2 + t % 3
        psi = haar_random_state(d, t)
        A = random_basis(d, 100 + t)
        b = haar_random_state(d, 200 + t).amplitudes
        theta = 0.01 + 0.005 * (t % 7)
        shift = simulate_pointer_shift(WeakMeasConfig(theta, t % d, A, b, psi))
        m = meter_closed_form(psi.amplitudes, b, A[t % d], theta)
        np.testing.assert_allclose(shift.meter, m, atol=1e-12)
        z = np.conj(m[0]) * m[1] / np.vdot(m, m).real
        assert shift.x_shift == pytest.approx(2 * z.real, abs=1e-12)
        assert shift.y_shift == pytest.approx(2 * z.imag, abs=1e-12)


def test_extrapolation_anomalous_and_convergence_order():
    w = 2.0
    raw = abs(pointer_estimate(cfg(0.05)) - w)
    raw_half = abs(pointer_estimate(cfg(0.025)) - w)
    assert 3 <= raw / raw_half <= 5
    assert abs(weak_limit_extrapolate(cfg(0.05)) - w) < 1e-4


def test_extrapolation_eigenstate():
    # v(theta) = sin(2 theta)/(2 theta); one Richardson step leaves theta^4/30
    est = weak_limit_extrapolate(cfg(0.005, post=[1, 0], psi=ZERO))
    assert abs(est - 1) < 1e-10
    coarse = weak_limit_extrapolate(cfg(0.05, post=[1, 0], psi=ZERO))
    assert abs(coarse - 1) == pytest.approx(0.05 ** 4 / 30, rel=1e-2)


def test_pointer_weak_value_sigma_z():
    sigma_z = Observable(Z2, [1.0, -1.0])
    assert abs(pointer_weak_value(sigma_z, PLUS, POST, 0.05) - 3) < 1e-4
    assert abs(pointer_weak_value(sigma_z, PLUS, POST, 0.05, extrapolate=False) - 3) > 1e-3


def test_random_configurations_first_order_bound():
    found = 0
    for t in range(500):
        rng = np.random.default_rng(t)
        d = int(rng.integers(2, 5))
        psi = haar_random_state(d, 1000 + t)
        b = haar_random_state(d, 2000 + t).amplitudes
        if abs(np.vdot(b, psi.amplitudes)) ** 2 <= 0.05:
            continue
        A = random_basis(d, 3000 + t)
        a = int(rng.integers(d))
        theta = 1e-2
        w = weak_value(Observable(A, np.eye(d)[a]), psi, b).value
        est = pointer_estimate(WeakMeasConfig(theta, a, A, b, psi))
        assert abs(est - w) <= 10 * theta * (1 + abs(w) ** 2)
        found += 1
        if found == 50:
            break
    assert found == 50


@given(st.integers(0, 2**32), st.sampled_from([0.2, 0.1, 0.05, 0.02, 0.01]))
def test_success_probability(seed, theta):
    psi = haar_random_state(3, seed)
    b = haar_random_state(3, seed + 1).amplitudes
    if abs(np.vdot(b, psi.amplitudes)) ** 2 < 0.05:
        return
    shift = simulate_pointer_shift(WeakMeasConfig(theta, seed % 3, random_basis(3, seed + 2), b, psi))
    assert np.vdot(shift.meter, shift.meter).real == pytest.approx(shift.success_prob, abs=1e-12)
    # |1 - w(1 - cos)|^2 + |w sin|^2 differs from 1 at order theta^2 |w|^2
    born = abs(np.vdot(b, psi.amplitudes)) ** 2
    w_bound = 1 / np.sqrt(born)
    assert abs(shift.success_prob - born) <= 4 * theta**2 * (1 + w_bound**2)


def test_config_validation():
    with pytest.raises(HilbertError):
        cfg(0.3)
    with pytest.raises(HilbertError):
        cfg(1e-5)
    with pytest.raises(HilbertError):
        cfg(0.05, index=2)
    with pytest.raises(OrthogonalPostSelectionError):
        simulate_pointer_shift(cfg(0.05, post=[s2, -s2]))
