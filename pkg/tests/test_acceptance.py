"""Exit criteria, each at its pinned tolerance; one summary line per criterion."""
import time

import numpy as np
import pytest

from kdclone.channels import (
    ControlAxis,
    apply_clone_channel,
    apply_partial_swap_channel,
    clone_fidelity,
    coherence_operator,
    controlled_swap_output,
    cswap_joint_probabilities,
    joint_diagonal,
    partial_swap_closed_form,
    partial_swap_unitary,
)
from kdclone.hilbert import (
    Observable,
    OrthonormalBasis,
    PureState,
    computational_basis,
    fourier_basis,
    haar_random_state,
    partial_trace,
    random_basis,
    random_density,
    tensor,
)
from kdclone.kd import (
    background_subtract,
    clone_joint_probabilities,
    extract_kd_from_cswap,
    kd_distribution,
    negativity_report,
    reconstruct_density_matrix,
)
from kdclone.tables import sample_setting
from kdclone.weakmeas import WeakMeasConfig, pointer_estimate, pointer_weak_value

from .oracles import brute_kd

DIMS = (2, 3, 4, 5)
TRIALS = 100


def trial_set():
    """100 pure and 100 mixed states per dimension, with a random basis pair each."""
    for d in DIMS:
        for t in range(TRIALS):
            s = 1_000_000 * d + 10 * t
            yield d, haar_random_state(d, s).density(), random_basis(d, s + 1), random_basis(d, s + 2)
            rho = random_density(d, 1 + t % d, s + 3)
            yield d, rho, random_basis(d, s + 4), random_basis(d, s + 5)


def test_ac1_partial_traces_of_coherence_operator(criterion):
    start = time.perf_counter()
    worst = 0.0
    for d, rho, _, _ in trial_set():
        C = coherence_operator(rho)
        worst = max(worst,
                    np.abs(partial_trace(C, keep=1) - rho.matrix).max(),
                    np.abs(partial_trace(C, keep=2) - rho.matrix).max())
    elapsed = time.perf_counter() - start
    criterion("AC1 partial traces", f"max dev {worst:.2e} (< 1e-12), {elapsed:.2f}s (< 5s)")
    assert worst < 1e-12
    assert elapsed < 5


def test_ac2_same_basis_delta(criterion):
    worst = 0.0
    for d in DIMS:
        for t in range(TRIALS):
            psi = haar_random_state(d, 7_000_000 * d + t)
            A = random_basis(d, 8_000_000 * d + t)
            table = joint_diagonal(coherence_operator(psi), A, A)
            born = np.abs(A.vectors.conj() @ psi.amplitudes) ** 2
            worst = max(worst, np.abs(table - np.diag(born)).max())
    criterion("AC2 same-basis delta correlations", f"max dev {worst:.2e} (< 1e-12)")
    assert worst < 1e-12


def test_ac3_coherence_elements_equal_kd(criterion):
    worst = 0.0
    for d, rho, A, B in trial_set():
        from_coherence = joint_diagonal(coherence_operator(rho), A, B)
        worst = max(worst, np.abs(from_coherence - kd_distribution(rho, A, B).entries).max())
    criterion("AC3 <a,b|C|a,b> = <b|a><a|rho|b>", f"max dev {worst:.2e} (< 1e-12)")
    assert worst < 1e-12


def test_ac4_clone_round_trip_and_fidelity(criterion):
    worst_rt = 0.0
    for d, rho, A, B in trial_set():
        p = clone_joint_probabilities(apply_clone_channel(rho), A, B)
        worst_rt = max(worst_rt, np.abs(background_subtract(p, d) - kd_distribution(rho, A, B).real).max())
    worst_fid = 0.0
    for d in DIMS:
        for t in range(TRIALS):
            psi = haar_random_state(d, 9_000_000 * d + t)
            worst_fid = max(worst_fid, abs(clone_fidelity(apply_clone_channel(psi), psi)
                                           - (d + 3) / (2 * (d + 1))))
    f2 = clone_fidelity(apply_clone_channel(PureState([1, 0])), PureState([1, 0]))
    criterion("AC4 cloner round-trip / fidelity",
              f"round-trip {worst_rt:.2e} (< 1e-10), fidelity dev {worst_fid:.2e} (< 1e-12), F(d=2)={f2:.15f}")
    assert worst_rt < 1e-10
    assert worst_fid < 1e-12
    assert abs(f2 - 5 / 6) < 1e-12


def test_ac5_partial_swap_oracle(criterion):
    worst_cf, worst_im = 0.0, 0.0
    for d, rho, A, B in trial_set():
        # conjugation written out here, independent of apply_partial_swap_channel
        U = partial_swap_unitary(d)
        conj = U @ tensor(rho.matrix, np.eye(d) / d) @ U.conj().T
        closed = partial_swap_closed_form(rho).matrix
        worst_cf = max(worst_cf, np.abs(conj - closed).max(),
                       np.abs(apply_partial_swap_channel(rho).matrix - closed).max())
        kd = brute_kd(rho.matrix, A, B)
        qa, qb = kd.sum(axis=1).real, kd.sum(axis=0).real
        diag = joint_diagonal(conj, A, B).real
        worst_im = max(worst_im, np.abs(diag - (qa[:, None] + qb[None, :]) / (2 * d) - kd.imag / d).max())
    criterion("AC5 partial swap", f"closed form {worst_cf:.2e} (< 1e-12), Im kd/d {worst_im:.2e} (< 1e-10)")
    assert worst_cf < 1e-12
    assert worst_im < 1e-10


def test_ac6_cswap_extraction_and_reconstruction(criterion):
    worst_kd, worst_rec = 0.0, 0.0
    for d, rho, _, _ in trial_set():
        Z, F = computational_basis(d), fourier_basis(d)
        out = controlled_swap_output(rho)
        x0, x1 = cswap_joint_probabilities(out, ControlAxis.X, Z, F)
        y0, y1 = cswap_joint_probabilities(out, ControlAxis.Y, Z, F)
        kd = extract_kd_from_cswap(x0, x1, y0, y1, d, Z, F)
        re = d * (x0.entries - x1.entries)
        im = d * (y0.entries - y1.entries)
        direct = kd_distribution(rho, Z, F).entries
        worst_kd = max(worst_kd, np.abs(re - direct.real).max(), np.abs(im - direct.imag).max(),
                       np.abs(kd.entries - direct).max())
        worst_rec = max(worst_rec, np.abs(reconstruct_density_matrix(kd).matrix - rho.matrix).max())
    criterion("AC6 controlled-swap tomography",
              f"kd dev {worst_kd:.2e} (< 1e-10), reconstruction dev {worst_rec:.2e} (< 1e-10)")
    assert worst_kd < 1e-10
    assert worst_rec < 1e-10


def test_ac7_weak_measurement_convergence(criterion):
    Z = computational_basis(2)
    psi = PureState.normalized([1, 1])
    post = np.array([2, -1]) / np.sqrt(5)
    cfg = WeakMeasConfig(0.05, 0, Z, post, psi)
    err = abs(pointer_estimate(cfg) - 2)
    err_half = abs(pointer_estimate(cfg.with_theta(0.025)) - 2)
    ratio = err / err_half
    sz = pointer_weak_value(Observable(Z, [1.0, -1.0]), psi, post, 0.05)
    proj = pointer_weak_value(Observable(Z, [1.0, 0.0]), psi, post, 0.05)
    criterion("AC7 weak-measurement pointer",
              f"error ratio {ratio:.3f} (in [3,5]), sigma_z {abs(sz - 3):.2e}, projector {abs(proj - 2):.2e} (< 1e-4)")
    assert 3 <= ratio <= 5
    assert abs(sz - 3) < 1e-4
    assert abs(proj - 2) < 1e-4


def test_ac8_negativity_witness(criterion):
    skewed = OrthonormalBasis(np.array([[2, -1], [1, 2]]) / np.sqrt(5))
    kd = kd_distribution(PureState.normalized([1, 1]), computational_basis(2), skewed)
    rep = negativity_report(kd)
    value = kd.entries[1, 0].real
    criterion("AC8 negativity witness", f"Re kd(1, b0) = {value:.15f}, dev {abs(value + 0.1):.2e} (< 1e-12)")
    assert abs(value + 0.1) < 1e-12
    assert rep.negative_indices == ((1, 0),)


def shot_tomography(rho, shots, seed):
    Z, F = computational_basis(2), fourier_basis(2)
    out = controlled_swap_output(rho)
    x0, x1 = sample_setting(cswap_joint_probabilities(out, ControlAxis.X, Z, F), shots, seed)
    y0, y1 = sample_setting(cswap_joint_probabilities(out, ControlAxis.Y, Z, F), shots, seed + 1)
    return reconstruct_density_matrix(extract_kd_from_cswap(x0, x1, y0, y1, 2, Z, F)).matrix


@pytest.mark.parametrize("state_seed", [3, 4])
def test_ac9_finite_shot_tomography(criterion, state_seed):
    rho = haar_random_state(2, state_seed).density() if state_seed % 2 else random_density(2, 2, state_seed)
    rec = shot_tomography(rho, 10**6, seed=1000 + state_seed)
    again = shot_tomography(rho, 10**6, seed=1000 + state_seed)
    dev = np.abs(rec - rho.matrix).max()
    criterion(f"AC9 finite-shot tomography [state {state_seed}]",
              f"max dev {dev:.2e} (< 1e-2) with 1e6 shots per setting, deterministic={rec.tobytes() == again.tobytes()}")
    assert dev < 1e-2
    assert rec.tobytes() == again.tobytes()
