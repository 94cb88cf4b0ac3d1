"""Qubit-meter model of a weak measurement followed by post-selection.

The meter starts in |0>, couples through exp(-i theta Pi (x) sigma_y) and is
read out in sigma_x (real part) and sigma_y (imaginary part) after the
system is post-selected. Both readouts are normalized by 2 theta, so they
tend to the weak value of Pi as theta -> 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertError, Observable, OrthonormalBasis, PureState, projector
from .kd import OrthogonalPostSelectionError

THETA_MIN = 1e-4
THETA_MAX = 0.2
SUCCESS_THRESHOLD = 1e-10


@dataclass(frozen=True)
class WeakMeasConfig:
    theta: float
    projector_index: int
    basis: OrthonormalBasis
    post_vector: np.ndarray
    psi: PureState

    def __post_init__(self):
        if not THETA_MIN <= self.theta <= THETA_MAX:
            raise HilbertError(
                f"coupling {self.theta!r} outside the weak regime [{THETA_MIN}, {THETA_MAX}]"
            )
        if not 0 <= self.projector_index < self.basis.dim:
            raise HilbertError(f"projector index {self.projector_index} out of range")
        b = np.array(self.post_vector, dtype=complex)
        if b.shape != (self.psi.dim,) or self.basis.dim != self.psi.dim:
            raise HilbertError("state, basis and post-selection must share a dimension")
        object.__setattr__(self, "post_vector", b / np.linalg.norm(b))

    def with_theta(self, theta: float) -> "WeakMeasConfig":
        return WeakMeasConfig(theta, self.projector_index, self.basis, self.post_vector, self.psi)


@dataclass(frozen=True)
class PointerShift:
    x_shift: float
    y_shift: float
    success_prob: float
    meter: np.ndarray  # unnormalized conditional meter vector

    def __iter__(self):
        return iter((self.x_shift, self.y_shift, self.success_prob))


def coupling_unitary(Pi: np.ndarray, theta: float) -> np.ndarray:
    """exp(-i theta Pi (x) sigma_y) for a projector Pi; system is the left factor."""
    d = Pi.shape[0]
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return np.kron(np.eye(d) - Pi, np.eye(2)) + np.kron(Pi, rot)


def simulate_pointer_shift(cfg: WeakMeasConfig) -> PointerShift:
    """Exact conditional meter expectations <sigma_x>, <sigma_y> and the post-selection probability."""
    psi = cfg.psi.amplitudes
    b = cfg.post_vector
    if abs(np.vdot(b, psi)) ** 2 < SUCCESS_THRESHOLD:
        raise OrthogonalPostSelectionError("orthogonal post-selection: <b|psi> vanishes")
    Pi = projector(cfg.basis[cfg.projector_index])
    joint = coupling_unitary(Pi, cfg.theta) @ np.kron(psi, [1.0, 0.0])
    meter = np.kron(b.conj(), np.eye(2)) @ joint
    success = float(np.vdot(meter, meter).real)
    coherence = np.conj(meter[0]) * meter[1] / success
    return PointerShift(
        x_shift=float(2 * coherence.real),
        y_shift=float(2 * coherence.imag),
        success_prob=success,
        meter=meter,
    )


def pointer_estimate(cfg: WeakMeasConfig) -> complex:
    """(x_shift + i y_shift) / (2 theta)."""
    x, y, _ = simulate_pointer_shift(cfg)
    return complex(x, y) / (2 * cfg.theta)


def weak_limit_extrapolate(cfg: WeakMeasConfig) -> complex:
    """Richardson step in theta^2 from couplings theta and theta/2."""
    coarse = pointer_estimate(cfg)
    fine = pointer_estimate(cfg.with_theta(cfg.theta / 2))
    return (4 * fine - coarse) / 3


def pointer_weak_value(obs: Observable, psi: PureState, post, theta: float, extrapolate: bool = True) -> complex:
    """Weak value of a whole observable as sum_a A_a times the meter estimate for |a><a|."""
    total = 0j
    for a, A_a in enumerate(obs.eigenvalues):
        cfg = WeakMeasConfig(theta, a, obs.basis, post, psi)
        est = weak_limit_extrapolate(cfg) if extrapolate else pointer_estimate(cfg)
        total += A_a * est
    return total
