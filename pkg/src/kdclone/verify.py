"""Seeded batch check of every cross-module identity.

Trial ``t`` draws all of its randomness from ``seed + t`` so a failing
trial can be replayed on its own.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from . import kd as kdm
from .hilbert import (
    computational_basis,
    fourier_basis,
    haar_random_state,
    partial_trace,
    random_basis,
    random_density,
)
from .tables import ProbTable

IDENTITIES = (
    "partial-trace",
    "same-basis-delta",
    "coherence-kd",
    "clone-background-roundtrip",
    "clone-fidelity",
    "partial-swap-closed-form",
    "partial-swap-imag",
    "cswap-extraction",
    "reconstruction",
)


@dataclass
class IdentityResult:
    name: str
    max_deviation: float = 0.0
    worst_seed: int | None = None

    def update(self, dev: float, seed: int) -> None:
        if dev > self.max_deviation or self.worst_seed is None:
            self.max_deviation = max(dev, self.max_deviation)
            self.worst_seed = seed


@dataclass
class VerifyReport:
    dim: int
    trials: int
    seed: int
    tolerance: float
    results: dict[str, IdentityResult] = field(default_factory=dict)

    @property
    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results.values() if not r.max_deviation < self.tolerance]

    @property
    def ok(self) -> bool:
        return not self.failures


def _maxabs(x) -> float:
    return float(np.max(np.abs(x)))


def check_trial(d: int, trial_seed: int, perturb: float = 0.0) -> dict[str, float]:
    """Largest deviation of each identity for one pure and one mixed input."""
    rng = np.random.default_rng(trial_seed)
    s_pure, s_mixed, s_a, s_b, s_rank = (int(x) for x in rng.integers(0, 2**62, size=5))
    rank = 1 + int(s_rank % d)
    states = [
        (True, haar_random_state(d, s_pure).density()),
        (False, random_density(d, rank, s_mixed)),
    ]
    A, B = random_basis(d, s_a), random_basis(d, s_b)
    Z, F = computational_basis(d), fourier_basis(d)
    devs = dict.fromkeys(IDENTITIES, 0.0)

    def record(name, value):
        devs[name] = max(devs[name], value)

    for pure, rho in states:
        r = rho.matrix
        C = ch.coherence_operator(rho)
        record("partial-trace", max(
            _maxabs(partial_trace(C, keep=1) - r),
            _maxabs(partial_trace(C, keep=2) - r),
        ))
        if pure:
            same = ch.joint_diagonal(C, A, A)
            born = np.real(np.einsum("ai,ij,aj->a", A.vectors.conj(), r, A.vectors))
            record("same-basis-delta", _maxabs(same - np.diag(born)))

        kd = kdm.kd_distribution(rho, A, B)
        record("coherence-kd", _maxabs(ch.joint_diagonal(C, A, B) - kd.entries))

        clone = ch.clone_matrix(rho, prefactor_scale=1.0 + perturb)
        # fault injection may push marginals out of range; that is a violation too
        try:
            re_kd = kdm.background_subtract(ProbTable(
                np.clip(ch.joint_diagonal(clone, A, B).real, 0.0, None)), d)
            record("clone-background-roundtrip", _maxabs(re_kd - kd.real))
        except kdm.MalformedTableError:
            record("clone-background-roundtrip", np.inf)
        if pure:
            fid = float(np.real(np.trace(r @ partial_trace(clone, keep=1, dim=d))))
            record("clone-fidelity", abs(fid - (d + 3) / (2 * (d + 1))))

        ps = ch.apply_partial_swap_channel(rho).matrix
        record("partial-swap-closed-form", _maxabs(ps - ch.partial_swap_closed_form(rho).matrix))
        diag = ch.joint_diagonal(ps, A, B).real
        qa = np.real(np.einsum("ai,ij,aj->a", A.vectors.conj(), r, A.vectors))
        qb = np.real(np.einsum("ai,ij,aj->a", B.vectors.conj(), r, B.vectors))
        background = (qa[:, None] + qb[None, :]) / (2 * d)
        record("partial-swap-imag", _maxabs(diag - background - kd.imag / d))

        out = ch.controlled_swap_output(rho)
        tables = [*ch.cswap_joint_probabilities(out, ch.ControlAxis.X, Z, F),
                  *ch.cswap_joint_probabilities(out, ch.ControlAxis.Y, Z, F)]
        extracted = kdm.extract_kd_from_cswap(*tables, d=d, basis_a=Z, basis_b=F)
        direct = kdm.kd_distribution(rho, Z, F)
        record("cswap-extraction", _maxabs(extracted.entries - direct.entries))
        rec = kdm.reconstruct_density_matrix(extracted)
        record("reconstruction", _maxabs(rec.matrix - r))
    return devs


def run_verification(d: int, trials: int, seed: int, tolerance: float, perturb: float = 0.0) -> VerifyReport:
    report = VerifyReport(d, trials, seed, tolerance,
                          {name: IdentityResult(name) for name in IDENTITIES})
    for t in range(trials):
        for name, dev in check_trial(d, seed + t, perturb).items():
            report.results[name].update(dev, seed + t)
    return report
