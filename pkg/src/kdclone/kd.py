"""Kirkwood-Dirac joint probabilities, weak values and their recovery from clone statistics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import CloneOutput, joint_diagonal
from .hilbert import (
    BipartiteOperator,
    DensityMatrix,
    HilbertError,
    Observable,
    OrthonormalBasis,
    PureState,
    as_density,
    computational_basis,
    fourier_basis,
)
from .tables import ComplexJointTable, ProbTable, TableShapeError

POSTSELECTION_THRESHOLD = 1e-12
OVERLAP_THRESHOLD = 1e-8
MARGINAL_SLACK = 1e-6


class OrthogonalPostSelectionError(HilbertError):
    """The post-selected state has (numerically) no overlap with the pre-selected state."""


class UnsuitableBasisError(HilbertError):
    def __init__(self, a: int, b: int, overlap: float):
        self.a, self.b, self.overlap = a, b, overlap
        super().__init__(
            f"basis pair unsuitable for reconstruction: |<b|a>| = {overlap:.3g} at (a={a}, b={b})"
        )


class MalformedTableError(HilbertError):
    pass


def _check_bases(d: int, basis_a: OrthonormalBasis, basis_b: OrthonormalBasis) -> None:
    if basis_a.dim != d or basis_b.dim != d:
        raise TableShapeError(
            f"bases of dim {basis_a.dim}/{basis_b.dim} do not match state dim {d}"
        )


def kd_distribution(rho, basis_a: OrthonormalBasis, basis_b: OrthonormalBasis) -> ComplexJointTable:
    """entries[a, b] = <b|a><a|rho|b>; for pure rho, <psi|b><b|a><a|psi>."""
    rho = as_density(rho)
    _check_bases(rho.dim, basis_a, basis_b)
    A, B = basis_a.vectors, basis_b.vectors
    a_rho_b = A.conj() @ rho.matrix @ B.T
    return ComplexJointTable(basis_a.overlaps(basis_b) * a_rho_b, basis_a, basis_b)


@dataclass(frozen=True)
class WeakValueResult:
    value: complex
    observable: Observable
    pre: PureState
    post_vector: np.ndarray


def weak_value(obs: Observable, psi, post) -> WeakValueResult:
    """<b|A|psi> / <b|psi>."""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    b = np.asarray(post, dtype=complex)
    if b.shape != (psi.dim,) or obs.dim != psi.dim:
        raise TableShapeError("observable, state and post-selection must share a dimension")
    overlap = np.vdot(b, psi.amplitudes)
    if abs(overlap) ** 2 < POSTSELECTION_THRESHOLD:
        raise OrthogonalPostSelectionError(
            f"orthogonal post-selection: |<b|psi>|^2 = {abs(overlap) ** 2:.3g}"
        )
    value = np.vdot(b, obs.matrix() @ psi.amplitudes) / overlap
    return WeakValueResult(complex(value), obs, psi, b)


def weak_value_from_kd(obs: Observable, kd: ComplexJointTable, b: int) -> complex:
    """Conditional average sum_a A_a kd(a, b) / sum_a kd(a, b)."""
    column = kd.entries[:, b]
    norm = column.sum()
    if abs(norm) < POSTSELECTION_THRESHOLD:
        raise OrthogonalPostSelectionError(
            f"orthogonal post-selection: column {b} of the joint table sums to {abs(norm):.3g}"
        )
    return complex(np.dot(obs.eigenvalues, column) / norm)


def clone_joint_probabilities(
    clone_out: CloneOutput | BipartiteOperator | np.ndarray,
    basis_a: OrthonormalBasis,
    basis_b: OrthonormalBasis,
) -> ProbTable:
    """p(a, b) = <a,b| E_clone(rho) |a,b>, with a measured on output 1 and b on output 2."""
    matrix = getattr(clone_out, "matrix", clone_out)
    return ProbTable(np.clip(joint_diagonal(matrix, basis_a, basis_b).real, 0.0, None))


def background_subtract(p: ProbTable, d: int | None = None, q_a=None, q_b=None) -> np.ndarray:
    """Re kd(a, b) from a cloner table by removing the white-noise background.

    The Born probabilities ``q_a``/``q_b`` are inverted from the table's own
    marginals unless supplied explicitly.
    """
    table = p.entries
    d = p.dim if d is None else d
    if table.shape != (d, d):
        raise TableShapeError(f"table shape {table.shape} does not match d={d}")
    scale = 2 * (d + 1)
    if q_a is None:
        q_a = (scale * table.sum(axis=1) - 1) / (d + 2)
    if q_b is None:
        q_b = (scale * table.sum(axis=0) - 1) / (d + 2)
    q_a, q_b = np.asarray(q_a, dtype=float), np.asarray(q_b, dtype=float)
    for name, q in (("a", q_a), ("b", q_b)):
        if q.shape != (d,):
            raise TableShapeError(f"background q_{name} must have length {d}")
        if q.min() < -MARGINAL_SLACK or q.max() > 1 + MARGINAL_SLACK:
            raise MalformedTableError(
                f"marginal inversion gives q_{name} outside [0, 1]: "
                f"range [{q.min():.6g}, {q.max():.6g}]"
            )
    return (scale * table - q_a[:, None] - q_b[None, :]) / 2


def extract_kd_from_cswap(
    pX0: ProbTable,
    pX1: ProbTable,
    pY0: ProbTable,
    pY1: ProbTable,
    d: int,
    basis_a: OrthonormalBasis | None = None,
    basis_b: OrthonormalBasis | None = None,
) -> ComplexJointTable:
    """d (p(0_x) - p(1_x)) + i d (p(0_y) - p(1_y)), cell by cell.

    Without explicit bases the table is labelled with the default
    computational / Fourier pair.
    """
    shapes = {t.entries.shape for t in (pX0, pX1, pY0, pY1)}
    if shapes != {(d, d)}:
        raise TableShapeError(f"expected four {d}x{d} tables, got shapes {sorted(shapes)}")
    if basis_a is None or basis_b is None:
        basis_a = basis_a or computational_basis(d)
        basis_b = basis_b or fourier_basis(d)
    re = d * (pX0.entries - pX1.entries)
    im = d * (pY0.entries - pY1.entries)
    return ComplexJointTable(re + 1j * im, basis_a, basis_b)


@dataclass(frozen=True)
class Reconstruction:
    """Reconstructed operator plus diagnostics; ``matrix`` need not be positive for noisy input."""

    matrix: np.ndarray
    hermiticity_error: float
    trace_error: float

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.matrix)


def reconstruct_density_matrix(kd: ComplexJointTable) -> Reconstruction:
    """rho = sum_{a,b} kd(a, b) |a><b| / <b|a>."""
    overlaps = kd.basis_a.overlaps(kd.basis_b)
    mags = np.abs(overlaps)
    if mags.min() < OVERLAP_THRESHOLD:
        a, b = np.unravel_index(np.argmin(mags), mags.shape)
        raise UnsuitableBasisError(int(a), int(b), float(mags[a, b]))
    A, B = kd.basis_a.vectors, kd.basis_b.vectors
    weights = kd.entries / overlaps
    rho = A.T @ weights @ B.conj()
    return Reconstruction(
        matrix=rho,
        hermiticity_error=float(np.max(np.abs(rho - rho.conj().T))),
        trace_error=float(abs(np.trace(rho) - 1)),
    )


@dataclass(frozen=True)
class NegativityReport:
    min_real: float
    max_abs_imag: float
    negative_count: int
    negative_indices: tuple[tuple[int, int], ...]


def negativity_report(kd: ComplexJointTable, tol: float = 1e-12) -> NegativityReport:
    re = kd.entries.real
    neg = np.argwhere(re < -tol)
    return NegativityReport(
        min_real=float(re.min()),
        max_abs_imag=float(np.abs(kd.entries.imag).max()),
        negative_count=len(neg),
        negative_indices=tuple((int(a), int(b)) for a, b in neg),
    )
