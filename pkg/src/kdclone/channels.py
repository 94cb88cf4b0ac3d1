"""Cloning, swap, partial-swap and controlled-swap maps on two d-level systems."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .hilbert import (
    TOL_EIG,
    TOL_EXACT,
    BipartiteOperator,
    HilbertError,
    OrthonormalBasis,
    as_density,
    partial_trace,
    tensor,
)
from .tables import ProbTable


class ControlAxis(enum.Enum):
    X = "x"
    Y = "y"


def control_states(axis: ControlAxis) -> tuple[np.ndarray, np.ndarray]:
    """The outcome vectors (|0_axis>, |1_axis>) of a control-qubit measurement."""
    s = 1 / np.sqrt(2)
    if axis is ControlAxis.X:
        return np.array([s, s], dtype=complex), np.array([s, -s], dtype=complex)
    if axis is ControlAxis.Y:
        return np.array([s, 1j * s]), np.array([s, -1j * s])
    raise ValueError(f"unknown control axis {axis!r}")


def _check_density_like(m: np.ndarray, what: str) -> None:
    herm = np.max(np.abs(m - m.conj().T))
    if herm > TOL_EXACT:
        raise HilbertError(f"{what} not Hermitian (deviation {herm:.3g})")
    tr = np.trace(m)
    if abs(tr - 1) > TOL_EXACT:
        raise HilbertError(f"{what} trace {tr!r} != 1")
    lmin = np.linalg.eigvalsh(m).min()
    if lmin < -TOL_EIG:
        raise HilbertError(f"{what} has negative eigenvalue {lmin:.3g}")


@dataclass(frozen=True)
class CoherenceOperator(BipartiteOperator):
    """Non-Hermitian cross term of the cloner; both partial traces equal the input."""


@dataclass(frozen=True)
class CloneOutput(BipartiteOperator):
    def __post_init__(self):
        super().__post_init__()
        _check_density_like(self.matrix, "clone output")
        S = swap_operator(self.dim)
        dev = np.max(np.abs(S @ self.matrix @ S - self.matrix))
        if dev > TOL_EXACT:
            raise HilbertError(f"clone output not swap-symmetric (deviation {dev:.3g})")


@dataclass(frozen=True)
class CswapOutput:
    """State of control (x) system 1 (x) system 2 after the controlled swap."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = 2 * self.dim * self.dim
        if m.shape != (n, n):
            raise HilbertError(f"expected {n}x{n} controlled-swap state, got {m.shape}")
        _check_density_like(m, "controlled-swap output")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def control_state(self) -> np.ndarray:
        n = self.dim * self.dim
        return np.einsum("xkyk->xy", self.matrix.reshape(2, n, 2, n))

    def systems_state(self) -> np.ndarray:
        """Reduced state of the two systems with the control traced out."""
        n = self.dim * self.dim
        return np.einsum("xixj->ij", self.matrix.reshape(2, n, 2, n))

    def conditional(self, c: np.ndarray) -> np.ndarray:
        """Unnormalized system operator <c| out |c> for a control vector c."""
        n = self.dim * self.dim
        T = self.matrix.reshape(2, n, 2, n)
        return np.einsum("x,xiyj,y->ij", np.conj(c), T, c)


def swap_operator(d: int) -> np.ndarray:
    """SWAP = sum_{m,n} |m,n><n,m|."""
    if d < 2:
        raise HilbertError(f"dimension must be >= 2, got {d}")
    S = np.zeros((d * d, d * d))
    for m in range(d):
        for n in range(d):
            S[m * d + n, n * d + m] = 1.0
    return S


def coherence_operator(rho) -> CoherenceOperator:
    """(rho (x) I) SWAP; for a pure input this is sum_m |psi><m| (x) |m><psi|."""
    rho = as_density(rho)
    d = rho.dim
    return CoherenceOperator(d, tensor(rho.matrix, np.eye(d)) @ swap_operator(d))


def coherence_operator_from_basis(psi, basis: OrthonormalBasis) -> np.ndarray:
    """Explicit sum over an auxiliary basis {|m>}; kept for basis-independence checks."""
    psi = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)
    d = psi.size
    C = np.zeros((d * d, d * d), dtype=complex)
    for m in basis:
        C += tensor(np.outer(psi, m.conj()), np.outer(m, psi.conj()))
    return C


def clone_decomposition_weights(d: int) -> tuple[float, float]:
    """Trace weights of the direct terms and of the coherence terms of the cloner."""
    if d < 2:
        raise HilbertError(f"dimension must be >= 2, got {d}")
    return d / (d + 1), 1 / (d + 1)


def clone_matrix(rho, prefactor_scale: float = 1.0) -> np.ndarray:
    """Unvalidated cloner output; ``prefactor_scale`` exists for fault injection."""
    rho = as_density(rho)
    d = rho.dim
    r, eye = rho.matrix, np.eye(d)
    C = coherence_operator(rho).matrix
    total = tensor(r, eye) + tensor(eye, r) + C + C.conj().T
    return prefactor_scale * total / (2 * (d + 1))


def apply_clone_channel(rho) -> CloneOutput:
    """Optimal universal 1 -> 2 cloner: (rho(x)I + I(x)rho + C + C^dag) / (2(d+1))."""
    rho = as_density(rho)
    return CloneOutput(rho.dim, clone_matrix(rho))


def clone_fidelity(out: BipartiteOperator, rho) -> float:
    """Single-clone fidelity Tr(rho Tr_2(out)); for pure rho this is <psi|Tr_2 out|psi>."""
    rho = as_density(rho)
    red = partial_trace(out, keep=1)
    return float(np.real(np.trace(rho.matrix @ red)))


def partial_swap_unitary(d: int) -> np.ndarray:
    """(I + i SWAP)/sqrt(2): phase (1+i)/sqrt2 on symmetric, (1-i)/sqrt2 on antisymmetric states."""
    return (np.eye(d * d) + 1j * swap_operator(d)) / np.sqrt(2)


def apply_partial_swap_channel(rho) -> BipartiteOperator:
    """U (rho (x) I/d) U^dag with U the partial swap; rho enters system 1."""
    rho = as_density(rho)
    d = rho.dim
    U = partial_swap_unitary(d)
    out = U @ tensor(rho.matrix, np.eye(d) / d) @ U.conj().T
    return BipartiteOperator(d, out)


def partial_swap_closed_form(rho) -> BipartiteOperator:
    """(rho(x)I + I(x)rho - i(C - C^dag)) / (2d), written out term by term."""
    rho = as_density(rho)
    d = rho.dim
    r, eye = rho.matrix, np.eye(d)
    C = coherence_operator(rho).matrix
    out = (tensor(r, eye) + tensor(eye, r) - 1j * (C - C.conj().T)) / (2 * d)
    return BipartiteOperator(d, out)


def controlled_swap_unitary(d: int) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) SWAP with the control as leftmost factor."""
    P0 = np.diag([1.0, 0.0])
    P1 = np.diag([0.0, 1.0])
    return tensor(P0, np.eye(d * d)) + tensor(P1, swap_operator(d))


def controlled_swap_output(rho) -> CswapOutput:
    """Controlled swap with control (|0>+|1>)/sqrt2, white noise I/d in system 1, rho in system 2.

    With |0_y> = (|0> + i|1>)/sqrt2 this placement makes
    d * (p(0_y,a,b) - p(1_y,a,b)) equal to +Im <b|a><a|rho|b>.
    """
    rho = as_density(rho)
    d = rho.dim
    plus = np.full((2, 2), 0.5)
    inp = tensor(plus, tensor(np.eye(d) / d, rho.matrix))
    W = controlled_swap_unitary(d)
    out = W @ inp @ W.conj().T
    return CswapOutput(d, 0.5 * (out + out.conj().T))


def joint_diagonal(X, basis_a: OrthonormalBasis, basis_b: OrthonormalBasis) -> np.ndarray:
    """Table of <a,b| X |a,b> for a bipartite operator X (complex in general)."""
    if isinstance(X, BipartiteOperator):
        X = X.matrix
    d = basis_a.dim
    if basis_b.dim != d or np.shape(X) != (d * d, d * d):
        raise HilbertError(
            f"bases of dim {d}/{basis_b.dim} do not match operator shape {np.shape(X)}"
        )
    T = np.asarray(X).reshape(d, d, d, d)
    A, B = basis_a.vectors, basis_b.vectors
    return np.einsum("ai,bj,ijkl,ak,bl->ab", A.conj(), B.conj(), T, A, B)


def cswap_joint_probabilities(
    out: CswapOutput,
    axis: ControlAxis,
    basis_a: OrthonormalBasis,
    basis_b: OrthonormalBasis,
) -> tuple[ProbTable, ProbTable]:
    """p(c, a, b) for both control outcomes c of the given axis; a on system 1, b on system 2."""
    if basis_a.dim != out.dim or basis_b.dim != out.dim:
        raise HilbertError(
            f"bases of dim {basis_a.dim}/{basis_b.dim} do not match state dim {out.dim}"
        )
    tables = []
    for k, c in enumerate(control_states(axis)):
        p = joint_diagonal(out.conditional(c), basis_a, basis_b).real
        tables.append(ProbTable(np.clip(p, 0.0, None), tag=f"{k}_{axis.value}"))
    return tables[0], tables[1]
