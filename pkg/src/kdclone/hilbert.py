"""Dense linear algebra on small Hilbert spaces.

Bipartite operators use a single index convention throughout the package:
row/column index ``a * d + b`` for system 1 in state ``a`` and system 2 in
state ``b`` (system 1 is the left Kronecker factor).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

# constructive identities vs. anything routed through an eigendecomposition
TOL_EXACT = 1e-12
TOL_EIG = 1e-10


class HilbertError(ValueError):
    """Raised when an object violates a state/basis/operator invariant."""


def _as_complex(x) -> np.ndarray:
    arr = np.array(x, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = _as_complex(self.amplitudes)
        if amp.ndim != 1 or amp.size < 1:
            raise HilbertError("amplitudes must be a non-empty 1-d vector")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > TOL_EXACT:
            raise HilbertError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def normalized(cls, vector) -> "PureState":
        v = np.asarray(vector, dtype=complex)
        return cls(v / np.linalg.norm(v))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise HilbertError(f"density matrix must be square, got shape {m.shape}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > TOL_EXACT:
            raise HilbertError(f"density matrix not Hermitian (deviation {herm:.3g})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TOL_EXACT:
            raise HilbertError(f"density matrix trace is {tr!r}, expected 1")
        lmin = np.linalg.eigvalsh(m).min()
        if lmin < -TOL_EIG:
            raise HilbertError(f"density matrix has negative eigenvalue {lmin:.3g}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d) / d)


def as_density(state) -> DensityMatrix:
    """Accept a PureState, DensityMatrix, vector or matrix and return a DensityMatrix."""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return PureState(arr).density()
    return DensityMatrix(arr)


@dataclass(frozen=True)
class OrthonormalBasis:
    """Ordered orthonormal basis; ``vectors[k]`` is the k-th basis vector."""

    vectors: np.ndarray
    label: str = "basis"

    def __post_init__(self):
        vecs = _as_complex(self.vectors)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1]:
            raise HilbertError(f"basis needs d vectors of length d, got shape {vecs.shape}")
        gram = vecs.conj() @ vecs.T
        dev = np.max(np.abs(gram - np.eye(len(vecs))))
        if dev > TOL_EXACT:
            raise HilbertError(f"basis {self.label!r} not orthonormal (deviation {dev:.3g})")
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, k: int) -> np.ndarray:
        return self.vectors[k]

    def __iter__(self):
        return iter(self.vectors)

    def overlaps(self, other: "OrthonormalBasis") -> np.ndarray:
        """Matrix ``O[a, b] = <b|a>`` with ``a`` from self and ``b`` from other."""
        return (other.vectors.conj() @ self.vectors.T).T


@dataclass(frozen=True)
class Observable:
    basis: OrthonormalBasis
    eigenvalues: np.ndarray

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=float)
        if ev.shape != (self.basis.dim,):
            raise HilbertError("need one eigenvalue per basis vector")
        if not np.all(np.isfinite(ev)):
            raise HilbertError("eigenvalues must be finite")
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def matrix(self) -> np.ndarray:
        V = self.basis.vectors
        return (V.T * self.eigenvalues) @ V.conj()


@dataclass(frozen=True)
class BipartiteOperator:
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _as_complex(self.matrix)
        n = self.dim * self.dim
        if m.shape != (n, n):
            raise HilbertError(f"expected {n}x{n} operator for d={self.dim}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def dagger(self) -> "BipartiteOperator":
        return BipartiteOperator(self.dim, self.matrix.conj().T)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def tensor(A, B) -> np.ndarray:
    """Kronecker product with A acting on system 1 (index ``a * n + b``)."""
    return np.kron(np.asarray(A), np.asarray(B))


def partial_trace(X, keep: int, dim: int | None = None) -> np.ndarray:
    """Trace out one subsystem of a bipartite operator of two d-level systems.

    ``keep`` selects the surviving subsystem, 1 (left factor) or 2 (right).
    """
    if keep not in (1, 2):
        raise HilbertError(f"keep must be 1 or 2, got {keep!r}")
    if isinstance(X, BipartiteOperator):
        dim, X = X.dim, X.matrix
    X = np.asarray(X)
    if dim is None:
        dim = int(round(np.sqrt(X.shape[0])))
    if X.shape != (dim * dim, dim * dim):
        raise HilbertError(f"operator shape {X.shape} incompatible with d={dim}")
    T = X.reshape(dim, dim, dim, dim)
    if keep == 1:
        return np.einsum("ajbj->ab", T)
    return np.einsum("jajb->ab", T)


def _check_unitary(U: np.ndarray, tol: float = TOL_EIG) -> None:
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise HilbertError(f"unitary must be square, got shape {U.shape}")
    dev = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if dev > tol:
        raise HilbertError(f"operator is not unitary (deviation {dev:.3g})")


def unitary_sqrt(U) -> np.ndarray:
    """Principal square root of a unitary: e^{i phi} -> e^{i phi/2}, phi in (-pi, pi].

    The complex Schur form of a normal matrix is diagonal with a unitary
    change of basis, so degenerate eigenvalues need no special handling.
    """
    U = np.asarray(U, dtype=complex)
    _check_unitary(U)
    T, Z = scipy.linalg.schur(U, output="complex")
    lam = np.diag(T)
    phi = np.angle(lam)
    # -1 can come back as exp(-i pi) through rounding; keep it on the +pi side
    phi = np.where(phi <= -np.pi + 1e-9, np.pi, phi)
    return (Z * np.exp(0.5j * phi)) @ Z.conj().T


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed % 2**64))


def haar_random_state(d: int, seed: int) -> PureState:
    if d < 2:
        raise HilbertError(f"dimension must be >= 2, got {d}")
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v))


def random_density(d: int, rank: int, seed: int) -> DensityMatrix:
    """Dirichlet(1, ..., 1) mixture of ``rank`` Haar-random pure states."""
    if d < 2:
        raise HilbertError(f"dimension must be >= 2, got {d}")
    if not 1 <= rank <= d:
        raise HilbertError(f"rank must lie in [1, {d}], got {rank}")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(rank)) if rank > 1 else np.ones(1)
    rho = np.zeros((d, d), dtype=complex)
    for w in weights:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        rho += w * np.outer(v, v.conj())
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


def random_unitary(d: int, seed: int) -> np.ndarray:
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def computational_basis(d: int) -> OrthonormalBasis:
    return OrthonormalBasis(np.eye(d), label="computational")


def fourier_basis(d: int) -> OrthonormalBasis:
    """Basis with components <m|b_k> = exp(2 pi i m k / d) / sqrt(d)."""
    if d < 2:
        raise HilbertError(f"dimension must be >= 2, got {d}")
    m = np.arange(d)
    F = np.exp(2j * np.pi * np.outer(m, m) / d) / np.sqrt(d)
    # row k of `vectors` is b_k, so transpose the (m, k) table
    return OrthonormalBasis(F.T, label="fourier")


def random_basis(d: int, seed: int) -> OrthonormalBasis:
    return OrthonormalBasis(random_unitary(d, seed).T, label=f"random[{seed}]")
