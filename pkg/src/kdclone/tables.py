"""Joint-probability tables indexed by outcome pairs (a, b)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertError, OrthonormalBasis


class TableShapeError(HilbertError):
    pass


@dataclass(frozen=True)
class ComplexJointTable:
    """Complex quasi-probabilities ``entries[a, b]`` over a pair of bases."""

    entries: np.ndarray
    basis_a: OrthonormalBasis
    basis_b: OrthonormalBasis

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        d = self.basis_a.dim
        if self.basis_b.dim != d or e.shape != (d, d):
            raise TableShapeError(
                f"table shape {e.shape} does not match bases of dim {d}/{self.basis_b.dim}"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def real(self) -> np.ndarray:
        return self.entries.real

    @property
    def imag(self) -> np.ndarray:
        return self.entries.imag

    def marginal_a(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.entries.sum(axis=0)


@dataclass(frozen=True)
class ProbTable:
    """Real joint probabilities ``entries[a, b]``, optionally tagged with a control outcome.

    A table tagged with a control outcome holds only part of the
    probability mass of its measurement setting.
    """

    entries: np.ndarray
    tag: str | None = None

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise TableShapeError(f"probability table must be square, got {e.shape}")
        if e.min() < -1e-12:
            raise TableShapeError(f"negative probability {e.min():.3g} in table")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def total(self) -> float:
        return float(self.entries.sum())

    def marginal_a(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    def sample(self, shots: int, seed: int) -> "ProbTable":
        """Empirical frequencies from ``shots`` multinomial draws of this (renormalized) table."""
        (est,) = sample_setting([self], shots, seed)
        return est


def sample_setting(tables, shots: int, seed: int) -> list[ProbTable]:
    """Multinomial estimate of tables that together form one measurement setting.

    All cells of all tables are treated as mutually exclusive outcomes of a
    single experiment repeated ``shots`` times; the returned tables hold
    observed frequencies (counts / shots) with the original tags.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    tables = list(tables)
    shapes = {t.entries.shape for t in tables}
    if len(shapes) != 1:
        raise TableShapeError(f"tables of one setting must share a shape, got {shapes}")
    p = np.concatenate([t.entries.ravel() for t in tables])
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    counts = rng.multinomial(shots, p)
    freqs = counts / shots
    shape = tables[0].entries.shape
    n = shape[0] * shape[1]
    return [
        ProbTable(freqs[i * n:(i + 1) * n].reshape(shape), tag=t.tag)
        for i, t in enumerate(tables)
    ]
