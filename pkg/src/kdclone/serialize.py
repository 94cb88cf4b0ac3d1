"""JSON and CSV formats for states, operators and joint tables.

Complex scalars are two-element arrays ``[re, im]``; matrices are row-major
nested lists of such pairs. CSV tables carry a header row, ``a,b,re,im`` for
complex joint tables and ``a,b,p`` for probability tables, rows ordered by a
then b.
"""
from __future__ import annotations

import csv
import io
import json
from numbers import Real

import numpy as np

from .hilbert import (
    DensityMatrix,
    HilbertError,
    OrthonormalBasis,
    PureState,
    computational_basis,
    fourier_basis,
)
from .tables import ComplexJointTable, ProbTable

CSV_FMT = ".17g"


class FormatError(ValueError):
    """Malformed input; ``location`` is a JSON-path-like pointer or a CSV line number."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(obj, where: str = "$") -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, Real) and not isinstance(v, bool) for v in obj)
    ):
        raise FormatError(where, f"expected [re, im], got {obj!r}")
    return complex(obj[0], obj[1])


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_vector(obj, where: str = "$") -> np.ndarray:
    if not isinstance(obj, list):
        raise FormatError(where, "expected a list of [re, im] pairs")
    return np.array([decode_complex(z, f"{where}[{i}]") for i, z in enumerate(obj)], dtype=complex)


def encode_matrix(M) -> list:
    return [encode_vector(row) for row in np.asarray(M)]


def decode_matrix(obj, where: str = "$") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise FormatError(where, "expected a non-empty list of rows")
    rows = [decode_vector(r, f"{where}[{i}]") for i, r in enumerate(obj)]
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise FormatError(f"{where}[{i}]", f"row has {len(r)} entries, expected {width}")
    return np.array(rows)


def _require(data, key: str, where: str):
    if not isinstance(data, dict):
        raise FormatError(where, "expected a JSON object")
    if key not in data:
        raise FormatError(where, f"missing key {key!r}")
    return data[key]


def _check_dim(data, n: int, where: str) -> None:
    dim = _require(data, "dim", where)
    if dim != n:
        raise FormatError(f"{where}.dim", f"declared dim {dim!r} but data has dimension {n}")


def state_to_json(state) -> dict:
    if isinstance(state, PureState):
        return {"dim": state.dim, "amplitudes": encode_vector(state.amplitudes)}
    if isinstance(state, DensityMatrix):
        return {"dim": state.dim, "matrix": encode_matrix(state.matrix)}
    raise TypeError(f"cannot serialize {type(state).__name__} as a state")


def state_from_json(data, where: str = "$") -> PureState | DensityMatrix:
    """Parse ``{"dim", "amplitudes"}`` or ``{"dim", "matrix"}``."""
    if isinstance(data, dict) and "amplitudes" in data:
        amp = decode_vector(data["amplitudes"], f"{where}.amplitudes")
        _check_dim(data, len(amp), where)
        try:
            return PureState(amp)
        except HilbertError as exc:
            raise FormatError(f"{where}.amplitudes", str(exc)) from exc
    m = decode_matrix(_require(data, "matrix", where), f"{where}.matrix")
    _check_dim(data, m.shape[0], where)
    if m.shape[0] != m.shape[1]:
        raise FormatError(f"{where}.matrix", f"matrix is not square: {m.shape}")
    try:
        return DensityMatrix(m)
    except HilbertError as exc:
        raise FormatError(f"{where}.matrix", str(exc)) from exc


def basis_to_json(basis: OrthonormalBasis) -> dict:
    return {"label": basis.label, "vectors": encode_matrix(basis.vectors)}


def basis_from_json(data, where: str = "$") -> OrthonormalBasis:
    vecs = decode_matrix(_require(data, "vectors", where), f"{where}.vectors")
    try:
        return OrthonormalBasis(vecs, label=str(data.get("label", "basis")))
    except HilbertError as exc:
        raise FormatError(f"{where}.vectors", str(exc)) from exc


def kd_to_json(kd: ComplexJointTable) -> dict:
    return {
        "dim": kd.dim,
        "entries": encode_matrix(kd.entries),
        "basisA": basis_to_json(kd.basis_a),
        "basisB": basis_to_json(kd.basis_b),
    }


def kd_from_json(data, where: str = "$") -> ComplexJointTable:
    entries = decode_matrix(_require(data, "entries", where), f"{where}.entries")
    _check_dim(data, entries.shape[0], where)
    d = entries.shape[0]
    basis_a = basis_from_json(data["basisA"], f"{where}.basisA") if "basisA" in data else computational_basis(d)
    basis_b = basis_from_json(data["basisB"], f"{where}.basisB") if "basisB" in data else fourier_basis(d)
    try:
        return ComplexJointTable(entries, basis_a, basis_b)
    except HilbertError as exc:
        raise FormatError(f"{where}.entries", str(exc)) from exc


def prob_to_json(p: ProbTable) -> dict:
    out = {"dim": p.dim, "entries": [[float(x) for x in row] for row in p.entries]}
    if p.tag is not None:
        out["tag"] = p.tag
    return out


def prob_from_json(data, where: str = "$") -> ProbTable:
    rows = _require(data, "entries", where)
    try:
        entries = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}.entries", "expected a square table of reals") from exc
    _check_dim(data, entries.shape[0] if entries.ndim else 0, where)
    try:
        return ProbTable(entries, tag=data.get("tag"))
    except HilbertError as exc:
        raise FormatError(f"{where}.entries", str(exc)) from exc


def dumps(obj) -> str:
    """Deterministic JSON text (Python floats round-trip exactly)."""
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc


def kd_to_csv(kd: ComplexJointTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "re", "im"])
    for a in range(kd.dim):
        for b in range(kd.dim):
            z = kd.entries[a, b]
            w.writerow([a, b, format(z.real, CSV_FMT), format(z.imag, CSV_FMT)])
    return buf.getvalue()


def prob_to_csv(p: ProbTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "p"])
    for a in range(p.dim):
        for b in range(p.dim):
            w.writerow([a, b, format(p.entries[a, b], CSV_FMT)])
    return buf.getvalue()


def _read_csv_table(text: str, header: list[str]) -> tuple[int, dict]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != header:
        raise FormatError("line 1", f"expected header {','.join(header)}")
    cells = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise FormatError(f"line {lineno}", f"expected {len(header)} fields, got {len(row)}")
        try:
            a, b = int(row[0]), int(row[1])
            vals = [float(x) for x in row[2:]]
        except ValueError as exc:
            raise FormatError(f"line {lineno}", str(exc)) from exc
        cells[(a, b)] = vals
    d = int(round(np.sqrt(len(cells))))
    if d * d != len(cells) or set(cells) != {(a, b) for a in range(d) for b in range(d)}:
        raise FormatError("table", f"{len(cells)} cells do not form a complete d x d table")
    return d, cells


def kd_from_csv(text: str, basis_a: OrthonormalBasis | None = None,
                basis_b: OrthonormalBasis | None = None) -> ComplexJointTable:
    """Parse ``a,b,re,im`` rows; bases default to the computational / Fourier pair."""
    d, cells = _read_csv_table(text, ["a", "b", "re", "im"])
    entries = np.zeros((d, d), dtype=complex)
    for (a, b), (re, im) in cells.items():
        entries[a, b] = complex(re, im)
    return ComplexJointTable(
        entries, basis_a or computational_basis(d), basis_b or fourier_basis(d)
    )


def prob_from_csv(text: str, tag: str | None = None) -> ProbTable:
    d, cells = _read_csv_table(text, ["a", "b", "p"])
    entries = np.zeros((d, d))
    for (a, b), (p,) in cells.items():
        entries[a, b] = p
    return ProbTable(entries, tag=tag)
