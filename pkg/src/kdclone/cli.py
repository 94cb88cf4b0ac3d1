"""Command-line front end.

Exit codes: 0 success, 1 verification/tolerance failure, 2 usage or
validation error, 3 I/O or parse error. Every error is reported as one
line on stderr starting with ``error[<code>]``.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import channels as ch
from . import kd as kdm
from . import serialize as ser
from .hilbert import (
    HilbertError,
    Observable,
    OrthonormalBasis,
    PureState,
    as_density,
    computational_basis,
    fourier_basis,
    haar_random_state,
)
from .tables import sample_setting
from .verify import run_verification
from .weakmeas import pointer_weak_value

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
DIM_RANGE = (2, 8)


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        self.code, self.kind = code, kind
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, "usage", message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    dim: int = 2
    trials: int = 100
    seed: int = 0
    tolerance: float = 1e-10
    input_path: Path | None = None
    output_path: Path | None = None
    format: str = "json"
    shots: int | None = None
    perturb: float = 0.0
    theta: float = 0.05

    def __post_init__(self):
        lo, hi = DIM_RANGE
        if not lo <= self.dim <= hi:
            raise CliError(EXIT_USAGE, "usage", f"--dim must lie in [{lo}, {hi}], got {self.dim}")
        if self.trials < 1:
            raise CliError(EXIT_USAGE, "usage", f"--trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise CliError(EXIT_USAGE, "usage", f"--tol must be > 0, got {self.tolerance}")
        if self.shots is not None and self.shots < 1:
            raise CliError(EXIT_USAGE, "usage", f"--shots must be >= 1, got {self.shots}")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _read_text(path: Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot read {path}: {exc.strerror}") from exc


def _write_text(path: Path | None, text: str, out) -> None:
    if path is None:
        out.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot write {path}: {exc.strerror}") from exc


def _load_state(cfg: RunConfig):
    if cfg.input_path is None:
        return None
    try:
        return ser.state_from_json(ser.loads(_read_text(cfg.input_path)))
    except ser.FormatError as exc:
        raise CliError(EXIT_IO, "parse", f"{cfg.input_path}: {exc}") from exc


def cmd_verify(cfg: RunConfig, out) -> int:
    report = run_verification(cfg.dim, cfg.trials, cfg.seed, cfg.tolerance, cfg.perturb)
    lines = [f"verify dim={cfg.dim} trials={cfg.trials} seed={cfg.seed} tol={cfg.tolerance:g}"]
    for r in report.results.values():
        status = "ok" if r.max_deviation < cfg.tolerance else "FAIL"
        lines.append(f"{r.name:28s} max_dev={r.max_deviation:.3e} worst_seed={r.worst_seed} {status}")
    text = "\n".join(lines) + "\n"
    _write_text(cfg.output_path, text, out)
    if cfg.output_path is not None:
        out.write(text)
    if not report.ok:
        worst = max(report.failures, key=lambda r: r.max_deviation)
        names = ",".join(r.name for r in report.failures)
        raise CliError(
            EXIT_FAIL, "verify",
            f"identity violated: {names} (worst {worst.name} seed={worst.worst_seed} "
            f"deviation={worst.max_deviation:.3e})",
        )
    return EXIT_OK


def cmd_clone_stats(cfg: RunConfig, out) -> int:
    state = _load_state(cfg)
    rho = as_density(state) if state is not None else PureState(np.eye(cfg.dim)[0]).density()
    d = rho.dim
    A, B = computational_basis(d), fourier_basis(d)
    clone = ch.apply_clone_channel(rho)
    p = kdm.clone_joint_probabilities(clone, A, B)
    re_kd = kdm.background_subtract(p, d)
    fidelity = ch.clone_fidelity(clone, rho)
    out.write(f"clone-stats dim={d} bases={A.label}/{B.label}\n")
    out.write(f"fidelity {_fmt(fidelity)}\n")
    out.write("p(a,b):\n" + ser.prob_to_csv(p))
    if cfg.output_path is not None:
        if cfg.format == "csv":
            text = ser.prob_to_csv(p)
        else:
            text = ser.dumps({
                "dim": d,
                "fidelity": fidelity,
                "p": ser.prob_to_json(p),
                "marginal_a": [float(x) for x in p.marginal_a()],
                "marginal_b": [float(x) for x in p.marginal_b()],
                "re_kd": [[float(x) for x in row] for row in re_kd],
            })
        _write_text(cfg.output_path, text, out)
    return EXIT_OK


def cmd_cswap_tomography(cfg: RunConfig, out) -> int:
    state = _load_state(cfg)
    if state is None:
        state = haar_random_state(cfg.dim, cfg.seed)
    rho = as_density(state)
    d = rho.dim
    A, B = computational_basis(d), fourier_basis(d)
    cs = ch.controlled_swap_output(rho)
    x0, x1 = ch.cswap_joint_probabilities(cs, ch.ControlAxis.X, A, B)
    y0, y1 = ch.cswap_joint_probabilities(cs, ch.ControlAxis.Y, A, B)
    if cfg.shots is not None:
        x0, x1 = sample_setting([x0, x1], cfg.shots, cfg.seed)
        y0, y1 = sample_setting([y0, y1], cfg.shots, cfg.seed + 1)
    table = kdm.extract_kd_from_cswap(x0, x1, y0, y1, d, A, B)
    rec = kdm.reconstruct_density_matrix(table)
    deviation = float(np.max(np.abs(rec.matrix - rho.matrix)))
    mode = "exact" if cfg.shots is None else f"shots={cfg.shots}"
    out.write(f"cswap-tomography dim={d} mode={mode} bases={A.label}/{B.label}\n")
    out.write(f"max_deviation {deviation:.6e}\n")
    out.write(f"hermiticity_error {rec.hermiticity_error:.6e} trace_error {rec.trace_error:.6e}\n")
    if cfg.output_path is not None:
        if cfg.format == "csv":
            text = ser.kd_to_csv(table)
        else:
            text = ser.dumps({
                "dim": d,
                "matrix": ser.encode_matrix(rec.matrix),
                "max_deviation": deviation,
                "kd": ser.kd_to_json(table),
            })
        _write_text(cfg.output_path, text, out)
    return EXIT_OK


def cmd_weak_demo(cfg: RunConfig, out) -> int:
    psi = PureState.normalized([1, 1])
    post = np.array([2, -1]) / np.sqrt(5)
    Z = computational_basis(2)
    presets = [
        ("sigma_z", Observable(Z, [1.0, -1.0])),
        ("projector_0", Observable(Z, [1.0, 0.0])),
    ]
    # vector 0 of the skewed basis is the post-selected state
    skewed = OrthonormalBasis(np.array([[2, -1], [1, 2]]) / np.sqrt(5), label="skewed")
    kd = kdm.kd_distribution(psi, Z, skewed)
    out.write(f"weak-demo psi=(|0>+|1>)/sqrt2 post=(2|0>-|1>)/sqrt5 theta={cfg.theta:g}\n")
    out.write("observable,direct,conditional_kd,pointer\n")
    for name, obs in presets:
        direct = kdm.weak_value(obs, psi, post).value
        via_kd = kdm.weak_value_from_kd(obs, kd, 0)
        pointer = pointer_weak_value(obs, psi, post, cfg.theta)
        out.write(",".join([name, *(_fmt(v.real) for v in (direct, via_kd, pointer))]) + "\n")
    return EXIT_OK


def cmd_reconstruct(cfg: RunConfig, out) -> int:
    if cfg.input_path is None:
        raise CliError(EXIT_USAGE, "usage", "reconstruct requires --input")
    text = _read_text(cfg.input_path)
    try:
        if cfg.input_path.suffix.lower() == ".csv":
            table = ser.kd_from_csv(text)
        else:
            data = ser.loads(text)
            table = ser.kd_from_json(data.get("kd", data) if isinstance(data, dict) else data)
    except ser.FormatError as exc:
        raise CliError(EXIT_IO, "parse", f"{cfg.input_path}: {exc}") from exc
    rec = kdm.reconstruct_density_matrix(table)
    result = ser.dumps({
        "dim": table.dim,
        "matrix": ser.encode_matrix(rec.matrix),
        "hermiticity_error": rec.hermiticity_error,
        "trace_error": rec.trace_error,
    })
    _write_text(cfg.output_path, result, out)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "clone-stats": cmd_clone_stats,
    "cswap-tomography": cmd_cswap_tomography,
    "weak-demo": cmd_weak_demo,
    "reconstruct": cmd_reconstruct,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kdclone", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-10, dest="tolerance")
    parser.add_argument("--input", type=Path, dest="input_path")
    parser.add_argument("--output", type=Path, dest="output_path")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--shots", type=int)
    parser.add_argument("--theta", type=float, default=0.05)
    parser.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(**vars(args))
        return COMMANDS[cfg.command](cfg, out)
    except CliError as exc:
        err.write(f"error[{exc.code}] {exc.kind}: {exc}\n")
        return exc.code
    except kdm.UnsuitableBasisError as exc:
        err.write(f"error[{EXIT_USAGE}] basis: {exc}\n")
        return EXIT_USAGE
    except HilbertError as exc:
        err.write(f"error[{EXIT_USAGE}] validation: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
