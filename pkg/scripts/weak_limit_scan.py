"""Pointer-model weak value against coupling strength, raw and extrapolated.

    python scripts/weak_limit_scan.py
"""
import numpy as np

from kdclone.hilbert import Observable, PureState, computational_basis
from kdclone.kd import weak_value
from kdclone.weakmeas import WeakMeasConfig, pointer_estimate, weak_limit_extrapolate


def main():
    Z = computational_basis(2)
    psi = PureState.normalized([1, 1])
    post = np.array([2, -1]) / np.sqrt(5)
    target = weak_value(Observable(Z, [1.0, 0.0]), psi, post).value
    print(f"weak value of |0><0|: {target.real:.6f}")
    print("theta,raw_error,extrapolated_error,raw_ratio_to_half")
    for theta in (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625):
        cfg = WeakMeasConfig(theta, 0, Z, post, psi)
        raw = abs(pointer_estimate(cfg) - target)
        half = abs(pointer_estimate(cfg.with_theta(theta / 2)) - target)
        ext = abs(weak_limit_extrapolate(cfg) - target)
        print(f"{theta},{raw:.4e},{ext:.4e},{raw / half:.3f}")


if __name__ == "__main__":
    main()
