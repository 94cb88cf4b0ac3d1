"""Reconstruction error of controlled-swap tomography versus number of shots.

    python scripts/shot_noise_scan.py --dim 2 --repeats 20
"""
import argparse

import numpy as np

from kdclone.channels import ControlAxis, controlled_swap_output, cswap_joint_probabilities
from kdclone.hilbert import computational_basis, fourier_basis, haar_random_state
from kdclone.kd import extract_kd_from_cswap, reconstruct_density_matrix
from kdclone.tables import sample_setting


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    d = args.dim
    Z, F = computational_basis(d), fourier_basis(d)
    print("shots,mean_max_dev,std_max_dev,reference_d_over_sqrt_n")
    for shots in (10**3, 10**4, 10**5, 10**6):
        devs = []
        for r in range(args.repeats):
            seed = args.seed + 1000 * r
            rho = haar_random_state(d, seed).density()
            out = controlled_swap_output(rho)
            x = sample_setting(cswap_joint_probabilities(out, ControlAxis.X, Z, F), shots, seed + 1)
            y = sample_setting(cswap_joint_probabilities(out, ControlAxis.Y, Z, F), shots, seed + 2)
            rec = reconstruct_density_matrix(extract_kd_from_cswap(*x, *y, d, Z, F))
            devs.append(np.abs(rec.matrix - rho.matrix).max())
        print(f"{shots},{np.mean(devs):.4e},{np.std(devs):.4e},{d / np.sqrt(shots):.4e}")


if __name__ == "__main__":
    main()
