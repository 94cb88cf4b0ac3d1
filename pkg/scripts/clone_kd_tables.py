"""Print the cloner, partial-swap and controlled-swap views of one KD distribution.

    python scripts/clone_kd_tables.py --dim 3 --seed 7
"""
import argparse

import numpy as np

from kdclone.channels import (
    ControlAxis,
    apply_clone_channel,
    apply_partial_swap_channel,
    controlled_swap_output,
    cswap_joint_probabilities,
    joint_diagonal,
)
from kdclone.hilbert import computational_basis, fourier_basis, haar_random_state
from kdclone.kd import (
    background_subtract,
    clone_joint_probabilities,
    extract_kd_from_cswap,
    kd_distribution,
    negativity_report,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    np.set_printoptions(precision=4, suppress=True, linewidth=120)

    d = args.dim
    psi = haar_random_state(d, args.seed)
    Z, F = computational_basis(d), fourier_basis(d)
    kd = kd_distribution(psi, Z, F)
    print("KD distribution <b|a><a|psi><psi|b>:\n", kd.entries)

    p_clone = clone_joint_probabilities(apply_clone_channel(psi), Z, F)
    print("\ncloner p(a,b):\n", p_clone.entries)
    print("background-subtracted (Re kd):\n", background_subtract(p_clone, d))

    rho = psi.density().matrix
    born = np.abs(Z.vectors.conj() @ psi.amplitudes) ** 2, np.abs(F.vectors.conj() @ psi.amplitudes) ** 2
    p_swap = joint_diagonal(apply_partial_swap_channel(psi), Z, F).real
    print("\npartial swap, d * (p - background) (Im kd):\n",
          d * (p_swap - (born[0][:, None] + born[1][None, :]) / (2 * d)))

    out = controlled_swap_output(rho)
    tables = (*cswap_joint_probabilities(out, ControlAxis.X, Z, F),
              *cswap_joint_probabilities(out, ControlAxis.Y, Z, F))
    print("\ncontrolled swap extraction:\n", extract_kd_from_cswap(*tables, d, Z, F).entries)
    print("\n", negativity_report(kd))


if __name__ == "__main__":
    main()
