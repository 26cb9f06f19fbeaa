"""Density refinement d(N) on a perturbed pair, and shell size against core amplitude.

    python3 scripts/convergence_sweep.py
"""

import argparse

import numpy as np

from neutralcoat import CoatOptions, Material, NeutralConfig, Perturbation, find_shell
from neutralcoat.geometry import ShellParams, StarBoundary
from neutralcoat.kernels import KernelPair
from neutralcoat.verify import density_refinement


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=512)
    parser.add_argument("--N", type=int, default=128, help="nodes for the amplitude sweep")
    args = parser.parse_args()

    mat = Material(5.0, 2.0, 3.0)
    config = NeutralConfig(mat, 1.0)
    pair = KernelPair(StarBoundary(config.r_i, Perturbation(0.0, (0.0, 0.0, 0.03), (0.0, 0.02))),
                      StarBoundary(1.0, ShellParams(0.01, 0.02, -0.01).to_perturbation()))
    ladder, diffs, ok = density_refinement(pair, mat, n_max=args.n_max)
    print("N      d(N)")
    for n, d in zip(ladder, diffs):
        print(f"{n:<6d} {d:.3e}")
    print("spectral" if ok else "not spectral")

    print("\namp     |b|_inf     |b| / amp^2")
    for amp in 0.04 * 0.5 ** np.arange(5):
        res = find_shell(Perturbation(cos=(0.0, 0.0, amp)), config, CoatOptions(n=args.N))
        size = res.b.sup_norm()
        print(f"{amp:.4f}  {size:.4e}  {size / amp ** 2:.4f}")


if __name__ == "__main__":
    main()
