#!/usr/bin/env python3
"""Tabulate how far the exact finite-N detection probability sits from the
closed binomial form, across excitation sectors and atom numbers.

Sectors with n_e + n <= 1 are beam-splitter-exact for every N (the lone
collective coupling element is exactly g), so their rows sit at the
floating-point floor instead of shrinking like 1/N.

Usage: python scripts/hp_convergence_study.py [max_total_quanta]
"""
import math
import sys

import numpy as np

from photonamp.exact_model import hp_deviation

ATOM_NUMBERS = (500, 1000, 2000, 4000)


def study(max_total: int) -> None:
    tau_grid = np.linspace(0.0, math.pi, 256)
    header = ["n_e", "n"] + [f"N={N}" for N in ATOM_NUMBERS] + ["ratio/step"]
    print(",".join(header))
    for total in range(max_total + 1):
        for n_e in range(total + 1):
            n = total - n_e
            devs = [hp_deviation(N, n_e, n, tau_grid) for N in ATOM_NUMBERS]
            ratios = [devs[i] / devs[i + 1] for i in range(len(devs) - 1) if devs[i + 1] > 0]
            mean_ratio = float(np.mean(ratios)) if ratios and devs[0] > 1e-12 else float("nan")
            cells = [str(n_e), str(n)] + [f"{d:.3e}" for d in devs] + [f"{mean_ratio:.2f}"]
            print(",".join(cells))


if __name__ == "__main__":
    study(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
