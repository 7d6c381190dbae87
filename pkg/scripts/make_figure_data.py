#!/usr/bin/env python3
"""Regenerate the standard figure datasets into an output directory.

Usage: python scripts/make_figure_data.py [outdir]   (default: ./figure_data)
"""
import pathlib
import sys

from photonamp.cli import main

RUNS = [
    ["fig1", "--output", "fig1_fock_inputs.csv"],
    ["fig2", "--output", "fig2_coherent_inputs.csv"],
    ["fig3", "--grid-points", "2049", "--format", "json", "--output", "fig3_pure_vs_mixed.json"],
    ["exact-compare", "--grid-points", "256", "--format", "json",
     "--output", "exact_compare_ne3_n2.json"],
    ["sweep", "--output", "peak_threshold_sweep.csv"],
]


def run_all(outdir: pathlib.Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for args in RUNS:
        args = args.copy()
        args[args.index("--output") + 1] = str(outdir / args[args.index("--output") + 1])
        code = main(args)
        if code != 0:
            print(f"command {args[0]} exited with {code}", file=sys.stderr)
            return code
        print(f"wrote {args[args.index('--output') + 1]}")
    return 0


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("figure_data")
    sys.exit(run_all(target))
