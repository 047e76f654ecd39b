#!/usr/bin/env python3
"""Decomposition study: string counts and build cost across meshes.

Reproduces the decomposition summary tables on the desk meshes: both
routes (trace inner products and Hadamard grand sums) side by side on
the 5/9/17-node pressure-correction systems, then the grand-sum route
alone up to 33 nodes where the per-string trace scan is already the
bottleneck.  Saves the 5/9/17 templates for reuse.

Outputs land under --out (default runs/decomposition_study), one
subdirectory per table, each with manifest.txt, CSV and aligned-text
versions of the summary.
"""

import argparse
import sys
from pathlib import Path

from qcfd.cli import main as qcfd


def run(argv: list[str]) -> None:
    code = qcfd(argv)
    if code:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser(
        description=__doc__.splitlines()[0],
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--out", type=Path,
                        default=Path("runs/decomposition_study"),
                        help="output directory")
    args = parser.parse_args()

    print("== trace vs grand-sum, meshes 5/9/17 ==")
    run(["decompose", "--out", str(args.out / "trace_vs_hadamard"),
         "meshes=5,9,17", "methods=hadamard,trace", "save_templates=true"])

    print("\n== grand-sum scaling, meshes 5..33 ==")
    run(["decompose", "--out", str(args.out / "hadamard_scaling"),
         "meshes=5,9,17,33", "methods=hadamard"])

    print(f"\nresults in {args.out}/")


if __name__ == "__main__":
    main()
