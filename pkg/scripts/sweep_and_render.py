#!/usr/bin/env python3
"""Produce the standard sweep artifacts for all three built-in models.

For each model this runs the closed-form, Markov, and exact engines over a
tau grid, writes the trace CSVs and regime-analysis JSON, and renders the
heatmap / line / density-matrix SVGs into the output directory.
"""

import argparse
import math
import os
import sys

from qmonitor import cli

MODELS = ("single_qubit", "two_qubit_singlet_triplet", "two_qubit_bell")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.environ.get(cli.ENV_OUT, "out/sweeps"))
    parser.add_argument("--n-max", type=int, default=32)
    parser.add_argument("--tau-count", type=int, default=33)
    args = parser.parse_args()

    for name in MODELS:
        for engine in ("closed_form", "exact", "markov"):
            code = cli.main(
                [
                    "simulate",
                    "--model", name,
                    "--engine", engine,
                    "--tau-count", str(args.tau_count),
                    "--n-max", str(args.n_max),
                    "--out", args.out,
                ]
            )
            if code != 0:
                return code
        code = cli.main(
            [
                "analyze",
                "--model", name,
                "--tau-count", str(args.tau_count),
                "--out", args.out,
            ]
        )
        if code != 0:
            return code

        csv_path = os.path.join(args.out, f"{name}_exact.csv")
        column = "magnetization" if name == "single_qubit" else None
        render_args = ["render", csv_path, "--kind", "heatmap", "--out", args.out]
        if column:
            render_args += ["--column", column]
        if cli.main(render_args) != 0:
            return 1
        picks = [n for n in (1, 2, 8, 9, 30) if n <= args.n_max] or [args.n_max]
        lines_args = [
            "render", csv_path,
            "--kind", "lines",
            "--at-n", ",".join(str(n) for n in picks),
            "--out", args.out,
        ]
        if column:
            lines_args += ["--column", column]
        if cli.main(lines_args) != 0:
            return 1
        if name != "single_qubit":
            code = cli.main(
                [
                    "render", csv_path,
                    "--kind", "rho_grid",
                    "--model", name,
                    "--n", str(min(30, args.n_max)),
                    "--tau", str(math.pi / 4),
                    "--out", args.out,
                ]
            )
            if code != 0:
                return code
    print(f"all artifacts in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
