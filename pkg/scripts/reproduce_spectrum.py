#!/usr/bin/env python3
"""Sweep p0/K and tabulate the labeled KPO spectrum plus the ground-pair
drive matrix elements (the data behind the level-diagram and coupling
figures).  Writes CSVs next to this script unless --out-dir is given.
"""

import argparse
import pathlib

from kpo_rx.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--p0-max", type=float, default=7.0)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cli_main([
        "spectrum", "--p0-min", "0", "--p0-max", str(args.p0_max), "--p0-step", "0.1",
        "--k-max", "8", "--out", str(out / "spectrum.csv"),
    ])
    for kind in ("single", "two"):
        cli_main([
            "matrix-elements", "--drive", kind, "--p0-min", "0.5",
            "--p0-max", str(args.p0_max), "--p0-step", "0.1", "--k-max", "8",
            "--out", str(out / f"matrix_elements_{kind}.csv"),
        ])
    print(f"wrote spectrum.csv and matrix_elements_{{single,two}}.csv in {out}")


if __name__ == "__main__":
    main()
