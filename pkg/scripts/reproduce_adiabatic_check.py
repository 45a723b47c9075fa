#!/usr/bin/env python3
"""Compare the two-level adiabatic phase prediction with full dynamics in
the weak-drive regime, for both drive kinds.  Slow ramps (K*T = 100) keep
the slow-passage assumption honest; at the production gate times the
prediction is qualitative only.
"""

import argparse
import pathlib

from kpo_rx.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--k-t", type=float, default=100.0)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cli_main(["adiabatic-check", "--drive", "two", "--p0-over-k", "4.7",
              "--wd-over-k", "16.55", "--k-tau", str(0.24 * args.k_t),
              "--k-t", str(args.k_t), "--pd1-list", "0,0.02,0.05,0.1",
              "--out", str(out / "adiabatic_check_two.csv")])
    cli_main(["adiabatic-check", "--drive", "single", "--p0-over-k", "2.9",
              "--wd-over-k", "7.79", "--k-tau", str(0.39 * args.k_t),
              "--k-t", str(args.k_t), "--pd1-list", "0,0.02,0.05,0.1",
              "--out", str(out / "adiabatic_check_single.csv")])


if __name__ == "__main__":
    main()
