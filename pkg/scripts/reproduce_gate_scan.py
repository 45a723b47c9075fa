#!/usr/bin/env python3
"""Map theta* and 1-F over the (wd, pd1) plane for both drive kinds (the
continuous-rotation scan figure).  Takes a few minutes per scan on one
core at the default 0.05 grid; use --jobs to parallelize over wd columns.
"""

import argparse
import pathlib

from kpo_rx.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    common = ["--wd-step", str(args.step), "--pd1-min", "0", "--pd1-max", "2",
              "--pd1-step", str(args.step), "--jobs", str(args.jobs)]
    # single-photon drive near xi_4 at p0/K = 2.9; two-photon near xi_5 at 4.7
    cli_main(["gate-scan", "--drive", "single", "--p0-over-k", "2.9",
              "--k-tau", "3.9", "--k-t", "10",
              "--out", str(out / "gate_scan_single.csv"), *common])
    cli_main(["gate-scan", "--drive", "two", "--p0-over-k", "4.7",
              "--k-tau", "2.4", "--k-t", "10",
              "--out", str(out / "gate_scan_two.csv"), *common])


if __name__ == "__main__":
    main()
