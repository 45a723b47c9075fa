#!/usr/bin/env python3
"""Run the four reference Rx(-pi/2) gates (slow and fast, single- and
two-photon drive) and dump the time-resolved populations and phases.
"""

import argparse
import pathlib

from kpo_rx.cli import main as cli_main

CASES = {
    "single_slow": ("single", 2.9, 7.79, 0.865, 3.9, 10.0),
    "two_slow": ("two", 4.7, 16.55, 0.383, 2.4, 10.0),
    "single_fast": ("single", 2.9, 7.78, 0.848, 2.3, 9.1),
    "two_fast": ("two", 4.2, 20.51, 0.732, 1.0, 6.4),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--samples", type=int, default=201)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for name, (kind, p0, wd, pd1, k_tau, k_t) in CASES.items():
        print(f"--- {name} ---")
        cli_main([
            "evolve", "--drive", kind, "--p0-over-k", str(p0), "--wd-over-k", str(wd),
            "--pd1-over-k", str(pd1), "--k-tau", str(k_tau), "--k-t", str(k_t),
            "--samples", str(args.samples), "--out", str(out / f"evolve_{name}.csv"),
        ])


if __name__ == "__main__":
    main()
