#!/usr/bin/env python3
"""Gate error versus single-photon loss rate for the two fast reference
gates (the loss-scan figure), including the small-kappa linear fit.
"""

import argparse
import pathlib

from kpo_rx.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cli_main(["loss-scan", "--both-drives", "--out", str(out / "loss_scan.csv")])


if __name__ == "__main__":
    main()
