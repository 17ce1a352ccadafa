#!/usr/bin/env python3
"""Plot explosion time against u from `roughex sweep` CSV output.

    ./build/roughex sweep > sweep.csv
    python3 scripts/plot_sweep.py sweep.csv -o sweep.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", help="sweep CSV (u,case,estimate,estimate_kind,lower_bound,upper_bound,classical)")
    ap.add_argument("-o", "--out", default="sweep.png")
    ap.add_argument("--log", action="store_true", help="logarithmic time axis")
    args = ap.parse_args()

    df = pd.read_csv(args.csv)
    df = df[df["case"].isin(["A", "B"])]
    df = df.replace([float("inf"), float("-inf")], float("nan"))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(df["u"], df["upper_bound"], "--", label="upper bound")
    ax.plot(df["u"], df["estimate"], "-", label="explosion time")
    ax.plot(df["u"], df["lower_bound"], "--", label="lower bound")
    ax.plot(df["u"], df["classical"], ":", label="classical (alpha = 1)")
    if args.log:
        ax.set_yscale("log")
    ax.set_xlabel("u")
    ax.set_ylabel("T*(u)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
