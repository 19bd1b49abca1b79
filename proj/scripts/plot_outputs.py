#!/usr/bin/env python3
"""Plot magicpol CSV outputs. Not used by the build or the tests.

    magicpol --out scan.csv magic-scan --B 3,5,9 --A-steps 41
    magicpol --out fringe.csv ramsey --light-shift -283.1 --sigma-rel 0.026
    python3 scripts/plot_outputs.py scan.csv fringe.csv
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd


def plot(path, ax):
    df = pd.read_csv(path, comment="#")
    if "diff_shift_Hz_per_kWcm2" in df:
        for B, g in df.groupby("B_G"):
            ax.plot(g["A"], g["diff_shift_Hz_per_kWcm2"], label=f"B = {B} G")
        ax.axhline(0, color="k", lw=0.5)
        ax.set(xlabel="helicity A", ylabel="differential shift (Hz per kW/cm^2)")
        ax.legend()
    elif "p0" in df:
        ax.errorbar(1e3 * df["wait_s"], df["p0"], yerr=df["stderr"], fmt=".", ms=3)
        ax.set(xlabel="wait (ms)", ylabel="P(initial state)")
    elif "frequency_Hz" in df:
        ax.errorbar(df["frequency_Hz"] - df["frequency_Hz"].mean(), df["p"], yerr=df["stderr"], fmt=".")
        ax.set(xlabel="frequency - scan center (Hz)", ylabel="transfer probability")
    else:
        raise SystemExit(f"{path}: no plot for columns {list(df.columns)}")
    ax.set_title(path)


def main(paths):
    if not paths:
        raise SystemExit(__doc__)
    fig, axes = plt.subplots(len(paths), 1, figsize=(6, 3.2 * len(paths)), squeeze=False)
    for path, ax in zip(paths, axes[:, 0]):
        plot(path, ax)
    fig.tight_layout()
    plt.show()


if __name__ == "__main__":
    main(sys.argv[1:])
