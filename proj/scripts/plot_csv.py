#!/usr/bin/env python3
"""Render tmd-sim CSV output.

Dev tooling, not product surface: reads the CSV emitted by any subcommand
(manifest comments are skipped), guesses the plot type from the header row,
and writes a PNG next to the input (or to --output).

  tmd-sim dispersion-map --output map.csv && scripts/plot_csv.py map.csv
"""
import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def read_table(path):
    with open(path) as f:
        rows = [r for r in csv.reader(line for line in f if not line.startswith("#")) if r]
    header, data = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in data]) for i, name in enumerate(header)}
    return header, cols


def plot(path, out):
    header, cols = read_table(path)
    fig, ax = plt.subplots(figsize=(7, 5))

    if header == ["rep_rate_hz", "tau_in_ps", "n_max_bins"]:
        reps = np.unique(cols["rep_rate_hz"])
        taus = np.unique(cols["tau_in_ps"])
        if len(reps) > 1 and len(taus) > 1:
            grid = cols["n_max_bins"].reshape(len(reps), len(taus))
            mesh = ax.pcolormesh(taus, reps, np.log10(np.maximum(grid, 1)), shading="nearest")
            ax.set_yscale("log")
            ax.set_xlabel("input pulse FWHM (ps)")
            ax.set_ylabel("repetition rate (Hz)")
            fig.colorbar(mesh, ax=ax, label="log10 max bins")
        else:
            x = cols["tau_in_ps"] if len(taus) > 1 else cols["rep_rate_hz"]
            ax.plot(x, cols["n_max_bins"], "o-")
            ax.set_xlabel("tau (ps)" if len(taus) > 1 else "rep rate (Hz)")
            ax.set_ylabel("max bins")
    elif header == ["bins", "overlap_convolution", "overlap_loss", "overlap_combined"]:
        for key, style in [("overlap_convolution", "k+--"), ("overlap_loss", "b+:"),
                           ("overlap_combined", "r+-")]:
            ax.plot(cols["bins"], cols[key], style, label=key.split("_")[1])
        ax.set_xscale("log", base=2)
        ax.set_xlabel("time bins")
        ax.set_ylabel("overlap")
        ax.legend()
    elif header == ["n", "best_bins", "best_overlap"]:
        ax.step(cols["n"], cols["best_bins"], where="mid")
        ax.set_yscale("log", base=2)
        ax.set_xlabel("photon number n")
        ax.set_ylabel("optimal bins")
        inset = ax.inset_axes([0.55, 0.15, 0.4, 0.35])
        inset.plot(cols["n"], cols["best_overlap"], "k.")
        inset.set_ylabel("overlap", fontsize=8)
    elif header == ["delta_n", "overlap"]:
        ax.plot(cols["delta_n"], cols["overlap"], "o-")
        ax.set_xlabel("delta n")
        ax.set_ylabel("overlap")
    elif header == ["k", "empirical", "analytic"]:
        width = 0.4
        ax.bar(cols["k"] - width / 2, cols["empirical"], width, label="Monte Carlo")
        ax.bar(cols["k"] + width / 2, cols["analytic"], width, label="analytic")
        ax.set_xlabel("clicks k")
        ax.set_ylabel("probability")
        ax.legend()
    elif header == ["k", "probability"]:
        ax.bar(cols["k"], cols["probability"])
        ax.set_xlabel("clicks k")
        ax.set_ylabel("probability")
    else:
        sys.exit(f"unrecognized header: {header}")

    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv_file")
    p.add_argument("--output", help="output PNG (default: input with .png)")
    args = p.parse_args()
    plot(args.csv_file, args.output or args.csv_file.rsplit(".", 1)[0] + ".png")


if __name__ == "__main__":
    main()
