#!/usr/bin/env python3
"""Plots CSV output of `polarthru simulate` and `polarthru llr-check`.

    plot.py sweep results.csv [more.csv ...] -o throughput.png
    plot.py llr trace.csv -o llr.png
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_sweep(paths, out):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    capacity = {}
    for path in paths:
        curves = defaultdict(list)
        for r in read(path):
            snr = float(r["snr_db"])
            label = f'{r["protocol"]} {r["decoder"]}'
            if r["decoder"] == "SCLD":
                label += f'-{r["list_size"]}'
            curves[label].append((snr, float(r["throughput"])))
            capacity[snr] = float(r["capacity"])
        for label, pts in curves.items():
            pts.sort()
            ax.plot(*zip(*pts), marker="o", label=label)
    if capacity:
        pts = sorted(capacity.items())
        ax.plot(*zip(*pts), "k--", label="capacity")
    ax.set_xlabel("Es/N0 (dB)")
    ax.set_ylabel("throughput (bits per channel use)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_llr(path, out):
    levels = defaultdict(list)
    for r in read(path):
        levels[int(r["level"])].append(
            (float(r["y"]), float(r["exact"]), float(r["approx"]))
        )
    fig, axes = plt.subplots(1, len(levels), figsize=(4 * len(levels), 3.5))
    if len(levels) == 1:
        axes = [axes]
    for ax, (level, rows) in zip(axes, sorted(levels.items())):
        y, exact, approx = zip(*rows)
        ax.plot(y, exact, label="exact")
        ax.plot(y, approx, "--", label="piecewise")
        ax.set_title(f"level {level}")
        ax.set_xlabel("y")
        ax.grid(True, alpha=0.3)
    axes[0].set_ylabel("LLR")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    p = argparse.ArgumentParser()
    sub = p.add_subparsers(dest="kind", required=True)
    s = sub.add_parser("sweep")
    s.add_argument("csv", nargs="+")
    s.add_argument("-o", "--out", default="throughput.png")
    l = sub.add_parser("llr")
    l.add_argument("csv")
    l.add_argument("-o", "--out", default="llr.png")
    a = p.parse_args()
    if a.kind == "sweep":
        plot_sweep(a.csv, a.out)
    else:
        plot_llr(a.csv, a.out)


if __name__ == "__main__":
    main()
