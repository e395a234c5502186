"""Turn the sweep CSVs in a results directory into quick-look PNGs.

Usage: python3 plot_sweeps.py [results_dir]
"""

import csv
import math
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    curves = defaultdict(list)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            label = f"{row['mode']} {row['allocator']}"
            if row["allocator"] == "fixed":
                label += f" {row['alloc_sbs1']},{row['alloc_sbs2']}"
            curves[label].append((float(row["mean_c"]),
                                  float(row["q_db"]),
                                  float(row["mbs_usage_prob"])))
    return curves


def plot(path, column, ylabel, out):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, points in sorted(load(path).items()):
        points.sort()
        xs = [p[0] for p in points]
        ys = [p[column] if math.isfinite(p[column]) else float("nan")
              for p in points]
        ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel("mean interference coefficient")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    print(f"wrote {out}")


def main():
    results = Path(sys.argv[1] if len(sys.argv) > 1 else "../results")
    for csv_path in sorted(results.glob("*.csv")):
        stem = csv_path.with_suffix("")
        if csv_path.name.startswith("mbs_usage"):
            plot(csv_path, 2, "MBS usage probability",
                 stem.with_suffix(".png"))
        else:
            plot(csv_path, 1, "average power cost [dB]",
                 stem.with_suffix(".png"))


if __name__ == "__main__":
    main()
