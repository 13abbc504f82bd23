#!/usr/bin/env python3
"""Plot the output directory of `ncdlab sweep`.

Writes one PNG per selection order for clustering error and for mean
complexity (both substitution modes, mean +/- std), plus the asterisk-only
comparison across orders.

    python3 tools/plot_sweep.py out/ [--figdir out/figures]
"""

import argparse
import csv
import pathlib
import re
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

ORDER_TITLES = {"most": "most frequent first", "least": "least frequent first", "random": "random order"}
MODE_STYLE = {"asterisk": dict(marker="o", label="asterisk"), "random": dict(marker="s", label="random characters")}


def read_summary(path):
    curves = defaultdict(list)
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            if int(row["trials"]) == 0:
                continue
            curves[(row["order"], row["mode"])].append(
                (float(row["p"]), float(row["error_mean"]), float(row["error_std"]),
                 float(row["complexity_mean"]), float(row["complexity_std"])))
    for points in curves.values():
        points.sort()
    return curves


def reference_lines(series_dir):
    """ideal and baseline constants from any error series file."""
    refs = {}
    for path in sorted(series_dir.glob("error_*.tsv")):
        for line in path.read_text().splitlines():
            m = re.match(r"# (ideal|baseline)=(\d+)", line)
            if m:
                refs[m.group(1)] = int(m.group(2))
        if refs:
            break
    return refs


def draw_refs(ax, refs):
    if "ideal" in refs:
        ax.axhline(refs["ideal"], color="green", linestyle="--", linewidth=1, label=f"ideal ({refs['ideal']})")
    if "baseline" in refs:
        ax.axhline(refs["baseline"], color="grey", linestyle=":", linewidth=1,
                   label=f"undistorted ({refs['baseline']})")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("outdir", type=pathlib.Path)
    ap.add_argument("--figdir", type=pathlib.Path)
    args = ap.parse_args()
    figdir = args.figdir or args.outdir / "figures"
    figdir.mkdir(parents=True, exist_ok=True)

    curves = read_summary(args.outdir / "summary.csv")
    refs = reference_lines(args.outdir / "series")
    orders = sorted({o for o, _ in curves}, key=list(ORDER_TITLES).index)

    for order in orders:
        for what, col, ylabel in (("error", 1, "clustering error"), ("complexity", 3, "mean compressed size (bytes)")):
            fig, ax = plt.subplots(figsize=(6, 4))
            for mode in ("asterisk", "random"):
                pts = curves.get((order, mode))
                if not pts:
                    continue
                ax.errorbar([p[0] for p in pts], [p[col] for p in pts], yerr=[p[col + 1] for p in pts],
                            capsize=3, **MODE_STYLE[mode])
            if what == "error":
                draw_refs(ax, refs)
            ax.set_xlabel("fraction of word mass replaced (p)")
            ax.set_ylabel(ylabel)
            ax.set_title(f"{ylabel}, {ORDER_TITLES[order]}")
            ax.legend()
            fig.tight_layout()
            fig.savefig(figdir / f"{what}_{order}.png", dpi=120)
            plt.close(fig)

    for what, col, ylabel in (("error", 1, "clustering error"), ("complexity", 3, "mean compressed size (bytes)")):
        fig, ax = plt.subplots(figsize=(6, 4))
        for order in orders:
            pts = curves.get((order, "asterisk"))
            if pts:
                ax.errorbar([p[0] for p in pts], [p[col] for p in pts], yerr=[p[col + 1] for p in pts],
                            capsize=3, marker="o", label=ORDER_TITLES[order])
        if what == "error":
            draw_refs(ax, refs)
        ax.set_xlabel("fraction of word mass replaced (p)")
        ax.set_ylabel(ylabel)
        ax.set_title(f"{ylabel}, asterisk substitution")
        ax.legend()
        fig.tight_layout()
        fig.savefig(figdir / f"compare_{what}_asterisk.png", dpi=120)
        plt.close(fig)

    print(f"figures written to {figdir}")


if __name__ == "__main__":
    main()
