#!/usr/bin/env python3
"""Turn simulator summary CSVs into figures.

Reads the `summary.csv` written by the `ddfb` harness (schema
`ddfb-summary-v1`), draws one error-bar curve per scheme, and writes a PNG.
The coupling to the simulator is the CSV file alone: nothing here imports
the simulation package. Styling is fixed and the output carries no
timestamps, so rendering the same CSV twice gives byte-identical files.
"""

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

SCHEMA_TAG = "# ddfb-summary-v1"

# metric and axis dressing per figure kind; log-scale y where the spread
# across schemes spans decades
KINDS = {
    "nrmse-vs-snr": dict(
        metric="nrmse", xlabel="SNR (dB)", ylabel="NRMSE", logy=True
    ),
    "gain-vs-mtx": dict(
        metric="beamforming_gain", xlabel="transmit antennas",
        ylabel="beamforming gain", logy=True,
    ),
    "capacity-vs-ptx": dict(
        metric="sum_rate", xlabel="transmit power",
        ylabel="sum rate (bit/s/Hz)", logy=False,
    ),
    "nrmse-vs-g": dict(
        metric="nrmse", xlabel="dictionary atoms", ylabel="NRMSE", logy=True
    ),
}

# fixed per-scheme styling, assigned to scheme ids in sorted order
_COLORS = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
_MARKERS = ("o", "s", "^", "v", "D", "p", "*", "x", "+", ".")


class SchemaError(ValueError):
    """The CSV does not look like a harness summary."""


def load_summary(path):
    """Read and validate a summary CSV; returns the rows as dicts."""
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_TAG:
            raise SchemaError(
                f"{path}: expected schema header '{SCHEMA_TAG}', got '{first}'"
            )
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def extract_curves(rows, metric):
    """Group rows into per-scheme curves of (x, y, yerr), sorted by x.

    Rows with an empty metric cell are skipped (not every preset fills
    every metric); an empty result is an error because the requested
    figure would be blank.
    """
    mean_col = f"{metric}_mean"
    se_col = f"{metric}_se"
    for col in ("sweep_value", "scheme_id", mean_col, se_col):
        if col not in rows[0]:
            raise SchemaError(f"summary schema mismatch: missing column '{col}'")
    curves = {}
    for rec in rows:
        if rec[mean_col] == "":
            continue
        x = float(rec["sweep_value"])
        y = float(rec[mean_col])
        se = float(rec[se_col]) if rec[se_col] != "" else 0.0
        curves.setdefault(rec["scheme_id"], []).append((x, y, se))
    if not curves:
        raise SchemaError(f"no rows carry a value for '{mean_col}'")
    for pts in curves.values():
        pts.sort()
    return curves


def build_figure(curves, kind_cfg):
    """One error-bar curve per scheme on a fixed canvas."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    for i, scheme in enumerate(sorted(curves)):
        xs, ys, ses = zip(*curves[scheme])
        ax.errorbar(
            xs, ys, yerr=ses, label=scheme,
            color=_COLORS[i % len(_COLORS)],
            marker=_MARKERS[i % len(_MARKERS)],
            markersize=4.5, linewidth=1.3, capsize=2.5,
        )
    if kind_cfg["logy"]:
        ax.set_yscale("log")
    ax.set_xlabel(kind_cfg["xlabel"])
    ax.set_ylabel(kind_cfg["ylabel"])
    ax.grid(True, which="both", linewidth=0.4, alpha=0.5)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    return fig


def render(summary_path, kind, out_path):
    rows = load_summary(summary_path)
    curves = extract_curves(rows, KINDS[kind]["metric"])
    fig = build_figure(curves, KINDS[kind])
    # strip the library's software tag so reruns are byte-identical even
    # across matplotlib upgrades
    fig.savefig(out_path, format="png", metadata={"Software": None})
    plt.close(fig)
    return len(curves)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plot.py", description="render simulator summary CSVs as figures"
    )
    parser.add_argument("--summary", required=True, help="path to summary.csv")
    parser.add_argument("--kind", required=True, choices=sorted(KINDS))
    parser.add_argument("--out", required=True, help="output PNG path")
    args = parser.parse_args(argv)
    try:
        n = render(args.summary, args.kind, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{args.out}: {n} curve(s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
