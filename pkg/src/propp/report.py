"""File rendering for bound-chain reports: delimited values plus a figure.

Writes ``chain.csv`` with one row per audited step and ``chain.png`` with a
horizontal bar chart of the step values (log scale once values spread out).
The CSV is byte-stable; the PNG is rendered on the Agg backend with its
software tag stripped so repeated runs in one environment agree.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict

from .howson import HowsonReport


def render_howson_report(report: HowsonReport, outdir: str) -> Dict[str, str]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    csv_path = out / "chain.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "expression", "value"])
        for step in report.chain:
            writer.writerow([step.label, step.expression, step.value])

    png_path = out / "chain.png"
    _render_figure(report, png_path)
    return {"csv": str(csv_path), "png": str(png_path)}


def _render_figure(report: HowsonReport, path: Path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [step.label for step in report.chain]
    values = [step.value for step in report.chain]
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(labels) + 1.5))
    ax.barh(range(len(values)), values, color="#4878a8")
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    if max(values) > 64 * max(1, min(v for v in values if v > 0)):
        ax.set_xscale("log")
    ax.set_xlabel("value")
    ax.set_title(
        f"p={report.p} dG={report.d_g} dA={report.d_a} dB={report.d_b} "
        f"joint={report.joint_index} ({report.case})")
    for i, v in enumerate(values):
        ax.annotate(str(v), (v, i), xytext=(3, 0),
                    textcoords="offset points", va="center", fontsize=8)
    fig.tight_layout()
    try:
        fig.savefig(path, metadata={"Software": None})
    except TypeError:
        fig.savefig(path)
    plt.close(fig)
