"""CSV and figure rendering for randomized counting runs.

A run's per-function estimates are written as a delimited file next to a
histogram figure, so repeated runs can be compared offline.  Rendering is
headless (Agg backend) and deterministic apart from PNG encoder details.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def write_estimate_report(
    directory: str | Path,
    samples: Sequence[Fraction],
    value: Fraction,
    true_value: Optional[Fraction] = None,
    label: str = "estimate",
) -> tuple[Path, Path]:
    """Write <dir>/estimates.csv and <dir>/estimates.png; returns both paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    csv_path = directory / "estimates.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "estimate", "estimate_float"])
        for i, s in enumerate(samples):
            writer.writerow([i, str(Fraction(s)), float(s)])

    png_path = directory / "estimates.png"
    floats = [float(s) for s in samples]
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = min(30, max(5, len(floats) // 4)) if floats else 5
    ax.hist(floats, bins=bins, color="#4878a8", edgecolor="white")
    ax.axvline(float(value), color="#c44e52", linewidth=2, label=f"reported {label}")
    if true_value is not None:
        ax.axvline(
            float(true_value), color="#55a868", linewidth=2, linestyle="--",
            label="exact value",
        )
    ax.set_xlabel(f"per-function {label}")
    ax.set_ylabel("frequency")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=110)
    plt.close(fig)
    return csv_path, png_path
