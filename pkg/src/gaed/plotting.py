"""Error-rate figures rendered next to sweep CSV files."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sim import read_csv  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.6),
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.4,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
}
MARKERS = "os^dvx*+"


def plot_error_rates(csv_paths: Sequence[Path], out: Path, labels: Sequence[str] | None = None,
                     metric: str = "fer", title: str | None = None) -> Path:
    """Semilog FER (or BER) over Eb/N0 for one or more sweep CSVs."""
    csv_paths = [Path(p) for p in csv_paths]
    labels = list(labels) if labels else [p.stem for p in csv_paths]
    if len(labels) != len(csv_paths):
        raise ValueError("one label per CSV file required")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for i, (path, label) in enumerate(zip(csv_paths, labels)):
            data = read_csv(path)
            y = data[metric]
            keep = y > 0  # zero-error points cannot be drawn on a log axis
            ax.semilogy(data["ebn0_db"][keep], y[keep], marker=MARKERS[i % len(MARKERS)],
                        label=label)
        ax.set_xlabel(r"$E_b/N_0$ (dB)")
        ax.set_ylabel(metric.upper())
        if title:
            ax.set_title(title)
        ax.legend(loc="lower left")
        fig.tight_layout()
        out = Path(out)
        fig.savefig(out, dpi=150)
        plt.close(fig)
    return out
