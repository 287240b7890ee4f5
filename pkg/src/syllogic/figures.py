"""Matplotlib renderings of the CSV report outputs.

Each CLI report path can drop a PNG next to its delimited output; the CSV
stays the canonical artifact and rendering is skippable with --no-figures.
The Agg backend keeps everything headless.
"""
from __future__ import annotations

from typing import Sequence

from .evalkit.metrics import MetricReport


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_simulation_figure(rows: Sequence[tuple[float, float, float]], out_path,
                           threshold: Sequence[tuple[float, float]] | None = None,
                           ) -> None:
    """Scatter of measured CE against measured accuracy.

    ``rows`` are (a, accuracy_measured, ce) triples; an optional threshold
    table (a, ce_threshold) is drawn as a line on the accuracy axis.
    """
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = [acc for _, acc, _ in rows]
    ys = [ce for _, _, ce in rows]
    ax.scatter(xs, ys, s=8, alpha=0.35, color="tab:blue", edgecolors="none",
               label="simulated unbiased model")
    if threshold:
        txs = [100.0 * a for a, _ in threshold]
        tys = [t for _, t in threshold]
        ax.plot(txs, tys, color="black", linewidth=1.5,
                label="95th percentile of unbiased CE")
    ax.set_xlabel("measured accuracy (%)")
    ax.set_ylabel("measured content effect")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def save_sensitivity_figure(rows: Sequence[tuple[float, float, float]], out_path,
                            flips: Sequence[tuple[int, float, float, float]] | None = None,
                            ) -> None:
    """Combined-score curves against CE, one line per accuracy level."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    by_accuracy: dict[float, list[tuple[float, float]]] = {}
    for accuracy, ce, cs in rows:
        by_accuracy.setdefault(accuracy, []).append((ce, cs))
    for accuracy in sorted(by_accuracy, reverse=True):
        points = sorted(by_accuracy[accuracy])
        ax.plot([p[0] for p in points], [p[1] for p in points],
                label=f"accuracy {accuracy:g}")
    if flips:
        for n_total, _, cs_after, _ in flips:
            ax.axhline(cs_after, linestyle=":", linewidth=0.8, color="gray")
            ax.annotate(f"single flip, n={n_total}", (0.5, cs_after),
                        fontsize=7, color="gray")
    ax.set_xlabel("content effect")
    ax.set_ylabel("combined score")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def save_report_figure(report: MetricReport, out_path) -> None:
    """Bar chart of the four group accuracies with the headline metrics."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    labels = list(report.group_accuracies)
    values = [report.group_accuracies[k] for k in labels]
    ax.bar(range(len(labels)), values, color="tab:blue", width=0.6)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels([label.replace("_", "\n") for label in labels], fontsize=8)
    ax.set_ylim(0, 105)
    ax.set_ylabel("group accuracy (%)")
    ax.set_title(report.summary_line(), fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
