"""Report output: canonical JSON, a per-place CSV, and optional PNG figures.

matplotlib is imported lazily (Agg backend) so the library and the plain
JSON path never pay for it.
"""

from __future__ import annotations

import csv
import os

from .campaign import report_to_json


def write_json(path: str, report: dict) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
    return path


def write_places_csv(path: str, report: dict) -> str:
    """Long-form per-place table: one row per (place, cover, value) cell,
    plus one summary row per place with the cover column empty."""
    places = report.get("aggregates", {}).get("places", {})
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["place", "kind", "d", "seen", "fail", "cover", "value", "count"])
        for place in sorted(places):
            slot = places[place]
            w.writerow([place, slot["kind"], slot["d"], slot["seen"], slot["fail"], "", "", ""])
            for cover in sorted(slot["values"]):
                hist = slot["values"][cover]
                for value in sorted(hist):
                    w.writerow([place, slot["kind"], slot["d"], slot["seen"], slot["fail"],
                                cover, value, hist[value]])
    return path


def render_figures(out_dir: str, report: dict, stem: str = "") -> list[str]:
    """Two PNGs next to the JSON: how often each boundary place appeared,
    and the distribution of local character values per cover."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    places = report.get("aggregates", {}).get("places", {})
    covers = report.get("aggregates", {}).get("covers", {})
    paths = []

    names = sorted(places, key=lambda p: (-places[p]["seen"], p))
    seen = [places[p]["seen"] for p in names]
    fails = [places[p]["fail"] for p in names]
    fig, ax = plt.subplots(figsize=(max(6, 0.35 * len(names)), 4.5))
    ax.bar(range(len(names)), seen, color="#4878a8", label="trials seen")
    if any(fails):
        ax.bar(range(len(names)), fails, color="#c23b3b", label="failures")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=75, ha="right", fontsize=7)
    ax.set_ylabel("trials")
    ax.set_title("boundary place usage")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    p1 = os.path.join(out_dir, f"{stem}places_usage.png")
    fig.savefig(p1, dpi=130)
    plt.close(fig)
    paths.append(p1)

    labels = sorted(covers)
    ncols = 2
    nrows = (len(labels) + ncols - 1) // ncols or 1
    fig, axes = plt.subplots(nrows, ncols, figsize=(9, 3.2 * nrows), squeeze=False)
    for idx, label in enumerate(labels):
        ax = axes[idx // ncols][idx % ncols]
        hist = covers[label]["values"]
        keys = sorted(hist, key=lambda k: (len(k), k))
        ax.bar(range(len(keys)), [hist[k] for k in keys], color="#5a9367")
        ax.set_xticks(range(len(keys)))
        ax.set_xticklabels(keys, fontsize=8)
        ax.set_title(f"{label}: local values over all places", fontsize=9)
        ax.set_ylabel("count")
    for idx in range(len(labels), nrows * ncols):
        axes[idx // ncols][idx % ncols].axis("off")
    fig.tight_layout()
    p2 = os.path.join(out_dir, f"{stem}cover_values.png")
    fig.savefig(p2, dpi=130)
    plt.close(fig)
    paths.append(p2)
    return paths
