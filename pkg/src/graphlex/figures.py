"""Matplotlib rendering of report payloads.

Figures are drawn strictly from the JSON-ready report dicts the CLI writes,
so a saved report can always be re-rendered. Uses Figure objects directly
(no pyplot, no global state) and writes PNG files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure


def _save(fig, path):
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    return path


def save_sweep_figures(payload, out_dir, stem="sweep"):
    """Render a sweep report: the grid (heatmap or line) and size vs F1."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = payload["grid"]
    if not grid:
        return []
    param_names = list(grid[0]["params"])
    written = []

    fig = Figure(figsize=(6.5, 4.5))
    ax = fig.add_subplot(111)
    if len(param_names) == 2:
        xs = sorted({e["params"][param_names[1]] for e in grid})
        ys = sorted({e["params"][param_names[0]] for e in grid})
        mat = np.full((len(ys), len(xs)), np.nan)
        for e in grid:
            i = ys.index(e["params"][param_names[0]])
            j = xs.index(e["params"][param_names[1]])
            if e["macro_f1"] is not None:
                mat[i, j] = e["macro_f1"]
        im = ax.imshow(mat, aspect="auto", origin="lower", cmap="viridis")
        ax.set_xticks(range(len(xs)), [str(x) for x in xs])
        ax.set_yticks(range(len(ys)), [str(y) for y in ys])
        ax.set_xlabel(param_names[1])
        ax.set_ylabel(param_names[0])
        fig.colorbar(im, ax=ax, label="train macro-F1")
        # hatch inadmissible cells
        for e in grid:
            if e["macro_f1"] is None:
                i = ys.index(e["params"][param_names[0]])
                j = xs.index(e["params"][param_names[1]])
                ax.text(j, i, "x", ha="center", va="center", color="0.6")
    else:
        name = param_names[0]
        pts = [(e["params"][name], e["macro_f1"]) for e in grid]
        xs = [p for p, _ in pts]
        admissible = [(x, f) for x, f in pts if f is not None]
        if admissible:
            ax.plot(*zip(*admissible), "o-", label="admissible")
        dropped = [x for x, f in pts if f is None]
        for x in dropped:
            ax.axvline(x, color="0.85", zorder=0)
        ax.set_xlabel(name)
        ax.set_ylabel("train macro-F1")
        if admissible:
            ax.legend()
    best = payload.get("best")
    title = f"{payload['method']} sweep"
    if best:
        title += f" (best {best['params']}, F1={best['macro_f1']:.3f})"
    ax.set_title(title)
    written.append(_save(fig, out_dir / f"{stem}_grid.png"))

    fig = Figure(figsize=(6.0, 4.2))
    ax = fig.add_subplot(111)
    sizes = [e["discovered_size"] for e in grid if e["macro_f1"] is not None]
    f1s = [e["macro_f1"] for e in grid if e["macro_f1"] is not None]
    ax.scatter(sizes, f1s, s=26)
    lo = payload["constraints"]["min_discovered"]
    hi = payload["constraints"]["max_discovered"]
    ax.axvspan(lo, hi, color="0.92", zorder=0)
    ax.set_xlabel("discovered words")
    ax.set_ylabel("train macro-F1")
    ax.set_title(f"{payload['method']}: dictionary size vs F1")
    written.append(_save(fig, out_dir / f"{stem}_sizes.png"))
    return written


def save_eval_figure(payload, out_dir, stem="eval"):
    """Render an eval report as per-class and macro P/R/F1 bars."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(111)
    groups = [(f"class {pc['label']}", pc["precision"], pc["recall"], pc["f1"])
              for pc in payload["per_class"]]
    groups.append(("macro", payload["macro_precision"], payload["macro_recall"],
                   payload["macro_f1"]))
    x = np.arange(len(groups))
    width = 0.27
    for off, (name, color) in enumerate(
        [("precision", "#4c72b0"), ("recall", "#dd8452"), ("f1", "#55a868")]
    ):
        vals = [g[1 + off] for g in groups]
        ax.bar(x + (off - 1) * width, vals, width, label=name, color=color)
    ax.set_xticks(x, [g[0] for g in groups])
    ax.set_ylim(0, 1.05)
    conf = payload["confusion"]
    ax.set_title(
        f"dictionary of {payload['dictionary_size']} "
        f"(tp={conf['tp']} fp={conf['fp']} tn={conf['tn']} fn={conf['fn']})"
    )
    ax.legend()
    return [_save(fig, out_dir / f"{stem}_metrics.png")]


def save_lr_figure(entries, out_dir, stem="lr", max_words=40):
    """Render a likelihood-ratio table as horizontal bars (log scale).

    +inf ratios are drawn at the top of the axis with a marker.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = sorted(entries, key=lambda e: (e["lr"] == "inf", _as_float(e["lr"])),
                     reverse=True)[:max_words]
    if not entries:
        return []
    finite = [_as_float(e["lr"]) for e in entries if e["lr"] != "inf"]
    cap = max(finite) * 2 if finite else 10.0
    cap = max(cap, 2.0)
    fig = Figure(figsize=(6.0, max(2.5, 0.28 * len(entries))))
    ax = fig.add_subplot(111)
    ys = np.arange(len(entries))[::-1]
    for y, e in zip(ys, entries):
        if e["lr"] == "inf":
            ax.barh(y, cap, color="#c44e52")
            ax.text(cap, y, " inf", va="center", fontsize=8)
        else:
            ax.barh(y, _as_float(e["lr"]), color="#4c72b0")
    ax.set_yticks(ys, [e["token"] for e in entries], fontsize=8)
    ax.axvline(1.0, color="0.4", linewidth=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("likelihood ratio")
    return [_save(fig, out_dir / f"{stem}_ratios.png")]


def _as_float(x):
    if x == "inf":
        return float("inf")
    return float(x)
