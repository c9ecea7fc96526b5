"""Assessment reports: delimited bound tables plus figures.

The report path writes a CSV of probability and utility bounds and, when
the space is plottable (2 states, 3 consequences), a figure of the dual
polytope projection with the agreeing-pair set overlaid.  A second figure
shows per-event probability intervals for any space.
"""

from __future__ import annotations

import csv
import os
from fractions import Fraction
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .model import Assessment, format_rat
from .queries import decimal6
from .representation import MODE_A5, MODE_A6, build_dual, prob_bounds
from .session import grid_pairs
from .stateindep import all_events


def _event_name(e: frozenset[int], a: Assessment) -> str:
    return "{" + ",".join(a.space.states[s] for s in sorted(e)) + "}"


def probability_rows(a: Assessment) -> list[dict]:
    d = build_dual(a, MODE_A6)
    rows = []
    for e in all_events(a.space):
        b = prob_bounds(d, e)
        rows.append(
            {
                "event": _event_name(e, a),
                "lower": format_rat(b.lower),
                "upper": format_rat(b.upper),
                "lower_decimal": decimal6(b.lower),
                "upper_decimal": decimal6(b.upper),
            }
        )
    return rows


def write_bounds_csv(a: Assessment, path: str) -> list[dict]:
    rows = probability_rows(a)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["event", "lower", "upper", "lower_decimal", "upper_decimal"]
        )
        writer.writeheader()
        writer.writerows(rows)
    return rows


def probability_figure(a: Assessment, path: str) -> None:
    rows = probability_rows(a)
    fig, ax = plt.subplots(figsize=(6, 0.6 * len(rows) + 1.2))
    for i, row in enumerate(rows):
        lo, hi = float(Fraction(row["lower"])), float(Fraction(row["upper"]))
        ax.plot([lo, hi], [i, i], lw=3, color="tab:blue")
        ax.plot([lo, hi], [i, i], "|", ms=10, color="tab:blue")
    ax.set_yticks(range(len(rows)), [r["event"] for r in rows])
    ax.set_xlim(-0.02, 1.02)
    ax.set_xlabel("probability")
    ax.set_title("lower/upper probability intervals")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def region_figure(a: Assessment, path: str, grid_step: int = 100) -> bool:
    """Dual-set projection with pair overlay; only for 2 states, 3
    consequences. Returns False when the space is not plottable."""
    space = a.space
    if space.ns != 2 or space.nc != 3:
        return False
    d = build_dual(a, MODE_A6)
    verts = sorted(d.polytope.vertices())
    xs = [float(v[0]) for v in verts]
    ys = [float(v[1] + v[3]) for v in verts]
    fig, ax = plt.subplots(figsize=(5.5, 5))
    if len(verts) > 2:
        ax.fill(xs, ys, alpha=0.15, color="tab:blue")
    ax.plot(xs + xs[:1], ys + ys[:1], "-o", color="tab:blue", label="dual set")
    pairs = grid_pairs(a, grid_step)
    if pairs:
        ax.plot(
            [float(p.p[0]) for p in pairs],
            [float(p.u[2]) for p in pairs],
            "s",
            ms=5,
            color="tab:red",
            label="agreeing pairs",
        )
    ax.set_xlabel(f"p({space.states[0]})")
    ax.set_ylabel(f"u({space.consequences[2]})")
    ax.set_title("dual set projection and agreeing pairs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return True


def write_report(a: Assessment, out_dir: str) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "probability_bounds.csv")
    rows = write_bounds_csv(a, csv_path)
    fig_path = os.path.join(out_dir, "probability_intervals.png")
    probability_figure(a, fig_path)
    outputs = {"csv": csv_path, "intervals_figure": fig_path}
    region_path = os.path.join(out_dir, "region.png")
    if region_figure(a, region_path):
        outputs["region_figure"] = region_path
    return {"rows": len(rows), "outputs": outputs}
