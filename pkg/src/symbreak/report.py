"""Figure rendering over emitted result tables.

Run and sweep stay data-only; this module (and the `report` subcommand) turns
their CSV output into a handful of PNG files next to the data.
"""

from __future__ import annotations

import csv
import math
import os
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_EXPECTED_HEADER = [
    "seed", "algo", "n", "delta", "lambda",
    "rounds_total", "rounds_phase1", "rounds_phase2",
    "valid", "maximal_or_total", "bound_flags", "solution_size", "aborted",
]


def _parse_flags(cell: str) -> dict[str, str]:
    out: dict[str, str] = {}
    if not cell:
        return out
    for part in cell.split("|"):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k] = v
    return out


def _read_table(path: str) -> tuple[list[dict], list[dict]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != _EXPECTED_HEADER:
        raise ValueError(f"{path} does not look like a symbreak results table")
    trials, summaries = [], []
    for raw in rows[1:]:
        rec = dict(zip(_EXPECTED_HEADER, raw))
        rec["bound_flags"] = _parse_flags(rec["bound_flags"])
        (summaries if rec["seed"] == "summary" else trials).append(rec)
    return trials, summaries


def _ensure_dir(out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path


def _rounds_figure(rounds: list[float], title: str, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    bins = max(5, min(40, int(math.sqrt(max(len(rounds), 1))) * 2))
    ax.hist(rounds, bins=bins, color="#4878a8", edgecolor="white")
    ax.set_xlabel("rounds per trial")
    ax.set_ylabel("trials")
    ax.set_title(title)
    return _save(fig, path)


def _phase_figure(p1: list[float], p2: list[float], title: str, path: str) -> str:
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    med1 = float(sorted(p1)[len(p1) // 2]) if p1 else 0.0
    med2 = float(sorted(p2)[len(p2) // 2]) if p2 else 0.0
    ax.bar(["randomized", "gather"], [med1, med2], color=["#4878a8", "#b8544c"])
    ax.set_ylabel("median rounds")
    ax.set_title(title)
    return _save(fig, path)


def render_from_reports(reports, summary: dict[str, Any], out_dir: str) -> list[str]:
    """Figures for an in-memory run: round histogram plus phase split."""
    _ensure_dir(out_dir)
    algo = summary.get("algo", "")
    rounds = [float(r.rounds_total) for r in reports]
    p1 = [float(r.rounds_phase1) for r in reports]
    p2 = [float(r.rounds_phase2) for r in reports]
    return [
        _rounds_figure(rounds, f"{algo}: rounds across trials",
                       os.path.join(out_dir, "rounds.png")),
        _phase_figure(p1, p2, f"{algo}: phase split",
                      os.path.join(out_dir, "phases.png")),
    ]


def render_sweep_figures(summaries: list[dict[str, Any]], axis: str,
                         out_dir: str) -> list[str]:
    """Median rounds against the swept axis, log2 x when values allow it."""
    _ensure_dir(out_dir)
    xs, ys, rates = [], [], []
    for s in summaries:
        flags = s["bound_flags"]
        xs.append(float(flags.get("axis_value", 0)))
        ys.append(float(s["rounds_total"] or 0))
        rates.append(float(s["valid"]) if s["valid"] is not None else float("nan"))
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(xs, ys, marker="o", color="#4878a8")
    if all(x > 0 for x in xs):
        ax.set_xscale("log", base=2)
    ax.set_xlabel(axis)
    ax.set_ylabel("median rounds")
    ax.set_title(f"round scaling over {axis}")
    ax.grid(True, alpha=0.3)
    paths = [_save(fig, os.path.join(out_dir, "scaling.png"))]

    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    ax.bar([str(int(x)) for x in xs], rates, color="#6a9a58")
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel(axis)
    ax.set_ylabel("valid fraction")
    ax.set_title("verifier pass rate")
    paths.append(_save(fig, os.path.join(out_dir, "validity.png")))
    return paths


def render_report(input_path: str, out_dir: str | None = None) -> list[str]:
    """Render figures for a CSV written by run or sweep.

    Returns the written file paths; out_dir defaults to a sibling directory
    named after the input file.
    """
    trials, summaries = _read_table(input_path)
    if out_dir is None:
        stem = os.path.splitext(os.path.basename(input_path))[0]
        out_dir = os.path.join(os.path.dirname(os.path.abspath(input_path)),
                               stem + "_figs")
    _ensure_dir(out_dir)
    if trials:
        rounds = [float(t["rounds_total"]) for t in trials]
        p1 = [float(t["rounds_phase1"]) for t in trials]
        p2 = [float(t["rounds_phase2"]) for t in trials]
        algo = trials[0]["algo"]
        return [
            _rounds_figure(rounds, f"{algo}: rounds across trials",
                           os.path.join(out_dir, "rounds.png")),
            _phase_figure(p1, p2, f"{algo}: phase split",
                          os.path.join(out_dir, "phases.png")),
        ]
    if not summaries:
        raise ValueError(f"{input_path} holds no rows to plot")
    axis = summaries[0]["bound_flags"].get("axis", "value")
    return render_sweep_figures(
        [{**s, "valid": (float(s["valid"]) if s["valid"] != "" else None),
          "rounds_total": float(s["rounds_total"] or 0)} for s in summaries],
        axis, out_dir)
