"""Experiment harness: single runs, parameter sweeps, graph generation, and
figure rendering over the emitted tables.

Configuration comes from an optional JSON spec file plus flag overrides; every
run is reproducible byte for byte from its spec.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from .arbreduce import reduce_pipeline
from .coloring import delta_plus_one
from .engine import RoundCapExceeded, TrialConfig
from .graphcore import (
    Graph,
    GraphParseError,
    gen_degree_capped,
    gen_forest_union,
    gen_high_girth,
    gen_star_forest,
    gen_tree,
    load_graph_file,
    save_graph_file,
)
from .mis import mis_general, mis_high_girth, mis_tree
from .mm import maximal_matching
from .verify import check_coloring, check_matching, check_mis

CSV_COLUMNS = (
    "seed", "algo", "n", "delta", "lambda",
    "rounds_total", "rounds_phase1", "rounds_phase2",
    "valid", "maximal_or_total", "bound_flags", "solution_size", "aborted",
)

WORKERS_ENV = "SYMBREAK_WORKERS"


class SpecError(ValueError):
    """Bad spec file, flags, or generator parameters."""


@dataclass(frozen=True)
class RunSpec:
    """One experiment: a graph source, an algorithm, and trial bookkeeping."""

    algo: str
    graph: dict[str, Any]
    seed: int = 0
    trials: int = 1
    fmt: str = "csv"
    out: str | None = None
    timings: bool = False
    cfg: TrialConfig = TrialConfig()

    def __post_init__(self):
        if self.trials < 1:
            raise SpecError("trials must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise SpecError(f"unknown format {self.fmt!r}")
        _validate_graph_source(self.graph)


_GENERATOR_PARAMS = {
    "tree": ("n",),
    "forest_union": ("n", "lambda"),
    "degree_capped": ("n", "delta"),
    "high_girth": ("n", "delta"),
    "star_forest": ("n",),
}


def _validate_graph_source(src: dict[str, Any]) -> None:
    if "path" in src:
        return
    gen = src.get("generator")
    if gen not in _GENERATOR_PARAMS:
        raise SpecError(
            f"graph source needs a 'path' or a 'generator' in {sorted(_GENERATOR_PARAMS)}")
    for p in _GENERATOR_PARAMS[gen]:
        if src.get(p) is None:
            raise SpecError(f"generator {gen!r} needs parameter {p!r}")
        if int(src[p]) < 1:
            raise SpecError(f"generator parameter {p!r} must be positive")


def build_graph(src: dict[str, Any], seed: int) -> Graph:
    """Materialize the graph source; generators are seeded per trial."""
    if "path" in src:
        return load_graph_file(src["path"])
    gen = src["generator"]
    n = int(src["n"])
    if gen == "tree":
        return gen_tree(n, seed)
    if gen == "forest_union":
        return gen_forest_union(n, int(src["lambda"]), seed)
    if gen == "degree_capped":
        return gen_degree_capped(n, int(src["delta"]), seed,
                                 p_target=float(src.get("p_target", 1.0)))
    if gen == "high_girth":
        return gen_high_girth(n, int(src["delta"]), seed)
    return gen_star_forest(n, seed)


@dataclass(frozen=True)
class TrialReport:
    """One row of results; schema identical across algorithms, inapplicable
    fields left as None."""

    seed: int
    algo: str
    n: int
    delta: int
    lam: int | None
    rounds_total: int
    rounds_phase1: int
    rounds_phase2: int
    valid: bool | None
    maximal_or_total: bool | None
    bound_flags: dict[str, Any]
    solution_size: int | None
    aborted: bool
    wall_ms: float | None = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "algo": self.algo,
            "n": self.n,
            "delta": self.delta,
            "lambda": self.lam,
            "rounds_total": self.rounds_total,
            "rounds_phase1": self.rounds_phase1,
            "rounds_phase2": self.rounds_phase2,
            "valid": self.valid,
            "maximal_or_total": self.maximal_or_total,
            "bound_flags": self.bound_flags,
            "solution_size": self.solution_size,
            "aborted": self.aborted,
            "wall_ms": self.wall_ms,
        }


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return str(int(v)) if v.is_integer() else repr(v)
    return str(v)


def _flags_cell(flags: dict[str, Any]) -> str:
    parts = []
    for k in sorted(flags):
        v = flags[k]
        if isinstance(v, (bool, int, float, str)):
            parts.append(f"{k}={_fmt(v)}")
    return "|".join(parts)


def csv_row(rep: TrialReport) -> str:
    vals = (
        rep.seed, rep.algo, rep.n, rep.delta, rep.lam,
        rep.rounds_total, rep.rounds_phase1, rep.rounds_phase2,
        rep.valid, rep.maximal_or_total, _flags_cell(rep.bound_flags),
        rep.solution_size, rep.aborted,
    )
    return ",".join(_fmt(v) for v in vals)


def run_single(g: Graph, spec: RunSpec, seed: int) -> TrialReport:
    """Run one seeded trial on one graph and verify its output."""
    cfg = replace(spec.cfg, seed=seed, algorithm=spec.algo)
    t0 = time.perf_counter()
    aborted = False
    valid: bool | None = None
    maximal: bool | None = None
    size: int | None = None
    try:
        if spec.algo == "mm":
            art, trace = maximal_matching(g, cfg)
            chk = check_matching(g, art)
            valid, maximal, size = chk.valid_matching, chk.maximal, len(art)
        elif spec.algo == "mis":
            art, trace = mis_general(g, cfg)
            chk = check_mis(g, art.members)
            valid, maximal, size = chk.independent, chk.maximal, len(art)
        elif spec.algo == "mis-tree":
            art, trace = mis_tree(g, cfg)
            chk = check_mis(g, art.members)
            valid, maximal, size = chk.independent, chk.maximal, len(art)
        elif spec.algo == "mis-girth":
            art, trace = mis_high_girth(g, cfg)
            chk = check_mis(g, art.members)
            valid, maximal, size = chk.independent, chk.maximal, len(art)
        elif spec.algo == "coloring":
            art, trace = delta_plus_one(g, cfg)
            chk = check_coloring(g, art, g.max_degree + 1)
            valid = chk.proper and chk.within_palette
            maximal = chk.total
            size = len(set(art.colors.values()))
        elif spec.algo == "arb-reduce":
            art, trace = reduce_pipeline(g, cfg)
            if cfg.arb_mode == "mis":
                chk = check_mis(g, art.members)
                valid, maximal, size = chk.independent, chk.maximal, len(art)
            else:
                chk = check_matching(g, art)
                valid, maximal, size = chk.valid_matching, chk.maximal, len(art)
        else:
            raise SpecError(f"unknown algorithm {spec.algo!r}")
    except RoundCapExceeded as exc:
        trace = exc.trace
        aborted = True
    wall = (time.perf_counter() - t0) * 1000.0
    phases = trace.phase_totals()
    lam = cfg.arb_lambda if spec.algo == "arb-reduce" else None
    return TrialReport(
        seed=seed, algo=spec.algo, n=g.n, delta=int(g.max_degree), lam=lam,
        rounds_total=trace.rounds_total,
        rounds_phase1=phases.get("phase1", 0),
        rounds_phase2=phases.get("phase2", 0),
        valid=valid, maximal_or_total=maximal,
        bound_flags=dict(trace.flags), solution_size=size, aborted=aborted,
        wall_ms=wall if spec.timings else None,
    )


def _trial_task(args: tuple[dict, int]) -> TrialReport:
    payload, seed = args
    spec = RunSpec(cfg=TrialConfig(**payload["cfg"]),
                   **{k: v for k, v in payload.items() if k != "cfg"})
    g = build_graph(spec.graph, seed)
    return run_single(g, spec, seed)


def _spec_payload(spec: RunSpec) -> dict:
    from dataclasses import asdict

    d = {
        "algo": spec.algo, "graph": spec.graph, "seed": spec.seed,
        "trials": spec.trials, "fmt": spec.fmt, "out": spec.out,
        "timings": spec.timings, "cfg": asdict(spec.cfg),
    }
    return d


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise SpecError(f"{WORKERS_ENV} must be an integer") from exc
    return os.cpu_count() or 1


def run_trials(spec: RunSpec) -> tuple[list[TrialReport], dict[str, Any]]:
    """Execute trials with seeds seed..seed+trials-1 and aggregate.

    Results are ordered by seed no matter how workers finish.
    """
    seeds = list(range(spec.seed, spec.seed + spec.trials))
    payload = _spec_payload(spec)
    tasks = [(payload, s) for s in seeds]
    workers = min(worker_count(), len(seeds))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_trial_task, tasks))
    else:
        reports = [_trial_task(t) for t in tasks]
    return reports, summarize(reports)


def _median(xs: Sequence[float]) -> float | None:
    return float(np.median(np.asarray(xs, dtype=np.float64))) if len(xs) else None


def summarize(reports: list[TrialReport]) -> dict[str, Any]:
    done = [r for r in reports if not r.aborted]
    rounds = [r.rounds_total for r in reports]
    agg_flags: dict[str, Any] = {
        "trials": len(reports),
        "rounds_mean": float(np.mean(rounds)) if rounds else None,
        "rounds_p25": _median_quantile(rounds, 0.25),
        "rounds_p75": _median_quantile(rounds, 0.75),
    }
    keys = sorted({k for r in reports for k in r.bound_flags})
    for k in keys:
        vals = [r.bound_flags[k] for r in reports if k in r.bound_flags]
        if all(isinstance(v, bool) for v in vals):
            agg_flags[f"rate_{k}"] = sum(vals) / len(vals)
        elif all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            agg_flags[f"median_{k}"] = _median([float(v) for v in vals])
        elif all(isinstance(v, str) for v in vals) and len(set(vals)) == 1:
            agg_flags[k] = vals[0]
    return {
        "seed": "summary",
        "algo": reports[0].algo if reports else "",
        "n": _median([r.n for r in reports]),
        "delta": _median([r.delta for r in reports]),
        "lambda": _median([r.lam for r in reports if r.lam is not None])
        if any(r.lam is not None for r in reports) else None,
        "rounds_total": _median(rounds),
        "rounds_phase1": _median([r.rounds_phase1 for r in reports]),
        "rounds_phase2": _median([r.rounds_phase2 for r in reports]),
        "valid": (sum(bool(r.valid) for r in done) / len(done)) if done else None,
        "maximal_or_total": (sum(bool(r.maximal_or_total) for r in done) / len(done))
        if done else None,
        "bound_flags": agg_flags,
        "solution_size": _median([r.solution_size for r in done
                                  if r.solution_size is not None]),
        "aborted": sum(r.aborted for r in reports),
    }


def _median_quantile(xs: Sequence[float], q: float) -> float | None:
    if not xs:
        return None
    return float(np.quantile(np.asarray(xs, dtype=np.float64), q))


def summary_csv_row(summary: dict[str, Any]) -> str:
    vals = (
        summary["seed"], summary["algo"], summary["n"], summary["delta"],
        summary["lambda"], summary["rounds_total"], summary["rounds_phase1"],
        summary["rounds_phase2"], summary["valid"], summary["maximal_or_total"],
        _flags_cell(summary["bound_flags"]), summary["solution_size"],
        summary["aborted"],
    )
    return ",".join(_fmt(v) for v in vals)


def render_csv(reports: list[TrialReport], summary: dict[str, Any]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(csv_row(r) for r in reports)
    lines.append(summary_csv_row(summary))
    return "\n".join(lines) + "\n"


def render_json(reports: list[TrialReport], summary: dict[str, Any]) -> str:
    doc = {"trials": [r.to_json_dict() for r in reports], "summary": summary}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def sweep(spec: RunSpec, axis: str, values: Sequence[Any]) -> list[dict[str, Any]]:
    """One aggregate per axis value; axis is one of n, delta, lambda, t, seed."""
    if axis not in ("n", "delta", "lambda", "t", "seed"):
        raise SpecError(f"unknown sweep axis {axis!r}")
    if not values:
        raise SpecError("sweep needs at least one axis value")
    summaries = []
    for raw in values:
        v = int(raw)
        cur = spec
        if axis == "seed":
            cur = replace(spec, seed=v)
        elif axis in ("n", "delta"):
            if "path" in spec.graph:
                raise SpecError(f"axis {axis!r} needs a generator graph source")
            cur = replace(spec, graph={**spec.graph, axis: v})
        elif axis == "lambda":
            graph = {**spec.graph, "lambda": v} if "generator" in spec.graph \
                and "lambda" in _GENERATOR_PARAMS[spec.graph["generator"]] \
                else spec.graph
            cur = replace(spec, graph=graph, cfg=replace(spec.cfg, arb_lambda=v))
        elif axis == "t":
            cur = replace(spec, cfg=replace(spec.cfg, arb_t=v))
        _, summary = run_trials(cur)
        summary["bound_flags"]["axis"] = axis
        summary["bound_flags"]["axis_value"] = v
        summaries.append(summary)
    return summaries


def render_sweep_csv(summaries: list[dict[str, Any]]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(summary_csv_row(s) for s in summaries)
    return "\n".join(lines) + "\n"


def render_sweep_json(axis: str, summaries: list[dict[str, Any]]) -> str:
    return json.dumps({"axis": axis, "summaries": summaries},
                      indent=2, sort_keys=True) + "\n"


# -- argument plumbing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # Spec'd exit codes: 1 is validation, 2 is reserved for verification
    # regressions, so argparse must not exit 2 on bad flags.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SpecError(message)


def _add_trial_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", nargs="?", help="JSON spec file; flags override it")
    p.add_argument("--algo", choices=("mm", "mis", "mis-tree", "mis-girth",
                                      "coloring", "arb-reduce"))
    p.add_argument("--graph", help="graph file path (overrides generator)")
    p.add_argument("--gen", choices=sorted(_GENERATOR_PARAMS),
                   help="graph generator name")
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--t", dest="arb_t", type=int)
    p.add_argument("--arb-mode", choices=("mis", "mm"))
    p.add_argument("--p-target", dest="p_target", type=float)
    p.add_argument("--variant", choices=("weak-diameter", "small-components"))
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--c6", type=float)
    p.add_argument("--c7", type=float)
    p.add_argument("--c", dest="c", type=float)
    p.add_argument("--c-prime", dest="c_prime", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--cap", dest="max_rounds", type=int)
    p.add_argument("--out")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))
    p.add_argument("--timings", action="store_true", default=None,
                   help="include wall-clock times in JSON output")
    p.add_argument("--figures", action="store_true", default=None,
                   help="render figures next to the output file")


def _load_spec_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecError("spec file must hold a JSON object")
    return doc


_CFG_KEYS = ("c1", "c2", "c6", "c7", "c", "c_prime", "rho", "variant",
             "max_rounds")


def _build_runspec(args: argparse.Namespace) -> RunSpec:
    doc = _load_spec_file(args.spec) if args.spec else {}

    def pick(flag, key, default=None):
        return flag if flag is not None else doc.get(key, default)

    graph: dict[str, Any] = dict(doc.get("graph", {}))
    if args.graph is not None:
        graph = {"path": args.graph}
    elif args.gen is not None:
        graph = {"generator": args.gen}
    for key, flag in (("n", args.n), ("delta", args.delta), ("lambda", args.lam),
                      ("p_target", args.p_target)):
        if flag is not None and "path" not in graph:
            graph[key] = flag

    algo = pick(args.algo, "algo")
    if algo is None:
        raise SpecError("an algorithm is required (--algo or spec file)")

    cfg_kwargs: dict[str, Any] = {"algorithm": algo}
    for key in _CFG_KEYS:
        v = pick(getattr(args, key, None), key)
        if v is not None:
            cfg_kwargs[key] = v
    lam = pick(args.lam, "lambda")
    if lam is not None:
        cfg_kwargs["arb_lambda"] = int(lam)
    arb_t = pick(args.arb_t, "t")
    if arb_t is not None:
        cfg_kwargs["arb_t"] = int(arb_t)
    arb_mode = pick(getattr(args, "arb_mode", None), "arb_mode")
    if arb_mode is not None:
        cfg_kwargs["arb_mode"] = arb_mode
    try:
        cfg = TrialConfig(**cfg_kwargs)
        return RunSpec(
            algo=algo,
            graph=graph,
            seed=int(pick(args.seed, "seed", 0)),
            trials=int(pick(args.trials, "trials", 1)),
            fmt=pick(args.fmt, "format", "csv"),
            out=pick(args.out, "out"),
            timings=bool(pick(args.timings, "timings", False)),
            cfg=cfg,
        )
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _exit_code(reports: list[TrialReport]) -> int:
    for r in reports:
        if r.aborted:
            continue
        if not r.valid or not r.maximal_or_total:
            return 2
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    spec = _build_runspec(args)
    reports, summary = run_trials(spec)
    text = render_csv(reports, summary) if spec.fmt == "csv" \
        else render_json(reports, summary)
    _emit(text, spec.out)
    if args.figures:
        if spec.out is None:
            raise SpecError("--figures needs --out to anchor the figure files")
        from .report import render_from_reports

        render_from_reports(reports, summary, _figure_dir(spec.out))
    return _exit_code(reports)


def _figure_dir(out_path: str) -> str:
    stem = os.path.splitext(os.path.basename(out_path))[0]
    return os.path.join(os.path.dirname(os.path.abspath(out_path)), stem + "_figs")


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _build_runspec(args)
    values = [v for v in args.values.split(",") if v != ""]
    summaries = sweep(spec, args.axis, values)
    text = render_sweep_csv(summaries) if spec.fmt == "csv" \
        else render_sweep_json(args.axis, summaries)
    _emit(text, spec.out)
    if args.figures:
        if spec.out is None:
            raise SpecError("--figures needs --out to anchor the figure files")
        from .report import render_sweep_figures

        render_sweep_figures(summaries, args.axis, _figure_dir(spec.out))
    for s in summaries:
        if s["valid"] is not None and s["valid"] < 1.0:
            return 2
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    src: dict[str, Any] = {"generator": args.type}
    for key, flag in (("n", args.n), ("delta", args.delta), ("lambda", args.lam),
                      ("p_target", args.p_target)):
        if flag is not None:
            src[key] = flag
    _validate_graph_source(src)
    g = build_graph(src, args.seed if args.seed is not None else 0)
    if args.out:
        save_graph_file(g, args.out)
    else:
        from .graphcore import dump_graph

        sys.stdout.write(dump_graph(g))
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from .report import render_report

    try:
        paths = render_report(args.input, args.out_dir)
    except (OSError, ValueError) as exc:
        raise SpecError(str(exc)) from exc
    for p in paths:
        sys.stdout.write(p + "\n")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = _Parser(prog="symbreak", allow_abbrev=False,
                     description="round-complexity experiments for randomized "
                                 "symmetry breaking")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run trials of one configuration")
    _add_trial_flags(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="aggregate trials across one axis")
    _add_trial_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True,
                         choices=("n", "delta", "lambda", "t", "seed"))
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated axis values")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_gen = sub.add_parser("gen", help="write a generated graph file")
    p_gen.add_argument("--type", required=True, choices=sorted(_GENERATOR_PARAMS))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--delta", type=int)
    p_gen.add_argument("--lambda", dest="lam", type=int)
    p_gen.add_argument("--p-target", dest="p_target", type=float)
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--out")
    p_gen.set_defaults(fn=_cmd_gen)

    p_rep = sub.add_parser("report", help="render figures from an output table")
    p_rep.add_argument("--input", required=True, help="CSV produced by run/sweep")
    p_rep.add_argument("--out-dir", help="directory for figures "
                                         "(default: next to the input)")
    p_rep.set_defaults(fn=_cmd_report)

    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (SpecError, GraphParseError, ValueError) as exc:
        # Algorithm preconditions (for instance mis-tree on a non-forest)
        # surface as ValueError; those are configuration mistakes too.
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
