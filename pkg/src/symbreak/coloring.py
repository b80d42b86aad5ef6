"""Randomized (max degree + 1) vertex coloring.

Uncolored vertices repeatedly pick a uniform color from what their colored
neighbors have left them and keep it when no competing neighbor picked the
same.  Low-degree stragglers and dense leftovers are finished exactly by
gathering their components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .detfinish import gather_and_solve
from .engine import NodeRandomness, Trace, TrialConfig
from .graphcore import (
    Graph,
    _component_index_lists,
    _row_reduce_sum,
    member_degrees,
    to_mask,
)

_SCALAR_LIMIT = 128


@dataclass(frozen=True)
class PartialColoring:
    """Colors assigned so far, keyed by vertex id.  Uncolored ids are absent."""

    colors: dict[int, int]

    def __len__(self) -> int:
        return len(self.colors)

    def get(self, vid: int, default=None):
        return self.colors.get(vid, default)

    def __getitem__(self, vid: int) -> int:
        return self.colors[vid]

    def items(self):
        return self.colors.items()

    def is_total(self, g: Graph) -> bool:
        return all(int(v) in self.colors for v in g.ids)


@dataclass(frozen=True)
class ColoringParams:
    n: int
    delta: int
    c7: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1 or self.delta < 0 or self.c7 <= 0:
            raise ValueError("need n >= 1, delta >= 0, c7 > 0")

    @property
    def d_star(self) -> float:
        return 32.0 * self.c7 * math.log(max(self.n, 2))

    def stage_count(self) -> int:
        if self.delta <= 1:
            return 1
        return int(math.ceil(math.log(self.delta) / math.log(16.0 / 15.0)))

    def extra_stages(self) -> int:
        return int(math.ceil(4.0 * math.log2(self.d_star)))

    @property
    def residual_degree_bound(self) -> float:
        return 512.0 * self.d_star


def _coloring_map(coloring) -> Mapping[int, int]:
    return coloring.colors if isinstance(coloring, PartialColoring) else coloring


def available_palette(g: Graph, coloring, vid: int) -> frozenset[int]:
    """Colors in 1..max_degree+1 not used by any colored neighbor of vid."""
    cmap = _coloring_map(coloring)
    i = g.index_of(vid)
    taken = {cmap[int(w)] for w in g.ids[g.neighbors(i)] if int(w) in cmap}
    return frozenset(q for q in range(1, g.max_degree + 2) if q not in taken)


@dataclass(frozen=True)
class WeightReport:
    """Per-color congestion weights and exact one-stage availability odds."""

    palette: frozenset[int]
    weights: dict[int, float]
    availability: dict[int, float]

    def bound_ok(self, tol: float = 1e-12) -> bool:
        return all(self.availability[q] >= 0.25 ** self.weights[q] - tol
                   for q in self.palette)


def weight_diagnostics(g: Graph, coloring, vid: int) -> WeightReport:
    """w(q) sums 1/|palette(u)| over uncolored neighbors u that can still take
    q; availability(q) is the exact probability q survives one stage of those
    neighbors picking uniformly."""
    cmap = _coloring_map(coloring)
    i = g.index_of(vid)
    palette = available_palette(g, coloring, vid)
    weights = {q: 0.0 for q in palette}
    avail = {q: 1.0 for q in palette}
    for w in g.neighbors(i):
        wid = int(g.ids[w])
        if wid in cmap:
            continue
        psi = available_palette(g, coloring, wid)
        for q in palette:
            if q in psi:
                weights[q] += 1.0 / len(psi)
                avail[q] *= 1.0 - 1.0 / len(psi)
    return WeightReport(palette=palette, weights=weights, availability=avail)


def _assign(g, idxs, colors, col, avail, count) -> None:
    """Record colors and strike them from uncolored neighbors' palettes."""
    if len(idxs) == 0:
        return
    col[idxs] = colors
    newly = np.zeros(g.n, dtype=bool)
    newly[idxs] = True
    sel = newly[g.slot_owner]
    v_arr = g.indices[sel]
    q_arr = col[g.slot_owner[sel]]
    unc = col[v_arr] == 0
    v_arr, q_arr = v_arr[unc], q_arr[unc]
    if v_arr.size == 0:
        return
    key = v_arr * np.int64(avail.shape[1] + 1) + q_arr
    _, first = np.unique(key, return_index=True)
    v_arr, q_arr = v_arr[first], q_arr[first]
    was = avail[v_arr, q_arr - 1]
    avail[v_arr, q_arr - 1] = False
    np.subtract.at(count, v_arr[was], 1)


def _stage_scalar(g, part, col, avail, count, rand, round_index):
    adj = g.adj_lists()
    ids = g.ids.tolist()
    rows = [v for v in range(g.n) if part[v] and col[v] == 0]
    picks: dict[int, int] = {}
    width = avail.shape[1]
    for v in rows:
        k = int(rand.unit(ids[v], round_index, 0) * count[v])
        seen = -1
        for q in range(width):
            if avail[v, q]:
                seen += 1
                if seen == k:
                    picks[v] = q + 1
                    break
    newly = [
        v for v in rows
        if not any(w in picks and picks[w] == picks[v] for w in adj[v])
    ]
    _assign(g, np.array(newly, dtype=np.int64),
            np.array([picks[v] for v in newly], dtype=np.int64),
            col, avail, count)
    return np.array(newly, dtype=np.int64)


def _stage_vector(g, part, col, avail, count, rand, round_index):
    rows = np.flatnonzero(part & (col == 0))
    if rows.size == 0:
        return rows
    units = rand.units(g.ids[rows], round_index, 0)
    k = (units * count[rows]).astype(np.int64)
    csum = np.cumsum(avail[rows], axis=1)
    color = 1 + np.argmax(csum > k[:, None], axis=1).astype(np.int64)

    pick = np.zeros(g.n, dtype=np.int64)
    pick[rows] = color
    pf = np.zeros(g.n, dtype=bool)
    pf[rows] = True
    clash_slots = (pf[g.indices] & pf[g.slot_owner]
                   & (pick[g.indices] == pick[g.slot_owner]))
    clash = _row_reduce_sum(g, clash_slots.astype(np.int64)) > 0
    newly = np.flatnonzero(pf & ~clash)
    _assign(g, newly, pick[newly], col, avail, count)
    return newly


def _color_stage(g, part, col, avail, count, rand, round_index):
    """One 2-round stage: participants pick a uniform still-available color
    and keep it unless an adjacent participant picked the same."""
    if g.n <= _SCALAR_LIMIT:
        return _stage_scalar(g, part, col, avail, count, rand, round_index)
    return _stage_vector(g, part, col, avail, count, rand, round_index)


def color_stage(g: Graph, participants, coloring, rand: NodeRandomness,
                round_index: int) -> dict[int, int]:
    """Public wrapper over ids: runs one stage against an id->color mapping
    and returns only the newly assigned colors."""
    cmap = _coloring_map(coloring)
    width = g.max_degree + 1
    col = np.zeros(g.n, dtype=np.int64)
    for vid, q in cmap.items():
        col[g.index_of(vid)] = q
    avail = np.ones((g.n, width), dtype=bool)
    count = np.full(g.n, width, dtype=np.int64)
    seeded = np.flatnonzero(col)
    colors0 = col[seeded].copy()
    col[seeded] = 0
    _assign(g, seeded, colors0, col, avail, count)
    part = to_mask(g, participants)
    newly = _color_stage(g, part, col, avail, count, rand, round_index)
    return {int(g.ids[i]): int(col[i]) for i in newly}


def delta_plus_one(g: Graph, cfg: TrialConfig) -> tuple[PartialColoring, Trace]:
    """Color every vertex with max_degree + 1 colors.

    A fixed burst of stages over everyone, then each degree class of the
    leftovers gets a short second burst and an exact component finish.
    """
    width = g.max_degree + 1
    params = ColoringParams(n=g.n, delta=g.max_degree, c7=cfg.c7)
    rand = NodeRandomness(cfg.seed)
    trace = Trace(cfg.cap_for(g.n))

    col = np.zeros(g.n, dtype=np.int64)
    avail = np.ones((g.n, width), dtype=bool)
    count = np.full(g.n, width, dtype=np.int64)
    everyone = np.ones(g.n, dtype=bool)

    for s in range(params.stage_count()):
        if not np.any(col == 0):
            break
        _color_stage(g, everyone, col, avail, count, rand, trace.rounds_total)
        trace.charge("phase1", f"stage{s}", 2,
                     active=int((col == 0).sum()), colored=int((col > 0).sum()))

    unc = col == 0
    udeg = member_degrees(g, unc)
    d_star = params.d_star
    heavy = member_degrees(g, unc & (udeg >= d_star))
    trace.flags["coloring_residual_audit_violations"] = int(
        np.count_nonzero(unc & (heavy >= params.residual_degree_bound)))

    low = unc & (udeg < d_star)
    high = unc & ~low
    trace.flags["coloring_high_branch"] = bool(high.any())

    for mask0, label in ((low, "low"), (high, "high")):
        if not mask0.any():
            continue
        for s in range(params.extra_stages()):
            part = mask0 & (col == 0)
            if not part.any():
                break
            _color_stage(g, part, col, avail, count, rand, trace.rounds_total)
            trace.charge("phase1", f"{label}-extra{s}", 2,
                         active=int((col == 0).sum()), colored=int((col > 0).sum()))
        resid = mask0 & (col == 0)
        comps = _component_index_lists(g, resid)
        costs = []
        for comp in comps:
            mask = np.zeros(g.n, dtype=bool)
            mask[comp] = True
            forbidden = {}
            for i in comp:
                nb = g.neighbors(i)
                forbidden[int(g.ids[i])] = {int(col[w]) for w in nb if col[w] > 0}
            res = gather_and_solve(g, mask, "coloring", palette=width,
                                   forbidden=forbidden)
            items = sorted(res.solution.items())
            idxs = np.array([g.index_of(vid) for vid, _ in items], dtype=np.int64)
            qs = np.array([q for _, q in items], dtype=np.int64)
            _assign(g, idxs, qs, col, avail, count)
            costs.append(res.rounds)
        if costs:
            trace.charge("phase2", f"{label}-gather", max(costs),
                         active=int((col == 0).sum()), colored=int((col > 0).sum()))

    if np.any(col == 0):
        raise AssertionError("stage plan left vertices uncolored")
    out = {int(g.ids[i]): int(col[i]) for i in range(g.n)}
    return PartialColoring(out), trace
