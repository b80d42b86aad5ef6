"""Randomized maximal matching.

Phase I runs a geometric schedule of 3-round match attempts that drives the
active degree sum down; Phase II finishes each leftover component by gathering
it at a leader and solving greedily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .detfinish import gather_and_solve
from .engine import NodeRandomness, Trace, TrialConfig, default_round_cap
from .graphcore import (
    Graph,
    _component_index_lists,
    kth_member_neighbor,
    member_degrees,
    to_mask,
)

_SCALAR_LIMIT = 128


@dataclass(frozen=True)
class Matching:
    """A set of vertex-disjoint edges, stored as sorted (u, v) id pairs with u < v."""

    edges: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def vertex_ids(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)


@dataclass(frozen=True)
class MmParams:
    """Schedule parameters for Phase I.

    Stage i splits the still-active vertices by degree against delta_i (high)
    and tau_i (low); nu_i is the stage's degree-sum target and always equals
    delta_i * tau_i / 2.
    """

    delta: int
    n: int
    c1: float = 1.0
    c2: float = 4.0
    rho: float = math.sqrt(8.0 / 7.0)

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 1.0 < self.rho * self.rho < 2.0:
            raise ValueError("rho*rho must lie strictly between 1 and 2")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c1 and c2 must be positive")

    def stage_count(self) -> int:
        # Clamped at delta=4 so graphs with tiny max degree still get enough
        # stages for the degree sum to bottom out.
        return int(math.ceil(self.c2 * math.log2(max(self.delta, 4))))

    def stage_params(self, i: int) -> tuple[float, float, float]:
        """(delta_i, tau_i, nu_i) for stage i >= 0."""
        if i < 0:
            raise ValueError("stage index must be nonnegative")
        root = math.sqrt(self.c1 * math.log(max(self.n, 2)))
        shrink = self.rho ** i
        delta_i = self.delta * root / shrink
        tau_i = 2.0 * self.delta / (shrink * root)
        nu_i = (self.delta / shrink) ** 2
        return delta_i, tau_i, nu_i


def stage_params(params: MmParams, i: int) -> tuple[float, float, float]:
    return params.stage_params(i)


def _match_round_scalar(g, u1, u2, matched, rand, round_index):
    adj = g.adj_lists()
    ids = g.ids.tolist()
    n = g.n
    choice = [-1] * n
    for v in range(n):
        if not u1[v] or matched[v]:
            continue
        elig = [w for w in adj[v] if u2[w] and not matched[w]]
        if elig:
            u = rand.unit(ids[v], round_index, 0)
            choice[v] = elig[int(u * len(elig))]
    best_from = [-1] * n
    for v in range(n):
        t = choice[v]
        if t >= 0 and v > best_from[t]:
            best_from[t] = v
    has_out = [False] * n
    has_in = [False] * n
    for t in range(n):
        if best_from[t] >= 0:
            has_in[t] = True
            has_out[best_from[t]] = True
    bit = [0] * n
    for v in range(n):
        if has_in[v] and has_out[v]:
            bit[v] = int(rand.draw(ids[v], round_index, 1)) & 1
        elif has_in[v]:
            bit[v] = 1
    pairs = [
        (best_from[t], t)
        for t in range(n)
        if best_from[t] >= 0 and bit[best_from[t]] == 0 and bit[t] == 1
    ]
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def _match_round_vector(g, u1, u2, matched, rand, round_index):
    free = ~matched
    targets = u2 & free
    counts = member_degrees(g, targets)
    rows = np.flatnonzero(u1 & free & (counts > 0))
    if rows.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    units = rand.units(g.ids[rows], round_index, 0)
    k = (units * counts[rows]).astype(np.int64)
    to = kth_member_neighbor(g, targets, rows, k)

    best_from = np.full(g.n, -1, dtype=np.int64)
    np.maximum.at(best_from, to, rows)
    t_nodes = np.flatnonzero(best_from >= 0)
    f_nodes = best_from[t_nodes]

    has_out = np.zeros(g.n, dtype=bool)
    has_out[f_nodes] = True
    has_in = np.zeros(g.n, dtype=bool)
    has_in[t_nodes] = True
    bit = np.where(has_in & ~has_out, 1, 0).astype(np.int64)
    both = np.flatnonzero(has_in & has_out)
    if both.size:
        bit[both] = (rand.draws(g.ids[both], round_index, 1) & np.uint64(1)).astype(np.int64)

    sel = (bit[f_nodes] == 0) & (bit[t_nodes] == 1)
    return np.stack([f_nodes[sel], t_nodes[sel]], axis=1)


def _match_round(g, u1, u2, matched, rand, round_index):
    """One 3-round match attempt from set u1 into set u2 (internal masks).

    Unmatched u1 vertices each pick a uniform unmatched u2 neighbor; every
    picked target keeps only its largest proposer, leaving directed paths and
    cycles; endpoint roles (and a fair coin at degree-2 vertices) select an
    edge set where consecutive edges never both survive.  Returns matched
    index pairs, oriented proposer -> target.
    """
    if g.n <= _SCALAR_LIMIT:
        return _match_round_scalar(g, u1, u2, matched, rand, round_index)
    return _match_round_vector(g, u1, u2, matched, rand, round_index)


def match_round(
    g: Graph,
    u1,
    u2,
    matching: Matching | tuple[tuple[int, int], ...],
    rand: NodeRandomness,
    round_index: int,
) -> tuple[tuple[int, int], ...]:
    """Public wrapper over vertex ids; returns new edges as sorted id pairs."""
    m1 = to_mask(g, u1)
    m2 = to_mask(g, u2)
    matched = np.zeros(g.n, dtype=bool)
    edges = matching.edges if isinstance(matching, Matching) else matching
    for a, b in edges:
        matched[g.index_of(a)] = True
        matched[g.index_of(b)] = True
    pairs = _match_round(g, m1, m2, matched, rand, round_index)
    out = []
    for i, j in pairs.tolist():
        a, b = int(g.ids[i]), int(g.ids[j])
        out.append((a, b) if a < b else (b, a))
    return tuple(sorted(out))


def _apply_pairs(pairs: np.ndarray, matched: np.ndarray, store: list) -> None:
    for i, j in pairs.tolist():
        matched[i] = True
        matched[j] = True
        store.append((i, j))


def mm_phase1(
    g: Graph,
    params: MmParams,
    rand: NodeRandomness,
    trace: Trace | None = None,
    observer: Callable[[int, np.ndarray, np.ndarray], None] | None = None,
) -> tuple[list[tuple[int, int]], np.ndarray, Trace]:
    """Run the staged match schedule; returns (edge index pairs, residual mask, trace).

    `observer`, when given, is called as observer(stage, active_mask, active_degrees)
    at the start of every stage and once more after the last stage ends.
    """
    if trace is None:
        trace = Trace(default_round_cap(g.n))
    matched = np.zeros(g.n, dtype=bool)
    edges: list[tuple[int, int]] = []
    stages = params.stage_count()
    # The schedule is oblivious: every stage runs and is charged even after
    # the matching saturates, so round totals depend only on delta and n.
    for i in range(stages):
        active = ~matched
        deg = member_degrees(g, active)
        if observer is not None:
            observer(i, active.copy(), deg)
        delta_i, tau_i, _ = params.stage_params(i)
        v_lo = active & (deg <= tau_i)
        v_hi = active & (deg > delta_i)
        pairs = _match_round(g, v_lo, v_hi, matched, rand, trace.rounds_total)
        _apply_pairs(pairs, matched, edges)
        trace.charge(
            "phase1", f"stage{i}-lo-hi", 3,
            active=int((~matched).sum()), matched=2 * len(edges),
        )
        pairs = _match_round(g, active, active, matched, rand, trace.rounds_total)
        _apply_pairs(pairs, matched, edges)
        trace.charge(
            "phase1", f"stage{i}-inner", 3,
            active=int((~matched).sum()), matched=2 * len(edges),
        )
    if observer is not None:
        # One trailing call so consecutive observations always bracket a stage.
        residual = ~matched
        observer(stages, residual.copy(), member_degrees(g, residual))
    return edges, ~matched, trace


def maximal_matching(g: Graph, cfg: TrialConfig) -> tuple[Matching, Trace]:
    """Full pipeline: staged randomized matching, then gather-and-solve on
    every residual component (charged as the max over components, since they
    run side by side)."""
    params = MmParams(delta=g.max_degree, n=g.n, c1=cfg.c1, c2=cfg.c2, rho=cfg.rho)
    rand = NodeRandomness(cfg.seed)
    trace = Trace(cfg.cap_for(g.n))
    edges, residual, _ = mm_phase1(g, params, rand, trace)

    comps = _component_index_lists(g, residual)
    size_bound = math.log2(max(g.n, 2)) ** 9
    costs = []
    for comp in comps:
        mask = np.zeros(g.n, dtype=bool)
        mask[comp] = True
        if len(comp) > size_bound:
            trace.bump("mm_oversize_components")
        res = gather_and_solve(g, mask, "mm")
        for a, b in res.solution:
            edges.append((int(g.index_of(a)), int(g.index_of(b))))
        costs.append(res.rounds)
    trace.flags.setdefault("mm_residual_components", len(comps))
    if costs:
        trace.charge("phase2", "gather-finish", max(costs), matched=2 * len(edges))

    id_edges = []
    for i, j in edges:
        a, b = int(g.ids[i]), int(g.ids[j])
        id_edges.append((a, b) if a < b else (b, a))
    return Matching(tuple(sorted(id_edges))), trace
