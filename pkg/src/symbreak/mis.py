"""Randomized maximal independent set.

The general routine repeatedly halves the degree bound: each halving runs a
short burst of selection stages, then gathers whatever still has large degree
and solves those components at a leader.  Specializations exist for forests
and for graphs of girth above six.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .detfinish import gather_and_solve
from .engine import NodeRandomness, Trace, TrialConfig, default_round_cap
from .graphcore import (
    Graph,
    _component_index_lists,
    degeneracy,
    girth,
    member_degrees,
    neighbor_any,
    row_max_slots,
    to_mask,
)

_SCALAR_LIMIT = 128


@dataclass(frozen=True)
class IndependentSet:
    members: frozenset[int]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, vid: int) -> bool:
        return vid in self.members


@dataclass(frozen=True)
class HalveConfig:
    """Stage budget and component acceptance rules for one halving call.

    n_ref is the vertex count of the host graph, which stays fixed even when
    halving runs on an induced subgraph.
    """

    n_ref: int
    c6: float = 4.0
    variant: str = "weak-diameter"  # or "small-components"

    def __post_init__(self) -> None:
        if self.n_ref < 1:
            raise ValueError("n_ref must be positive")
        if self.c6 <= 0:
            raise ValueError("c6 must be positive")
        if self.variant not in ("weak-diameter", "small-components"):
            raise ValueError(f"unknown variant {self.variant!r}")

    def stage_count(self, delta: int) -> int:
        if self.variant == "weak-diameter":
            k = self.c6 * math.sqrt(math.log2(max(self.n_ref, 2)))
        else:
            k = self.c6 * math.log2(max(delta, 2))
        return max(1, int(math.ceil(k)))

    def weak_diameter_bound(self) -> float:
        return 5.0 * math.sqrt(math.log2(max(self.n_ref, 2)))

    def size_bound(self, delta: int) -> float:
        return float(delta) ** 4 * math.log2(max(self.n_ref, 2))


def _halve_stage_scalar(g, active, delta, rand, round_index):
    adj = g.adj_lists()
    ids = g.ids.tolist()
    p = 1.0 / (delta + 1)
    sel = [
        v for v in range(g.n)
        if active[v] and rand.unit(ids[v], round_index, 0) < p
    ]
    in_sel = [False] * g.n
    for v in sel:
        in_sel[v] = True
    joined = np.zeros(g.n, dtype=bool)
    for v in sel:
        if not any(in_sel[w] for w in adj[v]):
            joined[v] = True
    return joined


def _halve_stage_vector(g, active, delta, rand, round_index):
    p = 1.0 / (delta + 1)
    units = rand.units(g.ids, round_index, 0)
    sel = active & (units < p)
    return sel & ~neighbor_any(g, sel)


def _halve_stage(g, active, delta, rand, round_index):
    """One 2-round selection stage: active vertices self-select with
    probability 1/(delta+1) and join when no neighbor also selected."""
    if g.n <= _SCALAR_LIMIT:
        return _halve_stage_scalar(g, active, delta, rand, round_index)
    return _halve_stage_vector(g, active, delta, rand, round_index)


def halve_stage(g: Graph, active, delta: int, rand: NodeRandomness,
                round_index: int) -> frozenset[int]:
    """Public wrapper over vertex ids; returns the ids that joined."""
    mask = to_mask(g, active)
    joined = _halve_stage(g, mask, delta, rand, round_index)
    return frozenset(int(x) for x in g.ids[joined])


def halve(
    g: Graph,
    delta: int,
    hcfg: HalveConfig,
    rand: NodeRandomness,
    trace: Trace,
    active: np.ndarray | None = None,
    in_set_base: int = 0,
) -> tuple[list[int], np.ndarray]:
    """Drive the maximum active degree below delta / 2.

    Runs the stage burst, then gathers every component of vertices whose
    active degree is still at least delta / 2 and solves them exactly.
    Returns (new member indices, residual active mask).  Mutates nothing
    passed in; charges all rounds to `trace`.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    active = np.ones(g.n, dtype=bool) if active is None else active.copy()
    members: list[int] = []

    def prune(joined: np.ndarray) -> None:
        members.extend(np.flatnonzero(joined).tolist())
        active[joined | neighbor_any(g, joined)] = False

    for s in range(hcfg.stage_count(delta)):
        if not active.any():
            break
        joined = _halve_stage(g, active, delta, rand, trace.rounds_total)
        if joined.any():
            prune(joined)
        trace.charge(
            "phase1", f"halve{delta}-stage{s}", 2,
            active=int(active.sum()), in_set=in_set_base + len(members),
        )

    deg = member_degrees(g, active)
    u_mask = active & (deg >= delta / 2.0)
    comps = _component_index_lists(g, u_mask)
    costs = []
    gathered = np.zeros(g.n, dtype=bool)
    ok = trace.flags.get("halve_criterion_ok", True)
    for comp in comps:
        mask = np.zeros(g.n, dtype=bool)
        mask[comp] = True
        res = gather_and_solve(g, mask, "mis")
        if hcfg.variant == "weak-diameter":
            ok = ok and res.weak_diameter < hcfg.weak_diameter_bound()
        else:
            ok = ok and res.size < hcfg.size_bound(delta)
        for vid in res.solution:
            gathered[g.index_of(vid)] = True
        costs.append(res.rounds)
    trace.bump("halve_components", len(comps))
    trace.flags["halve_criterion_ok"] = ok
    if comps:
        active[u_mask] = False
        prune(gathered)
        trace.charge(
            "phase2", f"halve{delta}-gather", max(costs),
            active=int(active.sum()), in_set=in_set_base + len(members),
        )

    if active.any():
        resid = member_degrees(g, active)[active]
        held = bool(resid.max() < delta / 2.0)
    else:
        held = True
    trace.flags["halve_residual_ok"] = trace.flags.get("halve_residual_ok", True) and held
    return members, active


def _mis_core(g, cfg, rand, trace, n_ref, members_out) -> None:
    """Halving loop on `g`, appending internal indices to members_out."""
    active = np.ones(g.n, dtype=bool)
    delta = max(int(g.max_degree), 1)
    while active.any():
        deg = member_degrees(g, active)
        if not np.any(deg[active] > 0):
            # Everything left is isolated in the active graph; all of it joins.
            members_out.extend(np.flatnonzero(active).tolist())
            trace.charge("phase1", "isolated-join", 1,
                         active=0, in_set=len(members_out))
            break
        hcfg = HalveConfig(n_ref=n_ref, c6=cfg.c6, variant=cfg.variant)
        new, active = halve(g, delta, hcfg, rand, trace, active,
                            in_set_base=len(members_out))
        members_out.extend(new)
        delta = max(delta // 2, 1)


def mis_general(g: Graph, cfg: TrialConfig) -> tuple[IndependentSet, Trace]:
    rand = NodeRandomness(cfg.seed)
    trace = Trace(cfg.cap_for(g.n))
    members: list[int] = []
    _mis_core(g, cfg, rand, trace, g.n, members)
    return IndependentSet(frozenset(int(g.ids[i]) for i in members)), trace


# -- local-maxima rounds ------------------------------------------------------

def _local_maxima_round_scalar(g, active, rand, round_index):
    adj = g.adj_lists()
    ids = g.ids.tolist()
    vals = {
        v: rand.draw(ids[v], round_index, 0)
        for v in range(g.n) if active[v]
    }
    joined = np.zeros(g.n, dtype=bool)
    for v, mine in vals.items():
        wins = True
        for w in adj[v]:
            if active[w]:
                other = vals[w]
                if other > mine or (other == mine and w > v):
                    wins = False
                    break
        joined[v] = wins
    return joined


def _local_maxima_round_vector(g, active, rand, round_index):
    vals = rand.draws(g.ids, round_index, 0)
    slot_active = active[g.indices]
    slot_vals = np.where(slot_active, vals[g.indices], np.uint64(0))
    best = row_max_slots(g, slot_vals, np.uint64(0))
    has = member_degrees(g, active) > 0
    tie_idx = np.where(slot_active & (vals[g.indices] == best[g.slot_owner]),
                       g.indices, np.int64(-1))
    best_tie = row_max_slots(g, tie_idx, np.int64(-1))
    idx = np.arange(g.n, dtype=np.int64)
    return active & (~has | (vals > best) | ((vals == best) & (idx > best_tie)))


def _local_maxima_round(g, active, rand, round_index):
    """One 2-round step: active vertices exchange 64-bit draws and join when
    strictly greatest, with larger index breaking value ties."""
    if g.n <= _SCALAR_LIMIT:
        return _local_maxima_round_scalar(g, active, rand, round_index)
    return _local_maxima_round_vector(g, active, rand, round_index)


def local_maxima_round(g: Graph, active, rand: NodeRandomness,
                       round_index: int) -> frozenset[int]:
    """Public wrapper over vertex ids; returns the ids that joined."""
    mask = to_mask(g, active)
    joined = _local_maxima_round(g, mask, rand, round_index)
    return frozenset(int(x) for x in g.ids[joined])


class LocalMaximaProtocol:
    """Per-node form of the local-maxima rule for the lockstep runner.

    Alternates a bid step (broadcast the draw, winners join) with a resolve
    step (joiners announce themselves, neighbors drop out).  Output and draw
    usage match the fused array driver exactly.
    """

    round_cost = 1

    def init(self, v, ctx):
        return "active"

    def message(self, v, state, ctx):
        if ctx.round_index % 2 == 0:
            return ("bid", ctx.draw(v, 0)) if state == "active" else None
        return ("state", state)

    def transition(self, v, state, inbox, ctx):
        if ctx.round_index % 2 == 0:
            if state != "active":
                return state
            mine = (ctx.draw(v, 0), v)
            for u, msg in inbox:
                if msg[0] == "bid" and (msg[1], u) > mine:
                    return "active"
            return "in_set"
        if state == "active":
            for u, msg in inbox:
                if msg == ("state", "in_set"):
                    return "covered"
        return state

    def is_done(self, v, state):
        return state != "active"

    def output(self, states, g):
        return frozenset(int(g.ids[v]) for v, s in enumerate(states) if s == "in_set")

    def gauges(self, states):
        return {
            "active": sum(s == "active" for s in states),
            "in_set": sum(s == "in_set" for s in states),
        }


def _exhaust_local_maxima(g, mask, active, members, rand, trace, label,
                          in_set_base=0):
    """Run local-maxima steps on mask & active until that set empties."""
    rounds = 0
    while True:
        cur = mask & active
        if not cur.any():
            return
        joined = _local_maxima_round(g, cur, rand, trace.rounds_total)
        members.extend(np.flatnonzero(joined).tolist())
        active[joined | neighbor_any(g, joined)] = False
        trace.charge("phase1", f"{label}{rounds}", 2,
                     active=int(active.sum()), in_set=in_set_base + len(members))
        rounds += 1


# -- girth above six ----------------------------------------------------------

def mis_high_girth(g: Graph, cfg: TrialConfig) -> tuple[IndependentSet, Trace]:
    """MIS for graphs whose shortest cycle is longer than six.

    A short burst of local-maxima steps clears most of the graph; survivors
    split by degree, and each side finishes with the general halving loop on
    its induced subgraph.
    """
    if g.m and girth(g, cap=6) <= 6:
        raise ValueError("graph has a cycle of length at most 6")
    rand = NodeRandomness(cfg.seed)
    trace = Trace(cfg.cap_for(g.n))
    active = np.ones(g.n, dtype=bool)
    members: list[int] = []
    dmax = int(g.max_degree)

    if dmax > 0:
        loglog = math.log2(math.log2(max(g.n, 4)))
        burst = max(1, int(math.ceil(cfg.c * math.log2(max(dmax, 2)) * max(loglog, 1.0))))
        trace.flags["girth_burst_length"] = burst
        for r in range(burst):
            deg = member_degrees(g, active)
            if not np.any(deg[active] > 0):
                break
            joined = _local_maxima_round(g, active, rand, trace.rounds_total)
            members.extend(np.flatnonzero(joined).tolist())
            active[joined | neighbor_any(g, joined)] = False
            trace.charge("phase1", f"girth-burst{r}", 2,
                         active=int(active.sum()), in_set=len(members))

    thr = cfg.c_prime * math.log2(max(g.n, 2))
    deg = member_degrees(g, active)
    high = active & (deg >= thr)
    trace.flags["girth_high_degree_survivors"] = int(high.sum())
    for part in (high, None):
        cur = (part if part is not None else active) & active
        if not cur.any():
            continue
        sub = g.subgraph(cur)
        sub_members: list[int] = []
        _mis_core(sub, cfg, rand, trace, g.n, sub_members)
        idxs = g.index_of(sub.ids[sub_members])
        members.extend(int(x) for x in idxs)
        jm = np.zeros(g.n, dtype=bool)
        jm[idxs] = True
        active[cur | neighbor_any(g, jm)] = False

    return IndependentSet(frozenset(int(g.ids[i]) for i in members)), trace


# -- forests -------------------------------------------------------------------

def mis_tree(g: Graph, cfg: TrialConfig) -> tuple[IndependentSet, Trace]:
    """MIS for forests.

    High max degree is first knocked down by the arboricity-based reducer
    (forests have arboricity 1).  Epochs of local-maxima steps follow; after
    each epoch, vertices that kept too many high-degree neighbors for the
    epoch's depth are set aside as bad.  Good survivors finish by degree
    class, and the bad components, which by then touch no undecided good
    vertices, are gathered and solved exactly.
    """
    if g.m and degeneracy(g) > 1:
        raise ValueError("input graph is not a forest")
    rand = NodeRandomness(cfg.seed)
    trace = Trace(cfg.cap_for(g.n))
    active = np.ones(g.n, dtype=bool)
    members: list[int] = []
    n = g.n

    loglog = max(math.log2(math.log2(max(n, 4))), 1.0)
    pre_threshold = 2.0 ** math.sqrt(math.log2(max(n, 4)) / loglog)
    if g.max_degree > pre_threshold:
        from .arbreduce import ArbConfig, _degree_reduce_into

        t = 2 ** max(7, int(math.ceil(math.sqrt(math.log2(max(n, 4)) / loglog))))
        acfg = ArbConfig(lam=1, t=t, mode="mis", c=cfg.c)
        additions, active, _ = _degree_reduce_into(g, acfg, rand, trace)
        members.extend(additions)
        trace.flags["tree_prereduced"] = True

    deg = member_degrees(g, active)
    dmax = int(deg[active].max()) if active.any() else 0
    if dmax > 0:
        epochs = max(1, int(math.ceil(math.log2(max(dmax, 2)))))
        epoch_len = max(1, int(math.ceil(cfg.c * math.log2(math.log2(max(dmax, 4))))))
        depth_max = int(math.ceil(math.log2(max(dmax, 2))))
        base = cfg.c_prime * math.log2(max(dmax, 2))
        bad = np.zeros(n, dtype=bool)

        for i in range(1, epochs + 1):
            part = active & ~bad
            if not np.any(member_degrees(g, part)[part] > 0):
                break
            for _ in range(epoch_len):
                part = active & ~bad
                if not np.any(member_degrees(g, part)[part] > 0):
                    break
                joined = _local_maxima_round(g, part, rand, trace.rounds_total)
                members.extend(np.flatnonzero(joined).tolist())
                active[joined | neighbor_any(g, joined)] = False
                trace.charge("phase1", f"epoch{i}-step", 2,
                             active=int(active.sum()), in_set=len(members))
            # Mark vertices that still see crowds of high-degree neighbors at
            # any depth scale; they wait for exact treatment at the end.
            part = active & ~bad
            dcur = member_degrees(g, part)
            viol = np.zeros(n, dtype=bool)
            for dexp in range(1, depth_max + 1):
                heavy = part & (dcur > dmax / 2.0 ** (i - dexp))
                crowd = member_degrees(g, heavy)
                bound = max(dmax / 2.0 ** (i + dexp), base)
                viol |= part & (crowd >= bound)
            bad |= viol

        trace.flags["tree_bad_marked"] = int(bad.sum())
        part = active & ~bad
        dpart = member_degrees(g, part)
        high = part & (dpart >= base)
        _exhaust_local_maxima(g, high, active, members, rand, trace, "tree-high")
        _exhaust_local_maxima(g, active & ~bad, active, members, rand, trace, "tree-low")

        rem = active.copy()
        comps = _component_index_lists(g, rem)
        costs = []
        largest = 0
        for comp in comps:
            mask = np.zeros(n, dtype=bool)
            mask[comp] = True
            res = gather_and_solve(g, mask, "mis")
            for vid in res.solution:
                members.append(int(g.index_of(vid)))
            costs.append(res.rounds)
            largest = max(largest, res.size)
        active[:] = False
        trace.flags["tree_bad_components"] = len(comps)
        trace.flags["tree_bad_component_max"] = largest
        if costs:
            trace.charge("phase2", "tree-bad-gather", max(costs),
                         active=0, in_set=len(members))

    if active.any():
        members.extend(np.flatnonzero(active).tolist())
        trace.charge("phase1", "isolated-join", 1, active=0, in_set=len(members))

    return IndependentSet(frozenset(int(g.ids[i]) for i in members)), trace
