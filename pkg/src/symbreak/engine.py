"""Synchronous lockstep execution: trial configuration, round accounting,
deterministic per-node randomness, and the per-node protocol runner.

Every random draw anywhere in the library is a pure function of
(seed, node id, round index, draw index), so a (graph, config) pair fully
determines outputs and traces.  Complexity is measured purely in rounds;
message size and local computation are never charged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

__all__ = [
    "rng_draw",
    "NodeRandomness",
    "TrialConfig",
    "Trace",
    "TraceRecord",
    "RoundCapExceeded",
    "default_round_cap",
    "run",
]

_MASK = (1 << 64) - 1
_K1 = 0x9E3779B97F4A7C15
_K2 = 0xD1B54A32D192ED03
_K3 = 0x8CB92BA72F3D8DD7
_K4 = 0xEB44ACCAB455D165


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def rng_draw(seed: int, node: int, rnd: int, k: int) -> int:
    """Deterministic uniform 64-bit value for (seed, node, round, draw index).

    Counter-style construction: each input is absorbed through a full
    avalanche mix, so adjacent coordinates give unrelated outputs.
    """
    z = _mix((seed ^ _K1) & _MASK)
    z = _mix((z ^ ((node * _K2 + 1) & _MASK)))
    z = _mix((z ^ ((rnd * _K3 + 1) & _MASK)))
    z = _mix((z ^ ((k * _K4 + 1) & _MASK)))
    return z


class NodeRandomness:
    """Per-node random streams for one seed, scalar and vectorized forms.

    The array methods match rng_draw bit for bit; nodes are identified by
    their ids, never internal indices, so streams survive subgraphing.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._z0 = np.uint64(_mix((self.seed ^ _K1) & _MASK))

    def draw(self, node: int, rnd: int, k: int) -> int:
        return rng_draw(self.seed, node, rnd, k)

    def draws(self, node_ids: np.ndarray, rnd: int, k: int) -> np.ndarray:
        with np.errstate(over="ignore"):
            z = self._z0 ^ (node_ids.astype(np.uint64) * np.uint64(_K2) + np.uint64(1))
            z = self._mix_arr(z)
            z = self._mix_arr(z ^ np.uint64((rnd * _K3 + 1) & _MASK))
            z = self._mix_arr(z ^ np.uint64((k * _K4 + 1) & _MASK))
        return z

    def units(self, node_ids: np.ndarray, rnd: int, k: int) -> np.ndarray:
        """Uniform float64 in [0, 1), one per node id."""
        return (self.draws(node_ids, rnd, k) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)

    def unit(self, node: int, rnd: int, k: int) -> float:
        return (self.draw(node, rnd, k) >> 11) * (2.0 ** -53)

    @staticmethod
    def _mix_arr(z: np.ndarray) -> np.ndarray:
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def default_round_cap(n: int) -> int:
    return int(64 * (math.log2(max(n, 1)) + 2) ** 2)


_ALGORITHMS = ("mm", "mis", "mis-tree", "mis-girth", "coloring", "arb-reduce")


@dataclass(frozen=True)
class TrialConfig:
    """Everything one trial needs beyond the graph itself."""

    seed: int = 0
    algorithm: str = "mis"
    c1: float = 1.0
    c2: float = 4.0
    c6: float = 4.0
    c7: float = 1.0
    c: float = 2.0
    c_prime: float = 4.0
    rho: float = math.sqrt(8.0 / 7.0)
    variant: str = "weak-diameter"  # or "small-components"
    arb_lambda: int | None = None
    arb_t: int | None = None
    arb_mode: str = "mis"  # or "mm"
    max_rounds: int | None = None

    def __post_init__(self):
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {_ALGORITHMS}")
        for name in ("c1", "c2", "c6", "c7", "c", "c_prime"):
            if getattr(self, name) <= 0:
                raise ValueError(f"constant {name} must be positive")
        if not (1.0 < self.rho ** 2 < 2.0):
            raise ValueError("rho must satisfy 1 < rho^2 < 2")
        if self.variant not in ("weak-diameter", "small-components"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.arb_mode not in ("mis", "mm"):
            raise ValueError(f"unknown arb mode {self.arb_mode!r}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")

    def cap_for(self, n: int) -> int:
        return self.max_rounds if self.max_rounds is not None else default_round_cap(n)

    def with_seed(self, seed: int) -> "TrialConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class TraceRecord:
    round_end: int  # cumulative rounds after this record
    phase: str
    step: str
    rounds: int
    active: int = 0
    matched: int = 0
    in_set: int = 0
    colored: int = 0


class RoundCapExceeded(RuntimeError):
    """Raised when cumulative charged rounds pass the safety cap.

    Carries the partial trace so an aborted trial can still be reported.
    """

    def __init__(self, trace: "Trace", phase: str, step: str):
        super().__init__(f"round cap {trace.cap} exceeded at {phase}/{step}")
        self.trace = trace


class Trace:
    """Ordered per-round records plus free-form counters ("flags")."""

    def __init__(self, cap: int):
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self.cap = int(cap)
        self.records: list[TraceRecord] = []
        self.flags: dict[str, Any] = {}
        self._total = 0

    @property
    def rounds_total(self) -> int:
        return self._total

    def charge(self, phase: str, step: str, rounds: int, *, active: int = 0,
               matched: int = 0, in_set: int = 0, colored: int = 0) -> None:
        if rounds < 1:
            raise ValueError("every trace record must charge at least one round")
        if self._total + rounds > self.cap:
            self._total = self.cap
            raise RoundCapExceeded(self, phase, step)
        self._total += int(rounds)
        self.records.append(TraceRecord(self._total, phase, step, int(rounds),
                                        int(active), int(matched), int(in_set), int(colored)))

    def phase_totals(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for rec in self.records:
            out[rec.phase] = out.get(rec.phase, 0) + rec.rounds
        return out

    def bump(self, flag: str, amount: int = 1) -> None:
        self.flags[flag] = self.flags.get(flag, 0) + amount

    def rows(self) -> list[tuple]:
        return [(r.round_end, r.phase, r.step, r.rounds, r.active, r.matched, r.in_set, r.colored)
                for r in self.records]


# -- per-node protocol execution ---------------------------------------------

class StepContext:
    """What a transition function may see besides its own state and inbox."""

    __slots__ = ("n", "max_degree", "round_index", "_rand", "_ids")

    def __init__(self, n, max_degree, round_index, rand, ids):
        self.n = n
        self.max_degree = max_degree
        self.round_index = round_index
        self._rand = rand
        self._ids = ids

    def draw(self, v: int, k: int) -> int:
        return self._rand.draw(int(self._ids[v]), self.round_index, k)

    def unit(self, v: int, k: int) -> float:
        return self._rand.unit(int(self._ids[v]), self.round_index, k)


def run(protocol, g, cfg: TrialConfig):
    """Run a per-node protocol in synchronous lockstep.

    The protocol object provides:
      round_cost              rounds charged per lockstep exchange (default 1)
      init(v, ctx) -> state
      message(v, state, ctx) -> value broadcast to neighbors (None = silent)
      transition(v, state, inbox, ctx) -> state, with inbox = [(u, msg), ...]
      is_done(v, state) -> bool
      output(states, g) -> artifact
      gauges(states) -> dict (optional)

    Locality is structural: a transition sees its own state, its inbox, and
    the shared context only.  Returns (output, Trace).
    """
    trace = Trace(cap=cfg.cap_for(g.n))
    rand = NodeRandomness(cfg.seed)
    cost = getattr(protocol, "round_cost", 1)
    adj = g.adj_lists()
    ctx = StepContext(g.n, g.max_degree, 0, rand, g.ids)
    states = [protocol.init(v, ctx) for v in range(g.n)]
    done = [protocol.is_done(v, states[v]) for v in range(g.n)]
    while not all(done):
        ctx = StepContext(g.n, g.max_degree, trace.rounds_total, rand, g.ids)
        msgs = [protocol.message(v, states[v], ctx) for v in range(g.n)]
        new_states = list(states)
        for v in range(g.n):
            if done[v]:
                continue
            inbox = [(u, msgs[u]) for u in adj[v] if msgs[u] is not None]
            new_states[v] = protocol.transition(v, states[v], inbox, ctx)
        states = new_states
        done = [protocol.is_done(v, states[v]) for v in range(g.n)]
        gauges = protocol.gauges(states) if hasattr(protocol, "gauges") else {}
        trace.charge("protocol", f"step{trace.rounds_total}", cost, **gauges)
    return protocol.output(states, g), trace
