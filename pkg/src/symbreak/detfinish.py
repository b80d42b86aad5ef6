"""Deterministic finishing for small residual components.

A component elects its minimum-id vertex as leader, the leader gathers the
induced topology plus any external constraints, solves greedily in ascending
id order, and broadcasts the answer.  The round charge is
2 * (induced diameter) + 2: messages stay inside the component, so the
induced rather than the weak diameter prices the gather and the broadcast;
both diameters are reported for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphcore import Graph, bfs_distances, to_mask

__all__ = ["GatherResult", "gather_and_solve"]

PROBLEMS = ("mis", "mm", "coloring")


@dataclass(frozen=True)
class GatherResult:
    solution: object           # frozenset of ids (mis), edge tuple (mm), dict id->color (coloring)
    rounds: int
    size: int
    leader: int
    induced_diameter: int
    weak_diameter: int


def gather_and_solve(g: Graph, component, problem: str, *,
                     palette: int | None = None,
                     forbidden: dict[int, frozenset[int]] | None = None,
                     blocked=None,
                     measure_weak: bool = True) -> GatherResult:
    """Solve one connected residual component deterministically.

    component : ids or mask of the component's vertices (must be connected
                in the induced subgraph)
    problem   : "mis" | "mm" | "coloring"
    palette   : coloring only, colors are 1..palette
    forbidden : coloring only, id -> externally banned colors
    blocked   : mis only, ids or mask of vertices barred from joining
                (e.g. already adjacent to an outside member)
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    mask = to_mask(g, component)
    comp = np.flatnonzero(mask).tolist()
    if not comp:
        raise ValueError("empty component")

    if len(comp) == 1:
        d_ind = 0
        wd = 0
    else:
        d_ind = 0
        for s in comp:
            dist = bfs_distances(g, s, within=mask)
            dc = dist[comp]
            if np.any(dc < 0):
                raise ValueError("component is not connected in the induced subgraph")
            d_ind = max(d_ind, int(dc.max()))
        wd = _weak_diameter_checked(g, comp, mask) if measure_weak else d_ind

    leader = int(g.ids[comp[0]])  # comp is ascending, so this is the min id
    adj = g.adj_lists()

    if problem == "mis":
        blocked_mask = to_mask(g, blocked) if blocked is not None else np.zeros(g.n, dtype=np.bool_)
        chosen = set()
        for v in comp:
            if blocked_mask[v]:
                continue
            if not any(w in chosen for w in adj[v] if mask[w]):
                chosen.add(v)
        solution = frozenset(int(g.ids[v]) for v in chosen)
    elif problem == "mm":
        matched = {}
        for v in comp:
            if v in matched:
                continue
            for w in adj[v]:
                if mask[w] and w not in matched and w != v:
                    matched[v] = w
                    matched[w] = v
                    break
        pairs = sorted({(min(a, b), max(a, b)) for a, b in matched.items()})
        solution = tuple((int(g.ids[a]), int(g.ids[b])) for a, b in pairs)
    else:
        if palette is None or palette < 1:
            raise ValueError("coloring needs a positive palette size")
        forbidden = forbidden or {}
        colors: dict[int, int] = {}
        for v in comp:
            vid = int(g.ids[v])
            banned = set(forbidden.get(vid, ()))
            for w in adj[v]:
                if mask[w]:
                    wid = int(g.ids[w])
                    if wid in colors:
                        banned.add(colors[wid])
            q = next((q for q in range(1, palette + 1) if q not in banned), None)
            if q is None:
                raise ValueError(f"palette exhausted at vertex {vid}")
            colors[vid] = q
        solution = colors

    return GatherResult(solution=solution, rounds=2 * d_ind + 2, size=len(comp),
                        leader=leader, induced_diameter=d_ind, weak_diameter=wd)


def _weak_diameter_checked(g: Graph, comp: list[int], mask: np.ndarray) -> int:
    targets = mask
    best = 0
    for s in comp:
        dist = bfs_distances(g, s, stop_mask=targets)
        dc = dist[comp]
        best = max(best, int(dc.max()))
    return best
