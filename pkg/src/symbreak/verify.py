"""Verification oracles, written straight from the definitions.

Each checker is a single pass over edges or vertices and shares no logic
with the algorithm modules; residual_stats reuses only the structural
component report from graphcore.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphcore import Graph, components, member_degrees, to_mask

__all__ = [
    "MatchingCheck",
    "MisCheck",
    "ColoringCheck",
    "ResidualStats",
    "check_matching",
    "check_mis",
    "check_coloring",
    "residual_stats",
]


@dataclass(frozen=True)
class MatchingCheck:
    valid_matching: bool
    maximal: bool


@dataclass(frozen=True)
class MisCheck:
    independent: bool
    maximal: bool


@dataclass(frozen=True)
class ColoringCheck:
    proper: bool
    total: bool
    within_palette: bool


def _edge_pairs(matching) -> list[tuple[int, int]]:
    edges = getattr(matching, "edges", matching)
    return [(int(a), int(b)) for a, b in edges]


def check_matching(g: Graph, matching) -> MatchingCheck:
    """valid: every pair is an edge and no vertex repeats; maximal: no edge
    of the graph has both endpoints unmatched."""
    pairs = _edge_pairs(matching)
    seen: set[int] = set()
    valid = True
    for a, b in pairs:
        ia, ib = g.index_of(a), g.index_of(b)
        if (a == b or ia >= g.n or ib >= g.n
                or int(g.ids[ia]) != a or int(g.ids[ib]) != b
                or not g.has_edge(ia, ib)
                or a in seen or b in seen):
            valid = False
            break
        seen.add(a)
        seen.add(b)
    if not valid:
        return MatchingCheck(False, False)
    u, v = g.edge_index_pairs()
    if u.size:
        covered = np.zeros(g.n, dtype=np.bool_)
        if seen:
            covered[g.index_of(np.fromiter(seen, dtype=np.int64))] = True
        maximal = bool(np.all(covered[u] | covered[v]))
    else:
        maximal = True
    return MatchingCheck(True, maximal)


def check_mis(g: Graph, member_ids) -> MisCheck:
    """independent: no edge inside the set; maximal: every outside vertex
    has a neighbor inside."""
    members = frozenset(int(i) for i in member_ids)
    try:
        mask = to_mask(g, members)
    except ValueError:
        return MisCheck(False, False)
    u, v = g.edge_index_pairs()
    independent = not bool(np.any(mask[u] & mask[v])) if u.size else True
    if not independent:
        return MisCheck(False, False)
    dominated = mask | (member_degrees(g, mask) > 0)
    return MisCheck(True, bool(np.all(dominated)))


def check_coloring(g: Graph, coloring, k: int) -> ColoringCheck:
    """coloring: mapping id -> color (anything with .items()); k: palette is 1..k."""
    items = coloring.colors if hasattr(coloring, "colors") else coloring
    col = np.zeros(g.n, dtype=np.int64)
    known_ids = True
    for vid, q in items.items():
        idx = g.index_of(int(vid))
        if idx >= g.n or int(g.ids[idx]) != int(vid):
            known_ids = False
            break
        col[idx] = int(q)
    if not known_ids:
        return ColoringCheck(False, False, False)
    total = bool(np.all(col != 0))
    within = bool(np.all((col >= 1) & (col <= k))) if total else bool(
        np.all((col == 0) | ((col >= 1) & (col <= k))))
    u, v = g.edge_index_pairs()
    if u.size:
        both = (col[u] != 0) & (col[v] != 0)
        proper = not bool(np.any(both & (col[u] == col[v])))
    else:
        proper = True
    return ColoringCheck(proper, total, within)


@dataclass(frozen=True)
class ResidualStats:
    sizes: tuple[int, ...]
    weak_diameters: tuple[int, ...]
    max_residual_degree: int
    size_bound_mm: float          # (log2 n)^9
    size_bound_mm_ok: bool
    weak_diameter_bound: float    # 5 * sqrt(log2 n)
    weak_diameter_ok: bool
    size_bound_variant2: float    # delta_ref^4 * log2 n
    size_bound_variant2_ok: bool


def residual_stats(g: Graph, active, delta_ref: int) -> ResidualStats:
    """Component statistics of the active residual, with the size and
    weak-diameter criteria evaluated against the reference degree bound."""
    mask = to_mask(g, active)
    rep = components(g, mask)
    sizes = tuple(rep.sizes())
    wds = tuple(rep.weak_diameters())
    ln = math.log2(max(g.n, 2))
    max_deg = int(member_degrees(g, mask)[mask].max()) if mask.any() else 0
    size_mm = ln ** 9
    wd_bound = 5.0 * math.sqrt(ln)
    size_v2 = float(delta_ref) ** 4 * ln
    return ResidualStats(
        sizes=sizes,
        weak_diameters=wds,
        max_residual_degree=max_deg,
        size_bound_mm=size_mm,
        size_bound_mm_ok=all(s <= size_mm for s in sizes),
        weak_diameter_bound=wd_bound,
        weak_diameter_ok=all(w < wd_bound for w in wds),
        size_bound_variant2=size_v2,
        size_bound_variant2_ok=all(s < size_v2 for s in sizes),
    )
