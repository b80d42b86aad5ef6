"""Immutable graph storage, file format, generators, and structural metrics.

Graphs are undirected and simple, over distinct non-negative integer ids.
Storage is CSR-style (indptr/indices) with internal vertex indices assigned
in ascending id order, so comparing internal indices is the same as
comparing ids.  Most per-round helpers here are mask-based so the algorithm
modules can run a whole round as a handful of array operations.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Graph",
    "GraphParseError",
    "MalformedLineError",
    "SelfLoopError",
    "DuplicateEdgeError",
    "IdRangeError",
    "load_graph",
    "dump_graph",
    "load_graph_file",
    "save_graph_file",
    "gen_forest_union",
    "gen_tree",
    "gen_degree_capped",
    "gen_high_girth",
    "gen_star_forest",
    "girth",
    "degeneracy",
    "components",
    "Component",
    "ComponentReport",
    "to_mask",
    "mask_ids",
    "member_degrees",
    "neighbor_sums",
    "neighbor_max",
    "neighbor_any",
    "kth_member_neighbor",
    "bfs_distances",
]


class GraphParseError(ValueError):
    """Base class for graph file format violations."""


class MalformedLineError(GraphParseError):
    pass


class SelfLoopError(GraphParseError):
    pass


class DuplicateEdgeError(GraphParseError):
    pass


class IdRangeError(GraphParseError):
    pass


class Graph:
    """Undirected simple graph with immutable CSR adjacency.

    Attributes
    ----------
    ids     : int64 array, shape (n,), strictly increasing vertex ids
    indptr  : int64 array, shape (n+1,), CSR row pointers
    indices : int64 array, neighbor internal indices, sorted within each row
    m       : number of undirected edges
    """

    __slots__ = ("ids", "indptr", "indices", "m", "_deg", "_adj", "_owner")

    def __init__(self, ids: np.ndarray, indptr: np.ndarray, indices: np.ndarray):
        self.ids = ids
        self.indptr = indptr
        self.indices = indices
        self.m = int(len(indices) // 2)
        self._deg = np.diff(indptr)
        self._adj = None
        self._owner = None
        for arr in (self.ids, self.indptr, self.indices, self._deg):
            arr.setflags(write=False)

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(cls, ids: Iterable[int], edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from explicit vertex ids and id pairs.

        Ids need not be contiguous.  Raises GraphParseError subclasses on
        self-loops, duplicate edges, or endpoints outside `ids`.
        """
        id_arr = np.array(sorted(int(i) for i in ids), dtype=np.int64)
        if id_arr.size and (np.any(id_arr < 0) or np.any(np.diff(id_arr) == 0)):
            raise IdRangeError("vertex ids must be distinct non-negative integers")
        edge_list = [(int(a), int(b)) for a, b in edges]
        if edge_list and id_arr.size == 0:
            raise IdRangeError("edges given but no vertex ids")
        if not edge_list:
            u = np.empty(0, dtype=np.int64)
            v = np.empty(0, dtype=np.int64)
        else:
            ea = np.array(edge_list, dtype=np.int64)
            u = np.searchsorted(id_arr, ea[:, 0])
            v = np.searchsorted(id_arr, ea[:, 1])
            n = id_arr.size
            bad = (
                (u >= n) | (v >= n)
                | (id_arr[np.minimum(u, n - 1)] != ea[:, 0])
                | (id_arr[np.minimum(v, n - 1)] != ea[:, 1])
            )
            if np.any(bad):
                raise IdRangeError(f"edge endpoint not a listed vertex id: {edge_list[int(np.flatnonzero(bad)[0])]}")
        return cls._from_index_pairs(id_arr, u, v)

    @classmethod
    def from_contiguous(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph on ids 0..n-1."""
        return cls.from_edges(range(n), edges)

    @classmethod
    def _from_index_pairs(cls, id_arr: np.ndarray, u: np.ndarray, v: np.ndarray) -> "Graph":
        n = id_arr.size
        if u.size:
            if np.any(u == v):
                raise SelfLoopError("self-loop")
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            key = lo * n + hi
            order = np.argsort(key, kind="stable")
            key = key[order]
            if np.any(np.diff(key) == 0):
                dup = int(np.flatnonzero(np.diff(key) == 0)[0])
                a, b = divmod(int(key[dup]), n)
                raise DuplicateEdgeError(f"duplicate edge ({int(id_arr[a])}, {int(id_arr[b])})")
            src = np.concatenate([lo, hi])
            dst = np.concatenate([hi, lo])
        else:
            src = np.empty(0, dtype=np.int64)
            dst = np.empty(0, dtype=np.int64)
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(id_arr, indptr, dst)

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return int(self.ids.size)

    @property
    def degrees(self) -> np.ndarray:
        return self._deg

    @property
    def max_degree(self) -> int:
        return int(self._deg.max()) if self.n else 0

    def neighbors(self, i: int) -> np.ndarray:
        """Internal indices of the neighbors of internal vertex i."""
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def neighbor_ids(self, i: int) -> np.ndarray:
        return self.ids[self.neighbors(i)]

    def adj_lists(self) -> list[list[int]]:
        """Plain-list adjacency (internal indices), built lazily and cached."""
        if self._adj is None:
            indptr = self.indptr.tolist()
            indices = self.indices.tolist()
            self._adj = [indices[indptr[i]:indptr[i + 1]] for i in range(self.n)]
        return self._adj

    @property
    def slot_owner(self) -> np.ndarray:
        """For each adjacency slot, the index of the vertex that owns the row."""
        if self._owner is None:
            self._owner = np.repeat(np.arange(self.n, dtype=np.int64), self._deg)
            self._owner.setflags(write=False)
        return self._owner

    def index_of(self, vid) -> int | np.ndarray:
        """Internal index for an id (or array of ids)."""
        idx = np.searchsorted(self.ids, vid)
        return int(idx) if np.isscalar(vid) else idx

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        pos = np.searchsorted(row, j)
        return pos < row.size and row[pos] == j

    def edge_index_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges once, as internal index arrays (u < v)."""
        keep = self.slot_owner < self.indices
        return self.slot_owner[keep], self.indices[keep]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate edges once as id pairs with u < v, lexicographically sorted."""
        u, v = self.edge_index_pairs()
        for a, b in zip(self.ids[u].tolist(), self.ids[v].tolist()):
            yield (a, b)

    def subgraph(self, members) -> "Graph":
        """Induced subgraph; keeps original ids."""
        mask = to_mask(self, members)
        keep = np.flatnonzero(mask)
        sub_ids = self.ids[keep]
        u, v = self.edge_index_pairs()
        e_keep = mask[u] & mask[v]
        new_of_old = np.full(self.n, -1, dtype=np.int64)
        new_of_old[keep] = np.arange(keep.size, dtype=np.int64)
        return Graph._from_index_pairs(sub_ids, new_of_old[u[e_keep]], new_of_old[v[e_keep]])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- vertex set helpers ----------------------------------------------------

def to_mask(g: Graph, members) -> np.ndarray:
    """Normalize an id iterable or boolean mask to a boolean mask."""
    if isinstance(members, np.ndarray) and members.dtype == np.bool_:
        if members.size != g.n:
            raise ValueError("mask length does not match vertex count")
        return members
    mask = np.zeros(g.n, dtype=np.bool_)
    ids = np.fromiter((int(i) for i in members), dtype=np.int64)
    if ids.size:
        idx = g.index_of(ids)
        if np.any(idx >= g.n) or np.any(g.ids[np.minimum(idx, g.n - 1)] != ids):
            raise ValueError("member id not in graph")
        mask[idx] = True
    return mask


def mask_ids(g: Graph, mask: np.ndarray) -> frozenset[int]:
    return frozenset(g.ids[mask].tolist())


# -- per-row CSR reductions -------------------------------------------------
# These all operate over "slots" (positions in g.indices) and reduce per row.
# Empty rows are handled explicitly; np.add style tricks via cumsum keep them
# O(m) regardless of how many rows are empty.

def _row_reduce_sum(g: Graph, slot_values: np.ndarray) -> np.ndarray:
    cs = np.concatenate(([0], np.cumsum(slot_values)))
    return cs[g.indptr[1:]] - cs[g.indptr[:-1]]


def member_degrees(g: Graph, mask: np.ndarray) -> np.ndarray:
    """Per-vertex count of neighbors inside `mask` (degree into a vertex set)."""
    return _row_reduce_sum(g, mask[g.indices].astype(np.int64))


def neighbor_sums(g: Graph, values: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
    """Per-vertex sum of `values` over neighbors, optionally restricted to `mask`."""
    slot_vals = values[g.indices]
    if mask is not None:
        slot_vals = np.where(mask[g.indices], slot_vals, 0)
    return _row_reduce_sum(g, slot_vals)


def neighbor_any(g: Graph, mask: np.ndarray) -> np.ndarray:
    """True where a vertex has at least one neighbor inside `mask`."""
    return member_degrees(g, mask) > 0


def neighbor_max(g: Graph, values: np.ndarray, mask: np.ndarray, empty) -> np.ndarray:
    """Per-vertex max of `values` over neighbors in `mask`; `empty` where none."""
    out = np.full(g.n, empty, dtype=values.dtype)
    slot_vals = np.where(mask[g.indices], values[g.indices], empty)
    nonempty = g.indptr[:-1] < g.indptr[1:]
    if np.any(nonempty):
        out[nonempty] = np.maximum.reduceat(slot_vals, g.indptr[:-1][nonempty])
    return out


def row_max_slots(g: Graph, slot_values: np.ndarray, empty) -> np.ndarray:
    """Per-row max over an arbitrary slot-aligned array; `empty` where the row
    has no slots."""
    out = np.full(g.n, empty, dtype=slot_values.dtype)
    nonempty = g.indptr[:-1] < g.indptr[1:]
    if np.any(nonempty):
        out[nonempty] = np.maximum.reduceat(slot_values, g.indptr[:-1][nonempty])
    return out


def kth_member_neighbor(g: Graph, mask: np.ndarray, rows: np.ndarray, k: np.ndarray) -> np.ndarray:
    """For each listed row, its k-th (0-based, ascending id) neighbor in `mask`.

    `rows` and `k` are aligned; caller guarantees k < member count per row.
    """
    elig = mask[g.indices].astype(np.int64)
    cs = np.concatenate(([0], np.cumsum(elig)))
    target = cs[g.indptr[:-1][rows]] + k + 1
    slot = np.searchsorted(cs, target, side="left") - 1
    return g.indices[slot]


# -- traversal --------------------------------------------------------------

def bfs_distances(g: Graph, source: int, within: np.ndarray | None = None,
                  stop_mask: np.ndarray | None = None) -> np.ndarray:
    """BFS distance array from internal vertex `source`.

    within    : optional mask; traversal never leaves it
    stop_mask : optional mask; search halts once every masked vertex is reached
    Unreached vertices get -1.
    """
    dist = np.full(g.n, -1, dtype=np.int64)
    if within is not None and not within[source]:
        return dist
    adj = g.adj_lists()
    dist[source] = 0
    remaining = int(stop_mask.sum()) if stop_mask is not None else -1
    if stop_mask is not None and stop_mask[source]:
        remaining -= 1
    if remaining == 0:
        return dist
    q = deque([source])
    while q:
        x = q.popleft()
        dx = dist[x]
        for y in adj[x]:
            if dist[y] >= 0 or (within is not None and not within[y]):
                continue
            dist[y] = dx + 1
            if stop_mask is not None and stop_mask[y]:
                remaining -= 1
                if remaining == 0:
                    return dist
            q.append(y)
    return dist


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]  # ids, ascending
    size: int
    weak_diameter: int


@dataclass(frozen=True)
class ComponentReport:
    components: tuple[Component, ...]

    def sizes(self) -> list[int]:
        return [c.size for c in self.components]

    def weak_diameters(self) -> list[int]:
        return [c.weak_diameter for c in self.components]


def components(g: Graph, members) -> ComponentReport:
    """Connected components of the induced subgraph, with weak diameters.

    The weak diameter of a component is the max pairwise distance between its
    vertices measured in the full graph, not the induced one.
    """
    mask = to_mask(g, members)
    comps = _component_index_lists(g, mask)
    out = []
    for comp in comps:
        wd = _weak_diameter(g, comp)
        out.append(Component(tuple(g.ids[comp].tolist()), len(comp), wd))
    return ComponentReport(tuple(out))


def _component_index_lists(g: Graph, mask: np.ndarray) -> list[list[int]]:
    adj = g.adj_lists()
    seen = np.zeros(g.n, dtype=np.bool_)
    comps = []
    for s in np.flatnonzero(mask).tolist():
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if mask[y] and not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    q.append(y)
        comps.append(sorted(comp))
    return comps


def _weak_diameter(g: Graph, comp_indices: list[int]) -> int:
    if len(comp_indices) == 1:
        return 0
    targets = np.zeros(g.n, dtype=np.bool_)
    targets[comp_indices] = True
    best = 0
    for s in comp_indices:
        dist = bfs_distances(g, s, stop_mask=targets)
        dcomp = dist[comp_indices]
        if np.any(dcomp < 0):
            raise ValueError("component vertices not mutually reachable in the full graph")
        best = max(best, int(dcomp.max()))
    return best


def _induced_diameter(g: Graph, comp_indices: list[int], mask: np.ndarray) -> int:
    best = 0
    for s in comp_indices:
        dist = bfs_distances(g, s, within=mask)
        dcomp = dist[comp_indices]
        if np.any(dcomp < 0):
            raise ValueError("vertex set is not connected in the induced subgraph")
        best = max(best, int(dcomp.max()))
    return best


# -- file format -------------------------------------------------------------
# Line 1: "n m".  Then m lines "u v", 0 <= u < n, 0 <= v < n, u != v.
# Output is canonical: u < v per line, lines sorted lexicographically,
# newline-terminated.

def load_graph(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedLineError("empty input")
    head = lines[0].split(" ")
    if len(head) != 2:
        raise MalformedLineError(f"bad header: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise MalformedLineError(f"bad header: {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise MalformedLineError("negative count in header")
    if len(lines) - 1 != m:
        raise MalformedLineError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split(" ")
        if len(parts) != 2:
            raise MalformedLineError(f"bad edge line: {ln!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(f"bad edge line: {ln!r}") from None
        if a == b:
            raise SelfLoopError(f"self-loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise IdRangeError(f"edge ({a}, {b}) outside 0..{n - 1}")
        edges.append((a, b))
    return Graph.from_contiguous(n, edges)


def dump_graph(g: Graph) -> str:
    if np.any(g.ids != np.arange(g.n)):
        raise ValueError("file format requires contiguous ids 0..n-1")
    u, v = g.edge_index_pairs()
    out = [f"{g.n} {g.m}"]
    out.extend(f"{a} {b}" for a, b in zip(u.tolist(), v.tolist()))
    return "\n".join(out) + "\n"


def load_graph_file(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        return load_graph(fh.read())


def save_graph_file(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(dump_graph(g))


# -- generators ---------------------------------------------------------------

def _tree_edges_from_pruefer(seq: np.ndarray, n: int) -> list[tuple[int, int]]:
    # Standard linear-time decode; vertices 0..n-1, seq length n-2.
    degree = np.ones(n, dtype=np.int64)
    for x in seq.tolist():
        degree[x] += 1
    edges = []
    ptr = 0
    leaf = -1
    # "ptr" scans for the smallest leaf; "leaf" tracks a leaf smaller than ptr
    # created by the previous step, which must be used first.
    for x in seq.tolist():
        if leaf == -1:
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            leaf = -1
            ptr += 1
    if leaf == -1:
        while degree[ptr] != 1:
            ptr += 1
        leaf = ptr
    last = n - 1
    edges.append((leaf, last))
    return edges


def gen_tree(n: int, seed: int) -> Graph:
    """Uniform random labeled tree on n vertices."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Graph.from_contiguous(1, [])
    if n == 2:
        return Graph.from_contiguous(2, [(0, 1)])
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, n, size=n - 2)
    return Graph.from_contiguous(n, _tree_edges_from_pruefer(seq, n))


def _random_forest_edges(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    # Uniform labeled forest on n vertices: a uniform tree on n+1 vertices
    # with the extra vertex deleted hits every forest exactly once.
    if n <= 1:
        return []
    if n + 1 == 2:
        return []
    seq = rng.integers(0, n + 1, size=n - 1)
    edges = _tree_edges_from_pruefer(seq, n + 1)
    return [(a, b) for a, b in edges if a != n and b != n]


def gen_forest_union(n: int, lam: int, seed: int) -> Graph:
    """Union of `lam` independent uniform random labeled forests (dedup edges)."""
    if lam < 1:
        raise ValueError("lam must be >= 1")
    rng = np.random.default_rng(seed)
    seen = set()
    for _ in range(lam):
        for a, b in _random_forest_edges(n, rng):
            if a > b:
                a, b = b, a
            seen.add((a, b))
    return Graph.from_contiguous(n, sorted(seen))


def gen_degree_capped(n: int, delta: int, seed: int, p_target: float = 1.0) -> Graph:
    """Near-regular random graph with max degree <= `delta`.

    Stub pairing: each vertex contributes as many stubs as it has remaining
    capacity, the stub list is shuffled and paired, and self loops/duplicates
    are discarded. A vertex appearing at most cap[v] times in the stub list
    can gain at most cap[v] edges, so the cap holds by construction. A few
    repair passes refill lost capacity; p_target in (0, 1] scales the target
    edge count relative to the n*delta/2 saturation bound (best effort).
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if not (0 < p_target <= 1):
        raise ValueError("p_target must be in (0, 1]")
    if n < 2 or delta == 0:
        return Graph.from_contiguous(n, [])
    rng = np.random.default_rng(seed)
    target = int(p_target * n * delta / 2)
    cap = np.full(n, min(delta, n - 1), dtype=np.int64)
    codes = np.empty(0, dtype=np.int64)
    for _ in range(4):
        room = target - codes.size
        if room <= 0 or cap.sum() < 2:
            break
        stubs = np.repeat(np.arange(n, dtype=np.int64), cap)
        rng.shuffle(stubs)
        if stubs.size % 2:
            stubs = stubs[:-1]
        u = stubs[0::2]
        v = stubs[1::2]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keep = lo != hi
        batch = np.unique(lo[keep] * n + hi[keep])
        batch = batch[~np.isin(batch, codes)]
        if batch.size > room:
            batch = rng.permutation(batch)[:room]
        if batch.size == 0:
            break
        codes = np.concatenate([codes, batch])
        deg = np.bincount(codes // n, minlength=n) + np.bincount(codes % n, minlength=n)
        cap = np.minimum(delta, n - 1) - deg
    codes = np.sort(codes)
    # codes are unique lo*n+hi with lo < hi, so index pairs are valid as-is
    return Graph._from_index_pairs(np.arange(n, dtype=np.int64), codes // n, codes % n)


def gen_high_girth(n: int, delta: int, seed: int) -> Graph:
    """Random graph with girth above 6: incremental insertion, rejecting any
    edge whose endpoints are already within distance 5 or at degree `delta`.
    Best effort toward the n*delta/2 cap."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if n < 2 or delta == 0:
        return Graph.from_contiguous(n, [])
    rng = np.random.default_rng(seed)
    target = n * delta // 2
    budget = 30 * target + 1000
    deg = [0] * n
    adj = [[] for _ in range(n)]
    edges = []
    used = 0
    while len(edges) < target and used < budget:
        batch = min(8192, budget - used)
        us = rng.integers(0, n, size=batch).tolist()
        vs = rng.integers(0, n, size=batch).tolist()
        used += batch
        for a, b in zip(us, vs):
            if a == b or deg[a] >= delta or deg[b] >= delta:
                continue
            # depth-5 BFS from a; insertion is safe iff b is farther than 5,
            # since a new edge closes a cycle of length dist(a, b) + 1
            if _within_distance(adj, a, b, 5):
                continue
            adj[a].append(b)
            adj[b].append(a)
            deg[a] += 1
            deg[b] += 1
            edges.append((a, b) if a < b else (b, a))
            if len(edges) >= target:
                break
    return Graph.from_contiguous(n, edges)


def _within_distance(adj: list[list[int]], src: int, dst: int, limit: int) -> bool:
    if src == dst:
        return True
    seen = {src}
    frontier = [src]
    for _ in range(limit):
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y == dst:
                    return True
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            return False
        frontier = nxt
    return False


def gen_star_forest(n: int, seed: int, min_hub_degree: int = 8) -> Graph:
    """Forest of stars whose hub degrees double from min_hub_degree upward.

    Arboricity 1 with a geometric ladder of hub degrees, so degree-reduction
    sweeps over t exercise more than the trivial zero-round case.
    """
    if n < 2:
        return Graph.from_contiguous(max(n, 0), [])
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    edges = []
    pos = 0
    d = min_hub_degree
    while pos + 1 < n:
        k = min(d, n - pos - 1)
        hub = int(order[pos])
        for i in range(k):
            edges.append((hub, int(order[pos + 1 + i])))
        pos += k + 1
        d *= 2
    return Graph.from_contiguous(n, edges)


# -- metrics -----------------------------------------------------------------

def girth(g: Graph, cap: int | None = None) -> float:
    """Length of the shortest cycle, math.inf for forests.

    With `cap`, cycles longer than cap are not searched for: the return value
    is the exact girth if it is <= cap and math.inf otherwise.
    """
    adj = g.adj_lists()
    best = math.inf
    limit = cap if cap is not None else g.n
    dist = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if g.degrees[s] < 2:
            continue
        # BFS from s; first collision gives the shortest cycle through s
        touched = [s]
        dist[s] = 0
        q = deque([s])
        local_best = math.inf
        while q:
            x = q.popleft()
            dx = dist[x]
            if 2 * dx >= min(local_best, limit + 1) - 1:
                break
            for y in adj[x]:
                if dist[y] == -1:
                    dist[y] = dx + 1
                    parent[y] = x
                    touched.append(y)
                    q.append(y)
                elif y != parent[x] and dist[y] >= dx:
                    local_best = min(local_best, dx + dist[y] + 1)
        best = min(best, local_best)
        for t in touched:
            dist[t] = -1
            parent[t] = -1
        if best == 3:
            return 3
    if cap is not None and best > cap:
        return math.inf
    return best


def degeneracy(g: Graph) -> int:
    """Max over the min-degree peeling order of the degree at removal time."""
    if g.n == 0:
        return 0
    deg = g.degrees.tolist()
    maxd = max(deg)
    buckets = [[] for _ in range(maxd + 1)]
    for v, d in enumerate(deg):
        buckets[d].append(v)
    removed = [False] * g.n
    adj = g.adj_lists()
    out = 0
    cur = 0
    for _ in range(g.n):
        v = -1
        while v < 0:
            while cur <= maxd and not buckets[cur]:
                cur += 1
            w = buckets[cur].pop()
            # entries go stale when a vertex's degree drops after insertion
            if not removed[w] and deg[w] == cur:
                v = w
        removed[v] = True
        out = max(out, cur)
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
                buckets[deg[w]].append(w)
                if deg[w] < cur:
                    cur = deg[w]
    return out
