"""Tiny graph builders shared across test modules."""

from symbreak import Graph


def path_graph(k: int) -> Graph:
    return Graph.from_contiguous(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Graph:
    edges = [(i, i + 1) for i in range(k - 1)] + [(0, k - 1)]
    return Graph.from_contiguous(k, edges)


def complete_graph(k: int) -> Graph:
    return Graph.from_contiguous(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def star_graph(leaves: int) -> Graph:
    """Center is vertex 0, leaves are 1..leaves."""
    return Graph.from_contiguous(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# Outer 5-cycle, inner pentagram, spokes.
PETERSEN_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
    (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
]


def petersen() -> Graph:
    return Graph.from_contiguous(10, PETERSEN_EDGES)
