"""Validity oracle tests. These checkers gate everything else, so the cases
here are pinned by hand."""

import numpy as np

import symbreak as sb

from helpers import complete_graph, path_graph, star_graph


def test_empty_matching_on_edgeless_graph():
    g = sb.Graph.from_contiguous(5, [])
    chk = sb.check_matching(g, ())
    assert chk.valid_matching and chk.maximal


def test_path4_matchings():
    g = path_graph(4)  # a=0, b=1, c=2, d=3
    ok = sb.check_matching(g, ((1, 2),))
    assert ok.valid_matching and ok.maximal
    partial = sb.check_matching(g, ((0, 1),))
    assert partial.valid_matching and not partial.maximal  # 2-3 still free


def test_triangle_single_edge_is_maximal():
    g = complete_graph(3)
    chk = sb.check_matching(g, ((0, 1),))
    assert chk.valid_matching and chk.maximal


def test_matching_rejects_overlap_and_non_edges():
    g = path_graph(4)
    assert not sb.check_matching(g, ((0, 1), (1, 2))).valid_matching
    assert not sb.check_matching(g, ((0, 2),)).valid_matching


def test_matching_accepts_matching_object():
    g = path_graph(4)
    m = sb.Matching(edges=((0, 1), (2, 3)))
    chk = sb.check_matching(g, m)
    assert chk.valid_matching and chk.maximal


def test_mis_on_clique():
    g = complete_graph(8)
    chk = sb.check_mis(g, {3})
    assert chk.independent and chk.maximal
    assert not sb.check_mis(g, {1, 2}).independent
    assert not sb.check_mis(g, set()).maximal


def test_mis_on_star():
    g = star_graph(6)
    assert sb.check_mis(g, {0}).maximal
    leaves = set(range(1, 7))
    chk = sb.check_mis(g, leaves)
    assert chk.independent and chk.maximal
    # leaves 3..6 have no neighbor in {1, 2}: independent but not maximal
    chk2 = sb.check_mis(g, {1, 2})
    assert chk2.independent and not chk2.maximal


def test_mis_empty_graph():
    g = sb.Graph.from_contiguous(10, [])
    chk = sb.check_mis(g, range(10))
    assert chk.independent and chk.maximal


def test_coloring_checks():
    g = path_graph(3)
    good = sb.check_coloring(g, {0: 1, 1: 2, 2: 1}, 3)
    assert good.proper and good.total and good.within_palette
    mono = sb.check_coloring(g, {0: 1, 1: 1, 2: 2}, 3)
    assert not mono.proper
    partial = sb.check_coloring(g, {0: 1, 1: 2}, 3)
    assert partial.proper and not partial.total
    out = sb.check_coloring(g, {0: 1, 1: 4, 2: 1}, 3)
    assert not out.within_palette


def test_coloring_accepts_partial_coloring_object():
    g = path_graph(3)
    pc = sb.PartialColoring({0: 1, 1: 2, 2: 1})
    chk = sb.check_coloring(g, pc, 3)
    assert chk.proper and chk.total


def test_residual_stats_fields():
    g = sb.gen_degree_capped(200, 8, seed=1)
    active = np.zeros(g.n, dtype=bool)
    active[:40] = True
    st = sb.residual_stats(g, active, delta_ref=8)
    assert len(st.sizes) == len(st.weak_diameters)
    assert st.max_residual_degree <= 8
    assert st.weak_diameter_bound > 0
    # bound booleans are consistent with the raw numbers they summarize
    assert st.weak_diameter_ok == all(d < st.weak_diameter_bound for d in st.weak_diameters)
    assert st.size_bound_mm_ok == all(s <= st.size_bound_mm for s in st.sizes)


def test_residual_stats_empty_active():
    g = path_graph(4)
    st = sb.residual_stats(g, np.zeros(4, dtype=bool), delta_ref=2)
    assert st.sizes == ()
    assert st.max_residual_degree == 0
