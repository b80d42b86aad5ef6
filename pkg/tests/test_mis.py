"""Independent set tests: the halving stage against exact enumeration, the
local-maxima round, the three MIS pipelines, and kernel agreement."""

import math

import numpy as np
import pytest

import symbreak as sb
from symbreak import HalveConfig, NodeRandomness, Trace, TrialConfig
from symbreak.engine import default_round_cap
from symbreak.graphcore import member_degrees, neighbor_any
from symbreak.mis import (
    LocalMaximaProtocol,
    _halve_stage_scalar,
    _halve_stage_vector,
    _local_maxima_round,
    _local_maxima_round_scalar,
    _local_maxima_round_vector,
    halve,
)

from helpers import complete_graph, cycle_graph, path_graph, star_graph


# ---------------------------------------------------------------- halve stage


def test_single_edge_halve_stage_probabilities():
    # delta=1: each end is selected with prob 1/2 and joins iff the other is
    # not selected. Exact: P[u joins] = 1/4, P[neither joins] = 1/2.
    g = path_graph(2)
    full = np.ones(2, dtype=bool)
    rand = NodeRandomness(31)
    n_samples = 40_000
    joined_0 = joined_1 = neither = 0
    for r in range(n_samples):
        got = sb.halve_stage(g, full, 1, rand, r)
        if not got:
            neither += 1
        elif got == {0}:
            joined_0 += 1
        elif got == {1}:
            joined_1 += 1
        else:
            raise AssertionError(f"adjacent pair joined together: {got}")
    for count, p in ((joined_0, 0.25), (joined_1, 0.25), (neither, 0.5)):
        sigma = math.sqrt(p * (1 - p) / n_samples)
        assert abs(count / n_samples - p) <= 3 * sigma


def test_halve_stage_joiners_are_independent_and_selected_only():
    for seed in range(4):
        g = sb.gen_degree_capped(70, 8, seed=seed)
        rand = NodeRandomness(seed)
        active = np.ones(g.n, dtype=bool)
        for r in range(12):
            got = sb.halve_stage(g, active, 8, rand, r)
            for v in got:
                assert active[g.index_of(v)]
            chk = sb.check_mis(g, got)
            assert chk.independent


def test_halve_postcondition_residual_degree():
    for seed in range(4):
        g = sb.gen_degree_capped(400, 16, seed=seed)
        delta = int(g.max_degree)
        trace = Trace(default_round_cap(g.n))
        members, residual = halve(
            g, delta, HalveConfig(n_ref=g.n), NodeRandomness(seed), trace
        )
        deg = member_degrees(g, residual)
        assert int(deg.max(initial=0)) < delta / 2
        assert trace.flags.get("halve_residual_ok") is True
        assert sb.check_mis(g, members).independent


def test_halve_rejects_bad_delta():
    g = path_graph(3)
    with pytest.raises(ValueError):
        halve(g, 0, HalveConfig(n_ref=3), NodeRandomness(0), Trace(100))


# ---------------------------------------------------------------- local maxima


def test_path3_middle_joins_one_third():
    g = path_graph(3)
    full = np.ones(3, dtype=bool)
    rand = NodeRandomness(5)
    n_samples = 30_000
    mid = 0
    for r in range(n_samples):
        got = sb.local_maxima_round(g, full, rand, r)
        mid += 1 in got
    p = 1 / 3
    sigma = math.sqrt(p * (1 - p) / n_samples)
    assert abs(mid / n_samples - p) <= 3 * sigma


def test_isolated_vertex_always_joins():
    g = sb.Graph.from_contiguous(3, [(0, 1)])
    rand = NodeRandomness(0)
    for r in range(20):
        got = sb.local_maxima_round(g, np.ones(3, dtype=bool), rand, r)
        assert 2 in got


def test_clique_joins_exactly_one_per_round():
    g = complete_graph(6)
    rand = NodeRandomness(8)
    full = np.ones(6, dtype=bool)
    for r in range(200):
        assert len(sb.local_maxima_round(g, full, rand, r)) == 1


def test_joiners_never_adjacent():
    for seed in range(5):
        g = sb.gen_degree_capped(120, 10, seed=seed)
        rand = NodeRandomness(seed + 3)
        full = np.ones(g.n, dtype=bool)
        for r in range(8):
            got = sb.local_maxima_round(g, full, rand, r)
            assert sb.check_mis(g, got).independent


def test_local_maxima_kernels_agree():
    for seed in range(6):
        g = sb.gen_degree_capped(100, 9, seed=seed)
        rng = np.random.default_rng(seed)
        active = rng.random(g.n) < 0.8
        rand = NodeRandomness(seed)
        for r in (0, 4):
            a = _local_maxima_round_scalar(g, active, rand, r)
            b = _local_maxima_round_vector(g, active, rand, r)
            assert np.array_equal(a, b)
    big = sb.gen_degree_capped(400, 12, seed=0)
    active = np.ones(big.n, dtype=bool)
    rand = NodeRandomness(2)
    assert np.array_equal(
        _local_maxima_round_scalar(big, active, rand, 1),
        _local_maxima_round_vector(big, active, rand, 1),
    )


def test_halve_stage_kernels_agree():
    for seed in range(6):
        g = sb.gen_degree_capped(100, 9, seed=seed)
        rng = np.random.default_rng(seed + 9)
        active = rng.random(g.n) < 0.8
        rand = NodeRandomness(seed)
        for r in (0, 4):
            a = _halve_stage_scalar(g, active, 9, rand, r)
            b = _halve_stage_vector(g, active, 9, rand, r)
            assert np.array_equal(a, b)


# ---------------------------------------------------------------- protocol


def test_protocol_matches_fused_driver():
    for n, d, seed in [(40, 4, 0), (90, 6, 3), (200, 5, 11)]:
        g = sb.gen_degree_capped(n, d, seed=seed)
        cfg = TrialConfig(seed=seed + 100)
        out, _ = sb.run(LocalMaximaProtocol(), g, cfg)

        rand = NodeRandomness(cfg.seed)
        active = np.ones(g.n, dtype=bool)
        members = []
        trace = Trace(cfg.cap_for(g.n))
        while active.any():
            joined = _local_maxima_round(g, active, rand, trace.rounds_total)
            members.extend(np.flatnonzero(joined).tolist())
            active[joined | neighbor_any(g, joined)] = False
            trace.charge("phase1", "lm", 2)
        driver = frozenset(int(g.ids[i]) for i in members)
        assert out == driver


# ---------------------------------------------------------------- pipelines


def test_mis_on_clique_and_empty():
    out, _ = sb.mis_general(complete_graph(8), TrialConfig(seed=0))
    assert len(out.members) == 1
    empty = sb.Graph.from_contiguous(10, [])
    out2, _ = sb.mis_general(empty, TrialConfig(seed=0))
    assert out2.members == frozenset(range(10))


def test_mis_general_end_to_end():
    for seed in range(4):
        g = sb.gen_degree_capped(600, 16, seed=seed)
        out, trace = sb.mis_general(g, TrialConfig(seed=seed))
        chk = sb.check_mis(g, out)
        assert chk.independent and chk.maximal
        assert trace.flags.get("halve_residual_ok") is True
        assert "halve_criterion_ok" in trace.flags


def test_mis_general_small_components_variant():
    g = sb.gen_degree_capped(500, 12, seed=2)
    out, trace = sb.mis_general(g, TrialConfig(seed=2, variant="small-components"))
    chk = sb.check_mis(g, out)
    assert chk.independent and chk.maximal
    assert trace.flags.get("halve_residual_ok") is True


def test_mis_rejects_unknown_variant():
    with pytest.raises(ValueError):
        sb.mis_general(path_graph(4), TrialConfig(seed=0, variant="bogus"))


def test_high_girth_accepts_trees_and_long_cycles():
    out, _ = sb.mis_high_girth(cycle_graph(7), TrialConfig(seed=1))
    chk = sb.check_mis(cycle_graph(7), out)
    assert chk.independent and chk.maximal
    tree = sb.gen_tree(300, seed=4)
    out2, _ = sb.mis_high_girth(tree, TrialConfig(seed=4))
    chk2 = sb.check_mis(tree, out2)
    assert chk2.independent and chk2.maximal


def test_high_girth_rejects_short_cycles():
    with pytest.raises(ValueError):
        sb.mis_high_girth(complete_graph(4), TrialConfig(seed=0))
    with pytest.raises(ValueError):
        sb.mis_high_girth(cycle_graph(6), TrialConfig(seed=0))


def test_high_girth_end_to_end():
    for seed in range(3):
        g = sb.gen_high_girth(400, 4, seed=seed)
        out, trace = sb.mis_high_girth(g, TrialConfig(seed=seed))
        chk = sb.check_mis(g, out)
        assert chk.independent and chk.maximal
        assert "girth_burst_length" in trace.flags


def test_tree_mis_on_star():
    g = star_graph(99)
    out, _ = sb.mis_tree(g, TrialConfig(seed=6))
    assert out.members == frozenset({0}) or out.members == frozenset(range(1, 100))


def test_tree_mis_rejects_cycles():
    with pytest.raises(ValueError):
        sb.mis_tree(cycle_graph(5), TrialConfig(seed=0))


def test_tree_mis_on_long_paths():
    g = path_graph(10_000)
    for seed in range(5):
        out, _ = sb.mis_tree(g, TrialConfig(seed=seed))
        chk = sb.check_mis(g, out)
        assert chk.independent and chk.maximal


def test_tree_mis_bad_components_stay_small():
    n = 2**14
    bound = 3 * math.log2(n)
    for seed in range(15):
        g = sb.gen_tree(n, seed=seed)
        out, trace = sb.mis_tree(g, TrialConfig(seed=seed))
        chk = sb.check_mis(g, out)
        assert chk.independent and chk.maximal
        assert trace.flags.get("tree_bad_component_max", 0) <= bound


def test_mis_deterministic():
    g = sb.gen_degree_capped(300, 10, seed=1)
    a, ta = sb.mis_general(g, TrialConfig(seed=7))
    b, tb = sb.mis_general(g, TrialConfig(seed=7))
    assert a.members == b.members
    assert ta.rounds_total == tb.rounds_total
