import pytest

from nomaidnc.channel import PowerAllocation
from nomaidnc.clique import (Heuristic, exact_max_weight_clique, mwp_mwv_search, mwp_path, mwv_search,
                             search, two_stage_schedule)
from nomaidnc.errors import OracleRefused
from nomaidnc.graph import IdncGraph, is_maximal_clique
from nomaidnc.idnc import SideInfo
from nomaidnc.oracles import (brute_force_layer, brute_force_max_clique_weight, clique_dominance,
                              random_idnc_graph, random_small_topology, random_wants)

from conftest import make_topology

SEARCHES = [mwv_search, mwp_mwv_search, exact_max_weight_clique]


def triangle_plus():
    return IdncGraph.from_edges([3, 3, 3, 4], [(0, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("fn", SEARCHES)
def test_triangle_beats_heavy_isolated(fn):
    k = fn(triangle_plus())
    assert sorted(k) == [0, 1, 2]


def test_two_disjoint_edges():
    g = IdncGraph.from_edges([3, 3, 4, 1], [(0, 1), (2, 3)])
    assert g.clique_weight(exact_max_weight_clique(g)) == 6
    assert sorted(mwp_mwv_search(g)) == [0, 1]
    assert sorted(mwv_search(g)) == [0, 1]


@pytest.mark.parametrize("fn", SEARCHES)
def test_empty_graph(fn):
    assert fn(IdncGraph.from_edges([], [])) == ()


def test_mwv_zero_scores_fall_back_to_weight():
    g = IdncGraph.from_edges([1.0, 5.0, 2.0], [])
    assert mwv_search(g) == (1,)


def test_mwp_path_takes_heaviest_neighbour():
    # 0 is adjacent to 1 (w 2) and 2 (w 5); 1 and 2 are not adjacent
    g = IdncGraph.from_edges([1.0, 2.0, 5.0], [(0, 1), (0, 2)])
    assert mwp_path(g, 0) == (0, 2)
    assert mwp_path(g, 1) == (1, 0)


def test_heuristics_return_maximal_cliques(rng):
    for _ in range(200):
        g, _, _ = random_idnc_graph(rng, 6, 6, cap=40)
        for fn in SEARCHES:
            k = fn(g)
            if len(g):
                assert is_maximal_clique(g, k)
        for v in range(len(g)):
            assert is_maximal_clique(g, mwp_path(g, v))


def test_exact_against_brute_force(rng):
    for _ in range(150):
        g, _, _ = random_idnc_graph(rng, 5, 5, cap=16)
        assert g.clique_weight(exact_max_weight_clique(g)) == pytest.approx(
            brute_force_max_clique_weight(g), rel=1e-12)


def test_exact_on_random_abstract_graphs(rng):
    for _ in range(100):
        n = int(rng.integers(1, 13))
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.6]
        g = IdncGraph.from_edges(list(rng.uniform(0, 5, n)), edges)
        assert g.clique_weight(exact_max_weight_clique(g)) == pytest.approx(
            brute_force_max_clique_weight(g), rel=1e-12)


def test_dominance():
    st = clique_dominance(200, seed=11)
    assert st.violations == 0
    assert st.ratio_mwp <= 1.0 + 1e-12 and st.ratio_mwv <= 1.0 + 1e-12


def test_mwp_mwv_at_least_best_single_path(rng):
    for _ in range(50):
        g, _, _ = random_idnc_graph(rng, 6, 6, cap=60)
        if len(g) == 0:
            continue
        best = max(g.clique_weight(mwp_path(g, v)) for v in range(len(g)))
        assert g.clique_weight(mwp_mwv_search(g)) == best


def test_oracle_refused():
    g = IdncGraph.from_edges([1.0] * 65, [])
    with pytest.raises(OracleRefused):
        exact_max_weight_clique(g)
    with pytest.raises(OracleRefused):
        search(g, Heuristic.EXACT, oracle_cap=64)
    assert len(exact_max_weight_clique(g, cap=None)) == 1


def test_two_stage_no_near_receivers():
    topo = make_topology([1.0, 2.0], near=[])
    wants = SideInfo.from_sets([{0}, {1}], 2)
    far, near = two_stage_schedule(topo, wants, PowerAllocation(8, 2), Heuristic.MWP_MWV)
    assert not far.is_absent and near.is_absent


def test_two_stage_nothing_wanted():
    topo = make_topology([1.0, 2.0])
    wants = SideInfo.from_sets([set(), set()], 2)
    far, near = two_stage_schedule(topo, wants, PowerAllocation(8, 2), Heuristic.MWV)
    assert far.is_absent and near.is_absent


def test_two_stage_near_layer_uses_updated_wants():
    # single near receiver wanting two packets: far serves one, near the other
    topo = make_topology([1.0])
    wants = SideInfo.from_sets([{0, 1}], 2)
    far, near = two_stage_schedule(topo, wants, PowerAllocation(8, 2), Heuristic.EXACT)
    assert far.targets == {0} and near.targets == {0}
    assert far.packet != near.packet


def test_two_stage_exact_matches_enumeration(rng):
    for _ in range(40):
        M, L = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        topo = random_small_topology(rng, M)
        wants = random_wants(rng, M, L)
        p = PowerAllocation.split(topo.p_max, 0.3 * topo.p_max)
        far, near = two_stage_schedule(topo, wants, p, Heuristic.EXACT, oracle_cap=None)
        assert far.throughput == pytest.approx(
            brute_force_layer(wants, topo.far_capacities(p), topo.all_ids)[0], rel=1e-12, abs=1e-12)
