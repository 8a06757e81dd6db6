import io
import itertools

import numpy as np
import pytest

from nomaidnc.errors import ContractError
from nomaidnc.graph import (IdncGraph, build_graph, clique_to_layer, coding_compatible, dump_graph,
                            is_clique, is_maximal_clique, load_graph, rate_candidates)
from nomaidnc.idnc import SideInfo
from nomaidnc.oracles import random_wants


def test_empty_wants_gives_empty_graph():
    g = build_graph(SideInfo.from_sets([set(), set()], 3), [1.0, 2.0], [0, 1])
    assert len(g) == 0 and g.num_edges == 0


def test_single_vertex():
    g = build_graph(SideInfo.from_sets([{2}], 3), [1.7], [0])
    assert len(g) == 1 and g.num_edges == 0
    v = g.vertices[0]
    assert (v.receiver, v.packet, v.rate, v.weight) == (0, 2, 1.7, 1.7)


def test_cross_has_pair():
    # each receiver holds what the other wants
    w = SideInfo.from_sets([{0}, {1}], 2)
    g = build_graph(w, [2.0, 2.0], [0, 1])
    # equal capacities merge into one rate: one vertex per receiver
    assert len(g) == 2 and g.adjacent(0, 1)
    w2 = SideInfo.from_sets([{0}, {1}], 2)
    g2 = build_graph(w2, [2.0, 3.0], [0, 1])
    # rates {2, 3}: (0,0,2), (1,1,2), (1,1,3); the cross-Has edge only at rate 2
    assert [(v.receiver, v.packet, v.rate) for v in g2.vertices] == [(0, 0, 2.0), (1, 1, 2.0), (1, 1, 3.0)]
    assert g2.adjacent(0, 1) and not g2.adjacent(1, 2) and not g2.adjacent(0, 2)


def test_two_receivers_four_vertices():
    # each wants two packets the other holds
    w = SideInfo.from_sets([{0, 1}, {2, 3}], 4)
    g = build_graph(w, [2.0, 2.0], [0, 1])
    assert len(g) == 4
    assert g.num_edges == 4  # every (0,l)-(1,l') pair is cross-Has
    assert all(g.adjacent(i, j) for i in (0, 1) for j in (2, 3))


def test_rate_candidates_merge():
    assert rate_candidates(np.array([1.0, 1.0 + 1e-15, 2.0, 0.0])) == [1.0, 2.0]


def test_vertex_order_and_bound(rng):
    for _ in range(30):
        M, L = rng.integers(1, 6, 2)
        w = random_wants(rng, M, L)
        caps = rng.uniform(0.1, 5, M)
        g = build_graph(w, caps, range(M))
        keys = [(g.rate_set.index(v.rate), v.receiver, v.packet) for v in g.vertices]
        assert keys == sorted(keys)
        assert len(g) <= M * M * L
        expect = {(m, l, r) for m in range(M) for l in w.wants(m) for r in g.rate_set if r <= caps[m]}
        assert {(v.receiver, v.packet, v.rate) for v in g.vertices} == expect


def test_edge_soundness_and_completeness(rng):
    for _ in range(30):
        M, L = rng.integers(1, 6, 2)
        w = random_wants(rng, M, L)
        caps = rng.uniform(0.1, 5, M)
        g = build_graph(w, caps, range(M))
        adj = g.dense_adjacency()
        assert np.array_equal(adj, adj.T) and not adj.diagonal().any()
        for i, j in itertools.combinations(range(len(g)), 2):
            assert adj[i, j] == coding_compatible(w, g.vertices[i], g.vertices[j])


def test_build_deterministic(rng):
    w = random_wants(rng, 5, 6)
    caps = rng.uniform(0.1, 5, 5)
    a, b = build_graph(w, caps, range(5)), build_graph(w, caps, range(5))
    assert a.vertices == b.vertices and np.array_equal(a.dense_adjacency(), b.dense_adjacency())


def triangle_plus():
    return IdncGraph.from_edges([3, 3, 3, 4], [(0, 1), (1, 2), (0, 2)])


def test_is_clique():
    g = triangle_plus()
    assert is_clique(g, []) and is_clique(g, [3])
    assert is_clique(g, [0, 1, 2]) and not is_clique(g, [0, 3])
    with pytest.raises(ContractError):
        is_clique(g, [7])


def test_is_maximal_clique():
    g = triangle_plus()
    assert is_maximal_clique(g, [0, 1, 2])
    assert not is_maximal_clique(g, [0, 1])
    assert is_maximal_clique(g, [3])


def brute_maximal(g, s):
    adj = g.dense_adjacency()
    s = set(s)
    if any(not adj[a, b] for a, b in itertools.combinations(s, 2)):
        return False
    for v in set(range(len(g))) - s:
        t = s | {v}
        if all(adj[a, b] for a, b in itertools.combinations(t, 2)):
            return False
    return True


def test_maximality_against_brute_force(rng):
    for _ in range(100):
        n = int(rng.integers(1, 8))
        edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.5]
        g = IdncGraph.from_edges(list(rng.uniform(1, 5, n)), edges)
        for k in range(n + 1):
            for s in itertools.combinations(range(n), k):
                assert is_maximal_clique(g, s) == brute_maximal(g, s)


def test_clique_to_layer_examples():
    w = SideInfo.from_sets([{2}, {1}], 3)
    caps = np.array([3.0, 1.0])
    g = build_graph(w, caps, [0, 1])
    top = [i for i, v in enumerate(g.vertices) if v.rate == 3.0]
    lay = clique_to_layer(g, top, w, caps, [0, 1])
    assert lay.packet == {2} and lay.rate == 3.0 and 0 in lay.targets
    empty = clique_to_layer(g, [], w, caps, [0, 1])
    assert empty.is_absent and empty.rate == 0


def all_maximal_cliques(g):
    n = len(g)
    for k in range(1, n + 1):
        for s in itertools.combinations(range(n), k):
            if is_maximal_clique(g, s):
                yield s


def test_maximal_clique_targets_equal_members(rng):
    checked = 0
    while checked < 40:
        M, L = int(rng.integers(1, 6)), int(rng.integers(1, 7))
        w = random_wants(rng, M, L)
        caps = rng.uniform(0.1, 5, M)
        g = build_graph(w, caps, range(M))
        if len(g) > 14:
            continue
        checked += 1
        for k in all_maximal_cliques(g):
            lay = clique_to_layer(g, k, w, caps, range(M))
            assert lay.targets == {g.vertices[i].receiver for i in k}
            assert len(lay.targets) == len(k)


def test_dump_roundtrip(rng):
    w = random_wants(rng, 4, 4)
    g = build_graph(w, rng.uniform(0.1, 5, 4), range(4))
    buf = io.StringIO()
    dump_graph(g, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == len(g) + g.num_edges
    h = load_graph(io.StringIO(buf.getvalue()))
    assert [(v.receiver, v.packet, v.rate) for v in h.vertices] == \
        [(v.receiver, v.packet, v.rate) for v in g.vertices]
    assert np.array_equal(h.dense_adjacency(), g.dense_adjacency())
