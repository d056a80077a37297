from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apexforest.errors import SizeGuardError
from apexforest.graph import (
    Multigraph,
    all_graphs,
    build_graph,
    chordless_cycles,
    complete_graph,
    components,
    cycle_graph,
    format_edge_list,
    graph_from_mask,
    graph_to_mask,
    is_forest,
    pair_table,
    parse_edge_list,
    path_graph,
    spikes,
    topological_core,
    two_core,
)


def small_graphs(limit: int = 6):
    for n in range(1, limit + 1):
        yield from all_graphs(n)


# -- build_graph ------------------------------------------------------------


def test_build_graph_basic():
    empty = build_graph(3, [])
    assert empty.order == 3 and empty.size == 0
    tri = build_graph(3, [(1, 2), (1, 3), (2, 3)])
    assert sorted(tri.edges()) == [(1, 2), (1, 3), (2, 3)]
    k4 = build_graph(4, [(u, v) for u in range(1, 5) for v in range(u + 1, 5)])
    assert k4 == complete_graph(4) and k4.size == 6


def test_build_graph_collapses_duplicates():
    g = build_graph(3, [(1, 2), (2, 1), (1, 2)])
    assert g.size == 1


@pytest.mark.parametrize("edge", [(0, 1), (1, 4), (2, 2)])
def test_build_graph_rejects(edge):
    with pytest.raises(ValueError):
        build_graph(3, [edge])


# -- forests and components ---------------------------------------------------


def test_is_forest_examples():
    assert is_forest(path_graph(4))
    assert not is_forest(complete_graph(3))
    assert not is_forest(cycle_graph(4))


def test_components_examples():
    conn = components(cycle_graph(5))
    assert len(conn.blocks) == 1 and conn.frag == frozenset()

    two = build_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
    parts = components(two)
    assert parts.big == {1, 2, 3}
    assert parts.frag == {4, 5, 6}

    bare = components(build_graph(3, []))
    assert len(bare.blocks) == 3 and bare.big == {1}


def test_components_picks_largest():
    g = build_graph(5, [(1, 2), (3, 4), (4, 5)])
    assert components(g).big == {3, 4, 5}


# -- two-core and topological core --------------------------------------------


def test_two_core_examples():
    assert two_core(path_graph(5)).order == 0
    pendant = build_graph(4, [(1, 2), (2, 3), (1, 3), (3, 4)])
    assert set(two_core(pendant).vertices()) == {1, 2, 3}
    assert two_core(complete_graph(4)) == complete_graph(4)


def test_topological_core_cycle_is_loop():
    m = topological_core(cycle_graph(6))
    assert m.order == 1
    (v,) = m.vertices
    assert m.edges == {(v, v): 1}


def test_topological_core_subdivided_k4():
    # every edge of K4 subdivided by one new vertex
    edges, nxt = [], 5
    for u in range(1, 5):
        for v in range(u + 1, 5):
            edges += [(u, nxt), (nxt, v)]
            nxt += 1
    m = topological_core(build_graph(10, edges))
    assert m.vertices == {1, 2, 3, 4}
    assert m.is_simple() and m.size == 6


def test_topological_core_theta():
    # 1 and 2 joined by paths 1-3-2, 1-4-2, 1-5-6-2
    g = build_graph(6, [(1, 3), (3, 2), (1, 4), (4, 2), (1, 5), (5, 6), (6, 2)])
    m = topological_core(g)
    assert m.vertices == {1, 2}
    assert m.edges == {(1, 2): 3}


# -- spikes -------------------------------------------------------------------


def test_spikes_examples():
    assert spikes(path_graph(3)) == []
    assert sorted(spikes(path_graph(4))) == [(1, 2), (4, 3)]
    star = build_graph(4, [(1, 2), (1, 3), (1, 4)])
    assert spikes(star) == []


# -- chordless cycles ---------------------------------------------------------


def test_chordless_cycles_examples():
    assert chordless_cycles(path_graph(6)) == []
    tris = chordless_cycles(complete_graph(4))
    assert sorted(map(sorted, tris)) == [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
    assert chordless_cycles(cycle_graph(5)) == [frozenset(range(1, 6))]


def test_chordless_cycles_guard():
    with pytest.raises(SizeGuardError):
        chordless_cycles(cycle_graph(17))


def test_chordless_cycles_are_induced_cycles():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(3, 8)
        g = build_graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < 0.45])
        found = chordless_cycles(g)
        assert len(set(found)) == len(found)
        for c in found:
            h = g.induced(c)
            assert len(c) >= 3 and all(h.degree(v) == 2 for v in c)
            assert len(components(h).blocks) == 1


# -- exhaustive properties on n <= 6 -----------------------------------------


def test_forest_characterisations_agree():
    for g in small_graphs(6):
        a = is_forest(g)
        assert a == (not chordless_cycles(g))
        assert a == (two_core(g).order == 0)
        assert a == (g.size == g.order - len(components(g).blocks))


def test_two_core_idempotent_and_min_degree():
    for g in small_graphs(6):
        core = two_core(g)
        assert two_core(core) == core
        assert all(core.degree(v) >= 2 for v in core.vertices())


def test_spikes_disjoint():
    for g in small_graphs(6):
        used: set[int] = set()
        for u, v in spikes(g):
            assert g.degree(u) == 1 and g.degree(v) == 2 and g.has_edge(u, v)
            assert u not in used and v not in used
            used |= {u, v}


# -- serialisation -------------------------------------------------------------


def test_pair_table_colex():
    # internal 0-based labels
    assert pair_table(4) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert graph_from_mask(3, 0b100).edges() == [(2, 3)]


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (n * (n - 1) // 2)) - 1))))
def test_mask_round_trip(args):
    n, mask = args
    g = graph_from_mask(n, mask)
    assert graph_to_mask(g) == mask
    assert parse_edge_list(format_edge_list(g)) == g


def test_parse_edge_list_errors():
    with pytest.raises(ValueError):
        parse_edge_list("3 2\n1 2\n")
    with pytest.raises(ValueError):
        parse_edge_list("3 1\n1 5\n")


# -- subdivision round trip ----------------------------------------------------


def _random_core_multigraph(rng: random.Random) -> Multigraph:
    """Connected loopless multigraph with minimum degree >= 3."""
    while True:
        k = rng.randint(2, 6)
        edges: dict = {}
        for i in range(1, k):
            j = rng.randint(0, i - 1)
            key = (j + 1, i + 1)
            edges[key] = edges.get(key, 0) + 1
        for _ in range(rng.randint(k, 3 * k)):
            a, b = sorted(rng.sample(range(1, k + 1), 2))
            edges[(a, b)] = edges.get((a, b), 0) + 1
        m = Multigraph(frozenset(range(1, k + 1)), edges)
        if all(m.degree(v) >= 3 for v in m.vertices):
            return m


def _subdivide(m: Multigraph, rng: random.Random):
    """Simple graph obtained by subdividing every edge 1..3 times (parallel
    edges need at least one internal vertex each to stay simple)."""
    edges = []
    nxt = max(m.vertices) + 1
    for (u, v), mult in sorted(m.edges.items()):
        for _ in range(mult):
            prev = u
            for _ in range(rng.randint(1, 3)):
                edges.append((prev, nxt))
                prev, nxt = nxt, nxt + 1
            edges.append((prev, v))
    return build_graph(nxt - 1, edges)


def _shuffled(g, rng: random.Random):
    perm = list(range(1, g.n + 1))
    rng.shuffle(perm)
    return build_graph(g.n, [(perm[u - 1], perm[v - 1]) for u, v in g.edges()]), perm


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_subdivision_round_trip(seed):
    rng = random.Random(seed)
    m = _random_core_multigraph(rng)
    g, perm = _shuffled(_subdivide(m, rng), rng)
    core = topological_core(g)
    expected = m.relabel({v: perm[v - 1] for v in m.vertices})
    assert core == expected
