from __future__ import annotations

import random
from itertools import combinations

import pytest

from apexforest.blockers import (
    BlockerCertificate,
    certificate_ok,
    cycle_packing_number,
    is_apex_forest,
    is_blocker,
    is_in_ex_cycles,
    min_blocker,
    non_redundant_vertices,
    redundant_blocker,
    verify_redundant,
)
from apexforest.errors import NotABlockerError, NotInClassError, SizeGuardError
from apexforest.graph import (
    all_graphs,
    build_graph,
    chordless_cycles,
    complete_graph,
    cycle_graph,
    is_forest,
    path_graph,
)

TWO_TRIANGLES = build_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])


def random_graph(rng: random.Random, n: int, p: float):
    return build_graph(n, [(u, v) for u, v in combinations(range(1, n + 1), 2) if rng.random() < p])


def brute_min_blocker_size(g) -> int:
    verts = g.vertices()
    for size in range(len(verts) + 1):
        for b in combinations(verts, size):
            if is_forest(g.delete(b)):
                return size
    raise AssertionError("deleting everything leaves a forest")


# -- packing ------------------------------------------------------------------


def test_packing_examples():
    assert cycle_packing_number(complete_graph(5))[0] == 1
    count, witness = cycle_packing_number(TWO_TRIANGLES)
    assert count == 2 and len(witness) == 2
    assert cycle_packing_number(path_graph(5))[0] == 0


def test_packing_witness_valid():
    rng = random.Random(11)
    for _ in range(300):
        g = random_graph(rng, rng.randint(3, 10), rng.uniform(0.2, 0.6))
        count, witness = cycle_packing_number(g)
        assert len(witness) == count
        seen: set[int] = set()
        for c in witness.cycles:
            assert not (seen & c)
            seen |= c
            assert not is_forest(g.induced(c))


def test_packing_guard():
    with pytest.raises(SizeGuardError):
        cycle_packing_number(cycle_graph(17))


# -- blockers -------------------------------------------------------------------


def test_min_blocker_examples():
    b = min_blocker(cycle_graph(6))
    assert len(b) == 1
    assert len(min_blocker(complete_graph(5))) == 3
    assert min_blocker(path_graph(4)) == frozenset()


def test_min_blocker_is_lexicographically_least():
    rng = random.Random(3)
    for _ in range(150):
        g = random_graph(rng, rng.randint(3, 8), rng.uniform(0.3, 0.7))
        size = brute_min_blocker_size(g)
        least = next(
            frozenset(b) for b in combinations(g.vertices(), size) if is_forest(g.delete(b))
        )
        assert min_blocker(g) == least


def test_ex_cycles_examples():
    assert is_in_ex_cycles(complete_graph(5), 1)
    assert not is_in_ex_cycles(TWO_TRIANGLES, 1)
    for n in range(1, 6):
        assert all(is_in_ex_cycles(g, 1) for g in all_graphs(n))


def test_apex_forest_examples():
    assert is_apex_forest(complete_graph(4), 1) == (False, None)
    ok, witness = is_apex_forest(complete_graph(4), 2)
    assert ok and is_blocker(complete_graph(4), witness)
    assert is_apex_forest(path_graph(5), 0) == (True, frozenset())
    with pytest.raises(ValueError):
        is_apex_forest(path_graph(3), -1)


def test_apex_implies_ex_and_weak_duality():
    for n in range(1, 7):
        for g in all_graphs(n):
            nu = cycle_packing_number(g)[0]
            tau = len(min_blocker(g))
            assert tau >= nu
            for k in range(3):
                apex = is_apex_forest(g, k)[0]
                assert apex == (tau <= k)
                if apex:
                    assert is_in_ex_cycles(g, k)


def test_weak_duality_random():
    rng = random.Random(12)
    for _ in range(300):
        n = rng.randint(7, 12)
        g = random_graph(rng, n, rng.uniform(0.15, 0.5))
        assert len(min_blocker(g)) >= cycle_packing_number(g)[0]


def test_min_blocker_size_matches_brute_force():
    rng = random.Random(4)
    for _ in range(200):
        g = random_graph(rng, rng.randint(3, 9), rng.uniform(0.2, 0.6))
        b = min_blocker(g)
        assert is_blocker(g, b) and len(b) == brute_min_blocker_size(g)


# -- redundant blockers --------------------------------------------------------


def test_verify_redundant_examples():
    assert verify_redundant(path_graph(4), set(), 0)
    tri = complete_graph(3)
    assert not verify_redundant(tri, {1}, 0)
    assert verify_redundant(tri, {1, 2}, 0)
    assert not verify_redundant(tri, set(), 5)


def test_redundant_blocker_forest_base_case():
    g = path_graph(5)
    cert = redundant_blocker(g, 0, {2, 4})
    assert cert.S == cert.A == frozenset() and cert.B == {2, 4}


def test_redundant_blocker_k4():
    g = complete_graph(4)
    cert = redundant_blocker(g, 1, {1, 2})
    assert cert.S <= {1, 2} and len(cert.S) <= 1 and len(cert.A) <= 1
    assert len(cert.B) == 3
    assert verify_redundant(g, cert.B, 1) and certificate_ok(g, cert)


def test_redundant_blocker_triangle_with_isolated():
    g = build_graph(5, [(1, 2), (2, 3), (1, 3)])
    cert = redundant_blocker(g, 1, {1})
    assert cert.S == {1} and len(cert.A) == 1
    assert len(cert.B) <= 2 and verify_redundant(g, cert.B, 1)


def test_redundant_blocker_errors():
    with pytest.raises(NotABlockerError):
        redundant_blocker(complete_graph(4), 1, {1})
    # two disjoint triangles have no 0-redundant extension of a single vertex per triangle
    with pytest.raises(NotInClassError):
        redundant_blocker(TWO_TRIANGLES, 1, {1, 4})
    with pytest.raises(ValueError):
        redundant_blocker(complete_graph(3), -1, {1})


def test_certificate_json_round_trip():
    g = complete_graph(4)
    cert = redundant_blocker(g, 1, {1, 2})
    again = BlockerCertificate.from_json(cert.to_json())
    assert again == cert
    assert '"k": 1' in cert.to_json()


def test_redundant_blocker_exhaustive_small():
    for n in range(1, 6):
        for g in all_graphs(n):
            q = min_blocker(g)
            cert = redundant_blocker(g, 1, q)
            assert certificate_ok(g, cert)
            assert len(cert.B) <= len(q) + 1


def _equivalent_form(g, b, k) -> bool:
    """Some S in B with |S| <= k such that every cycle of G - S meets B - S twice."""
    b = frozenset(b)
    if not is_blocker(g, b):
        return False
    for size in range(min(k, len(b)) + 1):
        for s in combinations(sorted(b), size):
            rest = b - set(s)
            h = g.delete(s)
            # a cycle meeting B - S at most once exists iff, for some x in
            # B - S (or none), the graph without the other B - S vertices has one
            ok = is_forest(h.delete(rest))
            if ok:
                for x in rest:
                    if not is_forest(h.delete(rest - {x})):
                        ok = False
                        break
            if ok:
                return True
    return False


def test_verify_redundant_matches_equivalent_form():
    rng = random.Random(21)
    checked = 0
    for _ in range(400):
        n = rng.randint(3, 8)
        g = random_graph(rng, n, rng.uniform(0.2, 0.6))
        b = frozenset(rng.sample(range(1, n + 1), rng.randint(0, n)))
        for k in range(3):
            assert verify_redundant(g, b, k) == _equivalent_form(g, b, k)
            checked += 1
    assert checked == 1200


def test_non_redundant_vertices_definition():
    g = complete_graph(4)
    assert non_redundant_vertices(g, {1, 2}) == [1, 2]
    assert non_redundant_vertices(g, {1, 2, 3}) == []


def test_chordless_cycles_cover_every_cycle():
    # every cycle contains a chordless one, so no chordless cycle means forest
    rng = random.Random(8)
    for _ in range(200):
        g = random_graph(rng, rng.randint(3, 9), rng.uniform(0.1, 0.5))
        assert (not chordless_cycles(g)) == is_forest(g)
