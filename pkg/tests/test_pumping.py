import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus import full_corpus, multiround_corpus, planted_corpus
from maxsym.covering import are_isomorphic, certify, identity, minimal_subcover, verify_covering
from maxsym.families import arc, edge_graph, loop_graph, path, triangle, wallet_triangle
from maxsym.graph import Edge, EdgeIndexedGraph, End, GraphError
from maxsym.pumping import (Blowup, PumpError, ThornError, Witness, collapse_11_forest, collapse_and_subcover,
                            compose_blowups, enumerate_blowups, has_blowup_and_proper_subcover, index1_collapse,
                            is_maximally_symmetric, local_trees, maximal_index1_forest_collapse,
                            partial_collapses, pump_up, pushout, subroutine1, subroutine2, trivial_blowup,
                            verify_blowup, verify_collapse, verify_witness)


def iso(a, b):
    return are_isomorphic(a, b) is not None


# -- collapses ----------------------------------------------------------------------


def test_index1_collapse_multiplies_the_index_one_side():
    n, a, b, c, d = 4, 2, 3, 5, 7
    g = EdgeIndexedGraph.from_edges([("h", "v", 1, "w", n), ("ea", "v", a, "x", 2), ("ec", "v", c, "y", 2),
                                     ("eb", "w", b, "p", 2), ("ed", "w", d, "q", 2)])
    col = index1_collapse(g, "h")
    z = col.target
    assert sorted(z.label(e) for e in z.ends_at("w")) == sorted([a * n, c * n, b, d])
    verify_collapse(col)


def test_wallet_collapses_to_loop():
    g = wallet_triangle()
    step = index1_collapse(g, "TL")
    assert len(step.target.vertices) == 2
    col = maximal_index1_forest_collapse(g)
    assert iso(col.target, loop_graph(1, 105))
    verify_collapse(col)


def test_one_one_collapse_changes_no_index():
    g = path((4, 5), (1, 1), (3, 6))
    col = index1_collapse(g, "e2")
    assert set(col.multiplier.values()) == {1}
    assert iso(col.target, arc(4, 5, 3, 6))
    assert iso(maximal_index1_forest_collapse(g).target, arc(4, 5, 3, 6))
    assert maximal_index1_forest_collapse(arc(4, 5, 3, 6)).is_trivial


def test_collapse_rejects_edges_without_index_one():
    with pytest.raises(PumpError):
        index1_collapse(arc(2, 3, 4, 5), "e1")
    with pytest.raises(PumpError):
        index1_collapse(loop_graph(1, 3), "e")


def test_collapse_and_subcover_examples():
    h, cert = collapse_and_subcover(wallet_triangle())
    assert iso(h, edge_graph(2, 106))
    cert.replay()
    g = arc(4, 5, 3, 6)
    h, cert = collapse_and_subcover(g)
    assert h == g and not cert.steps
    h, cert = collapse_and_subcover(path((4, 5), (1, 1), (3, 6)))
    assert iso(h, arc(4, 5, 3, 6))


# -- blowups ------------------------------------------------------------------------


def test_blowup_counts():
    assert len(enumerate_blowups(arc(2, 3, 4, 5))) == 2
    assert len(enumerate_blowups(edge_graph(5, 3))) == 1
    assert len(enumerate_blowups(triangle(2, 3, 2, 3, 2, 3))) == 8


def test_arc_blowup_is_the_middle_split():
    bs = enumerate_blowups(arc(4, 5, 3, 6))
    assert bs[0].is_trivial
    assert iso(bs[1].graph, path((4, 5), (1, 1), (3, 6)))
    for b in bs:
        verify_blowup(b)


def test_local_tree_counts_by_valence():
    star = {3: 8, 4: 64}
    for k, expected in star.items():
        g = EdgeIndexedGraph.from_edges([(f"e{i}", "c", 2, f"x{i}", 3) for i in range(k)])
        assert len(local_trees(g, "c")) == expected


def test_blowup_collapse_roundtrip():
    for b in enumerate_blowups(triangle(2, 3, 2, 3, 2, 3)):
        back, comp = collapse_11_forest(b.graph, b.forest)
        assert iso(back, b.base)


def test_verify_blowup_rejects_bad_forests():
    g = arc(4, 5, 3, 6)
    b = enumerate_blowups(g)[1]
    (f,) = b.forest
    bad_graph = b.graph.replace(edges=[Edge(x.name, x.u, 2 if x.name == f else x.iu, x.w, x.iw)
                                       for x in b.graph.edges])
    with pytest.raises(PumpError, match="1-1"):
        verify_blowup(Blowup(g, bad_graph, b.forest, b.vertex_map))
    # splitting a lone end off an edge graph makes a thorn
    e = edge_graph(5, 3)
    thorny = EdgeIndexedGraph.from_edges([("e", "u", 5, "w", 3), ("f", "w", 1, "w2", 1)])
    with pytest.raises(PumpError):
        verify_blowup(Blowup(e, thorny, frozenset({"f"}), {"u": "u", "w": "w", "w2": "w"}))


# -- blowup and subcover --------------------------------------------------------------


def test_arc_witness():
    w = has_blowup_and_proper_subcover(arc(4, 5, 3, 6))
    assert w is not None
    assert iso(w.blowup.graph, path((4, 5), (1, 1), (3, 6)))
    assert iso(w.target, edge_graph(6, 4))
    verify_witness(w)
    assert subroutine1(arc(4, 5, 3, 6), w) is w


def test_no_witness_examples():
    for p, q in [(3, 2), (5, 3), (9, 2)]:
        assert has_blowup_and_proper_subcover(edge_graph(p, q)) is None
    assert has_blowup_and_proper_subcover(arc(3, 7, 2, 9)) is None


def test_thorns_are_rejected():
    g = path((1, 3), (4, 5), (3, 6))
    with pytest.raises(ThornError):
        pump_up(g)
    with pytest.raises(ThornError):
        enumerate_blowups(g)


# -- pushout --------------------------------------------------------------------------


def test_pushout_with_identity_recovers_the_blowup():
    g = arc(4, 5, 3, 6)
    q = enumerate_blowups(g)[1]
    res = pushout(identity(g), q)
    assert res.new_edges == 1
    assert iso(res.blowup.graph, q.graph)
    assert verify_covering(res.cover)


def test_pushout_needs_a_single_edge_blowup():
    g = arc(4, 5, 3, 6)
    with pytest.raises(PumpError):
        pushout(identity(g), trivial_blowup(g))


def test_partial_collapses_chain_back_to_the_base():
    for b in enumerate_blowups(triangle(2, 3, 2, 3, 2, 3)):
        steps = partial_collapses(b)
        assert len(steps) == len(b.forest)
        if steps:
            assert steps[0].graph == b.graph and steps[-1].base == b.base
            acc = steps[-1]
            for s in reversed(steps[:-1]):
                acc = compose_blowups(acc, s)
            verify_blowup(acc)
            assert acc.forest == b.forest


def chained_witnesses(g):
    """Two consecutive blowup-and-subcover moves out of the pumping loop, if any."""
    g1, _ = collapse_and_subcover(g)
    w = has_blowup_and_proper_subcover(g1)
    if w is None:
        return None
    w = subroutine1(g1, w)
    nxt = has_blowup_and_proper_subcover(w.target)
    if nxt is None:
        return None
    return w, subroutine1(w.target, nxt)


@pytest.mark.parametrize("g", multiround_corpus(), ids=lambda g: repr(g)[16:60])
def test_pushout_forest_count(g):
    pair = chained_witnesses(g)
    assert pair is not None
    first, second = pair
    mu, blow, added = first.cover, first.blowup, 0
    for step in reversed(partial_collapses(second.blowup)):
        res = pushout(mu, step)
        over = [v for v in mu.source.vertices if mu.vertex_map[v] == step.vertex_map[step.graph.edge(next(iter(step.forest))).u]]
        assert res.new_edges == len(over) >= 1
        assert verify_covering(res.cover)
        nxt = compose_blowups(blow, res.blowup)
        assert len(nxt.forest) == len(blow.forest) + res.new_edges
        blow, mu, added = nxt, res.cover, added + res.new_edges
    assert added >= len(second.blowup.forest)
    merged = subroutine2(first, second)
    verify_witness(merged)
    assert len(merged.blowup.forest) == len(first.blowup.forest) + added
    assert len(merged.blowup.forest) > len(first.blowup.forest)


# -- pump_up and the decision -----------------------------------------------------------


def test_pump_up_examples():
    h, cert = pump_up(arc(4, 5, 3, 6))
    assert iso(h, edge_graph(6, 4))
    cert.replay()
    h, cert = pump_up(wallet_triangle())
    assert iso(h, edge_graph(2, 106))
    cert.replay()
    for p in range(3, 10):
        for q in range(2, p):
            h, cert = pump_up(edge_graph(p, q))
            assert h == edge_graph(p, q) and not cert.steps


def test_pump_up_refuses_non_bushy():
    with pytest.raises(Exception):
        pump_up(edge_graph(2, 2))


def test_maxsym_examples():
    assert is_maximally_symmetric(edge_graph(5, 3))
    r = is_maximally_symmetric(arc(4, 5, 3, 6))
    assert not r and r.clause == "blowup and proper subcover"
    assert iso(r.witness.target, edge_graph(6, 4))
    for p in range(3, 7):
        r = is_maximally_symmetric(edge_graph(p, p))
        assert not r and r.clause == "proper subcover"
        assert iso(r.witness.target, edge_graph(p, 2))
        verify_witness(r.witness)


def test_maxsym_index_one_clauses():
    g = EdgeIndexedGraph.from_edges([("a", "x", 1, "y", 3), ("b", "x", 4, "y", 5)])
    r = is_maximally_symmetric(g)
    assert not r and r.clause == "index-1 edges are 1-1"
    g = EdgeIndexedGraph.from_edges([("a", "x", 1, "y", 1), ("b", "y", 1, "x", 1), ("c", "x", 3, "y", 4)])
    r = is_maximally_symmetric(g)
    assert not r and r.clause == "index-1 edges form a forest"


def test_collapse_order_is_not_confluent():
    # different maximal index-1 forests give different pumped-up graphs
    g = EdgeIndexedGraph.from_edges([("e0", "v0", 6, "v1", 1), ("e1", "v0", 1, "v2", 4),
                                     ("e2", "v1", 5, "v2", 1), ("e3", "v0", 1, "v0", 3)])
    results = set()
    for order in (["e0", "e1"], ["e1", "e0"], ["e2", "e0"], ["e0", "e2"]):
        cur = g
        for e in order:
            if cur.has_edge(e) and not cur.edge(e).is_loop and 1 in (cur.edge(e).iu, cur.edge(e).iw):
                cur = index1_collapse(cur, e).target
        results.add(minimal_subcover(cur)[0])
    totals = {tuple(sorted(h.total_index(v) for v in h.vertices)) for h in results}
    assert len(totals) >= 2
    h, cert = pump_up(g)
    cert.replay()
    assert is_maximally_symmetric(h)


def test_regression_two_round_input():
    g = EdgeIndexedGraph.from_edges([("e1.0", "m.0", 3, "m.1", 5), ("e1.2", "u.1", 4, "m.0", 4),
                                     ("e2.0", "m.0", 3, "w.0", 2), ("e2.1", "m.1", 3, "w.0", 4)])
    h, cert = pump_up(g)
    assert iso(h, edge_graph(4, 6))
    assert cert.forest_sizes == (1, 3)
    cert.replay()


CORPUS = full_corpus()


@pytest.mark.parametrize("g", CORPUS, ids=lambda g: repr(g)[16:70])
def test_pump_up_properties(g):
    h, cert = pump_up(g)
    cert.replay()
    for m in cert.maps():
        assert verify_covering(m), verify_covering(m).verdict
    for a, b in zip(cert.forest_sizes, cert.forest_sizes[1:]):
        assert a < b
    # the output is maximally symmetric and a fixed point
    assert is_maximally_symmetric(h)
    h2, cert2 = pump_up(h)
    assert h2 == h and not cert2.steps
    # search orders do not matter
    for seed in (0, 1):
        assert iso(pump_up(g, rng=random.Random(seed))[0], h)
    # decision against the pumping result
    ones = [e.name for e in g.edges if 1 in (e.iu, e.iw)]
    try:
        core, _ = collapse_11_forest(g, ones)
        expected = iso(core, h)
    except PumpError:
        expected = False
    assert bool(is_maximally_symmetric(g)) == expected


def test_corpus_exercises_every_branch():
    rounds = [len(pump_up(g)[1].forest_sizes) for g in CORPUS]
    assert rounds.count(0) > 50
    assert rounds.count(1) > 5
    assert rounds.count(2) >= 10


@settings(max_examples=40)
@given(st.integers(0, 10**9))
def test_planted_graphs_pump_consistently(seed):
    from maxsym.families import planted_graph
    g = planted_graph(random.Random(seed))
    h, cert = pump_up(g)
    cert.replay()
    assert is_maximally_symmetric(h)
    assert iso(pump_up(g, rng=random.Random(seed))[0], h)
