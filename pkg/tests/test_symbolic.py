import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from maxsym.covering import verify_covering
from maxsym.families import arc, edge_graph, loop_graph, triangle
from maxsym.graph import EdgeIndexedGraph, is_unimodular
from maxsym.linalg import AffineSystem, InconsistentSystem
from maxsym.pumping import is_maximally_symmetric
from maxsym.search import quotient_patterns
from maxsym.symbolic import (LHS, EvenCoveringSystem, GraphShape, ShapeError, check_consistency, compute_X,
                             enumerate_maxsym_indexings, is_vacuous_isomorphism, prune, reduce_system,
                             symbolic_blowups, symbolic_subcovers, unimodular_variety, _system)

ARC = GraphShape(arc("a", "b", "c", "d"))
EDGE = GraphShape(edge_graph("x1", "x2"))
TRI = GraphShape(triangle(*"abcdef"))
STAR = GraphShape(EdgeIndexedGraph.from_edges([(f"e{i}", "c", f"a{i}", f"x{i}", f"b{i}") for i in range(3)],
                                              symbolic=True))
V = ARC.variables

# the thirteen subcovers of the arc and its blowup, in the worked example's numbering
WORKED_CASES = {
    1: "a = d",
    2: "a = b + c, d = 2",
    3: "a = 2, d = b + c",
    4: "a = b + c = d",
    5: "a = c + 1, d = b + 1",
    6: "a = b + 1 = d, c = 1",
    7: "a = d = 2, b = c",
    8: "a = d, b = c",
    9: "a = c + 1 = d, b = 1",
    10: "a = b + 1 = c + 1, d = 2",
    11: "a = d = 2, b = c = 1",
    12: "a = 2, d = c + 1 = b + 1",
    13: "a = b + 1 = c + 1 = d",
}
SURVIVORS = (1, 2, 3, 5, 10, 12)


def case(i):
    return AffineSystem.parse(V, WORKED_CASES[i])


@pytest.fixture(scope="module")
def arc_report():
    return compute_X(ARC)


def test_blowup_counts():
    assert len(symbolic_blowups(ARC)) == 2
    assert len(symbolic_blowups(EDGE)) == 1
    assert len(symbolic_blowups(TRI)) == 8


def test_pattern_counts():
    b0, b1 = symbolic_blowups(ARC)
    assert len(symbolic_subcovers(b0, V)) == 4
    assert len(symbolic_subcovers(b1, V)) == 9
    (only,) = symbolic_subcovers(symbolic_blowups(EDGE)[0], EDGE.variables)
    assert only.subdivided == {"e"}


def test_thirteen_systems_match_the_worked_example(arc_report):
    got = [e.system for e in arc_report.entries]
    assert len(got) == 13
    expected = [case(i) for i in range(1, 14)]
    assert sorted(got, key=AffineSystem.sort_key) == sorted(expected, key=AffineSystem.sort_key)
    # the unsubdivided blowup's cases come first, in the same order
    assert got[:5] == expected[:5]


def test_six_subspaces_survive_pruning(arc_report):
    assert set(arc_report.subspaces) == {case(i) for i in SURVIVORS}
    assert len(arc_report.subspaces) == 6
    x1 = case(1)
    for i in (4, 6, 7, 8, 9, 11, 13):
        assert case(i).is_subspace_of(x1)
    # no containments are left among the six
    for a, b in itertools.permutations(arc_report.subspaces, 2):
        assert not a.is_subspace_of(b)


def test_reduced_examples(arc_report):
    systems = [e.system for e in arc_report.entries]
    for i in (1, 5, 11):
        assert case(i) in systems


def test_edge_shape_subspace():
    r = compute_X(EDGE)
    assert r.subspaces == (AffineSystem.parse(EDGE.variables, "x1 = x2"),)


def test_consistency_examples(arc_report):
    ok = EvenCoveringSystem(("x",), (((0, 0), (("v", LHS(("x",), 0)), ("w", LHS(("x",), 1)))),))
    assert check_consistency(ok)
    bad = EvenCoveringSystem(("x",), (((0, 0), (("v", LHS((), 1)), ("w", LHS((), 2)))),))
    assert not check_consistency(bad)
    with pytest.raises(InconsistentSystem):
        reduce_system(bad)
    assert arc_report.inconsistent == 0


def test_inconsistent_systems_have_differing_forest_groups():
    r = compute_X(STAR)
    assert r.inconsistent > 0
    seen = 0
    for b in symbolic_blowups(STAR):
        for sp in symbolic_subcovers(b, STAR.variables):
            if check_consistency(sp.system):
                continue
            seen += 1
            assert any(len({lhs.const for _, lhs in rows if not lhs.variables}) > 1
                       for _, rows in sp.system.blocks)
    assert seen == r.inconsistent


def test_identity_pattern_is_vacuous():
    b = symbolic_blowups(ARC)[1]
    ident = next(p for p in quotient_patterns(b.graph, {}, numeric=False) if p.is_bijective())
    red = reduce_system(_system(ident, V))
    assert is_vacuous_isomorphism(ident, red)


@pytest.mark.parametrize("shape", [ARC, EDGE, TRI, STAR], ids=["arc", "edge", "triangle", "star"])
def test_only_isomorphisms_are_vacuous(shape):
    r = compute_X(shape)
    assert r.vacuous == 0
    for e in r.entries:
        assert e.system.codimension >= 1


def test_unimodular_varieties():
    assert not unimodular_variety(ARC).equations
    (eq,) = unimodular_variety(TRI).equations
    assert {frozenset(eq[0]), frozenset(eq[1])} == {frozenset("bdf"), frozenset("ace")}
    # a theta graph with two arms subdivided, so it has no bigon
    th = GraphShape(EdgeIndexedGraph.from_edges(
        [("p", "x", "a", "y", "b"), ("q1", "x", "c", "s", "d"), ("q2", "s", "e", "y", "f"),
         ("r1", "x", "g", "t", "h"), ("r2", "t", "i", "y", "j")], symbolic=True))
    y = unimodular_variety(th)
    assert len(y.equations) == 2
    for lhs, rhs in y.equations:
        assert len(lhs) == len(rhs) and not set(lhs) & set(rhs)


def test_box_enumeration_examples():
    pts = enumerate_maxsym_indexings(EDGE, 2, 5)
    assert len(pts) == 12 and all(p != q for p, q in pts)
    pts = set(enumerate_maxsym_indexings(ARC, 2, 4))
    assert (3, 4, 2, 4) in pts
    assert not any(a == d for a, b, c, d in pts)
    uni = enumerate_maxsym_indexings(ARC, 2, 4, "unimodular")
    assert set(uni) == pts
    assert enumerate_maxsym_indexings(ARC, 2, 4, "nonunimodular") == []


def test_shape_errors():
    with pytest.raises(ShapeError, match="loop"):
        GraphShape(loop_graph("a", "b"))
    with pytest.raises(ShapeError, match="bigon"):
        GraphShape(EdgeIndexedGraph.from_edges([("p", "x", "a", "y", "b"), ("q", "x", "c", "y", "d")],
                                               symbolic=True))
    with pytest.raises(ShapeError):
        GraphShape(arc("a", "b", "a", "d"))
    with pytest.raises(ShapeError):
        GraphShape(arc("a", 2, "c", "d"))


def test_every_integer_point_of_a_system_gives_a_cover(arc_report):
    for e in arc_report.entries:
        for point in itertools.product(range(2, 6), repeat=4):
            if e.system.contains_point(point):
                m = e.pattern.instantiate(dict(zip(V, point)))
                assert verify_covering(m), (e.system, point, verify_covering(m).verdict)


def test_pruning_keeps_the_union(arc_report):
    raw = [e.system for e in arc_report.entries]
    pruned = prune(raw)
    for point in itertools.product(range(1, 6), repeat=4):
        assert any(s.contains_point(point) for s in raw) == any(s.contains_point(point) for s in pruned)


@settings(max_examples=60)
@given(st.tuples(*[st.integers(2, 9)] * 4))
def test_subspaces_decide_maximal_symmetry_on_the_arc(point):
    r = compute_X(ARC)
    assert r.contains(point) == (not is_maximally_symmetric(ARC.instantiate(point)))


@settings(max_examples=40)
@given(st.tuples(*[st.integers(2, 5)] * 6))
def test_subspaces_decide_maximal_symmetry_on_the_triangle(point):
    r = _tri_report()
    assert r.contains(point) == (not is_maximally_symmetric(TRI.instantiate(point)))


@settings(max_examples=40)
@given(st.tuples(*[st.integers(2, 5)] * 6))
def test_subspaces_decide_maximal_symmetry_on_the_star(point):
    r = _star_report()
    assert r.contains(point) == (not is_maximally_symmetric(STAR.instantiate(point)))


@given(st.tuples(*[st.integers(2, 7)] * 6))
def test_variety_matches_unimodularity(point):
    y = unimodular_variety(TRI)
    assert y.contains_point(point) == is_unimodular(TRI.instantiate(point))


_cache = {}


def _tri_report():
    if "tri" not in _cache:
        _cache["tri"] = compute_X(TRI)
    return _cache["tri"]


def _star_report():
    if "star" not in _cache:
        _cache["star"] = compute_X(STAR)
    return _cache["star"]
