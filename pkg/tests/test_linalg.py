from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from maxsym.linalg import AffineSystem, InconsistentSystem, rref

V = ("a", "b", "c", "d")


def test_parse_chain_and_print():
    s = AffineSystem.parse(V, "a = b + 1 = c + 1 = d")
    assert s.codimension == 3
    assert s == AffineSystem.parse(V, "a = d, b = d - 1, c = d - 1")
    assert str(AffineSystem.parse(V, "a = c + 1, d = b + 1")) == "{a = c + 1, b = d - 1}"


def test_full_space_and_points():
    assert AffineSystem(V).is_full_space
    s = AffineSystem.parse(V, "a = b + c, d = 2")
    assert s.contains_point((5, 2, 3, 2))
    assert not s.contains_point((5, 2, 3, 3))
    assert s.contains_point({"a": 5, "b": 2, "c": 3, "d": 2})


def test_containment():
    big = AffineSystem.parse(V, "a = d")
    small = AffineSystem.parse(V, "a = d = 2, b = c = 1")
    assert small.is_subspace_of(big)
    assert not big.is_subspace_of(small)
    assert big.is_subspace_of(big)


def test_inconsistent():
    with pytest.raises(InconsistentSystem):
        AffineSystem.parse(V, "a = 1, a = 2")


def test_rref_is_reduced():
    rows, pivots = rref([[2, 4, 6], [1, 1, 1]], 3)
    assert pivots == [0, 1]
    assert rows[0][:2] == [1, 0] and rows[1][:2] == [0, 1]


coef = st.integers(-3, 3)


@st.composite
def systems(draw):
    n = draw(st.integers(0, 3))
    # build from a known point so the system is consistent
    point = draw(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
    eqs = []
    for _ in range(n):
        cs = draw(st.lists(coef, min_size=4, max_size=4))
        eq = dict(zip(V, cs))
        eq[1] = -sum(c * p for c, p in zip(cs, point))
        eqs.append(eq)
    return AffineSystem(V, eqs), tuple(point), eqs


@given(systems())
def test_known_point_is_contained(sp):
    s, point, _ = sp
    assert s.contains_point(point)
    assert s.is_subspace_of(AffineSystem(V))


@given(systems(), systems())
def test_intersection_is_contained_in_both(a, b):
    sa, sb = a[0], b[0]
    try:
        both = sa.intersect(sb)
    except InconsistentSystem:
        return
    assert both.is_subspace_of(sa) and both.is_subspace_of(sb)
    assert both.codimension >= max(sa.codimension, sb.codimension)


@given(systems())
def test_canonical_form_ignores_equation_order(sp):
    s = sp[0]
    eqs = list(s.equations())
    again = AffineSystem.parse(V, ", ".join(reversed(eqs))) if eqs else AffineSystem(V)
    assert again == s and hash(again) == hash(s)


@given(systems(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_membership_matches_substitution(sp, point):
    s, _, eqs = sp
    direct = all(sum(Fraction(eq[v]) * x for v, x in zip(V, point)) + eq[1] == 0 for eq in eqs)
    assert s.contains_point(point) == direct
