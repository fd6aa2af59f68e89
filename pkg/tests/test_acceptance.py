"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from corpus import full_corpus, multiround_corpus
from maxsym.covering import are_isomorphic, minimal_subcover, proper_subcovers, verify_covering
from maxsym.families import arc, edge_graph, path, triangle, wallet_triangle
from maxsym.formats import read_graph
from maxsym.graph import EdgeIndexedGraph, cycle_value, fundamental_cycles, is_unimodular
from maxsym.linalg import AffineSystem
from maxsym.pumping import (collapse_and_subcover, compose_blowups, has_blowup_and_proper_subcover,
                            is_maximally_symmetric, partial_collapses, pump_up, pushout, subroutine1,
                            subroutine2, verify_witness)
from maxsym.symbolic import GraphShape, compute_X, symbolic_blowups, unimodular_variety
from maxsym.ucover import build_truncated_cover, check_local_even_covering

DATA = Path(__file__).resolve().parents[1] / "data"
ARC = GraphShape(arc("a", "b", "c", "d"))

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
    return AffineSystem.parse(ARC.variables, WORKED_CASES[i])


def iso(a, b):
    return are_isomorphic(a, b) is not None


@pytest.fixture
def gate(capsys):
    """Call with (number, title, failures, budget_seconds) after timing starts."""
    start = time.perf_counter()

    def report(n, title, failures, budget):
        took = time.perf_counter() - start
        ok = not failures and took < budget
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title} ({took:.1f}s, budget {budget}s)")
            for f in failures[:10]:
                print(f"    {f}")
        assert not failures, failures[:10]
        assert took < budget, f"took {took:.1f}s"

    return report


def test_criterion_1_worked_example(gate):
    rep = compute_X(ARC)
    got = [e.system for e in rep.entries]
    failures = []
    if len(got) != 13:
        failures.append(f"{len(got)} systems before pruning")
    missing = [i for i in WORKED_CASES if case(i) not in got]
    failures += [f"case {i} missing: {WORKED_CASES[i]}" for i in missing]
    if set(rep.subspaces) != {case(i) for i in SURVIVORS} or len(rep.subspaces) != 6:
        failures.append(f"subspaces {[str(x) for x in rep.subspaces]}")
    gate(1, "13 systems, 6 subspaces on the arc shape", failures, 10)


def test_criterion_2_pumping_case_studies(gate):
    failures = []
    runs = [("arc 4536", arc(4, 5, 3, 6), edge_graph(6, 4)),
            ("wallet", wallet_triangle(), edge_graph(2, 106))]
    runs += [(f"EDGE({p},{q})", edge_graph(p, q), edge_graph(p, q)) for p in range(3, 10) for q in range(2, p)]
    for name, g, want in runs:
        h, cert = pump_up(g)
        if not iso(h, want):
            failures.append(f"{name} pumps to {h!r}")
        if g == want and (h != g or cert.steps):
            failures.append(f"{name} is not fixed")
        try:
            cert.replay()
        except Exception as exc:
            failures.append(f"{name} certificate: {exc}")
        failures += [f"{name} map: {verify_covering(m).verdict}" for m in cert.maps() if not verify_covering(m)]
    gate(2, "pump_up case studies", failures, 5)


def test_criterion_3_maxsym_decisions(gate):
    failures = []
    for p in range(3, 10):
        for q in range(2, p):
            if not is_maximally_symmetric(edge_graph(p, q)):
                failures.append(f"EDGE({p},{q}) not maxsym")
    for p in range(3, 7):
        r = is_maximally_symmetric(edge_graph(p, p))
        if r or r.witness is None:
            failures.append(f"EDGE({p},{p}) maxsym")
            continue
        verify_witness(r.witness)
        if not (verify_covering(r.witness.cover) and iso(r.witness.target, edge_graph(p, 2))):
            failures.append(f"EDGE({p},{p}) witness goes to {r.witness.target!r}")
    gate(3, "maximal symmetry of EDGE(p,q) and EDGE(p,p)", failures, 5)


def test_criterion_4_cross_oracle_sweep(gate):
    subspaces = [case(i) for i in SURVIVORS]
    failures = []
    for t in itertools.product(range(2, 7), repeat=4):
        symbolic = not any(x.contains_point(t) for x in subspaces)
        direct = bool(is_maximally_symmetric(arc(*t)))
        if symbolic != direct:
            failures.append(f"{t}: direct {direct}, symbolic {symbolic}")
    gate(4, "625 arc tuples, direct decision vs six subspaces", failures, 120)


def test_criterion_5_unimodularity(gate):
    failures = []
    trees = [read_graph(DATA / f) for f in ("arc4536.eig", "edge32.eig", "edge33.eig")]
    trees += [arc(4, 5, 3, 6), edge_graph(7, 2), path((2, 3), (4, 5), (6, 7))]
    trees += [g for g in full_corpus() if not fundamental_cycles(g)]
    failures += [f"tree {g!r} not unimodular" for g in trees if not is_unimodular(g)]
    tri = triangle(2, 3, 2, 3, 2, 3)
    (cyc,) = fundamental_cycles(tri)
    if is_unimodular(tri) or cycle_value(tri, cyc) not in (Fraction(27, 8), Fraction(8, 27)):
        failures.append(f"triangle cycle value {cycle_value(tri, cyc)}")
    shape = GraphShape(triangle(*"abcdef"))
    variety = unimodular_variety(shape)
    rng = random.Random(5)
    on = 0
    for k in range(100):
        # half the samples are forced onto the variety so both sides are exercised
        t = [rng.randint(2, 6) for _ in range(6)]
        if k % 2:
            t[1], t[3], t[5] = t[0], t[2], t[4]
        on += variety.contains_point(t)
        if variety.contains_point(t) != is_unimodular(shape.instantiate(t)):
            failures.append(f"triangle {t}")
    if not 0 < on < 100:
        failures.append(f"{on} of 100 samples on the variety")
    gate(5, f"unimodularity ({len(trees)} trees, 100 triangle tuples)", failures, 60)


def test_criterion_6_blowup_counts(gate):
    counts = [len(symbolic_blowups(s)) for s in
              (ARC, GraphShape(edge_graph("x1", "x2")), GraphShape(triangle(*"abcdef")))]
    failures = [] if counts == [2, 1, 8] else [f"counts {counts}"]
    gate(6, "blowup counts 2, 1, 8", failures, 10)


def test_criterion_7_cover_balls(gate):
    failures = []
    t = build_truncated_cover(edge_graph(3, 2), "u", 3)
    if t.level_sizes() != [1, 3, 3, 6]:
        failures.append(f"EDGE(3,2) levels {t.level_sizes()}")
    balls = 0
    for g in full_corpus()[::2]:
        root = g.vertices[0]
        depth = 4
        while depth > 1 and len(build_truncated_cover(g, root, depth).vertices) > 3000:
            depth -= 1
        t = build_truncated_cover(g, root, depth)
        balls += 1
        if not check_local_even_covering(t):
            failures.append(f"local check fails on {g!r}")
        for name, v in t.vertices.items():
            if t.is_interior(name) and t.valence(name) != g.total_index(v.image):
                failures.append(f"valence law at {name} in {g!r}")
    gate(7, f"cover balls ({balls} corpus balls)", failures, 120)


def _chained(g):
    g1, _ = collapse_and_subcover(g)
    w = has_blowup_and_proper_subcover(g1)
    if w is None:
        return None
    w = subroutine1(g1, w)
    nxt = has_blowup_and_proper_subcover(w.target)
    return None if nxt is None else (w, subroutine1(w.target, nxt))


def test_criterion_8_property_suites(gate):
    corpus = full_corpus()
    failures = []
    if len(corpus) < 200:
        failures.append(f"corpus has only {len(corpus)} graphs")
    for g in corpus:
        h, cert = pump_up(g)
        maps = list(cert.maps())
        s, m = minimal_subcover(g)
        maps.append(m)
        maps += list(itertools.islice(proper_subcovers(g), 3))
        failures += [f"map {x.source!r}: {verify_covering(x).verdict}" for x in maps if not verify_covering(x)]
        try:
            cert.replay()
        except Exception as exc:
            failures.append(f"replay {g!r}: {exc}")
        h2, cert2 = pump_up(h)
        if h2 != h or cert2.steps:
            failures.append(f"pump_up not idempotent on {g!r}")
        for seed in (11, 12):
            if not iso(pump_up(g, rng=random.Random(seed))[0], h):
                failures.append(f"pump_up order-dependent on {g!r} (seed {seed})")
        s2, m2 = minimal_subcover(s)
        if s2 != s or m2.is_proper:
            failures.append(f"minimal_subcover not idempotent on {g!r}")
        for sm in itertools.islice(proper_subcovers(g), 3):
            if not iso(minimal_subcover(sm.target)[0], s):
                failures.append(f"subcover of {g!r} does not factor")
    pushouts = 0
    for g in multiround_corpus():
        pair = _chained(g)
        if pair is None:
            failures.append(f"no second round on {g!r}")
            continue
        first, second = pair
        mu, blow = first.cover, first.blowup
        for step in reversed(partial_collapses(second.blowup)):
            res = pushout(mu, step)
            pushouts += 1
            nxt = compose_blowups(blow, res.blowup)
            if len(nxt.forest) != len(blow.forest) + res.new_edges or not verify_covering(res.cover):
                failures.append(f"pushout forest count on {g!r}")
            blow, mu = nxt, res.cover
        merged = subroutine2(first, second)
        verify_witness(merged)
        if len(merged.blowup.forest) != len(blow.forest):
            failures.append(f"subroutine 2 forest on {g!r}")
    gate(8, f"property suites ({len(corpus)} graphs, {pushouts} pushouts)", failures, 600)
