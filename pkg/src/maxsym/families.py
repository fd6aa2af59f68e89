"""Small named graph families used throughout the examples and tests."""

from __future__ import annotations

from .graph import Edge, EdgeIndexedGraph, End, GraphError


def edge_graph(p, q) -> EdgeIndexedGraph:
    """One edge ``u -(p)(q)- w``."""
    return EdgeIndexedGraph(["u", "w"], [Edge("e", "u", p, "w", q)], symbolic=_sym(p, q))


def arc(a, b, c, d) -> EdgeIndexedGraph:
    """Two-edge arc ``u -(a)(b)- m -(c)(d)- w``."""
    return EdgeIndexedGraph(["u", "m", "w"], [Edge("e1", "u", a, "m", b), Edge("e2", "m", c, "w", d)],
                            symbolic=_sym(a, b, c, d))


def path(*pairs) -> EdgeIndexedGraph:
    """Arc with consecutive end pairs, e.g. ``path((4,5),(1,1),(3,6))``."""
    names = [f"v{i}" for i in range(len(pairs) + 1)]
    edges = [Edge(f"e{i + 1}", names[i], a, names[i + 1], b) for i, (a, b) in enumerate(pairs)]
    return EdgeIndexedGraph(names, edges, symbolic=_sym(*[x for p in pairs for x in p]))


def loop_graph(a, b) -> EdgeIndexedGraph:
    """Single vertex ``v`` with one loop carrying ends ``a`` and ``b``."""
    return EdgeIndexedGraph(["v"], [Edge("e", "v", a, "v", b)], symbolic=_sym(a, b))


def triangle(a, b, c, d, e, f) -> EdgeIndexedGraph:
    """Triangle on ``T, L, R`` with ``b, c`` at ``T``, ``a, f`` at ``L``, ``d, e`` at ``R``.

    The oriented cycle :data:`TRIANGLE_CYCLE` (T to R to L to T) has value
    ``b*d*f / (a*c*e)``.
    """
    return EdgeIndexedGraph(
        ["T", "L", "R"],
        [Edge("TL", "T", b, "L", a), Edge("TR", "T", c, "R", d), Edge("LR", "L", f, "R", e)],
        symbolic=_sym(a, b, c, d, e, f))


TRIANGLE_CYCLE = (("TR", 1), ("LR", -1), ("TL", -1))


def theta(a, b, c, d, e, f) -> EdgeIndexedGraph:
    """Two vertices joined by three parallel edges (rank 2)."""
    return EdgeIndexedGraph(["x", "y"], [Edge("p", "x", a, "y", b), Edge("q", "x", c, "y", d),
                                         Edge("r", "x", e, "y", f)], symbolic=_sym(a, b, c, d, e, f))


def wallet_triangle() -> EdgeIndexedGraph:
    """Triangle with 1-3, 1-5 and 1-7 edges; collapses to the loop (1, 105)."""
    return EdgeIndexedGraph(
        ["T", "L", "R"],
        [Edge("TL", "T", 3, "L", 1), Edge("TR", "T", 1, "R", 5), Edge("LR", "L", 7, "R", 1)])


def _sym(*labels) -> bool:
    return any(isinstance(x, str) for x in labels)


def random_graph(rng, *, max_vertices: int = 6, max_index: int = 6, extra_edges: int = 2,
                 p_one: float = 0.25) -> EdgeIndexedGraph:
    """Random connected graph: a random spanning tree plus up to ``extra_edges``
    further edges (loops and bigons allowed).  Each index is 1 with
    probability ``p_one`` and otherwise uniform in ``2..max_index``."""
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]

    def idx():
        return 1 if rng.random() < p_one else rng.randint(2, max_index)
    pairs = [(names[rng.randrange(i)], names[i]) for i in range(1, n)]
    lo = 0 if n > 1 else 1
    for _ in range(rng.randint(lo, max(lo, extra_edges))):
        pairs.append((rng.choice(names), rng.choice(names)))
    edges = [Edge(f"e{k}", a, idx(), b, idx()) for k, (a, b) in enumerate(pairs)]
    return EdgeIndexedGraph(names, edges)


def permutation_cover(rng, target: EdgeIndexedGraph, sheets: int) -> EdgeIndexedGraph | None:
    """Random ``sheets``-fold permutation cover: vertex ``w`` lifts to ``w.0 ..``,
    each edge lifts to ``sheets`` copies with the same indices.  Returns None
    when the drawn cover is disconnected."""
    verts = [f"{w}.{i}" for w in target.vertices for i in range(sheets)]
    edges = []
    for e in target.edges:
        perm = list(range(sheets))
        rng.shuffle(perm)
        for i in range(sheets):
            edges.append(Edge(f"{e.name}.{i}", f"{e.u}.{i}", e.iu, f"{e.w}.{perm[i]}", e.iw))
    try:
        return EdgeIndexedGraph(verts, edges)
    except GraphError:
        return None


def _composition(rng, n: int, max_parts: int) -> list[int]:
    k = rng.randint(1, min(n, max_parts))
    cuts = sorted(rng.sample(range(1, n), k - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [n])]


def random_cover(rng, target: EdgeIndexedGraph, *, max_fibre: int = 2, max_parts: int = 2
                 ) -> EdgeIndexedGraph | None:
    """Random graph covering ``target`` without subdivision, or None.

    Every lift of a vertex splits the index of each end into a random
    composition; the resulting end pieces over the two sides of each target
    edge are paired at random when their counts agree.
    """
    fibre = {w: [f"{w}.{i}" for i in range(rng.randint(1, max_fibre))] for w in target.vertices}
    pieces: dict = {}
    for w in target.vertices:
        for v in fibre[w]:
            for z in target.ends_at(w):
                for part in _composition(rng, target.index(z), max_parts):
                    pieces.setdefault(z, []).append((v, part))
    edges = []
    for e in target.edges:
        a, b = pieces[End(e.name, 0)], pieces[End(e.name, 1)]
        if len(a) != len(b):
            return None
        rng.shuffle(b)
        for i, ((va, ia), (vb, ib)) in enumerate(zip(a, b)):
            edges.append(Edge(f"{e.name}.{i}", va, ia, vb, ib))
    try:
        return EdgeIndexedGraph([v for w in target.vertices for v in fibre[w]], edges)
    except GraphError:
        return None


PLANT_TARGETS = (("arc", (4, 5, 3, 6)), ("arc", (3, 4, 2, 3)), ("arc", (5, 3, 2, 6)),
                 ("edge", (6, 4)), ("triangle", (2, 3, 2, 3, 2, 3)))


def planted_graph(rng, *, max_vertices: int = 6, max_valence: int = 4, max_blowups: int = 2000,
                  attempts: int = 200_000) -> EdgeIndexedGraph:
    """Random bushy thornless graph that covers a small target after blowing up.

    A random cover of a target is drawn and its 1-1 edges are collapsed.  The
    result usually has a blowup and proper subcover, often one that needs
    several rounds of pumping.  Graphs over ``max_vertices``, with a vertex
    of valence over ``max_valence``, or with more than ``max_blowups`` local
    blowup choices are rejected.
    """
    from math import prod

    from .graph import is_bushy, is_thornless
    from .pumping import PumpError, collapse_11_forest, local_trees

    makers = {"arc": arc, "edge": edge_graph, "triangle": triangle}
    for _ in range(attempts):
        kind, args = rng.choice(PLANT_TARGETS)
        c = random_cover(rng, makers[kind](*args), max_fibre=2, max_parts=rng.choice([2, 3]))
        if c is None:
            continue
        ones = [e.name for e in c.edges if 1 in (e.iu, e.iw)]
        if not ones or any((c.edge(n).iu, c.edge(n).iw) != (1, 1) for n in ones):
            continue
        try:
            g, _ = collapse_11_forest(c, ones)
        except PumpError:
            continue
        if len(g.vertices) > max_vertices or not is_thornless(g) or not is_bushy(g):
            continue
        if max(g.valence(v) for v in g.vertices) > max_valence:
            continue
        if prod(len(local_trees(g, v)) for v in g.vertices) > max_blowups:
            continue
        return g
    raise RuntimeError("no planted graph found")
