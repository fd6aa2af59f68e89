"""Covering maps between edge-indexed graphs.

A :class:`CoveringMap` records an elementary subdivision of its source
(the set ``subdivided`` of source edges, each split at a midpoint named
``e^`` into halves ``e^0`` and ``e^1``) together with where every vertex,
edge and end of the subdivided source goes.  :func:`verify_covering`
checks cellularity, subdivision normalisation and even covering.

Subcover search comes in two flavours that share nothing but the data
model: :func:`find_proper_subcover` runs the pattern search of
:mod:`maxsym.search`, while :func:`isometry_quotient` reads the quotient
by the full isometry group straight off the stable colouring.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

from . import canon
from .graph import (Edge, EdgeIndexedGraph, End, GraphError, half_name, midpoint_name,
                    subdivide, trichotomy, Trichotomy)
from .search import Pattern, half_siblings, quotient_patterns


class CoveringError(ValueError):
    """Structurally malformed map or a construction precondition failure."""


class NotBushyError(ValueError):
    """Raised by operations that are only meaningful for bushy graphs."""


@dataclass(frozen=True, eq=False)
class CoveringMap:
    source: EdgeIndexedGraph
    target: EdgeIndexedGraph
    subdivided: frozenset
    vertex_map: dict
    edge_map: dict
    end_map: dict

    @cached_property
    def subdivided_source(self) -> EdgeIndexedGraph:
        return subdivide(self.source, self.subdivided)[0]

    def is_isomorphism(self) -> bool:
        return (not self.subdivided
                and len(self.source.vertices) == len(self.target.vertices)
                and len(self.source.edges) == len(self.target.edges))

    @property
    def is_proper(self) -> bool:
        return not self.is_isomorphism()

    def __repr__(self) -> str:
        sub = ",".join(sorted(self.subdivided)) or "-"
        return f"CoveringMap({len(self.source.vertices)}v -> {len(self.target.vertices)}v, subdivided={sub})"


@dataclass(frozen=True)
class CoverReport:
    cellularity: str | None = None
    normalization: str | None = None
    even_covering: str | None = None

    @property
    def valid(self) -> bool:
        return self.cellularity is None and self.normalization is None and self.even_covering is None

    @property
    def verdict(self) -> str:
        for name in ("cellularity", "normalization", "even_covering"):
            msg = getattr(self, name)
            if msg is not None:
                return f"{name}: {msg}"
        return "valid"

    def __bool__(self) -> bool:
        return self.valid


def require_bushy(g: EdgeIndexedGraph) -> None:
    kind = trichotomy(g)
    if kind is not Trichotomy.BUSHY:
        raise NotBushyError(f"graph is {kind.value}, not bushy")


# -- verification ------------------------------------------------------------


def verify_covering(m: CoveringMap) -> CoverReport:
    src, tgt = m.source, m.target
    for e in m.subdivided:
        if not src.has_edge(e):
            raise CoveringError(f"subdivided edge {e!r} not in source")
    try:
        sub = m.subdivided_source
    except GraphError as exc:
        raise CoveringError(str(exc)) from None
    if set(m.vertex_map) != set(sub.vertices):
        raise CoveringError("vertex map is not defined on exactly the subdivided source vertices")
    if set(m.edge_map) != {e.name for e in sub.edges}:
        raise CoveringError("edge map is not defined on exactly the subdivided source edges")
    if set(m.end_map) != set(sub.all_ends()):
        raise CoveringError("end map is not defined on exactly the subdivided source ends")
    for v, w in m.vertex_map.items():
        if not tgt.has_vertex(w):
            raise CoveringError(f"vertex {v!r} maps to unknown target vertex {w!r}")
    for x, t in m.edge_map.items():
        if not tgt.has_edge(t):
            raise CoveringError(f"edge {x!r} maps to unknown target edge {t!r}")
    for z, y in m.end_map.items():
        if not isinstance(y, End) or not tgt.has_edge(y.edge) or y.side not in (0, 1):
            raise CoveringError(f"end {z!r} maps to unknown target end {y!r}")

    cell = None
    for x in sub.edges:
        t = m.edge_map[x.name]
        a, b = m.end_map[End(x.name, 0)], m.end_map[End(x.name, 1)]
        if a.edge != t or b.edge != t:
            cell = f"ends of edge {x.name!r} do not map into its image edge {t!r}"
            break
        if a.side == b.side:
            cell = f"edge {x.name!r} folds onto one end of {t!r}"
            break
        bad = None
        for z, y in ((End(x.name, 0), a), (End(x.name, 1), b)):
            if m.vertex_map[sub.vertex_of(z)] != tgt.vertex_of(y):
                bad = f"end {z!r} at {sub.vertex_of(z)!r} maps to an end away from the vertex image"
        if bad:
            cell = bad
            break

    norm = None
    for e in sorted(m.subdivided):
        h0, h1 = half_name(e, 0), half_name(e, 1)
        if m.edge_map[h0] != m.edge_map[h1]:
            norm = f"halves of {e!r} map to different edges"
            break
        if m.end_map[End(h0, 1)] != m.end_map[End(h1, 0)]:
            norm = f"subdivision vertex of {e!r} is not a fold point"
            break

    even = None
    if cell is None:
        covered = set()
        for v in sub.vertices:
            w = m.vertex_map[v]
            covered.add(w)
            sums: dict[End, int] = {}
            for z in sub.ends_at(v):
                y = m.end_map[z]
                sums[y] = sums.get(y, 0) + sub.index(z)
            for y in tgt.ends_at(w):
                got = sums.get(y, 0)
                if got != tgt.index(y):
                    even = (f"target end {y!r} (index {tgt.index(y)}) at {w!r} receives {got} "
                            f"from source vertex {v!r}")
                    break
            if even:
                break
        if even is None:
            missing = [w for w in tgt.vertices if w not in covered]
            if missing:
                even = f"target vertex {missing[0]!r} has no preimage"
    return CoverReport(cell, norm, even)


def certify(m: CoveringMap) -> CoveringMap:
    rep = verify_covering(m)
    if not rep.valid:
        raise CoveringError(f"invalid covering map: {rep.verdict}")
    return m


# -- basic maps ----------------------------------------------------------------


def identity(g: EdgeIndexedGraph) -> CoveringMap:
    return CoveringMap(g, g, frozenset(), {v: v for v in g.vertices},
                       {e.name: e.name for e in g.edges}, {z: z for z in g.all_ends()})


def are_isomorphic(g1: EdgeIndexedGraph, g2: EdgeIndexedGraph) -> CoveringMap | None:
    """An index-preserving isomorphism ``g1 -> g2`` or ``None``.

    Both graphs are brought to canonical form; the map pairs vertices and
    edges occupying the same canonical positions.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    if g1.symbolic != g2.symbolic:
        return None
    l1, l2 = canon.canonical_labelling(g1), canon.canonical_labelling(g2)
    if l1.form != l2.form:
        return None
    vmap = dict(zip(l1.order, l2.order))
    emap, zmap = {}, {}
    for (n1, f1), (n2, f2) in zip(l1.edges, l2.edges):
        emap[n1] = n2
        for s in (0, 1):
            zmap[End(n1, s)] = End(n2, s ^ f1 ^ f2)
    return CoveringMap(g1, g2, frozenset(), vmap, emap, zmap)


def inverse(m: CoveringMap) -> CoveringMap:
    if not m.is_isomorphism():
        raise CoveringError("only isomorphisms can be inverted")
    return CoveringMap(m.target, m.source, frozenset(),
                       {w: v for v, w in m.vertex_map.items()},
                       {t: x for x, t in m.edge_map.items()},
                       {y: z for z, y in m.end_map.items()})


def collapse_bigon(g: EdgeIndexedGraph, e: str, e2: str) -> tuple[EdgeIndexedGraph, CoveringMap]:
    """Identify ``e`` onto the parallel edge ``e2``, adding paired indices."""
    if e == e2:
        raise CoveringError("collapse_bigon needs two distinct edges")
    a, b = g.edge(e), g.edge(e2)
    if {a.u, a.w} != {b.u, b.w}:
        raise CoveringError(f"edges {e!r} and {e2!r} are not parallel")
    flip = 0 if (a.u == b.u and a.w == b.w) else 1
    new = Edge(e2, b.u, b.iu + a.label(flip), b.w, b.iw + a.label(1 - flip))
    edges = [new if x.name == e2 else x for x in g.edges if x.name != e]
    h = g.replace(edges=edges)
    emap = {x.name: x.name for x in g.edges}
    emap[e] = e2
    zmap = {z: z for z in g.all_ends()}
    zmap[End(e, flip)] = End(e2, 0)
    zmap[End(e, 1 - flip)] = End(e2, 1)
    m = CoveringMap(g, h, frozenset(), {v: v for v in g.vertices}, emap, zmap)
    return h, certify(m)


def fold_loop(g: EdgeIndexedGraph, e: str) -> tuple[EdgeIndexedGraph, CoveringMap]:
    """Subdivide the loop ``e`` and fold it onto an edge to a new valence-1 vertex."""
    loop = g.edge(e)
    if not loop.is_loop:
        raise CoveringError(f"edge {e!r} is not a loop")
    mid = midpoint_name(e)
    if g.has_vertex(mid):
        raise CoveringError(f"vertex name {mid!r} already used")
    v = loop.u
    edges = [Edge(e, v, loop.iu + loop.iw, mid, 2) if x.name == e else x for x in g.edges]
    h = g.replace(vertices=list(g.vertices) + [mid], edges=edges)
    h0, h1 = half_name(e, 0), half_name(e, 1)
    vmap = {x: x for x in g.vertices}
    vmap[mid] = mid
    emap = {x.name: x.name for x in g.edges if x.name != e}
    emap[h0] = emap[h1] = e
    zmap = {z: z for z in g.all_ends() if z.edge != e}
    zmap[End(h0, 0)] = End(e, 0)
    zmap[End(h0, 1)] = End(e, 1)
    zmap[End(h1, 0)] = End(e, 1)
    zmap[End(h1, 1)] = End(e, 0)
    m = CoveringMap(g, h, frozenset({e}), vmap, emap, zmap)
    return h, certify(m)


# -- composition ---------------------------------------------------------------


def compose(m1: CoveringMap, m2: CoveringMap) -> CoveringMap:
    """``m2 after m1``; the subdivision of ``m2`` is pulled back to ``m1``'s source."""
    if m1.target != m2.source:
        raise CoveringError("compose: target of the first map is not the source of the second")
    src = m1.source
    S1, S2 = m1.subdivided, m2.subdivided
    extra = set()
    for e in src.edges:
        if e.name in S1:
            for s in (0, 1):
                if m1.edge_map[half_name(e.name, s)] in S2:
                    raise CoveringError(f"composite subdivides edge {e.name!r} more than once")
        elif m1.edge_map[e.name] in S2:
            extra.add(e.name)
    subd = frozenset(S1 | extra)

    def mid_end(y: End) -> End:
        """An end of m1's target, read as an end of m2's subdivided source."""
        if y.edge in S2:
            return End(half_name(y.edge, y.side), y.side)
        return y

    vmap, emap, zmap = {}, {}, {}
    for v in src.vertices:
        vmap[v] = m2.vertex_map[m1.vertex_map[v]]
    for e in src.edges:
        n = e.name
        if n in S1:
            mp = midpoint_name(n)
            vmap[mp] = m2.vertex_map[m1.vertex_map[mp]]
            for s in (0, 1):
                h = half_name(n, s)
                for side in (0, 1):
                    zmap[End(h, side)] = m2.end_map[mid_end(m1.end_map[End(h, side)])]
        elif n in extra:
            f = m1.edge_map[n]
            r = m1.end_map[End(n, 0)].side
            vmap[midpoint_name(n)] = m2.vertex_map[midpoint_name(f)]
            for s in (0, 1):
                h = half_name(n, s)
                fh = half_name(f, s ^ r)
                zmap[End(h, s)] = m2.end_map[End(fh, s ^ r)]
                zmap[End(h, 1 - s)] = m2.end_map[End(fh, 1 - (s ^ r))]
        else:
            for s in (0, 1):
                zmap[End(n, s)] = m2.end_map[mid_end(m1.end_map[End(n, s)])]
    for z, y in zmap.items():
        emap[z.edge] = y.edge
    return CoveringMap(src, m2.target, subd, vmap, emap, zmap)


# -- quotient patterns to maps -------------------------------------------------


def pattern_to_map(g: EdgeIndexedGraph, subdivided: frozenset, p: Pattern) -> CoveringMap:
    """Realise a numeric pattern as a covering map with deterministic names.

    Target vertices and edges are named after their least preimage.
    """
    sub = p.graph
    vnames: dict[int, str] = {}
    for v in sub.vertices:
        w = p.vertex[v]
        if w not in vnames or v < vnames[w]:
            vnames[w] = v
    enames: dict[int, str] = {}
    for x in sub.edges:
        t = p.edge[x.name]
        if t not in enames or x.name < enames[t]:
            enames[t] = x.name
    index: dict[tuple[int, int], int] = {}
    for v in sub.vertices:
        acc: dict[tuple[int, int], int] = {}
        for z in sub.ends_at(v):
            te = p.end[z]
            acc[te] = acc.get(te, 0) + sub.index(z)
        for te, s in acc.items():
            index.setdefault(te, s)
    edges = []
    for t, (w0, w1) in enumerate(p.tedges):
        edges.append(Edge(enames[t], vnames[w0], index[(t, 0)], vnames[w1], index[(t, 1)]))
    target = EdgeIndexedGraph([vnames[w] for w in range(p.n_vertices)], edges)
    vmap = {v: vnames[p.vertex[v]] for v in sub.vertices}
    emap = {x: enames[t] for x, t in p.edge.items()}
    zmap = {z: End(enames[t], s) for z, (t, s) in p.end.items()}
    return CoveringMap(g, target, subdivided, vmap, emap, zmap)


def _subdivision_candidates(g: EdgeIndexedGraph, mode: str, col: canon.Colouring | None) -> list[str]:
    out = []
    for e in g.edges:
        if mode == "refined":
            if col.dart[End(e.name, 0)] == col.dart[End(e.name, 1)]:
                out.append(e.name)
        else:
            if g.total_index(e.u) == g.total_index(e.w):
                out.append(e.name)
    return out


def proper_subcovers(g: EdgeIndexedGraph, *, mode: str = "refined",
                     rng: random.Random | None = None):
    """Yield proper covering maps from ``g`` (every quotient pattern once).

    ``mode="refined"`` only merges cells with equal stable colours, which is
    sound because a covering map lifts to an isomorphism of universal
    covers.  ``mode="basic"`` uses total index alone and is kept as an
    independent slow path for cross-checks.  A vertex of total index 2 lifts
    to a valence-2 point that a cover may send into the middle of an edge,
    which colours do not see, so such graphs always get the basic pruning.
    """
    if mode not in ("refined", "basic"):
        raise ValueError(f"unknown search mode {mode!r}")
    if any(g.total_index(v) == 2 for v in g.vertices):
        mode = "basic"
    col = canon.refine(g) if mode == "refined" else None
    cands = _subdivision_candidates(g, mode, col)
    subsets = []
    for k in range(len(cands) + 1):
        subsets.extend(itertools.combinations(cands, k))
    for S in subsets:
        sub, corr = subdivide(g, S)
        if mode == "refined":
            scol = canon.refine(sub)
            vkey = scol.vertex.__getitem__
            dkey = scol.dart.__getitem__
        else:
            vkey = sub.total_index
            dkey = None
        for p in quotient_patterns(sub, half_siblings(corr), vkey=vkey, dkey=dkey, numeric=True, rng=rng):
            if not S and p.is_bijective():
                continue
            yield pattern_to_map(g, frozenset(S), p)


def find_proper_subcover(g: EdgeIndexedGraph, *, mode: str = "refined",
                         rng: random.Random | None = None) -> CoveringMap | None:
    """Some covering map from ``g`` that is not an isomorphism, or ``None``."""
    require_bushy(g)
    for m in proper_subcovers(g, mode=mode, rng=rng):
        return certify(m)
    return None


def minimal_subcover(g: EdgeIndexedGraph, *, mode: str = "refined",
                     rng: random.Random | None = None) -> tuple[EdgeIndexedGraph, CoveringMap]:
    """Fold ``g`` down until no proper subcover remains."""
    require_bushy(g)
    total = identity(g)
    current = g
    while True:
        step = find_proper_subcover(current, mode=mode, rng=rng)
        if step is None:
            return current, certify(total)
        total = compose(total, step)
        current = step.target


# -- quotient by the full isometry group ------------------------------------------


def isometry_quotient(g: EdgeIndexedGraph) -> CoveringMap:
    """The covering map onto ``T / Isom T`` read off the stable colouring.

    Vertices with equal colour merge, ends at a vertex merge when their dart
    colours agree, and an edge whose two darts share a colour is inverted,
    so it is subdivided and folded.

    Lifts of a vertex of total index 2 are valence-2 points of the tree,
    which isometries may move into edge interiors; the colouring cannot see
    that, so such graphs are refused.
    """
    two = [v for v in g.vertices if g.total_index(v) == 2]
    if two:
        raise CoveringError(f"isometry_quotient needs no vertex of total index 2 (found {two[0]!r})")
    col = canon.refine(g)
    dc, vc = col.dart, col.vertex
    inverted = frozenset(e.name for e in g.edges if dc[End(e.name, 0)] == dc[End(e.name, 1)])
    sub, corr = subdivide(g, inverted)

    vname: dict = {}
    for v in g.vertices:
        vname[vc[v]] = min(vname.get(vc[v], v), v)
    classes: dict = {}
    for e in g.edges:
        a, b = dc[End(e.name, 0)], dc[End(e.name, 1)]
        key = (min(a, b), max(a, b))
        classes.setdefault(key, []).append(e.name)

    # each dart colour at a vertex colour is one target end
    tindex: dict = {}
    for c in set(vc.values()):
        rep = min(v for v in g.vertices if vc[v] == c)
        for z in g.ends_at(rep):
            tindex[(c, dc[z])] = tindex.get((c, dc[z]), 0) + g.index(z)
    edges, vmap, emap, zmap = [], {}, {}, {}
    extra_vertices = []
    for key, names in sorted(classes.items(), key=lambda kv: min(kv[1])):
        a, b = key
        first = min(names)
        e0 = g.edge(first)
        ca = vc[e0.u] if dc[End(first, 0)] == a else vc[e0.w]
        cb = vc[e0.w] if dc[End(first, 0)] == a else vc[e0.u]
        if a == b:
            tname = half_name(first, 0)
            mid = midpoint_name(first)
            extra_vertices.append(mid)
            edges.append(Edge(tname, vname[ca], tindex[(ca, a)], mid, 2))
            for n in names:
                mp = midpoint_name(n)
                vmap[mp] = mid
                for s in (0, 1):
                    h = half_name(n, s)
                    emap[h] = tname
                    zmap[End(h, s)] = End(tname, 0)
                    zmap[End(h, 1 - s)] = End(tname, 1)
        else:
            tname = first
            edges.append(Edge(tname, vname[ca], tindex[(ca, a)], vname[cb], tindex[(cb, b)]))
            for n in names:
                emap[n] = tname
                for s in (0, 1):
                    zmap[End(n, s)] = End(tname, 0 if dc[End(n, s)] == a else 1)
    for v in g.vertices:
        vmap[v] = vname[vc[v]]
    verts = sorted(set(vname.values()), key=list(g.vertices).index) + extra_vertices
    target = EdgeIndexedGraph(verts, edges)
    return CoveringMap(g, target, inverted, vmap, emap, zmap)
