"""Colour refinement on vertices and darts, and canonical forms.

A *dart* is an edge end read as a direction: the dart at end ``z`` leaves
the vertex of ``z`` along its edge.  In the universal covering tree, the
branch beyond a lift of that dart is determined by the far vertex and, for
every end ``k`` there, ``I(k)`` further branches (one fewer when ``k`` is
the way back).  Refining dart colours by that recursion and vertex colours
by the aggregated ``(dart colour -> sum of indices)`` table converges to the
coarsest stable colouring; two lifts lie in one isometry orbit exactly when
their colours agree.

The same machinery, seeded with extra colours and combined with
individualisation, gives the canonical labelling used for isomorphism tests.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Mapping

from .graph import EdgeIndexedGraph, End, label_key


@dataclass(frozen=True)
class Colouring:
    vertex: dict[str, int]
    dart: dict[End, int]

    @property
    def vertex_classes(self) -> int:
        return len(set(self.vertex.values()))

    def is_discrete(self) -> bool:
        return self.vertex_classes == len(self.vertex)


def _rank(sig: Mapping) -> dict:
    order = {s: i for i, s in enumerate(sorted(set(sig.values())))}
    return {k: order[s] for k, s in sig.items()}


def _weight(g: EdgeIndexedGraph, end: End):
    return label_key(g.label(end))


def refine(g: EdgeIndexedGraph,
           vseed: Mapping[str, Hashable] | None = None,
           dseed: Mapping[End, Hashable] | None = None) -> Colouring:
    """Coarsest stable colouring refining the seeds.

    Labels enter only as branch multiplicities, so the refinement treats a
    dart of index 2 and two darts of index 1 with equal colour alike, as
    the universal cover does.  Variable labels are compared by name.
    """
    numeric = not g.symbolic
    ends = list(g.all_ends())
    vcol = _rank({v: (vseed[v] if vseed else 0) for v in g.vertices})
    dcol = _rank({z: (dseed[z] if dseed else 0) for z in ends})
    nv, nd = len(set(vcol.values())), len(set(dcol.values()))
    while True:
        table: dict[str, dict] = {}
        for v in g.vertices:
            agg: dict = defaultdict(int) if numeric else defaultdict(list)
            for z in g.ends_at(v):
                if numeric:
                    agg[dcol[z]] += g.index(z)
                else:
                    agg[dcol[z]].append(_weight(g, z))
            table[v] = agg
        dsig = {}
        for z in ends:
            back = z.opposite
            far = g.vertex_of(back)
            agg = table[far]
            if numeric:
                rows = dict(agg)
                rows[dcol[back]] -= 1
                body = tuple(sorted(rows.items()))
            else:
                rows = {k: sorted(x) for k, x in agg.items()}
                lst = list(rows[dcol[back]])
                lst.remove(_weight(g, back))
                rows[dcol[back]] = lst
                body = tuple(sorted((k, tuple(x)) for k, x in rows.items()))
            dsig[z] = (dcol[z], vcol[far], body)
        new_d = _rank(dsig)
        vsig = {}
        for v in g.vertices:
            agg = table[v]
            if numeric:
                body = defaultdict(int)
                for z in g.ends_at(v):
                    body[new_d[z]] += g.index(z)
                vsig[v] = (vcol[v], tuple(sorted(body.items())))
            else:
                vsig[v] = (vcol[v], tuple(sorted((new_d[z], _weight(g, z)) for z in g.ends_at(v))))
        new_v = _rank(vsig)
        mv, md = len(set(new_v.values())), len(set(new_d.values()))
        vcol, dcol = new_v, new_d
        if mv == nv and md == nd:
            return Colouring(vcol, dcol)
        nv, nd = mv, md


# -- canonical labelling ------------------------------------------------------


@dataclass(frozen=True)
class Labelling:
    form: tuple
    order: tuple[str, ...]
    # for every entry of form[1]: (edge name, flipped)
    edges: tuple[tuple[str, bool], ...]


def _encode(g: EdgeIndexedGraph, pos: Mapping[str, int], marks: Mapping[str, Hashable] | None):
    rows = []
    for e in g.edges:
        m = marks.get(e.name, 0) if marks else 0
        a = (pos[e.u], label_key(e.iu), pos[e.w], label_key(e.iw), m)
        b = (pos[e.w], label_key(e.iw), pos[e.u], label_key(e.iu), m)
        rows.append((a, e.name, False) if a <= b else (b, e.name, True))
    rows.sort(key=lambda r: r[0])
    return tuple(r[0] for r in rows), tuple((r[1], r[2]) for r in rows)


def canonical_labelling(g: EdgeIndexedGraph, marks: Mapping[str, Hashable] | None = None,
                        vmarks: Mapping[str, Hashable] | None = None) -> Labelling:
    """Individualisation-refinement canonical labelling.

    ``marks`` colours edges (e.g. forest membership) and ``vmarks`` colours
    vertices; both must be orderable.  Isomorphic marked graphs get equal
    ``form``.
    """
    dseed = None
    if marks:
        dseed = {z: marks.get(z.edge, 0) for z in g.all_ends()}
    vseed0 = {v: (vmarks.get(v, 0) if vmarks else 0) for v in g.vertices}
    best: list = [None]

    def leaf(vcol):
        order = sorted(g.vertices, key=lambda v: vcol[v])
        pos = {v: i for i, v in enumerate(order)}
        form, eds = _encode(g, pos, marks)
        vm = tuple(vseed0[v] for v in order)
        key = (len(order), form, vm)
        if best[0] is None or key < best[0][0]:
            best[0] = (key, tuple(order), eds)

    def search(vseed):
        col = refine(g, vseed, dseed)
        vcol = col.vertex
        if col.is_discrete():
            leaf(vcol)
            return
        cells: dict[int, list[str]] = defaultdict(list)
        for v in g.vertices:
            cells[vcol[v]].append(v)
        target = min((c for c in cells.values() if len(c) > 1), key=lambda c: (len(c), vcol[c[0]]))
        for v in target:
            seed = {x: (vcol[x], 1 if x == v else 0) for x in g.vertices}
            search(seed)

    search(vseed0)
    key, order, eds = best[0]
    return Labelling(key, order, eds)


def canonical_form(g: EdgeIndexedGraph, marks: Mapping[str, Hashable] | None = None) -> tuple:
    return canonical_labelling(g, marks).form
