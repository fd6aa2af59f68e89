"""Index-1 collapses, blowups, and the pumping-up algorithm.

Moves on quotient graphs that enlarge (or keep) the symmetry group of the
universal covering tree:

* index 1--n collapse of a non-loop edge with an index-1 end,
* blowup: the inverse of collapsing a forest of 1--1 edges,
* blowup and proper subcover, and the two subroutines that turn any such
  move into one whose blowup forest grows strictly, so iterating stops.

Every construction returns explicit payloads (:class:`Collapse`,
:class:`Blowup`, :class:`~maxsym.covering.CoveringMap`) that can be
re-verified independently; :class:`PumpCertificate` chains them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import canon
from .covering import (CoveringError, CoveringMap, NotBushyError, are_isomorphic, certify, compose,
                       find_proper_subcover, identity, minimal_subcover, require_bushy, verify_covering)
from .graph import Edge, EdgeIndexedGraph, End, GraphError, is_thornless, midpoint_name, half_name


class PumpError(ValueError):
    """Precondition failure or a broken invariant in a pumping construction."""


class ThornError(PumpError):
    """Raised when an operation needs a thornless graph."""


def _thornless(g: EdgeIndexedGraph) -> bool:
    if not g.symbolic:
        return is_thornless(g)
    # variable labels stand for indices >= 2
    for v in g.vertices:
        ends = g.ends_at(v)
        if len(ends) == 1 and g.label(ends[0]) == 1:
            return False
    return True


def require_thornless(g: EdgeIndexedGraph) -> None:
    if not _thornless(g):
        raise ThornError("graph has a thorn")


# -- collapses -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Collapse:
    """Composite of index-1 collapses, edges in ``forest`` collapsed in order."""
    source: EdgeIndexedGraph
    forest: tuple[str, ...]
    target: EdgeIndexedGraph
    vertex_map: dict
    multiplier: dict  # surviving source end -> factor applied to its index

    @property
    def is_trivial(self) -> bool:
        return not self.forest


def _collapse_step(g: EdgeIndexedGraph, e: str) -> tuple[EdgeIndexedGraph, str, str, int]:
    edge = g.edge(e)
    if edge.is_loop:
        raise PumpError(f"index-1 collapse is not defined on the loop {e!r}")
    if edge.iu == 1:
        v, w, n = edge.u, edge.w, edge.iw
    elif edge.iw == 1:
        v, w, n = edge.w, edge.u, edge.iu
    else:
        raise PumpError(f"edge {e!r} has no end of index 1")
    edges = []
    for x in g.edges:
        if x.name == e:
            continue
        u, iu, ww, iw = x.u, x.iu, x.w, x.iw
        if u == v:
            u, iu = w, iu * n
        if ww == v:
            ww, iw = w, iw * n
        edges.append(Edge(x.name, u, iu, ww, iw))
    h = g.replace(vertices=[x for x in g.vertices if x != v], edges=edges)
    return h, v, w, n


def index1_collapse(g: EdgeIndexedGraph, e: str) -> Collapse:
    """Collapse ``e``: its index-1 side ``v`` merges into the other endpoint ``w``.

    Surviving ends formerly at ``v`` have their index multiplied by the index
    of the far end of ``e``; the merged vertex keeps the name ``w``.  When
    both ends have index 1 the side-0 end plays the role of the index-1 end.
    """
    h, v, w, n = _collapse_step(g, e)
    vmap = {x: x for x in g.vertices}
    vmap[v] = w
    mult = {}
    for z in g.all_ends():
        if z.edge == e:
            continue
        mult[z] = n if g.vertex_of(z) == v else 1
    return Collapse(g, (e,), h, vmap, mult)


def chain_collapses(a: Collapse, b: Collapse) -> Collapse:
    if a.target != b.source:
        raise PumpError("collapses do not chain")
    vmap = {v: b.vertex_map[w] for v, w in a.vertex_map.items()}
    mult = {z: k * b.multiplier[z] for z, k in a.multiplier.items() if z in b.multiplier}
    return Collapse(a.source, a.forest + b.forest, b.target, vmap, mult)


def trivial_collapse(g: EdgeIndexedGraph) -> Collapse:
    return Collapse(g, (), g, {v: v for v in g.vertices}, {z: 1 for z in g.all_ends()})


def maximal_index1_forest_collapse(g: EdgeIndexedGraph, rng: random.Random | None = None) -> Collapse:
    """Collapse index-1 edges greedily until each remaining one is a loop.

    Edges are scanned in sorted name order (shuffled when ``rng`` is given),
    rescanning after every collapse.
    """
    result = trivial_collapse(g)
    while True:
        cur = result.target
        cands = sorted(x.name for x in cur.edges if not x.is_loop and 1 in (x.iu, x.iw))
        if not cands:
            return result
        pick = rng.choice(cands) if rng is not None else cands[0]
        result = chain_collapses(result, index1_collapse(cur, pick))


def verify_collapse(c: Collapse) -> None:
    """Replay the collapse from its source; raise on any mismatch."""
    cur = trivial_collapse(c.source)
    for e in c.forest:
        cur = chain_collapses(cur, index1_collapse(cur.target, e))
    if cur.target != c.target or cur.vertex_map != c.vertex_map or cur.multiplier != c.multiplier:
        raise PumpError("collapse record does not replay")
    # the collapsed edges form a forest in the source
    _forest_components(c.source, c.forest)


def _forest_components(g: EdgeIndexedGraph, forest) -> dict[str, str]:
    """Union-find over ``forest``; returns vertex -> least vertex of its component."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for name in forest:
        e = g.edge(name)
        a, b = find(e.u), find(e.w)
        if a == b:
            raise PumpError(f"edge set is not a forest (edge {name!r} closes a cycle)")
        if b < a:
            a, b = b, a
        parent[b] = a
    return {v: find(v) for v in g.vertices}


def collapse_11_forest(g: EdgeIndexedGraph, forest) -> tuple[EdgeIndexedGraph, dict[str, str]]:
    """Collapse a forest of 1--1 edges; each component is named after its least vertex."""
    forest = set(forest)
    for name in forest:
        e = g.edge(name)
        if (e.iu, e.iw) != (1, 1):
            raise PumpError(f"edge {name!r} is not of type 1-1")
    comp = _forest_components(g, sorted(forest))
    verts = []
    for v in g.vertices:
        if comp[v] not in verts:
            verts.append(comp[v])
    edges = [Edge(x.name, comp[x.u], x.iu, comp[x.w], x.iw) for x in g.edges if x.name not in forest]
    return g.replace(vertices=verts, edges=edges), comp


# -- blowups -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Blowup:
    """``graph`` collapses onto ``base`` by contracting the 1--1 forest ``forest``.

    Non-forest edges keep their base names, orientation and indices;
    ``vertex_map`` sends each vertex of ``graph`` to its base vertex.
    """
    base: EdgeIndexedGraph
    graph: EdgeIndexedGraph
    forest: frozenset
    vertex_map: dict

    @property
    def is_trivial(self) -> bool:
        return not self.forest

    def __repr__(self) -> str:
        return f"Blowup(|F|={len(self.forest)}, {self.graph!r})"


def trivial_blowup(g: EdgeIndexedGraph) -> Blowup:
    return Blowup(g, g, frozenset(), {v: v for v in g.vertices})


def _is_22(g: EdgeIndexedGraph, v: str) -> bool:
    ends = g.ends_at(v)
    return len(ends) == 2 and all(g.label(z) == 1 for z in ends)


def verify_blowup(b: Blowup) -> None:
    """Raise :class:`PumpError` unless ``b`` satisfies every blowup requirement."""
    g, base = b.graph, b.base
    if set(b.vertex_map) != set(g.vertices) or set(b.vertex_map.values()) != set(base.vertices):
        raise PumpError("blowup vertex map is not a surjection onto the base vertices")
    for name in b.forest:
        e = g.edge(name)
        if (e.iu, e.iw) != (1, 1):
            raise PumpError(f"forest edge {name!r} is not of type 1-1")
    comp = _forest_components(g, sorted(b.forest))
    fibres: dict[str, set] = {}
    for v in g.vertices:
        fibres.setdefault(b.vertex_map[v], set()).add(comp[v])
    for z, roots in fibres.items():
        if len(roots) != 1:
            raise PumpError(f"fibre over {z!r} is not one forest component")
    rest = [e for e in g.edges if e.name not in b.forest]
    if {e.name for e in rest} != {e.name for e in base.edges}:
        raise PumpError("non-forest edges do not match the base edges")
    for e in rest:
        f = base.edge(e.name)
        if (b.vertex_map[e.u], e.iu, b.vertex_map[e.w], e.iw) != (f.u, f.iu, f.w, f.iw):
            raise PumpError(f"edge {e.name!r} does not collapse onto its base edge")
    if not _thornless(g):
        raise PumpError("blown-up graph has a thorn")
    touched = {v for name in b.forest for v in (g.edge(name).u, g.edge(name).w)}
    for v in touched:
        if _is_22(g, v):
            raise PumpError(f"blown-up vertex {v!r} has valence 2 and total index 2")


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions of ``items`` (blocks keep input order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


# A local tree: nodes are tuples of ends (empty for a branch point), edges are
# (parent index, child index) pairs with node 0 as the root.
LocalTree = tuple[tuple[tuple[End, ...], ...], tuple[tuple[int, int], ...]]


def _rooted(root: tuple, rest: list[tuple]) -> Iterator[tuple[list, list]]:
    """Trees rooted at the block ``root`` whose other blocks are ``rest``."""
    for groups in set_partitions(rest):
        for kids in itertools.product(*[list(_child(g)) for g in groups]):
            nodes, edges = [root], []
            for knodes, kedges in kids:
                off = len(nodes)
                nodes.extend(knodes)
                edges.append((0, off))
                edges.extend((a + off, b + off) for a, b in kedges)
            yield nodes, edges


def _child(group: list[tuple]) -> Iterator[tuple[list, list]]:
    for i, b in enumerate(group):
        yield from _rooted(b, group[:i] + group[i + 1:])
    if len(group) >= 2:
        for parts in set_partitions(group):
            if len(parts) < 2:
                continue
            for kids in itertools.product(*[list(_child(p)) for p in parts]):
                nodes, edges = [()], []
                for knodes, kedges in kids:
                    off = len(nodes)
                    nodes.extend(knodes)
                    edges.append((0, off))
                    edges.extend((a + off, b + off) for a, b in kedges)
                yield nodes, edges


def local_trees(g: EdgeIndexedGraph, v: str) -> list[LocalTree]:
    """Every legal way of splitting ``v`` into a tree of 1--1 edges.

    Leaves carry at least one end and are not a lone index-1 end; branch
    points without ends have degree at least 3; blocks of degree 2 carry an
    end.  Variable labels count as at least 2.  The first entry is the
    trivial split.
    """
    ends = sorted(g.ends_at(v))
    out: list[LocalTree] = [((tuple(ends),), ())]
    for blocks in set_partitions(ends):
        if len(blocks) < 2:
            continue
        blocks = [tuple(b) for b in blocks]
        root = next(b for b in blocks if ends[0] in b)
        rest = [b for b in blocks if b is not root]
        for nodes, edges in _rooted(root, rest):
            deg = [0] * len(nodes)
            for a, b in edges:
                deg[a] += 1
                deg[b] += 1
            ok = True
            for node, d in zip(nodes, deg):
                if d == 1 and len(node) == 1 and g.label(node[0]) == 1:
                    ok = False
                    break
            if ok:
                out.append((tuple(nodes), tuple(edges)))
    return out


def fresh_name(stem: str, taken: set) -> str:
    """``stem`` itself if free, else ``stem~2``, ``stem~3``, ...; the result is added to ``taken``."""
    name, k = stem, 1
    while name in taken:
        k += 1
        name = f"{stem}~{k}"
    taken.add(name)
    return name


def _apply_local_trees(g: EdgeIndexedGraph, choice: dict[str, LocalTree]) -> Blowup:
    vtaken = set(g.vertices)
    etaken = {e.name for e in g.edges}
    where: dict[End, str] = {}
    verts: list[str] = []
    vmap: dict[str, str] = {}
    forest_edges: list[Edge] = []
    for v in g.vertices:
        nodes, tedges = choice[v]
        names = [v] + [fresh_name(f"{v}.{i}", vtaken) for i in range(1, len(nodes))]
        for name, node in zip(names, nodes):
            verts.append(name)
            vmap[name] = v
            for z in node:
                where[z] = name
        for i, (a, b) in enumerate(tedges, start=1):
            forest_edges.append(Edge(fresh_name(f"{v}.f{i}", etaken), names[a], 1, names[b], 1))
    edges = [Edge(e.name, where[End(e.name, 0)], e.iu, where[End(e.name, 1)], e.iw) for e in g.edges]
    graph = g.replace(vertices=verts, edges=edges + forest_edges)
    return Blowup(g, graph, frozenset(e.name for e in forest_edges), vmap)


def iter_blowups(g: EdgeIndexedGraph, rng: random.Random | None = None) -> Iterator[Blowup]:
    """Blowups of ``g`` by increasing forest size (trivial first).

    Two blowups are considered equal when they agree over the base, i.e.
    they split the same base ends the same way.  The order within one
    forest size is the generation order, or shuffled under ``rng``.
    """
    per_vertex = {v: local_trees(g, v) for v in g.vertices}
    combos = []
    for pick in itertools.product(*[range(len(per_vertex[v])) for v in g.vertices]):
        size = sum(len(per_vertex[v][k][1]) for v, k in zip(g.vertices, pick))
        combos.append((size, pick))
    if rng is not None:
        rng.shuffle(combos)
        combos.sort(key=lambda c: c[0])
    else:
        combos.sort()
    for _, pick in combos:
        yield _apply_local_trees(g, {v: per_vertex[v][k] for v, k in zip(g.vertices, pick)})


def enumerate_blowups(g: EdgeIndexedGraph) -> list[Blowup]:
    """All blowups of the thornless graph ``g``, trivial one included."""
    require_thornless(g)
    return list(iter_blowups(g))


# -- blowup and subcover -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Witness:
    """A blowup ``base <- graph`` followed by a covering map out of ``graph``."""
    blowup: Blowup
    cover: CoveringMap

    @property
    def target(self) -> EdgeIndexedGraph:
        return self.cover.target


def has_blowup_and_proper_subcover(g: EdgeIndexedGraph, *, rng: random.Random | None = None,
                                   mode: str = "refined") -> Witness | None:
    """First blowup (in :func:`iter_blowups` order) admitting a proper subcover.

    The returned cover is the minimal subcover of the blown-up graph.
    """
    require_thornless(g)
    require_bushy(g)
    for b in iter_blowups(g, rng):
        if find_proper_subcover(b.graph, mode=mode, rng=rng) is not None:
            _, m = minimal_subcover(b.graph, mode=mode, rng=rng)
            return Witness(b, m)
    return None


def verify_witness(w: Witness) -> None:
    verify_blowup(w.blowup)
    if w.cover.source != w.blowup.graph:
        raise PumpError("cover does not start at the blown-up graph")
    certify(w.cover)


def _index1_edges(g: EdgeIndexedGraph) -> list[str]:
    return [e.name for e in g.edges if 1 in (e.iu, e.iw)]


def subroutine1(g: EdgeIndexedGraph, w: Witness) -> Witness:
    """Reshape a blowup and proper subcover so the target has no index-1 edge.

    The target's 1--1 edges are collapsed along a maximal forest ``G``; the
    preimage of ``G`` is collapsed in the blown-up graph, and the induced map
    is followed by a minimal subcover.  The resulting blowup forest is
    nonempty because ``g`` is its own minimal subcover.
    """
    mu, blow = w.cover, w.blowup
    if blow.base != g:
        raise PumpError("witness is not a blowup of the given graph")
    g2 = mu.target
    ones = _index1_edges(g2)
    if not ones:
        result = w
    else:
        for name in ones:
            e = g2.edge(name)
            if (e.iu, e.iw) != (1, 1):
                raise PumpError(f"index-1 edge {name!r} of the subcover is not of type 1-1")
        G = _spanning_forest(g2, sorted(ones))
        g3, q_g = collapse_11_forest(g2, G)
        sub = mu.subdivided_source
        g_tilde = sorted(x for x, t in mu.edge_map.items() if t in G)
        for x in g_tilde:
            if not blow.graph.has_edge(x) or x not in blow.forest:
                raise PumpError(f"preimage edge {x!r} of the collapsed forest is not a blowup forest edge")
        g1c, q_t = collapse_11_forest(blow.graph, g_tilde)
        vmap = {}
        for v in sub.vertices:
            img = q_g[mu.vertex_map[v]]
            key = q_t.get(v, v)
            if vmap.setdefault(key, img) != img:
                raise PumpError("induced map is not well defined on collapsed vertices")
        gt = set(g_tilde)
        emap = {x: t for x, t in mu.edge_map.items() if x not in gt}
        zmap = {z: y for z, y in mu.end_map.items() if z.edge not in gt}
        mu1 = certify(CoveringMap(g1c, g3, mu.subdivided, vmap, emap, zmap))
        g4, nu = minimal_subcover(g3)
        new_blow = Blowup(g, g1c, blow.forest - gt, {q_t[v]: blow.vertex_map[v] for v in blow.graph.vertices})
        result = Witness(new_blow, compose(mu1, nu))
    if _index1_edges(result.target):
        raise PumpError("subroutine 1 left an index-1 edge in the target")
    if not result.blowup.forest:
        raise PumpError("subroutine 1 produced an empty blowup forest")
    verify_witness(result)
    return result


def _spanning_forest(g: EdgeIndexedGraph, names: list[str]) -> list[str]:
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x
    out = []
    for n in names:
        e = g.edge(n)
        a, b = find(e.u), find(e.w)
        if a != b:
            parent[a] = b
            out.append(n)
    return out


@dataclass(frozen=True, eq=False)
class PushoutResult:
    blowup: Blowup          # Gamma_1 <- Gamma' with the new 1--1 edges as forest
    cover: CoveringMap      # Gamma' -> Gamma_3
    new_edges: int


def pushout(mu: CoveringMap, q: Blowup) -> PushoutResult:
    """Fibre product of ``mu: G1 -> G2`` with a single-edge blowup ``G2 <- G3``.

    Vertices are pairs ``(V, W)`` over a common vertex of ``G2``; a vertex
    ``V`` over the collapsed vertex ``Z`` splits into ``V*W0`` and ``V*W1``
    joined by a new 1--1 edge ``V*e``.  Every other edge keeps its ``G1``
    name and indices.
    """
    if len(q.forest) != 1:
        raise PumpError("pushout needs a blowup with exactly one forest edge")
    if mu.target != q.base:
        raise PumpError("pushout: covering target differs from the blowup base")
    (e,) = q.forest
    g1, g2, g3 = mu.source, mu.target, q.graph
    fe = g3.edge(e)
    if (fe.iu, fe.iw) != (1, 1):
        raise PumpError("pushout: collapsed edge is not of type 1-1")
    Z = q.vertex_map[fe.u]
    back = {}
    for w3, w2 in q.vertex_map.items():
        if w2 != Z:
            back[w2] = w3
    sub = mu.subdivided_source

    vtaken = {V for V in g1.vertices if mu.vertex_map[V] != Z} | {midpoint_name(n) for n in mu.subdivided}
    etaken = {D.name for D in g1.edges} | {half_name(n, s) for n in mu.subdivided for s in (0, 1)}
    pair_names: dict[tuple[str, str], str] = {}

    def name(V, W):
        if mu.vertex_map[V] != Z:
            return V
        if (V, W) not in pair_names:
            pair_names[(V, W)] = fresh_name(f"{V}*{W}", vtaken)
        return pair_names[(V, W)]

    verts: list[str] = []
    vmap_down: dict[str, str] = {}
    nu_v: dict[str, str] = {}
    over_z = []
    for V in g1.vertices:
        if mu.vertex_map[V] == Z:
            over_z.append(V)
            for W in (fe.u, fe.w):
                verts.append(name(V, W))
                vmap_down[name(V, W)] = V
                nu_v[name(V, W)] = W
        else:
            verts.append(V)
            vmap_down[V] = V
            nu_v[V] = back[mu.vertex_map[V]]
    edges, nu_e, nu_z = [], {}, {}
    for D in g1.edges:
        n = D.name
        if n in mu.subdivided:
            outer = (End(half_name(n, 0), 0), End(half_name(n, 1), 1))
            inner = (End(half_name(n, 0), 1), End(half_name(n, 1), 0))
            y = mu.end_map[outer[0]]
            W = g3.vertex_of(y)
            mid = midpoint_name(n)
            if mu.vertex_map[mid] == Z:
                raise PumpError("pushout: a fold point lies over the collapsed vertex")
            nu_v[mid] = back[mu.vertex_map[mid]]
            edges.append(Edge(n, name(D.u, W), D.iu, name(D.w, W), D.iw))
            for s in (0, 1):
                h = half_name(n, s)
                nu_e[h] = mu.edge_map[h]
                for side in (0, 1):
                    nu_z[End(h, side)] = mu.end_map[End(h, side)]
        else:
            ends = []
            for s in (0, 1):
                y = mu.end_map[End(n, s)]
                ends.append(name(D.vertex(s), g3.vertex_of(y)))
                nu_z[End(n, s)] = y
            nu_e[n] = mu.edge_map[n]
            edges.append(Edge(n, ends[0], D.iu, ends[1], D.iw))
    new = []
    for V in over_z:
        n = fresh_name(f"{V}*{e}", etaken)
        new.append(n)
        edges.append(Edge(n, name(V, fe.u), 1, name(V, fe.w), 1))
        nu_e[n] = e
        nu_z[End(n, 0)] = End(e, 0)
        nu_z[End(n, 1)] = End(e, 1)
    gp = EdgeIndexedGraph(verts, edges)
    for v in gp.vertices:
        if _is_22(gp, v):
            raise PumpError(f"pushout created vertex {v!r} of valence 2 and total index 2")
    blow = Blowup(g1, gp, frozenset(new), vmap_down)
    verify_blowup(blow)
    nu = certify(CoveringMap(gp, g3, mu.subdivided, nu_v, nu_e, nu_z))
    return PushoutResult(blow, nu, len(new))


def partial_collapses(q: Blowup) -> list[Blowup]:
    """Factor a blowup into single-edge blowups, first one at the blown-up end.

    Returns ``[B_1, ..., B_k]`` with ``B_1.graph == q.graph`` and
    ``B_k.base == q.base``.
    """
    order = sorted(q.forest)
    g = q.graph
    fibre_size: dict[str, int] = {}
    for v, z in q.vertex_map.items():
        fibre_size[z] = fibre_size.get(z, 0) + 1
    steps = []
    current = g
    cls = {v: frozenset([v]) for v in g.vertices}  # current vertex name -> member set
    for i, e in enumerate(order):
        edge = current.edge(e)
        merged = cls[edge.u] | cls[edge.w]
        z = q.vertex_map[next(iter(merged))]
        new_name = z if len(merged) == fibre_size[z] else min(merged)
        new_cls = {k: c for k, c in cls.items() if k not in (edge.u, edge.w)}
        new_cls[new_name] = merged
        rename = {edge.u: new_name, edge.w: new_name}
        verts = []
        for v in current.vertices:
            r = rename.get(v, v)
            if r not in verts:
                verts.append(r)
        edges = [Edge(x.name, rename.get(x.u, x.u), x.iu, rename.get(x.w, x.w), x.iw)
                 for x in current.edges if x.name != e]
        nxt = current.replace(vertices=verts, edges=edges)
        steps.append(Blowup(nxt, current, frozenset([e]), {v: rename.get(v, v) for v in current.vertices}))
        current, cls = nxt, new_cls
    if steps and steps[-1].base != q.base:
        raise PumpError("partial collapses do not reproduce the base graph")
    return steps


def compose_blowups(lower: Blowup, upper: Blowup) -> Blowup:
    """``lower.base <- lower.graph == upper.base <- upper.graph``."""
    if lower.graph != upper.base:
        raise PumpError("blowups do not chain")
    forest = frozenset(e.name for e in upper.graph.edges if not lower.base.has_edge(e.name))
    vmap = {v: lower.vertex_map[upper.vertex_map[v]] for v in upper.graph.vertices}
    return Blowup(lower.base, upper.graph, forest, vmap)


def subroutine2(first: Witness, second: Witness) -> Witness:
    """Merge ``G <- G1 -> G2`` and ``G2 <- G3 -> G4`` into one move ``G <- G' -> G4``.

    The forest of the second blowup is collapsed one edge at a time and each
    step is absorbed by a pushout.
    """
    if first.cover.target != second.blowup.base:
        raise PumpError("subroutine 2: the moves do not chain")
    mu = first.cover
    blow = first.blowup
    for step in reversed(partial_collapses(second.blowup)):
        res = pushout(mu, step)
        blow = compose_blowups(blow, res.blowup)
        mu = res.cover
    if mu.target != second.cover.source:
        raise PumpError("subroutine 2: pushout does not reach the second blown-up graph")
    out = Witness(blow, compose(mu, second.cover))
    verify_witness(out)
    return out


# -- certificates and the algorithm -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Step:
    kind: str           # "collapse" | "subcover" | "blowup"
    payload: object

    @property
    def source(self) -> EdgeIndexedGraph:
        p = self.payload
        return p.base if self.kind == "blowup" else p.source

    @property
    def target(self) -> EdgeIndexedGraph:
        p = self.payload
        return p.graph if self.kind == "blowup" else p.target


@dataclass(frozen=True, eq=False)
class PumpCertificate:
    initial: EdgeIndexedGraph
    final: EdgeIndexedGraph
    steps: tuple[Step, ...]
    forest_sizes: tuple[int, ...] = ()

    def replay(self) -> None:
        """Re-verify every step and the chaining; raise on failure."""
        cur = self.initial
        for i, st in enumerate(self.steps):
            if st.source != cur:
                raise PumpError(f"certificate step {i} does not start where the previous one ended")
            if st.kind == "collapse":
                verify_collapse(st.payload)
            elif st.kind == "subcover":
                certify(st.payload)
            elif st.kind == "blowup":
                verify_blowup(st.payload)
            else:
                raise PumpError(f"unknown step kind {st.kind!r}")
            cur = st.target
        if cur != self.final:
            raise PumpError("certificate does not end at the final graph")
        for a, b in zip(self.forest_sizes, self.forest_sizes[1:]):
            if not a < b:
                raise PumpError("blowup forest sizes are not strictly increasing")

    def maps(self) -> list[CoveringMap]:
        return [s.payload for s in self.steps if s.kind == "subcover"]


def collapse_and_subcover(g: EdgeIndexedGraph, *, rng: random.Random | None = None
                          ) -> tuple[EdgeIndexedGraph, PumpCertificate]:
    """Maximal index-1 forest collapse followed by the minimal subcover."""
    require_bushy(g)
    # The forest choice is not confluent (different maximal index-1 forests
    # can lead to different maximal trees), so it stays deterministic; rng
    # only permutes the subcover search.
    c = maximal_index1_forest_collapse(g)
    h, m = minimal_subcover(c.target, rng=rng)
    steps = []
    if not c.is_trivial:
        steps.append(Step("collapse", c))
    if m.is_proper:
        steps.append(Step("subcover", m))
    if _index1_edges(h):
        raise PumpError("collapse and subcover left an index-1 edge")
    return h, PumpCertificate(g, h, tuple(steps))


def pump_up(g: EdgeIndexedGraph, *, rng: random.Random | None = None
            ) -> tuple[EdgeIndexedGraph, PumpCertificate]:
    """Pump ``g`` up to a graph with no index-1 edge and no blowup and proper subcover.

    Step 1 is a collapse and subcover.  If the result still has a blowup and
    proper subcover, moves are accumulated through subroutines 1 and 2 into a
    single blowup and subcover whose forest size grows strictly each round,
    which bounds the number of rounds.
    """
    require_thornless(g)
    require_bushy(g)
    g1, cert = collapse_and_subcover(g, rng=rng)
    w = has_blowup_and_proper_subcover(g1, rng=rng)
    if w is None:
        return g1, cert
    w = subroutine1(g1, w)
    sizes = [len(w.blowup.forest)]
    while True:
        nxt = has_blowup_and_proper_subcover(w.target, rng=rng)
        if nxt is None:
            break
        nxt = subroutine1(w.target, nxt)
        w = subroutine2(w, nxt)
        if len(w.blowup.forest) <= sizes[-1]:
            raise PumpError("blowup forest did not grow; termination argument violated")
        sizes.append(len(w.blowup.forest))
    steps = cert.steps + (Step("blowup", w.blowup), Step("subcover", w.cover))
    final = PumpCertificate(g, w.target, steps, tuple(sizes))
    return w.target, final


@dataclass(frozen=True, eq=False)
class MaxSymResult:
    value: bool
    clause: str | None = None
    witness: Witness | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.value


def is_maximally_symmetric(g: EdgeIndexedGraph, *, rng: random.Random | None = None,
                           mode: str = "refined") -> MaxSymResult:
    """Decide maximal symmetry of the universal cover from the quotient ``g``.

    The criterion is applied to ``g`` as given: every index-1 edge must be of
    type 1--1, those edges must form a forest ``F``, and ``g/F`` must admit
    no blowup and proper subcover.
    """
    require_thornless(g)
    require_bushy(g)
    ones = _index1_edges(g)
    for n in ones:
        e = g.edge(n)
        if (e.iu, e.iw) != (1, 1):
            return MaxSymResult(False, "index-1 edges are 1-1", detail=f"edge {n} has indices ({e.iu}, {e.iw})")
    try:
        h, _ = collapse_11_forest(g, ones)
    except PumpError as exc:
        return MaxSymResult(False, "index-1 edges form a forest", detail=str(exc))
    w = has_blowup_and_proper_subcover(h, rng=rng, mode=mode)
    if w is None:
        return MaxSymResult(True)
    clause = "proper subcover" if w.blowup.is_trivial else "blowup and proper subcover"
    return MaxSymResult(False, clause, w, detail=f"{w.blowup.graph!r} covers {w.target!r}")
