"""Edge-indexed graphs and their intrinsic predicates.

An edge-indexed graph is a finite connected multigraph (loops and parallel
edges allowed) with a positive integer attached to each edge end.  Ends are
addressed as ``End(edge_name, side)`` with ``side`` 0 or 1; side 0 sits at
``Edge.u`` and side 1 at ``Edge.w``.

The same class also carries *graph shapes*: graphs whose end labels are
variable names instead of integers (see :mod:`maxsym.symbolic`).  Numeric
predicates such as :func:`total_index` reject symbolic labels.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Label = Union[int, str]

SUB_MARK = "^"


class GraphError(ValueError):
    """Raised for malformed or disconnected graphs and bad references."""


@dataclass(frozen=True, order=True)
class End:
    edge: str
    side: int

    @property
    def opposite(self) -> "End":
        return End(self.edge, 1 - self.side)

    def __repr__(self) -> str:
        return f"{self.edge}.{self.side}"


@dataclass(frozen=True)
class Edge:
    name: str
    u: str
    iu: Label
    w: str
    iw: Label

    def vertex(self, side: int) -> str:
        return self.u if side == 0 else self.w

    def label(self, side: int) -> Label:
        return self.iu if side == 0 else self.iw

    @property
    def is_loop(self) -> bool:
        return self.u == self.w

    @property
    def ends(self) -> tuple[End, End]:
        return End(self.name, 0), End(self.name, 1)


def label_key(label: Label) -> tuple:
    """Sort key putting integers before variable names."""
    return (0, label, "") if isinstance(label, int) else (1, 0, label)


class EdgeIndexedGraph:
    """Immutable finite connected edge-indexed graph.

    ``vertices`` keeps the given order; ``edges`` is a tuple of :class:`Edge`.
    With ``symbolic=True`` end labels may be variable names (strings).
    """

    __slots__ = ("vertices", "edges", "_edge", "_ends_at", "_symbolic")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge], *, symbolic: bool = False):
        verts = tuple(vertices)
        eds = tuple(edges)
        if not verts:
            raise GraphError("graph needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex name")
        vset = set(verts)
        by_name: dict[str, Edge] = {}
        ends_at: dict[str, list[End]] = {v: [] for v in verts}
        for e in eds:
            if e.name in by_name:
                raise GraphError(f"duplicate edge name {e.name!r}")
            for side in (0, 1):
                v = e.vertex(side)
                if v not in vset:
                    raise GraphError(f"edge {e.name!r} references unknown vertex {v!r}")
                lab = e.label(side)
                if isinstance(lab, bool) or not isinstance(lab, (int, str)):
                    raise GraphError(f"bad label {lab!r} on edge {e.name!r}")
                if isinstance(lab, int) and lab < 1:
                    raise GraphError(f"index must be >= 1 (edge {e.name!r})")
                if isinstance(lab, str) and not symbolic:
                    raise GraphError(f"non-integer index {lab!r} on edge {e.name!r}")
                ends_at[v].append(End(e.name, side))
            by_name[e.name] = e
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", eds)
        object.__setattr__(self, "_edge", by_name)
        object.__setattr__(self, "_ends_at", {v: tuple(x) for v, x in ends_at.items()})
        object.__setattr__(self, "_symbolic", symbolic)
        if not self._connected():
            raise GraphError("graph is disconnected")

    def __setattr__(self, name, value):
        raise AttributeError("EdgeIndexedGraph is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, rows: Iterable[Sequence], vertices: Iterable[str] | None = None, **kw) -> "EdgeIndexedGraph":
        """Build from ``(name, u, iu, w, iw)`` rows; vertices default to first-seen order."""
        eds = [Edge(*row) for row in rows]
        if vertices is None:
            seen: dict[str, None] = {}
            for e in eds:
                seen.setdefault(e.u)
                seen.setdefault(e.w)
            vertices = list(seen)
        return cls(vertices, eds, **kw)

    def replace(self, vertices: Iterable[str] | None = None, edges: Iterable[Edge] | None = None) -> "EdgeIndexedGraph":
        return type(self)(self.vertices if vertices is None else vertices,
                          self.edges if edges is None else edges,
                          symbolic=self._symbolic)

    # -- incidence ------------------------------------------------------------

    @property
    def symbolic(self) -> bool:
        return self._symbolic

    def edge(self, name: str) -> Edge:
        try:
            return self._edge[name]
        except KeyError:
            raise GraphError(f"unknown edge {name!r}") from None

    def has_edge(self, name: str) -> bool:
        return name in self._edge

    def has_vertex(self, v: str) -> bool:
        return v in self._ends_at

    def ends_at(self, v: str) -> tuple[End, ...]:
        try:
            return self._ends_at[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def all_ends(self) -> Iterator[End]:
        for e in self.edges:
            yield End(e.name, 0)
            yield End(e.name, 1)

    def label(self, end: End) -> Label:
        return self.edge(end.edge).label(end.side)

    def index(self, end: End) -> int:
        lab = self.label(end)
        if not isinstance(lab, int):
            raise GraphError(f"end {end!r} carries variable label {lab!r}")
        return lab

    def vertex_of(self, end: End) -> str:
        return self.edge(end.edge).vertex(end.side)

    def far_vertex(self, end: End) -> str:
        return self.vertex_of(end.opposite)

    def valence(self, v: str) -> int:
        return len(self.ends_at(v))

    def total_index(self, v: str) -> int:
        return sum(self.index(x) for x in self.ends_at(v))

    def _connected(self) -> bool:
        start = self.vertices[0]
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for x in self._ends_at[v]:
                w = self._edge[x.edge].vertex(1 - x.side)
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    # -- comparisons ----------------------------------------------------------

    def _key(self):
        return (frozenset(self.vertices), frozenset(self.edges))

    def __eq__(self, other):
        if not isinstance(other, EdgeIndexedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        body = ", ".join(f"{e.name}:{e.u}({e.iu})-({e.iw}){e.w}" for e in self.edges)
        return f"EdgeIndexedGraph([{body}])" if self.edges else f"EdgeIndexedGraph(vertex {self.vertices[0]})"


# -- predicates ---------------------------------------------------------------


class Trichotomy(enum.Enum):
    BOUNDED = "bounded"
    LINE_LIKE = "line-like"
    BUSHY = "bushy"


def total_index(g: EdgeIndexedGraph, v: str) -> int:
    """Sum of the indices of all ends at ``v`` (a loop contributes both ends)."""
    return g.total_index(v)


def is_thorn(g: EdgeIndexedGraph, v: str) -> bool:
    return g.total_index(v) == 1


def is_thornless(g: EdgeIndexedGraph) -> bool:
    return not any(is_thorn(g, v) for v in g.vertices)


def thornless_core(g: EdgeIndexedGraph) -> tuple[EdgeIndexedGraph, list[str]]:
    """Trim thorns until none remain.

    Thorns are trimmed smallest-name first.  When the core is a single
    vertex, which vertex survives depends on that order.
    """
    verts = list(g.vertices)
    edges = {e.name: e for e in g.edges}
    removed: list[str] = []
    while True:
        tidx = {v: 0 for v in verts}
        for e in edges.values():
            tidx[e.u] += e.iu
            tidx[e.w] += e.iw
        thorns = sorted(v for v in verts if tidx[v] == 1)
        if not thorns or len(verts) == 1:
            break
        v = thorns[0]
        (name,) = [n for n, e in edges.items() if v in (e.u, e.w)]
        del edges[name]
        verts.remove(v)
        removed.append(v)
    core = EdgeIndexedGraph(verts, [e for e in g.edges if e.name in edges])
    return core, removed


def is_orbifold(g: EdgeIndexedGraph) -> bool:
    return all(g.total_index(v) == 2 for v in g.vertices)


def trichotomy(g: EdgeIndexedGraph) -> Trichotomy:
    core, _ = thornless_core(g)
    if not core.edges:
        return Trichotomy.BOUNDED
    if is_orbifold(core):
        return Trichotomy.LINE_LIKE
    return Trichotomy.BUSHY


def is_bushy(g: EdgeIndexedGraph) -> bool:
    return trichotomy(g) is Trichotomy.BUSHY


# -- cycles and unimodularity -------------------------------------------------

Step = tuple[str, int]
Cycle = tuple[Step, ...]


def _step_ends(g: EdgeIndexedGraph, step: Step) -> tuple[End, End]:
    name, direction = step
    if direction not in (1, -1):
        raise GraphError(f"direction must be +1 or -1, got {direction!r}")
    g.edge(name)
    tail = End(name, 0 if direction == 1 else 1)
    return tail, tail.opposite


def check_cycle(g: EdgeIndexedGraph, cycle: Sequence[Step]) -> None:
    if not cycle:
        raise GraphError("empty cycle")
    ends = [_step_ends(g, s) for s in cycle]
    for i, (tail, head) in enumerate(ends):
        nxt_tail = ends[(i + 1) % len(ends)][0]
        if g.vertex_of(head) != g.vertex_of(nxt_tail):
            raise GraphError(f"cycle breaks after step {i} ({cycle[i]!r})")


def cycle_value(g: EdgeIndexedGraph, cycle: Sequence[Step]) -> Fraction:
    """Product of index(head)/index(tail) along a closed walk.

    A step ``(edge, +1)`` runs from side 0 to side 1, ``(edge, -1)`` the
    other way.
    """
    check_cycle(g, cycle)
    value = Fraction(1)
    for step in cycle:
        tail, head = _step_ends(g, step)
        value *= Fraction(g.index(head), g.index(tail))
    return value


def spanning_tree(g: EdgeIndexedGraph) -> tuple[dict[str, tuple[str, Step] | None], list[str]]:
    """BFS tree from the first vertex.

    Returns ``parent`` (vertex -> (parent vertex, step from parent) or None)
    and the list of non-tree edge names in graph order.
    """
    root = g.vertices[0]
    parent: dict[str, tuple[str, Step] | None] = {root: None}
    tree_edges: set[str] = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for x in g.ends_at(v):
            w = g.far_vertex(x)
            if w not in parent:
                parent[w] = (v, (x.edge, 1 if x.side == 0 else -1))
                tree_edges.add(x.edge)
                queue.append(w)
    return parent, [e.name for e in g.edges if e.name not in tree_edges]


def _path_to_root(parent, v) -> list[str]:
    out = [v]
    while parent[v] is not None:
        v = parent[v][0]
        out.append(v)
    return out


def fundamental_cycles(g: EdgeIndexedGraph) -> list[Cycle]:
    """One simple closed walk per non-tree edge of the BFS spanning tree."""
    parent, extra = spanning_tree(g)
    cycles: list[Cycle] = []
    for name in extra:
        e = g.edge(name)
        walk: list[Step] = [(name, 1)]
        up = _path_to_root(parent, e.w)
        down = _path_to_root(parent, e.u)
        common = set(up) & set(down)
        for v in up:
            if v in common:
                break
            pv, (ename, d) = parent[v]
            walk.append((ename, -d))
        tail: list[Step] = []
        for v in down:
            if v in common:
                break
            pv, step = parent[v]
            tail.append(step)
        walk.extend(reversed(tail))
        cycles.append(tuple(walk))
    return cycles


def vertex_potential(g: EdgeIndexedGraph) -> dict[str, Fraction] | None:
    """Positive rational potential with index(head)/index(tail) = pot(head)/pot(tail), if one exists."""
    parent, _ = spanning_tree(g)
    pot: dict[str, Fraction] = {}
    order = sorted(parent, key=lambda v: len(_path_to_root(parent, v)))
    for v in order:
        if parent[v] is None:
            pot[v] = Fraction(1)
            continue
        pv, step = parent[v]
        tail, head = _step_ends(g, step)
        pot[v] = pot[pv] * Fraction(g.index(head), g.index(tail))
    for e in g.edges:
        if pot[e.w] != pot[e.u] * Fraction(e.iw, e.iu):
            return None
    return pot


def is_unimodular(g: EdgeIndexedGraph) -> bool:
    """True iff every cycle of the index cocycle has value 1."""
    return all(cycle_value(g, c) == 1 for c in fundamental_cycles(g))


# -- subdivision --------------------------------------------------------------


def midpoint_name(edge: str) -> str:
    return f"{edge}{SUB_MARK}"


def half_name(edge: str, side: int) -> str:
    return f"{edge}{SUB_MARK}{side}"


def subdivide(g: EdgeIndexedGraph, edges: Iterable[str]) -> tuple[EdgeIndexedGraph, dict[str, tuple[str, str, str]]]:
    """Elementary subdivision of the chosen edges.

    Edge ``e`` becomes ``e^0`` (its old side-0 end, then index 1 at the new
    vertex ``e^``) followed by ``e^1`` (index 1 at ``e^``, then the old
    side-1 end).  Returns the new graph and ``{e: (midpoint, half0, half1)}``.
    """
    chosen = set(edges)
    for name in chosen:
        g.edge(name)
    if not chosen:
        return g, {}
    taken = set(g.vertices) | {e.name for e in g.edges}
    corr: dict[str, tuple[str, str, str]] = {}
    verts = list(g.vertices)
    new_edges: list[Edge] = []
    for e in g.edges:
        if e.name not in chosen:
            new_edges.append(e)
            continue
        m, h0, h1 = midpoint_name(e.name), half_name(e.name, 0), half_name(e.name, 1)
        for n in (m, h0, h1):
            if n in taken:
                raise GraphError(f"subdivision name {n!r} collides with an existing name")
            taken.add(n)
        verts.append(m)
        new_edges.append(Edge(h0, e.u, e.iu, m, 1))
        new_edges.append(Edge(h1, m, 1, e.w, e.iw))
        corr[e.name] = (m, h0, h1)
    return g.replace(verts, new_edges), corr
