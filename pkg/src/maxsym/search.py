"""Backtracking search over quotient patterns of a subdivided graph.

A quotient pattern assigns every vertex, edge and end of an (already
subdivided) source graph to a target vertex, edge and end so that

* incidence is respected and each edge maps homeomorphically onto its image,
* the two halves at a subdivision vertex map to one target edge with both
  inner ends on the same target end,
* every source vertex over a target vertex ``W`` sends at least one end to
  every target end at ``W``.

In numeric mode the index sums over each target end must also agree across
the source vertices above it, which is exactly the even covering condition.
In symbolic mode labels are not inspected; the caller turns each pattern
into linear equations.

Patterns are generated without repetition: target vertices and edges are
numbered in order of creation, so each partition of the source cells is
produced by exactly one branch.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterator

from .graph import EdgeIndexedGraph, End

TEnd = tuple[int, int]  # (target edge id, side)


@dataclass(frozen=True)
class Pattern:
    graph: EdgeIndexedGraph                 # the subdivided source
    vertex: dict[str, int]                  # source vertex -> target vertex id
    edge: dict[str, int]                    # source edge -> target edge id
    end: dict[End, TEnd]                    # source end -> target end
    tedges: tuple[tuple[int, int], ...]     # target edge id -> (vertex at side 0, vertex at side 1)
    n_vertices: int

    def is_bijective(self) -> bool:
        return self.n_vertices == len(self.graph.vertices) and len(self.tedges) == len(self.graph.edges)

    def target_ends_at(self, w: int) -> list[TEnd]:
        out = []
        for t, (a, b) in enumerate(self.tedges):
            if a == w:
                out.append((t, 0))
            if b == w:
                out.append((t, 1))
        return out


def bfs_edge_order(g: EdgeIndexedGraph) -> list[str]:
    root = g.vertices[0]
    seen_v = {root}
    seen_e: set[str] = set()
    order: list[str] = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for z in g.ends_at(v):
            if z.edge not in seen_e:
                seen_e.add(z.edge)
                order.append(z.edge)
            w = g.far_vertex(z)
            if w not in seen_v:
                seen_v.add(w)
                queue.append(w)
    return order


class _Search:
    def __init__(self, g: EdgeIndexedGraph, siblings: dict[str, tuple[str, int]],
                 vkey: Callable[[str], Hashable] | None,
                 dkey: Callable[[End], Hashable] | None,
                 numeric: bool, rng: random.Random | None):
        self.g = g
        self.siblings = siblings
        self.vkey = vkey
        self.dkey = dkey
        self.numeric = numeric
        self.rng = rng
        self.order = bfs_edge_order(g)
        self.vimg: dict[str, int] = {}
        self.members: list[list[str]] = []
        self.wkey: list[Hashable] = []
        self.wends: list[list[TEnd]] = []
        self.complete: list[int] = []
        self.tedges: list[tuple[int, int]] = []
        self.tkey: dict[TEnd, Hashable] = {}
        self.tindex: dict[TEnd, int] = {}
        self.tindex_owner: dict[TEnd, int] = {}
        self.endimg: dict[End, TEnd] = {}
        self.edgeimg: dict[str, int] = {}
        self.sums: dict[str, dict[TEnd, int]] = {v: {} for v in g.vertices}
        self.remaining: dict[str, int] = {v: g.valence(v) for v in g.vertices}
        self.trail: list[Callable[[], None]] = []

    # -- undo-able primitives --------------------------------------------------

    def _mark(self) -> int:
        return len(self.trail)

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.trail.pop()()

    def _new_vertex(self, key) -> int:
        w = len(self.members)
        self.members.append([])
        self.wkey.append(key)
        self.wends.append([])
        self.complete.append(0)

        def undo():
            self.members.pop()
            self.wkey.pop()
            self.wends.pop()
            self.complete.pop()
        self.trail.append(undo)
        return w

    def _assign_vertex(self, v: str, w: int) -> bool:
        if self.vkey is not None and self.vkey(v) != self.wkey[w]:
            return False
        # every target end at w needs one of v's ends
        if len(self.wends[w]) > self.g.valence(v):
            return False
        self.vimg[v] = w
        self.members[w].append(v)

        def undo():
            del self.vimg[v]
            self.members[w].pop()
        self.trail.append(undo)
        return True

    def _new_edge(self, w0: int, w1: int) -> int | None:
        for w in {w0, w1}:
            if self.complete[w]:
                return None
        t = len(self.tedges)
        self.tedges.append((w0, w1))
        self.wends[w0].append((t, 0))
        self.wends[w1].append((t, 1))

        def undo():
            self.tedges.pop()
            self.wends[w1].pop()
            self.wends[w0].pop()
        self.trail.append(undo)
        for w in {w0, w1}:
            need = len(self.wends[w])
            for v in self.members[w]:
                if need - len(self.sums[v]) > self.remaining[v]:
                    return None
        return t

    def _map_end(self, z: End, te: TEnd) -> bool:
        key = self.dkey(z) if self.dkey is not None else None
        if self.dkey is not None:
            if te in self.tkey:
                if self.tkey[te] != key:
                    return False
            else:
                self.tkey[te] = key
                self.trail.append(lambda: self.tkey.pop(te))
        v = self.g.vertex_of(z)
        amount = self.g.index(z) if self.numeric else 1
        sums = self.sums[v]
        old = sums.get(te)
        sums[te] = (old or 0) + amount
        self.remaining[v] -= 1
        self.endimg[z] = te

        def undo():
            if old is None:
                del sums[te]
            else:
                sums[te] = old
            self.remaining[v] += 1
            del self.endimg[z]
        self.trail.append(undo)
        if self.numeric and te in self.tindex and sums[te] > self.tindex[te]:
            return False
        w = self.vimg[v]
        if len(self.wends[w]) - len(sums) > self.remaining[v]:
            return False
        if self.remaining[v] == 0:
            return self._complete(v, w)
        return True

    def _complete(self, v: str, w: int) -> bool:
        sums = self.sums[v]
        if len(sums) != len(self.wends[w]):
            return False
        if self.numeric:
            for te, s in sums.items():
                if te in self.tindex:
                    if self.tindex[te] != s:
                        return False
                else:
                    self.tindex[te] = s
                    self.trail.append(lambda te=te: self.tindex.pop(te))
        self.complete[w] += 1

        def undo():
            self.complete[w] -= 1
        self.trail.append(undo)
        return True

    # -- search ----------------------------------------------------------------

    def _options(self, name: str):
        """Yield callables that try one assignment for edge ``name``."""
        e = self.g.edge(name)
        z0, z1 = End(name, 0), End(name, 1)
        sib = self.siblings.get(name)
        if sib is not None and sib[0] in self.edgeimg:
            other, inner_side = sib
            t, s = self.endimg[End(other, 1 - inner_side)]
            mine = End(name, inner_side)
            outer = mine.opposite
            yield lambda: self._try_existing_fixed(t, {mine: (t, s), outer: (t, 1 - s)})
            return
        opts = []
        for t in range(len(self.tedges)):
            for o in (0, 1):
                opts.append(("old", t, o))
        known0 = e.u in self.vimg
        a_known = e.u if known0 else e.w
        a_other = e.w if known0 else e.u
        if a_other in self.vimg or a_other == a_known:
            opts.append(("new", None, None))
        else:
            for w in range(len(self.members)):
                opts.append(("new", w, None))
            opts.append(("new", -1, None))
        if self.rng is not None:
            self.rng.shuffle(opts)
        for kind, x, o in opts:
            if kind == "old":
                yield lambda t=x, o=o: self._try_existing_fixed(t, {z0: (t, o), z1: (t, 1 - o)})
            else:
                yield lambda x=x: self._try_new(name, x)

    def _place(self, v: str, w: int) -> bool:
        if v in self.vimg:
            return self.vimg[v] == w
        return self._assign_vertex(v, w)

    def _try_existing_fixed(self, t: int, assign: dict[End, TEnd]) -> bool:
        for z, (tt, s) in assign.items():
            if not self._place(self.g.vertex_of(z), self.tedges[tt][s]):
                return False
        name = next(iter(assign)).edge
        self.edgeimg[name] = t
        self.trail.append(lambda: self.edgeimg.pop(name))
        for z in sorted(assign):
            if not self._map_end(z, assign[z]):
                return False
        return True

    def _try_new(self, name: str, choice: int | None) -> bool:
        e = self.g.edge(name)
        if e.u in self.vimg and e.w in self.vimg:
            w0, w1 = self.vimg[e.u], self.vimg[e.w]
        elif e.u == e.w:
            w0 = w1 = self.vimg[e.u]
        else:
            known, other = (e.u, e.w) if e.u in self.vimg else (e.w, e.u)
            if choice == -1:
                w = self._new_vertex(self.vkey(other) if self.vkey is not None else None)
            else:
                w = choice
            if not self._assign_vertex(other, w):
                return False
            w0, w1 = self.vimg[e.u], self.vimg[e.w]
        t = self._new_edge(w0, w1)
        if t is None:
            return False
        return self._try_existing_fixed(t, {End(name, 0): (t, 0), End(name, 1): (t, 1)})

    def run(self) -> Iterator[Pattern]:
        root = self.g.vertices[0]
        w = self._new_vertex(self.vkey(root) if self.vkey is not None else None)
        self._assign_vertex(root, w)
        if not self.order:
            yield self._snapshot()
            return
        yield from self._dfs(0)

    def _dfs(self, i: int) -> Iterator[Pattern]:
        if i == len(self.order):
            yield self._snapshot()
            return
        for attempt in self._options(self.order[i]):
            mark = self._mark()
            if attempt():
                yield from self._dfs(i + 1)
            self._undo(mark)

    def _snapshot(self) -> Pattern:
        return Pattern(self.g, dict(self.vimg), dict(self.edgeimg), dict(self.endimg),
                       tuple(self.tedges), len(self.members))


def quotient_patterns(g: EdgeIndexedGraph, siblings: dict[str, tuple[str, int]] | None = None, *,
                      vkey: Callable[[str], Hashable] | None = None,
                      dkey: Callable[[End], Hashable] | None = None,
                      numeric: bool = True,
                      rng: random.Random | None = None) -> Iterator[Pattern]:
    """All quotient patterns of ``g`` compatible with the given keys.

    ``siblings`` maps each half-edge of a subdivided edge to
    ``(other half, side of this half at the midpoint)``.  ``vkey``/``dkey``
    restrict which vertices and ends may share an image.
    """
    yield from _Search(g, siblings or {}, vkey, dkey, numeric, rng).run()


def half_siblings(corr: dict[str, tuple[str, str, str]]) -> dict[str, tuple[str, int]]:
    """Sibling table for :func:`quotient_patterns` from a subdivision record."""
    out: dict[str, tuple[str, int]] = {}
    for _, (_, h0, h1) in corr.items():
        out[h0] = (h1, 1)
        out[h1] = (h0, 0)
    return out
