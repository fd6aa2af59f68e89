"""Finite balls in the universal covering tree of an edge-indexed graph.

The ball is grown breadth first.  A lift of a vertex ``v`` gets, for every
end ``k`` at ``v``, exactly ``I(k)`` incident lifts of the edge of ``k``;
one of them is the edge back to the parent when the parent edge is a lift
of ``k``.  Tree vertices are named by their path from the root, e.g.
``r/e1.0:2`` is the third lift of the end ``e1.0`` at the root.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .graph import EdgeIndexedGraph, End


@dataclass(frozen=True)
class TreeVertex:
    name: str
    depth: int
    image: str                  # base vertex
    parent: str | None
    up_end: End | None          # base end at this vertex used by the edge to the parent


@dataclass
class TruncatedCoverTree:
    base: EdgeIndexedGraph
    root: str
    depth: int
    vertices: dict[str, TreeVertex] = field(default_factory=dict)
    # tree edge (parent, child) -> (base end at parent, base end at child)
    edges: dict[tuple[str, str], tuple[End, End]] = field(default_factory=dict)

    def is_interior(self, name: str) -> bool:
        return self.vertices[name].depth < self.depth

    def neighbours(self, name: str) -> list[str]:
        out = []
        v = self.vertices[name]
        if v.parent is not None:
            out.append(v.parent)
        out.extend(c for (p, c) in self.edges if p == name)
        return out

    def valence(self, name: str) -> int:
        return len(self.neighbours(name))

    def level_sizes(self) -> list[int]:
        c = Counter(v.depth for v in self.vertices.values())
        return [c[d] for d in range(self.depth + 1)]

    def incident_ends(self, name: str) -> list[End]:
        """Base ends at ``name``'s image used by its incident tree edges."""
        v = self.vertices[name]
        out = [] if v.up_end is None else [v.up_end]
        out.extend(a for (p, c), (a, _) in self.edges.items() if p == name)
        return out


def build_truncated_cover(g: EdgeIndexedGraph, root: str, d: int) -> TruncatedCoverTree:
    if not g.has_vertex(root):
        raise KeyError(f"unknown root {root!r}")
    if d < 0:
        raise ValueError("depth must be >= 0")
    t = TruncatedCoverTree(g, root, d)
    t.vertices[root] = TreeVertex(root, 0, root, None, None)
    queue = deque([root])
    while queue:
        name = queue.popleft()
        tv = t.vertices[name]
        if tv.depth == d:
            continue
        for z in g.ends_at(tv.image):
            count = g.index(z) - (1 if z == tv.up_end else 0)
            for i in range(count):
                child = f"{name}/{z.edge}.{z.side}:{i}"
                far = z.opposite
                t.vertices[child] = TreeVertex(child, tv.depth + 1, g.vertex_of(far), name, far)
                t.edges[(name, child)] = (z, far)
                queue.append(child)
    return t


@dataclass(frozen=True)
class LocalCoverReport:
    ok: bool
    failures: tuple[tuple[str, End, int, int], ...] = ()  # (tree vertex, base end, found, expected)

    def __bool__(self) -> bool:
        return self.ok


def check_local_even_covering(t: TruncatedCoverTree) -> LocalCoverReport:
    """Each interior lift of ``v`` sees every end ``k`` at ``v`` exactly ``I(k)`` times."""
    fails = []
    for name, tv in t.vertices.items():
        if not t.is_interior(name):
            continue
        counts = Counter(t.incident_ends(name))
        for z in t.base.ends_at(tv.image):
            if counts.get(z, 0) != t.base.index(z):
                fails.append((name, z, counts.get(z, 0), t.base.index(z)))
        extra = set(counts) - set(t.base.ends_at(tv.image))
        for z in sorted(extra):
            fails.append((name, z, counts[z], 0))
        # the tree edge must also land on the right base vertex
        for nb in t.neighbours(name):
            key = (name, nb) if (name, nb) in t.edges else (nb, name)
            a, b = t.edges[key]
            here, there = (a, b) if key[0] == name else (b, a)
            if t.base.vertex_of(there) != t.vertices[nb].image or here.opposite != there:
                fails.append((name, here, 0, 1))
    return LocalCoverReport(not fails, tuple(fails))


def _reaches_frontier(t: TruncatedCoverTree, start: str, avoid: str) -> bool:
    stack, seen = [start], {avoid, start}
    while stack:
        x = stack.pop()
        if t.vertices[x].depth == t.depth:
            return True
        for y in t.neighbours(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def bushy_witness(t: TruncatedCoverTree) -> str | None:
    """An interior vertex with at least three branches reaching the frontier.

    Reaching the frontier of a finite ball stands in for being unbounded.
    """
    if t.depth < 2:
        raise ValueError("need depth >= 2")
    for name in sorted(t.vertices, key=lambda n: (t.vertices[n].depth, n)):
        if not t.is_interior(name) or t.valence(name) < 3:
            continue
        branches = sum(_reaches_frontier(t, nb, name) for nb in t.neighbours(name))
        if branches >= 3:
            return name
    return None


def embeds_in(small: TruncatedCoverTree, big: TruncatedCoverTree) -> bool:
    """True iff the smaller ball is the depth-truncation of the bigger one (same names)."""
    if small.base != big.base or small.root != big.root or small.depth > big.depth:
        return False
    for name, tv in small.vertices.items():
        if big.vertices.get(name) != tv:
            return False
    return all(k in big.edges and big.edges[k] == v for k, v in small.edges.items())
