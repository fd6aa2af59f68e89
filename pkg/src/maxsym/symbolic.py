"""Symbolic enumeration of maximally symmetric edge-indexings of a graph shape.

A *shape* is a loop-free, bigon-free graph whose end indices are variables.
For every blowup of the shape and every combinatorial subcover pattern of
that blowup, the even covering condition becomes a linear system in the
variables.  The union ``X`` of the resulting affine subspaces is exactly the
set of indexings that admit a blowup and proper subcover, so the integer
points (all coordinates at least 2) off ``X`` are the indexings whose
universal covering tree is maximally symmetric.  The unimodular ones are
those on the monomial variety ``Y`` cut out by the cycle equations.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from math import prod
from typing import Iterable, Iterator, Sequence

from .covering import CoveringMap, pattern_to_map
from .graph import Edge, EdgeIndexedGraph, End, GraphError, fundamental_cycles, subdivide
from .linalg import AffineSystem, InconsistentSystem
from .pumping import Blowup, enumerate_blowups
from .search import Pattern, half_siblings, quotient_patterns


class ShapeError(ValueError):
    """The graph is not a valid shape (loops, bigons, repeated variables...)."""


class GraphShape:
    """An edge-indexed graph whose end labels are distinct variables.

    ``variables`` fixes the coordinate order; by default it is the order of
    first appearance reading each edge side 0 then side 1.
    """

    def __init__(self, graph: EdgeIndexedGraph, variables: Sequence[str] | None = None):
        if not graph.edges:
            raise ShapeError("shape needs at least one edge")
        seen_pairs = set()
        labels = []
        for e in graph.edges:
            if e.is_loop:
                raise ShapeError(f"shape has a loop ({e.name})")
            pair = frozenset((e.u, e.w))
            if pair in seen_pairs:
                raise ShapeError(f"shape has a bigon ({e.name})")
            seen_pairs.add(pair)
            for lab in (e.iu, e.iw):
                if not isinstance(lab, str):
                    raise ShapeError(f"shape labels must be variables, got {lab!r} on {e.name}")
                labels.append(lab)
        if len(set(labels)) != len(labels):
            raise ShapeError("each end needs its own variable")
        if variables is None:
            variables = labels
        if sorted(variables) != sorted(labels):
            raise ShapeError("variable list does not match the end labels")
        self.graph = graph if graph.symbolic else graph.replace()
        self.variables = tuple(variables)

    @classmethod
    def from_graph(cls, g: EdgeIndexedGraph, variables: Sequence[str] | None = None) -> "GraphShape":
        return cls(g, variables)

    def instantiate(self, values: Sequence[int] | dict) -> EdgeIndexedGraph:
        """Numeric graph with the given variable values."""
        val = values if isinstance(values, dict) else dict(zip(self.variables, values))
        return instantiate(self.graph, val)

    def __repr__(self) -> str:
        return f"GraphShape({self.graph!r}, variables={self.variables})"


def instantiate(g: EdgeIndexedGraph, values: dict) -> EdgeIndexedGraph:
    def sub(x):
        return values[x] if isinstance(x, str) else x
    edges = [Edge(e.name, e.u, sub(e.iu), e.w, sub(e.iw)) for e in g.edges]
    return EdgeIndexedGraph(g.vertices, edges)


# -- blowups and patterns ------------------------------------------------------


def symbolic_blowups(s: GraphShape) -> list[Blowup]:
    """All blowups of the shape; forest ends carry the constant 1."""
    return enumerate_blowups(s.graph)


@dataclass(frozen=True)
class LHS:
    """``sum(variables) + const``: the left side of one even covering equation."""
    variables: tuple[str, ...]
    const: int

    def __str__(self) -> str:
        parts = list(self.variables)
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)


@dataclass(frozen=True)
class EvenCoveringSystem:
    """Equations ``LHS(v, t) = y_t`` for every target end ``t`` and source vertex ``v`` over it."""
    variables: tuple[str, ...]
    blocks: tuple[tuple[tuple[int, int], tuple[tuple[str, LHS], ...]], ...]

    def equations(self) -> list[str]:
        out = []
        for (t, side), rows in self.blocks:
            for v, lhs in rows:
                out.append(f"{lhs} = y{t}.{side}")
        return out


@dataclass(frozen=True, eq=False)
class SymbolicPattern:
    """A combinatorial subcover of a blown-up shape with its equations."""
    blowup: Blowup
    subdivided: frozenset
    pattern: Pattern
    system: EvenCoveringSystem

    @property
    def fold_degree(self) -> int:
        """Number of source edges (after subdivision) over each target edge, when uniform."""
        counts = Counter(self.pattern.edge.values())
        return max(counts.values())

    def describe(self) -> str:
        sub = ", ".join(sorted(self.subdivided)) or "nothing"
        return (f"subdivide {sub}; {len(self.pattern.graph.edges)} edges onto "
                f"{len(self.pattern.tedges)}")

    def instantiate(self, values: dict) -> CoveringMap:
        """The covering map this pattern gives at a numeric point."""
        g = instantiate(self.blowup.graph, values)
        sub, _ = subdivide(g, sorted(self.subdivided))
        return pattern_to_map(g, self.subdivided, replace(self.pattern, graph=sub))


def _system(p: Pattern, variables: tuple[str, ...]) -> EvenCoveringSystem:
    sub = p.graph
    blocks: dict[tuple[int, int], list] = {}
    order = {x: i for i, x in enumerate(variables)}
    for v in sub.vertices:
        acc: dict[tuple[int, int], tuple[list, int]] = {}
        for z in sub.ends_at(v):
            vs, c = acc.setdefault(p.end[z], ([], 0))
            lab = sub.label(z)
            if isinstance(lab, str):
                vs.append(lab)
            else:
                acc[p.end[z]] = (vs, c + lab)
        for t, (vs, c) in acc.items():
            blocks.setdefault(t, []).append((v, LHS(tuple(sorted(vs, key=order.__getitem__)), c)))
    return EvenCoveringSystem(variables, tuple(sorted((t, tuple(rows)) for t, rows in blocks.items())))


def edge_subsets(names: Sequence[str]) -> Iterator[tuple[str, ...]]:
    for k in range(len(names) + 1):
        yield from itertools.combinations(names, k)


def symbolic_subcovers(b: Blowup, variables: Sequence[str]) -> list[SymbolicPattern]:
    """Every non-identity subcover pattern of the blown-up shape.

    Subdivision choices range over all edge subsets (by size, then edge
    order); index values are never inspected.
    """
    variables = tuple(variables)
    g = b.graph
    out = []
    for chosen in edge_subsets([e.name for e in g.edges]):
        sub, corr = subdivide(g, chosen)
        for p in quotient_patterns(sub, half_siblings(corr), numeric=False):
            if not chosen and p.is_bijective():
                continue
            out.append(SymbolicPattern(b, frozenset(chosen), p, _system(p, variables)))
    return out


# -- systems -----------------------------------------------------------------------


def check_consistency(sys: EvenCoveringSystem) -> bool:
    """False iff some target end has two constant-only left sides that differ.

    Every variable occurs in exactly one left side, so this is the only way
    the equations can fail to have a real solution.
    """
    for _, rows in sys.blocks:
        consts = {lhs.const for _, lhs in rows if not lhs.variables}
        if len(consts) > 1:
            return False
    return True


def reduce_system(sys: EvenCoveringSystem) -> AffineSystem:
    """Eliminate the ``y`` variables by equating left sides within each block."""
    if not check_consistency(sys):
        raise InconsistentSystem("even covering system is inconsistent")
    eqs = []
    for _, rows in sys.blocks:
        lhs = [x for _, x in rows]
        for a, b in zip(lhs, lhs[1:]):
            if not a.variables and not b.variables:
                continue
            eq: dict = {}
            for v in a.variables:
                eq[v] = eq.get(v, 0) + 1
            for v in b.variables:
                eq[v] = eq.get(v, 0) - 1
            eq[1] = a.const - b.const
            eqs.append(eq)
    return AffineSystem(sys.variables, eqs)


def is_vacuous_isomorphism(pattern: SymbolicPattern, reduced: AffineSystem) -> bool:
    """True iff the reduced system places no condition on the indices."""
    return reduced.is_full_space


@dataclass(frozen=True, eq=False)
class XEntry:
    blowup_index: int
    pattern: SymbolicPattern
    system: AffineSystem


@dataclass(frozen=True, eq=False)
class XReport:
    shape: GraphShape
    blowups: tuple[Blowup, ...]
    entries: tuple[XEntry, ...]        # every consistent non-vacuous system, generation order
    subspaces: tuple[AffineSystem, ...]  # after dedup and containment pruning
    inconsistent: int = 0
    vacuous: int = 0

    def contains(self, point) -> bool:
        return any(x.contains_point(point) for x in self.subspaces)


def prune(systems: Iterable[AffineSystem]) -> list[AffineSystem]:
    """Drop duplicates and every subspace contained in another one."""
    uniq: list[AffineSystem] = []
    for s in systems:
        if s not in uniq:
            uniq.append(s)
    return [s for s in uniq if not any(o is not s and s.is_subspace_of(o) for o in uniq)]


def compute_X(s: GraphShape) -> XReport:
    """All blowup-and-subcover subspaces of the shape, before and after pruning."""
    blowups = symbolic_blowups(s)
    entries = []
    bad = vac = 0
    for k, b in enumerate(blowups):
        for sp in symbolic_subcovers(b, s.variables):
            if not check_consistency(sp.system):
                bad += 1
                continue
            red = reduce_system(sp.system)
            if is_vacuous_isomorphism(sp, red):
                vac += 1
                continue
            entries.append(XEntry(k, sp, red))
    pruned = prune(e.system for e in entries)
    return XReport(s, tuple(blowups), tuple(entries), tuple(pruned), bad, vac)


# -- unimodular variety --------------------------------------------------------------


@dataclass(frozen=True)
class MonomialVariety:
    """Equations ``prod(lhs) = prod(rhs)``, one per fundamental cycle."""
    variables: tuple[str, ...]
    equations: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]

    def contains_point(self, point) -> bool:
        val = point if isinstance(point, dict) else dict(zip(self.variables, point))
        return all(prod(val[x] for x in a) == prod(val[x] for x in b) for a, b in self.equations)

    def __str__(self) -> str:
        if not self.equations:
            return "{}"
        return "{" + ", ".join("*".join(a) + " = " + "*".join(b) for a, b in self.equations) + "}"


def unimodular_variety(s: GraphShape) -> MonomialVariety:
    """Cycle equations: product of head labels equals product of tail labels."""
    eqs = []
    for cyc in fundamental_cycles(s.graph):
        heads, tails = [], []
        for name, direction in cyc:
            tail = End(name, 0 if direction == 1 else 1)
            tails.append(s.graph.label(tail))
            heads.append(s.graph.label(tail.opposite))
        if set(heads) & set(tails) or len(heads) != len(tails):
            raise ShapeError("cycle equation has shared variables")
        eqs.append((tuple(heads), tuple(tails)))
    return MonomialVariety(s.variables, tuple(eqs))


FILTERS = ("all", "unimodular", "nonunimodular")


def enumerate_maxsym_indexings(s: GraphShape, lo: int, hi: int, filter: str = "all",
                               report: XReport | None = None) -> list[tuple[int, ...]]:
    """Integer tuples in ``[lo..hi]^N`` lying on no subspace of ``X``.

    ``filter`` keeps only tuples on (``"unimodular"``) or off
    (``"nonunimodular"``) the unimodular variety.
    """
    if lo < 2 or hi < lo:
        raise ValueError(f"box must satisfy 2 <= lo <= hi, got {lo}..{hi}")
    if filter not in FILTERS:
        raise ValueError(f"filter must be one of {FILTERS}")
    report = report or compute_X(s)
    y = unimodular_variety(s)
    out = []
    for point in itertools.product(range(lo, hi + 1), repeat=len(s.variables)):
        if report.contains(point):
            continue
        if filter != "all" and y.contains_point(point) != (filter == "unimodular"):
            continue
        out.append(point)
    return out
