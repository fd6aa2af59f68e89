"""Text formats: graphs (.eig), shapes (.eigs), graphs of groups, maps,
certificates, and DOT export.

Graph files are line based::

    # comment
    vertex u
    vertex w
    edge e1 u 4 w 5

Shape files add ``var NAME`` declarations and use the names in place of
integer indices.  Maps and certificates may embed graphs between
``graph NAME`` and ``end`` lines so a single file can be re-verified on its
own.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .covering import CoveringMap
from .graph import Edge, EdgeIndexedGraph, End, GraphError, half_name, midpoint_name
from .pumping import Blowup, Collapse, PumpCertificate, Step, index1_collapse, chain_collapses, trivial_collapse


class FormatError(ValueError):
    """Syntax error in an input file; carries the 1-based line number."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


# -- graphs ------------------------------------------------------------------------


def _parse_label(tok: str, no: int, variables: list[str] | None):
    try:
        val = int(tok)
    except ValueError:
        if variables is None:
            raise FormatError(f"index must be an integer, got {tok!r}", no)
        if tok not in variables:
            raise FormatError(f"undeclared variable {tok!r}", no)
        return tok
    if val < 1:
        raise FormatError(f"index must be >= 1, got {val}", no)
    return val


def _graph_from_rows(rows: list[tuple[int, list[str]]], shape: bool):
    vertices: list[str] = []
    edges: list[Edge] = []
    variables: list[str] | None = [] if shape else None
    for no, tok in rows:
        kw = tok[0]
        if kw == "vertex" and len(tok) == 2:
            if tok[1] in vertices:
                raise FormatError(f"duplicate vertex {tok[1]!r}", no)
            vertices.append(tok[1])
        elif kw == "var" and shape and len(tok) >= 2:
            for name in tok[1:]:
                if name in variables or name.lstrip("-").isdigit():
                    raise FormatError(f"bad or duplicate variable {name!r}", no)
                variables.append(name)
        elif kw == "edge" and len(tok) == 6:
            _, name, v1, i1, v2, i2 = tok
            for v in (v1, v2):
                if v not in vertices:
                    raise FormatError(f"edge {name!r} references undeclared vertex {v!r}", no)
            if any(e.name == name for e in edges):
                raise FormatError(f"duplicate edge {name!r}", no)
            edges.append(Edge(name, v1, _parse_label(i1, no, variables), v2, _parse_label(i2, no, variables)))
        else:
            raise FormatError(f"cannot parse {' '.join(tok)!r}", no)
    if not vertices:
        raise FormatError("no vertices")
    return EdgeIndexedGraph(vertices, edges, symbolic=shape), variables


def parse_eig(text: str) -> EdgeIndexedGraph:
    """Parse a graph; raises :class:`FormatError` on syntax problems and
    :class:`~maxsym.graph.GraphError` when the graph is disconnected."""
    g, _ = _graph_from_rows(list(_lines(text)), shape=False)
    return g


def parse_eigs(text: str):
    """Parse a shape file into a :class:`~maxsym.symbolic.GraphShape`."""
    from .symbolic import GraphShape
    g, variables = _graph_from_rows(list(_lines(text)), shape=True)
    return GraphShape(g, variables or None)


def _graph_lines(g: EdgeIndexedGraph) -> list[str]:
    out = [f"vertex {v}" for v in g.vertices]
    out += [f"edge {e.name} {e.u} {e.iu} {e.w} {e.iw}" for e in g.edges]
    return out


def serialize_eig(g: EdgeIndexedGraph) -> str:
    return "\n".join(_graph_lines(g)) + "\n"


def serialize_eigs(shape) -> str:
    return "var " + " ".join(shape.variables) + "\n" + serialize_eig(shape.graph)


def read_graph(path: str | os.PathLike) -> EdgeIndexedGraph:
    return parse_eig(Path(path).read_text(encoding="utf-8"))


def write_graph(path: str | os.PathLike, g: EdgeIndexedGraph) -> None:
    Path(path).write_text(serialize_eig(g), encoding="utf-8")


# -- graphs of finite groups ----------------------------------------------------------


@dataclass(frozen=True)
class GraphOfFiniteGroups:
    vertices: tuple[tuple[str, int], ...]                 # (name, group order)
    edges: tuple[tuple[str, str, str, int], ...]          # (name, v1, v2, edge group order)


class DivisibilityError(ValueError):
    pass


def parse_gog(text: str) -> GraphOfFiniteGroups:
    """``vertex NAME ORDER`` and ``edge NAME V1 V2 ORDER`` lines."""
    verts: list[tuple[str, int]] = []
    edges: list[tuple[str, str, str, int]] = []
    for no, tok in _lines(text):
        try:
            if tok[0] == "vertex" and len(tok) == 3:
                verts.append((tok[1], int(tok[2])))
            elif tok[0] == "edge" and len(tok) == 5:
                edges.append((tok[1], tok[2], tok[3], int(tok[4])))
            else:
                raise FormatError(f"cannot parse {' '.join(tok)!r}", no)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError("group orders must be integers", no) from None
        if (verts and verts[-1][1] < 1) or (edges and edges[-1][3] < 1):
            raise FormatError("group orders must be >= 1", no)
    names = {v for v, _ in verts}
    for e in edges:
        for v in e[1:3]:
            if v not in names:
                raise FormatError(f"edge {e[0]!r} references undeclared vertex {v!r}")
    return GraphOfFiniteGroups(tuple(verts), tuple(edges))


def ingest_gog(gog: GraphOfFiniteGroups) -> EdgeIndexedGraph:
    """Index of the end of ``e`` at ``v`` is ``|G_v| / |G_e|``."""
    order = dict(gog.vertices)
    edges = []
    for name, v1, v2, k in gog.edges:
        for v in (v1, v2):
            if order[v] % k:
                raise DivisibilityError(f"edge {name}: group order {k} does not divide |G_{v}| = {order[v]}")
        edges.append(Edge(name, v1, order[v1] // k, v2, order[v2] // k))
    return EdgeIndexedGraph([v for v, _ in gog.vertices], edges)


# -- maps and certificates -------------------------------------------------------------


def _map_lines(m: CoveringMap) -> list[str]:
    out = [f"subdivide {e}" for e in sorted(m.subdivided)]
    for v in m.subdivided_source.vertices:
        out.append(f"vmap {v} {m.vertex_map[v]}")
    for e in m.subdivided_source.edges:
        y = m.end_map[End(e.name, 0)]
        out.append(f"emap {e.name} {m.edge_map[e.name]} {'+' if y.side == 0 else '-'}")
    return out


def _map_from_rows(rows, source: EdgeIndexedGraph, target: EdgeIndexedGraph) -> CoveringMap:
    sub, vmap, emap, zmap = set(), {}, {}, {}
    for no, tok in rows:
        if tok[0] == "subdivide" and len(tok) == 2:
            sub.add(tok[1])
        elif tok[0] == "vmap" and len(tok) == 3:
            vmap[tok[1]] = tok[2]
        elif tok[0] == "emap" and len(tok) in (3, 4):
            flip = len(tok) == 4 and tok[3] == "-"
            if len(tok) == 4 and tok[3] not in "+-":
                raise FormatError("orientation must be + or -", no)
            emap[tok[1]] = tok[2]
            zmap[End(tok[1], 0)] = End(tok[2], 1 if flip else 0)
            zmap[End(tok[1], 1)] = End(tok[2], 0 if flip else 1)
        else:
            raise FormatError(f"cannot parse {' '.join(tok)!r}", no)
    return CoveringMap(source, target, frozenset(sub), vmap, emap, zmap)


def _blowup_lines(b: Blowup) -> list[str]:
    out = [f"forest {e}" for e in sorted(b.forest)]
    out += [f"vmap {v} {b.vertex_map[v]}" for v in b.graph.vertices]
    return out


def _blowup_from_rows(rows, base, graph) -> Blowup:
    forest, vmap = set(), {}
    for no, tok in rows:
        if tok[0] == "forest" and len(tok) == 2:
            forest.add(tok[1])
        elif tok[0] == "vmap" and len(tok) == 3:
            vmap[tok[1]] = tok[2]
        else:
            raise FormatError(f"cannot parse {' '.join(tok)!r}", no)
    return Blowup(base, graph, frozenset(forest), vmap)


def _collapse_from_rows(rows, source) -> Collapse:
    c = trivial_collapse(source)
    for no, tok in rows:
        if tok[0] != "collapse" or len(tok) != 2:
            raise FormatError(f"cannot parse {' '.join(tok)!r}", no)
        try:
            c = chain_collapses(c, index1_collapse(c.target, tok[1]))
        except (KeyError, ValueError) as exc:
            raise FormatError(f"collapse {tok[1]}: {exc}", no) from None
    return c


class _Doc:
    """Graph blocks and top-level rows of a map or certificate file."""

    def __init__(self, text: str, base: Path | None):
        self.base = base
        self.graphs: dict[str, EdgeIndexedGraph] = {}
        self.rows: list[tuple[int, list[str]]] = []
        block: list | None = None
        name = None
        for no, tok in _lines(text):
            if block is not None:
                if tok == ["end"]:
                    self.graphs[name] = _graph_from_rows(block, shape=False)[0]
                    block = None
                else:
                    block.append((no, tok))
            elif tok[0] == "graph" and len(tok) == 2:
                block, name = [], tok[1]
            else:
                self.rows.append((no, tok))
        if block is not None:
            raise FormatError(f"graph block {name!r} is not closed")

    def graph(self, ref: str) -> EdgeIndexedGraph:
        if ref in self.graphs:
            return self.graphs[ref]
        path = Path(ref) if self.base is None else self.base / ref
        if not path.exists():
            raise FormatError(f"unknown graph {ref!r}")
        return read_graph(path)


def serialize_map(m: CoveringMap, source: str = "source", target: str = "target", *,
                  embed: bool = True) -> str:
    out = ["# covering map"]
    if embed:
        for name, g in ((source, m.source), (target, m.target)):
            out += [f"graph {name}"] + ["  " + x for x in _graph_lines(g)] + ["end"]
    out += [f"source {source}", f"target {target}"] + _map_lines(m)
    return "\n".join(out) + "\n"


def parse_map(text: str, base: Path | None = None) -> CoveringMap:
    doc = _Doc(text, base)
    head = {tok[0]: tok[1] for _, tok in doc.rows if tok[0] in ("source", "target") and len(tok) == 2}
    if set(head) != {"source", "target"}:
        raise FormatError("map needs 'source' and 'target' lines")
    rows = [r for r in doc.rows if r[1][0] not in ("source", "target")]
    return _map_from_rows(rows, doc.graph(head["source"]), doc.graph(head["target"]))


def serialize_certificate(cert: PumpCertificate) -> str:
    graphs = [cert.initial] + [s.target for s in cert.steps]
    out = ["# pumping certificate"]
    for i, g in enumerate(graphs):
        out += [f"graph G{i}"] + ["  " + x for x in _graph_lines(g)] + ["end"]
    out += ["initial G0", f"final G{len(graphs) - 1}"]
    if cert.forest_sizes:
        out.append("forest-sizes " + " ".join(map(str, cert.forest_sizes)))
    for i, st in enumerate(cert.steps):
        out.append(f"step {st.kind} G{i} G{i + 1}")
        if st.kind == "collapse":
            out += [f"collapse {e}" for e in st.payload.forest]
        elif st.kind == "subcover":
            out += _map_lines(st.payload)
        else:
            out += _blowup_lines(st.payload)
        out.append("endstep")
    return "\n".join(out) + "\n"


def parse_certificate(text: str, base: Path | None = None) -> PumpCertificate:
    doc = _Doc(text, base)
    initial = final = None
    sizes: tuple[int, ...] = ()
    steps = []
    cur = None
    for no, tok in doc.rows:
        if cur is not None:
            if tok == ["endstep"]:
                kind, src, dst, rows = cur
                if kind == "collapse":
                    payload = _collapse_from_rows(rows, src)
                    if payload.target != dst:
                        raise FormatError("collapse step does not produce the declared graph", no)
                elif kind == "subcover":
                    payload = _map_from_rows(rows, src, dst)
                elif kind == "blowup":
                    payload = _blowup_from_rows(rows, src, dst)
                else:
                    raise FormatError(f"unknown step kind {kind!r}", no)
                steps.append(Step(kind, payload))
                cur = None
            else:
                cur[3].append((no, tok))
        elif tok[0] == "initial" and len(tok) == 2:
            initial = doc.graph(tok[1])
        elif tok[0] == "final" and len(tok) == 2:
            final = doc.graph(tok[1])
        elif tok[0] == "forest-sizes":
            sizes = tuple(int(x) for x in tok[1:])
        elif tok[0] == "step" and len(tok) == 4:
            cur = (tok[1], doc.graph(tok[2]), doc.graph(tok[3]), [])
        else:
            raise FormatError(f"cannot parse {' '.join(tok)!r}", no)
    if cur is not None:
        raise FormatError("unterminated step block")
    if initial is None or final is None:
        raise FormatError("certificate needs 'initial' and 'final' lines")
    return PumpCertificate(initial, final, tuple(steps), sizes)


def is_certificate(text: str) -> bool:
    return any(tok[0] == "initial" for _, tok in _lines(text))


# -- DOT ---------------------------------------------------------------------------------

DASH = "—"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: EdgeIndexedGraph, name: str = "G") -> str:
    """Vertices labelled ``name:total index``, edges labelled ``i<dash>j``."""
    out = [f"graph {_q(name)} {{"]
    for v in g.vertices:
        ti = g.total_index(v) if not g.symbolic else "?"
        out.append(f"  {_q(v)} [label={_q(f'{v}:{ti}')}];")
    for e in g.edges:
        out.append(f"  {_q(e.u)} -- {_q(e.w)} [label={_q(f'{e.iu}{DASH}{e.iw}')}, id={_q(e.name)}];")
    out.append("}")
    return "\n".join(out) + "\n"


_DEPTH_COLOURS = ["black", "red", "orange", "gold", "green", "blue", "purple", "brown", "gray"]


def cover_tree_to_dot(t) -> str:
    """Ball of the universal cover; vertex colour encodes depth."""
    ids = {name: f"n{i}" for i, name in enumerate(t.vertices)}
    out = ["graph cover {"]
    for name, tv in t.vertices.items():
        colour = _DEPTH_COLOURS[tv.depth % len(_DEPTH_COLOURS)]
        label = f"{tv.image}:{t.base.total_index(tv.image)}"
        out.append(f"  {ids[name]} [label={_q(label)}, color={colour}, tooltip={_q(name)}];")
    for (p, c), (a, _) in t.edges.items():
        out.append(f"  {ids[p]} -- {ids[c]} [label={_q(a.edge)}];")
    out.append("}")
    return "\n".join(out) + "\n"
