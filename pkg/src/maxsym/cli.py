"""Command line interface (``maxsym``)."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .covering import CoveringError, NotBushyError, certify, minimal_subcover, verify_covering
from .graph import GraphError, Trichotomy, is_thornless, is_unimodular, thornless_core, trichotomy
from .linalg import InconsistentSystem
from .pumping import (PumpCertificate, PumpError, Step, is_maximally_symmetric, pump_up)
from .symbolic import ShapeError, compute_X, enumerate_maxsym_indexings, unimodular_variety
from .ucover import build_truncated_cover, check_local_even_covering

EXIT_OK, EXIT_ASSERT, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


class SemanticError(Exception):
    pass


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _load_graph(path: str):
    p = Path(path)
    if not p.exists():
        raise formats.FormatError(f"no such file: {path}")
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".gog":
        return formats.ingest_gog(formats.parse_gog(text))
    return formats.parse_eig(text)


def _witness_certificate(g, w) -> PumpCertificate:
    return PumpCertificate(g, w.target, (Step("blowup", w.blowup), Step("subcover", w.cover)))


def cmd_check(a) -> int:
    g = _load_graph(a.file)
    tri = trichotomy(g)
    thornless = is_thornless(g)
    uni = is_unimodular(g)
    normalized = all(g.index(z) >= 2 for z in g.all_ends())
    print(f"vertices: {len(g.vertices)}  edges: {len(g.edges)}")
    print(f"trichotomy: {tri.value}")
    print(f"bushy: {_yn(tri is Trichotomy.BUSHY)}")
    print(f"thornless: {_yn(thornless)}")
    print(f"unimodular: {_yn(uni)}")
    print(f"index-1-normalized: {_yn(normalized)}")
    maxsym = None
    if tri is Trichotomy.BUSHY and thornless:
        res = is_maximally_symmetric(g)
        maxsym = bool(res)
        line = f"maximally-symmetric: {'YES' if maxsym else 'NO'}"
        if not maxsym:
            line += f" (fails: {res.clause}"
            line += f"; {res.detail})" if res.detail else ")"
        print(line)
        if res.witness is not None:
            text = formats.serialize_certificate(_witness_certificate(g, res.witness))
            if a.witness:
                Path(a.witness).write_text(text, encoding="utf-8")
                print(f"witness written to {a.witness}")
            else:
                print(f"witness target: {res.witness.target!r}")
    else:
        print("maximally-symmetric: n/a (needs a bushy thornless graph)")
    checks = [(a.assert_bushy, tri is Trichotomy.BUSHY, "bushy"),
              (a.assert_thornless, thornless, "thornless"),
              (a.assert_unimodular, uni, "unimodular"),
              (a.assert_normalized, normalized, "index-1-normalized"),
              (a.assert_maxsym, bool(maxsym), "maximally symmetric")]
    failed = [name for want, ok, name in checks if want and not ok]
    for name in failed:
        print(f"assertion failed: not {name}", file=sys.stderr)
    return EXIT_ASSERT if failed else EXIT_OK


def cmd_normalize(a) -> int:
    g = _load_graph(a.file)
    core, removed = thornless_core(g)
    if removed:
        print(f"trimmed thorns: {' '.join(removed)}")
    if trichotomy(core) is not Trichotomy.BUSHY:
        raise SemanticError(f"input is not bushy ({trichotomy(core).value})")
    h, cert = pump_up(core)
    formats.write_graph(a.output, h)
    print(f"normalized: {h!r}")
    print(f"steps: {' '.join(s.kind for s in cert.steps) or 'none'}")
    if a.certificate:
        Path(a.certificate).write_text(formats.serialize_certificate(cert), encoding="utf-8")
        print(f"certificate written to {a.certificate}")
    return EXIT_OK


def cmd_subcover(a) -> int:
    g = _load_graph(a.file)
    h, m = minimal_subcover(g)
    formats.write_graph(a.output, h)
    print(f"minimal subcover: {h!r}")
    if a.map:
        Path(a.map).write_text(formats.serialize_map(m), encoding="utf-8")
        print(f"map written to {a.map}")
    return EXIT_OK


def _parse_box(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise formats.FormatError(f"box must look like LO..HI, got {text!r}") from None


def cmd_enumerate(a) -> int:
    p = Path(a.shape)
    if not p.exists():
        raise formats.FormatError(f"no such file: {a.shape}")
    shape = formats.parse_eigs(p.read_text(encoding="utf-8"))
    lo, hi = _parse_box(a.box)
    if lo < 2 or hi < lo:
        raise SemanticError("box must satisfy 2 <= LO <= HI")
    rep = compute_X(shape)
    print(f"variables: {' '.join(shape.variables)}")
    print(f"blowups: {len(rep.blowups)}")
    if a.pre_pruning:
        print(f"systems (pre-pruning): {len(rep.entries)}")
        for i, e in enumerate(rep.entries, start=1):
            print(f"  ({i}) blowup {e.blowup_index}: {e.pattern.describe()}: {e.system}")
    print(f"subspaces: {len(rep.subspaces)}")
    for i, x in enumerate(rep.subspaces, start=1):
        print(f"  X{i} {x}")
    print(f"unimodular variety: {unimodular_variety(shape)}")
    filt = "unimodular" if a.unimodular else "nonunimodular" if a.nonunimodular else "all"
    pts = enumerate_maxsym_indexings(shape, lo, hi, filt, report=rep)
    print(f"tuples ({filt}, box {lo}..{hi}): {len(pts)}")
    for t in pts:
        print("  " + " ".join(map(str, t)))
    return EXIT_OK


def cmd_cover_tree(a) -> int:
    g = _load_graph(a.file)
    if not g.has_vertex(a.root):
        raise SemanticError(f"unknown root vertex {a.root!r}")
    if a.depth < 0:
        raise SemanticError("depth must be >= 0")
    t = build_truncated_cover(g, a.root, a.depth)
    rep = check_local_even_covering(t)
    print(f"level sizes: {' '.join(map(str, t.level_sizes()))}")
    print(f"local even covering: {'ok' if rep else 'FAILED'}")
    if a.dot:
        Path(a.dot).write_text(formats.cover_tree_to_dot(t), encoding="utf-8")
        print(f"dot written to {a.dot}")
    return EXIT_OK if rep else EXIT_ASSERT


def cmd_verify(a) -> int:
    p = Path(a.file)
    if not p.exists():
        raise formats.FormatError(f"no such file: {a.file}")
    text = p.read_text(encoding="utf-8")
    if formats.is_certificate(text):
        cert = formats.parse_certificate(text, p.parent)
        try:
            cert.replay()
        except (PumpError, CoveringError) as exc:
            print(f"certificate INVALID: {exc}")
            return EXIT_ASSERT
        print(f"certificate valid: {len(cert.steps)} step(s)")
        return EXIT_OK
    m = formats.parse_map(text, p.parent)
    rep = verify_covering(m)
    print(f"map {rep.verdict}")
    return EXIT_OK if rep else EXIT_ASSERT


def cmd_ingest_gog(a) -> int:
    p = Path(a.file)
    if not p.exists():
        raise formats.FormatError(f"no such file: {a.file}")
    g = formats.ingest_gog(formats.parse_gog(p.read_text(encoding="utf-8")))
    formats.write_graph(a.output, g)
    print(f"edge-indexed graph: {g!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxsym", description="Maximally symmetric trees from edge-indexed graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="report properties of a graph")
    c.add_argument("file")
    c.add_argument("--witness", help="write a blowup/subcover witness certificate here")
    for flag in ("maxsym", "bushy", "unimodular", "thornless", "normalized"):
        c.add_argument(f"--assert-{flag}", action="store_true")
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("normalize", help="pump up to a maximally symmetric quotient")
    n.add_argument("file")
    n.add_argument("-o", "--output", required=True)
    n.add_argument("--certificate")
    n.set_defaults(func=cmd_normalize)

    s = sub.add_parser("subcover", help="minimal subcover")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--map")
    s.set_defaults(func=cmd_subcover)

    e = sub.add_parser("enumerate", help="maximally symmetric indexings of a shape")
    e.add_argument("shape")
    e.add_argument("--box", required=True)
    g = e.add_mutually_exclusive_group()
    g.add_argument("--unimodular", action="store_true")
    g.add_argument("--nonunimodular", action="store_true")
    e.add_argument("--pre-pruning", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    t = sub.add_parser("cover-tree", help="ball in the universal covering tree")
    t.add_argument("file")
    t.add_argument("--root", required=True)
    t.add_argument("--depth", type=int, required=True)
    t.add_argument("--dot")
    t.set_defaults(func=cmd_cover_tree)

    v = sub.add_parser("verify", help="re-verify a map or certificate file")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("ingest-gog", help="graph of finite groups to edge-indexed graph")
    i.add_argument("file")
    i.add_argument("-o", "--output", required=True)
    i.set_defaults(func=cmd_ingest_gog)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return a.func(a)
    except formats.FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GraphError, formats.DivisibilityError, NotBushyError, PumpError, ShapeError,
            InconsistentSystem, CoveringError, SemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
