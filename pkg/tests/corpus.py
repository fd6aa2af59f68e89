"""Deterministic test corpora shared by the property suites."""

from __future__ import annotations

import functools
import random
from math import prod
from pathlib import Path

from maxsym.families import planted_graph, random_graph
from maxsym.formats import read_graph
from maxsym.graph import is_bushy, is_thornless
from maxsym.pumping import local_trees

DATA = Path(__file__).parent / "data"
MAX_VALENCE = 4
MAX_BLOWUPS = 512


def tractable(g) -> bool:
    """Bushy, thornless and small enough that blowup enumeration stays cheap."""
    if not (is_thornless(g) and is_bushy(g)):
        return False
    if max(g.valence(v) for v in g.vertices) > MAX_VALENCE:
        return False
    return prod(len(local_trees(g, v)) for v in g.vertices) <= MAX_BLOWUPS


@functools.lru_cache(maxsize=None)
def random_corpus(n: int = 160, seed: int = 1) -> tuple:
    rng = random.Random(seed)
    out = []
    per_size: dict[int, int] = {}
    while len(out) < n:
        g = random_graph(rng, max_vertices=6, max_index=rng.choice([3, 4, 6]))
        k = len(g.vertices)
        # keep the vertex counts balanced; small graphs are far more likely to pass
        if per_size.get(k, 0) >= n // 4 or not tractable(g):
            continue
        per_size[k] = per_size.get(k, 0) + 1
        out.append(g)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def planted_corpus(n: int = 48, seed: int = 2) -> tuple:
    rng = random.Random(seed)
    return tuple(planted_graph(rng, max_blowups=MAX_BLOWUPS * 4) for _ in range(n))


@functools.lru_cache(maxsize=None)
def multiround_corpus() -> tuple:
    return tuple(read_graph(p) for p in sorted((DATA / "multiround").glob("*.eig")))


def full_corpus() -> tuple:
    """At least 200 bushy graphs with at most 6 vertices and indices at most 6."""
    return random_corpus() + planted_corpus() + multiround_corpus()
