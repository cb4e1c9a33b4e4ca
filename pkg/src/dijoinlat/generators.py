"""Seeded random instances for property tests and experiment scripts."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .digraft import Digraft, validate
from .digraph import Digraph, dicut_shore_masks, is_2ec_underlying, min_dicut
from .errors import InvalidInput, PreconditionError


@dataclass(frozen=True)
class GenConfig:
    max_vertices: int = 8
    max_arcs: int = 14
    extra_shores: int = 2  # family members beyond the sink complements
    attempts: int = 200


def _bipartite_digraph(rng: random.Random, cfg: GenConfig) -> Optional[Digraph]:
    n = rng.randint(3, cfg.max_vertices)
    ns = rng.randint(1, n - 1)
    src = [f"s{i}" for i in range(ns)]
    snk = [f"t{i}" for i in range(n - ns)]
    m = rng.randint(max(n, 2), cfg.max_arcs)
    arcs = []
    # every vertex gets at least two arcs so bridges are less likely
    for v in snk:
        for _ in range(2):
            arcs.append((rng.choice(src), v))
    for v in src:
        if sum(a[0] == v for a in arcs) < 2:
            arcs.append((v, rng.choice(snk)))
    while len(arcs) < m:
        arcs.append((rng.choice(src), rng.choice(snk)))
    if len(arcs) > cfg.max_arcs:
        return None
    d = Digraph(tuple(src + snk), tuple((f"a{i}", t, h) for i, (t, h) in enumerate(arcs)))
    return d if is_2ec_underlying(d) else None


def random_digraft(rng: random.Random, cfg: GenConfig = GenConfig()) -> Digraft:
    """A valid digraft: sink complements plus a few random dicut shores."""
    for _ in range(cfg.attempts):
        d = _bipartite_digraph(rng, cfg)
        if d is None:
            continue
        full = d.full_vmask
        fam = [full & ~(1 << v) for v in range(d.n) if not d.out_arcs[v]]
        shores = [u for u in dicut_shore_masks(d) if u not in fam]
        k = rng.randint(0, min(cfg.extra_shores, len(shores)))
        fam += rng.sample(shores, k)
        try:
            return validate(d, fam)
        except InvalidInput:
            continue
    raise RuntimeError("no valid digraft generated; loosen the configuration")


def digraft_stream(seed: int, count: int, cfg: GenConfig = GenConfig()) -> Iterator[Digraft]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_digraft(rng, cfg)


def random_tau_digraph(rng: random.Random, max_vertices: int = 6, max_arcs: int = 14,
                       min_tau: int = 2, attempts: int = 500) -> Digraph:
    """A connected digraph with a dicut, minimum dicut size >= min_tau."""
    for _ in range(attempts):
        n = rng.randint(2, max_vertices)
        m = rng.randint(n, max_arcs)
        order = list(range(n))
        arcs = []
        for _ in range(m):
            i, j = rng.sample(range(n), 2)
            # mostly forward in a fixed order so that dicuts exist
            if i > j and rng.random() < 0.85:
                i, j = j, i
            arcs.append((f"v{order[i]}", f"v{order[j]}"))
        d = Digraph(tuple(f"v{i}" for i in range(n)),
                    tuple((f"a{k}", t, h) for k, (t, h) in enumerate(arcs)))
        if not is_2ec_underlying(d):
            continue
        try:
            tau, _ = min_dicut(d)
        except PreconditionError:
            continue
        if tau >= min_tau:
            return d
    raise RuntimeError("no digraph with the requested minimum dicut size")


def random_2ec_graph(rng: random.Random, max_vertices: int = 7, attempts: int = 500):
    """Edge list of a random 2-edge-connected multigraph-free graph."""
    for _ in range(attempts):
        n = rng.randint(3, max_vertices)
        pairs = list(itertools.combinations(range(n), 2))
        k = rng.randint(n, min(len(pairs), n + 4))
        edges = rng.sample(pairs, k)
        verts = tuple(f"x{i}" for i in range(n))
        d = Digraph(verts, tuple((f"e{i}", verts[a], verts[b]) for i, (a, b) in enumerate(edges)))
        if is_2ec_underlying(d):
            return verts, [(verts[a], verts[b]) for a, b in edges]
    raise RuntimeError("no 2-edge-connected graph generated")
