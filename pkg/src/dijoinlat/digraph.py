"""Directed multigraphs: sources/sinks, dicuts, strong connectivity, dijoins.

Vertices and arcs carry string ids. Internally arc sets are ``int`` bitmasks
(bit ``i`` is the ``i``-th arc) and vertex sets are bitmasks over the vertex
order; the public functions accept and return ordinary collections of ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

from .errors import InvalidInput, PreconditionError

DEFAULT_MAX_VERTICES = 20


class Arc(NamedTuple):
    id: str
    tail: str
    head: str


@dataclass(frozen=True, eq=False)
class Digraph:
    vertices: tuple
    arcs: tuple
    weights: Optional[dict] = field(default=None)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        arcs = tuple(Arc(str(a[0]), str(a[1]), str(a[2])) for a in self.arcs)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arcs", arcs)
        if not verts:
            raise InvalidInput("a digraph needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise InvalidInput("duplicate vertex ids")
        vset = set(verts)
        seen = set()
        for a in arcs:
            if a.id in seen:
                raise InvalidInput(f"duplicate arc id {a.id!r}")
            seen.add(a.id)
            if a.tail not in vset or a.head not in vset:
                raise InvalidInput(f"arc {a.id!r} has an unknown endpoint")
            if a.tail == a.head:
                raise InvalidInput(f"arc {a.id!r} is a loop")
        if self.weights is not None:
            w = {str(k): int(v) for k, v in self.weights.items()}
            if set(w) - seen or any(v < 0 for v in w.values()):
                raise InvalidInput("weights must be nonnegative integers on known arcs")
            object.__setattr__(self, "weights", w)

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return (self.vertices, self.arcs, self.weights) == (other.vertices, other.arcs, other.weights)

    def __repr__(self):
        return f"Digraph(|V|={len(self.vertices)}, |A|={len(self.arcs)})"

    # -- indexing ----------------------------------------------------------
    @cached_property
    def vindex(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def aindex(self):
        return {a.id: i for i, a in enumerate(self.arcs)}

    @property
    def n(self):
        return len(self.vertices)

    @property
    def m(self):
        return len(self.arcs)

    @cached_property
    def full_vmask(self):
        return (1 << self.n) - 1

    @cached_property
    def full_amask(self):
        return (1 << self.m) - 1

    @cached_property
    def tails(self):
        return tuple(self.vindex[a.tail] for a in self.arcs)

    @cached_property
    def heads(self):
        return tuple(self.vindex[a.head] for a in self.arcs)

    @cached_property
    def out_arcs(self):
        """Per vertex index: bitmask of leaving arcs."""
        out = [0] * self.n
        for i, t in enumerate(self.tails):
            out[t] |= 1 << i
        return tuple(out)

    @cached_property
    def in_arcs(self):
        inc = [0] * self.n
        for i, h in enumerate(self.heads):
            inc[h] |= 1 << i
        return tuple(inc)

    @cached_property
    def inc_arcs(self):
        return tuple(o | i for o, i in zip(self.out_arcs, self.in_arcs))

    def amask(self, arc_ids: Iterable[str]) -> int:
        mask = 0
        for a in arc_ids:
            try:
                mask |= 1 << self.aindex[a]
            except KeyError:
                raise InvalidInput(f"unknown arc id {a!r}") from None
        return mask

    def vmask(self, vertex_ids: Iterable[str]) -> int:
        mask = 0
        for v in vertex_ids:
            try:
                mask |= 1 << self.vindex[v]
            except KeyError:
                raise InvalidInput(f"unknown vertex id {v!r}") from None
        return mask

    def arc_ids(self, mask: int) -> frozenset:
        return frozenset(a.id for i, a in enumerate(self.arcs) if mask >> i & 1)

    def vertex_ids(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def out_of(self, vmask: int) -> int:
        """Arc mask of delta^+(U)."""
        out = 0
        for i, (t, h) in enumerate(zip(self.tails, self.heads)):
            if vmask >> t & 1 and not vmask >> h & 1:
                out |= 1 << i
        return out

    def into(self, vmask: int) -> int:
        """Arc mask of delta^-(U)."""
        return self.out_of(self.full_vmask & ~vmask)

    def weight_vector(self, weights=None):
        w = weights if weights is not None else self.weights
        if w is None:
            return [1] * self.m
        return [int(w.get(a.id, 0)) for a in self.arcs]

    def to_dict(self):
        d = {"vertices": list(self.vertices), "arcs": [list(a) for a in self.arcs]}
        if self.weights is not None:
            d["weights"] = dict(self.weights)
        return d


@dataclass(frozen=True)
class Dicut:
    shore: frozenset
    arcs: frozenset
    shore_mask: int = field(compare=False, repr=False)
    arc_mask: int = field(compare=False, repr=False)


def make_dicut(d: Digraph, shore_mask: int) -> Dicut:
    arcs = d.out_of(shore_mask)
    return Dicut(d.vertex_ids(shore_mask), d.arc_ids(arcs), shore_mask, arcs)


# -- sources, sinks, discrepancy ---------------------------------------------

def _source_mask(d: Digraph) -> int:
    return sum(1 << i for i in range(d.n) if not d.in_arcs[i])


def _sink_mask(d: Digraph) -> int:
    return sum(1 << i for i in range(d.n) if not d.out_arcs[i])


def sources(d: Digraph) -> frozenset:
    return d.vertex_ids(_source_mask(d))


def sinks(d: Digraph) -> frozenset:
    return d.vertex_ids(_sink_mask(d))


def is_bipartite(d: Digraph) -> bool:
    """Every vertex is a source or a sink."""
    return all(not (d.in_arcs[i] and d.out_arcs[i]) for i in range(d.n))


def disc_mask(d: Digraph, vmask: int) -> int:
    snk = _sink_mask(d)
    src = _source_mask(d)
    return (vmask & snk).bit_count() - (vmask & src).bit_count()


def disc(d: Digraph, u: Iterable[str]) -> int:
    """|sinks(U)| - |sources(U)| for a bipartite digraph."""
    if not is_bipartite(d):
        raise PreconditionError("disc is only defined for bipartite digraphs")
    return disc_mask(d, d.vmask(u))


# -- connectivity --------------------------------------------------------------

def _reach(n, adj, start):
    seen = 1 << start
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen >> w & 1:
                seen |= 1 << w
                queue.append(w)
    return seen


def _strongly_connected(n, pairs) -> bool:
    if n <= 1:
        return True
    fwd = [[] for _ in range(n)]
    bwd = [[] for _ in range(n)]
    for t, h in pairs:
        fwd[t].append(h)
        bwd[h].append(t)
    full = (1 << n) - 1
    return _reach(n, fwd, 0) == full and _reach(n, bwd, 0) == full


def is_strongly_connected(d: Digraph) -> bool:
    return _strongly_connected(d.n, zip(d.tails, d.heads))


def is_2ec_underlying(d: Digraph) -> bool:
    """Underlying multigraph is connected and bridgeless."""
    n = d.n
    edges = list(zip(d.tails, d.heads))

    def connected(skip):
        adj = [[] for _ in range(n)]
        for i, (t, h) in enumerate(edges):
            if i != skip:
                adj[t].append(h)
                adj[h].append(t)
        return _reach(n, adj, 0) == (1 << n) - 1

    if not connected(-1):
        return False
    if n == 1:
        return True
    return all(connected(i) for i in range(len(edges)))


def is_connected_underlying(d: Digraph) -> bool:
    adj = [[] for _ in range(d.n)]
    for t, h in zip(d.tails, d.heads):
        adj[t].append(h)
        adj[h].append(t)
    return _reach(d.n, adj, 0) == d.full_vmask


# -- dicuts --------------------------------------------------------------------

def _closure_masks(d: Digraph):
    """Ancestor and descendant masks (each including the vertex itself)."""
    n = d.n
    succ = [[] for _ in range(n)]
    pred = [[] for _ in range(n)]
    for t, h in zip(d.tails, d.heads):
        succ[t].append(h)
        pred[h].append(t)
    desc = [_reach(n, succ, v) for v in range(n)]
    anc = [_reach(n, pred, v) for v in range(n)]
    return anc, desc


def dicut_shore_masks(d: Digraph, max_vertices: int = DEFAULT_MAX_VERTICES):
    """All shores U (as vertex masks, ascending) with no entering arc, U != {}, V."""
    if d.n > max_vertices:
        raise PreconditionError(
            f"dicut enumeration capped at {max_vertices} vertices (got {d.n})")
    anc, desc = _closure_masks(d)
    n = d.n
    out = []
    # A shore is a predecessor-closed set; branch on vertices in order.
    stack = [(0, 0, 0)]
    while stack:
        i, inc, exc = stack.pop()
        if i == n:
            out.append(inc)
            continue
        bit = 1 << i
        if inc & bit or exc & bit:
            stack.append((i + 1, inc, exc))
            continue
        new_exc = exc | desc[i]
        if not new_exc & inc:
            stack.append((i + 1, inc, new_exc))
        new_inc = inc | anc[i]
        if not new_inc & exc:
            stack.append((i + 1, new_inc, exc))
    full = d.full_vmask
    return sorted(u for u in out if u and u != full)


def enumerate_dicuts(d: Digraph, max_vertices: int = DEFAULT_MAX_VERTICES):
    return [make_dicut(d, u) for u in dicut_shore_masks(d, max_vertices)]


def min_dicut(d: Digraph, weights=None, max_vertices: int = DEFAULT_MAX_VERTICES):
    """Minimum total weight of a dicut and the first (by shore mask) witness."""
    w = d.weight_vector(weights)
    best = None
    for u in dicut_shore_masks(d, max_vertices):
        arcs = d.out_of(u)
        val = sum(w[i] for i in range(d.m) if arcs >> i & 1)
        if best is None or val < best[0]:
            best = (val, u)
    if best is None:
        raise PreconditionError("digraph has no dicut (it is strongly connected)")
    return best[0], make_dicut(d, best[1])


def reverse(d: Digraph, j: Iterable[str]) -> Digraph:
    mask = d.amask(j)
    arcs = tuple(Arc(a.id, a.head, a.tail) if mask >> i & 1 else a
                 for i, a in enumerate(d.arcs))
    return Digraph(d.vertices, arcs, d.weights)


def is_strengthening_mask(d: Digraph, mask: int) -> bool:
    pairs = [(h, t) if mask >> i & 1 else (t, h)
             for i, (t, h) in enumerate(zip(d.tails, d.heads))]
    return _strongly_connected(d.n, pairs)


def is_strengthening_set(d: Digraph, j: Iterable[str]) -> bool:
    """Reversing the arcs of ``j`` makes the digraph strongly connected."""
    return is_strengthening_mask(d, d.amask(j))


def is_dijoin_mask(d: Digraph, mask: int) -> bool:
    # J meets every dicut iff contracting J (here: making J two-way) gives a
    # strongly connected digraph.
    pairs = list(zip(d.tails, d.heads))
    pairs += [(h, t) for i, (t, h) in enumerate(zip(d.tails, d.heads)) if mask >> i & 1]
    return _strongly_connected(d.n, pairs)


def is_dijoin(d: Digraph, j: Iterable[str]) -> bool:
    return is_dijoin_mask(d, d.amask(j))
