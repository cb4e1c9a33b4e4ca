"""Degree vectors of face points, the base polyhedron P(D, F), and lifting.

A face point J of a digraft maps to z with z_v = |J ∩ δ(v)| - 1. Integral
points of P(D, F) lift back to face points through a sink-assignment
(perfect b-matching with b = 1 + z), solved by augmenting paths.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .digraft import Digraft
from .digraph import _sink_mask, _source_mask, disc_mask
from .errors import InvariantError, PreconditionError
from .faces import mask_bits


def _as_vector(g: Digraft, z) -> tuple:
    d = g.digraph
    if isinstance(z, dict):
        return tuple(int(z.get(v, 0)) for v in d.vertices)
    z = tuple(int(x) for x in z)
    if len(z) != d.n:
        raise PreconditionError(f"degree vector has length {len(z)}, expected {d.n}")
    return z


def degree_vector(g: Digraft, point: int) -> tuple:
    d = g.digraph
    return tuple((point & d.inc_arcs[v]).bit_count() - 1 for v in range(d.n))


def point_to_z(g: Digraft, point) -> tuple:
    """z_v = x(δ(v)) - 1 for a face point (arc mask or iterable of arc ids)."""
    mask = point if isinstance(point, int) else g.digraph.amask(point)
    if mask not in set(g.face.points):
        raise PreconditionError("not a point of the face")
    return degree_vector(g, mask)


def _zsum(z, mask):
    return sum(z[i] for i in mask_bits(mask))


def z_membership(g: Digraft, z) -> bool:
    d = g.digraph
    z = _as_vector(g, z)
    snk = _sink_mask(d)
    if any(z[v] for v in mask_bits(snk)):
        return False
    if sum(z) != disc_mask(d, d.full_vmask):
        return False
    fam = set(g.family)
    for u in g.dicut_shores:
        val = _zsum(z, u) - disc_mask(d, u)
        if val < 1 or (u in fam and val != 1):
            return False
    return True


def dicut_value(g: Digraft, z, shore: int) -> int:
    """x(δ+(U)) recovered from the degree vector: z(U) - disc(U)."""
    return _zsum(_as_vector(g, z), shore) - disc_mask(g.digraph, shore)


# -- bounded sink assignment ------------------------------------------------------

def assign_sinks(d, lo, hi, allowed: Optional[int] = None, skip_sinks: int = 0):
    """Give every sink one entering arc so each source s gets lo[s]..hi[s] of them.

    Returns an arc mask or None. Lower bounds are saturated first; the second
    stage only augments, so no source count ever drops below its lower bound.
    """
    allowed = d.full_amask if allowed is None else allowed
    sink_list = [v for v in mask_bits(_sink_mask(d)) if not skip_sinks >> v & 1]
    adj = {t: [(a, d.tails[a]) for a in mask_bits(d.in_arcs[t] & allowed)] for t in sink_list}
    assigned = {}  # sink -> arc
    holders = {s: [] for s in range(d.n)}

    def augment(t, cap, seen):
        for a, s in adj[t]:
            if s in seen:
                continue
            seen.add(s)
            if len(holders[s]) < cap[s]:
                _take(t, a, s)
                return True
            for t2 in list(holders[s]):
                if augment(t2, cap, seen):
                    _take(t, a, s)
                    return True
        return False

    def _take(t, a, s):
        old = assigned.get(t)
        if old is not None:
            holders[d.tails[old]].remove(t)
        assigned[t] = a
        holders[s].append(t)

    for t in sink_list:
        augment(t, lo, set())
    if any(len(holders[s]) < lo[s] for s in mask_bits(_source_mask(d))):
        return None
    for t in sink_list:
        if t not in assigned and not augment(t, hi, set()):
            return None
    return sum(1 << a for a in assigned.values())


def lift_z(g: Digraft, z) -> int:
    """A face point with degree vector z (perfect b-matching, b = 1 + z)."""
    z = _as_vector(g, z)
    if not z_membership(g, z):
        raise PreconditionError("z is not an integral point of P(D, F)")
    d = g.digraph
    b = [1 + x for x in z]
    point = assign_sinks(d, b, b)
    if point is None:
        raise InvariantError("no perfect b-matching for a point of P(D, F)")
    return point


def lift_z_with_arc(g: Digraft, z, arc) -> int:
    """As lift_z, forcing ``arc`` into the point."""
    z = _as_vector(g, z)
    if not z_membership(g, z):
        raise PreconditionError("z is not an integral point of P(D, F)")
    d = g.digraph
    a = arc if isinstance(arc, int) else d.aindex[arc]
    s, t = d.tails[a], d.heads[a]
    b = [1 + x for x in z]
    b[s] -= 1
    if b[s] < 0:
        raise InvariantError("arc tail has no spare degree")
    rest = assign_sinks(d, b, b, skip_sinks=1 << t)
    if rest is None:
        raise InvariantError("no perfect b-matching through the requested arc")
    return rest | 1 << a


# -- exchange walk and jump-free points --------------------------------------------

def exchange_walk(g: Digraft, z, t) -> list:
    """Unit exchanges from z to t, each staying inside P(D, F)."""
    z, t = _as_vector(g, z), _as_vector(g, t)
    if not z_membership(g, z) or not z_membership(g, t):
        raise PreconditionError("walk endpoints must lie in P(D, F)")
    walk = [z]
    cur = list(z)
    while True:
        diff = [c - x for c, x in zip(cur, t)]
        plus = [v for v, x in enumerate(diff) if x > 0]
        if not plus:
            break
        u = plus[0]
        for v in (v for v, x in enumerate(diff) if x < 0):
            nxt = list(cur)
            nxt[u] -= 1
            nxt[v] += 1
            if z_membership(g, nxt):
                cur = nxt
                break
        else:
            raise InvariantError(f"no exchange pair for u={g.digraph.vertices[u]!r}")
        walk.append(tuple(cur))
    return walk


def jump_free(g: Digraft, jx, jy, shore, lam: int) -> int:
    """A face point with exactly ``lam`` arcs in δ+(U), between two given points."""
    d = g.digraph
    jx = jx if isinstance(jx, int) else d.amask(jx)
    jy = jy if isinstance(jy, int) else d.amask(jy)
    u = shore if isinstance(shore, int) else d.vmask(shore)
    if u == 0 or u == d.full_vmask or d.into(u):
        raise PreconditionError("U is not a dicut shore")
    cut = d.out_of(u)
    lx, ly = (jx & cut).bit_count(), (jy & cut).bit_count()
    if not lx < lam < ly:
        raise PreconditionError(f"need {lx} < λ < {ly}, got λ={lam}")
    for step in exchange_walk(g, point_to_z(g, jx), point_to_z(g, jy)):
        if dicut_value(g, step, u) == lam:
            point = lift_z(g, step)
            if (point & cut).bit_count() != lam:
                raise InvariantError("lifted point has the wrong dicut value")
            return point
    raise InvariantError("exchange walk skipped an intermediate dicut value")


# -- integer decomposition (balanced splitting) ------------------------------------

def split_sum(g: Digraft, y: Sequence[int], k: int):
    """Split an integer arc vector y in k·F into k face points.

    Each round extracts one point: one arc at every sink, between
    floor(y(δ(s))/k') and ceil(y(δ(s))/k') arcs at each source, all inside
    supp(y). If the greedy choice leaves an undecomposable remainder, the
    round falls back to the balanced face points in canonical order.
    """
    d = g.digraph
    y = [int(v) for v in y]
    face = set(g.face.points)

    def bounds(yv, kk):
        lo, hi = [0] * d.n, [0] * d.n
        for s in mask_bits(_source_mask(d)):
            deg = sum(yv[a] for a in mask_bits(d.out_arcs[s]))
            lo[s], hi[s] = deg // kk, -(-deg // kk)
        return lo, hi

    def balanced(p, lo, hi):
        return all(lo[s] <= (p & d.out_arcs[s]).bit_count() <= hi[s]
                   for s in mask_bits(_source_mask(d)))

    def rec(yv, kk):
        if kk == 0:
            return [] if not any(yv) else None
        supp = sum(1 << a for a, v in enumerate(yv) if v > 0)
        lo, hi = bounds(yv, kk)
        cand = assign_sinks(d, lo, hi, allowed=supp)
        tried = []
        if cand is not None and cand in face:
            tried.append(cand)
        tried += [p for p in g.face.points
                  if p & ~supp == 0 and p != cand and balanced(p, lo, hi)]
        for p in tried:
            rest = [v - (p >> a & 1) for a, v in enumerate(yv)]
            tail = rec(rest, kk - 1)
            if tail is not None:
                return [p] + tail
        return None

    if k < 1 or any(v < 0 for v in y):
        raise PreconditionError("need k >= 1 and a nonnegative vector")
    out = rec(y, k)
    if out is None:
        raise PreconditionError("vector is not a sum of k face points")
    return out
