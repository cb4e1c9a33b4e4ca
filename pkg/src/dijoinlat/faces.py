"""0,1 points of faces of dij(D) and scr(D), and queries answered on them.

Both polytopes are integral, so every polyhedral question asked here
(tightness, affine dimension, facets, closure) is answered exactly from the
finite list of 0,1 points of the face.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from . import exactla
from .digraph import (
    DEFAULT_MAX_VERTICES,
    Digraph,
    _sink_mask,
    _source_mask,
    dicut_shore_masks,
    is_2ec_underlying,
    is_bipartite,
    is_dijoin_mask,
    is_strengthening_mask,
)
from .errors import InvalidInput, PreconditionError

DEFAULT_POINT_CAP = 10**6
SCR_MAX_ARCS = 22

DIJ = "dij-face"
SCR = "scr-face"


def mask_bits(mask: int):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def point_key(mask: int):
    return tuple(mask_bits(mask))


def canonical_points(masks: Iterable[int]):
    return tuple(sorted(set(masks), key=point_key))


def indicator(mask: int, m: int):
    return [mask >> i & 1 for i in range(m)]


def affine_dim(masks, m: int) -> int:
    """Affine dimension of a set of 0,1 points (-1 for the empty set)."""
    if not masks:
        return -1
    return exactla.rank([indicator(p, m) + [1] for p in masks]) - 1


def family_masks(d: Digraph, family) -> tuple:
    out = []
    for u in family:
        mask = u if isinstance(u, int) else d.vmask(u)
        out.append(mask)
    return tuple(out)


def check_family(d: Digraph, fmasks, require_sinks: bool = True):
    """Digraft axioms (a)-(c); raises InvalidInput naming the violated axiom."""
    full = d.full_vmask
    for u in fmasks:
        if u == 0 or u == full:
            raise InvalidInput("axiom (a): the family contains the empty set or V")
        if d.into(u):
            raise InvalidInput(
                f"axiom (b): family member {sorted(d.vertex_ids(u))} has an entering arc")
    if require_sinks:
        fset = set(fmasks)
        for v in range(d.n):
            if not d.out_arcs[v] and full & ~(1 << v) not in fset:
                raise InvalidInput(
                    f"axiom (c): V minus sink {d.vertices[v]!r} is missing from the family")


@dataclass(frozen=True, eq=False)
class FacePoints:
    digraph: Digraph
    family: tuple  # vertex masks
    kind: str
    points: tuple  # arc masks, canonical order

    def __len__(self):
        return len(self.points)

    @property
    def m(self):
        return self.digraph.m

    def arcsets(self):
        return [self.digraph.arc_ids(p) for p in self.points]

    def family_sets(self):
        return [self.digraph.vertex_ids(u) for u in self.family]

    def vectors(self):
        return [indicator(p, self.m) for p in self.points]

    @cached_property
    def dim(self) -> int:
        return affine_dim(self.points, self.m)

    def value(self, point: int, arc_mask: int) -> int:
        return (point & arc_mask).bit_count()


def enumerate_dij_face_points(d: Digraph, family, validate: bool = True,
                              cap: int = DEFAULT_POINT_CAP) -> FacePoints:
    """0,1 points of F(D, family): one arc per sink, dijoin, value 1 on the family.

    Candidates are built sink by sink (each sink picks one entering arc) with
    pruning on the family equalities, then filtered by the dijoin test.
    """
    if not is_bipartite(d):
        raise InvalidInput("digraph is not bipartite (some vertex is neither source nor sink)")
    fm = family_masks(d, family)
    if validate:
        check_family(d, fm)
    sink_list = [v for v in range(d.n) if not d.out_arcs[v]]
    choices = [mask_bits(d.in_arcs[v]) for v in sink_list]
    total = 1
    for c in choices:
        total *= max(len(c), 1)
    if total > cap:
        raise PreconditionError(f"face enumeration would need {total} candidates (cap {cap})")
    cuts = [d.out_of(u) for u in fm]
    found = []

    def rec(k, point, counts):
        if k == len(sink_list):
            if all(c == 1 for c in counts) and is_dijoin_mask(d, point):
                found.append(point)
            return
        for a in choices[k]:
            bit = 1 << a
            new = [c + 1 if cut & bit else c for c, cut in zip(counts, cuts)]
            if any(c > 1 for c in new):
                continue
            rec(k + 1, point | bit, new)

    rec(0, 0, [0] * len(cuts))
    return FacePoints(d, fm, DIJ, canonical_points(found))


def enumerate_scr_face_points(d: Digraph, family, max_arcs: int = SCR_MAX_ARCS) -> FacePoints:
    """0,1 points of the scr(D) face cut out by the CUT equalities on ``family``.

    Each point is a strengthening set J with
    |J ∩ δ+(U)| - |J ∩ δ-(U)| = 1 - |δ-(U)| for every U in the family.
    """
    if not is_2ec_underlying(d):
        raise PreconditionError("underlying graph is not 2-edge-connected")
    if d.m > max_arcs:
        raise PreconditionError(f"scr-face enumeration capped at {max_arcs} arcs (got {d.m})")
    fm = family_masks(d, family)
    full = d.full_vmask
    for u in fm:
        if u == 0 or u == full:
            raise InvalidInput("the family contains the empty set or V")
    cons = []
    for u in fm:
        plus, minus = d.out_of(u), d.into(u)
        cons.append((plus, minus, 1 - minus.bit_count()))
    m = d.m
    found = []

    def rec(i, point, vals):
        if i == m:
            if all(v == rhs for v, (_, _, rhs) in zip(vals, cons)) and is_strengthening_mask(d, point):
                found.append(point)
            return
        rest = ~((1 << i) - 1) & d.full_amask
        # feasibility window for every equality given arcs i.. still free
        for v, (plus, minus, rhs) in zip(vals, cons):
            if not (v - (minus & rest).bit_count() <= rhs <= v + (plus & rest).bit_count()):
                return
        bit = 1 << i
        rec(i + 1, point, vals)
        rec(i + 1, point | bit,
            [v + (1 if plus & bit else 0) - (1 if minus & bit else 0)
             for v, (plus, minus, _) in zip(vals, cons)])

    rec(0, 0, [0] * len(cons))
    return FacePoints(d, fm, SCR, canonical_points(found))


# -- analysis -----------------------------------------------------------------

@dataclass(frozen=True)
class FaceAnalysis:
    tight_nodes: frozenset
    active_nodes: frozenset
    dim: int
    kappa_t: int
    slack: int
    tight_dicut_shores: tuple
    tight_mask: int = 0
    active_mask: int = 0
    tight_shore_masks: tuple = ()


def _require_dij(fp: FacePoints):
    if fp.kind != DIJ:
        raise PreconditionError("this query is defined for dij-faces of digrafts")
    if not fp.points:
        raise PreconditionError("the face is empty")


def tight_node_mask(fp: FacePoints) -> int:
    d = fp.digraph
    mask = 0
    for v in range(d.n):
        inc = d.inc_arcs[v]
        if all((p & inc).bit_count() == 1 for p in fp.points):
            mask |= 1 << v
    return mask


def tight_shore_masks(fp: FacePoints, max_vertices: int = DEFAULT_MAX_VERTICES):
    d = fp.digraph
    out = []
    for u in dicut_shore_masks(d, max_vertices):
        cut = d.out_of(u)
        if all((p & cut).bit_count() == 1 for p in fp.points):
            out.append(u)
    return tuple(out)


def analyze(fp: FacePoints, max_vertices: int = DEFAULT_MAX_VERTICES) -> FaceAnalysis:
    _require_dij(fp)
    d = fp.digraph
    tmask = tight_node_mask(fp)
    amask = d.full_vmask & ~tmask
    dim = fp.dim
    kappa = 1 if tmask == d.full_vmask else 0
    slack = d.m - tmask.bit_count() + kappa - dim
    shores = tight_shore_masks(fp, max_vertices)
    return FaceAnalysis(
        tight_nodes=d.vertex_ids(tmask),
        active_nodes=d.vertex_ids(amask),
        dim=dim,
        kappa_t=kappa,
        slack=slack,
        tight_dicut_shores=tuple(d.vertex_ids(u) for u in shores),
        tight_mask=tmask,
        active_mask=amask,
        tight_shore_masks=shores,
    )


def closure(d: Digraph, family, points: Optional[FacePoints] = None,
            max_vertices: int = DEFAULT_MAX_VERTICES):
    """All dicut shores tight on F(D, family), as vertex masks (ascending)."""
    fp = points if points is not None else enumerate_dij_face_points(d, family)
    _require_dij(fp)
    return tight_shore_masks(fp, max_vertices)


def closure_sets(d: Digraph, family, max_vertices: int = DEFAULT_MAX_VERTICES):
    return [d.vertex_ids(u) for u in closure(d, family, max_vertices=max_vertices)]


def _dicut_mask_checked(fp: FacePoints, shore) -> int:
    d = fp.digraph
    u = shore if isinstance(shore, int) else d.vmask(shore)
    if u == 0 or u == d.full_vmask or d.into(u):
        raise InvalidInput(f"{sorted(d.vertex_ids(u))} is not a dicut shore")
    return d.out_of(u)


def equality_subset(fp: FacePoints, shore) -> tuple:
    """Points meeting the dicut of ``shore`` exactly once."""
    cut = _dicut_mask_checked(fp, shore)
    return tuple(p for p in fp.points if (p & cut).bit_count() == 1)


def is_facet_defining(fp: FacePoints, shore) -> bool:
    _require_dij(fp)
    sub = equality_subset(fp, shore)
    return bool(sub) and affine_dim(sub, fp.m) == fp.dim - 1


def equivalent_inequalities(fp: FacePoints, shore_u, shore_w) -> bool:
    """Two dicut inequalities are equivalent iff they have the same tight points."""
    return set(equality_subset(fp, shore_u)) == set(equality_subset(fp, shore_w))


@dataclass(frozen=True)
class Classification:
    basic: bool
    robust: Optional[bool]
    # Facet-defining dicut shores not equivalent to a nonnegativity or an
    # active-source inequality (the witnesses of non-robustness).
    offending_shores: tuple = ()


def non_robust_shores(fp: FacePoints, analysis: FaceAnalysis,
                      max_vertices: int = DEFAULT_MAX_VERTICES):
    d = fp.digraph
    src = _source_mask(d)
    allowed = set()
    for v in range(d.n):
        if analysis.active_mask >> v & 1 and src >> v & 1:
            allowed.add(frozenset(equality_subset(fp, 1 << v)))
    for a in range(d.m):
        allowed.add(frozenset(p for p in fp.points if not p >> a & 1))
    out = []
    for u in dicut_shore_masks(d, max_vertices):
        sub = equality_subset(fp, u)
        if not sub or affine_dim(sub, fp.m) != fp.dim - 1:
            continue
        if frozenset(sub) not in allowed:
            out.append(u)
    return tuple(out)


def classify(fp: FacePoints, analysis: Optional[FaceAnalysis] = None,
             max_vertices: int = DEFAULT_MAX_VERTICES) -> Classification:
    """Basic: every tight dicut is trivial. Robust (basic only): no offending facet."""
    _require_dij(fp)
    an = analysis if analysis is not None else analyze(fp, max_vertices)
    n = fp.digraph.n
    basic = all(u.bit_count() in (1, n - 1) for u in an.tight_shore_masks)
    if not basic:
        return Classification(False, None)
    bad = non_robust_shores(fp, an, max_vertices)
    return Classification(True, not bad, bad)


def is_sink_mask(d: Digraph, v: int) -> bool:
    return bool(_sink_mask(d) >> v & 1)
