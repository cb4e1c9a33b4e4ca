"""Digrafts, dicut contraction, and composition of points and bases."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .digraph import (
    DEFAULT_MAX_VERTICES,
    Arc,
    Digraph,
    dicut_shore_masks,
    is_2ec_underlying,
    is_bipartite,
)
from .errors import InvalidInput, InvariantError, PreconditionError
from .faces import (
    DEFAULT_POINT_CAP,
    FacePoints,
    analyze,
    canonical_points,
    classify,
    enumerate_dij_face_points,
    equality_subset,
    family_masks,
    point_key,
)


@dataclass(frozen=True, eq=False)
class Digraft:
    digraph: Digraph
    family: tuple  # vertex masks, as given
    face: FacePoints
    max_vertices: int = DEFAULT_MAX_VERTICES

    @cached_property
    def dicut_shores(self):
        return dicut_shore_masks(self.digraph, self.max_vertices)

    @cached_property
    def analysis(self):
        return analyze(self.face, self.max_vertices)

    @cached_property
    def closure(self):
        return self.analysis.tight_shore_masks

    @cached_property
    def classification(self):
        return classify(self.face, self.analysis, self.max_vertices)

    def family_sets(self):
        return [self.digraph.vertex_ids(u) for u in self.family]

    def augmented(self) -> "Digraft":
        """Same face, with every tight dicut shore added to the family."""
        fam = tuple(sorted(set(self.family) | set(self.closure)))
        if fam == tuple(sorted(set(self.family))):
            return self
        aug = Digraft(self.digraph, fam, FacePoints(self.digraph, fam, self.face.kind,
                                                    self.face.points), self.max_vertices)
        # analysis only depends on the points
        aug.__dict__["analysis"] = self.analysis
        return aug

    def to_dict(self):
        out = self.digraph.to_dict()
        out["family"] = [sorted(s, key=self.digraph.vindex.get) for s in self.family_sets()]
        return out


def validate(d: Digraph, family, max_vertices: int = DEFAULT_MAX_VERTICES,
             cap: int = DEFAULT_POINT_CAP) -> Digraft:
    """Check the four digraft axioms and cache the face."""
    if not is_bipartite(d):
        raise InvalidInput("not a digraft: some vertex is neither a source nor a sink")
    if not is_2ec_underlying(d):
        raise InvalidInput("not a digraft: underlying graph is not 2-edge-connected")
    fm = family_masks(d, family)
    face = enumerate_dij_face_points(d, fm, validate=True, cap=cap)
    if not face.points:
        raise InvalidInput("axiom (d): the face F(D, F) is empty")
    return Digraft(d, fm, face, max_vertices)


# -- contraction -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ContractionPair:
    parent: Digraft
    shore: int
    child1: Digraft  # U shrunk to the source u1
    child2: Digraft  # V \ U shrunk to the sink u2
    u1: str
    u2: str
    cut: int  # parent arc mask of delta^+(U)

    @cached_property
    def arc_maps(self):
        """Child arc id -> parent arc id (ids are preserved by contraction)."""
        return ({a.id: a.id for a in self.child1.digraph.arcs},
                {a.id: a.id for a in self.child2.digraph.arcs})

    def cut_ids(self):
        return self.parent.digraph.arc_ids(self.cut)


def _fresh_name(base: str, taken) -> str:
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def _shrink(d: Digraph, shrink: int, source: bool):
    """Digraph with the vertex set ``shrink`` collapsed to one new vertex."""
    members = [v for i, v in enumerate(d.vertices) if shrink >> i & 1]
    new = _fresh_name(members[0], set(d.vertices))
    verts = []
    for i, v in enumerate(d.vertices):
        if shrink >> i & 1:
            if v == members[0]:
                verts.append(new)
        else:
            verts.append(v)
    arcs = []
    for a, t, h in zip(d.arcs, d.tails, d.heads):
        tin, hin = bool(shrink >> t & 1), bool(shrink >> h & 1)
        if tin and hin:
            continue
        if tin:
            arcs.append(Arc(a.id, new, a.head))
        elif hin:
            arcs.append(Arc(a.id, a.tail, new))
        else:
            arcs.append(a)
    weights = None
    if d.weights is not None:
        keep = {a.id for a in arcs}
        weights = {k: v for k, v in d.weights.items() if k in keep}
    child = Digraph(tuple(verts), tuple(arcs), weights)
    return child, new


def _project_family(parent: Digraph, child: Digraph, shrink: int, new: str, fam):
    out = set()
    for w in fam:
        if not w & shrink:
            ids = parent.vertex_ids(w)
        elif w & shrink == shrink:
            ids = (parent.vertex_ids(w & ~shrink)) | {new}
        else:
            continue
        out.add(child.vmask(ids))
    return tuple(sorted(out))


def is_contractible(g: Digraft, shore: int) -> bool:
    d = g.digraph
    k = shore.bit_count()
    if not 1 < k < d.n - 1 or d.into(shore) or shore == 0:
        return False
    return bool(equality_subset(g.face, shore))


def contract(g: Digraft, shore) -> ContractionPair:
    """The two (U, V\\U)-contractions of a contractible dicut."""
    d = g.digraph
    u = shore if isinstance(shore, int) else d.vmask(shore)
    if not is_contractible(g, u):
        raise PreconditionError(f"{sorted(d.vertex_ids(u))} is not a contractible dicut shore")
    sub = equality_subset(g.face, u)
    closed = tuple(w for w in g.dicut_shores
                   if all((p & d.out_of(w)).bit_count() == 1 for p in sub))
    children = []
    names = []
    for shrink, source in ((u, True), (d.full_vmask & ~u, False)):
        child, new = _shrink(d, shrink, source)
        fam = _project_family(d, child, shrink, new, closed)
        try:
            children.append(validate(child, fam, g.max_vertices))
        except InvalidInput as exc:
            raise InvariantError(f"contraction produced an invalid digraft: {exc}") from exc
        names.append(new)
    return ContractionPair(g, u, children[0], children[1], names[0], names[1], d.out_of(u))


def _translate(src: Digraph, dst: Digraph, mask: int) -> int:
    return dst.amask(a for a in src.arc_ids(mask) if a in dst.aindex)


def decompose_point(pair: ContractionPair, point: int):
    """Split a parent face point with one crossing arc into the two child points."""
    d = pair.parent.digraph
    if (point & pair.cut).bit_count() != 1 or point not in set(pair.parent.face.points):
        raise PreconditionError("point is not a face point meeting the dicut exactly once")
    return (_translate(d, pair.child1.digraph, point),
            _translate(d, pair.child2.digraph, point))


def compose_points(pair: ContractionPair, j1: int, j2: int) -> int:
    d = pair.parent.digraph
    d1, d2 = pair.child1.digraph, pair.child2.digraph
    c1 = d1.arc_ids(j1) & pair.cut_ids()
    c2 = d2.arc_ids(j2) & pair.cut_ids()
    if c1 != c2 or len(c1) != 1:
        raise PreconditionError("child points disagree on the crossing arc")
    return d.amask(d1.arc_ids(j1) | d2.arc_ids(j2))


def odot(pair: ContractionPair, w1, w2):
    """Merge vectors on the child arc sets (agreeing on the dicut) into one on A."""
    d = pair.parent.digraph
    d1, d2 = pair.child1.digraph, pair.child2.digraph
    v1 = dict(zip((a.id for a in d1.arcs), w1))
    v2 = dict(zip((a.id for a in d2.arcs), w2))
    for a in pair.cut_ids():
        if v1[a] != v2[a]:
            raise PreconditionError(f"vectors disagree on shared arc {a!r}")
    return [v1[a.id] if a.id in v1 else v2[a.id] for a in d.arcs]


def compose_bases(pair: ContractionPair, b1, b2):
    """The family B1 ⊙ B2 built arc by arc over the dicut.

    For each crossing arc ``a`` with I_a (resp. J_a) the members of B1 (resp.
    B2) using ``a``: pair the first of I_a with every member of J_a, then the
    rest of I_a with the first of J_a.
    """
    d = pair.parent.digraph
    d1, d2 = pair.child1.digraph, pair.child2.digraph
    out = []
    for a in [x.id for i, x in enumerate(d.arcs) if pair.cut >> i & 1]:
        i_a = [x for x in b1 if x >> d1.aindex[a] & 1]
        j_a = [y for y in b2 if y >> d2.aindex[a] & 1]
        if not i_a or not j_a:
            raise InvariantError(f"no basis point of a child uses crossing arc {a!r}")
        for y in j_a:
            out.append(compose_points(pair, i_a[0], y))
        for x in i_a[1:]:
            out.append(compose_points(pair, x, j_a[0]))
    return out


def order_shores(shores, by_size: bool):
    if by_size:
        return sorted(shores, key=lambda u: (u.bit_count(), point_key(u)))
    return sorted(shores, key=point_key)


__all__ = [
    "Digraft",
    "ContractionPair",
    "validate",
    "contract",
    "is_contractible",
    "decompose_point",
    "compose_points",
    "odot",
    "compose_bases",
    "canonical_points",
]
