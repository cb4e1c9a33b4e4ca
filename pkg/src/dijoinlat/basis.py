"""Integral bases of face point sets: search oracle, recursion, certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import exactla
from .digraft import (
    ContractionPair,
    Digraft,
    compose_bases,
    contract,
    order_shores,
)
from .digraph import Digraph, _sink_mask, _source_mask
from .errors import InvariantError, PreconditionError, TheoremViolation
from .faces import FacePoints, indicator, mask_bits
from .mconvex import jump_free

BASE = "base-case"
TIGHT = "tight-contraction"
FACET = "facet-contraction-with-jump"


@dataclass(frozen=True, eq=False)
class IntegralBasis:
    digraph: Digraph
    points: tuple  # arc masks, in construction order
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def vectors(self):
        return [indicator(p, self.digraph.m) for p in self.points]

    def arcsets(self):
        return [self.digraph.arc_ids(p) for p in self.points]


def _dump(fp: FacePoints):
    d = fp.digraph
    return {**d.to_dict(), "family": [sorted(s) for s in fp.family_sets()]}


# -- oracle --------------------------------------------------------------------

class _Primitive:
    """Incremental test that a growing set of integer rows stays primitive.

    Keeps a unimodular W (stored by columns) with rows @ W == [L 0], L lower
    triangular with unit diagonal. A new row r keeps the set primitive and
    independent iff the entries of r @ W past the first k columns have gcd 1.
    """

    def __init__(self, m, cols=None, k=0):
        self.m = m
        self.cols = cols if cols is not None else [[int(i == j) for i in range(m)]
                                                   for j in range(m)]
        self.k = k

    def extend(self, row):
        cols = [c[:] for c in self.cols]
        k = self.k
        t = [sum(r * c for r, c in zip(row, col)) for col in cols]
        if math.gcd(*t[k:]) != 1:
            return None
        idx = list(range(k, self.m))
        while True:
            nz = [j for j in idx if t[j]]
            p = min(nz, key=lambda j: abs(t[j]))
            if len(nz) == 1:
                break
            for j in nz:
                if j != p:
                    q = t[j] // t[p]
                    t[j] -= q * t[p]
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[p])]
        if t[p] < 0:
            cols[p] = [-a for a in cols[p]]
        cols[k], cols[p] = cols[p], cols[k]
        return _Primitive(self.m, cols, k + 1)


def integral_basis_oracle(fp: FacePoints) -> IntegralBasis:
    """Lexicographically first primitive, spanning subset of the face points."""
    if not fp.points:
        raise PreconditionError("the face is empty")
    m = fp.m
    pts = [p for p in fp.points if p]
    vecs = [indicator(p, m) for p in pts]
    target = exactla.rank(vecs)
    chosen = []

    def dfs(start, state):
        if len(chosen) == target:
            return True
        for i in range(start, len(pts) - (target - len(chosen)) + 1):
            nxt = state.extend(vecs[i])
            if nxt is None:
                continue
            chosen.append(pts[i])
            if dfs(i + 1, nxt):
                return True
            chosen.pop()
        return False

    if not dfs(0, _Primitive(m)):
        raise TheoremViolation("no integral basis among the face points", _dump(fp))
    return IntegralBasis(fp.digraph, tuple(chosen), {"case": BASE, "method": "oracle",
                                                      "size": len(chosen)})


# -- certification ---------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    ok: bool
    independent: bool
    size: int
    expected_size: int
    divisors: tuple
    index: object
    reason: str = ""

    def to_dict(self):
        return {"ok": self.ok, "independent": self.independent, "size": self.size,
                "expected_size": self.expected_size, "divisors": list(self.divisors),
                "index": self.index if self.index != math.inf else "inf",
                "reason": self.reason}


def _masks(fp_or_d, basis):
    if isinstance(basis, IntegralBasis):
        return list(basis.points)
    d = fp_or_d.digraph
    return [b if isinstance(b, int) else d.amask(b) for b in basis]


def verify_integral_basis(fp: FacePoints, basis) -> Certificate:
    """Independence, size, and index 1 of lat(B) inside lin(B) ∩ Z^A."""
    masks = _masks(fp, basis)
    pts = set(fp.points)
    if any(b not in pts for b in masks):
        raise PreconditionError("basis contains a vector that is not a face point")
    vecs = [indicator(b, fp.m) for b in masks]
    expected = exactla.rank([indicator(p, fp.m) for p in fp.points])
    independent = exactla.rank(vecs) == len(vecs) if vecs else True
    if not independent:
        return Certificate(False, False, len(vecs), expected, (), math.inf,
                           "(a) vectors are linearly dependent")
    if len(vecs) != expected:
        return Certificate(False, True, len(vecs), expected, (), math.inf,
                           f"(b) size {len(vecs)} differs from dim+1 = {expected}")
    sat = exactla.saturate(vecs)
    coeffs = [[int(x) for x in exactla.express(sat, v)] for v in vecs]
    divisors = exactla.elementary_divisors(coeffs) if coeffs else ()
    index = math.prod(divisors)
    if index != 1:
        return Certificate(False, True, len(vecs), expected, tuple(divisors), index,
                           f"(c) lattice index {index} > 1")
    return Certificate(True, True, len(vecs), expected, tuple(divisors), 1)


def express_in_basis(basis, v, digraph: Digraph = None):
    """Integer coefficients of v over the basis vectors."""
    if isinstance(basis, IntegralBasis):
        rows = basis.vectors()
    else:
        rows = [indicator(b, digraph.m) if isinstance(b, int) else list(b) for b in basis]
    coeffs = exactla.express(rows, list(v))
    if coeffs is None:
        raise PreconditionError("vector is outside the linear hull of the basis")
    if not exactla.is_integral(coeffs):
        raise TheoremViolation("non-integral coefficients: not an integral basis")
    return [int(c) for c in coeffs]


# -- recursion -----------------------------------------------------------------

def _check_affine_critical(g: Digraft, pair: ContractionPair):
    d = g.digraph
    for label, h in (("parent", g), ("child 1", pair.child1), ("child 2", pair.child2)):
        an = h.analysis
        if an.slack != 0:
            raise InvariantError(f"{label} has slack {an.slack}, expected 0")
        if not an.active_mask & _source_mask(h.digraph):
            raise InvariantError(f"{label} has no active source")
    active_src = g.analysis.active_mask & _source_mask(d)
    for child, side in ((pair.child1, d.full_vmask & ~pair.shore), (pair.child2, pair.shore)):
        for v in d.vertex_ids(active_src & side):
            if v not in child.analysis.active_nodes:
                raise InvariantError(f"active source {v!r} is tight after contraction")


def _value2_point(g: Digraft, shore: int) -> int:
    """A face point with exactly two arcs in δ+(U), built by a jump-free walk."""
    cut = g.digraph.out_of(shore)
    vals = [(p & cut).bit_count() for p in g.face.points]
    low = next((p for p, v in zip(g.face.points, vals) if v == 1), None)
    high = next((p for p, v in zip(g.face.points, vals) if v > 2), None)
    if low is not None and high is not None:
        return jump_free(g, low, high, shore, 2)
    # no point above 2: the walk has nothing to cross, take a value-2 point
    exact = next((p for p, v in zip(g.face.points, vals) if v == 2), None)
    if low is None or exact is None:
        raise InvariantError("facet-defining dicut has no point of value 2")
    return exact


def _recurse(g: Digraft, depth: int):
    g = g.augmented()
    d = g.digraph
    cl = g.classification
    if cl.basic and cl.robust:
        ib = integral_basis_oracle(g.face)
        return list(ib.points), {"case": BASE, "vertices": d.n, "arcs": d.m,
                                 "size": len(ib.points)}
    if not cl.basic:
        n = d.n
        shores = [u for u in g.closure if 1 < u.bit_count() < n - 1]
        u = order_shores(shores, by_size=True)[0]
    else:
        if not cl.offending_shores:
            raise InvariantError("classified non-robust but no offending dicut was found")
        u = order_shores(cl.offending_shores, by_size=False)[0]
    pair = contract(g, u)
    b1, p1 = _recurse(pair.child1, depth + 1)
    b2, p2 = _recurse(pair.child2, depth + 1)
    cut_size = pair.cut.bit_count()
    composed = compose_bases(pair, b1, b2)
    if len(composed) != len(b1) + len(b2) - cut_size:
        raise InvariantError("composed basis has the wrong size")
    target = g.analysis.dim + 1
    prov = {"shore": sorted(d.vertex_ids(u), key=d.vindex.get), "vertices": d.n,
            "arcs": d.m, "children": [p1, p2]}
    if not cl.basic:
        if len(composed) != target:
            raise InvariantError(f"tight contraction gave {len(composed)} vectors, need {target}")
        return composed, {"case": TIGHT, **prov, "size": len(composed)}
    _check_affine_critical(g, pair)
    if target != len(b1) + len(b2) - cut_size + 1:
        raise InvariantError("dimension count d = d1 + d2 - |δ+(U)| + 1 fails")
    b = _value2_point(g, u)
    pts = composed + [b]
    return pts, {"case": FACET, **prov, "size": len(pts),
                 "jump_point": sorted(d.arc_ids(b), key=d.aindex.get)}


def integral_basis_recursive(g: Digraft) -> IntegralBasis:
    """Integral basis built by contracting tight or facet-defining dicuts."""
    pts, prov = _recurse(g, 0)
    vecs = [indicator(p, g.digraph.m) for p in pts]
    if exactla.rank(vecs) != len(vecs):
        raise TheoremViolation("recursion produced dependent vectors", g.to_dict())
    return IntegralBasis(g.digraph, tuple(pts), prov)


def jump_coefficient_identity(g: Digraft, basis: IntegralBasis, v):
    """Check that the jump point's coefficient is v(δ+(U)) - v(δ(t)) for a sink t."""
    prov = basis.provenance
    if prov.get("case") != FACET:
        raise PreconditionError("basis was not built by a facet contraction")
    d = g.digraph
    u = d.vmask(prov["shore"])
    coeffs = express_in_basis(basis, v)
    t = mask_bits(_sink_mask(d))[0]
    cut = d.out_of(u)
    expect = sum(v[a] for a in mask_bits(cut)) - sum(v[a] for a in mask_bits(d.inc_arcs[t]))
    return coeffs[-1] == expect, coeffs[-1], expect


__all__ = [
    "IntegralBasis",
    "Certificate",
    "integral_basis_oracle",
    "integral_basis_recursive",
    "verify_integral_basis",
    "express_in_basis",
    "jump_coefficient_identity",
]
