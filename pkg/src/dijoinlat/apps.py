"""Applications: strengthening-set faces, dijoin partitions and packings, orientations."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from . import exactla
from .basis import (
    IntegralBasis,
    express_in_basis,
    integral_basis_oracle,
    integral_basis_recursive,
    verify_integral_basis,
)
from .digraft import Digraft, validate
from .digraph import (
    DEFAULT_MAX_VERTICES,
    Arc,
    Digraph,
    dicut_shore_masks,
    is_connected_underlying,
    is_dijoin_mask,
    min_dicut,
)
from .errors import InvalidInput, PreconditionError, TheoremViolation
from .faces import (
    FacePoints,
    canonical_points,
    enumerate_scr_face_points,
    family_masks,
    indicator,
    mask_bits,
)


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def digraft_basis(g: Digraft, method: str = "oracle") -> IntegralBasis:
    """Basis of the digraft face by the search oracle or by the contraction recursion.

    The subdivided digraphs built below have many dicuts, which makes the
    recursion slow, so the oracle is the default.
    """
    if method == "oracle":
        return integral_basis_oracle(g.face)
    if method == "recursive":
        return integral_basis_recursive(g)
    raise ValueError(f"unknown method {method!r}")


# -- strengthening sets as dijoins ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScrDijTransform:
    source: Digraph
    family: tuple  # vertex masks of the source digraph
    target: Digraft
    sinks: tuple  # t_a vertex id per source arc
    tail_arcs: tuple  # id of (r, t_a) per source arc; carries x_a
    head_arcs: tuple  # id of (s, t_a) per source arc; carries 1 - x_a
    scr_face: FacePoints

    def phi(self, shore: int) -> int:
        """U ↦ U ∪ {t_a : a has both ends in U}, as a target vertex mask."""
        return _phi(self.source, self.target.digraph, self.sinks, shore)

    def forward(self, point: int) -> int:
        dp = self.target.digraph
        out = []
        for i in range(self.source.m):
            out.append(self.tail_arcs[i] if point >> i & 1 else self.head_arcs[i])
        return dp.amask(out)

    def backward(self, point: int) -> int:
        dp = self.target.digraph
        return sum(1 << i for i, a in enumerate(self.tail_arcs) if point >> dp.aindex[a] & 1)


def _phi(d: Digraph, dp: Digraph, sinks, shore: int) -> int:
    ids = set(d.vertex_ids(shore))
    for a, t in zip(d.arcs, sinks):
        if a.tail in ids and a.head in ids:
            ids.add(t)
    return dp.vmask(ids)


def scr_to_dij(d: Digraph, family, max_vertices: int = DEFAULT_MAX_VERTICES) -> ScrDijTransform:
    """Subdivide every arc (r, s) by a sink t_a with arcs (r, t_a), (s, t_a)."""
    scr = enumerate_scr_face_points(d, family)
    if not scr.points:
        raise PreconditionError("the scr-face is empty")
    taken = set(d.vertices)
    sinks, tails, heads, arcs = [], [], [], []
    arc_ids = {a.id for a in d.arcs}
    for a in d.arcs:
        t = _fresh(f"t[{a.id}]", taken)
        r_id = _fresh(f"{a.id}:tail", arc_ids)
        s_id = _fresh(f"{a.id}:head", arc_ids)
        sinks.append(t)
        tails.append(r_id)
        heads.append(s_id)
        arcs += [Arc(r_id, a.tail, t), Arc(s_id, a.head, t)]
    dp = Digraph(tuple(d.vertices) + tuple(sinks), tuple(arcs))
    fam = [_phi(d, dp, sinks, u) for u in scr.family]
    fam += [dp.full_vmask & ~(1 << dp.vindex[t]) for t in sinks]
    g = validate(dp, list(dict.fromkeys(fam)), max_vertices=max_vertices)
    tr = ScrDijTransform(d, scr.family, g, tuple(sinks), tuple(tails), tuple(heads), scr)
    mapped = canonical_points(tr.forward(p) for p in scr.points)
    if mapped != g.face.points:
        raise TheoremViolation("scr-face and dij-face are not in bijection", dp.to_dict())
    return tr


def _rhs(d: Digraph, fm):
    return [1 - d.into(u).bit_count() for u in fm]


def family_gcd(d: Digraph, family) -> int:
    fm = family_masks(d, family)
    return reduce(math.gcd, (abs(r) for r in _rhs(d, fm)), 0)


def _pull_back(tr: ScrDijTransform, basis: IntegralBasis):
    return [tr.backward(p) for p in basis.points]


def scr_integral_basis(d: Digraph, family, method: str = "oracle",
                       max_vertices: int = DEFAULT_MAX_VERTICES) -> IntegralBasis:
    """Integral basis of lin(face) made of strengthening sets (needs gcd of rhs = 1)."""
    fm = family_masks(d, family)
    if not fm:
        raise PreconditionError("the family is empty")
    g = family_gcd(d, fm)
    if g != 1:
        raise PreconditionError(
            f"gcd of the right-hand sides 1-|δ-(U)| is {g}, not 1; use lattice_report instead")
    tr = scr_to_dij(d, fm, max_vertices)
    bprime = digraft_basis(tr.target, method)
    pts = _pull_back(tr, bprime)
    cert = verify_integral_basis(tr.scr_face, pts)
    if not cert.ok:
        raise TheoremViolation(f"pulled-back basis fails: {cert.reason}", d.to_dict())
    prov = {"case": "scr-pullback", "digraft_vertices": tr.target.digraph.n,
            "inner": bprime.provenance}
    return IntegralBasis(d, tuple(pts), prov)


@dataclass(frozen=True)
class LatticeReport:
    lattice_basis: tuple  # arc masks of face points
    g: int
    divisors: tuple  # elementary divisors of the lattice basis matrix
    index: int
    scaling_checked: int

    def to_dict(self, d: Digraph):
        return {"latticeBasis": [sorted(d.arc_ids(p), key=d.aindex.get) for p in self.lattice_basis],
                "g": self.g, "indexDivisors": list(self.divisors), "index": self.index,
                "scalingSamples": self.scaling_checked}


def lattice_report(d: Digraph, family, samples: int = 8, seed: int = 0,
                   method: str = "oracle", max_vertices: int = DEFAULT_MAX_VERTICES,
                   points: Optional[Sequence[int]] = None) -> LatticeReport:
    """A lattice basis of the face points and the scaling g with g·x in the lattice.

    ``points`` optionally restricts to a subset of the face points (for faces cut
    out further by x_a = 0); the basis is then searched directly among them.
    """
    fm = family_masks(d, family)
    rhs = _rhs(d, fm)
    if not any(rhs):
        raise PreconditionError("every right-hand side 1-|δ-(U)| is zero")
    g = reduce(math.gcd, (abs(r) for r in rhs), 0)
    if points is None:
        tr = scr_to_dij(d, fm, max_vertices)
        cand = _pull_back(tr, digraft_basis(tr.target, method))
        all_pts = list(tr.scr_face.points)
    else:
        all_pts = list(points)
        cand = all_pts
    vecs = lambda ps: [indicator(p, d.m) for p in ps]  # noqa: E731
    full = exactla.lattice_basis(vecs(all_pts))
    chosen = _select_lattice_basis(cand, full, d.m)
    divs = tuple(exactla.elementary_divisors(vecs(chosen))) if chosen else ()
    index = math.prod(divs)
    # g·x in lat(points) for integral x in lin(points)
    rng = random.Random(seed)
    sat = exactla.saturate(vecs(all_pts))
    checked = 0
    for _ in range(samples if sat else 0):
        x = [0] * d.m
        for row in sat:
            c = rng.randint(-3, 3)
            x = [a + c * b for a, b in zip(x, row)]
        coeffs = exactla.express(vecs(chosen), [g * v for v in x])
        if coeffs is None or not exactla.is_integral(coeffs):
            if points is None:
                raise TheoremViolation(f"g·x not in the lattice for x={x}", d.to_dict())
            break
        checked += 1
    return LatticeReport(tuple(chosen), g, divs, index, checked)


def _select_lattice_basis(cand, full_basis, m):
    """Independent subset of ``cand`` generating the same lattice as ``full_basis``."""
    vec = lambda p: indicator(p, m)  # noqa: E731
    chosen = []
    for p in cand:
        if exactla.rank([vec(q) for q in chosen + [p]]) == len(chosen) + 1:
            chosen.append(p)
    if exactla.sublattice_index([vec(q) for q in chosen], full_basis) == 1:
        return chosen
    # fall back to a search over subsets of the right size
    k = len(full_basis)
    for combo in itertools.combinations(cand, k):
        rows = [vec(q) for q in combo]
        if exactla.rank(rows) == k and exactla.sublattice_index(rows, full_basis) == 1:
            return list(combo)
    raise TheoremViolation("no lattice basis among the face points")


# -- unit-capacity dijoin partitions -----------------------------------------------

def min_dicut_shores(d: Digraph, max_vertices: int = DEFAULT_MAX_VERTICES):
    tau, _ = min_dicut(d, max_vertices=max_vertices)
    shores = [u for u in dicut_shore_masks(d, max_vertices) if d.out_of(u).bit_count() == tau]
    return tau, shores


@dataclass(frozen=True, eq=False)
class WoodallPartition:
    digraph: Digraph
    tau: int
    shores: tuple
    basis: IntegralBasis
    coefficients: tuple  # integer λ per basis point

    def terms(self):
        return list(zip(self.basis.points, self.coefficients))


def woodall_partition(d: Digraph, method: str = "oracle",
                      max_vertices: int = DEFAULT_MAX_VERTICES) -> WoodallPartition:
    """Integers λ over dijoins meeting every minimum dicut once, with Σ λ_J 1_J = 1."""
    if not is_connected_underlying(d):
        raise PreconditionError("the underlying graph is not connected")
    tau, shores = min_dicut_shores(d, max_vertices)
    if tau < 2:
        raise PreconditionError(f"minimum dicut size is {tau}; need at least 2")
    basis = scr_integral_basis(d, shores, method, max_vertices)
    lam = express_in_basis(basis, [1] * d.m)
    if sum(lam) != tau:
        raise TheoremViolation(f"coefficients sum to {sum(lam)}, not τ = {tau}", d.to_dict())
    return WoodallPartition(d, tau, tuple(shores), basis, tuple(lam))


# -- p-adic packings ------------------------------------------------------------------

def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def is_p_adic(x: Fraction, p: int) -> bool:
    den = Fraction(x).denominator
    while den % p == 0:
        den //= p
    return den == 1


def find_p_adic_point(eq_a, eq_b, p: int, z, ystar):
    """A nonnegative p-adic solution of eq_a·y = eq_b near the positive point ystar."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    z = [Fraction(v) for v in z]
    ystar = [Fraction(v) for v in ystar]
    if not exactla.is_integral(z):
        raise PreconditionError("the affine point z must be integral")
    if exactla.matvec(eq_a, z) != [Fraction(b) for b in eq_b]:
        raise PreconditionError("z does not satisfy the equations")
    if exactla.matvec(eq_a, ystar) != [Fraction(b) for b in eq_b]:
        raise PreconditionError("ystar does not satisfy the equations")
    if any(v <= 0 for v in ystar):
        raise PreconditionError("ystar must be strictly positive")
    n = len(z)
    kernel = exactla.integer_kernel(eq_a, cols=n)
    if not kernel:
        return z
    c = exactla.express(kernel, [a - b for a, b in zip(ystar, z)])
    if c is None:
        raise PreconditionError("ystar - z is not in the kernel")
    eps = min(ystar) / (1 + sum(max(abs(x) for x in v) for v in kernel))
    scale = 1
    while Fraction(1, scale) > eps:
        scale *= p
    cp = [Fraction(round(ci * scale), scale) for ci in c]
    y = list(z)
    for ci, v in zip(cp, kernel):
        y = [a + ci * b for a, b in zip(y, v)]
    if any(v < 0 for v in y):
        raise TheoremViolation("rounded point left the nonnegative orthant")
    return y


@dataclass(frozen=True, eq=False)
class PAdicPacking:
    digraph: Digraph
    prime: int
    entries: tuple  # (arc mask, Fraction) pairs with nonzero values
    value: Fraction

    def check(self) -> dict:
        d = self.digraph
        cong = [Fraction(0)] * d.m
        for j, y in self.entries:
            for a in mask_bits(j):
                cong[a] += y
        return {
            "value": sum((y for _, y in self.entries), Fraction(0)) == self.value,
            "nonnegative": all(y > 0 for _, y in self.entries),
            "p_adic": all(is_p_adic(y, self.prime) for _, y in self.entries),
            "congestion": all(c <= 1 for c in cong),
            "support": len(self.entries) <= 2 * d.m,
            "dijoins": all(is_dijoin_mask(d, j) for j, _ in self.entries),
        }


@dataclass(frozen=True)
class PackingPlan:
    """The prime-independent part of the packing pipeline (cached across primes)."""

    tau: int
    rows: tuple  # face points forming M3 (contain the basis rows M4)
    basis_rows: tuple
    z: tuple  # integral solution on rows
    ystar: tuple  # positive solution on rows


def packing_plan(d: Digraph, method: str = "oracle",
                 max_vertices: int = DEFAULT_MAX_VERTICES) -> PackingPlan:
    tau, _ = min_dicut(d, max_vertices=max_vertices)
    if tau == 1:
        return PackingPlan(1, (), (), (), ())
    part = woodall_partition(d, method, max_vertices)
    face = scr_to_dij(d, part.shores, max_vertices).scr_face
    pts = list(face.points)
    basis = list(part.basis.points)
    npts, nb = len(pts), len(basis)
    # variables: y (per face point), x0, x_b (per basis point)
    nv = npts + 1 + nb
    a_rows, b_rhs = [], []
    for arc in range(d.m):
        a_rows.append([p >> arc & 1 for p in pts] + [0] * (1 + nb))
        b_rhs.append(1)
    a_rows.append([1] * npts + [0] * (1 + nb))
    b_rhs.append(tau)
    for k, b in enumerate(basis):
        row = [0] * nv
        row[pts.index(b)] = 1
        row[npts] = -1
        row[npts + 1 + k] = -1
        a_rows.append(row)
        b_rhs.append(0)
    obj = [0] * npts + [1] + [0] * nb
    res = exactla.lp_solve(a_rows, b_rhs, obj, sense="max", row_senses=["="] * len(a_rows))
    if res.status != "optimal":
        raise TheoremViolation(f"packing LP is {res.status}", d.to_dict())
    if res.primal[npts] <= 0:
        raise TheoremViolation("no strictly positive fractional packing on the basis", d.to_dict())
    y = res.primal[:npts]
    keep = [i for i in range(npts) if y[i] != 0]
    if len(keep) > d.m + nb:
        raise TheoremViolation("basic solution has too large a support")
    lam = dict(zip(basis, part.coefficients))
    rows = tuple(pts[i] for i in keep)
    return PackingPlan(tau, rows, tuple(basis),
                       tuple(Fraction(lam.get(r, 0)) for r in rows),
                       tuple(y[i] for i in keep))


def _minimal_dijoin(d: Digraph) -> int:
    j = d.full_amask
    for a in range(d.m):
        if is_dijoin_mask(d, j & ~(1 << a)):
            j &= ~(1 << a)
    return j


def p_adic_packing(d: Digraph, p: int, plan: Optional[PackingPlan] = None,
                   method: str = "oracle",
                   max_vertices: int = DEFAULT_MAX_VERTICES) -> PAdicPacking:
    """A p-adic optimal fractional dijoin packing with at most 2|A| nonzero entries."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if not is_connected_underlying(d):
        raise PreconditionError("the underlying graph is not connected")
    plan = plan if plan is not None else packing_plan(d, method, max_vertices)
    if plan.tau == 1:
        return PAdicPacking(d, p, ((_minimal_dijoin(d), Fraction(1)),), Fraction(1))
    eq_a = [[r >> arc & 1 for r in plan.rows] for arc in range(d.m)]
    eq_a.append([1] * len(plan.rows))
    eq_b = [1] * d.m + [plan.tau]
    y = find_p_adic_point(eq_a, eq_b, p, plan.z, plan.ystar)
    entries = tuple((r, v) for r, v in zip(plan.rows, y) if v != 0)
    pk = PAdicPacking(d, p, entries, Fraction(plan.tau))
    bad = [k for k, ok in pk.check().items() if not ok]
    if bad:
        raise TheoremViolation(f"packing fails {bad}", d.to_dict())
    return pk


# -- hypergraph orientations -----------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: tuple  # tuples of vertex ids

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        edges = tuple(tuple(str(v) for v in e) for e in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        if len(set(verts)) != len(verts):
            raise InvalidInput("duplicate hypergraph vertices")
        vs = set(verts)
        for e in edges:
            if len(set(e)) != len(e) or not set(e) <= vs:
                raise InvalidInput(f"bad hyperedge {list(e)}")
            if len(e) < 2:
                raise InvalidInput("hyperedges need at least two vertices")
        if not edges:
            raise InvalidInput("the hypergraph has no hyperedges")
        if len({len(e) for e in edges}) != 1:
            raise InvalidInput("the hypergraph is not uniform")

    @property
    def tau(self) -> int:
        return len(self.edges[0])


def d_H(h: Hypergraph, x) -> int:
    xs = set(x)
    if not xs or xs >= set(h.vertices) or not xs <= set(h.vertices):
        raise PreconditionError("X must be a nonempty proper subset of V")
    total = 0
    for e in h.edges:
        inside = len(xs.intersection(e))
        if 0 < inside < len(e):
            total += inside
    return total


def _proper_subsets(vertices):
    n = len(vertices)
    for mask in range(1, (1 << n) - 1):
        yield [vertices[i] for i in range(n) if mask >> i & 1]


def is_sc_orientation(h: Hypergraph, heads) -> bool:
    """Every proper X has a hyperedge with head in X and a vertex outside X."""
    heads = list(heads)
    for x in _proper_subsets(h.vertices):
        xs = set(x)
        if not any(hd in xs and not set(e) <= xs for e, hd in zip(h.edges, heads)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class OrientationAssignment:
    hypergraph: Hypergraph
    digraft: Digraft
    orientations: tuple  # tuples of heads, one per hyperedge
    coefficients: tuple  # integer λ per orientation

    def check(self) -> dict:
        h = self.hypergraph
        sums_ok = True
        for k, e in enumerate(h.edges):
            for v in e:
                s = sum(l for o, l in zip(self.orientations, self.coefficients) if o[k] == v)
                sums_ok &= s == 1
        return {
            "edge_sums": sums_ok,
            "support": sum(1 for l in self.coefficients if l) <= (h.tau - 1) * len(h.edges) + 1,
            "strongly_connected": all(is_sc_orientation(h, o) for o in self.orientations),
        }


def hypergraph_digraph(h: Hypergraph) -> Digraph:
    taken = set(h.vertices)
    sinks = [_fresh(f"t[{k}]", taken) for k in range(len(h.edges))]
    arcs = [Arc(f"e{k}:{v}", v, t) for k, (e, t) in enumerate(zip(h.edges, sinks)) for v in e]
    return Digraph(h.vertices + tuple(sinks), tuple(arcs))


def hypergraph_orientation_assignment(h: Hypergraph, method: str = "oracle",
                                      max_vertices: int = DEFAULT_MAX_VERTICES
                                      ) -> OrientationAssignment:
    tau = h.tau
    if tau < 2:
        raise PreconditionError("need τ >= 2")
    for x in _proper_subsets(h.vertices):
        if d_H(h, x) < tau:
            raise PreconditionError(f"d_H(X) < τ for X = {sorted(x)}")
    d = hypergraph_digraph(h)
    fam = [d.full_vmask & ~(1 << v) for v in range(d.n) if not d.out_arcs[v]]
    g = validate(d, fam, max_vertices=max(max_vertices, d.n))
    basis = digraft_basis(g, method)
    alpha = express_in_basis(basis, [1] * d.m)
    orients = []
    for b in basis.points:
        heads = []
        for k in range(len(h.edges)):
            t = d.n - len(h.edges) + k
            (a,) = mask_bits(b & d.in_arcs[t])
            heads.append(d.arcs[a].tail)
        orients.append(tuple(heads))
    out = OrientationAssignment(h, g, tuple(orients), tuple(alpha))
    bad = [k for k, ok in out.check().items() if not ok]
    if bad:
        raise TheoremViolation(f"orientation assignment fails {bad}",
                               {"vertices": list(h.vertices), "edges": [list(e) for e in h.edges]})
    return out


# -- the capacitated counterexample -------------------------------------------------------

@dataclass(frozen=True)
class CapacitatedReport:
    min_capacity: int
    min_shores_are_terminals: bool
    restricted_points: tuple
    ones_in_span: bool
    ones_in_lattice: bool
    lattice_index: int
    partition_into_two: Optional[tuple]
    extra: dict = field(default_factory=dict)


def capacitated_report(d: Digraph, capacity_arcs,
                       max_vertices: int = DEFAULT_MAX_VERTICES) -> CapacitatedReport:
    """Checks on a 0,1-capacitated digraph whose terminals carry the minimum dicuts.

    The face is the strengthening-set face cut out by the terminal (source and
    sink) equalities, restricted to sets inside the capacity-one arcs C.
    """
    c = d.amask(capacity_arcs)
    shores = dicut_shore_masks(d, max_vertices)
    caps = {u: (d.out_of(u) & c).bit_count() for u in shores}
    mincap = min(caps.values())
    terminal = []
    for v in range(d.n):
        if not d.in_arcs[v]:
            terminal.append(1 << v)
        elif not d.out_arcs[v]:
            terminal.append(d.full_vmask & ~(1 << v))
    minimal = {u for u, k in caps.items() if k == mincap}
    face = enumerate_scr_face_points(d, terminal)
    pts = tuple(p for p in face.points if p & ~c == 0)
    rows = [indicator(p, d.m) for p in pts]
    ones = indicator(c, d.m)
    coeffs = exactla.express(rows, ones)
    in_span = coeffs is not None
    # lattice membership does not depend on the choice of rational expression
    basis = exactla.lattice_basis(rows)
    lat_coeffs = exactla.express(basis, ones) if basis else None
    in_lattice = lat_coeffs is not None and exactla.is_integral(lat_coeffs)
    index = exactla.lattice_index(rows)
    bits = mask_bits(c)
    partition = None
    for sub in range(1 << len(bits)):
        j = sum(1 << bits[i] for i in range(len(bits)) if sub >> i & 1)
        if is_dijoin_mask(d, j) and is_dijoin_mask(d, c & ~j):
            partition = (j, c & ~j)
            break
    return CapacitatedReport(mincap, minimal == set(terminal), pts, in_span, in_lattice,
                             index, partition, {"coefficients": coeffs})
