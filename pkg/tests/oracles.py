"""Independent brute-force oracles used to cross-check the library.

Nothing here imports the bitmask machinery of the package: digraphs are plain
lists of (id, tail, head) and arc sets are Python sets, so an agreement between
these and the library is a genuine second opinion.
"""

import functools
import itertools

import networkx as nx
import sympy


def shores(vertices, arcs):
    """All nonempty proper U with no arc entering U, as frozensets."""
    out = []
    vs = list(vertices)
    for r in range(1, len(vs)):
        for u in itertools.combinations(vs, r):
            us = set(u)
            if not any(h in us and t not in us for _, t, h in arcs):
                out.append(frozenset(us))
    return out


def leaving(arcs, u):
    return {a for a, t, h in arcs if t in u and h not in u}


def entering(arcs, u):
    return {a for a, t, h in arcs if h in u and t not in u}


def strongly_connected(vertices, arcs, reverse=()):
    g = nx.MultiDiGraph()
    g.add_nodes_from(vertices)
    for a, t, h in arcs:
        g.add_edge(*((h, t) if a in reverse else (t, h)))
    return nx.is_strongly_connected(g)


def two_edge_connected(vertices, arcs):
    g = nx.MultiGraph()
    g.add_nodes_from(vertices)
    for a, t, h in arcs:
        g.add_edge(t, h, key=a)
    if not nx.is_connected(g):
        return False
    # a multi-edge bridge must be a single edge whose removal disconnects
    for a, t, h in arcs:
        g.remove_edge(t, h, key=a)
        ok = nx.is_connected(g)
        g.add_edge(t, h, key=a)
        if not ok:
            return False
    return True


def is_dijoin(vertices, arcs, j):
    return all(leaving(arcs, u) & set(j) for u in shores(vertices, arcs))


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


def dij_face(vertices, arcs, family):
    """Brute force over all arc subsets of the dij-face points."""
    sh = shores(vertices, arcs)
    ids = [a for a, _, _ in arcs]
    out = []
    for j in subsets(ids):
        if all(len(leaving(arcs, u) & j) >= 1 for u in sh) and \
                all(len(leaving(arcs, set(f)) & j) == 1 for f in family):
            out.append(j)
    return out


def scr_face(vertices, arcs, family):
    """Brute force of the strengthening sets with the CUT equalities on family."""
    ids = [a for a, _, _ in arcs]
    out = []
    for j in subsets(ids):
        if not strongly_connected(vertices, arcs, reverse=j):
            continue
        ok = True
        for f in family:
            f = set(f)
            lv, en = leaving(arcs, f), entering(arcs, f)
            if len(lv & j) - len(en & j) != 1 - len(en):
                ok = False
                break
        if ok:
            out.append(j)
    return out


def vec(j, ids):
    return [int(a in j) for a in ids]


def rank(rows):
    return sympy.Matrix(rows).rank() if rows else 0


def invariant_factors(rows):
    """Nonzero invariant factors by sympy's Smith normal form."""
    from sympy.matrices.normalforms import smith_normal_form
    m = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    return [abs(int(m[i, i])) for i in range(min(m.shape)) if m[i, i] != 0]


def lattice_index_in_saturation(rows):
    """[lin(rows) ∩ Z^n : lat(rows)] as the gcd of maximal minors of a row basis."""
    m = sympy.Matrix(rows)
    r = m.rank()
    if r == 0:
        return 1
    # product of invariant factors equals gcd of r x r minors
    return int(sympy.prod(invariant_factors(rows)[:r]))


def in_lattice(rows, v):
    """Integer combination test by sympy's exact solver over Q plus integrality."""
    m = sympy.Matrix(rows).T
    sol, params = m.gauss_jordan_solve(sympy.Matrix(v))
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    # the solution is unique when the rows are independent
    return all(x.is_integer for x in sol)


def integral_basis_ok(basis_rows, all_rows):
    """basis_rows is an integral basis of lin(all_rows) ∩ Z^n."""
    r = rank(all_rows)
    if len(basis_rows) != r or rank(basis_rows) != r:
        return False
    return lattice_index_in_saturation(basis_rows) == 1


def is_igsc(rows, bound=1, denominators=(1, 2, 3)):
    """Bounded check that integer points of cone(rows) are nonnegative integer combinations.

    Integer points of the cone are sampled as combinations with coefficients
    in {0, 1/q, ..., bound} for the given denominators q. Rows must be nonnegative.
    """
    n = len(rows[0])
    targets = set()
    for q in denominators:
        for coeffs in itertools.product(range(bound * q + 1), repeat=len(rows)):
            v = [sum(c * r[i] for c, r in zip(coeffs, rows)) for i in range(n)]
            if all(x % q == 0 for x in v):
                targets.add(tuple(x // q for x in v))

    @functools.lru_cache(maxsize=None)
    def decomposable(v):
        if not any(v):
            return True
        return any(decomposable(tuple(x - y for x, y in zip(v, r)))
                   for r in rows if any(r) and all(y <= x for x, y in zip(v, r)))

    return all(decomposable(t) for t in targets)
