"""Exact rational and integer linear algebra.

Matrices are plain row-major lists of lists holding ``int`` or
``fractions.Fraction`` entries. Everything here is exact; there is no
floating point anywhere. Sizes are desk-scale (a few dozen columns), so dense
representations are used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

try:  # fast exact rationals for the simplex tableau
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

Rat = Fraction

INFINITE = math.inf


# -- small helpers ----------------------------------------------------------

def shape(m):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return rows, cols


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m, cols=None):
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b, cols=len(b[0]) if b else 0)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vecmat(v, a):
    """Row vector times matrix."""
    cols = len(a[0]) if a else 0
    out = [0] * cols
    for coef, row in zip(v, a):
        if coef:
            for j, x in enumerate(row):
                if x:
                    out[j] += coef * x
    return out


def xgcd(a: int, b: int):
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def to_fraction_matrix(m):
    return [[Fraction(x) for x in row] for row in m]


def integer_rows(m):
    """Scale every rational row by the lcm of its denominators."""
    out = []
    for row in m:
        row = [Fraction(x) for x in row]
        den = reduce(math.lcm, (x.denominator for x in row), 1)
        out.append([int(x * den) for x in row])
    return out


def is_integral(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


# -- rank, determinant, solving ----------------------------------------------

def _bareiss_rank(m):
    a = [list(row) for row in m]
    rows, cols = shape(a)
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        piv = next((i for i in range(rank, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, rows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, cols):
                ai[j] = (p * ai[j] - f * a[rank][j]) // prev
            ai[c] = 0
        prev = p
        rank += 1
    return rank


def rank(m) -> int:
    """Rank over the rationals, by fraction-free (Bareiss) elimination."""
    if not m or not m[0]:
        return 0
    return _bareiss_rank(integer_rows(m))


def det(m):
    """Exact determinant of a square matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = to_fraction_matrix(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        p = a[c][c]
        d *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return d.numerator if d.denominator == 1 else d


def rref(m):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    a = to_fraction_matrix(m)
    rows, cols = shape(a)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def solve_linear(a, b) -> Optional[list]:
    """Some rational ``x`` with ``a @ x == b`` (free variables set to 0), or None."""
    rows, cols = shape(a)
    if rows != len(b):
        raise ValueError("row count of a does not match length of b")
    if rows == 0:
        return [Fraction(0)] * cols
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def nullspace(a, cols=None):
    """Rational basis (as rows) of ``{x : a @ x == 0}``."""
    rows, ncols = shape(a)
    if cols is None:
        cols = ncols
    if rows == 0:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    red, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def express(rows, v) -> Optional[list]:
    """Coefficients ``c`` with ``sum(c[i] * rows[i]) == v`` or None."""
    if not rows:
        return [] if all(x == 0 for x in v) else None
    return solve_linear(transpose(rows), list(v))


# -- Hermite and Smith normal forms ----------------------------------------

def hnf(m):
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h == u @ m``. ``h`` is in
    echelon form, pivots are positive, entries above a pivot are reduced into
    ``[0, pivot)``, and zero rows sit at the bottom.
    """
    h = [[int(x) for x in row] for row in m]
    rows, cols = shape(h)
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [s * x + t * y for x, y in zip(hr, hi)]
            h[i] = [-bg * x + ag * y for x, y in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [s * x + t * y for x, y in zip(ur, ui)]
            u[i] = [-bg * x + ag * y for x, y in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u


def lattice_basis(m):
    """Nonzero rows of the HNF: a canonical basis of the row lattice of ``m``."""
    h, _ = hnf(m)
    return [row for row in h if any(row)]


@dataclass(frozen=True)
class SnfResult:
    diag: tuple
    left: list
    right: list

    @property
    def nonzero(self):
        return tuple(d for d in self.diag if d)


def snf(m) -> SnfResult:
    """Smith normal form with transforms: ``left @ m @ right`` is diagonal."""
    a = [[int(x) for x in row] for row in m]
    rows, cols = shape(a)
    if cols == 0:
        cols = 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, rows)
                        if any(a[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    diag = tuple(a[i][i] for i in range(min(rows, cols)))
    return SnfResult(diag=diag, left=u, right=v)


def elementary_divisors(m):
    return snf(m).nonzero


# -- lattices ----------------------------------------------------------------

def saturate(span):
    """Integral basis of ``lin(rows of span) ∩ Z^n``, in Hermite normal form.

    With ``S`` an integral basis of the row lattice, column operations give
    ``S @ W == [L 0]``; the rows of ``L^{-1} S`` are then integral, span the
    same space, and extend to a unimodular matrix, so they are saturated.
    """
    if not span:
        return []
    s = lattice_basis(integer_rows(span))
    if not s:
        return []
    k = len(s)
    ht, _ = hnf(transpose(s))
    lower = transpose(ht[:k])  # k x k, lower triangular, S @ W == [lower 0]
    sat = []
    for row in _solve_lower(lower, s):
        if not is_integral(row):
            raise ArithmeticError("saturation produced a non-integral row")
        sat.append([int(x) for x in row])
    return lattice_basis(sat)


def _solve_lower(lower, rhs_rows):
    """Rows of ``lower^{-1} @ rhs`` for lower triangular ``lower``."""
    k = len(lower)
    out = []
    for i in range(k):
        row = [Fraction(x) for x in rhs_rows[i]]
        for j in range(i):
            if lower[i][j]:
                row = [x - lower[i][j] * y for x, y in zip(row, out[j])]
        out.append([x / lower[i][i] for x in row])
    return out


def lattice_index(rows):
    """Index of ``lat(rows)`` in ``lin(rows) ∩ Z^n`` (gcd of maximal minors)."""
    s = lattice_basis(integer_rows(rows)) if rows else []
    if not s:
        return 1
    return math.prod(elementary_divisors(s))


def sublattice_index(gen, ambient):
    """Index of ``lat(gen)`` inside ``lat(ambient)``; ``math.inf`` if ranks differ."""
    basis = lattice_basis(ambient)
    coeffs = []
    for g in gen:
        c = express(basis, g)
        if c is None:
            raise ValueError(f"generator {list(g)} is outside the span of the ambient lattice")
        if not is_integral(c):
            raise ValueError(f"generator {list(g)} is not in the ambient lattice")
        coeffs.append([int(x) for x in c])
    if rank(gen) < len(basis):
        return INFINITE
    if not basis:
        return 1
    return math.prod(elementary_divisors(coeffs))


def integer_kernel(a, cols=None):
    """Integral lattice basis of ``{x in Z^n : a @ x == 0}``."""
    return saturate(nullspace(a, cols=cols))


# -- linear programming -------------------------------------------------------

@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    primal: tuple = ()
    dual: tuple = ()
    objective: Optional[Fraction] = None


def lp_solve(a, b, c, sense: str = "max", row_senses: Optional[Sequence[str]] = None,
             var_bounds=None) -> LpResult:
    """Exact two-phase revised simplex (Dantzig pricing, Bland's rule on stalls).

    Optimizes ``c @ x`` subject to ``a[i] @ x  (row_senses[i])  b[i]`` where
    each row sense is ``"<="``, ``">="`` or ``"="`` (default ``"<="``).
    ``var_bounds`` is a list of ``(lo, hi)`` with ``lo`` in ``{0, None}``
    (None means free) and ``hi`` a rational or None; default ``(0, None)``.

    The returned dual has one entry per constraint row followed by one entry
    per finite upper bound, in the usual sign convention, so that at
    optimality ``b_full @ dual == objective`` exactly.
    """
    rows, ncols = len(a), len(c)
    row_senses = list(row_senses) if row_senses is not None else ["<="] * rows
    var_bounds = list(var_bounds) if var_bounds is not None else [(0, None)] * ncols
    if len(row_senses) != rows or len(b) != rows or len(var_bounds) != ncols:
        raise ValueError("inconsistent LP dimensions")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")

    # Expand free variables into a difference of two nonnegative columns.
    col_map = []  # per original variable: list of (internal column, sign)
    ncol_int = 0
    for lo, _hi in var_bounds:
        if lo is None:
            col_map.append([(ncol_int, 1), (ncol_int + 1, -1)])
            ncol_int += 2
        elif lo == 0:
            col_map.append([(ncol_int, 1)])
            ncol_int += 1
        else:
            raise ValueError("only lower bounds 0 or None are supported")

    def expand(row):
        out = [Fraction(0)] * ncol_int
        for j, x in enumerate(row):
            for k, s in col_map[j]:
                out[k] = s * Fraction(x)
        return out

    cons = [(expand(r), s, Fraction(bi)) for r, s, bi in zip(a, row_senses, b)]
    for j, (_lo, hi) in enumerate(var_bounds):
        if hi is not None:
            e = [0] * ncols
            e[j] = 1
            cons.append((expand(e), "<=", Fraction(hi)))

    obj = expand(c)
    if sense == "min":
        obj = [-x for x in obj]

    cons = [([_Q(x) for x in r], s, _Q(bi)) for r, s, bi in cons]
    res = _simplex_max(cons, [_Q(x) for x in obj], ncol_int)
    if res.status != "optimal":
        return res
    xint = [_to_fraction(v) for v in res.primal]
    y = tuple(_to_fraction(v) for v in res.dual)
    val = _to_fraction(res.objective)
    x = tuple(sum(s * xint[k] for k, s in col_map[j]) for j in range(ncols))
    if sense == "min":
        y = tuple(-v for v in y)
        val = -val
    return LpResult("optimal", x, y, val)


def _to_fraction(v):
    return v if isinstance(v, Fraction) else Fraction(int(v.numerator), int(v.denominator))


def _simplex_max(cons, obj, n):
    """max obj @ x over x >= 0 with the given (row, sense, rhs) constraints.

    Revised simplex: only B^{-1} is kept, and columns are stored sparsely,
    which suits the wide 0,1 constraint matrices used by the packing LP.
    Pricing is Dantzig's rule, switching to Bland's rule after a run of
    degenerate pivots so that termination is guaranteed.
    """
    zero, one = _Q(0), _Q(1)
    m = len(cons)
    slack_rows = [i for i, (_, s, _) in enumerate(cons) if s != "="]
    nslack = len(slack_rows)
    art0 = n + nslack
    total = art0 + m
    cols = [dict() for _ in range(total)]
    rhs, flip = [], []
    for i, (row, s, bi) in enumerate(cons):
        sign = -1 if bi < 0 else 1
        for j, x in enumerate(row):
            if x:
                cols[j][i] = x * sign
        rhs.append(bi * sign)
        flip.append(sign)
    for k, i in enumerate(slack_rows):
        cols[n + k][i] = _Q((1 if cons[i][1] == "<=" else -1) * flip[i])
    for i in range(m):
        cols[art0 + i][i] = one

    basis = [art0 + i for i in range(m)]
    binv = [[one if r == c else zero for c in range(m)] for r in range(m)]
    xb = list(rhs)

    def column(j):
        d = [zero] * m
        for r, a in cols[j].items():
            for i in range(m):
                bir = binv[i][r]
                if bir:
                    d[i] += bir * a
        return d

    def pivot(r, d):
        p = d[r]
        br = [x / p for x in binv[r]]
        binv[r] = br
        xb[r] = xb[r] / p
        nz = [(k, x) for k, x in enumerate(br) if x]
        for i in range(m):
            f = d[i]
            if i != r and f:
                bi = binv[i]
                for k, x in nz:
                    bi[k] -= f * x
                xb[i] -= f * xb[r]

    def run(cost, allowed):
        degenerate = 0
        while True:
            cb = [(i, cost[bv]) for i, bv in enumerate(basis) if cost[bv]]
            y = [zero] * m
            for i, c in cb:
                for k, x in enumerate(binv[i]):
                    if x:
                        y[k] += c * x
            in_basis = set(basis)
            bland = degenerate > 2 * m
            entering, best = None, zero
            for j in allowed:
                if j in in_basis:
                    continue
                red = cost[j] - sum(y[r] * a for r, a in cols[j].items())
                if red > best:
                    entering, best = j, red
                    if bland:
                        break
            if entering is None:
                return "optimal"
            d = column(entering)
            row = None
            for i in range(m):
                if d[i] > 0:
                    key = (xb[i] / d[i], basis[i])
                    if row is None or key < row[0]:
                        row = (key, i)
            if row is None:
                return "unbounded"
            degenerate = degenerate + 1 if row[0][0] == 0 else 0
            pivot(row[1], d)
            basis[row[1]] = entering

    phase1 = [zero] * art0 + [-one] * m
    run(phase1, range(total))
    if any(xb[i] > 0 for i in range(m) if basis[i] >= art0):
        return LpResult("infeasible")
    # drive zero-valued artificials out of the basis where possible
    for r in range(m):
        if basis[r] >= art0:
            in_basis = set(basis)
            for j in range(art0):
                if j not in in_basis:
                    d = column(j)
                    if d[r]:
                        pivot(r, d)
                        basis[r] = j
                        break
    cost = list(obj) + [zero] * (nslack + m)
    if run(cost, range(art0)) == "unbounded":
        return LpResult("unbounded")
    x = [zero] * total
    for i, bv in enumerate(basis):
        x[bv] = xb[i]
    # duals y = c_B B^{-1}, mapped back through the row sign flips
    y = [zero] * m
    for i, bv in enumerate(basis):
        c = cost[bv]
        if c:
            for k in range(m):
                y[k] += c * binv[i][k]
    y = [v * flip[k] for k, v in enumerate(y)]
    val = sum((o * xi for o, xi in zip(obj, x[:n])), zero)
    return LpResult("optimal", tuple(x[:n]), tuple(y), val)
