"""Exact integer and rational linear algebra.

Matrices are plain lists of rows of Python ints (arbitrary precision).
Nothing in here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[int]]
Vector = tuple[int, ...]


class LatticeError(ValueError):
    """A vector or subgroup does not sit where the caller promised."""


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b)) if b else []
    if not bt:
        ncols = len(b[0]) if b else 0
        return [[0] * ncols for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Primitive lattice vector on the ray through ``v`` (``v`` nonzero)."""
    g = vec_gcd(v)
    if g == 0:
        raise LatticeError("zero vector has no primitive generator")
    return tuple(x // g for x in v)


def primitive_rational(v: Sequence) -> Vector:
    """Clear denominators of a rational vector, then make it primitive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h = u @ m``. ``h`` is in
    row echelon form, pivots are positive, entries above a pivot lie in
    ``[0, pivot)`` and zero rows sit at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(r) for r in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if h[i][c] != 0]
        if not nz:
            continue
        # fold every nonzero entry of column c into row r
        if h[r][c] == 0:
            i = nz[0]
            h[r], h[i] = h[i], h[r]
            u[r], u[i] = u[i], u[r]
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _ext_gcd(a, b)
            p, q = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [-q * s + p * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-q * s + p * t for s, t in zip(ur, ui)]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def snf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(s, left, right)`` with ``s = left @ m @ right``.

    ``s`` is diagonal with nonnegative entries ``d1 | d2 | ...``.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [list(r) for r in m]
    left = identity(rows)
    right = identity(cols)

    def row_op(i, j, a, b, c, d):
        # rows (i, j) <- [[a, b], [c, d]] @ rows (i, j)
        si, sj = s[i], s[j]
        s[i] = [a * x + b * y for x, y in zip(si, sj)]
        s[j] = [c * x + d * y for x, y in zip(si, sj)]
        li, lj = left[i], left[j]
        left[i] = [a * x + b * y for x, y in zip(li, lj)]
        left[j] = [c * x + d * y for x, y in zip(li, lj)]

    def col_op(i, j, a, b, c, d):
        # cols (i, j) <- cols (i, j) @ [[a, c], [b, d]]
        for mat in (s, right):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = a * x + b * y
                row[j] = c * x + d * y

    for t in range(min(rows, cols)):
        # choose a pivot of minimal absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            s[t], s[i] = s[i], s[t]
            left[t], left[i] = left[i], left[t]
        if j != t:
            col_op(t, j, 0, 1, 1, 0)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    a, b = s[t][t], s[i][t]
                    if b % a == 0:
                        row_op(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = _ext_gcd(a, b)
                        row_op(t, i, x, y, -(b // g), a // g)
                    changed = True
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    a, b = s[t][t], s[t][j]
                    if b % a == 0:
                        col_op(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = _ext_gcd(a, b)
                        col_op(t, j, x, y, -(b // g), a // g)
                    changed = True
            if not changed:
                # divisibility: fold any offending entry into row t
                piv = s[t][t]
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if s[i][j] % piv != 0), None)
                if bad is None:
                    break
                row_op(t, bad[0], 1, 1, 0, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            left[t] = [-x for x in left[t]]
    return s, left, right


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    if not m or not m[0]:
        return []
    s, _, _ = snf(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]))) if s[i][i] != 0]


def rank(m: Sequence[Sequence]) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    if not m:
        return 0
    rows = [list(row) for row in m]
    if not all(isinstance(x, int) for row in rows for x in row):
        # clear denominators row by row
        fr = [[Fraction(x) for x in row] for row in rows]
        rows = []
        for row in fr:
            den = 1
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
            rows.append([int(x * den) for x in row])
    a = rows
    r = 0
    for c in range(len(a[0])):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r]
        pc = piv[c]
        for i in range(r + 1, len(a)):
            q = a[i][c]
            if q:
                row = [pc * x - q * y for x, y in zip(a[i], piv)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                a[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(a):
            break
    return r


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def row_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Canonical HNF basis of the subgroup generated by ``rows``."""
    if not rows:
        return []
    h, _ = hnf(rows)
    return [r for r in h if any(r)]


def integer_kernel(m: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    """Saturated basis (as rows) of ``{x in Z^n : m x = 0}``."""
    n = len(m[0]) if m else ncols
    if n is None:
        raise ValueError("ncols required for an empty matrix")
    if not m:
        return identity(n)
    h, u = hnf(transpose(m))
    kern = [u[i] for i in range(n) if not any(h[i])]
    return row_basis(kern)


def saturate(vectors: Sequence[Sequence[int]], ambient_rank: int) -> Matrix:
    """Basis of ``span(vectors) ∩ Z^n`` in canonical HNF form."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    annihilator = integer_kernel(vecs)
    if not annihilator:
        return identity(ambient_rank)
    return integer_kernel(annihilator)


def solve_rational(basis: Sequence[Sequence], v: Sequence) -> Optional[list[Fraction]]:
    """Coefficients ``c`` with ``sum c_i basis_i = v``; None if v is outside the span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    if k == 0:
        return [] if not any(v) else None
    n = len(v)
    # augmented system: columns are basis vectors
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    r = 0
    pivots = []
    for c in range(k):
        p = next((i for i in range(r, n) if a[i][c] != 0), None)
        if p is None:
            raise LatticeError("basis vectors are linearly dependent")
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        return None
    return [a[i][k] for i in range(k)]


def rational_covector(rows: Sequence[Sequence], values: Sequence) -> Optional[list[Fraction]]:
    """Some ``l`` with ``row . l = value`` for every row; None if inconsistent.

    Free coordinates are set to zero.
    """
    if not rows:
        return None
    n = len(rows[0])
    a = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(rows, values)]
    r = 0
    pivots = []
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    if any(a[i][n] != 0 for i in range(r, len(a))):
        return None
    out = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        out[c] = a[i][n]
    return out


def solve_integer(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list[int]]:
    """Integer coefficients of ``v`` in ``basis`` or None if not in the lattice."""
    c = solve_rational(basis, v)
    if c is None or any(x.denominator != 1 for x in c):
        return None
    return [int(x) for x in c]


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    h, u = hnf(m)
    if h != identity(len(m)):
        raise LatticeError("matrix is not unimodular")
    return u


def inverse_rational(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    cols = transpose(identity(n))
    inv_cols = [solve_rational(transpose(m), col) for col in cols]
    if any(c is None for c in inv_cols):
        raise LatticeError("singular matrix")
    return transpose(inv_cols)  # type: ignore[arg-type]


def complete_basis(basis: Sequence[Sequence[int]], n: int) -> Matrix:
    """Unimodular ``n x n`` matrix whose first rows span the same lattice as ``basis``.

    ``basis`` must be a saturated basis.
    """
    if not basis:
        return identity(n)
    s, _, right = snf(basis)
    if any(s[i][i] != 1 for i in range(len(basis))):
        raise LatticeError("basis is not saturated")
    p = inverse_unimodular(right)
    # rows of p after the first len(basis) form a complement; replace the
    # leading rows with the canonical basis itself (still unimodular)
    return [list(b) for b in row_basis(basis)] + [list(r) for r in p[len(basis):]]


def quotient_map(basis: Sequence[Sequence[int]], n: int) -> Matrix:
    """Integer matrix ``q`` onto ``Z^(n-r)`` with kernel the saturated lattice of ``basis``."""
    p = complete_basis(basis, n)
    pinv = inverse_unimodular(p)
    # x = c @ p  =>  c = x @ pinv, so the quotient coordinates are the trailing columns
    r = len(basis)
    return [[pinv[i][j] for i in range(n)] for j in range(r, n)]


def lattice_index(sub: Sequence[Sequence[int]], ambient: Sequence[Sequence[int]]) -> Optional[int]:
    """Index of the subgroup generated by ``sub`` in the lattice with basis ``ambient``.

    Returns None when the index is infinite (rank drop). Raises
    ``LatticeError`` if a vector of ``sub`` is not in the ambient lattice.
    """
    coords = []
    for v in sub:
        c = solve_rational(ambient, v)
        if c is None:
            raise LatticeError(f"vector {tuple(v)} lies outside the ambient span")
        if any(x.denominator != 1 for x in c):
            raise LatticeError(f"vector {tuple(v)} is not in the ambient lattice")
        coords.append([int(x) for x in c])
    k = len(ambient)
    if k == 0:
        return 1
    facs = invariant_factors(coords) if coords else []
    if len(facs) < k:
        return None
    out = 1
    for d in facs:
        out *= d
    return out


def is_unimodular_set(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff ``vectors`` form a basis of the lattice they saturate."""
    if not vectors:
        return True
    if rank(vectors) < len(vectors):
        return False
    return all(d == 1 for d in invariant_factors(vectors))


def solve_system_integer(a: Sequence[Sequence[int]], y: Sequence[int], ncols: int) -> Optional[list[int]]:
    """Some integer ``x`` with ``a @ x = y`` (any rank), or None."""
    if not a:
        return [0] * ncols
    s, left, right = snf(a)
    ly = mat_vec(left, y)
    z = [0] * ncols
    for i, val in enumerate(ly):
        d = s[i][i] if i < min(len(s), ncols) else 0
        if d == 0:
            if val != 0:
                return None
            continue
        if val % d:
            return None
        z[i] = val // d
    return list(mat_vec(right, z))
