"""Exact dense linear algebra over the rationals.

Matrices are tuples of tuples of scalars (immutable); vectors are tuples.
Scalars are Python ints when integral and Fraction otherwise -- the two mix
transparently under arithmetic, equality and hashing, and keeping integers
as ints avoids Fraction normalization costs in the hot paths.  Nothing in
this module ever touches floating point.
"""

from fractions import Fraction
from math import gcd

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x):
    """Normalize to int (when integral) or Fraction."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x._numerator if x._denominator == 1 else x
    if isinstance(x, int):
        return int(x)
    f = Fraction(x)
    return f._numerator if f._denominator == 1 else f


def ratio(a, b):
    """Exact a/b staying in int/Fraction (never float)."""
    return frac(Fraction(a) / Fraction(b))


def vec(entries):
    return tuple(frac(x) for x in entries)


def mat(rows):
    return tuple(tuple(frac(x) for x in row) for row in rows)


def zeros(n, m):
    return tuple((0,) * m for _ in range(n))


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(frac(sum(x * y for x, y in zip(row, col)))
                       for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(frac(sum(x * y for x, y in zip(row, v))) for row in a)


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v):
    c = frac(c)
    return tuple(c * x for x in v)


def is_zero_vec(v):
    return all(x == 0 for x in v)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))

def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))

def mat_scale(c, a):
    c = frac(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_eq(a, b):
    return a == b


def rref(a):
    """Reduced row echelon form.  Returns (R, pivot_columns, rank)."""
    m = [list(row) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat(m), tuple(pivots), r


def rank(a):
    return rref(a)[2]


def kernel(a):
    """Basis of the right kernel, as a tuple of vectors."""
    r, pivots, rk = rref(a)
    ncols = len(a[0]) if a else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * ncols
        v[fcol] = ONE
        for i, pcol in enumerate(pivots):
            v[pcol] = -r[i][fcol]
        basis.append(tuple(v))
    return tuple(basis)


def solve(a, b):
    """One exact solution x of a x = b, or None if inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [list(row) + [frac(bb)] for row, bb in zip(a, b)]
    r, pivots, rk = rref(aug)
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        if p == ncols:
            return None
        x[p] = r[i][ncols]
    return tuple(x)


def det(a):
    """Determinant by fraction-free-ish Gaussian elimination."""
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    acc = ONE
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        acc *= p
        inv = ONE / p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return acc if sign > 0 else -acc


def inverse(a):
    n = len(a)
    aug = [list(row) + list(idr) for row, idr in zip(a, identity(n))]
    r, pivots, rk = rref(aug)
    if list(pivots[:n]) != list(range(n)):
        raise ZeroDivisionError("matrix not invertible")
    return tuple(tuple(r[i][n:]) for i in range(n))


def congruent_diagonalize(g):
    """Exact symmetric diagonalization: returns (P, d) with P g P^T = diag(d).

    Rows of P form a basis in which the form g is diagonal.  Standard
    symmetric Gaussian elimination; a zero diagonal with a nonzero
    off-diagonal entry is repaired by adding the partner row first.
    """
    n = len(g)
    b = [list(row) for row in g]
    p = [list(row) for row in identity(n)]

    def addrow(i, j, c):
        # row_i += c*row_j, applied congruently
        for k in range(n):
            b[i][k] += c * b[j][k]
        for k in range(n):
            b[k][i] += c * b[k][j]
        for k in range(n):
            p[i][k] += c * p[j][k]

    for i in range(n):
        if b[i][i] == 0:
            for j in range(i + 1, n):
                if b[i][j] != 0:
                    addrow(i, j, ONE)
                    break
        if b[i][i] == 0:
            continue
        inv = ONE / b[i][i]
        for j in range(i + 1, n):
            if b[j][i] != 0:
                addrow(j, i, -b[j][i] * inv)
    d = tuple(b[i][i] for i in range(n))
    return mat(p), d


def signature(g):
    """(positive, negative, zero) inertia counts of a symmetric matrix."""
    _, d = congruent_diagonalize(g)
    pos = sum(1 for x in d if x > 0)
    neg = sum(1 for x in d if x < 0)
    return pos, neg, len(d) - pos - neg


def smith_normal_form(a):
    """Integer Smith normal form.  Returns (d, u, v) with u a v = diag(d).

    a must have integer entries; u, v are unimodular integer matrices and
    the diagonal d is nonnegative with d[i] | d[i+1].
    """
    m = [[int(x) for x in row] for row in a]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_op(i, j, c):
        m[i] = [x + c * y for x, y in zip(m[i], m[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, c):
        for row in m:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def clear(t):
        """Euclid-eliminate row and column t against the pivot m[t][t]."""
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    row_op(i, t, -q)
                    if m[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    col_op(j, t, -q)
                    if m[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                return

    t = 0
    while t < min(nr, nc):
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        clear(t)
        t += 1
    k = min(nr, nc)
    # divisibility chain: fold offending pairs and re-clear
    stable = False
    while not stable:
        stable = True
        for i in range(k - 1):
            di, dj = m[i][i], m[i + 1][i + 1]
            if dj != 0 and (di == 0 or dj % di != 0):
                col_op(i, i + 1, 1)
                clear(i)
                clear(i + 1)
                stable = False
                break
    for i in range(k):
        if m[i][i] < 0:
            for j in range(nc):
                m[i][j] = -m[i][j]
            u[i] = [-x for x in u[i]]
    d = tuple(m[i][i] for i in range(k))
    return d, mat(u), mat(v)


def content(v):
    """gcd of the entries of an integer vector (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def is_integral_vec(v):
    return all(frac(x).denominator == 1 for x in v)


def is_integral_mat(a):
    return all(frac(x).denominator == 1 for row in a for x in row)


def clear_denominators(v):
    """Smallest positive q with q*v integral; returns (q, qv)."""
    q = 1
    for x in v:
        d = x.denominator
        q = q * d // gcd(q, d)
    return q, tuple(frac(x * q) for x in v)


def primitive_part(v):
    """Primitive integer vector spanning the same line as rational v != 0."""
    q, w = clear_denominators(v)
    c = content(w)
    return tuple(int(x) // c for x in w)
