"""Eichler transvections and the constructive reduction to a canonical vector.

The transvection attached to an isotropic e and a vector a orthogonal to e is

    E(e,a)(x) = x - (a,x) e + (e,x) a - (a,a)/2 (e,x) e,

an integral isometry with determinant +1, trivial discriminant action and
nu = +1.  For a lattice containing two orthogonal hyperbolic planes
U1 = (e1,e2), U2 = (f1,f2), the group generated by transvections acts
transitively on primitive vectors of fixed norm and divisibility 1; the
reduction below maps such a vector to the canonical e1 - (N/2) e2 and
records the word of transvections.

The reduction works on the 2x2 integer matrix

    P = [[a, d], [c, -b]]       (alpha = a e1 + b e2 + c f1 + d f2 + w)

on which the four transvections E(e1, k f1), E(f2, k e2), E(e1, k f2),
E(f1, k e2) act as the elementary SL2 x SL2 row/column additions.  Smith
reduction of P plus two pivot moves eliminating the remainder w give the
canonical form.
"""

from fractions import Fraction

from . import linalg as la
from .errors import (DivisibilityMismatch, LatticeError, NoHyperbolicPlanes,
                     NonPrimitiveLambda, NormMismatch, NotIntegral)
from .lattice import LatVec, QIsometry, divisibility

_MAX_REDUCE_STEPS = 20000


def transvection_matrix(lattice, e_coords, a_coords):
    """Matrix of E(e,a); validates isotropy and orthogonality."""
    g = lattice.gram
    n = lattice.rank
    ee = lattice.pair_coords(e_coords, e_coords)
    ea = lattice.pair_coords(e_coords, a_coords)
    if ee != 0:
        raise LatticeError("transvection base vector must be isotropic")
    if ea != 0:
        raise LatticeError("transvection requires (e,a) = 0")
    ge = la.mat_vec(g, e_coords)
    ga = la.mat_vec(g, a_coords)
    aa = lattice.pair_coords(a_coords, a_coords)
    half_aa = la.ratio(aa, 2)
    rows = []
    for i in range(n):
        ei, ai = e_coords[i], a_coords[i]
        row = []
        for j in range(n):
            val = Fraction(1) if i == j else Fraction(0)
            val += -ga[j] * ei + ge[j] * ai - half_aa * ge[j] * ei
            row.append(val)
        rows.append(tuple(row))
    return tuple(rows)


def eichler_transvection(lattice, e, a):
    """E(e,a) as a certified isometry.  e, a must be integral."""
    if not (e.is_integral() and a.is_integral()):
        raise NotIntegral("transvection data must be integral")
    m = transvection_matrix(lattice, e.coords, a.coords)
    iso = QIsometry(lattice, m, _trusted=True)
    # trusted path double-checked cheaply on the defining relations
    assert iso.apply(e) == e
    return iso


def apply_transvection_coords(lattice, e_coords, a_coords, x):
    """E(e,a)(x) on raw coordinate tuples."""
    ax = lattice.pair_coords(a_coords, x)
    ex = lattice.pair_coords(e_coords, x)
    aa = lattice.pair_coords(a_coords, a_coords)
    c_e = -ax - la.ratio(aa, 2) * ex
    return tuple(x[i] + c_e * e_coords[i] + ex * a_coords[i]
                 for i in range(lattice.rank))


class TransvectionWord:
    """An ordered word of transvections; steps[0] is applied first."""

    __slots__ = ("lattice", "steps")

    def __init__(self, lattice, steps=()):
        self.lattice = lattice
        self.steps = list(steps)

    def append(self, e_coords, a_coords):
        self.steps.append((la.vec(e_coords), la.vec(a_coords)))

    def apply_coords(self, x):
        for e, a in self.steps:
            x = apply_transvection_coords(self.lattice, e, a, x)
        return x

    def apply(self, v):
        return LatVec(self.lattice, self.apply_coords(v.coords))

    def isometry(self):
        n = self.lattice.rank
        cols = []
        for j in range(n):
            col = tuple(1 if i == j else 0 for i in range(n))
            cols.append(self.apply_coords(col))
        m = tuple(zip(*cols))
        return QIsometry(self.lattice, m, _trusted=True)

    def inverse(self):
        inv = [(e, tuple(-x for x in a)) for e, a in reversed(self.steps)]
        return TransvectionWord(self.lattice, inv)

    def __len__(self):
        return len(self.steps)


def _bezout_combo(values):
    """(g, coeffs) with sum(c*v) = g = gcd(values) >= 0."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        v = int(v)
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coeffs = [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        # extended euclid on (g, v)
        a, b = g, v
        x0, x1 = 1, 0
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
        if a < 0:
            a, x0 = -a, -x0
        # a = gcd, x0 * g + y * v = a with y = (a - x0*g)//v
        y = (a - x0 * g) // v
        coeffs = [c * x0 for c in coeffs]
        coeffs[i] += y
        g = a
    return g, coeffs


def canonical_vector(lattice, norm):
    """e1 - (N/2) e2 in the first hyperbolic plane."""
    if not lattice.u_blocks:
        raise NoHyperbolicPlanes("lattice has no designated hyperbolic plane")
    if norm % 2 != 0:
        raise NormMismatch("even lattice vectors have even norm")
    i, j = lattice.u_blocks[0]
    c = [Fraction(0)] * lattice.rank
    c[i] = Fraction(1)
    c[j] = Fraction(-norm, 2)
    return LatVec(lattice, c)


class _Reducer:
    """Stateful reduction of one primitive divisibility-1 vector to the
    canonical vector, recording a transvection word."""

    def __init__(self, lattice, coords):
        if len(lattice.u_blocks) < 2:
            raise NoHyperbolicPlanes(
                "reduction needs two orthogonal hyperbolic planes")
        self.lat = lattice
        self.e1, self.e2 = lattice.u_blocks[0]
        self.f1, self.f2 = lattice.u_blocks[1]
        self.u_idx = (self.e1, self.e2, self.f1, self.f2)
        self.w_idx = tuple(k for k in range(lattice.rank) if k not in self.u_idx)
        self.x = la.vec(coords)
        self.word = TransvectionWord(lattice)
        self.budget = _MAX_REDUCE_STEPS

    def _basis(self, i, scale=1):
        c = [Fraction(0)] * self.lat.rank
        c[i] = Fraction(scale)
        return tuple(c)

    def _emit(self, e_coords, a_coords):
        self.budget -= 1
        assert self.budget > 0, "transvection reduction exceeded step budget"
        self.word.append(e_coords, a_coords)
        self.x = apply_transvection_coords(self.lat, e_coords, a_coords, self.x)

    # -- the four elementary SL2 x SL2 moves ------------------------------
    def op_col1(self, k):   # P: col1 += k col2   <->  E(e1, k f1)
        if k:
            self._emit(self._basis(self.e1), self._basis(self.f1, k))

    def op_col2(self, k):   # P: col2 += k col1   <->  E(f2, k e2)
        if k:
            self._emit(self._basis(self.f2), self._basis(self.e2, k))

    def op_row1(self, k):   # P: row1 += k row2   <->  E(e1, k f2)
        if k:
            self._emit(self._basis(self.e1), self._basis(self.f2, k))

    def op_row2(self, k):   # P: row2 += k row1   <->  E(f1, k e2)
        if k:
            self._emit(self._basis(self.f1), self._basis(self.e2, k))

    def _p(self):
        a = self.x[self.e1]
        b = self.x[self.e2]
        c = self.x[self.f1]
        d = self.x[self.f2]
        assert all(v.denominator == 1 for v in (a, b, c, d))
        return [[int(a), int(d)], [int(c), -int(b)]]

    def _rot_rows_B(self):
        # (r1, r2) -> (-r2, r1):  r1 -= r2; r2 += r1; r1 -= r2
        self.op_row1(-1)
        self.op_row2(1)
        self.op_row1(-1)

    def _rot_cols_A(self):
        # (c1, c2) -> (c2, -c1):  c1 += c2; c2 -= c1; c1 += c2
        self.op_col1(1)
        self.op_col2(-1)
        self.op_col1(1)

    def _diagonalize(self):
        """Clear P12 and P21 by Euclid; terminates with P diagonal."""
        while True:
            p = self._p()
            if p[0][1] == 0 and p[1][0] == 0:
                return
            if p[0][0] == 0:
                if p[1][0] != 0:
                    self.op_row1(1)
                elif p[0][1] != 0:
                    self.op_col1(1)
                else:
                    self.op_row1(1)
                    self.op_col1(1)
                continue
            if p[1][0] != 0:
                q = p[1][0] // p[0][0]
                self.op_row2(-q)
                if self._p()[1][0] != 0:
                    self._rot_rows_B()
                continue
            q = p[0][1] // p[0][0]
            self.op_col2(-q)
            if self._p()[0][1] != 0:
                self._rot_cols_A()

    def _finish_with_unit(self):
        """From diagonal P with P22 = 1, reach [[1,0],[0,P11]]."""
        p = self._p()
        assert p[1][1] == 1 and p[0][1] == 0 and p[1][0] == 0
        v = p[0][0]
        self.op_row1(1)
        self.op_col1(1 - v)
        self.op_row2(-(1 - v))
        self.op_col2(-1)

    def _snf_to_one(self):
        """Drive diagonal P to [[1,0],[0,m]]; content must be 1."""
        while True:
            self._diagonalize()
            p = self._p()
            p11, p22 = p[0][0], p[1][1]
            if p11 == 1:
                return
            if abs(p11) != 1:
                assert p22 != 0, "content > 1: divisibility was not 1"
                self.op_row1(1)   # fold and re-reduce; |P11| shrinks to gcd
                continue
            # p11 == -1: rotate to (-p22, 1) then finish with the unit
            self._rot_rows_B()
            self._rot_cols_A()
            self._diagonalize()
            if self._p()[1][1] == 1:
                self._finish_with_unit()
            # loop re-checks; handles p22 = 0 and sign flips uniformly

    def _w_part(self):
        return tuple(self.x[k] for k in self.w_idx)

    def _kill_w(self):
        """Phase 1: empty the complement of U1 + U2."""
        if all(v == 0 for v in self._w_part()):
            return
        self._diagonalize()   # now c = d = 0, w untouched
        # one pure move E(f2, y) with (y, alpha) = -1 sets the f2-coord to 1
        pair_rows = la.mat_vec(self.lat.gram, self.x)
        idxs = [self.e1, self.e2] + list(self.w_idx)
        vals = [int(pair_rows[i]) for i in idxs]
        g, coeffs = _bezout_combo(vals)
        assert g == 1, "divisibility was not 1"
        y = [Fraction(0)] * self.lat.rank
        for i, c in zip(idxs, coeffs):
            y[i] = Fraction(-c)
        self._emit(self._basis(self.f2), tuple(y))
        assert self.x[self.f2] == 1 and self.x[self.f1] == 0
        # pivot on d = 1: E(f1, w) removes the whole remainder
        w = [Fraction(0)] * self.lat.rank
        for k in self.w_idx:
            w[k] = self.x[k]
        self._emit(self._basis(self.f1), tuple(w))
        assert all(v == 0 for v in self._w_part())

    def run(self):
        self._kill_w()
        self._snf_to_one()
        p = self._p()
        assert p == [[1, 0], [0, p[1][1]]]
        norm = self.lat.pair_coords(self.x, self.x)
        target = canonical_vector(self.lat, norm)
        assert self.x == target.coords, "reduction did not reach canonical form"
        return self.word


def reduce_to_canonical(lattice, x):
    """Transvection word g with g(x) = e1 - (N/2) e2, for x primitive
    integral of divisibility 1."""
    if not isinstance(x, LatVec):
        x = lattice.vec(x)
    if not x.is_integral():
        raise NotIntegral("reduction needs an integral vector")
    if not x.is_primitive():
        raise NonPrimitiveLambda("reduction needs a primitive vector")
    if divisibility(lattice, x) != 1:
        raise DivisibilityMismatch(
            "transvection reduction implemented for divisibility 1 only")
    return _Reducer(lattice, x.coords).run()


def eichler_move(lattice, x, y):
    """Transvection word g with g(x) = y for primitive integral vectors of
    equal norm, equal divisibility (= 1), and equal discriminant class."""
    if not (isinstance(x, LatVec) and isinstance(y, LatVec)):
        raise LatticeError("eichler_move expects lattice vectors")
    if len(lattice.u_blocks) < 2:
        raise NoHyperbolicPlanes(
            "eichler_move needs two orthogonal hyperbolic planes")
    if x.norm() != y.norm():
        raise NormMismatch("norms differ: %s vs %s" % (x.norm(), y.norm()))
    dx, dy = divisibility(lattice, x), divisibility(lattice, y)
    if dx != dy:
        raise DivisibilityMismatch("divisibilities differ: %d vs %d" % (dx, dy))
    wx = reduce_to_canonical(lattice, x)
    wy = reduce_to_canonical(lattice, y)
    word = TransvectionWord(lattice, wx.steps + wy.inverse().steps)
    assert word.apply(x) == y
    return word


def move_into_L(lattice, alpha):
    """For Lambda = L + Z*delta and alpha = lambda + k*delta with lambda
    primitive in L, a transvection word g (inside Gamma) with g(alpha) the
    canonical vector of norm (alpha,alpha) in the first U of L."""
    di = lattice.delta_index
    if di is None:
        raise LatticeError("move_into_L needs an L + Z*delta lattice")
    if not alpha.is_integral():
        raise NotIntegral("move_into_L needs an integral vector")
    lam = [c for i, c in enumerate(alpha.coords) if i != di]
    if la.is_zero_vec(lam) or la.content(lam) != 1:
        raise NonPrimitiveLambda("the L-part must be primitive in L")
    word = _Reducer(lattice, alpha.coords).run()
    out = word.apply(alpha)
    assert out.coords[di] == 0
    return word
