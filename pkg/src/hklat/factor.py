"""Factorization of rational isometries into monodromies and reflections.

The target shape, for Lambda = L + Z*delta with L even unimodular containing
U + U and (delta,delta) = -2d < 0, is

    phi = (-1)^k  gamma_k rho_{u_k} ... gamma_1 rho_{u_1} gamma_0

with every gamma_i in the group Gamma (integral, orientation preserving,
acting by +-1 on the discriminant group) and every u_i a primitive integral
vector of the L-part with (u_i,u_i) >= 2.  decompose() produces such a
certificate for any phi in O^+(Lambda_Q); verify_normal_form() re-checks it
factor by factor.
"""

from fractions import Fraction

from . import linalg as la
from .errors import (IsotropicLambda, IsotropicVector, LatticeError,
                     NormMismatch, OrientationReversing, SearchExhausted)
from .lattice import (LatVec, Lattice, QIsometry, l_part_coords,
                      membership, nu_character)
from .transvect import canonical_vector, move_into_L, reduce_to_canonical


class ReflectionDatum:
    """A reflection stored by its primitive integral vector and norm."""

    __slots__ = ("u", "norm")

    def __init__(self, u):
        if u.is_zero():
            raise IsotropicVector("reflection vector must be nonzero")
        prim = u.primitive_part()
        n = prim.norm()
        if n == 0:
            raise IsotropicVector("cannot reflect in an isotropic vector")
        self.u = prim
        self.norm = n

    def isometry(self):
        return reflect(self.u.lattice, self.u)


def reflect(lattice, u):
    """rho_u(x) = x - 2(u,x)/(u,u) u."""
    if not isinstance(u, LatVec):
        u = lattice.vec(u)
    uu = u.norm()
    if uu == 0:
        raise IsotropicVector("cannot reflect in an isotropic vector")
    gu = la.mat_vec(lattice.gram, u.coords)
    n = lattice.rank
    two_over = la.ratio(2, uu)
    rows = []
    for i in range(n):
        ui = u.coords[i]
        row = []
        for j in range(n):
            val = 1 if i == j else 0
            val -= two_over * gu[j] * ui
            row.append(la.frac(val))
        rows.append(tuple(row))
    return QIsometry(lattice, rows, _trusted=True)


def reflect_times(lattice, u, g):
    """rho_u o g as a rank-one update, O(rank^2)."""
    uu = u.norm()
    if uu == 0:
        raise IsotropicVector("cannot reflect in an isotropic vector")
    gu = la.mat_vec(lattice.gram, u.coords)
    m = g.matrix
    n = lattice.rank
    # row vector (Gu)^T M
    gum = tuple(la.frac(sum(gu[i] * m[i][j] for i in range(n)))
                for j in range(n))
    c = la.ratio(2, uu)
    rows = []
    for i in range(n):
        cu = c * u.coords[i]
        if cu:
            rows.append(tuple(la.frac(m[i][j] - cu * gum[j]) for j in range(n)))
        else:
            rows.append(m[i])
    return QIsometry(lattice, rows, _trusted=True)


def witt_map(lattice, x, y):
    """An isometry mapping x to y for (x,x) = (y,y) != 0.

    Returns (sign, w) with sign*rho_w the map: rho_{x-y} when x-y is
    anisotropic, else -rho_{x+y}; (None, None) encodes the identity when
    x = y.
    """
    nx, ny = x.norm(), y.norm()
    if nx != ny:
        raise NormMismatch("witt_map needs equal norms")
    if nx == 0:
        raise IsotropicVector("witt_map needs anisotropic vectors")
    if x == y:
        return None, None
    diff = x - y
    if diff.norm() != 0:
        return 1, diff
    s = x + y
    assert s.norm() != 0
    return -1, s


def apply_witt(lattice, sign_w, v):
    sign, w = sign_w
    if sign is None:
        return v
    out = reflect(lattice, w).apply(v)
    return out if sign == 1 else -out


def witt_isometry(lattice, sign_w):
    sign, w = sign_w
    if sign is None:
        return QIsometry.identity(lattice)
    r = reflect(lattice, w)
    return r if sign == 1 else -r


def _orthogonal_anisotropic_basis(lattice):
    p, d = la.congruent_diagonalize(lattice.gram)
    assert all(x != 0 for x in d)
    return [la.vec(row) for row in p]


def cartan_dieudonne(lattice, f):
    """Reflection vectors w_1..w_m with rho_{w_1} o ... o rho_{w_m} = f
    and m <= rank.

    Standard constructive argument: while f != id, find x with
    w := f(x) - x anisotropic (such x exists among z_i and z_i + z_j for an
    orthogonal basis z unless the moved space is totally isotropic, in
    which case one extra reflection breaks the degeneracy).
    """
    zbasis = _orthogonal_anisotropic_basis(lattice)
    n = lattice.rank
    candidates = list(zbasis)
    for i in range(n):
        for j in range(i + 1, n):
            candidates.append(la.vec_add(zbasis[i], zbasis[j]))
    # once a candidate is fixed it stays fixed: each step's reflection
    # vector pairs to zero with every vector the current isometry fixes
    fixed = [False] * len(candidates)
    refs = []
    g = f
    ident = la.identity(n)
    budget = n + 4
    while g.matrix != ident:
        assert budget > 0, "cartan_dieudonne failed to terminate"
        budget -= 1
        found = None
        for idx, x in enumerate(candidates):
            if fixed[idx]:
                continue
            gx = la.mat_vec(g.matrix, x)
            w = la.vec_sub(gx, x)
            if la.is_zero_vec(w):
                fixed[idx] = True
                continue
            if lattice.pair_coords(w, w) != 0:
                found = w
                break
        if found is not None:
            refs.append(ReflectionDatum(lattice.vec(found)))
            g = reflect_times(lattice, lattice.vec(found), g)
            continue
        # moved space totally isotropic: compose with one reflection in an
        # anisotropic vector that g actually moves, then continue
        broke = False
        for idx, z in enumerate(zbasis):
            gz = la.mat_vec(g.matrix, z)
            if gz != z:
                refs.append(ReflectionDatum(lattice.vec(z)))
                g = reflect_times(lattice, lattice.vec(z), g)
                fixed = [False] * len(candidates)
                broke = True
                break
        assert broke, "non-identity isometry fixing an anisotropic basis"
    assert len(refs) <= n, "reflection count exceeded the rank"
    return refs


def verify_cd(lattice, refs, f):
    acc = QIsometry.identity(lattice)
    for rd in refs:
        acc = acc * rd.isometry()
    return acc == f


# ---------------------------------------------------------------------------
# L + Z*delta helpers


def l_sublattice(lattice):
    """The L-part of an L + Z*delta lattice, with matching U-blocks."""
    di = lattice.delta_index
    if di is None:
        raise LatticeError("lattice has no delta summand")
    if "l_part" not in lattice._cache:
        idx = [i for i in range(lattice.rank) if i != di]
        gram = tuple(tuple(lattice.gram[i][j] for j in idx) for i in idx)
        ub = tuple((i if i < di else i - 1, j if j < di else j - 1)
                   for i, j in lattice.u_blocks)
        name = (lattice.name or "").split(":")[0] or None
        lattice._cache["l_part"] = Lattice(gram, name=("%s-L" % name if name else None),
                                           u_blocks=ub)
    return lattice._cache["l_part"]


def embed_l_vector(lattice, v):
    di = lattice.delta_index
    coords = list(v.coords)
    coords.insert(di, Fraction(0))
    return LatVec(lattice, coords)


def restrict_to_l(lattice, v):
    di = lattice.delta_index
    assert v.coords[di] == 0
    return LatVec(l_sublattice(lattice), tuple(c for i, c in enumerate(v.coords)
                                               if i != di))


def extend_l_isometry(lattice, g):
    """Extend an isometry of the L-part to Lambda fixing delta."""
    di = lattice.delta_index
    n = lattice.rank
    rows = []
    src = g.matrix
    for i in range(n):
        row = []
        for j in range(n):
            if i == di or j == di:
                row.append(Fraction(1) if i == j else Fraction(0))
            else:
                row.append(src[i if i < di else i - 1][j if j < di else j - 1])
        rows.append(tuple(row))
    return QIsometry(lattice, rows, _trusted=True)


def _d_value(lattice):
    dd = -lattice.gram[lattice.delta_index][lattice.delta_index]
    assert dd > 0 and dd % 2 == 0
    return int(dd) // 2


def neg_reflection_u_delta(lattice, u):
    """-rho_{u+delta} for u in L with (u,u) = 2d+2; a Gamma element."""
    di = lattice.delta_index
    coords = list(u.coords)
    coords[di] += 1
    v = LatVec(lattice, coords)
    assert v.norm() == 2
    return -reflect(lattice, v)


def find_orthogonal_norm_vector(lattice, lam, target, height=64):
    """u in the L-part with (u,u) = target and (u, lam) = 0.

    Scans the U summands missing from lam's support first, then falls back
    to a bounded enumeration over pairs from an integral basis of the
    orthogonal complement of lam in L.
    """
    di = lattice.delta_index
    n = lattice.rank
    assert target % 2 == 0 and target > 0
    for (i, j) in lattice.u_blocks:
        if lam.coords[i] == 0 and lam.coords[j] == 0:
            c = [Fraction(0)] * n
            c[i] = Fraction(1)
            c[j] = Fraction(-target, 2)
            return LatVec(lattice, c)
    # orthogonal-complement enumeration: lam-perp inside the L-part
    glam = la.mat_vec(lattice.gram, lam.coords)
    row = [glam[i] for i in range(n) if i != di]
    if la.is_zero_vec(row):
        raise AssertionError("lam = 0 should have been caught by the U scan")
    func = la.primitive_part(row)
    d, u, v = la.smith_normal_form([[int(x) for x in func]])
    # kernel basis of the functional: columns 1.. of v
    kb = []
    m = len(row)
    for c in range(1, m):
        col = [int(v[r][c]) for r in range(m)]
        kb.append(col)
    lsub = l_sublattice(lattice)
    for a in range(len(kb)):
        qaa = lsub.pair_coords(la.vec(kb[a]), la.vec(kb[a]))
        for s in range(1, height + 1):
            if qaa * s * s == target:
                return embed_l_vector(lattice, lsub.vec([s * x for x in kb[a]]))
    for a in range(len(kb)):
        qaa = lsub.pair_coords(la.vec(kb[a]), la.vec(kb[a]))
        for b in range(a + 1, len(kb)):
            qab = lsub.pair_coords(la.vec(kb[a]), la.vec(kb[b]))
            qbb = lsub.pair_coords(la.vec(kb[b]), la.vec(kb[b]))
            for s in range(-height, height + 1):
                for t in range(-height, height + 1):
                    if qaa * s * s + 2 * qab * s * t + qbb * t * t == target:
                        w = [s * x + t * y for x, y in zip(kb[a], kb[b])]
                        return embed_l_vector(lattice, lsub.vec(w))
    raise SearchExhausted(
        "no orthogonal vector of norm %d within height %d" % (target, height))


def _delta_fix_vector(lattice, work, lam, target):
    """A norm-target vector u of the L-part such that pre-composing work
    with -rho_{u+delta} gives a delta-image with anisotropic L-part.

    An orthogonal u always works and is searched for first; when the
    bounded orthogonal search is exhausted, any candidate whose outcome
    passes the exact anisotropy check is equally certified.
    """
    delta = lattice.basis_vec(lattice.delta_index)

    def outcome_ok(u):
        c = neg_reflection_u_delta(lattice, u)
        lam2, _ = _split_delta(lattice, (c * work).apply(delta))
        return lam2.norm() != 0

    try:
        u = find_orthogonal_norm_vector(lattice, lam, target)
        if outcome_ok(u):
            return u
    except SearchExhausted:
        pass
    m = target // 2
    candidates = []
    for (i, j) in lattice.u_blocks:
        for (a, b) in ((1, -m), (-1, m), (m, -1), (-m, 1)):
            c = [Fraction(0)] * lattice.rank
            c[i], c[j] = Fraction(a), Fraction(b)
            candidates.append(LatVec(lattice, c))
    for (i, j) in lattice.u_blocks:
        for (k, l) in lattice.u_blocks:
            if (i, j) == (k, l):
                continue
            for s in (1, -1, 2, -2):
                # -2(1)(s-m) - 2(s)(-1) = 2m exactly
                c = [Fraction(0)] * lattice.rank
                c[i], c[j] = Fraction(1), Fraction(s - m)
                c[k], c[l] = Fraction(s), Fraction(-1)
                candidates.append(LatVec(lattice, c))
    for u in candidates:
        assert u.norm() == target
        if outcome_ok(u):
            return u
    raise SearchExhausted("no usable norm-%d vector for the delta fix" % target)


def positive_reflection_rewrite(lattice, u):
    """For primitive integral u with (u,u) = -2m < 0 in a unimodular lattice
    containing U + U: h integral and w with (w,w) = 2m and rho_u = h rho_w.

    h = g^-1 (-id_U1 + id) g and w = g^-1(e1 - m e2) for the transvection
    word g moving u to the canonical vector e1 + m e2.
    """
    if not isinstance(u, LatVec):
        u = lattice.vec(u)
    uu = u.norm()
    if uu >= 0:
        raise NormMismatch("rewrite applies to negative-norm vectors")
    m = -uu // 2
    word = reduce_to_canonical(lattice, u)   # u -> e1 + m e2
    g = word.isometry()
    i, j = lattice.u_blocks[0]
    sigma_rows = []
    for r in range(lattice.rank):
        row = [Fraction(0)] * lattice.rank
        row[r] = Fraction(-1) if r in (i, j) else Fraction(1)
        sigma_rows.append(tuple(row))
    sigma = QIsometry(lattice, sigma_rows, _trusted=True)
    ginv = g.inverse()
    h = ginv * sigma * g
    # rho_{e1+m e2} = sigma o rho_{e1-m e2}, and (e1 - m e2)^2 = 2m
    c = [Fraction(0)] * lattice.rank
    c[i] = Fraction(1)
    c[j] = Fraction(-m)
    w = ginv.apply(LatVec(lattice, c))
    assert w.norm() == 2 * m
    assert h.is_integral()
    assert (h * reflect(lattice, w)).matrix == reflect(lattice, u).matrix
    return h, w


# ---------------------------------------------------------------------------
# the normal form


class NormalForm:
    """(-1)^k gamma_k rho_{u_k} ... gamma_1 rho_{u_1} gamma_0.

    us[0] is u_1 (applied first); gammas[0] is gamma_0.  Each gamma carries
    a Gamma-membership certificate computed at construction.
    """

    __slots__ = ("lattice", "k", "gammas", "us", "certificates")

    def __init__(self, lattice, k, gammas, us):
        assert len(gammas) == len(us) + 1
        assert k == len(us)
        self.lattice = lattice
        self.k = k
        self.gammas = tuple(gammas)
        self.us = tuple(us)
        self.certificates = tuple(membership(g, "Gamma")[1] for g in gammas)

    def evaluate(self):
        ev = self.gammas[0]
        for i in range(self.k):
            ev = self.gammas[i + 1] * reflect_times(self.lattice, self.us[i], ev)
        if self.k % 2 == 1:
            ev = -ev
        return ev


def _split_delta(lattice, v):
    lam_coords, t = l_part_coords(lattice, v)
    return LatVec(lattice, lam_coords), t


def _move_rational_items(lattice, x):
    """Word g with g(x) in L_Q, as (isometry, inverse-aware item list).

    g = h o f:  f a Witt reflection in L_Q sending q*lam to the canonical
    primitive vector, h a transvection word in Gamma.  Items describe g
    in outer-to-inner order for certificate assembly.
    """
    lam, t = _split_delta(lattice, x)
    nl = lam.norm()
    if nl == 0:
        raise IsotropicLambda("the L-part must be anisotropic")
    q, _ = la.clear_denominators(x.coords)
    lam_q = q * lam
    target_norm = q * q * nl
    lam_prime = canonical_vector(lattice, target_norm)
    f_sw = witt_map(lattice, lam_q, lam_prime)
    f_iso = witt_isometry(lattice, f_sw)
    alpha = f_iso.apply(q * x)
    assert alpha.is_integral()
    word = move_into_L(lattice, alpha)
    h_iso = word.isometry()
    g = h_iso * f_iso
    items = [("gamma", h_iso)]
    if f_sw[0] is not None:
        if f_sw[0] == -1:
            items.append(("sign",))
        items.append(("refl", f_sw[1]))
    # items describe g = h o f outer-to-inner
    return g, items


def _invert_items(items):
    """Items of the inverse word, outer-to-inner."""
    out = []
    for kind, *rest in reversed(items):
        if kind == "gamma":
            out.append(("gamma", rest[0].inverse()))
        elif kind == "refl":
            out.append(("refl", rest[0]))
        else:
            out.append(("sign",))
    return out


def _reference_vector(lattice):
    """g1(-rho_{u0+delta}(delta)) in L_Q plus the item list of g1."""
    if "decompose_ref" in lattice._cache:
        return lattice._cache["decompose_ref"]
    d = _d_value(lattice)
    u0 = embed_l_vector(lattice, canonical_vector(l_sublattice(lattice),
                                                  2 * d + 2))
    c0 = neg_reflection_u_delta(lattice, u0)
    delta = lattice.basis_vec(lattice.delta_index)
    x = c0.apply(delta)
    g1, g1_items = _move_rational_items(lattice, x)
    y0 = g1.apply(x)
    lattice._cache["decompose_ref"] = (u0, c0, g1, g1_items, y0)
    return lattice._cache["decompose_ref"]


def decompose(lattice, phi):
    """Normal-form certificate for phi in O^+(Lambda_Q)."""
    if lattice.delta_index is None:
        raise LatticeError("decompose needs an L + Z*delta lattice")
    if nu_character(phi) != 1:
        raise OrientationReversing("decompose requires nu(phi) = +1")
    ok, _ = membership(phi, "Gamma") if phi.is_integral() else (False, None)
    if ok:
        return NormalForm(lattice, 0, [phi], [])

    d = _d_value(lattice)
    delta = lattice.basis_vec(lattice.delta_index)
    factors = []      # outer-to-inner items composing to phi o work^-1
    work = phi

    def push_left(c_iso, c_inv_items):
        nonlocal work
        work = c_iso * work
        factors.extend(c_inv_items)

    def push_neg_refl(v, gamma_item):
        # work := -rho_v o work, extracted as a single Gamma element
        nonlocal work
        work = -reflect_times(lattice, v, work)
        factors.append(("gamma", gamma_item))

    def push_witt(sw):
        nonlocal work
        if sw[0] is None:
            return
        work = reflect_times(lattice, sw[1], work)
        if sw[0] == -1:
            work = -work
            factors.append(("sign",))
        factors.append(("refl", sw[1]))

    if work.apply(delta) != delta:
        x = work.apply(delta)
        lam, t = _split_delta(lattice, x)
        if lam.norm() == 0:
            u = _delta_fix_vector(lattice, work, lam, 2 * d + 2)
            ud = list(u.coords)
            ud[lattice.delta_index] += 1
            push_neg_refl(LatVec(lattice, ud), neg_reflection_u_delta(lattice, u))
            x = work.apply(delta)
            lam, t = _split_delta(lattice, x)
            assert lam.norm() != 0
        g2, g2_items = _move_rational_items(lattice, x)
        push_left(g2, _invert_items(g2_items))

        u0, c0, g1, g1_items, y0 = _reference_vector(lattice)
        cur = work.apply(delta)
        push_witt(witt_map(lattice, cur, y0))
        push_left(g1.inverse(), g1_items)
        u0d = list(u0.coords)
        u0d[lattice.delta_index] += 1
        push_neg_refl(LatVec(lattice, u0d), c0)
        assert work.apply(delta) == delta

    # residue in O(L_Q)
    lsub = l_sublattice(lattice)
    di = lattice.delta_index
    res_rows = tuple(tuple(work.matrix[i][j]
                           for j in range(lattice.rank) if j != di)
                     for i in range(lattice.rank) if i != di)
    residue = QIsometry(lsub, res_rows)
    for rd in cartan_dieudonne(lsub, residue):
        factors.append(("refl", embed_l_vector(lattice, rd.u)))

    return _assemble(lattice, phi, factors)


def _assemble(lattice, phi, factors):
    """Normalize an outer-to-inner item list into a NormalForm."""
    lsub = l_sublattice(lattice)
    di = lattice.delta_index
    normalized = []
    for item in factors:
        if item[0] != "refl":
            normalized.append(item)
            continue
        u = item[1].primitive_part()
        if u.norm() > 0:
            normalized.append(("refl", u))
        else:
            ul = restrict_to_l(lattice, u)
            h, w = positive_reflection_rewrite(lsub, ul)
            normalized.append(("gamma", extend_l_isometry(lattice, h)))
            normalized.append(("refl", embed_l_vector(lattice, w)))
    fixed = []
    for item in normalized:
        if item[0] == "gamma" and nu_character(item[1]) == -1:
            fixed.append(("sign",))
            fixed.append(("gamma", -item[1]))
        else:
            fixed.append(item)
    # collapse: [gamma-run] refl [gamma-run] ... refl [gamma-run]
    sign_parity = 0
    gammas_rev = []   # gamma_k first (outer-to-inner scan)
    us_rev = []
    cur = QIsometry.identity(lattice)
    for item in fixed:
        if item[0] == "sign":
            sign_parity ^= 1
        elif item[0] == "gamma":
            cur = cur * item[1]
        else:
            gammas_rev.append(cur)
            us_rev.append(item[1])
            cur = QIsometry.identity(lattice)
    gammas_rev.append(cur)
    k = len(us_rev)
    assert sign_parity == k % 2, "character bookkeeping failed"
    gammas = list(reversed(gammas_rev))
    us = list(reversed(us_rev))
    nf = NormalForm(lattice, k, gammas, us)
    report = verify_normal_form(nf, phi)
    assert report["ok"], report
    return nf


def verify_normal_form(nf, phi):
    """Exact re-verification of a normal-form certificate."""
    report = {"ok": True, "failures": [], "k": nf.k}
    lat = nf.lattice
    di = lat.delta_index
    for i, g in enumerate(nf.gammas):
        ok, cert = membership(g, "Gamma")
        if not ok:
            report["ok"] = False
            report["failures"].append(("gamma", i, cert))
    for i, u in enumerate(nf.us):
        problems = []
        if not u.is_integral():
            problems.append("not integral")
        elif not u.is_primitive():
            problems.append("not primitive")
        if di is not None and u.coords[di] != 0:
            problems.append("not in the L-part")
        if u.norm() < 2:
            problems.append("norm < 2")
        if problems:
            report["ok"] = False
            report["failures"].append(("u", i, problems))
    if nf.evaluate() != phi:
        report["ok"] = False
        report["failures"].append(("recomposition", None, "product != phi"))
    return report
