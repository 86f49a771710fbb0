"""The extended lattice Q*alpha + Lambda_Q + Q*beta and its operator calculus.

Basis order is (alpha, lattice basis..., beta) with alpha, beta isotropic,
(alpha,beta) = -1, both orthogonal to the middle block.  The grading
operator h multiplies alpha by -2 and beta by +2; cup product with lambda
is modelled by the nilpotent e_lambda sending alpha -> lambda -> (.,.)beta;
its exponential B_lambda = 1 + e + e^2/2 is the B-field isometry.
"""

from fractions import Fraction

from . import linalg as la
from .errors import IsotropicVector, LatticeError, NotGraded
from .lattice import LatVec, Lattice, QIsometry


class LLVSpace:
    """Q*alpha + base_Q + Q*beta with the extended pairing."""

    __slots__ = ("base", "dim", "lattice", "alpha_index", "beta_index")

    def __init__(self, base):
        r = base.rank
        g = [[0] * (r + 2) for _ in range(r + 2)]
        g[0][r + 1] = -1
        g[r + 1][0] = -1
        for i in range(r):
            for j in range(r):
                g[1 + i][1 + j] = int(base.gram[i][j])
        di = None if base.delta_index is None else base.delta_index + 1
        self.base = base
        self.dim = r + 2
        self.lattice = Lattice(g, name="llv(%s)" % (base.name or "custom"),
                               delta_index=di)
        self.alpha_index = 0
        self.beta_index = r + 1

    def __eq__(self, other):
        return isinstance(other, LLVSpace) and self.lattice == other.lattice

    def __repr__(self):
        return "LLVSpace(%s)" % (self.base.name or "custom")

    def alpha(self):
        return self.lattice.basis_vec(self.alpha_index)

    def beta(self):
        return self.lattice.basis_vec(self.beta_index)

    def embed(self, v):
        """Middle-block inclusion of a base-lattice vector."""
        return LatVec(self.lattice, (0,) + tuple(v.coords) + (0,))

    def middle_part(self, w):
        return LatVec(self.base, w.coords[1:-1])

    def vec(self, a_coeff, v, b_coeff):
        return LatVec(self.lattice,
                      (la.frac(a_coeff),) + tuple(v.coords) + (la.frac(b_coeff),))

    def pair(self, x, y):
        return self.lattice.pair_coords(x.coords, y.coords)


def e_op(space, lam):
    """The nilpotent operator with e(alpha) = lam, e(beta) = 0 and
    e(mu) = (lam,mu) beta on the middle block.  Skew-adjoint, e^3 = 0."""
    if lam.lattice == space.base:
        lam = space.embed(lam)
    else:
        assert lam.coords[0] == 0 and lam.coords[-1] == 0
    r = space.base.rank
    n = space.dim
    rows = [[0] * n for _ in range(n)]
    for i in range(r):
        rows[1 + i][0] = lam.coords[1 + i]
    glam = la.mat_vec(space.lattice.gram, lam.coords)
    for j in range(r):
        rows[n - 1][1 + j] = glam[1 + j]
    return la.mat(rows)


def b_field(space, lam):
    """B_lambda = exp(e_lambda) = 1 + e + e^2/2, an isometry."""
    e = e_op(space, lam)
    e2 = la.mat_mul(e, e)
    m = la.mat_add(la.mat_add(la.identity(space.dim), e), la.mat_scale(Fraction(1, 2), e2))
    return QIsometry(space.lattice, m, _trusted=True)


def tau(space):
    """Interchanges alpha and beta, multiplies the middle block by -1."""
    n = space.dim
    rows = [[0] * n for _ in range(n)]
    rows[0][n - 1] = 1
    rows[n - 1][0] = 1
    for i in range(1, n - 1):
        rows[i][i] = -1
    return QIsometry(space.lattice, rows, _trusted=True)


def mu(space, t):
    """mu_t(alpha) = t^-1 alpha, mu_t(beta) = t beta, identity in between."""
    t = la.frac(t)
    if t == 0:
        raise LatticeError("mu_t needs t != 0")
    n = space.dim
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = la.ratio(1, t)
    rows[n - 1][n - 1] = t
    for i in range(1, n - 1):
        rows[i][i] = 1
    return QIsometry(space.lattice, rows, _trusted=True)


def grading(space):
    """h: alpha -> -2 alpha, beta -> 2 beta, 0 on the middle block."""
    n = space.dim
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = -2
    rows[n - 1][n - 1] = 2
    return la.mat(rows)


def commutator(a, b):
    return la.mat_sub(la.mat_mul(a, b), la.mat_mul(b, a))


def h_degree(space, m):
    """The h-degree of an operator: c with [h, m] = c m, or None."""
    h = grading(space)
    com = commutator(h, m)
    for c in (-4, -2, 0, 2, 4):
        if com == la.mat_scale(c, m):
            return c
    return None


def is_degree_reversing(space, g):
    """g maps span(alpha) <-> span(beta) and the middle block to itself;
    equivalently g anti-commutes with the grading operator."""
    m = g.matrix if isinstance(g, QIsometry) else g
    h = grading(space)
    return la.mat_mul(m, h) == la.mat_scale(-1, la.mat_mul(h, m))


def fm_beta_image(space, r, lam):
    """r alpha + lam + ((lam,lam)/2r) beta; always isotropic."""
    r = la.frac(r)
    if r == 0:
        raise LatticeError("fm_beta_image needs r != 0")
    if lam.lattice != space.base:
        lam = space.middle_part(lam)
    s = la.ratio(lam.norm(), 2 * r)
    out = space.vec(r, lam, s)
    assert out.norm() == 0
    return out


def normalize_fm(space, phi, r, lam_x, lam_y):
    """B_{-lam_y/r} o phi o B_{-lam_x/r} plus a degree-reversing report."""
    r = la.frac(r)
    if r == 0:
        raise LatticeError("normalize_fm needs r != 0")
    bx = b_field(space, la.ratio(-1, r) * lam_x)
    by = b_field(space, la.ratio(-1, r) * lam_y)
    out = by * phi * bx
    return out, is_degree_reversing(space, out)


def beta_to_alpha_scale(space, phi):
    """t with phi(beta) = t alpha; raises NotGraded otherwise."""
    m = phi.matrix if isinstance(phi, QIsometry) else phi
    col = tuple(m[i][space.beta_index] for i in range(space.dim))
    t = col[space.alpha_index]
    if t == 0 or any(col[i] != 0 for i in range(space.dim) if i != space.alpha_index):
        raise NotGraded("operator does not map beta to span(alpha)")
    return t


def dual_lefschetz_check(space, phi, lam):
    """The dual Lefschetz operator 2/(t (lam,lam)) phi^-1 e_{phi(lam)} phi
    for degree-reversing phi with phi(beta) = t alpha.

    Returns (operator, report); the report records the two commutator
    identities [e_lam, psi] = (t(lam,lam)/2) h and [h, psi] = -2 psi that
    are asserted exactly.
    """
    if not is_degree_reversing(space, phi):
        raise NotGraded("dual Lefschetz needs a degree-reversing isometry")
    nl = lam.norm()
    if nl == 0:
        raise IsotropicVector("dual Lefschetz needs (lam,lam) != 0")
    t = beta_to_alpha_scale(space, phi)
    phi_lam = space.middle_part(phi.apply(space.embed(lam)))
    e_im = e_op(space, phi_lam)
    inv = phi.inverse().matrix
    psi = la.mat_mul(inv, la.mat_mul(e_im, phi.matrix))
    e_lam = e_op(space, lam)
    h = grading(space)
    c1 = commutator(e_lam, psi)
    ok1 = c1 == la.mat_scale(la.ratio(t * nl, 2), h)
    c2 = commutator(h, psi)
    ok2 = c2 == la.mat_scale(-2, psi)
    assert ok1 and ok2, "dual Lefschetz commutator identities failed"
    e_dual = la.mat_scale(la.ratio(2, t * nl), psi)
    report = {"t": t, "lam_norm": nl,
              "commutator_e_psi": "t(lam,lam)/2 * h",
              "commutator_h_psi": "-2 psi"}
    return e_dual, report


def sl2_check(space, e, f, h):
    """[e,f] = h, [h,e] = 2e, [h,f] = -2f, exactly."""
    return (commutator(e, f) == la.mat(h)
            and commutator(h, e) == la.mat_scale(2, e)
            and commutator(h, f) == la.mat_scale(-2, f))


# ---------------------------------------------------------------------------
# Hilbert-scheme lift formulas


def theta_embedding(k3_space, k3n_space):
    """The isometric embedding of the K3 extended lattice into the K3n one,
    alpha -> alpha, beta -> beta, middle -> middle; image is delta-perp."""
    di = k3n_space.lattice.delta_index
    rows = []
    src = k3_space.dim
    for i in range(k3n_space.dim):
        row = [0] * src
        rows.append(row)
    # alpha
    rows[0][0] = 1
    # middle: K3 basis occupies the first base.rank slots of the K3n base
    for i in range(k3_space.base.rank):
        rows[1 + i][1 + i] = 1
    rows[k3n_space.beta_index][k3_space.beta_index] = 1
    return la.mat(rows)


def theta_tilde(k3_space, k3n_space, x):
    """Apply the embedding to a vector of the K3 extended lattice."""
    m = theta_embedding(k3_space, k3n_space)
    return LatVec(k3n_space.lattice, la.mat_vec(m, x.coords))


def extend_to_llv(space, g):
    """Extend a base-lattice isometry to the extended lattice, fixing
    alpha and beta."""
    n0 = space.dim
    rows = [[0] * n0 for _ in range(n0)]
    rows[0][0] = 1
    rows[n0 - 1][n0 - 1] = 1
    for i in range(space.base.rank):
        for j in range(space.base.rank):
            rows[1 + i][1 + j] = g.matrix[i][j]
    return QIsometry(space.lattice, rows, _trusted=True)


def iota_tilde(k3_space, k3n_space, g):
    """Extend an isometry of the K3 extended lattice (or of the K3 lattice
    itself) to the K3n extended lattice, fixing delta."""
    if isinstance(g, QIsometry) and g.lattice == k3_space.base:
        g = extend_to_llv(k3_space, g)
    src = g.matrix
    di = k3n_space.lattice.delta_index
    n = k3n_space.dim
    emb = [0, ] + [1 + i for i in range(k3_space.base.rank)] + [k3n_space.beta_index]
    # emb[s] = index in the K3n space of the s-th K3-space basis vector
    rows = [[0] * n for _ in range(n)]
    rows[di][di] = 1
    for s_i, i in enumerate(emb):
        for s_j, j in enumerate(emb):
            rows[i][j] = src[s_i][s_j]
    return QIsometry(k3n_space.lattice, rows, _trusted=True)


def delta_half_bfield(k3n_space, sign):
    base = k3n_space.base
    delta = base.basis_vec(base.delta_index)
    return b_field(k3n_space, la.ratio(sign, 2) * delta)


def hilb_lift(k3_space, k3n_space, phi, n, det_phi=None):
    """det(phi)^{n+1} B_{-delta/2} o iota(phi) o B_{delta/2}."""
    if det_phi is None:
        det_phi = phi.det() if isinstance(phi, QIsometry) else 1
    assert det_phi in (1, -1)
    iot = iota_tilde(k3_space, k3n_space, phi)
    out = delta_half_bfield(k3n_space, -1) * iot * delta_half_bfield(k3n_space, +1)
    if det_phi ** (n + 1) == -1:
        out = -out
    return out


def kernel_c1_solve(k3_space, k3n_space, r, a1, a2, n):
    """First-Chern-class data of the lifted kernel:

        e1 = R (theta(a1)/r + delta/2),  e2 = R (theta(a2)/r - delta/2),
        R  = n! r^n,

    with the exact vanishing checks and the collapsed operator identity
    B_{-e2/R} o hilb_lift(phi, n) o B_{-e1/R} = det(phi)^{n+1} iota(phi).
    """
    if r < 1 or n < 2:
        raise LatticeError("kernel_c1_solve needs r >= 1, n >= 2")
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    R = fact * r ** n
    base = k3n_space.base
    delta = base.basis_vec(base.delta_index)
    th1 = LatVec(base, tuple(a1.coords) + (0,))
    th2 = LatVec(base, tuple(a2.coords) + (0,))
    lam1 = la.ratio(1, r) * th1 + la.ratio(1, 2) * delta
    lam2 = la.ratio(1, r) * th2 - la.ratio(1, 2) * delta
    e1 = R * lam1
    e2 = R * lam2
    assert e1.is_integral() and e2.is_integral()
    # the defining vanishing: theta(a_i)/r +- delta/2 - e_i/R = 0
    assert (lam1 - la.ratio(1, R) * e1).is_zero()
    assert (lam2 - la.ratio(1, R) * e2).is_zero()
    return e1, e2, R


def verify_kernel_identity(k3_space, k3n_space, phi, n, r, a1, a2):
    """Exact check of B_{-e2/R} o hilb_lift o B_{-e1/R} = det^{n+1} iota(phi')
    with phi' = B_{-a2/r} o phi o B_{-a1/r}."""
    e1, e2, R = kernel_c1_solve(k3_space, k3n_space, r, a1, a2, n)
    lift = hilb_lift(k3_space, k3n_space, phi, n)
    b1 = b_field(k3n_space, la.ratio(-1, R) * LatVec(k3n_space.base, e1.coords))
    b2 = b_field(k3n_space, la.ratio(-1, R) * LatVec(k3n_space.base, e2.coords))
    lhs = b2 * lift * b1
    varphi = (b_field(k3_space, la.ratio(-1, r) * a2) * phi
              * b_field(k3_space, la.ratio(-1, r) * a1))
    rhs = iota_tilde(k3_space, k3n_space, varphi)
    det_phi = phi.det()
    if det_phi ** (n + 1) == -1:
        rhs = -rhs
    return lhs == rhs
