"""The subring generated by degree-2 classes, realized inside Sym^n of the
extended lattice, with its cup and Pontryagin products.

Elements live in the isotropic-power subspace S_[n]; the graded pieces are
the eigenspaces of the induced grading action, spanned by images of
monomial words in degree-2 classes under

    Psi(l_1 ... l_k) = e_{l_1} ... e_{l_k} (alpha^n / n!).

Cup product is polynomial multiplication of word decompositions pushed
through Psi; the Pontryagin product is its conjugate

    x * y = rho_tau( rho_tau(x) cup rho_tau(y) )

by the degree-reversing involution tau.  The star unit is beta^n/n!, the
model avatar of c_X [pt] / n! (c_X = 1 for the presets here).
"""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from . import linalg as la
from . import llv as llv_mod
from . import snrep as sn
from .errors import (EvenDimensionalGuard, LatticeError, NotGraded,
                     SolveFailure)
from .lattice import QIsometry


class _PieceSolver:
    """Incremental exact elimination with combination tracking: solve
    x = sum c_w Psi(w) over a selected independent word set."""

    def __init__(self):
        self.pivots = []   # (key, vec, combo)
        self.words = []

    def _reduce(self, vec, combo):
        for key, pvec, pcombo in self.pivots:
            c = vec.get(key)
            if c:
                vec = sn.sym_sub(vec, sn.sym_scale(c, pvec))
                for w, cc in pcombo.items():
                    v = combo.get(w, 0) - c * cc
                    if v:
                        combo[w] = v
                    else:
                        combo.pop(w, None)
        return vec, combo

    def try_add(self, word, vec):
        vec, combo = self._reduce(dict(vec), {word: 1})
        if not vec:
            return False
        key = min(vec)
        inv = la.ratio(1, vec[key])
        vec = sn.sym_scale(inv, vec)
        combo = {w: la.frac(inv * c) for w, c in combo.items()}
        self.pivots.append((key, vec, combo))
        self.words.append(word)
        return True

    def solve(self, x):
        combo = {}
        vec = dict(x)
        for key, pvec, pcombo in self.pivots:
            c = vec.get(key)
            if c:
                vec = sn.sym_sub(vec, sn.sym_scale(c, pvec))
                for w, cc in pcombo.items():
                    v = combo.get(w, 0) + c * cc
                    if v:
                        combo[w] = v
                    else:
                        combo.pop(w, None)
        if vec:
            raise SolveFailure("element is outside the spanned piece")
        return combo


class SHModel:
    """The degree-2-generated subring model on S_[n] of an extended lattice."""

    def __init__(self, llv_space, n, c_x=1):
        if llv_space.dim % 2 == 0:
            raise EvenDimensionalGuard(
                "the extended lattice must be odd dimensional; use the "
                "closed K3 formulas for the surface case")
        if n < 1:
            raise LatticeError("the model needs n >= 1")
        self.space = llv_space
        self.n = n
        self.c_x = la.frac(c_x)
        self.sym = sn.SymSpace(llv_space.lattice, n)
        self.base_rank = llv_space.base.rank
        self._psi_memo = {}
        self._solvers = {}
        self._piece_dims = self._compute_piece_dims()
        self._build_word_sets()

    # -- gradings -------------------------------------------------------------

    def mono_eigenvalue(self, m):
        a = sum(1 for i in m if i == self.space.alpha_index)
        b = sum(1 for i in m if i == self.space.beta_index)
        return 2 * (b - a)

    def eigenvalue(self, x):
        """The h-eigenvalue of a homogeneous element (None for 0)."""
        vals = {self.mono_eigenvalue(m) for m in x}
        if not vals:
            return None
        if len(vals) != 1:
            raise LatticeError("element is not homogeneous")
        return vals.pop()

    def pieces(self, x):
        out = {}
        for m, c in x.items():
            out.setdefault(self.mono_eigenvalue(m), {})[m] = c
        return out

    def degree_of_eigenvalue(self, j):
        """Cohomological degree of the eigenvalue-j piece."""
        return 2 * self.n + j

    def _compute_piece_dims(self):
        dims = {}
        for k in range(0, 2 * self.n + 1):
            j = 2 * k - 2 * self.n
            monos = [m for m in self.sym.monomials if self.mono_eigenvalue(m) == j]
            cols = []
            for m in monos:
                cols.append(self.sym.contract({m: 1}))
            lower_keys = sorted({mm for col in cols for mm in col})
            lindex = {mm: i for i, mm in enumerate(lower_keys)}
            mat = [[0] * len(monos) for _ in range(len(lower_keys))]
            for jcol, col in enumerate(cols):
                for mm, c in col.items():
                    mat[lindex[mm]][jcol] = c
            rk = la.rank(la.mat(mat)) if lower_keys else 0
            dims[j] = len(monos) - rk
        return dims

    def piece_dim(self, j):
        return self._piece_dims.get(j, 0)

    # -- Psi and word sets ----------------------------------------------------

    def psi_word(self, word):
        """Psi of a sorted tuple of base-basis indices, memoized."""
        if word in self._psi_memo:
            return self._psi_memo[word]
        if len(word) == 0:
            out = sn.sym_scale(Fraction(1, factorial(self.n)),
                               sn.sym_power(self.space.alpha().coords, self.n))
        else:
            rest = self.psi_word(word[1:])
            e = self._e_basis(word[0])
            out = self.sym.derivation_apply(e, rest) if rest else {}
        self._psi_memo[word] = out
        return out

    def _e_basis(self, i):
        key = ("e", i)
        if key not in self._psi_memo:
            lam = self.space.base.basis_vec(i)
            self._psi_memo[key] = llv_mod.e_op(self.space, lam)
        return self._psi_memo[key]

    def psi(self, lams):
        """Psi of a list of base-lattice vectors (not just basis ones)."""
        return sn.psi(self.space, lams, self.n)

    def _build_word_sets(self):
        d = self.base_rank
        for k in range(0, 2 * self.n + 1):
            j = 2 * k - 2 * self.n
            want = self.piece_dim(j)
            solver = _PieceSolver()
            got = 0
            for word in combinations_with_replacement(range(d), k):
                if got == want:
                    break
                img = self.psi_word(word)
                if img and solver.try_add(word, img):
                    got += 1
            if got != want:
                raise SolveFailure(
                    "monomial words span only %d of %d in eigenvalue %d"
                    % (got, want, j))
            self._solvers[j] = solver

    def to_words(self, x):
        """Decompose into word coefficients, {word: coeff}, degreewise."""
        out = {}
        for j, piece in self.pieces(x).items():
            if j not in self._solvers:
                raise SolveFailure("eigenvalue %d outside the model" % j)
            for w, c in self._solvers[j].solve(piece).items():
                if c:
                    out[w] = out.get(w, 0) + c
        return out

    def from_words(self, words):
        out = {}
        for w, c in words.items():
            if c:
                out = sn.sym_add(out, sn.sym_scale(c, self.psi_word(tuple(sorted(w)))))
        return out

    # -- elements ------------------------------------------------------------

    def element(self, x):
        return SHElt(self, x)

    def unit_cup(self):
        return self.element(self.psi_word(()))

    def unit_star(self):
        """beta^n/n!, the model avatar of c_X [pt]/n!."""
        return self.element(sn.sym_scale(
            Fraction(1, factorial(self.n)),
            sn.sym_power(self.space.beta().coords, self.n)))

    def random_element(self, rng, terms=6, bound=3):
        d = self.base_rank
        words = {}
        for _ in range(terms):
            k = rng.randint(0, 2 * self.n)
            w = tuple(sorted(rng.randrange(d) for _ in range(k)))
            c = rng.randint(-bound, bound)
            if c:
                words[w] = words.get(w, 0) + c
        return self.element(self.from_words(words))

    # -- products ------------------------------------------------------------

    def cup(self, x, y):
        wx = self.to_words(x)
        wy = self.to_words(y)
        prod = {}
        cap = 2 * self.n
        for w1, c1 in wx.items():
            for w2, c2 in wy.items():
                if len(w1) + len(w2) > cap:
                    continue
                key = tuple(sorted(w1 + w2))
                v = prod.get(key, 0) + c1 * c2
                if v:
                    prod[key] = v
                else:
                    prod.pop(key, None)
        return self.from_words(prod)

    def rho_tau(self, x):
        """The involution induced by tau; a signed slot permutation."""
        ai, bi = self.space.alpha_index, self.space.beta_index
        out = {}
        for m, c in x.items():
            sign = 1
            img = []
            for i in m:
                if i == ai:
                    img.append(bi)
                elif i == bi:
                    img.append(ai)
                else:
                    img.append(i)
                    sign = -sign
            key = tuple(sorted(img))
            v = out.get(key, 0) + sign * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return out

    def star(self, x, y):
        return self.rho_tau(self.cup(self.rho_tau(x), self.rho_tau(y)))

    def mu_action(self, t, x):
        """Multiplies the eigenvalue-2j piece by t^j."""
        t = la.frac(t)
        if t == 0:
            raise LatticeError("mu action needs t != 0")
        out = {}
        for m, c in x.items():
            j = self.mono_eigenvalue(m) // 2
            out[m] = la.frac(c * Fraction(t) ** j)
        return out

    def apply_llv(self, g, x):
        """The action of an isometry of the extended lattice via Sym^n."""
        m = g.matrix if isinstance(g, QIsometry) else g
        return self.sym.apply_linear(m, x)


class SHElt:
    """An element of the model, stored by its sparse Sym^n coordinates."""

    __slots__ = ("model", "data")

    def __init__(self, model, data):
        self.model = model
        self.data = {m: la.frac(c) for m, c in data.items() if c}

    def __eq__(self, other):
        return isinstance(other, SHElt) and self.model is other.model \
            and self.data == other.data

    def __repr__(self):
        return "SHElt(%d terms)" % len(self.data)

    def __add__(self, other):
        return SHElt(self.model, sn.sym_add(self.data, other.data))

    def __sub__(self, other):
        return SHElt(self.model, sn.sym_sub(self.data, other.data))

    def __rmul__(self, c):
        return SHElt(self.model, sn.sym_scale(c, self.data))

    def is_zero(self):
        return not self.data

    def eigenvalue(self):
        return self.model.eigenvalue(self.data)

    def degree(self):
        j = self.eigenvalue()
        return None if j is None else self.model.degree_of_eigenvalue(j)

    def cup(self, other):
        return SHElt(self.model, self.model.cup(self.data, other.data))

    def star(self, other):
        return SHElt(self.model, self.model.star(self.data, other.data))

    def rho_tau(self):
        return SHElt(self.model, self.model.rho_tau(self.data))

    def mu(self, t):
        return SHElt(self.model, self.model.mu_action(t, self.data))


# -- conjugation identities ---------------------------------------------------


def graded_type(space, g):
    """(+1, t) for graded g with g(alpha) = t alpha; (-1, t) for
    anti-graded g with g(alpha) = t^-1 beta; NotGraded otherwise."""
    m = g.matrix if isinstance(g, QIsometry) else g
    h = llv_mod.grading(space)
    mh = la.mat_mul(m, h)
    hm = la.mat_mul(h, m)
    ai, bi = space.alpha_index, space.beta_index
    col = tuple(row[ai] for row in m)
    if mh == hm:
        t = col[ai]
        if t == 0 or any(col[i] for i in range(space.dim) if i != ai):
            raise NotGraded("graded isometry must scale alpha")
        return 1, t
    if mh == la.mat_scale(-1, hm):
        c = col[bi]
        if c == 0 or any(col[i] for i in range(space.dim) if i != bi):
            raise NotGraded("degree-reversing isometry must map alpha to span(beta)")
        return -1, la.ratio(1, c)
    raise NotGraded("isometry neither commutes nor anti-commutes with h")


def conjugation_check(model, g, pairs):
    """For graded g: rho_{mu_t g} is a cup-ring map; for anti-graded g it
    turns cup into star.  Checked exactly on the given element pairs."""
    space = model.space
    kind, t = graded_type(space, g)
    mt = llv_mod.mu(space, t)
    mg = (mt * g).matrix if isinstance(g, QIsometry) else la.mat_mul(mt.matrix, g)

    def act(x):
        return model.apply_llv(mg, x)

    for x, y in pairs:
        lhs = act(model.cup(x.data, y.data))
        ax, ay = model.element(act(x.data)), model.element(act(y.data))
        if kind == 1:
            rhs = model.cup(ax.data, ay.data)
        else:
            rhs = model.star(ax.data, ay.data)
        if not sn.sym_eq(lhs, rhs):
            return False, {"kind": kind, "t": t}
    return True, {"kind": kind, "t": t}


def star_via(model, g, x, y):
    """The Pontryagin product built from an arbitrary degree-reversing g:
    rho_{g^-1 mu_{1/t}}( rho_{mu_t g}(x) cup rho_{mu_t g}(y) )."""
    space = model.space
    kind, t = graded_type(space, g)
    if kind != -1:
        raise NotGraded("star_via needs a degree-reversing isometry")
    mt = llv_mod.mu(space, t)
    fwd = (mt * g)
    back = fwd.inverse()
    a = model.apply_llv(fwd, x.data)
    b = model.apply_llv(fwd, y.data)
    return model.element(model.apply_llv(back, model.cup(a, b)))


def eta(model, f):
    """Psi-transported action of an isometry of the extended lattice."""
    def op(x):
        return model.element(model.apply_llv(f, x.data))
    return op


def proportionality_check_degree2(model, phi):
    """For degree-reversing phi, the degree-2 restriction of the composite
    with eta_tau is one global scalar times the middle-block restriction of
    phi o tau; returns the scalar (nonzero)."""
    space = model.space
    kind, t = graded_type(space, phi)
    if kind != -1:
        raise NotGraded("expected a degree-reversing isometry")
    tau = llv_mod.tau(space)
    comp = (phi if isinstance(phi, QIsometry) else QIsometry(space.lattice, phi)) * tau
    d = model.base_rank
    # matrix of the model action on the eigenvalue 2-2n piece (span of
    # alpha^{n-1} lambda_i / (n-1)!)
    cols = []
    for i in range(d):
        x = model.psi_word((i,))
        img = model.apply_llv(comp, x)
        col = [0] * d
        for w, c in model.to_words(img).items():
            if len(w) != 1:
                raise NotGraded("composite does not preserve the degree-2 piece")
            col[w[0]] = c
        cols.append(col)
    a = la.transpose(la.mat(cols))
    r = tuple(tuple(comp.matrix[1 + i][1 + j] for j in range(d)) for i in range(d))
    scalar = None
    for i in range(d):
        for j in range(d):
            if r[i][j]:
                s = la.ratio(a[i][j], r[i][j])
                if scalar is None:
                    scalar = s
                elif scalar != s:
                    raise SolveFailure("restriction is not a scalar multiple")
            elif a[i][j]:
                raise SolveFailure("restriction is not a scalar multiple")
    assert scalar
    return scalar
