"""Constructors for the named matrix families and the canonical-block taxonomy.

A CanonicalBlock is one summand of a canonical decomposition; a BlockSum
is a canonically ordered list of blocks together with the classification
mode it belongs to.
"""

from fractions import Fraction

from .scalar import (GaussianRational, FieldMode, rational, is_rational,
                     MODE_RATIONAL,
                     MODE_GAUSSIAN, MODE_GAUSSIAN_ID, MODE_REAL_FLOAT,
                     MODE_COMPLEX_FLOAT, GAUSSIAN, COMPLEX_FLOAT,
                     RATIONAL, REAL_FLOAT, IDENTITY,
                     abs_squared, scalar_to_json, scalar_from_json)
from .matrix import Matrix, Poly, direct_sum, skew_sum, realify

# classification modes
CONGRUENCE_AC = "congruence-ac"
CONGRUENCE_REAL = "congruence-real"
STAR_AC = "star-ac"
GENERAL_FIELD = "general-field"
QUATERNION_STAR = "quaternion-star"

# block kinds
SINGULAR_JORDAN = "singular-jordan"
SKEW_PAIR = "skew-pair"
SIGNED_ROOT = "signed-root"
REAL_SKEW_PAIR = "real-skew-pair"
REAL_SIGNED_ROOT = "real-signed-root"
GF_TYPE_II = "gf-type-ii"
GF_TYPE_III = "gf-type-iii"

_KIND_RANK = {
    SINGULAR_JORDAN: 0,
    SKEW_PAIR: 1,
    SIGNED_ROOT: 2,
    REAL_SKEW_PAIR: 3,
    REAL_SIGNED_ROOT: 4,
    GF_TYPE_II: 5,
    GF_TYPE_III: 6,
}

_SIGNED_KINDS = (SIGNED_ROOT, REAL_SIGNED_ROOT)


def field_mode_for(cmode, floating=False):
    """The scalar field a classification mode's matrices live over."""
    if cmode == CONGRUENCE_AC:
        return FieldMode(COMPLEX_FLOAT, IDENTITY) if floating else MODE_GAUSSIAN_ID
    if cmode == STAR_AC:
        return MODE_COMPLEX_FLOAT if floating else MODE_GAUSSIAN
    if cmode == CONGRUENCE_REAL:
        return MODE_REAL_FLOAT if floating else MODE_RATIONAL
    raise ValueError("no fixed field for mode %r" % cmode)


# -- basic families ---------------------------------------------------------

def jordan_block(n, lam, mode):
    """J_n(lam): lam on the diagonal, ones on the superdiagonal."""
    J = Matrix.zeros(n, n, mode)
    lam = mode.promote(lam)
    one = mode.one()
    for i in range(n):
        J.a[i][i] = lam
        if i + 1 < n:
            J.a[i][i + 1] = one
    return J


def frobenius_block(chi):
    """Companion matrix with last column -c_n, ..., -c_1 (top to bottom)."""
    if chi.is_zero() or chi.degree < 1:
        raise ValueError("need a polynomial of degree at least 1")
    chi = chi.monic()
    mode = chi.mode
    n = chi.degree
    F = Matrix.zeros(n, n, mode)
    for i in range(1, n):
        F.a[i][i - 1] = mode.one()
    for i in range(n):
        # row i gets -c_{n-i}, i.e. minus the coefficient of x^i
        F.a[i][n - 1] = -chi.coeff(i)
    return F


def m_pair(n, mode=MODE_RATIONAL):
    """The pair M_n = [I | 0], N_n = [0 | I], both (n-1) x n."""
    M = Matrix.zeros(n - 1, n, mode)
    N = Matrix.zeros(n - 1, n, mode)
    for i in range(n - 1):
        M.a[i][i] = mode.one()
        N.a[i][i + 1] = mode.one()
    return M, N


def gamma(n, mode=MODE_RATIONAL):
    """Anti-triangular block with paired +-1 entries along the anti-diagonal."""
    if n < 1:
        raise ValueError("size must be positive")
    G = Matrix.zeros(n, n, mode)
    one = mode.one()
    for i in range(1, n + 1):  # 1-based
        v = one if (n - i) % 2 == 0 else -one
        G.a[i - 1][n - i] = v
        if i >= 2:
            G.a[i - 1][n + 1 - i] = v
    return G


def gamma_prime(n, mode=MODE_RATIONAL):
    """The primed variant: sign pattern grouped around the center."""
    if n < 1:
        raise ValueError("size must be positive")
    G = Matrix.zeros(n, n, mode)
    one = mode.one()
    if n % 2 == 1:
        half = (n + 1) // 2
        for i in range(1, n + 1):
            G.a[i - 1][n - i] = one
            if i > half:
                G.a[i - 1][n + 1 - i] = one
    else:
        half = n // 2
        for i in range(1, n + 1):
            G.a[i - 1][n - i] = one if i > half else -one
            if i >= 2:
                G.a[i - 1][n + 1 - i] = one
    return G


def delta(n, mu, mode=MODE_GAUSSIAN):
    """mu along the anti-diagonal, i along the next lower anti-diagonal."""
    try:
        iunit = mode.i()
    except ValueError:
        raise ValueError("this block needs a base containing i")
    mu = mode.promote(mu)
    if mode.is_zero(mu):
        raise ValueError("parameter must be nonzero")
    D = Matrix.zeros(n, n, mode)
    for i in range(1, n + 1):
        D.a[i - 1][n - i] = mu
        if i >= 2:
            D.a[i - 1][n + 1 - i] = iunit
    return D


# -- canonical blocks -------------------------------------------------------

class CanonicalBlock:
    __slots__ = ("kind", "n", "lam", "eps", "chi", "qform")

    def __init__(self, kind, n, lam=None, eps=None, chi=None, qform=None):
        if kind not in _KIND_RANK:
            raise ValueError("unknown block kind %r" % kind)
        if n < 1:
            raise ValueError("block size must be positive")
        if kind in _SIGNED_KINDS:
            if eps not in (None, 1, -1):
                raise ValueError("bad sign")
        elif kind == GF_TYPE_III:
            if eps not in (None, 1, -1):
                raise ValueError("bad sign")
        elif eps is not None:
            raise ValueError("%s blocks carry no sign" % kind)
        self.kind = kind
        self.n = n
        self.lam = lam
        self.eps = eps
        self.chi = chi
        self.qform = qform

    def total_size(self):
        if self.kind == SINGULAR_JORDAN:
            return self.n
        if self.kind == SKEW_PAIR:
            return 2 * self.n
        if self.kind == SIGNED_ROOT:
            return self.n
        if self.kind == REAL_SKEW_PAIR:
            return 4 * self.n
        if self.kind == REAL_SIGNED_ROOT:
            return 2 * self.n
        if self.kind == GF_TYPE_II:
            return 2 * self.chi.degree
        return self.chi.degree

    def __eq__(self, other):
        if not isinstance(other, CanonicalBlock):
            return NotImplemented
        return block_order_key(self) == block_order_key(other)

    def __hash__(self):
        return hash((self.kind, self.n, self.eps))

    def __repr__(self):
        bits = [self.kind, "n=%d" % self.n]
        if self.lam is not None:
            bits.append("lam=%r" % self.lam)
        if self.chi is not None:
            bits.append("chi=%s" % self.chi)
        if self.eps is not None:
            bits.append("eps=%+d" % self.eps)
        return "Block(%s)" % ", ".join(bits)

    def to_json(self):
        out = {"kind": self.kind, "n": self.n}
        if self.lam is not None:
            out["lambda"] = scalar_to_json(self.lam)
        if self.eps is not None:
            out["epsilon"] = self.eps
        if self.chi is not None:
            out["chi"] = [scalar_to_json(c) for c in self.chi.c]
        return out

    @staticmethod
    def from_json(data, field_mode):
        lam = data.get("lambda")
        if lam is not None:
            try:
                lam = scalar_from_json(lam, field_mode)
            except TypeError:
                # realified kinds carry parameters from the complex extension
                ext = (MODE_GAUSSIAN if field_mode.exact else
                       FieldMode(COMPLEX_FLOAT, CONJUGATION,
                                 field_mode.tolerance))
                lam = scalar_from_json(lam, ext)
        chi = data.get("chi")
        if chi is not None:
            chi = Poly([scalar_from_json(c, field_mode) for c in chi], field_mode)
        return CanonicalBlock(data["kind"], data["n"], lam=lam,
                              eps=data.get("epsilon"), chi=chi)


def _scalar_key(x):
    if x is None:
        return ()
    if is_rational(x):
        return (rational(x), rational(0))
    if isinstance(x, GaussianRational):
        return (x.re, x.im)
    if isinstance(x, float):
        return (x, 0.0)
    if isinstance(x, complex):
        return (x.real, x.imag)
    raise TypeError("no ordering key for %r" % x)


def block_order_key(b):
    """Deterministic total order: kind, size descending, parameter, sign."""
    if b.chi is not None:
        param = (b.chi.degree,) + tuple(_scalar_key(c) for c in b.chi.c)
    else:
        param = _scalar_key(b.lam)
    eps_rank = 0 if b.eps in (None, 1) else 1
    return (_KIND_RANK[b.kind], -b.n, param, eps_rank)


class BlockSum:
    __slots__ = ("cmode", "blocks")

    def __init__(self, cmode, blocks):
        self.cmode = cmode
        self.blocks = sorted(blocks, key=block_order_key)

    def total_size(self):
        return sum(b.total_size() for b in self.blocks)

    def __eq__(self, other):
        if not isinstance(other, BlockSum):
            return NotImplemented
        if self.cmode != other.cmode or len(self.blocks) != len(other.blocks):
            return False
        return all(block_order_key(x) == block_order_key(y)
                   for x, y in zip(self.blocks, other.blocks))

    def __hash__(self):
        return hash((self.cmode, len(self.blocks)))

    def __repr__(self):
        return "BlockSum(%s, [%s])" % (self.cmode,
                                       ", ".join(repr(b) for b in self.blocks))

    def to_json(self):
        return {"mode": self.cmode,
                "blocks": [b.to_json() for b in self.blocks]}

    @staticmethod
    def from_json(data, field_mode=None):
        cmode = data["mode"]
        if field_mode is None:
            field_mode = field_mode_for(cmode)
        return BlockSum(cmode, [CanonicalBlock.from_json(b, field_mode)
                                for b in data["blocks"]])


# -- block realization ------------------------------------------------------

def check_block(b, cmode, field_mode):
    """Validate a block's parameters against its classification mode."""
    n, lam = b.n, b.lam
    fm = field_mode

    def unimod(x):
        from .scalar import is_unimodular
        return is_unimodular(x, fm)

    if b.kind == SINGULAR_JORDAN:
        return
    if b.kind == SKEW_PAIR:
        lam = fm.promote(lam)
        if fm.is_zero(lam):
            raise ValueError("skew-pair parameter must be nonzero")
        if cmode == CONGRUENCE_AC:
            if fm.eq(lam, fm.promote((-1) ** (n + 1))):
                raise ValueError("parameter (-1)^(n+1) belongs to the root kind")
        elif cmode == STAR_AC:
            if unimod(lam):
                raise ValueError("unimodular parameters belong to the root kind")
        elif cmode == CONGRUENCE_REAL:
            if fm.eq(lam, fm.promote((-1) ** (n + 1))):
                raise ValueError("parameter (-1)^(n+1) belongs to the root kind")
        return
    if b.kind == SIGNED_ROOT:
        lam = fm.promote(lam)
        if cmode == STAR_AC:
            if not unimod(lam):
                raise ValueError("signed roots need a unimodular parameter")
            if b.eps is None:
                raise ValueError("root blocks carry a sign in this mode")
        elif cmode == CONGRUENCE_REAL:
            if not fm.eq(lam, fm.promote((-1) ** (n + 1))):
                raise ValueError("real root blocks need parameter (-1)^(n+1)")
            if b.eps is None:
                raise ValueError("root blocks carry a sign in this mode")
        elif cmode == CONGRUENCE_AC:
            if not fm.eq(lam, fm.promote((-1) ** (n + 1))):
                raise ValueError("root blocks need parameter (-1)^(n+1)")
            if b.eps is not None:
                raise ValueError("root blocks are unsigned in this mode")
        return
    if b.kind in (REAL_SKEW_PAIR, REAL_SIGNED_ROOT):
        if cmode != CONGRUENCE_REAL:
            raise ValueError("realified blocks only occur over a real closed field")
        g = MODE_GAUSSIAN if fm.exact else MODE_COMPLEX_FLOAT
        lam = g.promote(lam)
        im_zero = (lam.im == 0) if g.exact else abs(lam.imag) <= g.tolerance
        if g.is_zero(lam) or im_zero:
            raise ValueError("realified blocks need a strictly complex parameter")
        s = abs_squared(lam)
        if b.kind == REAL_SKEW_PAIR and g.eq(g.promote(s), g.one()):
            raise ValueError("unimodular parameters belong to the root kind")
        if b.kind == REAL_SIGNED_ROOT and not g.eq(g.promote(s), g.one()):
            raise ValueError("realified roots need a unimodular parameter")
        return
    # general-field kinds: only light checks here
    if b.chi is None:
        raise ValueError("general-field blocks carry a polynomial")


def _root_rep(n, lam, field_mode, signed):
    from .canon import plus_root
    return plus_root(n, lam, field_mode, signed=signed)


def block_matrix(b, cmode, field_mode=None):
    """The concrete representative matrix of one canonical block."""
    if field_mode is None:
        field_mode = field_mode_for(cmode)
    fm = field_mode
    check_block(b, cmode, fm)
    n = b.n
    if b.kind == SINGULAR_JORDAN:
        return jordan_block(n, 0, fm)
    if b.kind == SKEW_PAIR:
        return skew_sum(jordan_block(n, b.lam, fm), Matrix.identity(n, fm))
    if b.kind == SIGNED_ROOT:
        R = _root_rep(n, b.lam, fm, signed=b.eps is not None)
        return -R if b.eps == -1 else R
    g = MODE_GAUSSIAN if fm.exact else MODE_COMPLEX_FLOAT
    if b.kind == REAL_SKEW_PAIR:
        J = realify(jordan_block(n, g.promote(b.lam), g))
        return skew_sum(J, Matrix.identity(2 * n, fm))
    if b.kind == REAL_SIGNED_ROOT:
        from .canon import plus_realified_root
        R = plus_realified_root(n, g.promote(b.lam), fm)
        return -R if b.eps == -1 else R
    if b.kind == GF_TYPE_II:
        F = frobenius_block(b.chi)
        return skew_sum(F, Matrix.identity(F.rows, F.mode))
    # general-field type (iii)
    from .cosquare import toeplitz_root, q_eval
    F = frobenius_block(b.chi)
    R = toeplitz_root(F)
    if b.qform is not None:
        R = R * q_eval(b.qform, F)
    if b.eps == -1:
        R = -R
    return R


def block_sum_matrix(bs, field_mode=None):
    """Direct sum of the block matrices in canonical order."""
    if field_mode is None:
        field_mode = field_mode_for(bs.cmode)
    if not bs.blocks:
        return Matrix.zeros(0, 0, field_mode)
    return direct_sum(*[block_matrix(b, bs.cmode, field_mode)
                        for b in bs.blocks])
