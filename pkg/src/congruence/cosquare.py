"""Cosquares, dual polynomials, recurrent vectors and Toeplitz cosquare roots.

The central construction: for a nonsingular companion matrix F whose
characteristic polynomial chi equals its own dual, build a Toeplitz
matrix A with A = A* F, so that the cosquare A^{-*} A is exactly F.
"""

from fractions import Fraction

import sympy

from .scalar import (GaussianRational, GAUSSIAN, RATIONAL, IDENTITY,
                     rational, is_unimodular)
from .matrix import Matrix, Poly


class RootNotFound(ValueError):
    """No cosquare root exists for the requested matrix."""


def cosquare(A, mode=None):
    """A^{-*} A (the involution is the plain transpose in identity modes)."""
    if mode is None:
        mode = A.mode
    if not A.is_square():
        raise ValueError("cosquare needs a square matrix")
    return A.conj_transpose().inverse() * A


def poly_dual(f, mode=None):
    """Monic conjugate-reversal: the roots map to inverse-involutions."""
    if mode is None:
        mode = f.mode
    n = f.degree
    if f.is_zero() or mode.is_zero(f.coeff(0)):
        raise ValueError("dual needs a nonzero constant term")
    rev = [mode.involve(f.coeff(n - k)) for k in range(n + 1)]
    return Poly(rev, mode).monic()


def recurrent_extend(seed, f, add_left=0, add_right=0):
    """Extend a sequence in both directions by the linear recurrence of f.

    Window rule: if f = g0 x^m + g1 x^(m-1) + ... + gm, every m+1
    consecutive entries satisfy g0*a[l] + g1*a[l+1] + ... + gm*a[l+m] = 0,
    the earliest entry paired with the leading coefficient.
    """
    mode = f.mode
    m = f.degree
    if m == 0:
        raise ValueError("constant generators admit no recurrent vectors")
    if len(seed) < m:
        raise ValueError("seed shorter than the recurrence order")
    if mode.is_zero(f.coeff(0)):
        raise ValueError("generator needs a nonzero constant term")
    g = [f.coeff(m - j) for j in range(m + 1)]  # g[0] leading ... g[m] constant
    vals = [mode.promote(x) for x in seed]
    # any full window already inside the seed must hold
    for l in range(len(vals) - m):
        acc = mode.zero()
        for j in range(m + 1):
            acc = acc + g[j] * vals[l + j]
        if not mode.is_zero(acc):
            raise ValueError("seed is not recurrent for the generator")
    for _ in range(add_right):
        acc = mode.zero()
        w = vals[-m:]
        for j in range(m):
            acc = acc + g[j] * w[j]
        vals.append(-acc / g[m])
    for _ in range(add_left):
        acc = mode.zero()
        w = vals[:m]
        for j in range(m):
            acc = acc + g[j + 1] * w[j]
        vals.insert(0, -acc / g[0])
    return vals


class RecurrentVector:
    __slots__ = ("values", "generator", "offset")

    def __init__(self, values, generator, offset=0):
        self.values = list(values)
        self.generator = generator
        self.offset = offset  # index of values[0]

    def __getitem__(self, i):
        return self.values[i - self.offset]


def _to_sympy(f):
    x = sympy.Symbol("x")
    expr = 0
    for k in range(f.degree + 1):
        c = f.coeff(k)
        if isinstance(c, GaussianRational):
            sc = sympy.Rational(c.re) + sympy.Rational(c.im) * sympy.I
        else:
            sc = sympy.Rational(c)
        expr += sc * x ** k
    domain = "QQ_I" if f.mode.base == GAUSSIAN else "QQ"
    return sympy.Poly(expr, x, domain=domain)


def _prime_power(chi):
    """Return (p, s) with chi = p^s, p irreducible, or raise ValueError."""
    mode = chi.mode
    sp = _to_sympy(chi)
    _, factors = sp.factor_list()
    if len(factors) != 1:
        raise ValueError("characteristic polynomial is not a prime power")
    fac, s = factors[0]
    fac = fac.monic()
    x = sympy.Symbol("x")
    coeffs = []
    for k in range(fac.degree() + 1):
        c = sympy.expand(fac.as_expr().coeff(x, k))
        re, im = sympy.Rational(sympy.re(c)), sympy.Rational(sympy.im(c))
        if mode.base == GAUSSIAN:
            coeffs.append(GaussianRational(rational(int(re.p), int(re.q)),
                                           rational(int(im.p), int(im.q))))
        else:
            if im != 0:
                raise ValueError("factor leaves the base field")
            coeffs.append(rational(int(re.p), int(re.q)))
    return Poly(coeffs, mode), int(s)


def root_exists(Phi, mode=None):
    """Whether Phi has a cosquare root; returns (bool, reason)."""
    if mode is None:
        mode = Phi.mode
    from .matrix import char_poly
    chi = char_poly(Phi)
    if mode.is_zero(chi.coeff(0)):
        return False, "singular matrix"
    try:
        p, s = _prime_power(chi)
    except ValueError as e:
        return False, str(e)
    if p != poly_dual(p, mode):
        return False, "characteristic factor is not self-dual"
    n = Phi.rows
    if mode.involution == IDENTITY:
        bad = Poly([mode.promote((-1) ** (n + 1)), mode.one()], mode)
        if p == bad:
            return False, "excluded linear factor under the transpose involution"
    return True, "ok"


def root_exists_jordan(n, lam, mode):
    """Closed-form existence test for a single nonsingular Jordan block."""
    lam = mode.promote(lam)
    if mode.is_zero(lam):
        return False, "singular matrix"
    if mode.involution == IDENTITY:
        if mode.eq(lam, mode.promote((-1) ** (n + 1))):
            return True, "ok"
        return False, "eigenvalue is not (-1)^(n+1)"
    if is_unimodular(lam, mode):
        return True, "ok"
    return False, "eigenvalue is not unimodular"


def chi_of_frobenius(F):
    """Read the characteristic polynomial off a companion matrix."""
    mode = F.mode
    n = F.rows
    c = [-F.a[i][n - 1] for i in range(n)] + [mode.one()]
    return Poly(c, mode)


def _is_frobenius(F):
    if not F.is_square() or F.rows < 1:
        return False
    mode = F.mode
    n = F.rows
    for i in range(n):
        for j in range(n - 1):
            want = mode.one() if i == j + 1 else mode.zero()
            if not mode.eq(F.a[i][j], want):
                return False
    return True


def _root_seed_value(chi, mode):
    """The scalar seeding the Toeplitz entries, by parity case analysis."""
    n = chi.degree
    one = mode.one()
    if n % 2 == 0:
        # exception: chi = (x+c)^n with c^(n-1) = -1
        c = chi.coeff(n - 1) / mode.promote(n)
        linear = Poly([c, one], mode)
        if linear ** n == chi and mode.eq(c ** (n - 1), -one):
            return mode.i() - mode.involve(mode.i())  # e - conj(e) with e = i
        return one
    val = chi.eval(-one)
    if not mode.is_zero(val):
        return val
    # chi = (x+1)^n with n odd
    return mode.i() - mode.involve(mode.i())


def toeplitz_root(F, mode=None):
    """A Toeplitz matrix A with A = A* F and hence cosquare(A) = F."""
    if mode is None:
        mode = F.mode
    if not _is_frobenius(F):
        raise ValueError("expected a companion matrix")
    chi = chi_of_frobenius(F)
    n = chi.degree
    if mode.exact:
        ok, reason = root_exists(F, mode)
        if not ok:
            raise RootNotFound(reason)
    a = _root_seed_value(chi, mode)
    m = n // 2 if n % 2 == 0 else (n + 1) // 2
    seed = [a] + [mode.zero()] * (2 * m - 2) + [mode.involve(a)]
    if n == 1:
        vals = seed[:1]
    else:
        # seed occupies indices 1-m .. m; target is 1-n .. n-1
        vals = recurrent_extend(seed, chi, add_left=n - m, add_right=n - 1 - m)
    A = Matrix([[vals[(i - j) + (n - 1)] for j in range(n)] for i in range(n)],
               mode, promote=False)
    if A.conj_transpose() * F != A:
        raise RootNotFound("construction failed the defining identity")
    return A


def transport_root(R, S):
    """Move a cosquare root along a similarity of its cosquare: S* R S."""
    return S.conj_transpose() * R * S


def star_root_jordan(n, lam, mode):
    """A cosquare root of the Jordan block J_n(lam), via the companion form."""
    from .blocks import jordan_block, frobenius_block
    lam = mode.promote(lam)
    ok, reason = root_exists_jordan(n, lam, mode)
    if not ok:
        raise RootNotFound(reason)
    chi = Poly([-lam, mode.one()], mode) ** n
    F = frobenius_block(chi)
    R = toeplitz_root(F, mode)
    # Jordan chain of the companion matrix: columns (F - lam)^{n-k} e0
    N = F - Matrix.identity(n, mode).scale_left(lam)
    v = Matrix([[mode.one() if i == 0 else mode.zero()] for i in range(n)],
               mode, promote=False)
    cols = [v]
    for _ in range(n - 1):
        cols.append(N * cols[-1])
    cols.reverse()
    S = cols[0]
    for c in cols[1:]:
        S = S.hstack(c)
    RJ = transport_root(R, S)
    if not mode.exact:
        return RJ
    if cosquare(RJ) != jordan_block(n, lam, mode):
        raise RootNotFound("transport failed the cosquare identity")
    return RJ


class QForm:
    """q(x) = a_r x^r + ... + a_1 x + a_0 + conj(a_1) x^-1 + ... + conj(a_r) x^-r."""

    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs, mode):
        self.coeffs = [mode.promote(c) for c in coeffs]
        self.mode = mode
        if not self.coeffs:
            raise ValueError("empty form")
        a0 = self.coeffs[0]
        if not mode.eq(a0, mode.involve(a0)):
            raise ValueError("constant term must be fixed by the involution")
        if all(mode.is_zero(c) for c in self.coeffs):
            raise ValueError("identically zero form")

    @property
    def r(self):
        return len(self.coeffs) - 1


def q_eval(q, Phi):
    """Evaluate a QForm on a nonsingular matrix, negative powers via inverse."""
    mode = Phi.mode
    n = Phi.rows
    inv = Phi.inverse()
    out = Matrix.identity(n, mode).scale_left(q.coeffs[0])
    P = Matrix.identity(n, mode)
    Pi = Matrix.identity(n, mode)
    for i in range(1, q.r + 1):
        P = P * Phi
        Pi = Pi * inv
        ai = q.coeffs[i]
        out = out + P.scale_left(ai) + Pi.scale_left(mode.involve(ai))
    return out


def type_iii_matrix(Phi, q):
    """toeplitz_root(Phi) * q(Phi)."""
    return toeplitz_root(Phi) * q_eval(q, Phi)
