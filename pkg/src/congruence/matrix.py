"""Dense matrices and univariate polynomials over a FieldMode.

Everything here is pure: operations return new objects.  Elimination is
ordinary Gaussian elimination over the exact field (entries stay exact
because the bases are fields), with left-multiplication row operations so
the same code is valid over the quaternions.
"""

from fractions import Fraction

from .scalar import (FieldMode, GaussianRational, Quaternion, GF2,
                     RATIONAL, GAUSSIAN, QUATERNION, REAL_FLOAT,
                     COMPLEX_FLOAT, GF2_BASE, IDENTITY,
                     MODE_RATIONAL, MODE_GAUSSIAN, MODE_GAUSSIAN_ID,
                     MODE_REAL_FLOAT, MODE_COMPLEX_FLOAT,
                     scalar_to_json, scalar_from_json)


class Matrix:
    __slots__ = ("a", "mode", "_shape")

    def __init__(self, rows, mode, promote=True, shape=None):
        if promote:
            rows = [[mode.promote(e) for e in row] for row in rows]
        ncols = {len(row) for row in rows}
        if len(ncols) > 1:
            raise ValueError("ragged rows")
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        self.a = rows
        self.mode = mode
        self._shape = shape

    # -- construction -------------------------------------------------------

    @staticmethod
    def zeros(m, n, mode):
        z = mode.zero()
        return Matrix([[z] * n for _ in range(m)], mode, promote=False,
                      shape=(m, n))

    @staticmethod
    def identity(n, mode):
        z, o = mode.zero(), mode.one()
        return Matrix([[o if i == j else z for j in range(n)]
                       for i in range(n)], mode, promote=False)

    @staticmethod
    def diagonal(entries, mode):
        n = len(entries)
        z = mode.zero()
        rows = [[z] * n for _ in range(n)]
        for i, e in enumerate(entries):
            rows[i][i] = mode.promote(e)
        return Matrix(rows, mode, promote=False)

    def copy(self):
        return Matrix([row[:] for row in self.a], self.mode, promote=False,
                      shape=self._shape)

    # -- shape --------------------------------------------------------------

    @property
    def rows(self):
        return self._shape[0]

    @property
    def cols(self):
        return self._shape[1]

    def is_square(self):
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        self._check_same_shape(other)
        return Matrix([[x + y for x, y in zip(r1, r2)]
                       for r1, r2 in zip(self.a, other.a)], self.mode,
                      promote=False, shape=self._shape)

    def __sub__(self, other):
        self._check_same_shape(other)
        return Matrix([[x - y for x, y in zip(r1, r2)]
                       for r1, r2 in zip(self.a, other.a)], self.mode,
                      promote=False, shape=self._shape)

    def __neg__(self):
        return Matrix([[-x for x in row] for row in self.a], self.mode,
                      promote=False, shape=self._shape)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch %dx%d * %dx%d"
                                 % (self.rows, self.cols, other.rows, other.cols))
            z = self.mode.zero()
            b = other.a
            out = []
            for row in self.a:
                new = []
                for j in range(other.cols):
                    s = z
                    for k, x in enumerate(row):
                        s = s + x * b[k][j]
                    new.append(s)
                out.append(new)
            return Matrix(out, self.mode, promote=False,
                          shape=(self.rows, other.cols))
        return self.scale_left(other)

    def __rmul__(self, other):
        return self.scale_left(other)

    def scale_left(self, c):
        c = self.mode.promote(c)
        return Matrix([[c * x for x in row] for row in self.a], self.mode,
                      promote=False, shape=self._shape)

    def scale_right(self, c):
        c = self.mode.promote(c)
        return Matrix([[x * c for x in row] for row in self.a], self.mode,
                      promote=False, shape=self._shape)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        eq = self.mode.eq
        return all(eq(x, y) for r1, r2 in zip(self.a, other.a)
                   for x, y in zip(r1, r2))

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __repr__(self):
        return "Matrix(%d x %d over %s)" % (self.rows, self.cols, self.mode.base)

    def __str__(self):
        return "\n".join(" ".join(repr(e) for e in row) for row in self.a)

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    # -- transposes ---------------------------------------------------------

    def transpose(self):
        return Matrix([[self.a[i][j] for i in range(self.rows)]
                       for j in range(self.cols)], self.mode, promote=False,
                      shape=(self.cols, self.rows))

    def conj_transpose(self):
        inv = self.mode.involve
        return Matrix([[inv(self.a[i][j]) for i in range(self.rows)]
                       for j in range(self.cols)], self.mode, promote=False,
                      shape=(self.cols, self.rows))

    def conj(self):
        inv = self.mode.involve
        return Matrix([[inv(e) for e in row] for row in self.a], self.mode,
                      promote=False, shape=self._shape)

    # -- elimination --------------------------------------------------------

    def _echelon(self, collect_transform=False):
        """Row echelon form via left-multiplication row operations.

        Returns (R, E, pivots) with R = E * self and pivots the list of
        pivot column indices.
        """
        mode = self.mode
        m, n = self.rows, self.cols
        R = [row[:] for row in self.a]
        E = Matrix.identity(m, mode).a if collect_transform else None
        if mode.exact:
            negligible = mode.is_zero
        else:
            # float zero tests are relative to the matrix scale
            scale = max([mode.abs_key(x) for row in R for x in row] + [1.0])
            thr = mode.tolerance * scale
            negligible = lambda v: mode.abs_key(v) <= thr
        pivots = []
        r = 0
        for c in range(n):
            if r == m:
                break
            # pick a pivot row
            best, key = None, None
            for i in range(r, m):
                if not negligible(R[i][c]):
                    k = mode.abs_key(R[i][c])
                    if mode.exact:
                        best = i
                        break
                    if best is None or k > key:
                        best, key = i, k
            if best is None:
                continue
            if best != r:
                R[r], R[best] = R[best], R[r]
                if E is not None:
                    E[r], E[best] = E[best], E[r]
            pinv = mode.inv(R[r][c])
            for i in range(r + 1, m):
                if mode.is_zero(R[i][c]):
                    continue
                f = R[i][c] * pinv
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
                R[i][c] = mode.zero()
                if E is not None:
                    E[i] = [x - f * y for x, y in zip(E[i], E[r])]
            pivots.append(c)
            r += 1
        Rm = Matrix(R, mode, promote=False)
        Em = Matrix(E, mode, promote=False) if E is not None else None
        return Rm, Em, pivots

    def rank(self):
        return len(self._echelon()[2])

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a nonsquare matrix")
        if self.mode.base == QUATERNION:
            raise ValueError("no determinant over the quaternions here")
        n = self.rows
        mode = self.mode
        R = [row[:] for row in self.a]
        sign = 1
        d = mode.one()
        for c in range(n):
            best = None
            for i in range(c, n):
                if not mode.is_zero(R[i][c]):
                    if mode.exact:
                        best = i
                        break
                    if best is None or mode.abs_key(R[i][c]) > mode.abs_key(R[best][c]):
                        best = i
            if best is None:
                return mode.zero()
            if best != c:
                R[c], R[best] = R[best], R[c]
                sign = -sign
            piv = R[c][c]
            d = d * piv
            pinv = mode.inv(piv)
            for i in range(c + 1, n):
                if mode.is_zero(R[i][c]):
                    continue
                f = R[i][c] * pinv
                R[i] = [x - f * y for x, y in zip(R[i], R[c])]
        return d if sign == 1 else -d

    def inverse(self):
        if not self.is_square():
            raise ValueError("inverse of a nonsquare matrix")
        mode = self.mode
        n = self.rows
        R, E, pivots = self._echelon(collect_transform=True)
        if len(pivots) != n:
            raise ValueError("singular matrix")
        # back substitution
        R = [row[:] for row in R.a]
        E = [row[:] for row in E.a]
        for c in range(n - 1, -1, -1):
            pinv = mode.inv(R[c][c])
            R[c] = [pinv * x for x in R[c]]
            E[c] = [pinv * x for x in E[c]]
            for i in range(c):
                f = R[i][c]
                if mode.is_zero(f):
                    continue
                R[i] = [x - f * y for x, y in zip(R[i], R[c])]
                E[i] = [x - f * y for x, y in zip(E[i], E[c])]
        return Matrix(E, mode, promote=False)

    def right_kernel(self):
        """Columns spanning {x : A x = 0}."""
        mode = self.mode
        n = self.cols
        R, _, pivots = self._echelon()
        R = R.a
        pivset = set(pivots)
        free = [c for c in range(n) if c not in pivset]
        basis = []
        for fc in free:
            x = [mode.zero()] * n
            x[fc] = mode.one()
            # solve for pivot variables bottom-up
            for r in range(len(pivots) - 1, -1, -1):
                pc = pivots[r]
                s = mode.zero()
                for c in range(pc + 1, n):
                    if not mode.is_zero(x[c]):
                        s = s + R[r][c] * x[c]
                x[pc] = -(mode.inv(R[r][pc]) * s)
            basis.append(x)
        out = Matrix.zeros(n, len(basis), mode)
        for j, x in enumerate(basis):
            for i in range(n):
                out.a[i][j] = x[i]
        return out

    def solve(self, B):
        """X with self * X = B (self square nonsingular)."""
        return self.inverse() * B

    # -- block structure ----------------------------------------------------

    def submatrix(self, rows, cols):
        return Matrix([[self.a[i][j] for j in cols] for i in rows],
                      self.mode, promote=False,
                      shape=(len(rows), len(cols)))

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix([r1 + r2 for r1, r2 in zip(self.a, other.a)],
                      self.mode, promote=False,
                      shape=(self.rows, self.cols + other.cols))

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return Matrix(self.a + other.a, self.mode, promote=False,
                      shape=(self.rows + other.rows, self.cols))

    # -- scalar-type changes -------------------------------------------------

    def cast(self, mode):
        return Matrix(self.a, mode)

    def to_json(self):
        return {
            "mode": {"base": self.mode.base,
                     "involution": self.mode.involution,
                     "tolerance": self.mode.tolerance},
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[scalar_to_json(e) for e in row] for row in self.a],
        }

    @staticmethod
    def from_json(data, mode=None):
        if mode is None:
            m = data["mode"]
            tol = m.get("tolerance") or None
            mode = FieldMode(m["base"], m["involution"], tol)
        rows = [[scalar_from_json(e, mode) for e in row]
                for row in data["entries"]]
        if not rows:
            rows = []
        mat = Matrix(rows or [[]][:0], mode, promote=False)
        if data["rows"] == 0 or data["cols"] == 0:
            return Matrix.zeros(data["rows"], data["cols"], mode)
        return mat


def direct_sum(*mats):
    mats = list(mats)
    if not mats:
        raise ValueError("empty direct sum")
    mode = mats[0].mode
    m = sum(x.rows for x in mats)
    n = sum(x.cols for x in mats)
    out = Matrix.zeros(m, n, mode)
    i0 = j0 = 0
    for x in mats:
        for i in range(x.rows):
            for j in range(x.cols):
                out.a[i0 + i][j0 + j] = x.a[i][j]
        i0 += x.rows
        j0 += x.cols
    return out


def skew_sum(A, B):
    """[A \\ B] = [[0, B], [A, 0]] (B upper right, A lower left)."""
    mode = A.mode
    m = B.rows + A.rows
    n = A.cols + B.cols
    out = Matrix.zeros(m, n, mode)
    for i in range(B.rows):
        for j in range(B.cols):
            out.a[i][A.cols + j] = B.a[i][j]
    for i in range(A.rows):
        for j in range(A.cols):
            out.a[B.rows + i][j] = A.a[i][j]
    return out


def realify(M):
    """Replace each entry a+bi by the 2x2 block [[a, -b], [b, a]]."""
    mode = M.mode
    if mode.base == GAUSSIAN:
        new_mode = MODE_RATIONAL
        parts = lambda e: (e.re, e.im)
    elif mode.base == COMPLEX_FLOAT:
        new_mode = MODE_REAL_FLOAT
        parts = lambda e: (e.real, e.imag)
    else:
        raise ValueError("realification needs a complex-type base")
    out = Matrix.zeros(2 * M.rows, 2 * M.cols, new_mode)
    for i in range(M.rows):
        for j in range(M.cols):
            a, b = parts(M.a[i][j])
            out.a[2 * i][2 * j] = a
            out.a[2 * i][2 * j + 1] = -b
            out.a[2 * i + 1][2 * j] = b
            out.a[2 * i + 1][2 * j + 1] = a
    return out


def complexify(M):
    """View a rational or real-float matrix over the complex extension."""
    if M.mode.base == RATIONAL:
        return M.cast(MODE_GAUSSIAN)
    if M.mode.base == REAL_FLOAT:
        return M.cast(FieldMode(COMPLEX_FLOAT, "conjugation", M.mode.tolerance))
    if M.mode.base in (GAUSSIAN, COMPLEX_FLOAT):
        return M
    raise ValueError("cannot complexify base %r" % M.mode.base)


class Poly:
    """Univariate polynomial; coefficient list indexed by power."""

    __slots__ = ("c", "mode")

    def __init__(self, coeffs, mode, promote=True):
        if promote:
            coeffs = [mode.promote(x) for x in coeffs]
        while coeffs and mode.is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        self.c = coeffs
        self.mode = mode

    @staticmethod
    def x(mode):
        return Poly([0, 1], mode)

    @staticmethod
    def constant(v, mode):
        return Poly([v], mode)

    @property
    def degree(self):
        return len(self.c) - 1 if self.c else -1

    def is_zero(self):
        return not self.c

    def coeff(self, k):
        if 0 <= k < len(self.c):
            return self.c[k]
        return self.mode.zero()

    def leading(self):
        if not self.c:
            raise ValueError("zero polynomial")
        return self.c[-1]

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.c), len(other.c))
        return Poly([self.coeff(k) + other.coeff(k) for k in range(n)],
                    self.mode, promote=False)

    def __sub__(self, other):
        other = self._coerce(other)
        n = max(len(self.c), len(other.c))
        return Poly([self.coeff(k) - other.coeff(k) for k in range(n)],
                    self.mode, promote=False)

    def __neg__(self):
        return Poly([-x for x in self.c], self.mode, promote=False)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly([], self.mode, promote=False)
        out = [self.mode.zero()] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            for j, y in enumerate(other.c):
                out[i + j] = out[i + j] + x * y
        return Poly(out, self.mode, promote=False)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, k):
        out = Poly([1], self.mode)
        for _ in range(k):
            out = out * self
        return out

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly([other], self.mode)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.degree != other.degree:
            return False
        return all(self.mode.eq(x, y) for x, y in zip(self.c, other.c))

    def __hash__(self):
        return hash(self.degree)

    def monic(self):
        if self.is_zero():
            raise ValueError("zero polynomial")
        lead = self.leading()
        if self.mode.eq(lead, self.mode.one()):
            return self
        linv = self.mode.inv(lead)
        return Poly([linv * x for x in self.c], self.mode, promote=False)

    def bar(self):
        """Apply the involution to every coefficient."""
        inv = self.mode.involve
        return Poly([inv(x) for x in self.c], self.mode, promote=False)

    def eval(self, v):
        v = self.mode.promote(v)
        acc = self.mode.zero()
        for x in reversed(self.c):
            acc = acc * v + x
        return acc

    def eval_matrix(self, A):
        n = A.rows
        acc = Matrix.zeros(n, n, A.mode)
        for x in reversed(self.c):
            acc = acc * A + x * Matrix.identity(n, A.mode)
        return acc

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        mode = self.mode
        rem = self.c[:]
        d = other.degree
        linv = mode.inv(other.leading())
        q = [mode.zero()] * max(0, len(rem) - d)
        while len(rem) > d and rem:
            # strip exact zero leads
            if mode.is_zero(rem[-1]):
                rem.pop()
                continue
            k = len(rem) - 1 - d
            f = rem[-1] * linv
            q[k] = f
            for i in range(d + 1):
                rem[k + i] = rem[k + i] - f * other.c[i]
            rem.pop()
        return (Poly(q, mode, promote=False), Poly(rem, mode, promote=False))

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            x = self.coeff(k)
            if self.mode.is_zero(x):
                continue
            if k == 0:
                terms.append(repr(x))
            elif k == 1:
                terms.append("%s*x" % repr(x))
            else:
                terms.append("%s*x^%d" % (repr(x), k))
        return " + ".join(terms)

    __repr__ = __str__


def char_poly(A):
    """Monic characteristic polynomial (Faddeev-LeVerrier)."""
    if not A.is_square():
        raise ValueError("characteristic polynomial of a nonsquare matrix")
    mode = A.mode
    if mode.base == QUATERNION:
        raise ValueError("no characteristic polynomial over the quaternions")
    n = A.rows
    if n == 0:
        return Poly([1], mode)
    one = Matrix.identity(n, mode)
    coeffs = [mode.zero()] * (n + 1)
    coeffs[n] = mode.one()
    M = A.copy()
    c = mode.zero()
    for k in range(1, n + 1):
        if k > 1:
            M = A * (M + c * one)
        tr = mode.zero()
        for i in range(n):
            tr = tr + M.a[i][i]
        c = -(tr / mode.promote(k)) if not isinstance(tr, Quaternion) else None
        if c is None:
            raise ValueError("quaternion trace division")
        coeffs[n - k] = c
    return Poly(coeffs, mode, promote=False)
