"""Scalar, vector, polynomial and quaternion arithmetic.

Everything in this module is generic over the coefficient type: plain ints
and Fractions stay exact (used by the golden-basis tests), floats and complex
numbers take the fast path used by the optimization pipeline.  Evaluation
routines only use ``+``/``*``/``**`` so numpy arrays pass through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

EPS = 1e-12

# ---------------------------------------------------------------------------
# scalars


def is_exact(x) -> bool:
    """True when x belongs to the exact (rational) coefficient domain."""
    return isinstance(x, (int, Fraction))


def exact_div(c, d):
    """c / d keeping Fractions exact; d is a nonzero integer."""
    if is_exact(c):
        return Fraction(c, d)
    return c / d


def to_float_scalar(x):
    """Collapse an exact or complex scalar onto float/complex."""
    if isinstance(x, complex):
        return x
    return float(x)


def near(a, b, tol=EPS):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# 3-vectors as plain tuples


def vec3(x, y, z):
    return (x, y, z)


def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def vdot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def vcross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def vnorm(a) -> float:
    return float(abs(complex(a[0])) ** 2 + abs(complex(a[1])) ** 2 + abs(complex(a[2])) ** 2) ** 0.5


def vdet3(a, b, c):
    """Determinant of the 3x3 matrix with columns a, b, c."""
    return vdot(a, vcross(b, c))


def viszero(a, tol=EPS):
    return all(abs(complex(x)) <= tol for x in a)


ZERO3 = (0, 0, 0)


# ---------------------------------------------------------------------------
# scalar polynomials, ascending coefficients


def _trim(coeffs):
    coeffs = list(coeffs)
    if any(isinstance(c, (float, complex)) for c in coeffs):
        mag = max((abs(c) for c in coeffs), default=0.0)
        cut = EPS * mag
        while coeffs and abs(coeffs[-1]) <= cut:
            coeffs.pop()
    else:
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial, coefficients ascending by exponent."""

    coeffs: tuple

    @staticmethod
    def of(*coeffs) -> "Polynomial":
        return Polynomial(_trim(coeffs))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def monomial(k: int, c=1) -> "Polynomial":
        return Polynomial(_trim((0,) * k + (c,)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        if not self.coeffs:
            return 0 * t
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Polynomial(_trim(out))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(_trim(out))

    def scale(self, s) -> "Polynomial":
        return Polynomial(_trim(c * s for c in self.coeffs))

    def deriv(self) -> "Polynomial":
        return Polynomial(_trim(k * c for k, c in enumerate(self.coeffs) if k))

    def integ(self) -> "Polynomial":
        """Antiderivative with zero constant term (exact when coefficients are)."""
        return Polynomial(_trim([0] + [exact_div(c, k + 1) for k, c in enumerate(self.coeffs)]))

    def to_float(self) -> "Polynomial":
        return Polynomial(_trim(to_float_scalar(c) for c in self.coeffs))


def poly_divmod(num: Polynomial, den: Polynomial):
    """Long division num = q*den + r.  Generic over scalar type."""
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(num.coeffs)
    d = list(den.coeffs)
    dn = len(d) - 1
    lead = d[-1]
    q = [0] * max(0, len(r) - dn)
    for k in range(len(r) - 1, dn - 1, -1):
        c = r[k]
        if is_exact(c) and is_exact(lead):
            factor = Fraction(c) / Fraction(lead)
        else:
            factor = c / lead
        q[k - dn] = factor
        for i in range(dn + 1):
            r[k - dn + i] = r[k - dn + i] - factor * d[i]
    return Polynomial(_trim(q)), Polynomial(_trim(r))


# ---------------------------------------------------------------------------
# vector-valued polynomials


@dataclass(frozen=True)
class Vec3Poly:
    """Polynomial with 3-vector coefficients, ascending by exponent."""

    coeffs: tuple  # tuple of Vec3

    @staticmethod
    def of(*coeffs) -> "Vec3Poly":
        return Vec3Poly(_vtrim(coeffs))

    @staticmethod
    def from_components(px: Polynomial, py: Polynomial, pz: Polynomial) -> "Vec3Poly":
        n = max(len(px.coeffs), len(py.coeffs), len(pz.coeffs))

        def at(p, k):
            return p.coeffs[k] if k < len(p.coeffs) else 0

        return Vec3Poly(_vtrim((at(px, k), at(py, k), at(pz, k)) for k in range(n)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def component(self, i: int) -> Polynomial:
        return Polynomial(_trim(c[i] for c in self.coeffs))

    def __call__(self, t):
        if not self.coeffs:
            return (0 * t, 0 * t, 0 * t)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = (acc[0] * t + c[0], acc[1] * t + c[1], acc[2] * t + c[2])
        return acc

    def __add__(self, other: "Vec3Poly") -> "Vec3Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = vadd(out[k], c)
        return Vec3Poly(_vtrim(out))

    def __sub__(self, other: "Vec3Poly") -> "Vec3Poly":
        return self + other.scale(-1)

    def scale(self, s) -> "Vec3Poly":
        return Vec3Poly(_vtrim(vscale(c, s) for c in self.coeffs))

    def mul_poly(self, p: Polynomial) -> "Vec3Poly":
        if self.is_zero() or p.is_zero():
            return Vec3Poly(())
        out = [ZERO3] * (len(self.coeffs) + len(p.coeffs) - 1)
        for i, v in enumerate(self.coeffs):
            for j, s in enumerate(p.coeffs):
                out[i + j] = vadd(out[i + j], vscale(v, s))
        return Vec3Poly(_vtrim(out))

    def dot(self, other: "Vec3Poly") -> Polynomial:
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + vdot(a, b)
        return Polynomial(_trim(out))

    def deriv(self) -> "Vec3Poly":
        return Vec3Poly(_vtrim(vscale(c, k) for k, c in enumerate(self.coeffs) if k))

    def integ(self) -> "Vec3Poly":
        out = [ZERO3]
        for k, c in enumerate(self.coeffs):
            out.append(tuple(exact_div(x, k + 1) for x in c))
        return Vec3Poly(_vtrim(out))

    def to_float(self) -> "Vec3Poly":
        return Vec3Poly(_vtrim(tuple(to_float_scalar(x) for x in c) for c in self.coeffs))


def _vtrim(coeffs):
    coeffs = list(coeffs)
    flat = [x for c in coeffs for x in c]
    if any(isinstance(x, (float, complex)) for x in flat):
        mag = max((abs(x) for x in flat), default=0.0)
        cut = EPS * mag
        while coeffs and all(abs(x) <= cut for x in coeffs[-1]):
            coeffs.pop()
    else:
        while coeffs and all(x == 0 for x in coeffs[-1]):
            coeffs.pop()
    return tuple(coeffs)


def taylor_shift(poly: Vec3Poly, beta) -> Vec3Poly:
    """Re-expand poly(t) in powers of (t - beta).

    Horner-style synthetic division; exact in rational arithmetic, O(n^2)
    scalar operations per component.  The result satisfies
    ``poly(t) == sum_j out[j] * (t - beta)**j``.
    """
    n = len(poly.coeffs)
    if n == 0:
        return poly
    comps = []
    for i in range(3):
        c = [coeff[i] for coeff in poly.coeffs]
        for k in range(n):
            for idx in range(n - 2, k - 1, -1):
                c[idx] = c[idx] + beta * c[idx + 1]
        comps.append(c)
    return Vec3Poly(tuple((comps[0][k], comps[1][k], comps[2][k]) for k in range(n)))


def taylor_shift_scalar(poly: Polynomial, beta) -> Polynomial:
    v = taylor_shift(Vec3Poly(tuple((c, 0, 0) for c in poly.coeffs)), beta)
    return Polynomial(tuple(c[0] for c in v.coeffs))


# ---------------------------------------------------------------------------
# Bernstein form


def to_bernstein(p: Polynomial, m: int):
    """Coefficients of p in the degree-m Bernstein basis on [0, 1].

    b_j = sum_{k<=j} C(j,k)/C(m,k) * a_k  where a_k are the monomial
    coefficients.  Exact for exact input.  Raises when m < deg p.
    """
    if m < p.degree:
        raise ValueError("Bernstein degree too low: m=%d < deg=%d" % (m, p.degree))
    a = p.coeffs
    exact = all(is_exact(c) for c in a)
    out = []
    for j in range(m + 1):
        s = Fraction(0) if exact else 0.0
        for k in range(min(j, len(a) - 1) + 1):
            if exact:
                s += a[k] * Fraction(comb(j, k), comb(m, k))
            else:
                s += a[k] * (comb(j, k) / comb(m, k))
        out.append(s)
    return out


def bernstein_value(bcoeffs, m: int, t):
    """Evaluate sum_j b_j B^m_j(t) (de Casteljau-free direct form)."""
    s = 0 * t
    for j, b in enumerate(bcoeffs):
        s = s + b * comb(m, j) * t**j * (1 - t) ** (m - j)
    return s


# ---------------------------------------------------------------------------
# quaternions


@dataclass(frozen=True)
class Quaternion:
    w: object = 0
    x: object = 0
    y: object = 0
    z: object = 0

    @staticmethod
    def one() -> "Quaternion":
        return Quaternion(1, 0, 0, 0)

    @staticmethod
    def i() -> "Quaternion":
        return Quaternion(0, 1, 0, 0)

    @staticmethod
    def j() -> "Quaternion":
        return Quaternion(0, 0, 1, 0)

    @staticmethod
    def k() -> "Quaternion":
        return Quaternion(0, 0, 0, 1)

    @staticmethod
    def from_vector(v) -> "Quaternion":
        return Quaternion(0, v[0], v[1], v[2])

    def __add__(self, o: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        # Hamilton product
        return Quaternion(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )

    def scale(self, s) -> "Quaternion":
        return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def vec(self):
        return (self.x, self.y, self.z)

    def is_zero(self, tol=EPS) -> bool:
        return all(abs(float(c)) <= tol for c in (self.w, self.x, self.y, self.z))


@dataclass(frozen=True)
class QuaternionPolynomial:
    """Polynomial with quaternion coefficients, ascending by exponent."""

    coeffs: tuple  # tuple of Quaternion

    @staticmethod
    def of(*coeffs) -> "QuaternionPolynomial":
        return QuaternionPolynomial(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self, tol=EPS) -> bool:
        return all(q.is_zero(tol) for q in self.coeffs)

    def __mul__(self, o: "QuaternionPolynomial") -> "QuaternionPolynomial":
        if not self.coeffs or not o.coeffs:
            return QuaternionPolynomial(())
        out = [Quaternion()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for a, qa in enumerate(self.coeffs):
            for b, qb in enumerate(o.coeffs):
                out[a + b] = out[a + b] + qa * qb
        return QuaternionPolynomial(tuple(out))

    def conjugate(self) -> "QuaternionPolynomial":
        return QuaternionPolynomial(tuple(q.conjugate() for q in self.coeffs))

    def __call__(self, t) -> Quaternion:
        if not self.coeffs:
            return Quaternion()
        acc = self.coeffs[-1]
        for q in reversed(self.coeffs[:-1]):
            acc = acc.scale(t) + q
        return acc


# ---------------------------------------------------------------------------
# small dense linear solves, generic scalar type


def solve_linear(rows, rhs):
    """Solve the square system rows * x = rhs by Gaussian elimination.

    rows is a list of row-lists; scalars may be exact or floating (partial
    pivoting by magnitude).  Raises ValueError on a (numerically) singular
    matrix.
    """
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(complex(a[r][col])))
        if abs(complex(a[piv][col])) == 0:
            raise ValueError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            if is_exact(a[r][col]) and is_exact(pv):
                f = Fraction(a[r][col]) / Fraction(pv)
            else:
                f = a[r][col] / pv
            for c in range(col, n + 1):
                a[r][c] = a[r][c] - f * a[col][c]
    x = [0] * n
    for r in range(n - 1, -1, -1):
        s = a[r][n]
        for c in range(r + 1, n):
            s = s - a[r][c] * x[c]
        pv = a[r][r]
        if is_exact(s) and is_exact(pv):
            x[r] = Fraction(s) / Fraction(pv)
        else:
            x[r] = s / pv
    return x
