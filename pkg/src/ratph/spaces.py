"""Vector spaces of rational curves sharing a prescribed tangent field.

Every element is a curve r with hodograph r'(t) = lambda(t) F(t) for a fixed
spatial polynomial field F of degree n.  Around a chosen base point beta the
speed function lambda is expanded as a Laurent series; requiring a vanishing
(t-beta)^{-1} coefficient in lambda*F (so that term-by-term integration gives
a rational curve) produces three flavours of generators:

* polynomial:   lambda = (n+l) t^(l-1), curve = integral of lambda*F,
* regular:      lambda = (t-beta)^r with r <= -n-2 (no residue condition),
* non-regular:  lambda = sum_{j=-n-1}^{-1} lambda_j (t-beta)^j constrained by
                lambda_{-1} f_0 + lambda_{-2} f_1 + ... + lambda_{-n-1} f_n = 0
                where f_j are the Taylor coefficients of F at beta.  The
                constraint matrix has rank 3 for spatial fields, leaving an
                (n-2)-dimensional solution set per base point.

Complex base points come in conjugate pairs that are merged into pairs of
real elements (real and imaginary parts).  Constant curves are added freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    EPS,
    Polynomial,
    Vec3Poly,
    exact_div,
    is_exact,
    solve_linear,
    taylor_shift,
    to_float_scalar,
    vadd,
    vdet3,
    vnorm,
    vscale,
    ZERO3,
)
from .hodograph import TangentField

TRIPLET_TOL = 1e-9
RESIDUE_TOL = 1e-10


class SpaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# speed functions and basis elements


@dataclass(frozen=True)
class SpeedFunction:
    """lambda(t) = poly(t) + sum over poles of sum_j c_j (t - beta)^j, j < 0."""

    poles: tuple = ()  # tuple of (beta, ((j, coeff), ...)) with j < 0
    poly: Polynomial = Polynomial(())

    def __call__(self, t):
        acc = self.poly(t)
        for beta, terms in self.poles:
            u = t - beta
            for j, c in terms:
                acc = acc + c * u**j
        return acc

    def pole_order(self, beta) -> int:
        for b, terms in self.poles:
            if abs(complex(b) - complex(beta)) <= 1e-9 * (1 + abs(complex(beta))):
                return -min(j for j, _ in terms) if terms else 0
        return 0

    def is_zero(self) -> bool:
        return self.poly.is_zero() and not any(terms for _, terms in self.poles)


def _spart(x, part):
    if part == "re":
        return x.real
    if part == "im":
        return x.imag
    return x


def _vpart(v, part):
    if part is None:
        return v
    return (_spart(v[0], part), _spart(v[1], part), _spart(v[2], part))


@dataclass(frozen=True)
class BasisElement:
    """One generator: a curve plus the speed function lambda with r' = lambda F.

    ``part`` marks generators obtained from a conjugate pair of complex base
    points: the stored data is the series at the upper-half-plane base and the
    element evaluates to its real or imaginary part (valid for real t).
    """

    kind: str  # constant | polynomial | regular | nonregular | external
    speed: SpeedFunction
    curve_constant: tuple = ZERO3
    curve_poly: Vec3Poly = Vec3Poly(())
    curve_terms: tuple = ()  # Laurent groups: ((beta, ((j, Vec3), ...)), ...)
    part: Optional[str] = None
    label: str = ""

    def _guard(self, t):
        if isinstance(t, (int, float, Fraction)):
            for beta, _ in self.curve_terms:
                b = complex(beta)
                if abs(b.imag) <= EPS and abs(b.real - float(t)) <= EPS:
                    raise SpaceError("evaluation at pole t=%s" % (t,))

    def value(self, t):
        """Curve point at parameter t (componentwise; numpy arrays pass through)."""
        self._guard(t)
        v = vadd(self.curve_constant, self.curve_poly(t))
        for beta, terms in self.curve_terms:
            u = t - beta
            for j, c in terms:
                v = vadd(v, vscale(c, u**j))
        return _vpart(v, self.part)

    def velocity(self, t):
        """Analytic derivative of value."""
        self._guard(t)
        v = self.curve_poly.deriv()(t)
        for beta, terms in self.curve_terms:
            u = t - beta
            for j, c in terms:
                v = vadd(v, vscale(c, j * u ** (j - 1)))
        return _vpart(v, self.part)

    def speed_value(self, t):
        self._guard(t)
        return _spart(self.speed(t), self.part)

    def max_positive_exponent(self) -> int:
        top = self.curve_poly.degree
        for _, terms in self.curve_terms:
            for j, _ in terms:
                top = max(top, j)
        return top

    def to_float(self) -> "BasisElement":
        return BasisElement(
            kind=self.kind,
            speed=SpeedFunction(
                poles=tuple(
                    (_cfloat(b), tuple((j, _cfloat(c)) for j, c in terms))
                    for b, terms in self.speed.poles
                ),
                poly=self.speed.poly.to_float(),
            ),
            curve_constant=tuple(to_float_scalar(x) for x in self.curve_constant),
            curve_poly=self.curve_poly.to_float(),
            curve_terms=tuple(
                (_cfloat(b), tuple((j, tuple(to_float_scalar(x) for x in c)) for j, c in terms))
                for b, terms in self.curve_terms
            ),
            part=self.part,
            label=self.label,
        )


def _cfloat(x):
    c = complex(x)
    return c.real if c.imag == 0 else c


def evaluate(element: BasisElement, t):
    return element.value(t)


def derivative(element: BasisElement, t):
    return element.velocity(t)


def scale_element(e: BasisElement, s) -> BasisElement:
    return replace(
        e,
        speed=SpeedFunction(
            poles=tuple((b, tuple((j, c * s) for j, c in terms)) for b, terms in e.speed.poles),
            poly=e.speed.poly.scale(s),
        ),
        curve_constant=vscale(e.curve_constant, s),
        curve_poly=e.curve_poly.scale(s),
        curve_terms=tuple(
            (b, tuple((j, vscale(c, s)) for j, c in terms)) for b, terms in e.curve_terms
        ),
    )


def combine_elements(elements, coeffs, kind: str = "combined", label: str = "") -> BasisElement:
    """Linear combination sum_k coeffs[k] * elements[k] as one element.

    Arithmetic is generic: exact coefficients on exact elements stay exact.
    Laurent groups at equal base points merge; terms that cancel to zero are
    dropped.  Conjugate-pair parts cannot be combined (their stored data is
    the upper-half-plane series, not the evaluated part).
    """
    poly_speed = Polynomial(())
    pole_speed = {}
    const = ZERO3
    cpoly = Vec3Poly(())
    cterms = {}
    for e, c in zip(elements, coeffs):
        if e.part is not None:
            raise SpaceError(
                "cannot combine conjugate-pair parts (element %r)" % (e.label or e.kind,)
            )
        if c == 0:
            continue
        poly_speed = poly_speed + e.speed.poly.scale(c)
        for b, terms in e.speed.poles:
            slot = pole_speed.setdefault(b, {})
            for j, v in terms:
                slot[j] = slot.get(j, 0) + c * v
        const = vadd(const, vscale(e.curve_constant, c))
        cpoly = cpoly + e.curve_poly.scale(c)
        for b, terms in e.curve_terms:
            slot = cterms.setdefault(b, {})
            for j, v in terms:
                slot[j] = vadd(slot.get(j, ZERO3), vscale(v, c))
    poles = tuple(
        (b, tuple(sorted((j, v) for j, v in d.items() if v != 0))) for b, d in pole_speed.items()
    )
    poles = tuple((b, t) for b, t in poles if t)
    terms = tuple(
        (b, tuple(sorted((j, v) for j, v in d.items() if any(x != 0 for x in v))))
        for b, d in cterms.items()
    )
    terms = tuple((b, t) for b, t in terms if t)
    return BasisElement(
        kind=kind,
        speed=SpeedFunction(poles=poles, poly=poly_speed),
        curve_constant=const,
        curve_poly=cpoly,
        curve_terms=terms,
        label=label,
    )


# ---------------------------------------------------------------------------
# Taylor data and the residue system


def taylor_coeffs(field: TangentField, beta) -> list:
    """Coefficients f_j of F(t) = sum_j f_j (t - beta)^j."""
    return list(taylor_shift(field.F, beta).coeffs)


def residuum_matrix(field: TangentField, beta) -> np.ndarray:
    """3 x (n+1) matrix of the zero-residue system.

    Column j holds f_j, so the unknown vector is ordered
    (lambda_{-1}, lambda_{-2}, ..., lambda_{-n-1}).
    """
    f = taylor_coeffs(field, beta)
    return np.array([[complex(v[i]) for v in f] for i in range(3)])


def select_triplet(field: TangentField, beta, override: Optional[Sequence[int]] = None) -> tuple:
    """Pick indices (i1, i2, i3) with f_{i1}, f_{i2}, f_{i3} independent.

    Default: lexicographically smallest triplet whose determinant magnitude
    exceeds TRIPLET_TOL relative to the product of the column norms.  An
    explicit override is validated against the same threshold.
    """
    f = taylor_coeffs(field, beta)
    n = len(f) - 1

    def ok(tri):
        d = vdet3(f[tri[0]], f[tri[1]], f[tri[2]])
        scale = vnorm(f[tri[0]]) * vnorm(f[tri[1]]) * vnorm(f[tri[2]])
        return abs(complex(d)) > TRIPLET_TOL * max(scale, EPS)

    if override is not None:
        tri = tuple(int(i) for i in override)
        if len(tri) != 3 or len(set(tri)) != 3 or not all(0 <= i <= n for i in tri):
            raise SpaceError("triplet override %r is not three distinct indices in range" % (override,))
        if not ok(tri):
            raise SpaceError("triplet override %r selects dependent Taylor coefficients" % (override,))
        return tuple(sorted(tri))
    for tri in itertools.combinations(range(n + 1), 3):
        if ok(tri):
            return tri
    raise SpaceError("no independent coefficient triplet at beta=%s" % (beta,))


# ---------------------------------------------------------------------------
# generator constructors


def _integrate_series(f, beta, lam: dict, kind: str, label: str) -> BasisElement:
    """Curve from lambda(t) = sum_j lam[j] (t-beta)^j via term-by-term integration.

    The coefficient of (t-beta)^(-1) in lambda*F must vanish; exponent -1
    integrates to the (dropped) logarithm, every other exponent e to
    (t-beta)^(e+1)/(e+1).  The exponent-0 coefficient of the curve is
    normalized away (zero absolute term).
    """
    n = len(f) - 1
    conv: dict = {}
    for j, lj in lam.items():
        if lj == 0:
            continue
        for k in range(n + 1):
            m = j + k
            conv[m] = vadd(conv.get(m, ZERO3), vscale(f[k], lj))
    resid = conv.pop(-1, ZERO3)
    scale = max((abs(complex(x)) for v in conv.values() for x in v), default=1.0)
    if max(abs(complex(x)) for x in resid) > RESIDUE_TOL * max(scale, 1.0):
        raise SpaceError("residue condition violated at beta=%s" % (beta,))
    terms = []
    for m in sorted(conv):
        s = m + 1
        if s == 0:
            continue  # absolute term, dropped (zero integration constant)
        v = tuple(exact_div(x, s) for x in conv[m])
        if any(x != 0 for x in v):
            terms.append((s, v))
    lam_terms = tuple(sorted((j, c) for j, c in lam.items() if c != 0))
    speed = SpeedFunction(poles=((beta, lam_terms),), poly=Polynomial(()))
    return BasisElement(kind=kind, speed=speed, curve_terms=((beta, tuple(terms)),), label=label)


def nonregular_basis(
    field: TangentField, beta, triplet: Optional[Sequence[int]] = None
) -> list:
    """Canonical basis of the non-regular solutions at beta (n-2 elements).

    The dependent unknowns are the lambda_{-1-i} for i in the selected
    triplet; each remaining (free) unknown is set to 1 in turn, the others to
    0, and the 3x3 system is solved for the dependent ones.  Elements are
    ordered by the free exponent from -n-1 up to -1.
    """
    f = taylor_coeffs(field, beta)
    n = len(f) - 1
    if n < 2:
        raise SpaceError("field degree must be at least 2")
    tri = select_triplet(field, beta, triplet)
    dep_rows = [[f[i][r] for i in tri] for r in range(3)]
    free_idx = [i for i in range(n + 1) if i not in tri]
    out = []
    # free exponent j = -1-i; iterate from most negative exponent upward
    for i in sorted(free_idx, reverse=True):
        rhs = vscale(f[i], -1)
        sol = solve_linear(dep_rows, list(rhs))
        lam = {-1 - i: 1}
        for col, idx in enumerate(tri):
            lam[-1 - idx] = sol[col]
        out.append(
            _integrate_series(f, beta, lam, "nonregular", "nonregular(beta=%s, free=%d)" % (beta, -1 - i))
        )
    return out


def regular_basis(field: TangentField, beta, order: int) -> BasisElement:
    """The regular rational solution with lambda = (t-beta)^order, order <= -n-2."""
    f = taylor_coeffs(field, beta)
    n = len(f) - 1
    if order > -n - 2:
        raise SpaceError("not a regular exponent: %d > %d" % (order, -n - 2))
    return _integrate_series(f, beta, {order: 1}, "regular", "regular(beta=%s, r=%d)" % (beta, order))


def polynomial_basis(field: TangentField, ell: int) -> BasisElement:
    """Polynomial solution with lambda(t) = (n+ell) t^(ell-1), ell >= 1.

    The normalization makes the curve's leading coefficient equal the leading
    coefficient of F; the integration constant is zero.
    """
    if ell < 1:
        raise SpaceError("polynomial exponent must be >= 1")
    n = field.degree
    lam = Polynomial.monomial(ell - 1, n + ell)
    curve = field.F.mul_poly(lam).integ()
    return BasisElement(
        kind="polynomial",
        speed=SpeedFunction(poly=lam),
        curve_poly=curve,
        label="polynomial(ell=%d)" % ell,
    )


def constant_elements() -> list:
    out = []
    for i, lbl in enumerate("xyz"):
        v = tuple(1 if r == i else 0 for r in range(3))
        out.append(
            BasisElement(kind="constant", speed=SpeedFunction(), curve_constant=v, label="constant(%s)" % lbl)
        )
    return out


def external_element(field: TangentField, curve: Vec3Poly) -> BasisElement:
    """Wrap an externally supplied polynomial curve with r' = lambda F.

    lambda is recovered by polynomial division of <r', F> by <F, F>; the
    remainder and the residual r' - lambda F must both (numerically) vanish.
    """
    dcurve = curve.deriv()
    num = dcurve.dot(field.F)
    den = field.norm2_poly()
    lam, rem = _to_common_mode(num, den)
    scale = max((abs(complex(c)) for c in num.coeffs), default=1.0)
    if any(abs(complex(c)) > 1e-8 * max(scale, 1.0) for c in rem.coeffs):
        raise SpaceError("external curve is incompatible with the field")
    resid = dcurve - field.F.mul_poly(lam)
    rscale = max((abs(complex(x)) for c in dcurve.coeffs for x in c), default=1.0)
    if any(abs(complex(x)) > 1e-8 * max(rscale, 1.0) for c in resid.coeffs for x in c):
        raise SpaceError("external curve is incompatible with the field")
    const = curve.coeffs[0] if curve.coeffs else ZERO3
    tail = Vec3Poly((ZERO3,) + curve.coeffs[1:]) if curve.degree >= 1 else Vec3Poly(())
    return BasisElement(
        kind="external",
        speed=SpeedFunction(poly=lam),
        curve_constant=const,
        curve_poly=tail,
        label="external",
    )


def _to_common_mode(num: Polynomial, den: Polynomial):
    from .algebra import poly_divmod

    return poly_divmod(num, den)


def normalize_to_field(e: BasisElement, field: TangentField) -> BasisElement:
    """Rescale a Laurent generator so its lowest-order curve coefficient is F(beta).

    The scale is (j_min + 1) / lambda_{j_min} with j_min the lowest populated
    speed exponent, which makes that coefficient exactly f_0 = F(beta).
    """
    if not e.speed.poles:
        raise SpaceError("only Laurent generators can be field-normalized")
    beta, terms = e.speed.poles[0]
    j_min, c_min = min(terms, key=lambda jc: jc[0])
    if is_exact(c_min):
        s = Fraction(j_min + 1) / Fraction(c_min)
    else:
        s = (j_min + 1) / c_min
    return scale_element(e, s)


def normalize_to_unit(e: BasisElement) -> BasisElement:
    """Rescale a generator so its largest curve coefficient has magnitude one.

    Useful when field normalization produces badly scaled elements (it pins
    one designated coefficient, which says nothing about the others).  Exact
    data stays exact: the scale is the reciprocal of the largest coefficient.
    The scale is real, so conjugate pairs stay conjugate.
    """
    entries = list(e.curve_constant)
    for c in e.curve_poly.coeffs:
        entries.extend(c)
    for _, terms in e.curve_terms:
        for _, c in terms:
            entries.extend(c)
    best_mag, best = 0.0, None
    for x in entries:
        m = abs(complex(x))
        if m > best_mag:
            best_mag, best = m, x
    if best is None:
        return e
    if is_exact(best):
        s = 1 / abs(Fraction(best))
    else:
        s = 1.0 / best_mag
    return scale_element(e, s)


def realify_pair(e_plus: BasisElement, e_minus: BasisElement, tol: float = 1e-10):
    """Merge a conjugate pair of complex-base elements into two real ones.

    Returns ((e+ + e-)/2, (e+ - e-)/(2i)) realized as the real and imaginary
    parts of e_plus (valid for real parameters).  For a real base with
    e_minus == e_plus the second element is identically zero and should be
    dropped by the caller.
    """
    _check_conjugate(e_plus, e_minus, tol)
    return replace(e_plus, part="re", label=e_plus.label + " [re]"), replace(
        e_plus, part="im", label=e_plus.label + " [im]"
    )


def _check_conjugate(ep: BasisElement, em: BasisElement, tol: float) -> None:
    def cc(x):
        return complex(x).conjugate()

    def close(a, b, what):
        if abs(complex(a) - complex(b)) > tol * (1 + abs(complex(a))):
            raise SpaceError("elements are not a conjugate pair: %s mismatch" % what)

    if len(ep.curve_terms) != len(em.curve_terms) or len(ep.speed.poles) != len(em.speed.poles):
        raise SpaceError("elements are not a conjugate pair: structure mismatch")
    for (bp, tp), (bm, tm) in zip(ep.curve_terms, em.curve_terms):
        close(cc(bp), bm, "base")
        dp, dm = dict(tp), dict(tm)
        if set(dp) != set(dm):
            raise SpaceError("elements are not a conjugate pair: exponent mismatch")
        for j in dp:
            for a, b in zip(dp[j], dm[j]):
                close(cc(a), b, "curve coefficient")
    for (bp, tp), (bm, tm) in zip(ep.speed.poles, em.speed.poles):
        close(cc(bp), bm, "base")
        dp, dm = dict(tp), dict(tm)
        if set(dp) != set(dm):
            raise SpaceError("elements are not a conjugate pair: speed exponent mismatch")
        for j in dp:
            close(cc(dp[j]), dm[j], "speed coefficient")
    for a, b in zip(ep.curve_constant, em.curve_constant):
        close(cc(a), b, "constant")


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class NonRegularRequest:
    beta: object
    triplet: Optional[tuple] = None
    normalize: str = "field"  # 'field' | 'unit'


@dataclass(frozen=True)
class RegularRequest:
    beta: object
    orders: tuple  # each <= -n-2
    normalize: str = "field"


@dataclass(frozen=True)
class PolynomialRequest:
    ells: tuple  # each >= 1


@dataclass(frozen=True)
class InterpolationSpace:
    field: TangentField
    basis: tuple  # BasisElement
    delta: Polynomial  # common real denominator of the speed functions
    delta_factors: tuple  # ((root, multiplicity), ...) complex roots listed singly
    # Exact-backed spaces keep rational data end to end: evaluating at int or
    # Fraction parameters is exact, which downstream stages rely on when the
    # basis was rebased to cure extreme correlation.  to_float() is then the
    # identity -- rounding the coefficients would destroy that property.
    exact_eval: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)

    def curve_value(self, rho, t):
        acc = (0 * t, 0 * t, 0 * t)
        for r, e in zip(rho, self.basis):
            acc = vadd(acc, vscale(e.value(t), r))
        return acc

    def curve_velocity(self, rho, t):
        acc = (0 * t, 0 * t, 0 * t)
        for r, e in zip(rho, self.basis):
            acc = vadd(acc, vscale(e.velocity(t), r))
        return acc

    def speed_value(self, rho, t):
        acc = 0 * t
        for r, e in zip(rho, self.basis):
            acc = acc + r * e.speed_value(t)
        return acc

    def delta_sign(self) -> int:
        v = float(self.delta(0.5))
        if v == 0:
            raise SpaceError("common denominator vanishes inside the interval")
        return 1 if v > 0 else -1

    def to_float(self) -> "InterpolationSpace":
        if self.exact_eval:
            return self
        return InterpolationSpace(
            field=self.field.to_float(),
            basis=tuple(e.to_float() for e in self.basis),
            delta=self.delta.to_float(),
            delta_factors=tuple((_cfloat(b), m) for b, m in self.delta_factors),
        )


def _is_real(beta) -> bool:
    return abs(complex(beta).imag) <= 1e-12 * (1 + abs(complex(beta)))


def _reject_pole_in_interval(beta) -> None:
    if _is_real(beta):
        b = complex(beta).real
        if -EPS <= b <= 1 + EPS:
            raise SpaceError("real pole beta=%s lies inside [0, 1]" % (beta,))


def assemble_space(
    field: TangentField,
    requests: Sequence,
    external: Optional[Vec3Poly] = None,
    independence_tol: float = 1e-9,
) -> InterpolationSpace:
    """Stack constants, requested generators and an optional external curve.

    Complex base points are built once in the upper half plane and merged
    with their conjugates into real/imaginary-part pairs.  The common
    denominator delta collects, per distinct pole, the highest speed pole
    order over the assembled elements.  Linear independence is verified by
    collocation (3*(dim+2) sample points, SVD rank against independence_tol,
    relative); independence_tol=0 skips the check, for callers that handle
    numerically collinear bases themselves (high-order pole ladders are
    algebraically independent but exponentially correlated on [0, 1]).
    """
    basis = list(constant_elements())
    for req in requests:
        if isinstance(req, NonRegularRequest):
            _reject_pole_in_interval(req.beta)
            els = nonregular_basis(field, req.beta, req.triplet)
            els = [_apply_normalize(e, req.normalize, field) for e in els]
            if _is_real(req.beta):
                basis.extend(els)
            else:
                for e in els:
                    re, im = realify_pair(e, _conjugate_element(e))
                    basis.extend([re, im])
        elif isinstance(req, RegularRequest):
            _reject_pole_in_interval(req.beta)
            for r in req.orders:
                e = regular_basis(field, req.beta, int(r))
                e = _apply_normalize(e, req.normalize, field)
                if _is_real(req.beta):
                    basis.append(e)
                else:
                    re, im = realify_pair(e, _conjugate_element(e))
                    basis.extend([re, im])
        elif isinstance(req, PolynomialRequest):
            for ell in req.ells:
                basis.append(polynomial_basis(field, int(ell)))
        else:
            raise SpaceError("unknown generator request %r" % (req,))
    if external is not None:
        basis.append(external_element(field, external))

    delta, factors = _common_denominator(basis)
    space = InterpolationSpace(field=field, basis=tuple(basis), delta=delta, delta_factors=factors)
    if independence_tol:
        _check_independent(space, independence_tol)
    return space


def _apply_normalize(e: BasisElement, how: Optional[str], field: TangentField) -> BasisElement:
    if how == "field":
        return normalize_to_field(e, field)
    if how == "unit":
        return normalize_to_unit(e)
    if how in (None, "none"):
        return e
    raise SpaceError("unknown normalization %r (expected 'field', 'unit' or 'none')" % (how,))


def _conjugate_element(e: BasisElement) -> BasisElement:
    def cs(x):
        return x.conjugate() if isinstance(x, complex) else x

    return BasisElement(
        kind=e.kind,
        speed=SpeedFunction(
            poles=tuple((cs(b), tuple((j, cs(c)) for j, c in terms)) for b, terms in e.speed.poles),
            poly=Polynomial(tuple(cs(c) for c in e.speed.poly.coeffs)),
        ),
        curve_constant=tuple(cs(x) for x in e.curve_constant),
        curve_poly=Vec3Poly(tuple(tuple(cs(x) for x in c) for c in e.curve_poly.coeffs)),
        curve_terms=tuple(
            (cs(b), tuple((j, tuple(cs(x) for x in c)) for j, c in terms)) for b, terms in e.curve_terms
        ),
        part=e.part,
        label=e.label,
    )


def _common_denominator(basis) -> tuple:
    """delta = product over distinct poles of (t - beta)^(max speed order).

    Conjugate pole pairs are merged into real quadratic factors; exact real
    base points keep exact coefficients.  delta_factors lists every complex
    root (both members of a conjugate pair) with its multiplicity, preserving
    the original scalar type of the root.
    """
    roots: list = []  # (root scalar, order)

    def add_root(b, order):
        bc = complex(b)
        for idx, (r, m) in enumerate(roots):
            if abs(complex(r) - bc) <= 1e-9 * (1 + abs(bc)):
                roots[idx] = (r, max(m, order))
                return
        roots.append((b, order))

    for e in basis:
        for b, terms in e.speed.poles:
            if not terms:
                continue
            order = -min(j for j, _ in terms)
            add_root(b, order)
            if e.part is not None:
                add_root(complex(b).conjugate(), order)

    delta = Polynomial.of(1)
    for r, m in roots:
        rc = complex(r)
        if abs(rc.imag) <= 1e-12 * (1 + abs(rc)):
            lin = Polynomial.of(-r if is_exact(r) else -rc.real, 1)
            for _ in range(m):
                delta = delta * lin
        elif rc.imag > 0:
            quad = Polynomial.of(rc.real * rc.real + rc.imag * rc.imag, -2 * rc.real, 1.0)
            for _ in range(m):
                delta = delta * quad
    return delta, tuple(roots)


def collocation_matrix(space: InterpolationSpace) -> np.ndarray:
    """Column-normalized curve values at 3*(dim+2) uniform parameters.

    Column i stacks the xyz values of basis element i; the singular values
    measure the numerical independence of the basis on [0, 1].
    """
    dim = space.dim
    K = 3 * (dim + 2)
    ts = np.linspace(0.0, 1.0, K)
    cols = []
    for e in space.basis:
        vals = np.concatenate([np.array([float(x) for x in e.value(float(t))]) for t in ts])
        nrm = np.linalg.norm(vals)
        if nrm <= 1e-14:
            raise SpaceError("dependent basis: element %r is zero" % (e.label,))
        cols.append(vals / nrm)
    return np.column_stack(cols)


def _check_independent(space: InterpolationSpace, tol: float) -> None:
    sv = np.linalg.svd(collocation_matrix(space), compute_uv=False)
    if sv[-1] <= tol * sv[0]:
        raise SpaceError("dependent basis (relative singular value %.2e)" % (sv[-1] / sv[0]))
