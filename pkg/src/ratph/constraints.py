"""Linear constraint assembly: Hermite interpolation rows and cusp avoidance.

The combined speed lambda(t) = sum_i rho_i lambda_i(t) of a candidate curve
is a rational function over the common denominator delta(t) of the space;
writing lambda_i = mu_i / delta with polynomial numerators mu_i, a sufficient
cusp-avoidance condition is one-signedness of mu(t) = sum_i rho_i mu_i(t) on
[0, 1], imposed through the (linear-in-rho) Bernstein coefficients of mu.
Endpoint zeros of mu are permitted: they give endpoint-stationary
parametrizations, not interior cusps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import EPS, Polynomial, to_bernstein, vdot
from .hodograph import tangent_scalar
from .spaces import InterpolationSpace, SpaceError


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class HermiteData:
    p0: tuple
    p1: tuple
    v0: Optional[tuple] = None
    v1: Optional[tuple] = None
    mode: str = "G1"  # 'G1' | 'C1'


# ---------------------------------------------------------------------------
# mu numerators


def _expand_factors(factors) -> Polynomial:
    p = Polynomial.of(1)
    for r, m in factors:
        lin = Polynomial.of(-r, 1)
        for _ in range(m):
            p = p * lin
    return p


def _realize(p: Polynomial, part) -> Polynomial:
    if part == "re":
        return Polynomial(tuple(c.real for c in p.coeffs))
    if part == "im":
        return Polynomial(tuple(c.imag for c in p.coeffs))
    scale = max((abs(complex(c)) for c in p.coeffs), default=0.0)
    for c in p.coeffs:
        if abs(complex(c).imag) > 1e-9 * max(scale, 1.0):
            raise ConstraintError("mu numerator has a residual imaginary part")
    return Polynomial(tuple(c.real for c in p.coeffs))


def mu_polynomials(space: InterpolationSpace) -> list:
    """Numerators mu_i with lambda_i = mu_i / delta, aligned with the basis.

    Constants get the zero polynomial.  Laurent series are multiplied by
    delta in factored form, so negative powers cancel exactly against the
    matching (t-beta) factors and no polynomial division is performed.
    """
    factors = list(space.delta_factors)
    mus = []
    for e in space.basis:
        mu = Polynomial(())
        if not e.speed.poly.is_zero():
            mu = mu + e.speed.poly * space.delta
        for beta, terms in e.speed.poles:
            if not terms:
                continue
            idx = _find_root(factors, beta)
            root_mult = factors[idx][1]
            for j, c in terms:
                if root_mult + j < 0:
                    raise ConstraintError("common denominator misses pole order at %s" % (beta,))
                shifted = [
                    (r, (m + j) if k == idx else m) for k, (r, m) in enumerate(factors)
                ]
                mu = mu + _expand_factors(shifted).scale(c)
            # realified elements count the conjugate root via their part flag
        mus.append(_realize(mu, e.part))
    return mus


def _find_root(factors, beta) -> int:
    bc = complex(beta)
    for k, (r, _) in enumerate(factors):
        if abs(complex(r) - bc) <= 1e-9 * (1 + abs(bc)):
            return k
    raise ConstraintError("pole %s missing from the common denominator" % (beta,))


# ---------------------------------------------------------------------------
# Hermite interpolation rows


def hermite_rows(space: InterpolationSpace, data: HermiteData):
    """Equality rows A rho = b for the endpoint conditions.

    G1: six rows (positions at t=0 and t=1); the tangent directions are
    matched by construction of the field.  C1 adds the two speed rows
    lambda(0) = c0, lambda(1) = c1 where v0 = c0 F(0), v1 = c1 F(1); the
    scalars exist only when the data derivatives are parallel to the field.
    """
    if data.mode not in ("G1", "C1"):
        raise ConstraintError("unknown Hermite mode %r" % (data.mode,))
    d = space.dim
    rows = np.zeros((8 if data.mode == "C1" else 6, d))
    rhs = np.zeros(rows.shape[0])
    for col, e in enumerate(space.basis):
        # integer parameters keep exact-backed elements exact
        v0 = e.value(0)
        v1 = e.value(1)
        for i in range(3):
            rows[i, col] = float(v0[i])
            rows[3 + i, col] = float(v1[i])
    rhs[0:3] = [float(x) for x in data.p0]
    rhs[3:6] = [float(x) for x in data.p1]
    if data.mode == "C1":
        if data.v0 is None or data.v1 is None:
            raise ConstraintError("C1 mode needs endpoint derivatives")
        c0 = tangent_scalar(space.field, data.v0, 0.0)
        c1 = tangent_scalar(space.field, data.v1, 1.0)
        for col, e in enumerate(space.basis):
            rows[6, col] = float(e.speed_value(0))
            rows[7, col] = float(e.speed_value(1))
        rhs[6] = c0
        rhs[7] = c1
    return rows, rhs


# ---------------------------------------------------------------------------
# cusp rows


def natural_degree(mus) -> int:
    return max((mu.degree for mu in mus if not mu.is_zero()), default=0)


def cusp_rows(
    space: InterpolationSpace,
    sign: int,
    degree: Optional[int] = None,
    bound: float = 0.0,
    mus: Optional[Sequence[Polynomial]] = None,
):
    """Inequality rows A rho >= b: signed Bernstein coefficients of mu.

    ``degree`` elevates the Bernstein representation (weakening the
    sufficient condition toward true one-signedness); it must be at least the
    natural degree max_i deg(mu_i).  ``bound`` relaxes the right-hand side
    (e.g. -100 deliberately re-admits sign changes for the cusp showcase).
    """
    if sign not in (1, -1):
        raise ConstraintError("sign must be +1 or -1")
    if mus is None:
        mus = mu_polynomials(space)
    m = natural_degree(mus)
    if degree is not None:
        if degree < m:
            raise ConstraintError("Bernstein degree %d below natural degree %d" % (degree, m))
        m = int(degree)
    A = np.zeros((m + 1, space.dim))
    for col, mu in enumerate(mus):
        if mu.is_zero():
            continue
        # conversion happens per Bernstein coefficient: for exact mu the
        # elevation is exact, and only the final entry is rounded
        b = to_bernstein(mu, m)
        for j in range(m + 1):
            A[j, col] = sign * float(b[j])
    rhs = np.full(m + 1, float(bound))
    return A, rhs


def mu_value(space: InterpolationSpace, rho, t, mus=None):
    if mus is None:
        mus = mu_polynomials(space)
    acc = 0.0
    for r, mu in zip(rho, mus):
        acc += float(r) * float(mu.to_float()(t))
    return acc


def choose_sign(rho, space: InterpolationSpace, mus=None) -> int:
    """Orientation of the cusp constraint: the sign of mu at t = 1/2 for the
    initial solution.  Raises when mu(1/2) is (numerically) zero."""
    if mus is None:
        mus = mu_polynomials(space)
    val = mu_value(space, rho, 0.5, mus)
    scale = max(
        (abs(float(r)) * max((abs(c) for c in mu.to_float().coeffs), default=0.0) for r, mu in zip(rho, mus)),
        default=0.0,
    )
    if abs(val) <= 1e-12 * max(scale, 1.0):
        raise ConstraintError("sign undetermined: mu vanishes at t=1/2 for the initial solution")
    return 1 if val > 0 else -1


def lambda_sign(rho, space: InterpolationSpace) -> int:
    """Orientation of the speed itself (differs from the mu sign exactly by
    the constant sign of delta on [0, 1])."""
    val = float(space.speed_value([float(r) for r in rho], 0.5))
    if abs(val) <= EPS:
        raise ConstraintError("sign undetermined: lambda vanishes at t=1/2")
    return 1 if val > 0 else -1
