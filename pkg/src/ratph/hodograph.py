"""Polynomial tangent fields of spatial PH curves.

A quaternion polynomial A(t) induces the tangent field F(t) = A(t) i A̅(t)
whose norm is the real polynomial sigma(t) = A(t) A̅(t); every curve with
hodograph r'(t) = lambda(t) F(t) is a (rational) PH curve.  Fields may also
be supplied directly as vector polynomials, in which case sigma is unknown
and only energy-type functionals are available downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    EPS,
    Polynomial,
    Quaternion,
    QuaternionPolynomial,
    Vec3Poly,
    vcross,
    vdot,
    vnorm,
    vscale,
)

PARALLEL_TOL = 1e-8


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class TangentField:
    """A spatial polynomial tangent field, optionally with PH structure."""

    F: Vec3Poly
    sigma: Optional[Polynomial] = None
    A: Optional[QuaternionPolynomial] = None

    @property
    def degree(self) -> int:
        return self.F.degree

    def norm2_poly(self) -> Polynomial:
        """<F, F> as a polynomial (= sigma**2 when PH structure is known)."""
        if self.sigma is not None:
            return self.sigma * self.sigma
        return self.F.dot(self.F)

    def to_float(self) -> "TangentField":
        return TangentField(
            self.F.to_float(),
            None if self.sigma is None else self.sigma.to_float(),
            self.A,
        )


def make_tangent_field(A: QuaternionPolynomial) -> TangentField:
    """Build the field F = A i A̅ with norm polynomial sigma = A A̅."""
    if A.is_zero():
        raise FieldError("zero quaternion polynomial")
    Abar = A.conjugate()
    Fq = A * QuaternionPolynomial.of(Quaternion.i()) * Abar
    Sq = A * Abar
    # F is a pure vector and sigma a real scalar by construction; enforce it.
    for q in Fq.coeffs:
        if abs(float(q.w)) > EPS * _qscale(Fq):
            raise FieldError("tangent field has a nonzero scalar part")
    for q in Sq.coeffs:
        if max(abs(float(q.x)), abs(float(q.y)), abs(float(q.z))) > EPS * _qscale(Sq):
            raise FieldError("norm polynomial has a nonzero vector part")
    F = Vec3Poly(tuple(q.vec() for q in Fq.coeffs))
    sigma = Polynomial(tuple(q.w for q in Sq.coeffs))
    _check_field(F)
    return TangentField(F=F, sigma=sigma, A=A)


def validate_field(F: Vec3Poly) -> TangentField:
    """Wrap a raw vector polynomial as a field after running the checks."""
    _check_field(F)
    return TangentField(F=F, sigma=None, A=None)


def _qscale(qp: QuaternionPolynomial) -> float:
    return max(
        (max(abs(float(q.w)), abs(float(q.x)), abs(float(q.y)), abs(float(q.z))) for q in qp.coeffs),
        default=0.0,
    ) or 1.0


def _check_field(F: Vec3Poly) -> None:
    n = F.degree
    if n < 2:
        raise FieldError("field degree must be at least 2 (got %d)" % n)
    # spatial: the coefficient vectors must span R^3
    M = np.array([[float(x) for x in c] for c in F.coeffs], dtype=float)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= 1e-9 * sv[0]:
        raise FieldError("field is not spatial: coefficient vectors do not span R^3")
    if _has_common_real_factor(F):
        raise FieldError("field components share a nonconstant real factor")


def _has_common_real_factor(F: Vec3Poly) -> bool:
    """A nonconstant real common factor exists iff the three components share
    a complex root (real coefficients force conjugate pairs along)."""
    comps = [F.component(i) for i in range(3)]
    nz = [p for p in comps if not p.is_zero()]
    if len(nz) < len(comps):
        # a vanishing component: common factor iff the remaining ones share one
        if not nz:
            return True
    probe = min(nz, key=lambda p: p.degree)
    if probe.degree == 0:
        return False
    roots = np.roots([float(c) for c in reversed(probe.coeffs)])
    others = [p for p in nz if p is not probe]
    for r in roots:
        shared = True
        for p in others:
            coeffs = [float(c) for c in p.coeffs]
            scale = sum(abs(c) for c in coeffs) * max(1.0, abs(r)) ** p.degree
            val = p(complex(r))
            if abs(val) > 1e-8 * scale:
                shared = False
                break
        if shared:
            return True
    return False


def direction_preimage(v, phi: float = 0.0) -> Quaternion:
    """A unit quaternion q with q i q̅ parallel to v (same orientation).

    Uses the rotation about axis i x v by the angle between i and v,
    right-multiplied by the one-parameter family element
    cos(phi) + i sin(phi), which leaves q i q̅ unchanged.
    """
    nv = vnorm(v)
    if nv <= EPS:
        raise FieldError("cannot take the preimage of a zero direction")
    u = vscale(tuple(float(c) for c in v), 1.0 / nv)
    c = u[0]  # <i, u>
    axis = vcross((1.0, 0.0, 0.0), u)
    s = vnorm(axis)
    if s <= EPS:
        if c > 0:
            rot = Quaternion(1.0, 0.0, 0.0, 0.0)
        else:
            # v antiparallel to i: rotate by pi about j
            rot = Quaternion(0.0, 0.0, 1.0, 0.0)
    else:
        half = 0.5 * math.atan2(s, c)
        ax = vscale(axis, 1.0 / s)
        sn = math.sin(half)
        rot = Quaternion(math.cos(half), sn * ax[0], sn * ax[1], sn * ax[2])
    gauge = Quaternion(math.cos(phi), math.sin(phi), 0.0, 0.0)
    return rot * gauge


def tangent_scalar(field: TangentField, v, t: float, tol: float = PARALLEL_TOL):
    """The scalar c with v = c * F(t); raises when v is not parallel to F(t).

    The parallelism test is angular: the residual of v against its projection
    onto F(t) must stay below tol * |v| (tol in radians for small angles).
    """
    Ft = tuple(float(x) for x in field.F(float(t)))
    n2 = vdot(Ft, Ft)
    if n2 <= EPS:
        raise FieldError("field vanishes at t=%g" % t)
    vf = tuple(float(x) for x in v)
    c = vdot(vf, Ft) / n2
    resid = vnorm(vsub3(vf, vscale(Ft, c)))
    if resid > tol * max(vnorm(vf), EPS):
        raise FieldError("derivative direction incompatible with the field at t=%g" % t)
    if c <= 0:
        raise FieldError("derivative direction opposes the field orientation at t=%g" % t)
    return c


def vsub3(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])
