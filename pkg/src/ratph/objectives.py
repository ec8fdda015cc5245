"""Objective functionals over an interpolation space, as QP data.

All integrals run through an adaptive Gauss-Legendre scheme (order-20
panels, interval bisection until two successive estimates agree to the
requested tolerance).  A single order-20 panel is exact for polynomial
integrands up to degree 39, so the polynomial-space objectives converge
immediately; rational integrands refine near the (off-interval) poles.

Objectives are expressed for the minimization form

    value(rho) = 1/2 rho^T H rho + g^T rho + c .

The matrices are scaled so that value(rho) is the functional itself: for
the energy objective H is twice the Gram matrix of the basis speeds against
<F, F>, and for the target-length objective the constant term completes the
square.  Reports still recompute the physical quantities from rho directly
as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield
from fractions import Fraction

import numpy as np

from .spaces import InterpolationSpace, combine_elements

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
MAX_DEPTH = 14


class QuadratureError(RuntimeError):
    pass


def gauss_panel(f, a: float, b: float) -> float:
    """Single order-20 Gauss-Legendre panel; f must accept numpy arrays."""
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * GL_NODES
    return half * float(np.dot(GL_WEIGHTS, np.asarray(f(x), dtype=float)))


def quadrature(f, a: float = 0.0, b: float = 1.0, tol: float = 1e-10) -> float:
    """Adaptive integral of f over [a, b] to absolute/relative tolerance tol.

    Panels are bisected until the two-half estimate agrees with the parent
    panel; more than 2**MAX_DEPTH panels raise QuadratureError.
    """

    def recurse(lo, hi, whole, tol_here, depth):
        mid = 0.5 * (lo + hi)
        left = gauss_panel(f, lo, mid)
        right = gauss_panel(f, mid, hi)
        if abs(left + right - whole) <= max(tol_here, tol_here * abs(left + right)):
            return left + right
        if depth >= MAX_DEPTH:
            raise QuadratureError("quadrature failed to converge")
        return recurse(lo, mid, left, 0.5 * tol_here, depth + 1) + recurse(
            mid, hi, right, 0.5 * tol_here, depth + 1
        )

    return recurse(a, b, gauss_panel(f, a, b), tol, 0)


@dataclass
class Objective:
    kind: str
    H: np.ndarray
    g: np.ndarray
    c: float = 0.0
    meta: dict = dfield(default_factory=dict)


def _pointwise_exact(scalar_f):
    """Vectorize an exact scalar function for the quadrature panels.

    Exact-backed elements evaluate exactly at Fraction parameters; each node
    is converted once, so the only roundoff is the final float of the value.
    """

    def f(ts):
        arr = np.atleast_1d(np.asarray(ts, dtype=float))
        return np.array([scalar_f(Fraction(t)) for t in arr])

    return f


def _speed_callables(space: InterpolationSpace):
    if space.exact_eval:
        return [
            _pointwise_exact(lambda t, e=e: float(e.speed_value(t))) for e in space.basis
        ]
    return [e.speed_value for e in space.basis]


def energy_objective(space: InterpolationSpace, tol: float = 1e-10) -> Objective:
    """H = 2 * Gram, Gram_ij = integral of lambda_i lambda_j <F, F> dt, g = 0,
    so the QP value 1/2 rho^T H rho is the curve energy itself.

    <F, F> = sigma^2 when the PH structure is known, so this works for raw
    vector fields as well.  Constant generators contribute zero rows.
    Exact-backed spaces get the Gram from exact integration instead of
    quadrature (their raw entries can cancel below float resolution).
    """
    d = space.dim
    if space.exact_eval:
        from .rebase import gram_matrix

        return Objective(kind="energy", H=2.0 * gram_matrix(space), g=np.zeros(d), c=0.0)
    w2 = space.field.norm2_poly().to_float()
    speeds = _speed_callables(space)
    nz = [i for i, e in enumerate(space.basis) if not e.speed.is_zero()]
    H = np.zeros((d, d))
    for a, i in enumerate(nz):
        for j in nz[: a + 1]:
            val = quadrature(lambda t: speeds[i](t) * speeds[j](t) * w2(t), tol=tol)
            H[i, j] = H[j, i] = val
    return Objective(kind="energy", H=2.0 * H, g=np.zeros(d), c=0.0)


def arclength_vector(space: InterpolationSpace, sign: int, tol: float = 1e-10) -> np.ndarray:
    """L_i = sign * integral of lambda_i sigma dt; requires PH structure.

    With sign chosen as the orientation of the combined speed, L^T rho is the
    arc length of the cusp-free curve (|lambda| sigma = sign * lambda * sigma).
    """
    if space.field.sigma is None:
        raise ValueError("arc-length objectives need a field with PH structure (sigma)")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    sig = space.field.sigma.to_float()
    speeds = _speed_callables(space)
    out = np.zeros(space.dim)
    for i, e in enumerate(space.basis):
        if e.speed.is_zero():
            continue
        out[i] = sign * quadrature(lambda t: speeds[i](t) * sig(t), tol=tol)
    return out


def arclength_objective(space: InterpolationSpace, sign: int, tol: float = 1e-10) -> Objective:
    L = arclength_vector(space, sign, tol)
    d = space.dim
    return Objective(kind="arclength", H=np.zeros((d, d)), g=L, c=0.0)


def target_length_objective(
    space: InterpolationSpace, sign: int, target: float, tol: float = 1e-10
) -> Objective:
    """Squared deviation (L^T rho - s)^2 as a rank-one PSD quadratic."""
    L = arclength_vector(space, sign, tol)
    H = 2.0 * np.outer(L, L)
    g = -2.0 * float(target) * L
    return Objective(kind="target_length", H=H, g=g, c=float(target) ** 2, meta={"target": float(target)})


# ---------------------------------------------------------------------------
# report-side recomputations (independent of the Gram assembly)


def _solution_element(space: InterpolationSpace, rho):
    """The solution curve as a single exact element (exact-backed spaces).

    Summing the combination in exact arithmetic first removes the
    cancellation between generators; evaluation afterwards is exact per
    point, so the returned squared-speed values carry only final-float
    roundoff."""
    return combine_elements(
        space.basis, [Fraction(float(r)) for r in rho], label="solution"
    )


def curve_energy(space: InterpolationSpace, rho, tol: float = 1e-10) -> float:
    """E = integral of <r', r'> dt computed from the summed velocities."""
    if space.exact_eval:
        sol = _solution_element(space, rho)

        def exact_norm2(t):
            vx, vy, vz = sol.velocity(t)
            return float(vx * vx + vy * vy + vz * vz)

        return quadrature(_pointwise_exact(exact_norm2), tol=tol)
    rho = [float(r) for r in rho]

    def integrand(t):
        vx, vy, vz = space.curve_velocity(rho, t)
        return vx * vx + vy * vy + vz * vz

    return quadrature(integrand, tol=tol)


def curve_signed_arclength(space: InterpolationSpace, rho, sign: int, tol: float = 1e-10) -> float:
    """sign * integral of lambda sigma dt; needs PH structure.

    Equals the arc length when the curve is cusp-free and traversed along
    sign * F, and dips below it when lambda changes sign."""
    if space.field.sigma is None:
        raise ValueError("signed arc length needs a field with PH structure (sigma)")
    sig = space.field.sigma
    if space.exact_eval:
        sol = _solution_element(space, rho)
        f = _pointwise_exact(lambda t: float(sol.speed_value(t) * sig(t)))
    else:
        sigf = sig.to_float()
        rho_f = [float(r) for r in rho]

        def f(t):
            return space.speed_value(rho_f, t) * sigf(t)

    return sign * quadrature(f, tol=tol)


def curve_arclength(space: InterpolationSpace, rho, tol: float = 1e-8) -> float:
    """Arc length integral of |r'| (robust near speed zeros, hence the softer
    default tolerance)."""
    if space.exact_eval:
        sol = _solution_element(space, rho)

        def exact_norm(t):
            vx, vy, vz = sol.velocity(t)
            return math.sqrt(float(vx * vx + vy * vy + vz * vz))

        return quadrature(_pointwise_exact(exact_norm), tol=tol)
    rho = [float(r) for r in rho]

    def integrand(t):
        vx, vy, vz = space.curve_velocity(rho, t)
        return np.sqrt(vx * vx + vy * vy + vz * vz)

    return quadrature(integrand, tol=tol)
