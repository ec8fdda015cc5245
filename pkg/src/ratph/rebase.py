"""Exact energy re-orthonormalization for numerically collinear bases.

Deep pole ladders -- speed functions (t-beta)^r for a run of consecutive
orders r -- are algebraically independent but exponentially correlated on
[0, 1]: their energy Gram matrix reaches condition numbers far beyond 1/eps,
so no double-precision pipeline on the raw generators can resolve the
optimum.  The fix implemented here changes the basis *exactly*:

1. the energy Gram G_ij = integral of lambda_i lambda_j <F, F> dt is computed
   in exact rational arithmetic (each entry is q + l * log(v) with rational
   q, l, v, kept as a pair until the final float conversion),
2. a float eigendecomposition of G suggests a whitening transform T with
   G ~ T^T G T = I, whose entries are then read back as exact rationals and
   applied to the generators in exact arithmetic -- so roundoff in T only
   delays convergence, it cannot poison the elimination,
3. steps 1-2 repeat until the recomputed exact Gram is the identity to
   working precision.  Each pass removes about as many orders of magnitude
   of correlation as double precision can see, so a Gram with condition
   1e21 needs three or four passes.

Afterwards the non-constant generators are recentered to vanish at t = 0
(the offsets move into the constant coordinates), which keeps the Hermite
collocation rows at the same scale as the Gram.

The resulting space carries ``exact_eval=True``: its elements store exact
rational data and evaluate exactly at Fraction parameters, which is what
makes residual checks on the rebased solution meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .algebra import is_exact, solve_linear, taylor_shift_scalar
from .spaces import BasisElement, InterpolationSpace, SpaceError, combine_elements

__all__ = [
    "RebasedSpace",
    "energy_gram_pairs",
    "gram_matrix",
    "energy_orthonormalize",
    "log_fraction",
]


def log_fraction(q: Fraction, digits: int = 70) -> Fraction:
    """log(q) for rational q > 0, as a Fraction accurate to ~10^-digits.

    Dyadic reduction q = 2^k * r with r in [1, 2), then the atanh series
    log r = 2 * atanh((r - 1)/(r + 1)) whose argument lies in [0, 1/3).
    The result feeds exact-arithmetic cancellations, so float log is not
    accurate enough: entries of the form q + l*log(v) may cancel across
    twenty digits before the O(1) remainder appears.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log_fraction needs a positive rational, got %s" % (q,))
    k = 0
    r = q
    while r >= 2:
        r /= 2
        k += 1
    while r < 1:
        r *= 2
        k -= 1
    limit = Fraction(1, 10 ** (digits + 5))

    def atanh2(x: Fraction) -> Fraction:
        acc = Fraction(0)
        term = x
        n = 1
        x2 = x * x
        while term > limit:
            acc += term / n
            term *= x2
            n += 2
        return 2 * acc

    val = atanh2((r - 1) / (r + 1))
    if k:
        val += k * atanh2(Fraction(1, 3))  # log 2
    return val.limit_denominator(10**digits)


def _require_exact_fraction(x, what: str) -> Fraction:
    if not is_exact(x):
        raise SpaceError("%s is not exact (got %r); rebasing needs exact data" % (what, x))
    return Fraction(x)


def _single_base_point(space: InterpolationSpace) -> Fraction:
    """The unique real rational pole of the space's speed functions.

    Purely polynomial speeds have no pole; 0 is returned as the (unused)
    expansion point, since nonnegative powers integrate without logs.
    """
    betas = []
    for e in space.basis:
        if e.part is not None:
            raise SpaceError(
                "rebasing supports real base points only "
                "(element %r is a conjugate-pair part)" % (e.label or e.kind,)
            )
        for b, terms in e.speed.poles:
            if not terms:
                continue
            bq = _require_exact_fraction(b, "pole location")
            if not any(bq == seen for seen in betas):
                betas.append(bq)
    if not betas:
        return Fraction(0)
    if len(betas) > 1:
        raise SpaceError(
            "rebasing needs a single base point, found poles at %s"
            % (", ".join(str(b) for b in betas),)
        )
    beta = betas[0]
    if 0 <= beta <= 1:
        raise SpaceError("pole beta=%s lies inside [0, 1]" % (beta,))
    return beta


def _speed_laurent(e: BasisElement, beta: Fraction) -> dict:
    """The speed function as {exponent: coefficient} in powers of (t - beta)."""
    out = {}
    if not e.speed.poly.is_zero():
        shifted = taylor_shift_scalar(e.speed.poly, beta)
        for k, c in enumerate(shifted.coeffs):
            if c != 0:
                out[k] = out.get(k, 0) + _require_exact_fraction(c, "speed coefficient")
    for b, terms in e.speed.poles:
        for j, c in terms:
            out[j] = out.get(j, 0) + _require_exact_fraction(c, "speed pole coefficient")
    return out


def energy_gram_pairs(space: InterpolationSpace, beta: Optional[Fraction] = None):
    """Exact energy Gram: entries as (rational, log-coefficient) pairs.

    Returns (Q, L, logarg) with G_ij = Q[i][j] + L[i][j] * log(logarg), all
    Fractions.  Over [0, 1],

        integral (t-beta)^m dt = ((1-beta)^{m+1} - (-beta)^{m+1})/(m+1)

    for m != -1 and log((1-beta)/(-beta)) for m = -1, so every entry of the
    Gram of products lambda_i lambda_j <F, F> lands in Q + Q*log(logarg).
    ``logarg`` is None when no logarithm occurs (polynomial speeds).
    """
    if beta is None:
        beta = _single_base_point(space)
    beta = Fraction(beta)
    norm2 = space.field.norm2_poly()
    shifted = taylor_shift_scalar(norm2, beta)
    w2 = {}
    for k, c in enumerate(shifted.coeffs):
        if c != 0:
            w2[k] = _require_exact_fraction(c, "field norm coefficient")
    lams = [_speed_laurent(e, beta) for e in space.basis]
    d = space.dim
    hi = Fraction(1) - beta
    lo = -beta
    Q = [[Fraction(0)] * d for _ in range(d)]
    L = [[Fraction(0)] * d for _ in range(d)]
    any_log = False
    for i in range(d):
        for j in range(i + 1):
            prod = {}
            for a, ca in lams[i].items():
                for b, cb in lams[j].items():
                    prod[a + b] = prod.get(a + b, 0) + ca * cb
            vq = Fraction(0)
            vl = Fraction(0)
            for m0, cm in prod.items():
                for k, ck in w2.items():
                    m = m0 + k
                    c = cm * ck
                    if m == -1:
                        vl += c
                    else:
                        vq += c * (hi ** (m + 1) - lo ** (m + 1)) / (m + 1)
            Q[i][j] = Q[j][i] = vq
            L[i][j] = L[j][i] = vl
            if vl != 0:
                any_log = True
    logarg = (hi / lo) if any_log else None
    if any_log and logarg <= 0:
        raise SpaceError("log argument (1-beta)/(-beta) not positive for beta=%s" % (beta,))
    return Q, L, logarg


def gram_matrix(space: InterpolationSpace) -> np.ndarray:
    """Float energy Gram of an exact space, via the exact pair representation.

    The log value is substituted as a high-precision rational *before* the
    float conversion: Q and L entries can be huge and cancel to O(1), so
    substituting float(log) first would lose everything below |Q|*eps.
    """
    Q, L, logarg = energy_gram_pairs(space)
    d = space.dim
    out = np.zeros((d, d))
    logval = log_fraction(logarg) if logarg is not None else Fraction(0)
    for i in range(d):
        for j in range(i + 1):
            out[i, j] = out[j, i] = float(Q[i][j] + L[i][j] * logval)
    return out


@dataclass(frozen=True)
class RebasedSpace:
    """An exactly rebased interpolation space.

    ``space``         the new space (exact_eval=True, energy-orthonormal
                      non-constant block, non-constants vanish at t=0);
    ``gram``          float energy Gram of the new basis (identity on the
                      non-constant block, zero rows for constants);
    ``to_new_coords`` maps a coefficient vector over the original basis to
                      the equivalent vector over the new basis, exactly.
    """

    space: InterpolationSpace
    gram: np.ndarray
    to_new_coords: Callable


def energy_orthonormalize(
    space: InterpolationSpace, max_passes: int = 8, off_tol: float = 1e-11
) -> RebasedSpace:
    """Rebase the non-constant block to an energy-orthonormal set, exactly.

    Raises SpaceError if the space carries inexact data, conjugate-pair
    parts, several distinct base points, or if the iteration stalls (which
    double precision cannot cause for Grams whitened in exact arithmetic,
    but a defensive cap is kept).
    """
    beta = _single_base_point(space)
    basis = list(space.basis)
    const_idx = [i for i, e in enumerate(basis) if e.kind == "constant"]
    nonconst = [i for i, e in enumerate(basis) if e.kind != "constant"]
    if len(const_idx) != 3 or const_idx != [0, 1, 2]:
        raise SpaceError("rebasing expects the three constant axes first in the basis")
    axes = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for c, e in enumerate(basis[:3]):
        if tuple(e.curve_constant) != axes[c] or not e.speed.is_zero():
            raise SpaceError("constant element %d is not the %s axis" % (c, "xyz"[c]))
    if not nonconst:
        raise SpaceError("nothing to rebase: all elements are constant")

    logval = None
    transforms = []  # exact block transforms, applied in order
    dsub = len(nonconst)
    G = None
    for it in range(max_passes):
        sub = replace(space, basis=tuple(basis[i] for i in nonconst))
        Q, L, logarg = energy_gram_pairs(sub, beta)
        if logarg is not None and logval is None:
            logval = log_fraction(logarg)
        lv = logval if logval is not None else Fraction(0)
        G = np.zeros((dsub, dsub))
        for i in range(dsub):
            for j in range(i + 1):
                G[i, j] = G[j, i] = float(Q[i][j] + L[i][j] * lv)
        dd = np.diag(G)
        off = np.max(np.abs(G - np.diag(dd))) if dsub > 1 else 0.0
        if off < off_tol and np.max(np.abs(dd - 1.0)) < 1e-9:
            break
        if it == max_passes - 1:
            raise SpaceError(
                "energy orthonormalization stalled after %d passes "
                "(max off-diagonal %.2e)" % (max_passes, off)
            )
        w, U = np.linalg.eigh(G)
        floor = max(float(w[-1]), 1.0) * 1e-14
        wc = np.maximum(w, floor)
        T = U @ np.diag(1.0 / np.sqrt(wc))
        Tq = [[Fraction(T[r, c]) for c in range(dsub)] for r in range(dsub)]
        block = [basis[i] for i in nonconst]
        for c in range(dsub):
            basis[nonconst[c]] = combine_elements(
                block, [Tq[r][c] for r in range(dsub)], label="orth[%d]" % c
            )
        transforms.append(Tq)

    # recenter: non-constant curves vanish at t=0, offsets fold into constants
    offsets = []  # (index, value-at-0) pairs, for the coordinate map
    for i in nonconst:
        e = basis[i]
        v0 = e.value(Fraction(0))
        offsets.append((i, v0))
        basis[i] = replace(
            e, curve_constant=tuple(a - b for a, b in zip(e.curve_constant, v0))
        )

    new_space = replace(space, basis=tuple(basis), exact_eval=True)
    gram = np.zeros((space.dim, space.dim))
    for a, ia in enumerate(nonconst):
        for b, ib in enumerate(nonconst):
            gram[ia, ib] = G[a, b]

    def to_new_coords(vec):
        if len(vec) != new_space.dim:
            raise SpaceError(
                "coordinate vector has length %d, space dimension is %d"
                % (len(vec), new_space.dim)
            )
        z = [Fraction(x) for x in vec]
        for Tq in transforms:
            zb = [z[i] for i in nonconst]
            sol = solve_linear(Tq, zb)  # T z_new = z_old on the block
            for pos, i in enumerate(nonconst):
                z[i] = sol[pos]
        for i, v0 in offsets:
            for c in range(3):
                z[c] = z[c] + z[i] * v0[c]
        return z

    return RebasedSpace(space=new_space, gram=gram, to_new_coords=to_new_coords)
