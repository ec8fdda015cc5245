# scratch: prototype exact energy-orthonormalization for deep pole-ladder
# spaces (delete before commit)
import math
import time
from fractions import Fraction as Fr

import numpy as np

from ratph.builtin_jobs import get_builtin
from ratph.spaces import (
    BasisElement,
    InterpolationSpace,
    SpeedFunction,
    assemble_space,
)
from ratph.algebra import (
    Polynomial,
    Vec3Poly,
    solve_linear,
    taylor_shift_scalar,
    to_bernstein,
    vadd,
    vscale,
    ZERO3,
)
from ratph.constraints import mu_polynomials, natural_degree
from ratph.hodograph import tangent_scalar
from ratph import qpsolve


def ln_fraction(q: Fr, digits: int = 70) -> Fr:
    """ln(q) for rational q > 0 as a Fraction accurate to ~10^-digits."""
    assert q > 0
    # dyadic reduction: q = 2^k * r with r in [1, 2)
    k = 0
    r = Fr(q)
    while r >= 2:
        r /= 2
        k += 1
    while r < 1:
        r *= 2
        k -= 1
    # ln r = 2 atanh(x), x = (r-1)/(r+1) in [0, 1/3)
    x = (r - 1) / (r + 1)
    acc = Fr(0)
    term = x
    n = 1
    limit = Fr(1, 10 ** (digits + 5))
    x2 = x * x
    while term > limit or -term > limit:
        acc += term / n
        term *= x2
        n += 2
    lnr = 2 * acc
    # ln 2 via the same series at r=2 -> x=1/3
    x = Fr(1, 3)
    acc = Fr(0)
    term = x
    n = 1
    x2 = x * x
    while term > limit:
        acc += term / n
        term *= x2
        n += 2
    ln2 = 2 * acc
    val = k * ln2 + lnr
    return val.limit_denominator(10 ** digits)


LN2_FR = ln_fraction(Fr(2))


def combine(elements, coeffs, label="combined"):
    poly_speed = Polynomial(())
    pole_speed = {}
    const = ZERO3
    cpoly = Vec3Poly(())
    cterms = {}
    for e, c in zip(elements, coeffs):
        if c == 0:
            continue
        assert e.part is None
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
        kind="combined",
        speed=SpeedFunction(poles=poles, poly=poly_speed),
        curve_constant=const,
        curve_poly=cpoly,
        curve_terms=terms,
        label=label,
    )


def speed_laurent_u(e, beta):
    out = {}
    if not e.speed.poly.is_zero():
        p = taylor_shift_scalar(e.speed.poly, beta)
        for k, c in enumerate(p.coeffs):
            if c != 0:
                out[k] = out.get(k, 0) + c
    for b, terms in e.speed.poles:
        assert Fr(b) == Fr(beta)
        for j, c in terms:
            out[j] = out.get(j, 0) + c
    return out


def energy_gram_pairs(space, beta):
    """Exact Gram integral of lambda_i lambda_j <F,F> as (rational, log-coeff) pairs.

    Integral over [0,1] of (t-beta)^m dt = ((1-beta)^{m+1} - (-beta)^{m+1})/(m+1)
    for m != -1, and ln((1-beta)/(-beta)) for m = -1.
    """
    w2_u = taylor_shift_scalar(space.field.norm2_poly(), beta)
    w2 = {k: Fr(c) for k, c in enumerate(w2_u.coeffs) if c != 0}
    lams = [speed_laurent_u(e, beta) for e in space.basis]
    d = space.dim
    hi = Fr(1) - Fr(beta)
    lo = -Fr(beta)
    Q = [[Fr(0)] * d for _ in range(d)]
    Lg = [[Fr(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1):
            prod = {}
            for a, ca in lams[i].items():
                for b, cb in lams[j].items():
                    prod[a + b] = prod.get(a + b, 0) + ca * cb
            vq, vl = Fr(0), Fr(0)
            for m0, cm in prod.items():
                for k, ck in w2.items():
                    m = m0 + k
                    c = cm * ck
                    if m == -1:
                        vl += c
                    else:
                        vq += c * (hi ** (m + 1) - lo ** (m + 1)) / (m + 1)
            Q[i][j] = Q[j][i] = vq
            Lg[i][j] = Lg[j][i] = vl
    return Q, Lg


def pairs_to_float(Q, Lg, logval: Fr):
    d = len(Q)
    out = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            out[i, j] = float(Q[i][j] + Lg[i][j] * logval)
    return out


def energy_orthonormalize(space, beta, nonconst, max_passes=5, verbose=True):
    """Iteratively rebase the non-constant block to unit energy Gram.

    Returns (new space, cumulative record of exact transforms applied)."""
    logval = ln_fraction(Fr((Fr(1) - Fr(beta)) / (-Fr(beta))))
    basis = list(space.basis)
    transforms = []
    for it in range(max_passes):
        sub = InterpolationSpace(field=space.field, basis=tuple(basis[i] for i in nonconst),
                                 delta=space.delta, delta_factors=space.delta_factors)
        Q, Lg = energy_gram_pairs(sub, beta)
        G = pairs_to_float(Q, Lg, logval)
        dsub = len(nonconst)
        off = G - np.diag(np.diag(G))
        dd = np.diag(G)
        if verbose:
            print("    pass %d: diag range [%.3e, %.3e], max offdiag %.2e" % (it, dd.min(), dd.max(), np.max(np.abs(off))))
        if np.max(np.abs(off)) < 1e-12 and np.max(np.abs(dd - 1)) < 1e-10:
            break
        w, U = np.linalg.eigh(G)
        floor = max(w[-1], 1.0) * 1e-14
        wc = np.maximum(w, floor)
        T = U @ np.diag(1.0 / np.sqrt(wc))
        Tq = [[Fr(T[r, c]) for c in range(dsub)] for r in range(dsub)]
        newsub = [combine([basis[i] for i in nonconst], [Tq[r][c] for r in range(dsub)],
                          label="orth[%d]" % c) for c in range(dsub)]
        for pos, i in enumerate(nonconst):
            basis[i] = newsub[pos]
        transforms.append(Tq)
    return basis, transforms


def run(mname, printed, bern_degree=None):
    cfg = get_builtin(mname)
    t0 = time.time()
    space = assemble_space(cfg.field, cfg.requests, external=cfg.external, independence_tol=0.0)
    beta = Fr(-1)
    nonconst = [i for i, e in enumerate(space.basis) if e.kind != "constant"]
    basis, transforms = energy_orthonormalize(space, beta, nonconst)
    # map the initial vector through the passes: T z_new = z_old on the block
    z = [Fr(0)] * space.dim
    z[space.dim - 1] = Fr(1)  # quintic column
    for Tq in transforms:
        zb = [z[i] for i in nonconst]
        sol = solve_linear(Tq, zb)
        for pos, i in enumerate(nonconst):
            z[i] = sol[pos]
    # recenter non-constant curves at t=0 and fold offsets into constants coords
    for i in nonconst:
        e = basis[i]
        v0 = e.value(Fr(0))
        basis[i] = BasisElement(
            kind=e.kind, speed=e.speed,
            curve_constant=tuple(a - b for a, b in zip(e.curve_constant, v0)),
            curve_poly=e.curve_poly, curve_terms=e.curve_terms, label=e.label,
        )
        # constants are unit axes: coordinate fixup for the initial vector
        for c in range(3):
            z[c] = z[c] + z[i] * v0[c]
    osp = InterpolationSpace(field=space.field, basis=tuple(basis), delta=space.delta,
                             delta_factors=space.delta_factors)
    t1 = time.time()
    d = osp.dim
    # final exact energy gram -> objective
    logval = ln_fraction(Fr(2))
    Q, Lg = energy_gram_pairs(osp, beta)
    H = 2.0 * pairs_to_float(Q, Lg, logval)
    ev = np.linalg.eigvalsh(H)
    print("  dim=%d  rebased in %.1fs  energy eigs [%.2e, %.2e]" % (d, t1 - t0, ev[0], ev[-1]))
    data = cfg.data
    A = np.zeros((8, d)); b = np.zeros(8)
    for col, e in enumerate(osp.basis):
        v0 = e.value(Fr(0)); v1 = e.value(Fr(1))
        for i in range(3):
            A[i, col] = float(v0[i]); A[3 + i, col] = float(v1[i])
    b[0:3] = [float(x) for x in data.p0]; b[3:6] = [float(x) for x in data.p1]
    b[6] = tangent_scalar(osp.field, tuple(float(x) for x in data.v0), 0.0)
    b[7] = tangent_scalar(osp.field, tuple(float(x) for x in data.v1), 1.0)
    for col, e in enumerate(osp.basis):
        A[6, col] = float(e.speed_value(Fr(0)))
        A[7, col] = float(e.speed_value(Fr(1)))
    mus = mu_polynomials(osp)
    nd = natural_degree(mus)
    m = nd if bern_degree is None else max(nd, bern_degree)
    Ain = np.zeros((m + 1, d))
    for col, mu in enumerate(mus):
        if mu.is_zero():
            continue
        bern = to_bernstein(mu, m)
        for j in range(m + 1):
            Ain[j, col] = float(bern[j])
    bin_ = np.zeros(m + 1)
    z0 = np.array([float(x) for x in z])
    # initial sanity
    print("  initial eq residual %.2e, min ineq %.2e" % (np.max(np.abs(A @ z0 - b)), np.min(Ain @ z0)))
    qp = qpsolve.QuadraticProgram(H=H, g=np.zeros(d), c=0.0, A_eq=A, b_eq=b, A_in=Ain, b_in=bin_, initial=z0)
    t4 = time.time()
    sol = qpsolve.solve(qp)
    t5 = time.time()
    print("  bern deg %d: status=%s it=%d E=%.4f (printed %.2f, target<=%.2f) solve %.1fs" %
          (m, sol.status, sol.iterations, sol.value if sol.value is not None else float("nan"),
           printed, printed + 0.05, t5 - t4))
    if sol.rho is None:
        return
    rho = sol.rho
    rq = [Fr(x) for x in rho]
    final = combine(osp.basis, rq, label="solution")
    r0 = final.value(Fr(0)); r1 = final.value(Fr(1))
    res = max(
        max(abs(float(a - Fr(p))) for a, p in zip(r0, data.p0)),
        max(abs(float(a - Fr(p))) for a, p in zip(r1, data.p1)),
    )
    mu_final = Polynomial(())
    for c, mu in zip(rq, mus):
        mu_final = mu_final + mu.scale(c)
    grid_min = min(float(mu_final(Fr(k, 999))) for k in range(1000))
    nodes, wts = np.polynomial.legendre.leggauss(20)
    Eq = 0.0
    for lo, hi in ((0, Fr(1, 16)), (Fr(1, 16), Fr(1, 8)), (Fr(1, 8), Fr(1, 4)), (Fr(1, 4), Fr(1, 2)), (Fr(1, 2), 1)):
        half = (Fr(hi) - Fr(lo)) / 2
        mid = (Fr(hi) + Fr(lo)) / 2
        for x, w in zip(nodes, wts):
            t = mid + half * Fr(x)
            vx, vy, vz = final.velocity(t)
            Eq += float(half) * w * float(vx * vx + vy * vy + vz * vz)
    print("  endpoint res=%.2e  mu grid min=%.3e  E(quad)=%.4f  |rho|=%.1e  total %.0fs" %
          (res, grid_min, Eq, np.max(np.abs(rho)), time.time() - t0))


for mname, printed in (
    ("c1_quintic_table2_m11", 17.75),
    ("c1_quintic_table2_m14", 17.50),
    ("c1_quintic_table2_m15", 17.44),
):
    print("==", mname)
    run(mname, printed)
