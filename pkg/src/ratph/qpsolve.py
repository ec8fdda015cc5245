"""Dense convex quadratic programming by a primal active-set method.

    minimize   1/2 x^T H x + g^T x + c
    subject to A_eq x  = b_eq
               A_in x >= b_in

H must be positive semidefinite (within tolerance; small negative eigenvalues
are clipped).  Zero-curvature directions are handled explicitly, so linear
programs (H = 0) and rank-deficient quadratics run through the same loop.
Constraint rows are normalized internally, which makes the iteration -- and
hence the returned solution -- invariant under row scaling.

Equality constraints are eliminated up front: the iteration runs in the
affine coordinates x = x0 + N z, where x0 is the minimum-norm solution of
the equality system and N spans its null space.  That keeps working sets
small and the KKT solves well conditioned even when the inequality block
carries hundreds of nearly parallel rows.

Phase 1 starts from the caller's initial point when it is already feasible;
otherwise it takes the minimum-norm solution of the equality system and, if
inequalities remain violated, looks for an interior point by maximizing the
worst margin (a small LP), falling back to an auxiliary QP in (z, slack)
variables that minimizes the total squared violation.  The slack QP is the
authority on infeasibility; a phase-1 subproblem that stalls before
certifying either way raises QpError -- stalling is a numerical failure,
not a certificate of infeasibility.

Tie-breaking (blocking constraint, dropped multiplier) is deterministic, so
repeated runs are bit-identical.  Exact ties go to the lowest constraint
index; the ratio test uses a small tolerance window, and among blocking
rows inside the window it prefers the one met most steeply, which is the
standard guard against stalling at degenerate vertices.  The window widens
(never past 1e-6) only if a working set repeats without progress.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Callable, Optional

import numpy as np

FEAS_TOL = 1e-8
DUAL_TOL = 1e-8
ACT_TOL = 1e-9
STAT_TOL = 1e-7

_RATIO_PAD = 1e-9  # initial tolerance window of the ratio test
_PAD_MAX = 1e-6


class QpError(ValueError):
    pass


class _Infeasible(Exception):
    def __init__(self, violation: float):
        super().__init__("infeasible (violation %.3e)" % violation)
        self.violation = float(violation)


@dataclass
class QuadraticProgram:
    H: np.ndarray
    g: np.ndarray
    c: float = 0.0
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    A_in: Optional[np.ndarray] = None
    b_in: Optional[np.ndarray] = None
    initial: Optional[np.ndarray] = None

    def dim(self) -> int:
        return len(self.g)


@dataclass
class QpSolution:
    status: str  # optimal | infeasible | unbounded | max_iter
    rho: Optional[np.ndarray] = None
    value: Optional[float] = None
    active_set: tuple = ()
    iterations: int = 0
    eq_multipliers: Optional[np.ndarray] = None
    ineq_multipliers: Optional[np.ndarray] = None
    objective_history: list = dfield(default_factory=list)
    max_violation: float = 0.0


def _as_matrix(A, b, d):
    if A is None or (hasattr(A, "size") and A.size == 0) or (isinstance(A, (list, tuple)) and not len(A)):
        return np.zeros((0, d)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if A.shape != (len(b), d):
        raise QpError("constraint shape mismatch: %r vs %d rows, dim %d" % (A.shape, len(b), d))
    return A, b


def _psd_clip(H: np.ndarray) -> np.ndarray:
    d = H.shape[0]
    Hs = 0.5 * (H + H.T)
    w, V = np.linalg.eigh(Hs)
    scale = max(np.trace(Hs) / d, 0.0)
    floor = -1e-8 * max(scale, 1.0)
    if w.min(initial=0.0) < floor:
        raise QpError("objective matrix is not positive semidefinite (min eig %.3e)" % w.min())
    w = np.clip(w, 0.0, None)
    return (V * w) @ V.T


class _Normalized:
    """Row-normalized copy of the constraint system with index bookkeeping."""

    def __init__(self, qp: QuadraticProgram):
        d = qp.dim()
        A_eq, b_eq = _as_matrix(qp.A_eq, qp.b_eq, d)
        A_in, b_in = _as_matrix(qp.A_in, qp.b_in, d)
        self.trivially_infeasible = False
        eq_rows, eq_rhs, self.eq_norms, self.eq_keep = [], [], [], []
        for i in range(len(b_eq)):
            nrm = np.linalg.norm(A_eq[i])
            if nrm <= 1e-14:
                if abs(b_eq[i]) > FEAS_TOL:
                    self.trivially_infeasible = True
                continue
            eq_rows.append(A_eq[i] / nrm)
            eq_rhs.append(b_eq[i] / nrm)
            self.eq_norms.append(nrm)
            self.eq_keep.append(i)
        in_rows, in_rhs, self.in_norms, self.in_keep = [], [], [], []
        for i in range(len(b_in)):
            nrm = np.linalg.norm(A_in[i])
            if nrm <= 1e-14:
                if b_in[i] > FEAS_TOL:
                    self.trivially_infeasible = True
                continue
            in_rows.append(A_in[i] / nrm)
            in_rhs.append(b_in[i] / nrm)
            self.in_norms.append(nrm)
            self.in_keep.append(i)
        self.A_eq = np.array(eq_rows).reshape(len(eq_rows), d)
        self.b_eq = np.array(eq_rhs)
        self.A_in = np.array(in_rows).reshape(len(in_rows), d)
        self.b_in = np.array(in_rhs)
        self.n_eq_orig = len(b_eq)
        self.n_in_orig = len(b_in)

    def feasible(self, x) -> bool:
        if len(self.b_eq) and np.max(np.abs(self.A_eq @ x - self.b_eq)) > FEAS_TOL:
            return False
        if len(self.b_in) and np.min(self.A_in @ x - self.b_in) < -FEAS_TOL:
            return False
        return True


def _null_basis(A: np.ndarray, d: int) -> np.ndarray:
    if A.shape[0] == 0:
        return np.eye(d)
    U, s, Vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-12 * max(s[0], 1.0))) if len(s) else 0
    return Vt[rank:].T


class _Reduced:
    """The problem in equality-eliminated coordinates x = base + N z.

    Inequality rows are projected onto the null space of the equality
    system and renormalized.  Rows whose projection vanishes are fixed by
    the equalities: they are dropped when satisfied and raise _Infeasible
    otherwise.
    """

    def __init__(self, norm: _Normalized, d: int):
        if len(norm.b_eq):
            base, *_ = np.linalg.lstsq(norm.A_eq, norm.b_eq, rcond=None)
            resid = float(np.max(np.abs(norm.A_eq @ base - norm.b_eq)))
            if resid > FEAS_TOL:
                raise _Infeasible(resid)
            N = _null_basis(norm.A_eq, d)
        else:
            base = np.zeros(d)
            N = np.eye(d)
        self.base = base
        self.N = N
        self.kz = N.shape[1]
        G_all = norm.A_in @ N if len(norm.b_in) else np.zeros((0, self.kz))
        h_all = norm.b_in - norm.A_in @ base if len(norm.b_in) else np.zeros(0)
        rows, rhs, keep, norms = [], [], [], []
        for i in range(len(h_all)):
            nrm = np.linalg.norm(G_all[i])
            if nrm <= 1e-12:
                if h_all[i] > FEAS_TOL:
                    raise _Infeasible(float(h_all[i]))
                continue
            rows.append(G_all[i] / nrm)
            rhs.append(h_all[i] / nrm)
            keep.append(i)
            norms.append(nrm)
        self.G = np.array(rows).reshape(len(rows), self.kz)
        self.h = np.array(rhs)
        self.keep = keep  # reduced row -> row index in norm.A_in
        self.norms = norms

    def lift(self, z: np.ndarray) -> np.ndarray:
        return self.base + self.N @ z

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.N.T @ (x - self.base)

    def violation(self, z: np.ndarray) -> float:
        if not len(self.h):
            return 0.0
        return float(np.max(self.h - self.G @ z, initial=0.0))


def _core(
    H: np.ndarray,
    g: np.ndarray,
    G: np.ndarray,
    h: np.ndarray,
    z0: np.ndarray,
    cap: int,
    fval: Callable[[np.ndarray], float],
    dual_scale: Optional[np.ndarray] = None,
):
    """Active-set loop on  min 1/2 z'Hz + g'z  s.t.  Gz >= h  from feasible z0.

    Returns (status, z, work, multipliers-on-work, iterations, history).
    dual_scale tightens the termination test per row (multiplier >= -DUAL_TOL
    * dual_scale[i]), which callers use so that multipliers stay nonnegative
    after being mapped back through row renormalization.
    """
    kz = len(g)
    m = len(h)
    scale = dual_scale if dual_scale is not None else np.ones(m)
    z = np.asarray(z0, dtype=float).copy()
    slack = G @ z - h if m else np.zeros(0)
    work = sorted(i for i in range(m) if slack[i] <= ACT_TOL)
    history = []
    status = "max_iter"
    lam_work = np.zeros(len(work))
    it = 0
    pad = _RATIO_PAD
    best = np.inf
    seen: set = set()
    while it < cap:
        it += 1
        f = fval(z)
        history.append(f)
        if f < best - 1e-12 * (1.0 + abs(f)):
            best = f
            seen.clear()
            pad = _RATIO_PAD
        else:
            key = tuple(work)
            if key in seen:
                pad = min(pad * 10.0, _PAD_MAX)
                seen.clear()
            else:
                seen.add(key)
        W = G[work] if work else np.zeros((0, kz))
        grad = H @ z + g
        Z = _null_basis(W, kz)
        zero_curv = False
        if Z.shape[1] == 0:
            p = np.zeros(kz)
        else:
            Hz = Z.T @ H @ Z
            gz = Z.T @ grad
            w, V = np.linalg.eigh(0.5 * (Hz + Hz.T))
            thr = 1e-10 * max(w.max(initial=0.0), 1.0)
            zero_mask = w <= thr
            gz0 = V[:, zero_mask].T @ gz
            if np.linalg.norm(gz0) > 1e-10 * max(1.0, np.linalg.norm(grad)):
                p = Z @ (-(V[:, zero_mask] @ gz0))
                p /= np.linalg.norm(p)
                zero_curv = True
            elif (~zero_mask).any():
                Vp = V[:, ~zero_mask]
                p = Z @ (-(Vp @ ((Vp.T @ gz) / w[~zero_mask])))
            else:
                p = np.zeros(kz)
        if np.linalg.norm(p) <= 1e-11 * (1.0 + np.linalg.norm(z)):
            # stationary on the working set: inspect multipliers
            if not work:
                status = "optimal"
                lam_work = np.zeros(0)
                break
            lam, *_ = np.linalg.lstsq(W.T, grad, rcond=None)
            margins = lam + DUAL_TOL * np.array([scale[i] for i in work])
            if margins.min() >= 0.0:
                status = "optimal"
                lam_work = lam
                break
            worst = margins.min()
            drop_pos = min(k for k in range(len(work)) if margins[k] <= worst + 1e-12)
            work.pop(drop_pos)
            continue
        # ratio test: nearest blocking constraint, with a small tolerance
        # window; inside the window prefer the row met most steeply
        alpha_newton = np.inf if zero_curv else 1.0
        in_work = np.zeros(m, dtype=bool)
        for i in work:
            in_work[i] = True
        jstar = -1
        alpha_block = np.inf
        if m:
            sdir = G @ p
            slack = np.maximum(G @ z - h, 0.0)
            p_norm = float(np.linalg.norm(p))
            cand = np.where(~in_work & (sdir < -1e-11 * p_norm))[0]
            if len(cand):
                ratios = slack[cand] / (-sdir[cand])
                amax = float(np.min((slack[cand] + pad) / (-sdir[cand])))
                window = cand[ratios <= amax]
                steep = -sdir[window]
                best_steep = steep.max()
                pick = window[steep >= best_steep - 1e-12 * max(best_steep, 1.0)]
                jstar = int(pick.min())
                alpha_block = float(
                    max(slack[jstar] / (-sdir[jstar]), 0.0)
                )
        if not np.isfinite(min(alpha_newton, alpha_block)):
            status = "unbounded"
            break
        if alpha_newton <= alpha_block:
            z = z + alpha_newton * p
        else:
            z = z + alpha_block * p
            work.append(jstar)
            work.sort()
    return status, z, work, lam_work, it, history


def _initial_z(qp: QuadraticProgram, norm: _Normalized, red: _Reduced) -> Optional[np.ndarray]:
    if qp.initial is None:
        return None
    x0 = np.asarray(qp.initial, dtype=float)
    if not norm.feasible(x0):
        return None
    z0 = red.project(x0)
    if red.violation(z0) <= FEAS_TOL:
        return z0
    return None


def _margin_lp(red: _Reduced) -> Optional[np.ndarray]:
    """Maximize the worst inequality margin (an LP in (z, tau), tau <= 1).

    A strictly positive optimum yields an interior feasible point, which both
    skips the slack subproblem and gives the main loop a clean start.  Any
    other outcome returns None and leaves the verdict to the slack QP.
    """
    mi = len(red.h)
    kz = red.kz
    dz = kz + 1
    A = np.zeros((mi + 1, dz))
    A[:mi, :kz] = red.G
    A[:mi, kz] = -1.0
    A[mi, kz] = -1.0
    b = np.concatenate([red.h, [-1.0]])
    g = np.zeros(dz)
    g[kz] = -1.0
    z0 = np.zeros(dz)
    z0[kz] = min(float(np.min(red.G @ z0[:kz] - red.h)), 1.0)
    cap = 100 * (dz + mi + 2)
    status, wsol, _, _, _, _ = _core(
        np.zeros((dz, dz)), g, A, b, z0, cap, lambda v: -float(v[kz])
    )
    if status == "optimal" and wsol[kz] >= FEAS_TOL:
        return wsol[:kz]
    return None


def _phase1_reduced(qp: QuadraticProgram, norm: _Normalized, red: _Reduced) -> np.ndarray:
    """A feasible point in reduced coordinates.  Raises _Infeasible when the
    minimum total violation is genuinely positive, QpError when the slack
    subproblem stalls before certifying either way."""
    z = _initial_z(qp, norm, red)
    if z is not None:
        return z
    z = np.zeros(red.kz)
    if red.violation(z) <= FEAS_TOL:
        return z
    zi = _margin_lp(red)
    if zi is not None and red.violation(zi) <= FEAS_TOL:
        return zi
    # slack repair: min 1/2 |s|^2  s.t.  G z + s >= h, s >= 0
    mi = len(red.h)
    dz = red.kz + mi
    H = np.zeros((dz, dz))
    H[red.kz :, red.kz :] = np.eye(mi)
    g = np.zeros(dz)
    A = np.vstack(
        [
            np.hstack([red.G, np.eye(mi)]),
            np.hstack([np.zeros((mi, red.kz)), np.eye(mi)]),
        ]
    )
    b = np.concatenate([red.h, np.zeros(mi)])
    s0 = np.maximum(red.h - red.G @ z, 0.0)
    w0 = np.concatenate([z, s0])
    cap = 100 * (dz + 2 * mi + 1)
    status, wsol, _, _, _, _ = _core(
        H, g, A, b, w0, cap, lambda v: float(0.5 * v[red.kz :] @ v[red.kz :])
    )
    zr = wsol[: red.kz]
    violation = red.violation(zr)
    if violation <= FEAS_TOL:
        return zr
    if status == "optimal":
        raise _Infeasible(violation)
    raise QpError(
        "phase 1 stalled before certifying feasibility (status %s, violation %.3e)"
        % (status, violation)
    )


def phase1(qp: QuadraticProgram) -> np.ndarray:
    """A feasible point: the caller's initial if feasible, else the min-norm
    equality solution repaired by a violation-minimizing slack QP.  Raises
    on infeasibility (violation above FEAS_TOL)."""
    norm = _Normalized(qp)
    if norm.trivially_infeasible:
        raise _Infeasible(np.inf)
    red = _Reduced(norm, qp.dim())
    return red.lift(_phase1_reduced(qp, norm, red))


def solve(qp: QuadraticProgram, max_iter: Optional[int] = None) -> QpSolution:
    d = qp.dim()
    H_orig = 0.5 * (np.asarray(qp.H, dtype=float) + np.asarray(qp.H, dtype=float).T)
    H = _psd_clip(H_orig)
    g = np.asarray(qp.g, dtype=float)
    norm = _Normalized(qp)
    if norm.trivially_infeasible:
        return QpSolution(status="infeasible", max_violation=np.inf)

    def objective(x):
        return float(0.5 * x @ H_orig @ x + g @ x + qp.c)

    try:
        red = _Reduced(norm, d)
        z = _phase1_reduced(qp, norm, red)
    except _Infeasible as exc:
        return QpSolution(status="infeasible", max_violation=exc.violation)

    m_in = len(norm.b_in)
    cap = max_iter if max_iter is not None else 100 * (d + len(norm.b_eq) + m_in + 1)
    if red.kz == 0:
        status, work, lam_work, iterations, history = "optimal", [], np.zeros(0), 0, [objective(red.base)]
        z = np.zeros(0)
    else:
        Hz = red.N.T @ H @ red.N
        gz = red.N.T @ (H @ red.base + g)

        def fval(zv):
            return objective(red.lift(zv))

        status, z, work, lam_work, iterations, history = _core(
            Hz, gz, red.G, red.h, z, cap, fval, dual_scale=np.array(red.norms)
        )
    if status == "unbounded":
        return QpSolution(status="unbounded", iterations=iterations, objective_history=history)
    x = red.lift(z)
    # map multipliers and the active set back to the caller's row indexing
    eq_mult = np.zeros(norm.n_eq_orig)
    in_mult = np.zeros(norm.n_in_orig)
    grad = H @ x + g
    resid = grad.copy()
    if status == "optimal" and len(lam_work) == len(work):
        for k, widx in enumerate(work):
            row = red.keep[widx]
            lam_x = lam_work[k] / red.norms[widx]
            in_mult[norm.in_keep[row]] = lam_x / norm.in_norms[row]
            resid -= lam_x * norm.A_in[row]
    if len(norm.b_eq):
        lam_eq, *_ = np.linalg.lstsq(norm.A_eq.T, resid, rcond=None)
        for k, i in enumerate(norm.eq_keep):
            eq_mult[i] = lam_eq[k] / norm.eq_norms[k]
    active = tuple(norm.in_keep[red.keep[i]] for i in work)
    return QpSolution(
        status=status,
        rho=x,
        value=objective(x),
        active_set=active,
        iterations=iterations,
        eq_multipliers=eq_mult,
        ineq_multipliers=in_mult,
        objective_history=history,
    )


def kkt_residuals(qp: QuadraticProgram, sol: QpSolution) -> dict:
    """Certificate residuals for an optimal solution (all should be tiny)."""
    d = qp.dim()
    x = sol.rho
    H = 0.5 * (np.asarray(qp.H, dtype=float) + np.asarray(qp.H, dtype=float).T)
    g = np.asarray(qp.g, dtype=float)
    A_eq, b_eq = _as_matrix(qp.A_eq, qp.b_eq, d)
    A_in, b_in = _as_matrix(qp.A_in, qp.b_in, d)
    grad = H @ x + g
    stat = grad.copy()
    if len(b_eq):
        stat -= A_eq.T @ sol.eq_multipliers
    if len(b_in):
        stat -= A_in.T @ sol.ineq_multipliers
    out = {
        "stationarity": float(np.linalg.norm(stat)) / max(1.0, float(np.linalg.norm(grad))),
        "primal_eq": float(np.max(np.abs(A_eq @ x - b_eq))) if len(b_eq) else 0.0,
        "primal_in": float(-min(np.min(A_in @ x - b_in), 0.0)) if len(b_in) else 0.0,
        "dual": float(-min(sol.ineq_multipliers.min(), 0.0)) if len(b_in) else 0.0,
        "complementarity": float(
            np.max(np.abs(sol.ineq_multipliers * (A_in @ x - b_in)))
        )
        if len(b_in)
        else 0.0,
    }
    return out
