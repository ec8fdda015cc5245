"""Scratch: OSQP ground-truth sweeps (reduced + row-normalized) for slant C1."""
import numpy as np
import osqp
import scipy.sparse as sp
from fractions import Fraction as Fr

from ratph.builtin_jobs import _slant_helix_field, _SLANT_DATA
from ratph.constraints import HermiteData, cusp_rows, hermite_rows, mu_polynomials, natural_degree
from ratph.objectives import energy_objective
from ratph.spaces import PolynomialRequest, RegularRequest, assemble_space


def reduced_opt(H, g, A_eq, b_eq, A_in, b_in):
    x0, *_ = np.linalg.lstsq(A_eq, b_eq, rcond=None)
    _, sv, Vt = np.linalg.svd(A_eq)
    rank = int((sv > 1e-12 * sv[0]).sum())
    N = Vt[rank:].T  # d x k
    # objective in z: (x0+Nz)^T H (x0+Nz)
    Hz = 2.0 * N.T @ H @ N           # OSQP P convention: 1/2 z P z + q z
    qz = 2.0 * N.T @ H @ x0
    Az = A_in @ N
    bz = b_in - A_in @ x0
    scale = np.maximum(np.linalg.norm(Az, axis=1), 1e-30)
    Az = Az / scale[:, None]
    bz = bz / scale
    prob = osqp.OSQP()
    prob.setup(P=sp.csc_matrix(Hz + 1e-10 * np.eye(Hz.shape[0])), q=qz,
               A=sp.csc_matrix(Az), l=bz, u=np.full(len(bz), np.inf),
               eps_abs=1e-11, eps_rel=1e-11, max_iter=500000, polish=True,
               verbose=False)
    res = prob.solve()
    if res.x is None or "solved" not in res.info.status:
        return res.info.status, None
    x = x0 + N @ res.x
    return res.info.status, float(x @ H @ x)


def sweep(label, requests, degrees, mode="C1"):
    field = _slant_helix_field()
    space = assemble_space(field, requests).to_float()
    mus = mu_polynomials(space)
    rows, rhs = hermite_rows(space, HermiteData(mode=mode, **_SLANT_DATA))
    A_eq = np.asarray(rows, float)
    b_eq = np.asarray(rhs, float)
    obj = energy_objective(space, tol=1e-11)
    nat = natural_degree(mus)
    print("%s dim=%d natural=%d" % (label, space.dim, nat))
    for m in degrees:
        if m < nat:
            continue
        Ain, bin_ = cusp_rows(space, 1, m, 0.0, mus)
        st, E = reduced_opt(obj.H, obj.g, A_eq, b_eq, np.asarray(Ain, float),
                            np.asarray(bin_, float))
        print("  m=%-4d %-22s E=%s" % (m, st, "%.5f" % E if E is not None else "-"))


reg1 = RegularRequest(beta=Fr(-1), orders=(-4,), normalize="field")
reg2 = RegularRequest(beta=Fr(-2), orders=(-4,), normalize="field")
reg2b = RegularRequest(beta=Fr(-2), orders=(-4, -5), normalize="field")

degrees = [12, 13, 14, 15, 16, 18, 20, 24, 30, 40, 60, 100, 150]
sweep("poly 2..9 (dim12)", (reg1, PolynomialRequest(ells=tuple(range(2, 10)))), degrees)
sweep("mixed 2..7 + reg(-2) (dim11)", (reg1, PolynomialRequest(ells=tuple(range(2, 8))), reg2), degrees)
sweep("mixed 2..6 + reg(-2,{-4,-5}) (dim11)", (reg1, PolynomialRequest(ells=tuple(range(2, 7))), reg2b), degrees)
sweep("G1 check (dim7)", (reg1, PolynomialRequest(ells=(2, 3, 4))), [12, 16, 20, 30], mode="G1")
