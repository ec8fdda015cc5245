"""Scratch: sweep Bernstein degrees for the slant family."""
import numpy as np

from ratph.builtin_jobs import BUILTIN_JOBS
from ratph.constraints import cusp_rows, hermite_rows, mu_polynomials, natural_degree
from ratph.jobs import run_job
from ratph.objectives import energy_objective
from ratph.qpsolve import QuadraticProgram, solve
from ratph.spaces import assemble_space


def sweep(name, degrees):
    cfg = BUILTIN_JOBS[name]()
    space = assemble_space(cfg.field, cfg.requests, external=cfg.external).to_float()
    mus = mu_polynomials(space)
    rows, rhs = hermite_rows(space, cfg.data)
    obj = energy_objective(space, tol=cfg.tol)
    H, g, c0 = obj.H, obj.g, obj.c
    sign = cfg.orientation * space.delta_sign()
    print("%s: dim=%d natural deg=%d" % (name, space.dim, natural_degree(mus)))
    for m in degrees:
        Ain, bin_ = cusp_rows(space, sign, m, 0.0, mus)
        qp = QuadraticProgram(
            H=H, g=g, c=c0,
            A_eq=np.asarray(rows, float), b_eq=np.asarray(rhs, float),
            A_in=np.asarray(Ain, float), b_in=np.asarray(bin_, float),
            initial=cfg.initial,
        )
        try:
            sol = solve(qp)
        except Exception as exc:
            print("  m=%-3d EXC %s" % (m, exc))
            continue
        print("  m=%-3d %-10s E=%s it=%d" % (m, sol.status,
              "%.6f" % sol.value if sol.value is not None else "-", sol.iterations))


sweep("slant_helix_g1", [7, 8, 9, 10, 12, 15, 20, 30, 50])
sweep("slant_helix_c1_poly", [11, 12, 13, 14, 15, 16, 18, 20, 25, 30, 40, 60])
sweep("slant_helix_c1_mixed", [13, 14, 15, 16, 18, 20, 25, 30, 40, 60])
