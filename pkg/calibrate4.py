"""Scratch: debug slant G1 infeasibility."""
import numpy as np

from ratph.builtin_jobs import BUILTIN_JOBS
from ratph.constraints import cusp_rows, hermite_rows, mu_polynomials, natural_degree
from ratph.spaces import assemble_space

cfg = BUILTIN_JOBS["slant_helix_g1"]()
space = assemble_space(cfg.field, cfg.requests, external=cfg.external).to_float()
print("dim", space.dim)
for e in space.basis:
    print("  ", e.kind, e.label, "mu check ->", end=" ")
mus = mu_polynomials(space)
print()
for e, mu in zip(space.basis, mus):
    print("  %-34s mu = %s" % (e.label or e.kind, [round(float(c), 6) for c in mu.coeffs]))
print("delta_sign:", space.delta_sign())

rows, rhs = hermite_rows(space, cfg.data)
A = np.asarray(rows, float)
b = np.asarray(rhs, float)
print("eq rows shape", A.shape)
x, res, rank, _ = np.linalg.lstsq(A, b, rcond=None)
print("eq lstsq rank", rank, "residual", float(np.linalg.norm(A @ x - b)))

m = natural_degree(mus)
print("natural degree", m)
sign = cfg.orientation * space.delta_sign()
Ain, bin_ = cusp_rows(space, sign, m, 0.0, mus)
Ain = np.asarray(Ain, float)
print("cusp rows", Ain.shape, "sign", sign)
print("cusp at lstsq point:", np.round(Ain @ x, 4))

# brute: minimize slack violation over the equality-solution affine set
from scipy.optimize import linprog  # noqa: E402

# variables: rho (d) ; maximize margin s s.t. Ain rho >= s, A rho = b
d = space.dim
c = np.zeros(d + 1)
c[-1] = -1.0
Aub = np.hstack([-Ain, np.ones((Ain.shape[0], 1))])
bub = np.zeros(Ain.shape[0])
Aeq = np.hstack([A, np.zeros((A.shape[0], 1))])
sol = linprog(c, A_ub=Aub, b_ub=bub, A_eq=Aeq, b_eq=b, bounds=[(None, None)] * (d + 1))
print("LP status", sol.status, "max margin", -sol.fun if sol.success else None)
if sol.success:
    print("rho*", np.round(sol.x[:-1], 4))
