"""Job configuration, the end-to-end solve pipeline, and report emission.

A job bundles a tangent field, a curve-space recipe, Hermite data, an
objective, and cusp settings.  ``run_job`` walks the pipeline

    field -> space -> constraints -> objective -> solve -> verify -> emit

and returns a ``JobReport`` whose numbers are recomputed from the returned
coefficient vector, never copied from solver internals.  Any stage error is
re-raised as ``JobError`` tagged with the stage name.

Config files are JSON.  Scalars may be written as numbers or as strings
("1/3", "0.25"); strings are parsed exactly, so rational inputs survive the
exact construction path.  Complex poles are two-element arrays [re, im].
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field as dfield, asdict
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import Polynomial, Quaternion, QuaternionPolynomial, Vec3Poly, to_bernstein
from .hodograph import FieldError, TangentField, make_tangent_field, validate_field
from .spaces import (
    InterpolationSpace,
    NonRegularRequest,
    PolynomialRequest,
    RegularRequest,
    SpaceError,
    assemble_space,
)
from .rebase import energy_orthonormalize
from .constraints import (
    ConstraintError,
    HermiteData,
    cusp_rows,
    hermite_rows,
    mu_polynomials,
    natural_degree,
)
from .objectives import (
    Objective,
    QuadratureError,
    arclength_objective,
    curve_arclength,
    curve_energy,
    curve_signed_arclength,
    energy_objective,
    target_length_objective,
)
from . import qpsolve
from .plotting import emit_plot


class ConfigError(ValueError):
    pass


class JobError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__("stage '%s': %s" % (stage, cause))
        self.stage = stage
        self.cause = cause


# ---------------------------------------------------------------------------
# configuration


@dataclass
class CuspSettings:
    enabled: bool = True
    bernstein_degree: Optional[int] = None  # None -> natural degree of the mu family
    bound: float = 0.0

    def validate(self):
        if self.bernstein_degree is not None and self.bernstein_degree < 0:
            raise ConfigError("bernstein_degree must be nonnegative")
        if self.bound > 0:
            raise ConfigError("cusp bound must be <= 0 (0 is the strict constraint)")


@dataclass
class ObjectiveSettings:
    kind: str = "energy"  # energy | arclength | target_length
    target: Optional[float] = None

    def validate(self):
        if self.kind not in ("energy", "arclength", "target_length"):
            raise ConfigError("unknown objective kind %r" % self.kind)
        if self.kind == "target_length":
            if self.target is None or float(self.target) <= 0:
                raise ConfigError("target_length objective needs a positive target")


@dataclass
class JobConfig:
    name: str
    field: TangentField
    requests: tuple
    data: HermiteData
    external: Optional[Vec3Poly] = None
    objective: ObjectiveSettings = dfield(default_factory=ObjectiveSettings)
    cusp: CuspSettings = dfield(default_factory=CuspSettings)
    orientation: int = 1  # +1: traverse along +F; -1: along -F
    initial: Optional[tuple] = None
    tol: float = 1e-10
    samples: int = 200
    arrow_scale: float = 0.2
    seed: Optional[int] = None
    # Deep pole ladders are algebraically independent but exponentially
    # correlated on [0, 1] (energy Gram condition far beyond 1/eps), which no
    # double-precision pipeline on the raw generators can survive.  Setting
    # orthonormalize=True rebases the space exactly to an energy-orthonormal
    # basis before any floats are formed; requires exact input data and the
    # energy objective.
    orthonormalize: bool = False

    def validate(self):
        if self.orientation not in (1, -1):
            raise ConfigError("orientation must be +1 or -1")
        if self.samples < 2:
            raise ConfigError("need at least 2 samples")
        if not (0 < self.tol <= 1e-2):
            raise ConfigError("tol out of range (0, 1e-2]")
        if self.orthonormalize and self.objective.kind != "energy":
            raise ConfigError("orthonormalize supports the energy objective only")
        self.objective.validate()
        self.cusp.validate()


def _num(x):
    """Exact when possible: ints and strings become Fractions, floats stay."""
    if isinstance(x, bool):
        raise ConfigError("boolean is not a number: %r" % x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError("cannot parse number %r: %s" % (x, exc))
    raise ConfigError("not a number: %r" % (x,))


def _scalar(x):
    """A real or complex scalar: number, string, or [re, im]."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ConfigError("complex scalar needs [re, im], got %r" % (x,))
        return complex(float(_num(x[0])), float(_num(x[1])))
    return _num(x)


def _vec3(x, what):
    if not isinstance(x, (list, tuple)) or len(x) != 3:
        raise ConfigError("%s must be a 3-vector, got %r" % (what, x))
    return tuple(_num(c) for c in x)


def _parse_field(d) -> TangentField:
    if not isinstance(d, dict):
        raise ConfigError("'field' must be an object")
    if "A" in d:
        rows = d["A"]
        if not isinstance(rows, list) or not rows:
            raise ConfigError("'field.A' must be a list of quaternion coefficients")
        coeffs = []
        for row in rows:
            if not isinstance(row, (list, tuple)) or len(row) != 4:
                raise ConfigError("quaternion coefficient needs [w, x, y, z], got %r" % (row,))
            coeffs.append(Quaternion(*(_num(c) for c in row)))
        return make_tangent_field(QuaternionPolynomial(tuple(coeffs)))
    if "F" in d:
        rows = d["F"]
        if not isinstance(rows, list) or not rows:
            raise ConfigError("'field.F' must be a list of 3-vectors")
        F = Vec3Poly.of(*[_vec3(row, "field.F coefficient") for row in rows])
        sigma = None
        if d.get("sigma") is not None:
            sigma = Polynomial.of(*[_num(c) for c in d["sigma"]])
        field = TangentField(F=F, sigma=sigma, A=None)
        validate_field(field)
        return field
    raise ConfigError("'field' needs either 'A' (quaternion) or 'F' (raw) coefficients")


def _parse_space(d):
    if not isinstance(d, dict):
        raise ConfigError("'space' must be an object")
    requests = []
    for entry in d.get("nonregular", []):
        beta = _scalar(entry["beta"])
        triplet = entry.get("triplet")
        if triplet is not None:
            triplet = tuple(int(i) for i in triplet)
        requests.append(
            NonRegularRequest(beta=beta, triplet=triplet, normalize=entry.get("normalize", "field"))
        )
    for entry in d.get("regular", []):
        beta = _scalar(entry["beta"])
        orders = tuple(int(k) for k in entry["orders"])
        requests.append(
            RegularRequest(beta=beta, orders=orders, normalize=entry.get("normalize", "field"))
        )
    ells = d.get("polynomial", [])
    if ells:
        requests.append(PolynomialRequest(ells=tuple(int(l) for l in ells)))
    external = None
    if d.get("external") is not None:
        external = Vec3Poly.of(*[_vec3(row, "external coefficient") for row in d["external"]])
    return tuple(requests), external


def parse_config(d: dict, name: Optional[str] = None) -> JobConfig:
    if not isinstance(d, dict):
        raise ConfigError("job config must be a JSON object")
    try:
        field = _parse_field(d.get("field", {}))
    except (FieldError, KeyError, TypeError) as exc:
        raise ConfigError("bad field: %s" % exc)
    try:
        requests, external = _parse_space(d.get("space", {}))
    except (KeyError, TypeError) as exc:
        raise ConfigError("bad space: %s" % exc)
    data_d = d.get("data")
    if not isinstance(data_d, dict):
        raise ConfigError("'data' section is required")
    try:
        mode = data_d.get("mode", "G1")
        data = HermiteData(
            p0=_vec3(data_d["p0"], "p0"),
            p1=_vec3(data_d["p1"], "p1"),
            v0=_vec3(data_d["v0"], "v0") if data_d.get("v0") is not None else None,
            v1=_vec3(data_d["v1"], "v1") if data_d.get("v1") is not None else None,
            mode=mode,
        )
    except KeyError as exc:
        raise ConfigError("data section misses %s" % exc)
    except ConstraintError as exc:
        raise ConfigError(str(exc))
    obj_d = d.get("objective", {})
    objective = ObjectiveSettings(
        kind=obj_d.get("kind", "energy"),
        target=float(obj_d["target"]) if obj_d.get("target") is not None else None,
    )
    cusp_d = d.get("cusp", {})
    cusp = CuspSettings(
        enabled=bool(cusp_d.get("enabled", True)),
        bernstein_degree=int(cusp_d["bernstein_degree"])
        if cusp_d.get("bernstein_degree") is not None
        else None,
        bound=float(cusp_d.get("bound", 0.0)),
    )
    initial = d.get("initial")
    if initial is not None:
        initial = tuple(float(_num(x)) for x in initial)
    cfg = JobConfig(
        name=name or d.get("name", "job"),
        field=field,
        requests=requests,
        data=data,
        external=external,
        objective=objective,
        cusp=cusp,
        orientation=int(d.get("orientation", 1)),
        initial=initial,
        tol=float(d.get("tol", 1e-10)),
        samples=int(d.get("samples", 200)),
        arrow_scale=float(d.get("arrow_scale", 0.2)),
        seed=d.get("seed"),
        orthonormalize=bool(d.get("orthonormalize", False)),
    )
    cfg.validate()
    return cfg


def load_config(path: str) -> JobConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise ConfigError("config %s is not valid JSON: %s" % (path, exc))
    default_name = os.path.splitext(os.path.basename(path))[0]
    return parse_config(raw, name=raw.get("name", default_name))


# ---------------------------------------------------------------------------
# report


@dataclass
class JobReport:
    name: str
    status: str
    dim: int = 0
    mode: str = "G1"
    objective_kind: str = "energy"
    value: Optional[float] = None
    energy: Optional[float] = None
    arclength: Optional[float] = None
    signed_arclength: Optional[float] = None
    rho: Optional[list] = None
    active_cusp_rows: Optional[list] = None
    iterations: int = 0
    kkt: Optional[dict] = None
    endpoint_residual: Optional[float] = None
    velocity_residual: Optional[float] = None
    direction_angles: Optional[list] = None
    mu_bernstein: Optional[list] = None
    min_mu_grid: Optional[float] = None
    mu_sign: int = 1
    bernstein_degree: Optional[int] = None
    numerator_degree: Optional[int] = None
    denominator_degree: Optional[int] = None
    near_degenerate: bool = False
    orthonormalized: bool = False
    verified: Optional[bool] = None
    verify_notes: list = dfield(default_factory=list)
    infeasibility: Optional[float] = None
    files: dict = dfield(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# pipeline helpers


def _stage(name):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, etype, err, tb):
            if err is not None and not isinstance(err, JobError):
                raise JobError(name, err) from err
            return False

    return _Ctx()


def sample_curve(space: InterpolationSpace, rho, count: int) -> np.ndarray:
    """(count, 5) table of t, x, y, z, speed at uniform parameters.

    Exact-backed spaces are sampled at rational parameters so each point is
    evaluated exactly before the float conversion."""
    rho = np.asarray(rho, dtype=float)
    rows = np.zeros((count, 5))
    sigma = space.field.sigma
    for k in range(count):
        if space.exact_eval:
            t = Fraction(k, count - 1)
        else:
            t = k / (count - 1)
        pos = space.curve_value(rho, t)
        if sigma is not None:
            speed = abs(float(space.speed_value(rho, t))) * float(sigma(t))
        else:
            vel = space.curve_velocity(rho, t)
            speed = math.sqrt(sum(float(c) ** 2 for c in vel))
        rows[k] = (float(t), float(pos[0]), float(pos[1]), float(pos[2]), speed)
    return rows


def write_samples_csv(path: str, rows: np.ndarray):
    with open(path, "w") as fh:
        fh.write("t,x,y,z,speed\n")
        for row in rows:
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def _curve_degrees(space: InterpolationSpace, rho) -> tuple:
    """(numerator degree, denominator degree) of the solution curve, with the
    common denominator built from the space's delta factors on curve level."""
    # denominator: product of (t - root)^(max |negative exponent| used)
    depth = {}
    for i, e in enumerate(space.basis):
        if abs(rho[i]) <= 1e-12:
            continue
        for beta, terms in e.curve_terms:
            worst = min((j for j, _ in terms), default=0)
            if worst < 0:
                key = complex(beta)
                depth[key] = max(depth.get(key, 0), -worst)
    den_deg = sum(depth.values())
    # numerator degree: polynomial part plus positive Laurent exponents,
    # multiplied out against the denominator
    poly_deg = -1
    for i, e in enumerate(space.basis):
        if abs(rho[i]) <= 1e-12:
            continue
        if e.curve_poly is not None and not e.curve_poly.is_zero():
            poly_deg = max(poly_deg, e.curve_poly.degree)
        if e.curve_constant is not None:
            poly_deg = max(poly_deg, 0)
        for beta, terms in e.curve_terms:
            top = max((j for j, _ in terms), default=0)
            if top > 0:
                poly_deg = max(poly_deg, top)
    num_deg = max(poly_deg, -1) + den_deg if poly_deg >= 0 else den_deg - 1
    return max(num_deg, 0), den_deg


def run_job(cfg: JobConfig, outdir: Optional[str] = None) -> JobReport:
    cfg.validate()
    report = JobReport(name=cfg.name, status="pending", mode=cfg.data.mode, objective_kind=cfg.objective.kind)

    with _stage("space"):
        # rebased ladders are checked for independence by the exact Gram
        # itself; the float collocation check would reject them spuriously
        space = assemble_space(
            cfg.field,
            cfg.requests,
            external=cfg.external,
            independence_tol=0.0 if cfg.orthonormalize else 1e-9,
        )
        rebased = None
        if cfg.orthonormalize:
            rebased = energy_orthonormalize(space)
            fspace = rebased.space
            report.orthonormalized = True
        else:
            fspace = space.to_float()
        report.dim = fspace.dim

    with _stage("constraints"):
        mus = mu_polynomials(fspace)
        A_eq, b_eq = hermite_rows(fspace, cfg.data)
        sign = cfg.orientation * fspace.delta_sign()
        report.mu_sign = sign
        A_in = b_in = None
        m = None
        if cfg.cusp.enabled:
            m = cfg.cusp.bernstein_degree
            if m is None:
                m = natural_degree(mus)
            A_in, b_in = cusp_rows(fspace, sign, degree=m, bound=cfg.cusp.bound, mus=mus)
        report.bernstein_degree = m

    with _stage("objective"):
        if cfg.objective.kind == "energy":
            if rebased is not None:
                # the rebasing pass already holds the exact Gram of the new
                # basis (identity on the non-constant block)
                obj = Objective(
                    kind="energy", H=2.0 * rebased.gram, g=np.zeros(fspace.dim), c=0.0
                )
            else:
                obj = energy_objective(fspace, tol=cfg.tol)
        elif cfg.objective.kind == "arclength":
            obj = arclength_objective(fspace, cfg.orientation, tol=cfg.tol)
        else:
            obj = target_length_objective(
                fspace, cfg.orientation, float(cfg.objective.target), tol=cfg.tol
            )

    with _stage("solve"):
        initial = None
        if cfg.initial is not None:
            if len(cfg.initial) != fspace.dim:
                raise ConfigError(
                    "initial vector has length %d, space dimension is %d"
                    % (len(cfg.initial), fspace.dim)
                )
            if rebased is not None:
                initial = np.array([float(x) for x in rebased.to_new_coords(cfg.initial)])
            else:
                initial = np.asarray(cfg.initial, dtype=float)
        qp = qpsolve.QuadraticProgram(
            H=obj.H, g=obj.g, c=obj.c, A_eq=A_eq, b_eq=b_eq, A_in=A_in, b_in=b_in, initial=initial
        )
        sol = qpsolve.solve(qp)
        report.status = sol.status
        report.iterations = sol.iterations
        if sol.status == "infeasible":
            report.infeasibility = sol.max_violation
            return report
        if sol.rho is None:
            return report
        rho = sol.rho
        report.rho = [float(v) for v in rho]
        report.value = sol.value
        report.active_cusp_rows = [int(i) for i in sol.active_set]
        report.kkt = qpsolve.kkt_residuals(qp, sol)

    with _stage("verify"):
        _verify(report, cfg, fspace, mus, rho, m, sign)

    if outdir is not None:
        with _stage("emit"):
            _emit(report, cfg, fspace, rho, outdir)

    return report


def _verify(report: JobReport, cfg: JobConfig, fspace, mus, rho, m, sign):
    data = cfg.data
    # integer endpoint parameters: exact-backed elements evaluate exactly
    r0 = tuple(float(c) for c in fspace.curve_value(rho, 0))
    r1 = tuple(float(c) for c in fspace.curve_value(rho, 1))
    p0 = tuple(float(c) for c in data.p0)
    p1 = tuple(float(c) for c in data.p1)
    pos_res = max(
        math.dist(r0, p0) / max(1.0, math.hypot(*p0)),
        math.dist(r1, p1) / max(1.0, math.hypot(*p1)),
    )
    report.endpoint_residual = pos_res
    notes = report.verify_notes

    if data.mode == "C1":
        from .hodograph import tangent_scalar

        c0 = tangent_scalar(fspace.field, tuple(float(c) for c in data.v0), 0.0)
        c1 = tangent_scalar(fspace.field, tuple(float(c) for c in data.v1), 1.0)
        vel_res = max(
            abs(float(fspace.speed_value(rho, 0)) - c0) / max(1.0, abs(c0)),
            abs(float(fspace.speed_value(rho, 1)) - c1) / max(1.0, abs(c1)),
        )
        report.velocity_residual = vel_res
    else:
        report.velocity_residual = None

    # directions are carried by the field; report the achieved angles
    angles = []
    for t, v in ((0, data.v0), (1, data.v1)):
        if v is None:
            continue
        vel = tuple(float(c) for c in fspace.curve_velocity(rho, t))
        nv = math.hypot(*[float(c) for c in v])
        nvel = math.hypot(*vel)
        if nv < 1e-14 or nvel < 1e-14:
            angles.append(float("nan"))
            continue
        cosang = sum(float(a) * float(b) for a, b in zip(vel, v)) / (nv * nvel)
        angles.append(math.acos(max(-1.0, min(1.0, cosang))))
    report.direction_angles = angles

    # solution mu polynomial: grid minimum and Bernstein coefficients.  For
    # exact-backed spaces the combination is summed exactly first (the mus
    # of a rebased ladder cancel against each other far below float
    # resolution) and each grid point is evaluated exactly.
    if fspace.exact_eval:
        mu_sol = Polynomial.zero()
        for i, mu in enumerate(mus):
            if not mu.is_zero():
                mu_sol = mu_sol + mu.scale(Fraction(float(rho[i])))
        vals = [sign * float(mu_sol(Fraction(k, 1000))) for k in range(1001)]
        report.min_mu_grid = min(vals)
    else:
        mu_sol = Polynomial.zero()
        for i, mu in enumerate(mus):
            if not mu.is_zero():
                mu_sol = mu_sol + mu.scale(float(rho[i]))
        grid = np.linspace(0.0, 1.0, 1001)
        vals = sign * np.asarray(mu_sol(grid), dtype=float)
        report.min_mu_grid = float(vals.min()) if vals.size else 0.0
    if m is not None:
        bern = to_bernstein(mu_sol, m)
        report.mu_bernstein = [sign * float(b) for b in bern]

    report.energy = curve_energy(fspace, rho, tol=cfg.tol)
    report.near_degenerate = report.energy < 1e-10
    if report.near_degenerate:
        notes.append("near-degenerate curve: energy below 1e-10")
    if fspace.field.sigma is not None:
        report.signed_arclength = curve_signed_arclength(
            fspace, rho, cfg.orientation, tol=max(cfg.tol, 1e-10)
        )
    try:
        report.arclength = curve_arclength(fspace, rho, tol=1e-8)
    except QuadratureError:
        report.arclength = None
        notes.append("arc-length quadrature did not converge (speed may vanish inside [0,1])")

    num_deg, den_deg = _curve_degrees(fspace, rho)
    report.numerator_degree = num_deg
    report.denominator_degree = den_deg

    mu_scale = max([1.0] + [abs(b) for b in (report.mu_bernstein or [])])
    ok = pos_res < 1e-8
    if report.velocity_residual is not None:
        ok = ok and report.velocity_residual < 1e-8
    if cfg.cusp.enabled and cfg.cusp.bound == 0.0:
        ok = ok and report.min_mu_grid >= -1e-10 * mu_scale
        if report.mu_bernstein is not None:
            ok = ok and min(report.mu_bernstein) >= cfg.cusp.bound - 1e-8 * mu_scale
    if not ok:
        notes.append("verification tolerances exceeded")
    report.verified = ok


def _emit(report: JobReport, cfg: JobConfig, fspace, rho, outdir: str):
    os.makedirs(outdir, exist_ok=True)
    rows = sample_curve(fspace, rho, cfg.samples)
    csv_path = os.path.join(outdir, "%s_samples.csv" % cfg.name)
    write_samples_csv(csv_path, rows)
    svg_path = os.path.join(outdir, "%s_curve.svg" % cfg.name)
    arrows = []
    if cfg.data.v0 is not None:
        arrows.append((tuple(float(c) for c in cfg.data.p0), tuple(float(c) for c in cfg.data.v0)))
    if cfg.data.v1 is not None:
        arrows.append((tuple(float(c) for c in cfg.data.p1), tuple(float(c) for c in cfg.data.v1)))
    emit_plot(svg_path, [(cfg.name, rows)], arrows=arrows, arrow_scale=cfg.arrow_scale)
    report_path = os.path.join(outdir, "%s_report.json" % cfg.name)
    report.files = {"report": report_path, "samples": csv_path, "plot": svg_path}
    with open(report_path, "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
