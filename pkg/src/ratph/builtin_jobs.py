"""Named built-in jobs: the worked interpolation problems shipped with the
library.  Each factory returns a fresh ``JobConfig`` with exact rational data
wherever the source data is rational; the complex-pole family keeps the
5-digit decimal coefficients of its published numeric approximation (the
symbolic original is not available).
"""

from __future__ import annotations

import math
from fractions import Fraction as Fr

from .algebra import Quaternion, QuaternionPolynomial, Vec3Poly
from .hodograph import make_tangent_field
from .spaces import NonRegularRequest, PolynomialRequest, RegularRequest
from .constraints import HermiteData
from .jobs import CuspSettings, JobConfig, ObjectiveSettings


def _quat_poly(rows) -> QuaternionPolynomial:
    return QuaternionPolynomial(tuple(Quaternion(*row) for row in rows))


# ---------------------------------------------------------------------------
# slant helix family: A(t) = 1 - (1 - i - j - k) t, F = i - 2(i - j + k)t + 4k t^2


def _slant_helix_field():
    return make_tangent_field(_quat_poly([(1, 0, 0, 0), (-1, 1, 1, 1)]))


_SLANT_DATA = dict(
    p0=(Fr(0), Fr(0), Fr(0)),
    p1=(Fr(1, 2), Fr(1), Fr(1, 3)),
    v0=(Fr(1), Fr(0), Fr(0)),
    v1=(Fr(-1, 7), Fr(2, 7), Fr(2, 7)),
)


def slant_helix_g1() -> JobConfig:
    """Dimension-7 space: constants, one rational generator at beta = -1
    (pole order 4, field-normalized), polynomial generators ell = 2, 3, 4.

    At the natural certificate degree the cusp-free cone over this space
    excludes every G1 interpolant, so the job elevates the Bernstein degree;
    the energy settles just below 5.69 once the certificate degree clears
    the mid-teens."""
    field = _slant_helix_field()
    requests = (
        RegularRequest(beta=Fr(-1), orders=(-4,), normalize="field"),
        PolynomialRequest(ells=(2, 3, 4)),
    )
    initial = (0, 0, 0, 0, 1, 0, 0)
    return JobConfig(
        name="slant_helix_g1",
        field=field,
        requests=requests,
        data=HermiteData(mode="G1", **_SLANT_DATA),
        objective=ObjectiveSettings(kind="energy"),
        cusp=CuspSettings(bernstein_degree=18),
        initial=initial,
    )


def slant_helix_c1_poly() -> JobConfig:
    """C1 variant grown by further polynomial generators (ell up to 9).

    The extra derivative conditions leave no room at the natural certificate
    degree, and the binding sign certificate is tight: the reported energy
    keeps easing down as the Bernstein degree grows (5.93 near degree 200)."""
    field = _slant_helix_field()
    requests = (
        RegularRequest(beta=Fr(-1), orders=(-4,), normalize="field"),
        PolynomialRequest(ells=(2, 3, 4, 5, 6, 7, 8, 9)),
    )
    return JobConfig(
        name="slant_helix_c1_poly",
        field=field,
        requests=requests,
        data=HermiteData(mode="C1", **_SLANT_DATA),
        objective=ObjectiveSettings(kind="energy"),
        cusp=CuspSettings(bernstein_degree=200),
    )


def slant_helix_c1_mixed() -> JobConfig:
    """C1 variant with polynomial generators up to ell = 7 plus a second
    rational generator at beta = -2.  Feasible only after degree elevation,
    like the purely polynomial growth, but with a higher optimal energy
    (about 6.12): the second rational generator buys less than two more
    polynomial generators would."""
    field = _slant_helix_field()
    requests = (
        RegularRequest(beta=Fr(-1), orders=(-4,), normalize="field"),
        PolynomialRequest(ells=(2, 3, 4, 5, 6, 7)),
        RegularRequest(beta=Fr(-2), orders=(-4,), normalize="field"),
    )
    return JobConfig(
        name="slant_helix_c1_mixed",
        field=field,
        requests=requests,
        data=HermiteData(mode="C1", **_SLANT_DATA),
        objective=ObjectiveSettings(kind="energy"),
        cusp=CuspSettings(bernstein_degree=150),
    )


def degenerate_point() -> JobConfig:
    """Coincident endpoints with an energy objective: the optimum collapses
    to the constant curve and the report flags it as near-degenerate."""
    field = _slant_helix_field()
    requests = (
        RegularRequest(beta=Fr(-1), orders=(-4,), normalize="field"),
        PolynomialRequest(ells=(2, 3, 4)),
    )
    data = HermiteData(
        mode="G1",
        p0=(Fr(0), Fr(0), Fr(0)),
        p1=(Fr(0), Fr(0), Fr(0)),
        v0=(Fr(1), Fr(0), Fr(0)),
        v1=(Fr(-1, 7), Fr(2, 7), Fr(2, 7)),
    )
    return JobConfig(
        name="degenerate_point",
        field=field,
        requests=requests,
        data=data,
        objective=ObjectiveSettings(kind="energy"),
        initial=(0,) * 7,
    )


# ---------------------------------------------------------------------------
# quintic C1 family (degree-4 field); the published optimal quintic is the
# ell = 1 polynomial generator up to scale, so rho = (p0 | 1/5 on ell=1) is a
# feasible start


def _quintic_field():
    return make_tangent_field(
        _quat_poly(
            [
                (0, Fr(600, 240), Fr(120, 240), 0),
                (0, Fr(-864, 240), Fr(-672, 240), Fr(816, 240)),
                (0, Fr(840, 240), Fr(427, 240), Fr(-816, 240)),
            ]
        )
    )


_QUINTIC_DATA = dict(
    p0=(Fr(0), Fr(0), Fr(0)),
    p1=(Fr(34207, 11520), Fr(-12208, 11520), Fr(22848, 11520)),
    v0=(Fr(12, 2), Fr(5, 2), Fr(0)),
    v1=(Fr(316151, 57600), Fr(-144000, 57600), Fr(0)),
)

_QUINTIC_CURVE = Vec3Poly.of(
    (Fr(0), Fr(0), Fr(0)),
    (Fr(345600, 57600), Fr(144000, 57600), Fr(0)),
    (Fr(-437760, 57600), Fr(-506880, 57600), Fr(489600, 57600)),
    (Fr(178192, 57600), Fr(625072, 57600), Fr(-796416, 57600)),
    (Fr(113520, 57600), Fr(-466704, 57600), Fr(695232, 57600)),
    (Fr(-28517, 57600), Fr(143472, 57600), Fr(-274176, 57600)),
)


def c1_quintic_table1(p: int = 10) -> JobConfig:
    """Polynomial-only spaces of curve degree p >= 5: constants plus
    ell = 1 .. p-4."""
    if p < 5:
        raise ValueError("table1 needs p >= 5")
    field = _quintic_field()
    requests = (PolynomialRequest(ells=tuple(range(1, p - 3))),)
    dim = 3 + (p - 4)
    initial = [0.0] * dim
    initial[3] = 0.2  # 1/5 on ell = 1 reproduces the published quintic
    return JobConfig(
        name="c1_quintic_table1" if p == 10 else "c1_quintic_table1_p%d" % p,
        field=field,
        requests=requests,
        data=HermiteData(mode="C1", **_QUINTIC_DATA),
        objective=ObjectiveSettings(kind="energy"),
        initial=tuple(initial),
    )


def c1_quintic_table2(p: int = -11) -> JobConfig:
    """Mostly-rational spaces at beta = -1 for p <= -5: constants, the two
    nonregular generators, unit-normalized regular generators of pole order
    6 .. 1-p, and the published quintic as external feasible start.

    The pole ladder (1+t)^-6, (1+t)^-7, ... is algebraically independent but
    exponentially collinear on [0, 1] (energy Gram condition ~1e21 at order
    21), so these jobs rebase the space to an exactly energy-orthonormal
    basis before any floats are formed.  The cusp cone is elevated to
    Bernstein degree 60: at the natural degree its sufficient-only
    nonnegativity check cuts off the actual minimizers.

    p = -4 gives the smallest interpolable space (empty ladder: constants,
    the two nonregular generators and the quintic, 6 dimensions); dropping
    the quintic as well leaves 5 dimensions, too few for the eight C1
    conditions."""
    if p > -4:
        raise ValueError("table2 needs p <= -4")
    field = _quintic_field()
    requests = (
        NonRegularRequest(beta=Fr(-1), normalize="unit"),
        RegularRequest(beta=Fr(-1), orders=tuple(range(-6, p - 2, -1)), normalize="unit"),
    )
    dim = 3 + 2 + (-p - 4) + 1
    initial = [0.0] * dim
    initial[-1] = 1.0
    return JobConfig(
        name="c1_quintic_table2_m%d" % (-p),
        field=field,
        requests=requests,
        data=HermiteData(mode="C1", **_QUINTIC_DATA),
        external=_QUINTIC_CURVE,
        objective=ObjectiveSettings(kind="energy"),
        cusp=CuspSettings(bernstein_degree=60),
        initial=tuple(initial),
        orthonormalize=True,
    )


# ---------------------------------------------------------------------------
# complex-pole family (numeric coefficients; the published data is 5-digit)


_COMPLEX_BETA = complex(0.5, math.sqrt(6071202867) / 124526)


def _complex_field():
    return make_tangent_field(
        _quat_poly(
            [
                (1.0, 0.0, 0.0, 0.0),
                (-1.2721, 0.3309, -0.6618, 0.8272),
                (-0.5673, -0.2579, 0.5158, -0.6447),
            ]
        )
    )


def g1_rational_table4(p: int = 0) -> JobConfig:
    """Conjugate complex poles: constants plus the realified nonregular
    pair plus p polynomial generators; dimension 7 + p.

    Unit normalization keeps the realified pair well scaled (the field
    normalization would blow its curve coefficients up to ~1e6 and the
    endpoint residuals with them).  The certificate degree is raised to 30
    because the natural-degree nonnegativity cone is only sufficient: at the
    natural degree it cuts off minimizers whose mu is strictly positive."""
    if not 0 <= p:
        raise ValueError("table4 needs p >= 0")
    field = _complex_field()
    requests = [NonRegularRequest(beta=_COMPLEX_BETA, normalize="unit")]
    if p >= 1:
        requests.append(PolynomialRequest(ells=tuple(range(1, p + 1))))
    data = HermiteData(
        mode="G1",
        p0=(0.0, 0.0, 0.0),
        p1=(4.0, 2.0, 4.0),
        v0=(1.0, 0.0, 0.0),
        v1=(Fr(6, 7), Fr(-3, 7), Fr(-2, 7)),
    )
    return JobConfig(
        name="g1_rational_table4_p%d" % p,
        field=field,
        requests=tuple(requests),
        data=data,
        objective=ObjectiveSettings(kind="energy"),
        cusp=CuspSettings(bernstein_degree=30),
    )


# ---------------------------------------------------------------------------
# length family (degree-4 field; dimension-10 space shared by all four jobs)


def _length_field():
    return make_tangent_field(
        _quat_poly(
            [
                (Fr(-4, 7), Fr(-1), Fr(1, 7), Fr(1, 2)),
                (Fr(1, 3), Fr(3), Fr(2, 3), Fr(-1)),
                (Fr(1), Fr(-1, 5), Fr(2), Fr(3, 4)),
            ]
        )
    )


_LENGTH_CURVE = Vec3Poly.of(
    (Fr(0), Fr(0), Fr(0)),
    (Fr(2794500, 2646000), Fr(-2268000, 2646000), Fr(-2214000, 2646000)),
    (Fr(-7371000, 2646000), Fr(1323000, 2646000), Fr(7497000, 2646000)),
    (Fr(4941300, 2646000), Fr(-512400, 2646000), Fr(-5419400, 2646000)),
    (Fr(-1124550, 2646000), Fr(6769350, 2646000), Fr(1477350, 2646000)),
    (Fr(-1864107, 2646000), Fr(370440, 2646000), Fr(-2275560, 2646000)),
)


def _length_data() -> HermiteData:
    d = _LENGTH_CURVE.deriv()
    return HermiteData(
        mode="G1",
        p0=_LENGTH_CURVE(Fr(0)),
        p1=_LENGTH_CURVE(Fr(1)),
        v0=d(Fr(0)),
        v1=d(Fr(1)),
    )


def _length_config(name, objective, cusp=None) -> JobConfig:
    field = _length_field()
    requests = (
        NonRegularRequest(beta=Fr(-1), normalize="field"),
        NonRegularRequest(beta=Fr(2), normalize="field"),
        PolynomialRequest(ells=(1, 2, 3)),
    )
    initial = [0.0] * 10
    initial[7] = 0.2  # 1/5 on ell = 1: the published quintic is feasible
    return JobConfig(
        name=name,
        field=field,
        requests=requests,
        data=_length_data(),
        objective=objective,
        cusp=cusp or CuspSettings(),
        initial=tuple(initial),
    )


def length_min() -> JobConfig:
    return _length_config("length_min", ObjectiveSettings(kind="arclength"))


def length_target(target: float = 3.5) -> JobConfig:
    return _length_config(
        "length_target", ObjectiveSettings(kind="target_length", target=target)
    )


def length_target_low() -> JobConfig:
    cfg = _length_config(
        "length_target_low", ObjectiveSettings(kind="target_length", target=2.0)
    )
    return cfg


def length_relaxed() -> JobConfig:
    return _length_config(
        "length_relaxed",
        ObjectiveSettings(kind="arclength"),
        cusp=CuspSettings(bound=-100.0),
    )


# ---------------------------------------------------------------------------
# registry


BUILTIN_JOBS = {
    "slant_helix_g1": slant_helix_g1,
    "slant_helix_c1_poly": slant_helix_c1_poly,
    "slant_helix_c1_mixed": slant_helix_c1_mixed,
    "degenerate_point": degenerate_point,
    "c1_quintic_table1": c1_quintic_table1,
    "c1_quintic_table1_p11": lambda: c1_quintic_table1(11),
    "c1_quintic_table1_p12": lambda: c1_quintic_table1(12),
    "c1_quintic_table2_m4": lambda: c1_quintic_table2(-4),
    "c1_quintic_table2_m5": lambda: c1_quintic_table2(-5),
    "c1_quintic_table2_m6": lambda: c1_quintic_table2(-6),
    "c1_quintic_table2_m7": lambda: c1_quintic_table2(-7),
    "c1_quintic_table2_m8": lambda: c1_quintic_table2(-8),
    "c1_quintic_table2_m9": lambda: c1_quintic_table2(-9),
    "c1_quintic_table2_m10": lambda: c1_quintic_table2(-10),
    "c1_quintic_table2_m11": lambda: c1_quintic_table2(-11),
    "c1_quintic_table2_m12": lambda: c1_quintic_table2(-12),
    "c1_quintic_table2_m13": lambda: c1_quintic_table2(-13),
    "c1_quintic_table2_m14": lambda: c1_quintic_table2(-14),
    "c1_quintic_table2_m15": lambda: c1_quintic_table2(-15),
    "c1_quintic_table2_m20": lambda: c1_quintic_table2(-20),
    "g1_rational_table4_p0": lambda: g1_rational_table4(0),
    "g1_rational_table4_p1": lambda: g1_rational_table4(1),
    "g1_rational_table4_p2": lambda: g1_rational_table4(2),
    "g1_rational_table4_p3": lambda: g1_rational_table4(3),
    "g1_rational_table4_p4": lambda: g1_rational_table4(4),
    "g1_rational_table4_p5": lambda: g1_rational_table4(5),
    "length_min": length_min,
    "length_target": length_target,
    "length_target_low": length_target_low,
    "length_relaxed": length_relaxed,
}


def get_builtin(name: str) -> JobConfig:
    try:
        factory = BUILTIN_JOBS[name]
    except KeyError:
        raise KeyError(
            "unknown built-in job %r (see `list-builtin` for the catalogue)" % name
        )
    return factory()
