"""Scratch calibration phase 2: regular element, external quintics, job energies."""
from fractions import Fraction as Fr

from ratph.builtin_jobs import (
    _LENGTH_CURVE,
    _QUINTIC_CURVE,
    _length_field,
    _quintic_field,
    _slant_helix_field,
)
from ratph.spaces import regular_basis, normalize_to_field, scale_element

# --- slant helix regular element at beta=-1, lambda=(t+1)^-4, field-normalized
tf = _slant_helix_field()
print("slant F:", [[str(x) for x in c] for c in tf.F.coeffs])
print("slant sigma:", [str(c) for c in tf.sigma.coeffs])
el = regular_basis(tf, Fr(-1), -4)
el = normalize_to_field(el, tf)
(beta, terms), = el.curve_terms
print("slant regular(-4) normalized curve terms:")
for j, v in terms:
    print("  (t+1)^%d:" % j, tuple(str(x) for x in v))
print("  poles:", [(str(b), [(j, str(c)) for j, c in ts]) for b, ts in el.speed.poles])

# --- quintic families: r' must equal F exactly
for name, curve, field in (
    ("table-quintic", _QUINTIC_CURVE, _quintic_field()),
    ("length-quintic", _LENGTH_CURVE, _length_field()),
):
    d = curve.deriv()
    ok = d.coeffs == field.F.coeffs
    print(name, "r' == F:", ok)
    if not ok:
        print("  r':", [[str(x) for x in c] for c in d.coeffs])
        print("  F :", [[str(x) for x in c] for c in field.F.coeffs])
