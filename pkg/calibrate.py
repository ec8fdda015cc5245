"""Scratch calibration runs (not part of the package)."""
from fractions import Fraction as Fr

from ratph.algebra import Vec3Poly
from ratph.hodograph import TangentField, validate_field
from ratph.spaces import nonregular_basis, scale_element

EX_FIELDS = {
    1: [(1, 1, 1), (1, 0, -1), (1, 1, 0), (0, 1, -1), (1, -1, 1)],
    2: [(1, 1, 1), (1, 0, 0), (0, 1, 1), (1, 1, 0), (1, -1, 1)],
    3: [(1, 1, 1), (1, 1, 1), (0, 1, 1), (1, 1, 0), (1, -1, 1)],
    4: [(1, 1, 1), (1, 1, 1), (1, 0, 0), (0, 1, 1), (1, -1, 1)],
}

# printed bases: per example, per element: (lambda dict, curve dict, triplet, scale)
PRINTED = {
    1: [
        ({-5: 12, -4: 18, -3: -6, -2: -6},
         {-4: (-3, -3, -3), -3: (-10, -6, -2), -2: (-12, -3, 12), -1: (-6, -24, 12),
          1: (12, -30, 24), 2: (-3, 0, 0), 3: (-2, 2, -2)}),
        ({-4: 6, -3: -18, -2: 6, -1: 12},
         {-3: (-2, -2, -2), -2: (6, 9, 12), -1: (6, -12, -24),
          1: (24, -18, 12), 2: (-3, 18, -12), 3: (2, 2, -2), 4: (3, -3, 3)}),
    ],
    2: [
        ({-5: 12, -4: 24, -3: -12, -2: -36},
         {-4: (-3, -3, -3), -3: (-12, -8, -8), -2: (-6, 0, 0), -1: (36, 0, 12),
          1: (12, -72, -12), 2: (-24, -12, -6), 3: (-12, 12, -12)}),
        ({-3: -12, -2: -12, -1: 12},
         {-2: (6, 6, 6), -1: (24, 12, 12),
          1: (0, -24, -12), 2: (-12, 6, 0), 3: (0, 8, -4), 4: (3, -3, 3)}),
    ],
    3: [
        ({-5: 4, -4: 8, -3: 8, -2: -12},
         {-4: (-1, -1, -1), -3: (-4, -4, -4), -2: (-8, -10, -10), -1: (0, -8, -4),
          1: (16, -12, -4), 2: (-2, -10, 4), 3: (-4, 4, -4)}),
        ({-2: -12, -1: 12},
         {-1: (12, 12, 12),
          1: (12, 0, 0), 2: (-6, 0, 6), 3: (0, 8, -4), 4: (3, -3, 3)}),
    ],
    4: [
        (None,  # printed lambda_1 is typo-suspect; compare curve only
         {-3: (-2, -2, -2), -2: (-6, -6, -6), -1: (-6, 0, 0),
          1: (0, 0, 12), 2: (3, -6, 0), 3: (-2, 2, -2)}),
        ({-2: 12, -1: -12},
         {-1: (-12, -12, -12),
          1: (0, -12, -12), 2: (-6, 6, 6), 3: (4, -8, 0), 4: (-3, 3, -3)}),
    ],
}

TRIPLETS = {1: (1, 2, 3), 2: (1, 2, 3), 3: (1, 2, 3), 4: (1, 2, 4)}
SCALES = {1: (12, 12), 2: (12, 12), 3: (4, 12), 4: (6, -12)}


def field_of(rows):
    F = Vec3Poly.of(*[tuple(Fr(c) for c in row) for row in rows])
    return validate_field(F)


def check_example(k):
    tf = field_of(EX_FIELDS[k])
    els = nonregular_basis(tf, Fr(0), TRIPLETS[k])
    assert len(els) == 2, len(els)
    for idx, (el, printed, scale) in enumerate(zip(els, PRINTED[k], SCALES[k])):
        el = scale_element(el, Fr(scale))
        lam = dict(el.speed.poles[0][1]) if el.speed.poles else {}
        (beta, terms), = el.curve_terms
        curve = {j: c for j, c in terms}
        pl, pc = printed
        tag = "ex%d r%d" % (k, idx + 1)
        if pl is not None:
            if {j: Fr(c) for j, c in pl.items()} != {j: Fr(c) for j, c in lam.items()}:
                print(tag, "LAMBDA MISMATCH")
                print("   mine   :", dict(sorted((j, str(c)) for j, c in lam.items())))
                print("   printed:", pl)
                continue
        want = {j: tuple(Fr(x) for x in v) for j, v in pc.items()}
        mine = {j: tuple(Fr(x) for x in v) for j, v in curve.items() if any(x != 0 for x in v)}
        if want != mine:
            print(tag, "CURVE MISMATCH")
            print("   mine   :", {j: tuple(map(str, v)) for j, v in sorted(mine.items())})
            print("   printed:", {j: tuple(map(str, v)) for j, v in sorted(want.items())})
        else:
            print(tag, "ok  (lambda:", "skipped" if pl is None else "ok", ")")
            if pl is None:
                print("   my lambda:", dict(sorted((j, str(c)) for j, c in lam.items())))


for k in (1, 2, 3, 4):
    check_example(k)
