"""
Weighted 2-shifts and the Cauchy dual subnormality decision
===========================================================

"""

# Shifts built from p = 1 + b x + c y + d x y are toral 3-isometries and
# separate 2-isometries.  Their dual is subnormal exactly when d <= bc.
from momenta import BilinearPoly
from momenta.operators import dual_subnormality_decision, isometry_report, shift_from_poly

for b, c, d in [(1, 2, 0), (1, 2, 2), (1, 2, 3), (0, 0, 5)]:
    shift = shift_from_poly(BilinearPoly(1, b, c, d), 8)
    rep = isometry_report(shift)
    dec = dual_subnormality_decision(shift)
    print((b, c, d), "toral:", rep.is_toral_m, "dual subnormal:", dec.decision,
          "scan:", dec.details["jcm"], "agree:", dec.method_agreement)

# The weight test reads two numbers off the shift.
shift = shift_from_poly(BilinearPoly(1, 1, 2, 3), 8)
print("w2(e1) =", shift.w2[1, 0], "w2(0) =", shift.w2[0, 0])
