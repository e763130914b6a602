"""
Pencil polynomials b(x) + a(x) y: criteria and slice measures
=============================================================

"""

# Two degree-2 pencils.  The first interlaces, the second only satisfies the
# degree-2 root condition and gets a signed slice factor.
import warnings

from momenta import FactoredPoly, PencilPoly, criteria_report, measure_pencil, verify_moments

interlacing = PencilPoly(b=FactoredPoly(1.0, (1.0, 3.0)), a=FactoredPoly(1.0, (2.0, 4.0)))
degree2 = PencilPoly(b=FactoredPoly(1.0, (1.0, 4.0)), a=FactoredPoly(1.0, (2.0, 3.0)))

for name, p in [("interlacing", interlacing), ("degree-2", degree2)]:
    rep = criteria_report(p)
    print(name, "S:", rep.interlacing_S, "detail:", rep.detail)

# Slice families: one measure on [0,1] per t-node.
m = measure_pencil(interlacing)
print("slices:", len(m.slices.slices), "min slice density:", m.min_slice_density())
print("moment error:", verify_moments(m, interlacing))

# The second pencil still reproduces its moments, but one factor is signed.
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    m2 = measure_pencil(degree2)
print("signed:", m2.signed, "warnings:", [str(w.message) for w in caught])
print("moment error:", verify_moments(m2, degree2))
