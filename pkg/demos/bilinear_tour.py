"""
Bilinear polynomials: criterion, difference scan and representing density
==========================================================================

"""

# 1/p(m, n) for p = a + b x + c y + d x y is a joint moment net exactly when
# M = bc - ad >= 0.  Compare that with a truncated difference scan.
import numpy as np

from momenta import BilinearPoly, is_jcm_net, measure_bilinear, net_from_pencil, verify_moments
from momenta.monotonicity import bilinear_criterion

for coeffs in [(1, 1, 1, 1), (1, 1, 2, 2), (1, 0, 1, 1), (1, 1, 2, 3)]:
    p = BilinearPoly(*coeffs)
    M, ok = bilinear_criterion(p)
    scan = is_jcm_net(net_from_pencil(p, 1, 24), 8)
    print(coeffs, "M =", M, "criterion:", ok, "scan:", scan.decision.value, scan.witness)

# Build the representing density of 1/p^2 and check its moments.
p = BilinearPoly(1, 2, 3, 1)
m = measure_bilinear(p, 2)
print("kind:", m.kind, "max relative moment error:", verify_moments(m, p, 2))

# The density on a coarse grid.
s = np.linspace(0.1, 0.9, 5)
S, T = np.meshgrid(s, s, indexing="ij")
print(np.round(m.density(S, T), 4))

# With M < 0 the density exists only as a signed function; it turns negative
# where the Bessel argument passes the first zero of J0.
q = BilinearPoly(1, 0, 0, 1)
signed = measure_bilinear(q, 1, allow_signed=True)
vals = np.array(signed.grid["values"])
print("signed grid minimum:", vals.min(), "negative cells:", int((vals < 0).sum()))
