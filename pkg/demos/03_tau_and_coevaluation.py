"""
The diagonal class and the coevaluation identity
================================================

On each chart the class sum e_i (x) (e_i^v (x) dy) / (x - y) is written in
coordinates (y, t) with t = x - y, keeping only the pole part in t. The
chart formulas agree on overlaps, and the glued class pushed to the
product P1 x P1 reproduces the identity on cohomology after pairing.
"""

from diffdual.cech import cohomology
from diffdual.filtered import coevaluation_matrices, kunneth_coordinates
from diffdual.local_coh import build_tau, to_global
from diffdual.sheaves import projective_space, twist

X = projective_space(1)

for d in (-2, 0, 1):
    E = twist(X, d)
    tau = build_tau(E)
    print("O(%+d): chart classes %s, glued %s" % (d, tau.classes, tau.glued))
    g = to_global(tau)
    print("   class on the product:", g)
    print("   Künneth coordinates:", {p: [[str(x) for x in r] for r in m] for p, m in kunneth_coordinates(E, g).items()})
    mats = coevaluation_matrices(E, g)
    print("   composite per degree:", {p: [[str(x) for x in r] for r in m] for p, m in mats.items()},
          " dims", cohomology(E).dims)
