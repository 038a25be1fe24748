"""
Čech cohomology and the Serre pairing on projective space
=========================================================

Cohomology is computed one torus weight at a time and compared with a
monomial count that never touches the Čech machinery.
"""

from diffdual.cech import cohomology
from diffdual.filtered import serre_pairing
from diffdual.oracles import bott, monomial_count
from diffdual.sheaves import differential_forms, dual_star, projective_space, twist

P1 = projective_space(1)
P2 = projective_space(2)

for d in range(-4, 3):
    print("P1  O(%+d): Čech %s  oracle %s" % (d, cohomology(twist(P1, d)).dims, monomial_count(1, d)))
for p in range(3):
    print("P2  Omega^%d: Čech %s  Bott %s" % (p, cohomology(differential_forms(P2, p)).dims, bott(2, p, 0)))

# %%
# E* means the dual tensored with the canonical sheaf, so O(2)* on P1 is O(-4).
E = twist(P1, 2)
print("O(2)* has cohomology", cohomology(dual_star(E)).dims)
P = serre_pairing(E, 0)
print("pairing H^0(O(2)) x H^1(O(-4)):")
for row in P.matrix:
    print("   ", [str(x) for x in row])
print("perfect:", P.is_perfect())
