"""
Two-term de Rham complex on P1
==============================

Hypercohomology of (O -> Omega^1) through the total Čech complex, the
induced maps on cohomology, and their duality under the Serre pairings.
"""

from diffdual.filtered import (FilteredTwoTerm, dual_differential_check, e1_differential,
                               graded_coevaluation_check, hypercohomology)
from diffdual.sheaves import exterior_derivative, projective_space
from diffdual.suites import euler_operator, twisted_derivative

X = projective_space(1)
M = FilteredTwoTerm(exterior_derivative(X, 0))
print(M, "hypercohomology", hypercohomology(M).dims)
print("dual complex", M.dual())
print("graded coevaluation:", graded_coevaluation_check(M).message)

# %%
# An operator with a nonzero action on sections: u d/du on O(1).
for D in (euler_operator(X), twisted_derivative(X)):
    N = FilteredTwoTerm(D)
    print()
    print(N, "hypercohomology", hypercohomology(N).dims)
    print("   H^0(D) =", [[str(x) for x in r] for r in e1_differential(N, 0)])
    v = dual_differential_check(N)
    print("   duality:", v.message)
    for q, w in v.witness.items():
        print("   q=%d  A=%s  B=%s" % (q, w["A"], w["B"]))
