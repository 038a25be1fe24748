"""
Adjoints of differential operators
==================================

Operators are written in divided powers, so d[k] means d^k/k! and the
calculus works the same way over Q and over F_p.
"""

from diffdual.diffop import adjoint, apply, compose, format_operator, parse_operator
from diffdual.ring import GF, QQ
from diffdual.ring.polynomial import PolynomialRing

R = PolynomialRing(QQ, ["x"])
D1 = parse_operator("x^2*d[1]", R)
D2 = parse_operator("d[2] + x", R)

# the adjoint moves coefficients past derivatives with a sign per derivative
print("D1          =", format_operator(D1))
print("D1*         =", format_operator(adjoint(D1)))
print("(D1 D2)*    =", format_operator(adjoint(compose(D1, D2))))
print("D2* D1*     =", format_operator(compose(adjoint(D2), adjoint(D1))))
print("(D1*)* == D1:", adjoint(adjoint(D1)) == D1)

# %%
# In characteristic p the divided power d[p] is not a multiple of d[1]^p.
F5 = PolynomialRing(GF(5), ["x"])
dp = parse_operator("d[5]", F5)
d1 = parse_operator("d[1]", F5)
x5 = F5.gen(0) ** 5
power = d1
for _ in range(4):
    power = compose(power, d1)
print("d[5] x^5 =", apply(dp, x5), "  d[1]^5 x^5 =", apply(power, x5))
print("d[5]*    =", format_operator(adjoint(dp)))
