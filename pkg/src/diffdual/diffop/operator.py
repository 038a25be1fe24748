"""Finite-order differential operators in divided-power normal form.

An operator is stored as {alpha: f_alpha} meaning sum f_alpha * d^[alpha], with
d^[alpha] = d^alpha / alpha!. Derivatives always sit to the right of their
coefficients, so equality is coefficient comparison.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Sequence

from ..ring.field import binomial
from ..ring.polynomial import Polynomial, PolynomialRing


def _multi_binomial(a: Sequence[int], b: Sequence[int]) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= binomial(x, y)
        if not out:
            return 0
    return out


def _subindices(alpha: Sequence[int]):
    return product(*(range(a + 1) for a in alpha))


def divided_derivative(p: Polynomial, gamma: Sequence[int]) -> Polynomial:
    """d^[gamma] p, with d^[k] x^n = C(n, k) x^(n-k) (valid for negative n too)."""
    gamma = tuple(gamma)
    if not any(gamma):
        return p
    f = p.ring.field
    out = {}
    for e, c in p.terms.items():
        b = f(_multi_binomial(e, gamma))
        if b:
            ne = tuple(a - g for a, g in zip(e, gamma))
            out[ne] = c * b
    return Polynomial(p.ring, out)


class DividedPowerOp:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: dict | None = None):
        self.ring = ring
        clean = {}
        for a, fa in (terms or {}).items():
            a = tuple(a)
            if len(a) != ring.nvars or any(x < 0 for x in a):
                raise ValueError("bad multi-index %r" % (a,))
            fa = ring(fa)
            if fa:
                clean[a] = fa
        self.terms = clean
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def identity(cls, ring):
        return cls(ring, {(0,) * ring.nvars: ring.one()})

    @classmethod
    def multiplication(cls, f: Polynomial):
        return cls(f.ring, {(0,) * f.ring.nvars: f})

    @classmethod
    def partial(cls, ring, i: int, k: int = 1, coeff=None):
        """coeff * d^[k] in variable i."""
        a = [0] * ring.nvars
        a[i] = k
        return cls(ring, {tuple(a): ring.one() if coeff is None else ring(coeff)})

    @classmethod
    def monomial_op(cls, ring, alpha: Sequence[int], coeff=None):
        return cls(ring, {tuple(alpha): ring.one() if coeff is None else ring(coeff)})

    @classmethod
    def from_action(cls, ring: PolynomialRing, order: int, action: Callable[[Polynomial], Polynomial]):
        """Recover the unique operator of order <= `order` that acts as `action` on monomials.

        Uses D(x^b) = sum_{a <= b} f_a C(b, a) x^(b-a); the triangle is unipotent
        in divided powers, so this works in every characteristic.
        """
        n = ring.nvars
        found: dict = {}
        for tot in range(order + 1):
            for beta in _compositions(tot, n):
                val = action(ring.monomial(beta))
                for alpha, fa in found.items():
                    if all(a <= b for a, b in zip(alpha, beta)):
                        c = _multi_binomial(beta, alpha)
                        if c:
                            val = val - fa * ring.monomial(tuple(b - a for a, b in zip(alpha, beta)), c)
                if val:
                    found[beta] = val
        return cls(ring, found)

    # -- basic structure -------------------------------------------------
    def _check(self, other: "DividedPowerOp"):
        if not isinstance(other, DividedPowerOp):
            raise TypeError("expected a DividedPowerOp")
        if other.ring != self.ring:
            raise ValueError("ambient mismatch: %r vs %r" % (self.ring, other.ring))

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha) -> Polynomial:
        return self.terms.get(tuple(alpha), self.ring.zero())

    def __eq__(self, other):
        return isinstance(other, DividedPowerOp) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for a, f in other.terms.items():
            out[a] = out[a] + f if a in out else f
        return DividedPowerOp(self.ring, out)

    def __neg__(self):
        return DividedPowerOp(self.ring, {a: -f for a, f in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DividedPowerOp":
        """Left multiplication by a scalar or a function."""
        return DividedPowerOp(self.ring, {a: f * c for a, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, DividedPowerOp):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def __str__(self):
        from .text import format_operator

        return format_operator(self)

    def __repr__(self):
        return "DividedPowerOp(%s)" % self


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def apply(op: DividedPowerOp, p: Polynomial) -> Polynomial:
    if p.ring != op.ring:
        raise ValueError("ambient mismatch: %r vs %r" % (op.ring, p.ring))
    out = op.ring.zero()
    for alpha, fa in op.terms.items():
        d = divided_derivative(p, alpha)
        if d:
            out = out + fa * d
    return out


def compose(d1: DividedPowerOp, d2: DividedPowerOp) -> DividedPowerOp:
    """d1 o d2 in canonical form, via divided Leibniz and d^[a] d^[b] = C(a+b, a) d^[a+b]."""
    d1._check(d2)
    ring = d1.ring
    f = ring.field
    acc: dict = {}
    for alpha, fa in d1.terms.items():
        for beta, gb in d2.terms.items():
            for gamma in _subindices(alpha):
                dg = divided_derivative(gb, gamma)
                if not dg:
                    continue
                rest = tuple(a - g for a, g in zip(alpha, gamma))
                tot = tuple(r + b for r, b in zip(rest, beta))
                c = f(_multi_binomial(tot, beta))
                if not c:
                    continue
                term = fa * dg * c
                acc[tot] = acc[tot] + term if tot in acc else term
    return DividedPowerOp(ring, acc)


def adjoint(d: DividedPowerOp) -> DividedPowerOp:
    """sum (-1)^|a| d^[a] o f_a, re-expanded with derivatives on the right."""
    ring = d.ring
    acc: dict = {}
    for alpha, fa in d.terms.items():
        sign = -1 if sum(alpha) % 2 else 1
        for gamma in _subindices(alpha):
            dg = divided_derivative(fa, gamma)
            if not dg:
                continue
            rest = tuple(a - g for a, g in zip(alpha, gamma))
            term = dg * sign
            acc[rest] = acc[rest] + term if rest in acc else term
    return DividedPowerOp(ring, acc)


def conjugate(d: DividedPowerOp, unit: Polynomial) -> DividedPowerOp:
    """unit^-1 o d o unit, for a scalar or Laurent-monomial unit."""
    inv = unit.monomial_inverse()
    return compose(DividedPowerOp.multiplication(inv), compose(d, DividedPowerOp.multiplication(unit)))


def embed_operator(op: DividedPowerOp, target: PolynomialRing, positions: Sequence[int]) -> DividedPowerOp:
    """The same operator acting on the variables `positions` of a larger ring."""
    terms = {}
    for alpha, f in op.terms.items():
        beta = [0] * target.nvars
        for i, a in enumerate(alpha):
            beta[positions[i]] = a
        terms[tuple(beta)] = f.embed(target, positions)
    return DividedPowerOp(target, terms)


def _linear_images(source: PolynomialRing, target: PolynomialRing, M, shift) -> list:
    """Images of source variables under source_i = sum_j M[i][j] target_j + shift_i."""
    f = source.field
    out = []
    for i in range(source.nvars):
        p = target(shift[i] if shift is not None else 0)
        for j in range(target.nvars):
            if M[i][j]:
                p = p + target.gen(j) * f(M[i][j])
        out.append(p)
    return out


def transport(d: DividedPowerOp, T, target: PolynomialRing | None = None, shift=None) -> DividedPowerOp:
    """Rewrite d (in variables x) in new variables y related by x = T y + shift.

    T must be invertible over the coefficient field. The result is computed from
    the action on monomials of degree <= order(d), so it is exact in every
    characteristic (no division by factorials).
    """
    from ..ring import linalg

    src = d.ring
    fld = src.field
    n = src.nvars
    if target is None:
        target = PolynomialRing(fld, ["y%d" % (i + 1) for i in range(n)])
    if target.nvars != n:
        raise ValueError("coordinate change must preserve the number of variables")
    Tm = [[fld(x) for x in row] for row in T]
    if linalg.det(fld, Tm) == fld.zero:
        raise ValueError("singular coordinate change")
    Ti = linalg.inverse(fld, Tm)
    c = [fld(s) for s in shift] if shift is not None else [fld.zero] * n
    # y = Ti (x - c)
    y_in_x = _linear_images(target, src, Ti, [-s for s in linalg.matvec(fld, Ti, c)])
    x_in_y = _linear_images(src, target, Tm, c)

    def action(g: Polynomial) -> Polynomial:
        gx = g.substitute(y_in_x)
        return apply(d, gx).substitute(x_in_y)

    return DividedPowerOp.from_action(target, max(d.order(), 0), action)


def linear_jacobian(T, field) -> object:
    """J = det[dx_i/dy_j] for x = T y."""
    from ..ring import linalg

    return linalg.det(field, [[field(x) for x in row] for row in T])


def transport_dual(d: DividedPowerOp, T, target: PolynomialRing | None = None, shift=None) -> DividedPowerOp:
    """Transport of an operator acting on top forms g dx, re-expressed on the dy trivialization.

    With dx = J dy, the form g dx has dy-coefficient J g, so the transported
    operator is J o transport(d) o J^-1.
    """
    t = transport(d, T, target, shift)
    J = t.ring(linear_jacobian(T, d.ring.field))
    return conjugate(t, J.monomial_inverse()) if not J.is_zero() else t
