"""Fractions whose denominators are monomials in a fixed list of generators."""

from __future__ import annotations

from typing import Sequence

from .polynomial import Polynomial, PolynomialRing


class LocalizedRing:
    """R[g_1^-1, ..., g_k^-1] for a polynomial ring R and declared generators g_j."""

    __slots__ = ("base", "generators", "_powers")

    def __init__(self, base: PolynomialRing, generators: Sequence[Polynomial]):
        gens = tuple(base(g) for g in generators)
        for g in gens:
            if g.is_zero():
                raise ValueError("cannot invert zero")
        self.base = base
        self.generators = gens
        self._powers: dict = {}

    def __eq__(self, other):
        return isinstance(other, LocalizedRing) and self.base == other.base and self.generators == other.generators

    def __hash__(self):
        return hash((self.base, self.generators))

    def __repr__(self):
        return "%r localized at (%s)" % (self.base, ", ".join(str(g) for g in self.generators))

    def power(self, j: int, e: int) -> Polynomial:
        key = (j, e)
        p = self._powers.get(key)
        if p is None:
            p = self.generators[j] ** e
            self._powers[key] = p
        return p

    def denominator_polynomial(self, exps: Sequence[int]) -> Polynomial:
        p = self.base.one()
        for j, e in enumerate(exps):
            if e:
                p = p * self.power(j, e)
        return p

    def __call__(self, numerator, denominator: Sequence[int] | None = None) -> "LocalizedElement":
        if isinstance(numerator, LocalizedElement):
            if numerator.ring != self:
                raise ValueError("ambient localized ring mismatch")
            return numerator
        num = self.base(numerator)
        den = tuple(denominator) if denominator is not None else (0,) * len(self.generators)
        if len(den) != len(self.generators) or any(e < 0 for e in den):
            raise ValueError("denominator must be a nonnegative exponent vector over the generators")
        return LocalizedElement(self, num, den)

    def generator_inverse(self, j: int, e: int = 1) -> "LocalizedElement":
        den = [0] * len(self.generators)
        den[j] = e
        return LocalizedElement(self, self.base.one(), tuple(den))


class LocalizedElement:
    """numerator / prod g_j^{e_j}; immutable."""

    __slots__ = ("ring", "numerator", "denominator")

    def __init__(self, ring: LocalizedRing, numerator: Polynomial, denominator: tuple):
        self.ring = ring
        self.numerator = numerator
        self.denominator = denominator

    def _other(self, other) -> "LocalizedElement":
        if isinstance(other, LocalizedElement):
            if other.ring != self.ring:
                raise ValueError("ambient localized ring mismatch")
            return other
        return self.ring(other)

    def _lift(self, den: tuple) -> Polynomial:
        extra = tuple(a - b for a, b in zip(den, self.denominator))
        return self.numerator * self.ring.denominator_polynomial(extra)

    def __add__(self, other):
        o = self._other(other)
        den = tuple(max(a, b) for a, b in zip(self.denominator, o.denominator))
        return LocalizedElement(self.ring, self._lift(den) + o._lift(den), den)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedElement(self.ring, -self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        den = tuple(a + b for a, b in zip(self.denominator, o.denominator))
        return LocalizedElement(self.ring, self.numerator * o.numerator, den)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._other(other)
        except (TypeError, ValueError):
            return False
        den = tuple(max(a, b) for a, b in zip(self.denominator, o.denominator))
        return self._lift(den) == o._lift(den)

    def __hash__(self):
        raise TypeError("LocalizedElement equality is by cross-multiplication; not hashable")

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def reduce(self) -> "LocalizedElement":
        """Cancel generator factors that divide the numerator exactly (binomial generators only)."""
        from .polynomial import exact_divide_binomial

        num = self.numerator
        den = list(self.denominator)
        for j, g in enumerate(self.ring.generators):
            while den[j] and len(g.terms) == 2 and not num.is_zero():
                q = exact_divide_binomial(num, g)
                if q is None or not q.is_polynomial() and num.is_polynomial():
                    break
                num, den[j] = q, den[j] - 1
            if num.is_zero():
                den = [0] * len(den)
                break
        return LocalizedElement(self.ring, num, tuple(den))

    def __repr__(self):
        den = " * ".join("(%s)^%d" % (g, e) for g, e in zip(self.ring.generators, self.denominator) if e)
        return "(%s)/(%s)" % (self.numerator, den or "1")
