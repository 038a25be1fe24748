"""Coefficient fields: the rationals and prime fields of small characteristic."""

from __future__ import annotations

from fractions import Fraction
from math import comb

MAX_PRIME = 97


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Mod:
    """A residue class modulo a prime, always stored reduced into [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("residues modulo different primes")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError("denominator vanishes modulo p")
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return Mod(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            if self.v == 0:
                raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
            return Mod(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return Mod(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


class Field:
    """Base class; instances are callable and coerce ints and fractions."""

    characteristic = 0
    name = "?"

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def binomial(self, n: int, k: int):
        """Generalized binomial coefficient C(n, k), computed in ZZ then mapped in."""
        return self(binomial(n, k))

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class RationalField(Field):
    characteristic = 0
    name = "Q"

    def __call__(self, x):
        if isinstance(x, Mod):
            raise ValueError("cannot coerce a residue class into Q")
        return Fraction(x)


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p) or p > MAX_PRIME:
            raise ValueError("prime fields are supported for primes p <= %d, got %r" % (MAX_PRIME, p))
        self.characteristic = p
        self.name = "F%d" % p

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.characteristic:
                raise ValueError("residue modulo a different prime")
            return x
        if isinstance(x, Fraction):
            return Mod(1, self.characteristic) * x
        return Mod(int(x), self.characteristic)


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Parse "Q", "QQ", "F5", "Fp(5)" or "GF(5)"."""
    s = name.strip().replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    for prefix in ("Fp(", "GF(", "F("):
        if s.startswith(prefix) and s.endswith(")"):
            return GF(int(s[len(prefix):-1]))
    if s.startswith("F") and s[1:].isdigit():
        return GF(int(s[1:]))
    raise ValueError("unknown field %r" % name)


def binomial(n: int, k: int) -> int:
    """C(n, k) for any integer n and k >= 0 (negative n via the upper-negation rule)."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(k - n - 1, k)
