"""Sparse multivariate (Laurent) polynomials over an exact field.

Exponent vectors are dense tuples, terms live in a dict with no stored zeros.
Negative exponents are permitted: chart overlaps of the catalog schemes are
Laurent-monomial localizations, so a single term type covers both the chart
rings and their overlap rings.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .field import Field, binomial

Exp = tuple


class PolynomialRing:
    __slots__ = ("field", "names", "nvars", "_index")

    def __init__(self, field: Field, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("repeated variable names: %r" % (names,))
        self.field = field
        self.names = names
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and self.field == other.field and self.names == other.names

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return "%s[%s]" % (self.field, ",".join(self.names))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError("unknown variable %r in %r" % (name, self)) from None

    def __call__(self, value=0) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise ValueError("variable-list mismatch: %r vs %r" % (value.ring, self))
            return value
        c = self.field(value)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self(1)

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp: Sequence[int], coeff=1) -> "Polynomial":
        exp = tuple(exp)
        if len(exp) != self.nvars:
            raise ValueError("exponent arity %d, ring has %d variables" % (len(exp), self.nvars))
        c = self.field(coeff)
        return Polynomial(self, {exp: c} if c else {})

    def from_terms(self, terms: Mapping[Exp, object]) -> "Polynomial":
        f = self.field
        out = {}
        for e, c in terms.items():
            c = f(c)
            if c:
                out[tuple(e)] = c
        return Polynomial(self, out)


class Polynomial:
    """An immutable element of a PolynomialRing (exponents may be negative)."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- helpers ---------------------------------------------------------
    def _other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("variable-list mismatch: %r vs %r" % (self.ring, other.ring))
            return other
        return self.ring(other)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if not o.terms:
            return self
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.field(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})
        o = self._other(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a scalar or by a monomial (a unit of the Laurent ring)."""
        if isinstance(other, Polynomial):
            return self * other.monomial_inverse()
        c = self.ring.field(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (self.ring.field.one / c)

    def __pow__(self, k: int):
        if k < 0:
            return self.monomial_inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monomial_inverse(self) -> "Polynomial":
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials are units of the Laurent ring, got %s" % self)
        (e, c), = self.terms.items()
        return Polynomial(self.ring, {tuple(-a for a in e): self.ring.field.one / c})

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring(other).terms
        except (TypeError, ValueError):
            return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        z = (0,) * self.ring.nvars
        return not self.terms or (len(self.terms) == 1 and z in self.terms)

    def is_polynomial(self) -> bool:
        """True when no exponent is negative."""
        return all(a >= 0 for e in self.terms for a in e)

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), self.ring.field.zero)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        return max(e[i] for e in self.terms) if self.terms else -1

    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.ring.nvars))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0])))

    # -- maps ------------------------------------------------------------
    def embed(self, target: PolynomialRing, positions: Sequence[int] | None = None) -> "Polynomial":
        """Map into `target`, sending variable i to variable positions[i] (by name if omitted)."""
        if positions is None:
            positions = [target.index(n) for n in self.ring.names]
        if target.field != self.ring.field:
            raise ValueError("field mismatch")
        out = {}
        m = target.nvars
        for e, c in self.terms.items():
            ne = [0] * m
            for i, a in enumerate(e):
                if a:
                    ne[positions[i]] += a
            out[tuple(ne)] = c
        return Polynomial(target, out)

    def substitute_monomials(self, target: PolynomialRing, images: Sequence[Sequence[int]],
                             coeffs: Sequence | None = None) -> "Polynomial":
        """Substitute variable i by coeffs[i] * target-monomial with exponent images[i]."""
        out: dict = {}
        m = target.nvars
        for e, c in self.terms.items():
            ne = [0] * m
            for i, a in enumerate(e):
                if a:
                    im = images[i]
                    for j in range(m):
                        ne[j] += a * im[j]
                    if coeffs is not None:
                        c = c * coeffs[i] ** a
            ne = tuple(ne)
            v = out.get(ne)
            out[ne] = c if v is None else v + c
        return Polynomial(target, {e: c for e, c in out.items() if c})

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """General substitution; negative powers require monomial images."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = images[0].ring if images else self.ring
        result = target.zero()
        cache: dict = {}
        for e, c in self.terms.items():
            t = target(c)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    p = cache.get(key)
                    if p is None:
                        p = images[i] ** a
                        cache[key] = p
                    t = t * p
            result = result + t
        return result

    def evaluate(self, point: Sequence) -> object:
        f = self.ring.field
        total = f.zero
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = v * f(x) ** a
            total = total + v
        return total

    def map_coefficients(self, fn) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return Polynomial(self.ring, out)

    # -- printing --------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return "Polynomial(%s)" % format_polynomial(self)


def _format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)
    return str(c)


def format_monomial(names: Sequence[str], e: Sequence[int]) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a:
            parts.append("%s^%d" % (n, a) if a > 0 else "%s^(%d)" % (n, a))
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = format_monomial(p.ring.names, e)
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        cs = _format_scalar(c)
        if mono:
            body = mono if cs == "1" else "%s*%s" % (cs, mono)
        else:
            body = cs
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def taylor_shift(p: Polynomial, var_map: Mapping[str, tuple], target: PolynomialRing,
                 truncation: Mapping[str, int] | None = None) -> Polynomial:
    """Substitute x_i -> y_i + t_i, writing the result in `target`.

    `var_map` sends a variable name of p's ring to a pair (y_name, t_name).
    Variables not in the map keep their name. Negative exponents expand as
    binomial series in t, which needs `truncation[t_name]` = highest t-power kept;
    any truncation also drops higher powers of t for the nonnegative exponents.
    """
    ys = [v[0] for v in var_map.values()]
    ts = [v[1] for v in var_map.values()]
    fixed = [n for n in p.ring.names if n not in var_map]
    pool = ys + ts
    if len(set(pool)) != len(pool):
        raise ValueError("name collision among shift variables")
    if set(ts) & set(fixed) or set(ts) & set(ys):
        raise ValueError("name collision among shift variables")
    for n in pool + fixed:
        target.index(n)
    truncation = dict(truncation or {})
    f = target.field
    m = target.nvars
    plan = []
    for i, n in enumerate(p.ring.names):
        if n in var_map:
            y, t = var_map[n]
            plan.append((target.index(y), target.index(t), truncation.get(t)))
        else:
            plan.append((target.index(n), None, None))
    cache: dict = {}

    def expansion(i, a):
        key = (i, a)
        if key in cache:
            return cache[key]
        yi, ti, cap = plan[i]
        if ti is None:
            res = [(yi, a, None, 0, f.one)]
        else:
            if a < 0 and cap is None:
                raise ValueError("negative exponent needs a truncation order for %r" % target.names[ti])
            top = a if (a >= 0 and (cap is None or cap >= a)) else cap
            res = []
            for k in range(top + 1):
                b = f(binomial(a, k))
                if b:
                    res.append((yi, a - k, ti, k, b))
        cache[key] = res
        return res

    out: dict = {}
    for e, c in p.terms.items():
        partial = [((0,) * m, c)]
        for i, a in enumerate(e):
            if not a:
                continue
            nxt = []
            for base, bc in partial:
                for yi, ya, ti, tk, coef in expansion(i, a):
                    ne = list(base)
                    ne[yi] += ya
                    if ti is not None:
                        ne[ti] += tk
                    nxt.append((tuple(ne), bc * coef))
            partial = nxt
        for ne, v in partial:
            w = out.get(ne)
            out[ne] = v if w is None else w + v
    return Polynomial(target, {e: c for e, c in out.items() if c})


def exact_divide_binomial(p: Polynomial, f: Polynomial) -> Polynomial | None:
    """Quotient p / f in the Laurent ring when f has exactly two terms, else None if inexact."""
    if len(f.terms) != 2:
        raise ValueError("divisor must be a binomial")
    (e1, c1), (e2, c2) = sorted(f.terms.items())
    r = tuple(b - a for a, b in zip(e1, e2))
    ratio = c2 / c1
    # f = c1*x^e1 * (1 + ratio*x^r); divide each coset chain of p by (1 + ratio*z).
    chains: dict = {}
    for e, c in p.terms.items():
        k = _chain_position(e, r)
        base = tuple(a - k * b for a, b in zip(e, r))
        chains.setdefault(base, {})[k] = c
    ring = p.ring
    fld = ring.field
    out = {}
    for base, coeffs in chains.items():
        lo, hi = min(coeffs), max(coeffs)
        # q(z) with (1 + ratio z) q(z) = s(z): q_k = s_k - ratio q_{k-1}
        prev = fld.zero
        for k in range(lo, hi):
            q = coeffs.get(k, fld.zero) - ratio * prev
            if q:
                out[tuple(a + k * b - d for a, b, d in zip(base, r, e1))] = q / c1
            prev = q
        if coeffs.get(hi, fld.zero) - ratio * prev:
            return None
    return Polynomial(ring, out)


def _chain_position(e, r) -> int:
    # shifting e by r moves floor(e_i / r_i) by exactly one for the first r_i != 0
    for a, b in zip(e, r):
        if b:
            return a // b
    return 0
