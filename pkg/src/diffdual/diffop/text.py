"""Text form of operators, e.g. "x*d[1,0] - d[0,2]".

Grammar (products are compositions, so "d[1]*x" means x*d[1] + 1):

    expr   := term (("+" | "-") term)*
    term   := ("+" | "-")* factor ("*" factor | "/" number)*
    factor := number | name ["^" int] | "d[" int ("," int)* "]" | "(" expr ")" ["^" int]
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..ring.polynomial import Polynomial, PolynomialRing
from .operator import DividedPowerOp, compose

_TOKEN = re.compile(r"\s*(?:(d\[[0-9,\s]*\])|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def format_operator(op: DividedPowerOp) -> str:
    if not op.terms:
        return "0"
    parts = []
    for alpha in sorted(op.terms, reverse=True):
        f = op.terms[alpha]
        dpart = "d[%s]" % ",".join(str(a) for a in alpha) if any(alpha) else ""
        neg = False
        if f.is_monomial():
            (e, c), = f.terms.items()
            if isinstance(c, Fraction) and c < 0:
                neg, f = True, -f
        fs = str(f)
        if not f.is_monomial():
            fs = "(%s)" % fs
        if dpart:
            body = dpart if fs == "1" else "%s*%s" % (fs, dpart)
        else:
            body = fs
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


class _Parser:
    def __init__(self, text: str, ring: PolynomialRing):
        self.ring = ring
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            d, num, name, other = m.groups()
            if d is not None:
                self.toks.append(("d", d))
            elif num is not None:
                self.toks.append(("num", int(num)))
            elif name is not None:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", other))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError("parse error at token %d: expected %s %s, got %r" % (self.pos, kind or "", value or "", tok[1]))
        self.pos += 1
        return tok

    def parse(self) -> DividedPowerOp:
        op = self.expr()
        if self.pos != len(self.toks):
            raise ValueError("trailing input at token %d" % self.pos)
        return op

    def expr(self) -> DividedPowerOp:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = self.take()[1]
            t = self.term()
            acc = acc + t if sign == "+" else acc - t
        return acc

    def term(self) -> DividedPowerOp:
        neg = False
        while self.peek() in (("op", "+"), ("op", "-")):
            if self.take()[1] == "-":
                neg = not neg
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            o = self.take()[1]
            if o == "*":
                acc = compose(acc, self.factor())
            else:
                k = self.take("num")[1]
                acc = acc.scale(self.ring.field.one / self.ring.field(k))
        return -acc if neg else acc

    def exponent(self) -> int:
        if self.peek() == ("op", "^"):
            self.take()
            if self.peek() == ("op", "("):
                self.take()
                sign = -1 if self.peek() == ("op", "-") else 1
                if sign < 0:
                    self.take()
                k = self.take("num")[1] * sign
                self.take("op", ")")
                return k
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            return self.take("num")[1] * sign
        return 1

    def factor(self) -> DividedPowerOp:
        kind, val = self.peek()
        R = self.ring
        if kind == "num":
            self.take()
            return DividedPowerOp.multiplication(R(val))
        if kind == "name":
            self.take()
            e = self.exponent()
            return DividedPowerOp.multiplication(R.gen(R.index(val)) ** e)
        if kind == "d":
            self.take()
            inner = val[2:-1].replace(" ", "")
            alpha = tuple(int(x) for x in inner.split(",")) if inner else ()
            if len(alpha) != R.nvars:
                raise ValueError("d[...] needs %d indices, got %r" % (R.nvars, val))
            return DividedPowerOp.monomial_op(R, alpha)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            e = self.exponent()
            if e < 0:
                raise ValueError("negative power of a parenthesized expression")
            out = DividedPowerOp.identity(R)
            for _ in range(e):
                out = compose(out, inner)
            return out
        raise ValueError("unexpected token %r" % (val,))


def parse_operator(text: str, ring: PolynomialRing) -> DividedPowerOp:
    return _Parser(text, ring).parse()


def parse_polynomial(text: str, ring: PolynomialRing) -> Polynomial:
    op = parse_operator(text, ring)
    if op.order() > 0:
        raise ValueError("expected a function, found derivatives in %r" % text)
    return op.coefficient((0,) * ring.nvars)
