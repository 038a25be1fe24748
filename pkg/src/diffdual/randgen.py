"""Seeded generators of random polynomials, operators and small filtered complexes."""

from __future__ import annotations

import random
from itertools import product

from .diffop import DividedPowerOp
from .filtered import FilteredComplex
from .ring import linalg
from .ring.field import Field
from .ring.polynomial import Polynomial, PolynomialRing


def random_scalar(field: Field, rng: random.Random, bound: int = 5):
    if field.characteristic:
        return field(rng.randrange(field.characteristic))
    num = rng.randint(-bound, bound)
    den = rng.choice((1, 1, 1, 2, 3))
    return field(num) / field(den)


def random_polynomial(ring: PolynomialRing, rng: random.Random, degree: int = 2, terms: int = 3) -> Polynomial:
    exps = [e for e in product(range(degree + 1), repeat=ring.nvars) if sum(e) <= degree]
    out = ring.zero()
    for _ in range(rng.randint(1, terms)):
        out = out + ring.monomial(rng.choice(exps), random_scalar(ring.field, rng))
    return out


def random_operator(ring: PolynomialRing, rng: random.Random, order: int = 3, degree: int = 2,
                    terms: int = 3) -> DividedPowerOp:
    alphas = [a for a in product(range(order + 1), repeat=ring.nvars) if sum(a) <= order]
    out = {}
    for _ in range(rng.randint(1, terms)):
        a = rng.choice(alphas)
        f = random_polynomial(ring, rng, degree, 2)
        out[a] = out[a] + f if a in out else f
    return DividedPowerOp(ring, out)


def random_invertible(field: Field, rng: random.Random, n: int) -> list:
    while True:
        M = [[random_scalar(field, rng, 3) for _ in range(n)] for _ in range(n)]
        if linalg.is_invertible(field, M):
            return M


def random_two_term(field: Field, rng: random.Random, max_dim: int = 3) -> FilteredComplex:
    """V0 -> V1 with two-step filtrations and a filtration-preserving random differential."""
    levels = {k: sorted(rng.randint(0, 1) for _ in range(rng.randint(0, max_dim))) for k in (0, 1)}
    d = linalg.zeros(field, len(levels[1]), len(levels[0]))
    for r, lr in enumerate(levels[1]):
        for c, lc in enumerate(levels[0]):
            if lr >= lc and rng.random() < 0.7:
                d[r][c] = random_scalar(field, rng, 3)
    return FilteredComplex(field, levels, {0: d})
