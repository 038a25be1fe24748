"""Closed-form and brute-force dimension counts, independent of the Čech engine."""

from __future__ import annotations

from itertools import product
from math import comb


def monomial_count(n: int, d: int) -> list:
    """dims H^k(P^n, O(d)) by counting Laurent monomials of degree d by sign pattern.

    H^0 counts exponent vectors in Z^(n+1) with all entries >= 0, H^n those with
    all entries <= -1; no other degree contributes.
    """
    dims = [0] * (n + 1)
    bound = abs(d) + n + 1
    for m in product(range(-bound, bound + 1), repeat=n + 1):
        if sum(m) != d:
            continue
        if all(a >= 0 for a in m):
            dims[0] += 1
        elif all(a <= -1 for a in m):
            dims[n] += 1
    return dims


def bott(n: int, p: int, k: int) -> list:
    """dims H^q(P^n, Omega^p(k)) from the Bott formula."""
    dims = [0] * (n + 1)
    if not 0 <= p <= n:
        return dims
    if k > p:
        dims[0] = comb(k + n - p, k) * comb(k - 1, p)
    if k == 0:
        dims[p] = 1
    if k < p - n:
        dims[n] = comb(-k + p, -k) * comb(-k - 1, n - p)
    return dims


def convolution(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out
