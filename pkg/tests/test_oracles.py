"""The dimension oracles against tabulated values."""

import pytest

from diffdual.oracles import bott, convolution, monomial_count


@pytest.mark.parametrize("n,d,expected", [
    (1, 0, [1, 0]), (1, 3, [4, 0]), (1, -2, [0, 1]), (1, -5, [0, 4]),
    (2, 2, [6, 0, 0]), (2, -3, [0, 0, 1]), (2, -5, [0, 0, 6]), (2, -1, [0, 0, 0]),
    (3, 1, [4, 0, 0, 0]), (3, -4, [0, 0, 0, 1]),
])
def test_monomial_count(n, d, expected):
    assert monomial_count(n, d) == expected


@pytest.mark.parametrize("n,p,k,expected", [
    (1, 1, 0, [0, 1]), (2, 1, 0, [0, 1, 0]), (2, 2, 0, [0, 0, 1]),
    (2, 1, 2, [3, 0, 0]), (2, 1, -1, [0, 0, 0]), (2, 1, -3, [0, 0, 8]),
    (2, 0, 1, [3, 0, 0]), (3, 1, 0, [0, 1, 0, 0]), (2, 3, 0, [0, 0, 0]),
])
def test_bott(n, p, k, expected):
    assert bott(n, p, k) == expected


@pytest.mark.parametrize("n,d", [(1, 2), (2, 1), (2, -4), (3, 2)])
def test_bott_agrees_with_monomials_for_p0(n, d):
    assert bott(n, 0, d) == monomial_count(n, d)


def test_convolution():
    assert convolution([1, 0], [0, 1]) == [0, 1, 0]
    assert convolution([1, 1], [1, 1]) == [1, 2, 1]
