"""Sign conventions shared by the Čech, product and duality code.

* Čech coboundary: (dc)(i_0..i_{k+1}) = sum_p (-1)^p c(i_0..^i_p..i_{k+1}).
* Cup product (Alexander-Whitney on increasing tuples):
  (a u b)(i_0..i_{p+q}) = a(i_0..i_p) * b(i_p..i_{p+q}), no extra sign.
* Total complex of E --D--> F, with T^k = C^k(E) + C^(k-1)(F):
  d(a, b) = (da, db + total_sign(k) * D a).
* SIGMA is the single free global sign of the duality statements. It orients
  the passage from diagonal fraction classes to Čech classes on the product
  and is pinned so that the coevaluation composite for O on P^1 is +1.
* The shifted pairing RΓ(E*)[n] (x) RΓ(E) -> k carries the Koszul sign
  shift_sign(n, p) on a class of degree p of E.
"""

SIGMA = 1


def cech_sign(position: int) -> int:
    return -1 if position % 2 else 1


def total_sign(degree: int) -> int:
    return -1 if degree % 2 else 1


def shift_sign(n: int, p: int) -> int:
    return -1 if (n * p) % 2 else 1


def permutation_sign(seq) -> tuple:
    """(sign, sorted tuple) of a sequence of distinct items; sign 0 if an item repeats."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0, tuple(sorted(items))
    sign = 1
    arr = items[:]
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)
