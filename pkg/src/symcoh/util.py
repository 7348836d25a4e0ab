"""Small numeric helpers shared across modules."""

from __future__ import annotations


def binom_mod2(n: int, k: int) -> int:
    """C(n, k) mod 2 via Lucas: 1 iff the base-2 digits of k sit inside n."""
    if k < 0 or k > n:
        return 0
    return 1 if (k & (n - k)) == 0 else 0


def multinomial_mod2(parts) -> int:
    """(sum parts)! / prod(parts!) mod 2: 1 iff the parts have disjoint binary digits."""
    acc = 0
    for p in parts:
        if acc & p:
            return 0
        acc |= p
    return 1


def dyadic_digits(n: int):
    """Exponents of the binary expansion of n, ascending."""
    k = 0
    while n:
        if n & 1:
            yield k
        n >>= 1
        k += 1


def v2(n: int) -> int:
    """2-adic valuation of a positive integer."""
    if n <= 0:
        raise ValueError("v2 requires a positive integer")
    return (n & -n).bit_length() - 1
