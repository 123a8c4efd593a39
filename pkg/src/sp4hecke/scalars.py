"""Exact p-adic bookkeeping on rational numbers.

The field Q sits inside Q_p, and everything the engine builds (root-group
elements, Weyl representatives, torus elements) has rational entries.  The
uniformizer is the rational prime ``p`` itself.  Matrix entries are gmpy2
``mpq`` values; :class:`fractions.Fraction` and ``int`` are accepted anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from gmpy2 import mpq, remove

Number = Union[int, Fraction, type(mpq())]

INF = float("inf")


def as_fraction(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


_MPQ = type(mpq())


def as_rational(x: Number):
    """x as an exact gmpy2 rational (the scalar type of matrix entries)."""
    return x if isinstance(x, _MPQ) else mpq(x)


def valuation(x: Number, p: int):
    """p-adic valuation of a rational; ``INF`` for zero."""
    if x == 0:
        return INF
    if isinstance(x, int):
        return remove(x, p)[1]
    return remove(x.numerator, p)[1] - remove(x.denominator, p)[1]


def is_unit(x: Number, p: int) -> bool:
    return valuation(x, p) == 0


def residue(x: Number, p: int, e: int = 1) -> int:
    """Image of a p-integral rational in Z/p^e, as an integer in [0, p^e)."""
    x = as_rational(x)
    if valuation(x, p) < 0:
        raise ValueError(f"{x} is not p-integral for p={p}")
    mod = p**e
    return int(x.numerator * pow(x.denominator, -1, mod) % mod)


def leading_residue(x: Number, level: int, p: int) -> int:
    """Residue of ``x / p**level`` mod p; requires valuation(x) >= level."""
    return residue(as_rational(x) / mpq(p) ** level, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def unit_generator(p: int) -> int:
    """Smallest generator of the cyclic group (Z/p)^x."""
    order = p - 1
    factors = [q for q in range(2, order + 1) if order % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, order // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"{p} is not prime")
