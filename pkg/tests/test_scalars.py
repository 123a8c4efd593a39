from fractions import Fraction

import pytest
from gmpy2 import mpq

from sp4hecke.scalars import (
    INF, as_rational, is_odd_prime, is_unit, leading_residue, legendre, residue,
    unit_generator, valuation,
)


@pytest.mark.parametrize("x, v", [(9, 2), (Fraction(5, 27), -3), (mpq(18, 7), 2), (7, 0), (0, INF)])
def test_valuation(x, v):
    assert valuation(x, 3) == v


def test_non_p_denominators_are_units():
    assert is_unit(Fraction(1, 2), 3)
    assert residue(Fraction(1, 2), 3) == 2  # 2 * 2 = 4 = 1 mod 3
    assert residue(Fraction(1, 2), 3, e=2) == 5


def test_residue_rejects_non_integral():
    with pytest.raises(ValueError):
        residue(Fraction(1, 3), 3)


def test_leading_residue():
    assert leading_residue(Fraction(6, 1), 1, 3) == 2
    assert leading_residue(-9, 2, 3) == 2


def test_as_rational_is_exact():
    assert as_rational(Fraction(2, 6)) == mpq(1, 3)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_legendre_matches_squares(p):
    squares = {a * a % p for a in range(1, p)}
    for a in range(1, p):
        assert legendre(a, p) == (1 if a in squares else -1)
    assert legendre(0, p) == 0


def test_primes_and_generators():
    assert [n for n in range(20) if is_odd_prime(n)] == [3, 5, 7, 11, 13, 17, 19]
    for p in (3, 5, 7, 11):
        g = unit_generator(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1
