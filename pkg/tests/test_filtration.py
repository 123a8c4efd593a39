import random

import pytest

from sp4hecke.affine import BETA, AffineRoot, GL2, SL2xGL1
from sp4hecke.chevalley import h_root, x_affine
from sp4hecke.filtration import (
    cayley_element, closure_mod_p2, commutator_defects, coordinates, i_plus, i_plus_plus, iwahori,
    k_plus, k_plus_plus, make_character, normality_defects, quotient_factors, quotient_order,
)

SIX = {"beta", "delta", "e1+e2", "1-beta", "1-delta", "1-(e1+e2)"}


@pytest.mark.parametrize("p", [3, 5])
def test_quotient_structure(p):
    Kp, Kpp = k_plus(p), k_plus_plus(p)
    assert {str(f) for f in quotient_factors(Kp, Kpp)} == SIX
    assert normality_defects(Kp, Kpp) == []
    assert commutator_defects(Kp, Kpp) == []


def test_quotient_order_p3():
    assert quotient_order(k_plus(3), k_plus_plus(3)) == 3**6


def test_closure_mod_p2_index():
    assert len(closure_mod_p2(k_plus(3))) // len(closure_mod_p2(k_plus_plus(3))) == 3**6


def test_membership():
    Kp = k_plus(3)
    assert Kp.contains(x_affine(AffineRoot(BETA, 0), 1, 3))
    assert not k_plus_plus(3).contains(x_affine(AffineRoot(BETA, 0), 1, 3))
    assert not Kp.contains(h_root((2, 0), -1))


def test_iwahori_contains_k_plus():
    for alcove in ("sigma", "sigma_prime"):
        I = iwahori(3, alcove)
        assert all(I.contains(g) for g in k_plus(3).generators())
    assert len(i_plus(3).affine_roots()) > 0


def test_coordinates_read_factor_entries():
    g = x_affine(AffineRoot(BETA, 0), 2, 3)
    coords = coordinates(k_plus(3), k_plus_plus(3), g)
    assert coords[AffineRoot(BETA, 0)] == 2
    assert sum(coords.values()) == 2


@pytest.mark.parametrize("case", [SL2xGL1, GL2])
@pytest.mark.parametrize("mu", ["trivial", "legendre"])
def test_character_multiplicative(case, mu):
    chi = make_character(case, 3, mu)
    rng = random.Random(1)
    K = chi.K
    for _ in range(20):
        g, h = cayley_element(K, rng), cayley_element(K, rng)
        assert abs(chi(g * h) - chi(g) * chi(h)) < 1e-9
        k = cayley_element(k_plus_plus(3), rng)
        assert abs(chi(g * k) - chi(g)) < 1e-9


def test_character_validation():
    with pytest.raises(ValueError):
        make_character(SL2xGL1, 3, multipliers=(3, 1))
    with pytest.raises(ValueError):
        make_character(GL2, 3, mu_center="sign")
    with pytest.raises(ValueError, match="outside K"):
        make_character(SL2xGL1, 3)(h_root((0, 2), 3))


def test_iwahori_quotient_has_three_simple_factors():
    Ip, Ipp = i_plus(3), i_plus_plus(3)
    assert {str(f) for f in quotient_factors(Ip, Ipp)} == {"alpha", "beta", "1-delta"}
    assert quotient_order(Ip, Ipp) == 27
