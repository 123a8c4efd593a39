from fractions import Fraction

import pytest

from sp4hecke.affine import ALPHA, BETA, C2, DELTA, ETA, AffineRoot, reflection
from sp4hecke.chevalley import (
    GroupElement, classify_commutator, commutation_rule_holds, commutator, commutator_constants,
    decompose_unipotent, h_root, n_of, n_root, weyl_image, x_affine, x_root,
)

P = 3


@pytest.mark.parametrize("a", C2.roots)
def test_root_groups_are_symplectic_homomorphisms(a):
    g, h = x_root(a, 2), x_root(a, Fraction(1, 3))
    assert g.is_symplectic()
    assert g * h == x_root(a, Fraction(7, 3))
    assert x_root(a, 5).inverse() == x_root(a, -5)


@pytest.mark.parametrize("a", C2.roots)
def test_pinning_identities(a):
    neg = tuple(-c for c in a)
    for u in (1, 2, Fraction(3, 2)):
        assert n_root(neg, u) == n_root(a, -1 / Fraction(u))
        assert h_root(neg, u) == h_root(a, 1 / Fraction(u))
        assert n_root(a, u).is_monomial()


def test_weyl_image_of_simple_lifts():
    for psi in C2.simple_affine_roots:
        assert weyl_image(n_of(psi, -1, P), P) == reflection(psi)


def test_n_delta_conjugates_u_delta_to_u_minus_delta():
    n = n_of(AffineRoot(DELTA, 0), -1, P)
    y = n.inverse() * x_affine(AffineRoot(DELTA, 0), 1, P) * n
    assert set(decompose_unipotent(y)) == {(-2, 0)}


def test_commutator_constants_by_multiplication():
    c = commutator_constants()
    alpha_neg = tuple(-v for v in ALPHA)
    for u in (1, 2):
        for v in (1, 2):
            lhs = commutator(x_root(alpha_neg, v), x_root(DELTA, u))
            rhs = x_root(BETA, c["a"] * v * v * u) * x_root(ETA, c["b"] * v * u)
            assert lhs == rhs


def test_commutator_classes():
    assert classify_commutator(AffineRoot(BETA, 0), AffineRoot(BETA, 2))[0] == "parallel"
    tag, factors = classify_commutator(AffineRoot(DELTA, 0), AffineRoot((-2, 0), 1))
    assert tag == "opposite"
    assert factors == [AffineRoot(DELTA, 1), AffineRoot((-2, 0), 2)]
    tag, factors = classify_commutator(AffineRoot(ALPHA, 0), AffineRoot(BETA, 0))
    assert tag == "generic" and AffineRoot(ETA, 0) in factors


def test_parallel_commute():
    g = commutator(x_affine(AffineRoot(BETA, 0), 1, P), x_affine(AffineRoot(BETA, 2), 2, P))
    assert g == GroupElement.identity()


def test_commutation_rules_small_levels():
    roots = [AffineRoot(a, k) for a in C2.roots for k in (-1, 0, 1)]
    checked = 0
    for g1 in roots:
        for g2 in roots:
            r = commutation_rule_holds(g1, g2, 1, 2, P)
            if r is not None:
                assert r, (g1, g2)
                checked += 1
    assert checked > 400


def test_group_element_validation():
    with pytest.raises(ValueError):
        GroupElement([1, 2, 3])
    assert GroupElement.diagonal(2, 3).determinant() == 1
