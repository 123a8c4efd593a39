import itertools
import random

import pytest

from sp4hecke.affine import ALPHA, DELTA, ETA, GL2, W_DELTA, W_N, AffineRoot, SL2xGL1
from sp4hecke.chevalley import GroupElement, decompose_unipotent, h_root, n_root, x_affine, x_root
from sp4hecke.filtration import make_character
from sp4hecke.hecke import (
    AbstractHeckeElement, HeckeAlgebra, HeckeElement, StructureError, abstract_multiply,
    biequivariance_defect, convolve, gauss_sum, in_N_psi, lift_weyl,
    pairwise_distinct, product_coset_classes, random_group_element, square_candidates,
    structure_constants, verify_witness, weyl_image,
)

ONE = GroupElement.identity()


def test_coset_table_sizes_and_reps():
    weak = HeckeAlgebra(make_character(SL2xGL1, 3), strong=False)
    t = weak.table(weak.rep("delta"))
    assert len(t) == 9
    for x in t.reps:
        assert set(decompose_unipotent(x)) <= {DELTA, ETA}


def test_case2_closed_form_reps_fill_the_table():
    weak = HeckeAlgebra(make_character(GL2, 3), strong=False)
    n = weak.rep("n")
    t = weak.table(n)
    assert len(t) == 27
    hits = set()
    for u, v, s in itertools.product(range(3), repeat=3):
        x = (x_affine(AffineRoot(DELTA, 0), u, 3) * x_affine(AffineRoot((0, -2), 1), v, 3)
             * x_affine(AffineRoot(ALPHA, 1), s, 3) * n)
        hits.add(t.locate(x)[0])
    assert hits == set(range(27))


def test_coset_keys_agree_with_pairwise_oracle(algebra):
    A = algebra(SL2xGL1, 3)
    t = A.table(A.rep("delta"))
    assert pairwise_distinct(t)


def test_weyl_lifts():
    for w in (W_DELTA, W_N):
        assert weyl_image(lift_weyl(w, 3), 3) == w


def test_support_of_strip_generators(algebra, case):
    A = algebra(case, 3, "legendre")
    for s in A.letters:
        assert in_N_psi(A.chi, A.rep(s))
        assert A.supports(A.rep(s)).decision is True


def test_vertical_strip_is_not_supported(algebra):
    A = algebra(SL2xGL1, 3)
    g = n_root(ALPHA, -1)
    res = A.supports(g)
    assert res.decision is False
    assert set(decompose_unipotent(res.witness)) == {DELTA}
    assert verify_witness(A.K, A.chi, g, res)
    assert not in_N_psi(A.chi, g)


def test_basis_function_values(algebra):
    A = algebra(SL2xGL1, 3, "legendre")
    f, n = A.f("delta"), A.rep("delta")
    assert f(n) == 1
    assert f(n.inverse()) == A.chi.mu(h_root(DELTA, -1)) == -1
    for v in (1, 2):
        assert f(x_root((-1, 1), v)) == 0


def test_biequivariance(algebra):
    A = algebra(GL2, 3, "legendre")
    rng = random.Random(3)
    f = A.f("n")
    for _ in range(10):
        k1, k2 = random_group_element(A.K, rng), random_group_element(A.K, rng)
        assert biequivariance_defect(f, A.rep("n"), k1, k2) < 1e-9


def test_unit_is_neutral(algebra, case):
    A = algebra(case, 3)
    for s in A.letters:
        f = A.f(s)
        assert (A.unit() * f).distance(f) < 1e-12
        assert (f * A.unit()).distance(f) < 1e-12


def test_convolve_pointwise_matches_product(algebra):
    A = algebra(SL2xGL1, 3, "legendre")
    f = A.f("delta")
    prod = f * f
    for x, v in list(prod.items())[:5]:
        assert abs(convolve(f, f, x) - v) < 1e-9


def test_linear_operations(algebra):
    A = algebra(SL2xGL1, 3)
    f = A.f("delta")
    assert (f + f - 2 * f).is_zero()
    assert (f / 2 * 2).distance(f) < 1e-12
    assert f.support_size() == len(A.table(A.rep("delta")))


@pytest.mark.parametrize("mu, expected", [("trivial", -1), ("legendre", 1j * 3**0.5)])
def test_gauss_sum_p3(mu, expected):
    assert abs(gauss_sum(make_character(SL2xGL1, 3, mu)) - expected) < 1e-9


def test_structure_constants_case1(algebra):
    A = algebra(SL2xGL1, 3, "legendre")
    res = structure_constants(A, A.f("delta"), A.f("delta"), square_candidates(A, "delta"))
    assert abs(res.coefficients["1"] + 9) < 1e-9
    assert abs(res.coefficients["delta"] - 2 * A.gauss("delta")) < 1e-9
    assert res.residual < 1e-9


def test_structure_constants_case2_trivial(algebra):
    A = algebra(GL2, 3)
    res = structure_constants(A, A.f("n"), A.f("n"), square_candidates(A, "n"))
    assert abs(res.coefficients["1"] - 27) < 1e-9
    assert abs(res.coefficients["n"] - 6) < 1e-9


def test_structure_error_off_candidates(algebra):
    A = algebra(SL2xGL1, 3, "legendre")
    with pytest.raises(StructureError):
        structure_constants(A, A.f("delta"), A.f("delta"), {"1": ONE})


def test_abstract_quadratic_relation():
    params = {"s": 3, "t": 3}
    ts = AbstractHeckeElement.basis(params, ("s",))
    one = AbstractHeckeElement.basis(params)
    assert ts * ts == 3 * one + 2 * ts
    st = abstract_multiply(ts, AbstractHeckeElement.basis(params, ("t",)))
    assert st == AbstractHeckeElement.basis(params, ("s", "t"))
    with pytest.raises(ValueError):
        AbstractHeckeElement.basis(params, ("s", "s"))


def test_normalized_generators(algebra, case):
    A = algebra(case, 3)
    for s, q in A.quadratic_parameters().items():
        e = A.e(s)
        assert (e * e).distance(q * A.unit() + (q - 1) * e) < 1e-9


def test_product_classes_delta(algebra):
    A = algebra(SL2xGL1, 3)
    n = A.rep("delta")
    counts = product_coset_classes(A, n, n, {"1": W_DELTA * W_DELTA, "w": W_DELTA}, "sigma_prime")
    assert counts["unclassified"] == 0
    assert (counts["1"], counts["w"]) == (3, 9)


def test_bad_letter(algebra):
    A = algebra(SL2xGL1, 3)
    with pytest.raises(ValueError):
        A.rep("n")
    assert isinstance(A.unit(), HeckeElement)
