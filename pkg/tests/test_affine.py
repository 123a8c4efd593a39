from fractions import Fraction

import pytest

from sp4hecke.affine import (
    ALPHA, BETA, C2, DELTA, ETA, GL2, W_DELTA, W_N, W_ONE_MINUS_DELTA, AffineRoot,
    AffineWeylElement, LeviShape, SL2xGL1, enumerate_weyl, gallery_length, levi_common_point,
    levi_shapes, predicted_admissible, preserves_strip, reduced_word, reflection,
    strip_stabilizer_elements, strip_words, wall_crossing_roots,
)


def test_root_system():
    assert len(C2.roots) == 8
    assert set(C2.roots) >= {ALPHA, BETA, DELTA, ETA}
    assert [str(r) for r in C2.simple_affine_roots] == ["alpha", "beta", "1-delta"]


def test_affine_root_arithmetic():
    psi = AffineRoot(DELTA, 0)
    assert psi.complement() == AffineRoot((-2, 0), 1)
    assert psi((Fraction(1, 4), 0)) == Fraction(1, 2)
    assert -(-psi) == psi


def test_reflections_are_involutions():
    for psi in C2.simple_affine_roots:
        s = reflection(psi)
        assert (s * s).is_identity()
        assert s.act_on_root(psi) == -psi


def test_coxeter_growth():
    # Bott: W_0(t) / ((1 - t)(1 - t^3)) with W_0(t) = (1 + t)(1 + t + t^2 + t^3)
    counts = {}
    for w, length in enumerate_weyl(4).items():
        counts[length] = counts.get(length, 0) + 1
    assert [counts[k] for k in range(5)] == [1, 3, 5, 8, 11]


def test_length_one_strip_elements():
    assert set(strip_stabilizer_elements(SL2xGL1, 1)) == {
        AffineWeylElement.identity(), W_DELTA, W_ONE_MINUS_DELTA}
    assert W_N in strip_stabilizer_elements(GL2, 1)


@pytest.mark.parametrize("case, factor", [(SL2xGL1, 2), (GL2, 3)])
def test_wall_crossings_match_gallery_length(case, factor):
    for w in strip_stabilizer_elements(case, 4):
        m = gallery_length(w, case)
        assert len(wall_crossing_roots(w, case)) == factor * m
        assert preserves_strip(w, case)


def test_named_wall_crossings():
    assert gallery_length(W_DELTA, SL2xGL1) == 1
    assert wall_crossing_roots(W_DELTA, SL2xGL1) == {AffineRoot(ETA, 0), AffineRoot(DELTA, 0)}
    assert wall_crossing_roots(W_N, GL2) == {
        AffineRoot(DELTA, 0), AffineRoot((0, -2), 1), AffineRoot(ALPHA, 1)}


def test_words_alternate_and_reduce():
    for case in (SL2xGL1, GL2):
        for word in strip_words(case, 3):
            assert all(a != b for a, b in zip(word, word[1:]))
    assert reduced_word(W_DELTA * W_ONE_MINUS_DELTA, SL2xGL1) == ("delta", "1-delta")


def test_levi_line_for_sl2_gl1():
    sol = levi_common_point(LeviShape((1,), 1))
    assert sol.point[1] == Fraction(1, 4)
    assert sol.directions == ((1, 0),)
    assert sol.value == Fraction(1, 2)  # see the notes for the 1/4 normalization


@pytest.mark.parametrize("n", range(1, 7))
def test_levi_solver_matches_closed_form(n):
    for shape in levi_shapes(n):
        assert (levi_common_point(shape) is not None) == predicted_admissible(shape), shape


def test_levi_rank_two():
    ok = {str(s) for s in levi_shapes(2) if levi_common_point(s)}
    assert ok == {"GL(2)", "GL(1) x Sp(2)", "Sp(4)"}


def test_levi_dichotomies():
    assert levi_common_point(LeviShape((2, 3), 0)) is None
    assert levi_common_point(LeviShape((3, 3), 0)) is not None
    assert levi_common_point(LeviShape((4,), 2)) is not None
    assert levi_common_point(LeviShape((2,), 2)) is None
    assert levi_common_point(LeviShape((2,), 1)) is not None


def test_bad_shape():
    with pytest.raises(ValueError):
        LeviShape((0,), 1)
