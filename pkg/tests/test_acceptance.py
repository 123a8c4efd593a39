"""The eleven acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line, collected again in
the terminal summary.  Criterion 7 contains one known conflict, kept red as a
strict xfail; the analysis is in notes/decisions.md next to the package.
"""

import itertools
import time

import pytest

from sp4hecke.affine import GL2, SL2xGL1, levi_common_point, levi_shapes
from sp4hecke.filtration import LEGENDRE, SIGN, TRIVIAL
from sp4hecke.hecke import product_coset_classes, product_cases
from sp4hecke.suites import (
    RunConfig, commutation_rows, exact_row, gauss_rows, gl2_symmetry_rows, iso_rows, length_rows, levi_rows,
    structure_rows, subgroup_rows, support_rows,
)


class KnownConflict(AssertionError):
    """A criterion row that disagrees with its closed form, analysed in the notes."""


@pytest.fixture
def report(acceptance_lines):
    def emit(number: int, title: str, rows, detail: str = "") -> bool:
        return _report(acceptance_lines, number, title, rows, detail)
    return emit


def _report(sink: list, number: int, title: str, rows, detail: str) -> bool:
    bad = [r for r in rows if not r.passed]
    ok = not bad
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} ({len(rows)} checks"
    line += f", {len(bad)} failing)" if bad else ")"
    if detail:
        line += f"  {detail}"
    print(line)
    sink.append(line)
    return ok


def failing(rows):
    return [(r.anchor, r.computed, r.expected) for r in rows if not r.passed]


def test_criterion_01_subgroup_structure(report):
    rows = []
    for p in (3, 5):
        start = time.perf_counter()
        rows += subgroup_rows(RunConfig(prime=p))
        if p == 3:
            assert time.perf_counter() - start < 30
    ok = report(1, "K++ normal in K+, abelian quotient of order p^6 (p = 3, 5)", rows)
    assert ok, failing(rows)


def test_criterion_02_commutation_rules(report):
    rows = commutation_rows(3, max_level=2)
    ok = report(2, "commutators in the predicted subgroups, |level| <= 2, p = 3", rows)
    assert ok, failing(rows)


def test_criterion_03_length_formula(report):
    rows = length_rows(RunConfig(prime=3, case=SL2xGL1, length_bound=3))
    rows += length_rows(RunConfig(prime=3, case=GL2, length_bound=2))
    ok = report(3, "coset counts q^2m / q^3m and wall crossings 2m / 3m", rows)
    assert ok, failing(rows)


def test_criterion_04_support(report):
    rows = support_rows(RunConfig(prime=3, case=SL2xGL1))
    rows += support_rows(RunConfig(prime=3, case=GL2))
    ok = report(4, "support exactly on K+ N_psi K+, every negative witnessed (p = 3)", rows)
    assert ok, failing(rows)


def test_criterion_05_gauss_sums(report):
    rows = []
    for p in (3, 5, 7):
        for mults in itertools.product(range(1, p), repeat=2):
            for center in (TRIVIAL, SIGN):
                cfg = RunConfig(prime=p, mu=LEGENDRE, mu_center=center, multipliers=mults,
                                tolerance=1e-9)
                rows += gauss_rows(cfg)
    ok = report(5, "G^2 = mu(h_delta(-1)) q for p = 3, 5, 7 and all multipliers; G = i sqrt 3", rows)
    assert ok, failing(rows)


def test_criterion_06_structure_case1(report):
    rows = []
    for p in (3, 5):
        for mu in (TRIVIAL, LEGENDRE):
            rows += structure_rows(RunConfig(prime=p, case=SL2xGL1, mu=mu), with_products=False)
    ok = report(6, "f_delta^2 and f_(1-delta)^2 in case SL2xGL1, p = 3, 5", rows)
    assert ok, failing(rows)


@pytest.mark.xfail(strict=True, raises=KnownConflict,
                   reason="f_alpha^2 = +1 while mu(h_alpha(-1)) = -1 at p = 3, Legendre mu; "
                          "see notes/decisions.md")
def test_criterion_07_structure_case2(report):
    rows = []
    for p in (3, 5):
        for mu in (TRIVIAL, LEGENDRE):
            rows += structure_rows(RunConfig(prime=p, case=GL2, mu=mu), with_products=False)
    alpha = [r for r in rows if r.anchor.startswith("f_alpha") and not r.passed]
    other = [r for r in rows if not r.passed and r not in alpha]
    ok = report(7, "f_n^2 and f_alpha^2 in case GL2, p = 3, 5", rows,
                "" if not alpha else "[f_alpha^2 at p = 3, Legendre mu: see notes/decisions.md]")
    assert not other, failing(other)
    if not ok:
        raise KnownConflict(failing(alpha))


def test_criterion_08_normalized_relations_and_isomorphism(report):
    rows = []
    for case, mu in ((SL2xGL1, LEGENDRE), (SL2xGL1, TRIVIAL), (GL2, TRIVIAL), (GL2, LEGENDRE)):
        rows += iso_rows(RunConfig(prime=3, case=case, mu=mu))
    quadratic = [r for r in rows if r.anchor.startswith("e_")]
    assert any(r.anchor.startswith("e_delta^2 = 3 + 2") for r in quadratic)
    assert any(r.anchor.startswith("e_n^2 = 3 + 2") for r in quadratic)
    assert any(r.anchor.startswith("e_alpha^2 = 1 + 0") for r in quadratic)
    ok = report(8, "e^2 = q + (q - 1) e, e_alpha^2 = 1, phi(t_w) single-coset, volumes multiply", rows)
    assert ok, failing(rows)


def test_criterion_09_product_cases(algebra, report):
    rows = []
    for case in (SL2xGL1, GL2):
        A = algebra(case, 3)
        for letter, alcove, cands in product_cases(case):
            n = A.rep(letter)
            counts = product_coset_classes(A, n, n, cands, alcove)
            rows.append(exact_row(f"{case} n_{letter}: cosets outside {sorted(cands)}",
                                  counts["unclassified"], 0))
            rows.append(exact_row(f"{case} n_{letter}: the identity cell is hit",
                                  counts["1"] > 0, True))
    ok = report(9, "K n K n K inside the predicted Iwahori cells (p = 3)", rows)
    assert ok, failing(rows)


def test_criterion_10_levi_classification(report):
    start = time.perf_counter()
    rows = levi_rows(6)
    elapsed = time.perf_counter() - start
    n2 = {str(s) for s in levi_shapes(2) if levi_common_point(s) and str(s) != "Sp(4)"}
    rows.append(exact_row("Sp(4): proper admissible Levis", sorted(n2), ["GL(1) x Sp(2)", "GL(2)"]))
    ok = report(10, "Levi dichotomies and final classification, n <= 6", rows,
                f"[{elapsed:.2f} s]")
    assert ok and elapsed < 1, failing(rows)


def test_criterion_11_gl2_symmetry(report):
    rows = gl2_symmetry_rows(3) + gl2_symmetry_rows(5)
    ok = report(11, "chi(x_eta(a)) = chi(x_(1-eta)(a)) for p = 3, 5", rows)
    assert ok, failing(rows)
