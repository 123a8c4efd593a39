import pytest

from sp4hecke.affine import GL2, SL2xGL1
from sp4hecke.suites import (
    Row, RunConfig, associativity_rows, exact_row, gauss_rows, levi_rows, numeric_row, run_suite,
)


def test_row_helpers():
    assert exact_row("a", 3, 3).passed
    assert not exact_row("a", 3, 4).passed
    r = numeric_row("b", 1 + 1e-9, 1, 1e-6)
    assert r.passed and r.abs_error < 1e-8
    assert Row("c", 1, 2, None, False).as_dict()["pass"] is False


@pytest.mark.parametrize("kwargs", [
    {"prime": 9}, {"case": "SL3"}, {"mu": "cubic"}, {"length_bound": 5}, {"tolerance": -1},
    {"multipliers": (1, 3)},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)


def test_gauss_suite_only_for_case1():
    assert gauss_rows(RunConfig(case=GL2)) == []
    assert all(r.passed for r in gauss_rows(RunConfig(mu="legendre", prime=7)))


def test_levi_rows_small():
    rows = levi_rows(2)
    assert len(rows) == 6 and all(r.passed for r in rows)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nonsense", RunConfig())


def test_associativity(case):
    rows = associativity_rows(RunConfig(case=case, mu="legendre"), points=6)
    assert rows[0].passed


def test_structure_suite_case1_p3():
    rows = run_suite("structure", RunConfig(case=SL2xGL1, mu="legendre"))
    assert all(r.passed for r in rows), [r.anchor for r in rows if not r.passed]
