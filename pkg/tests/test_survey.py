import pytest

from fixerlab.psl2_survey import load_expectations, survey


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9])
def test_exhaustive_matches_fixture(q):
    rows = survey([q])
    assert rows and all(r.expected is not None for r in rows)
    bad = [(r.group, r.h_class, r.labels, r.expected) for r in rows if not r.matches]
    assert not bad


@pytest.mark.parametrize("q", [7, 8, 9, 11])
def test_targeted_agrees_with_exhaustive(q):
    ex = {(r.group, r.h_class): r.labels for r in survey([q])}
    tg = {(r.group, r.h_class): r.labels for r in survey([q], scope="targeted")}
    assert ex == tg


def test_rho_bound_is_exact_and_strict():
    for r in survey([8, 9]):
        assert r.rho_lhs < r.rho_rhs
        assert r.best_order >= r.h_order


def test_reports_do_not_depend_on_threads():
    one = [r.as_dict() for r in survey([5, 7, 8], threads=1)]
    two = [r.as_dict() for r in survey([5, 7, 8], threads=3)]
    assert one == two


def test_fixture_shape():
    table = load_expectations()
    qs = {row["q"] for row in table.values()}
    assert qs == {4, 5, 7, 8, 9, 11, 13, 16, 19, 23, 25, 27, 29, 31}
    assert all(isinstance(row["expected"], list) for row in table.values())


def test_single_group_by_outer():
    rows = survey([7], outer="delta")
    assert {r.group for r in rows} == {"PGL2(7)"}
