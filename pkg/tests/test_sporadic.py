import pytest

from fixerlab.groupio import registry_lookup, subgroup_lookup
from fixerlab.sporadic import CONTROL_ROWS, TABLE_ROWS, check_row, parse_row

FAST = [r for r in TABLE_ROWS + CONTROL_ROWS if r.group in ("M11", "M12")]
SLOW = [r for r in TABLE_ROWS + CONTROL_ROWS if r.group in ("M22", "J1")]


def _check(row):
    res = check_row(row)
    assert res.routes_agree, "class route and coset route disagree"
    return res


@pytest.mark.parametrize("row", [r for r in FAST if r.group == "M11"], ids=lambda r: r.spec)
def test_m11_rows(row):
    assert _check(row).verdict == row.expected


def test_m12_psl211_in_m11_is_refuted_by_both_routes():
    # an element of order 4 in M11 fixes no coset of this PSL2(11)
    res = _check(parse_row("M12:PSL2(11):M11"))
    assert res.verdict is False and res.witness_order == 4


def test_m12_control():
    assert _check(parse_row("M12:M10.2:M11")).verdict is False


@pytest.mark.slow
@pytest.mark.parametrize("row", SLOW, ids=lambda r: r.spec)
def test_m22_and_j1_rows(row):
    assert _check(row).verdict == row.expected


def test_shipped_subgroup_orders():
    G = registry_lookup("J1")
    assert G.order == 175560 and G.degree == 266
    assert subgroup_lookup(G, "J1", "7.6").order == 42


def test_parse_row():
    r = parse_row("M11:GL2(3):M9.2")
    assert r.expected is True and r.kind == "table"
    u = parse_row("M11:M10:GL2(3)")
    assert u.expected is None and u.kind == "user"
    with pytest.raises(ValueError):
        parse_row("M11:GL2(3)")
