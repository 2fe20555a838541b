import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixerlab.ffield import get_field
from fixerlab.gammagrp import gamma_mul
from fixerlab.permcore import coset_action, is_primitive
from fixerlab.psl2 import (
    ConditionError,
    GroupSpec,
    SemilinearElem,
    all_outer_subgroups,
    borel,
    build_group,
    fixer_family,
    from_perm,
    maximal_subgroups,
    parse_outer,
    rho_inverse,
    rho_iso,
    split_torus_normalizer,
)


def semilinear(q):
    c = get_field(q)
    mats = st.tuples(*[st.integers(0, q - 1)] * 4).filter(lambda m: c.sub(c.mul(m[0], m[3]), c.mul(m[1], m[2])) != 0)
    return st.builds(lambda m, i: SemilinearElem(c, m, i), mats, st.integers(0, c.f - 1))


@settings(max_examples=60)
@given(semilinear(9), semilinear(9))
def test_product_is_composition_on_the_line(x, y):
    assert (x * y).perm() == x.perm() * y.perm()
    assert (x * x.inverse()).is_identity()
    assert from_perm(x.ctx, x.images()) == x


@settings(max_examples=60)
@given(st.integers(0, 15), st.integers(1, 15), st.integers(0, 3), st.integers(0, 15), st.integers(1, 15), st.integers(0, 3))
def test_rho_is_a_homomorphism(a, l, i, b, m, j):
    c = get_field(16)
    x = SemilinearElem(c, (l, c.mul(l, a), 0, 1), i)
    y = SemilinearElem(c, (m, c.mul(m, b), 0, 1), j)
    assert rho_iso(x * y) == gamma_mul(rho_iso(x), rho_iso(y))
    assert rho_inverse(rho_iso(x)) == x


@pytest.mark.parametrize("q, count", [(4, 2), (5, 2), (8, 2), (9, 5), (16, 3), (25, 5), (27, 4), (64, 4)])
def test_number_of_almost_simple_groups(q, count):
    # one G per subgroup of Out(PSL_2(q)) = C_(2,q-1) x C_f
    assert len(all_outer_subgroups(q)) == count


@pytest.mark.parametrize(
    "q, outer, order",
    [(7, "", 168), (7, "delta", 336), (8, "phi", 1512), (9, "delta,phi", 1440), (16, "phi^2", 8160), (25, "delta*phi", 15600)],
)
def test_orders(q, outer, order):
    S = build_group(q, outer)
    assert S.order == order and S.group.order == order


def test_names():
    assert build_group(9, "delta").name == "PGL2(9)"
    assert build_group(9, "phi").name == "PSigmaL2(9)"
    assert build_group(9, "delta,phi").name == "PGammaL2(9)"
    assert build_group(8, "phi").name == "PGammaL2(8)"
    assert GroupSpec.parse(25, "delta*phi").name == "PSL2(25).<delta*phi>"


def test_parse_outer():
    assert parse_outer("phi^2,delta", 27) == [(0, 2), (1, 0)]
    with pytest.raises(ValueError):
        parse_outer("psi", 27)


# class counts of maximal subgroups not containing the socle, from the known lists
@pytest.mark.parametrize("q, count", [(4, 3), (5, 3), (7, 3), (8, 3), (9, 5), (11, 4), (13, 4)])
def test_maximal_subgroup_counts(q, count):
    S = build_group(q)
    maxs = maximal_subgroups(S)
    assert len(maxs) == count
    for m in maxs:
        act = coset_action(S.group, m.sub)
        assert is_primitive(act.group.degree, act.group.gens)


def test_borel_and_torus():
    S = build_group(8)
    assert borel(S).order == 56
    assert split_torus_normalizer(S).order == 14


def test_family_conditions():
    S = build_group(64, enumerate=False)
    assert fixer_family(S, "L_I", 4).order > 0
    with pytest.raises(ConditionError):
        fixer_family(S, "L_II", 8)
    with pytest.raises(ConditionError):
        fixer_family(build_group(27, enumerate=False), "case_a")
