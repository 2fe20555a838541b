import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixerlab.ffield import get_field
from fixerlab.gammagrp import (
    GammaElem,
    HypothesisError,
    conj_l33,
    conj_shirt,
    gamma_classes,
    gamma_inv,
    gamma_order,
    oracle_check,
    reduce_to_torus,
    subfield_reduce,
)

Q = 16


def elems(q):
    c = get_field(q)
    return st.builds(
        lambda a, lam, i: GammaElem(c, a, lam, i),
        st.integers(0, q - 1),
        st.integers(1, q - 1),
        st.integers(0, c.f - 1),
    )


@given(elems(Q), elems(Q), elems(Q))
def test_product_matches_permutation_composition(x, y, z):
    assert (x * y).perm() == x.perm() * y.perm()
    assert (x * y) * z == x * (y * z)
    assert (x * gamma_inv(x)).is_identity()


@given(elems(Q))
def test_order_matches_permutation(x):
    assert gamma_order(x) == x.perm().order()


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_gamma_order(q):
    c = get_field(q)
    assert gamma_classes(q).group.order == q * (q - 1) * c.f


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_oracle_agrees(q):
    r = oracle_check(q)
    assert r.ok, r.mismatches[:5]
    assert sum(r.checked.values()) > 0


def test_shirt_is_a_trace_test():
    c = get_field(8)
    T = gamma_classes(8)
    for a in range(8):
        for b in range(8):
            x, y = GammaElem(c, a, 1, 1), GammaElem(c, b, 1, 1)
            assert conj_shirt(x, y) == (T.class_of(x) == T.class_of(y))


def test_l33_conjugator_verifies():
    c = get_field(16)
    x, y = GammaElem(c, 3, 1, 2), GammaElem(c, 5, 1, 2)
    for mode in ("i", "ii"):
        try:
            v = conj_l33(x, y, mode)
        except HypothesisError:
            continue
        assert x.conj(v.conjugator) == y


def test_subfield_reduce_lands_in_subfield():
    c = get_field(64)
    x = GammaElem(c, 11, 1, 1)
    target, g = subfield_reduce(x, 4)
    assert x.conj(g) == target
    assert c.frob(target.a, 2) == target.a
    # r = p = 2 dividing |phi| = 6 is outside the hypotheses
    with pytest.raises(HypothesisError):
        subfield_reduce(x, 8)


def test_reduce_to_torus_kills_translation():
    c = get_field(27)
    x = GammaElem(c, 5, c.gen, 1)
    target, g = reduce_to_torus(x)
    assert target.a == 0 and x.conj(g) == target
