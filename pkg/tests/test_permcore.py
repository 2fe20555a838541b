import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from fixerlab.permcore import (
    ActionView,
    Perm,
    PermGroup,
    TooLargeError,
    centralizer,
    conjugate_into,
    coset_action,
    is_conjugate,
    is_primitive,
    minimal_degree,
    normalizer,
    orbits,
    subgroup_lattice,
    subgroups_conjugate,
)


def perm_from_sympy(p, n):
    return Perm(p.array_form + list(range(len(p.array_form), n)))


def sym(n):
    return PermGroup(n, [Perm.from_cycles(n, [range(n)]), Perm.from_cycles(n, [(0, 1)])], name=f"S{n}")


def alt(n):
    return PermGroup(n, [Perm.from_cycles(n, [(i, i + 1, i + 2)]) for i in range(n - 2)], name=f"A{n}")


perms6 = st.permutations(list(range(6))).map(Perm)


@given(perms6, perms6, perms6)
def test_perm_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == Perm.identity(6)
    # left to right: (a*b)(i) = b(a(i))
    assert all((a * b)(i) == b(a(i)) for i in range(6))
    assert a.conj(b) == b.inverse() * a * b


@given(perms6)
def test_perm_order_and_cycles(a):
    assert a ** a.order() == Perm.identity(6)
    assert sum(a.cycle_type()) == 6


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_orders_and_class_counts_vs_sympy(n):
    for mine, ref in [(sym(n), SymmetricGroup(n)), (alt(n), AlternatingGroup(n))]:
        assert mine.order == ref.order()
        assert mine.classes.count == len(ref.conjugacy_classes())


def test_class_equation():
    for G in [sym(5), alt(6), PermGroup(8, [Perm.from_cycles(8, [range(8)]), Perm.from_cycles(8, [(1, 7), (2, 6), (3, 5)])])]:
        ct = G.classes
        assert int(ct.sizes.sum()) == G.order
        assert all(G.order % int(s) == 0 for s in ct.sizes)


def test_declared_order_mismatch():
    with pytest.raises(ValueError):
        PermGroup(5, sym(5).gens, order=119).enumerate()


def test_enumeration_bound():
    with pytest.raises(TooLargeError):
        PermGroup(9, sym(9).gens).enumerate(bound=1000)


def test_random_group_vs_sympy():
    rng = np.random.default_rng(7)
    for _ in range(6):
        gens = [rng.permutation(7).tolist() for _ in range(2)]
        mine = PermGroup(7, [Perm(g) for g in gens])
        ref = PermutationGroup([Permutation(g) for g in gens])
        assert mine.order == ref.order()


def test_conjugacy_witness():
    G = sym(5)
    x = Perm.from_cycles(5, [(0, 1, 2)])
    y = Perm.from_cycles(5, [(2, 4, 3)])
    ok, g = is_conjugate(G, x, y)
    assert ok and x.conj(g) == y
    ok, _ = is_conjugate(G, x, Perm.from_cycles(5, [(0, 1)]))
    assert not ok


def test_normalizer_centralizer():
    G = sym(5)
    c5 = G.subgroup_from_perms([Perm.from_cycles(5, [range(5)])])
    assert normalizer(G, c5).order == 20
    assert centralizer(G, Perm.from_cycles(5, [(0, 1)])).order == 12


def test_coset_action_and_primitivity():
    G = alt(5)
    H = G.subgroup_from_perms([Perm.from_cycles(5, [(0, 1, 2)]), Perm.from_cycles(5, [(0, 1), (3, 4)])])
    assert H.order == 6
    act = coset_action(G, H)
    assert act.group.degree == 10
    assert act.group.enumerate().order == 60
    assert is_primitive(act.group.degree, act.group.gens)
    D = G.subgroup_from_perms([Perm.from_cycles(5, [(0, 1), (2, 3)])])
    act2 = coset_action(G, D)
    assert not is_primitive(act2.group.degree, act2.group.gens)


def test_subgroup_lattice_counts():
    # numbers of conjugacy classes of subgroups: S4 11, A5 9, S5 19
    assert len(subgroup_lattice(sym(4))) == 11
    assert len(subgroup_lattice(alt(5))) == 9
    assert len(subgroup_lattice(sym(5))) == 19


def test_subgroup_lattice_restricted_family():
    G = alt(5)
    allowed = G.element_orders != 5
    fam = subgroup_lattice(G, allowed)
    assert all(c.order % 5 for c in fam)
    tops = sorted(c.order for c in fam if c.maximal)
    assert tops == [6, 12]


def test_conjugate_into():
    G = sym(4)
    V = G.subgroup_from_perms([Perm.from_cycles(4, [(0, 1), (2, 3)]), Perm.from_cycles(4, [(0, 2), (1, 3)])])
    D8 = G.subgroup_from_perms([Perm.from_cycles(4, [(0, 1, 2, 3)]), Perm.from_cycles(4, [(0, 2)])])
    g = conjugate_into(G, V, D8)
    assert g is not None
    assert subgroups_conjugate(G, D8, D8.conjugate(5)) is not None


def test_orbits_and_minimal_degree():
    assert orbits(6, [Perm.from_cycles(6, [(0, 1)]), Perm.from_cycles(6, [(2, 3, 4)])]) == [[0, 1], [2, 3, 4], [5]]
    assert minimal_degree(ActionView.natural(sym(5))) == 2
    assert minimal_degree(ActionView.natural(alt(5))) == 3


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([sym(4), alt(5), sym(5)]), st.data())
def test_coset_fixed_points_match_class_formula(G, data):
    k = data.draw(st.integers(1, G.order - 1))
    H = G.subgroup([k])
    act = coset_action(G, H)
    view = ActionView.on_cosets(G, H)
    for i in range(0, G.order, 7):
        img = act.image_of(i)
        assert int((img == np.arange(img.shape[0])).sum()) == int(view.fix[i])
