from fractions import Fraction

import pytest

from fixerlab.fixers import derangement_set
from fixerlab.permchar import (
    ClassFunction,
    TableMismatchError,
    coset_character,
    equal_cases,
    inner_product,
    orbit_count,
    ordered_pair_orbit_count,
    pair_orbit_count,
    pair_view,
    perm_character,
    spiga_certificate,
    spiga_instances,
    trivial_character,
)
from fixerlab.permcore import ActionView, Perm, PermGroup, coset_action
from fixerlab.psl2 import build_group, maximal_subgroups


def a5():
    return PermGroup(5, [Perm.from_cycles(5, [(0, 1, 2, 3, 4)]), Perm.from_cycles(5, [(0, 1, 2)])]).enumerate()


def test_a5_natural_character():
    G = a5()
    pi = perm_character(ActionView.natural(G))
    by_order = sorted((int(G.classes.orders[c]), int(v)) for c, v in enumerate(pi.values))
    assert by_order == [(1, 5), (2, 1), (3, 2), (5, 0), (5, 0)]
    assert inner_product(pi, pi) == 2
    assert inner_product(pi, trivial_character(G)) == 1


def test_regular_character():
    G = a5()
    pi = coset_character(G, G.subgroup([]))
    assert pi.degree == 60
    assert sorted(pi.values) == [0, 0, 0, 0, 60]


def test_coset_formula_matches_realised_action():
    S = build_group(11)
    G = S.group
    for m in maximal_subgroups(S):
        act = coset_action(G, m.sub)
        direct = [int((act.image_of(int(r)) == range(act.group.degree)).sum()) for r in G.classes.reps]
        assert coset_character(G, m.sub).as_ints() == direct


@pytest.mark.parametrize("q", [7, 8, 9, 11, 16])
def test_burnside(q):
    S = build_group(q)
    G = S.group
    nat = perm_character(ActionView.natural(G))
    one = trivial_character(G)
    assert inner_product(nat, one) == orbit_count(G.degree, G.gens) == 1
    # <pi, pi> = 2 exactly for a 2-transitive action
    assert (inner_product(nat, nat) == 2) == (ordered_pair_orbit_count(G) == 1)
    pairs = perm_character(pair_view(G))
    assert inner_product(pairs, one) == pair_orbit_count(G)
    for m in maximal_subgroups(S):
        pO = coset_character(G, m.sub)
        assert inner_product(pO, nat) == orbit_count(G.degree, m.sub.perms())


def test_values_are_exact():
    G = a5()
    half = ClassFunction(G, tuple(Fraction(1, 2) for _ in range(G.classes.count)))
    assert inner_product(half, half) == Fraction(1, 4)
    assert not half.is_nonnegative_integral()
    other = a5()
    with pytest.raises(TableMismatchError):
        inner_product(half, trivial_character(other))


@pytest.mark.parametrize("q", [4, 8, 16, 32])
def test_even_q_certificate(q):
    (inst,) = [i for i in spiga_instances(q) if i.case == "a"]
    c = spiga_certificate(inst.G, inst.H, inst.K)
    assert c.verdict == "character-difference"
    assert c.triple == (2, 2, 1)
    # the 2-subsets of the line realise [G:H]
    assert perm_character(pair_view(inst.G)) == coset_character(inst.G, inst.H)


@pytest.mark.parametrize("q, cases", [(7, ["b"]), (11, ["c"]), (17, ["b"]), (19, ["c"]), (31, ["b", "c"]), (49, ["d"]), (9, []), (13, [])])
def test_equal_case_families(q, cases):
    assert equal_cases(q) == cases


@pytest.mark.parametrize("q", [7, 11, 19])
def test_equal_cases_certify(q):
    for inst in spiga_instances(q):
        assert spiga_certificate(inst.G, inst.H, inst.K).verdict == "equal"


def test_h_equals_k():
    S = build_group(8)
    H = maximal_subgroups(S)[0].sub
    assert spiga_certificate(S.group, H, H).verdict == "equal"


def test_fail_carries_a_witness_class():
    S = build_group(11)
    G = S.group
    maxs = maximal_subgroups(S)
    H, K = maxs[0].sub, maxs[1].sub
    assert derangement_set(G, H) != derangement_set(G, K)
    c = spiga_certificate(G, H, K)
    assert c.verdict == "fail" and c.witness_class is not None
    assert (c.witness_class in derangement_set(G, H)) != (c.witness_class in derangement_set(G, K))
