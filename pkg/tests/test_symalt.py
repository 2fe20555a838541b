import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixerlab.permcore import Perm, PermGroup
from fixerlab.symalt import (
    Explicit,
    Imprimitive,
    Intransitive,
    UndecidedError,
    _wreath_type_iter,
    cycle_type,
    descriptor_gens,
    imprim_order_bounds,
    in_intransitive,
    in_wreath,
    intransitive_cycle_types,
    is_even,
    maximal_subgroups,
    partitions,
    split_rule_check,
    split_tag,
    splits_in_alt,
    theorem_alt_scan,
    type_containment,
    wreath_cycle_types,
)


def brute_types(n, d):
    G = PermGroup(n, descriptor_gens(n, d)).enumerate()
    return {cycle_type(r) for r in G.elements}


WREATH_SHAPES = [(a, b) for a in range(1, 9) for b in range(1, 9) if a * b <= 8]


@pytest.mark.parametrize("a, b", WREATH_SHAPES)
def test_wreath_types_match_enumeration(a, b):
    n = a * b
    want = brute_types(n, Imprimitive(a, b)) if a > 1 and b > 1 else set(partitions(n))
    assert wreath_cycle_types(a, b) == want
    assert set(_wreath_type_iter(a, b)) == want
    assert {t for t in partitions(n) if in_wreath(t, a, b)} == want


def test_wreath_examples():
    assert wreath_cycle_types(2, 2) == {(1, 1, 1, 1), (2, 1, 1), (2, 2), (4,)}
    assert (5, 1) not in wreath_cycle_types(3, 2)
    assert wreath_cycle_types(5, 1) == set(partitions(5))


@pytest.mark.parametrize("k, n", [(1, 5), (2, 5), (2, 7), (3, 8)])
def test_intransitive_types(k, n):
    want = brute_types(n, Intransitive(k))
    assert intransitive_cycle_types(k, n) == want
    assert {t for t in partitions(n) if in_intransitive(t, k)} == want


@pytest.mark.parametrize("n", range(3, 10))
def test_split_rule(n):
    assert split_rule_check(n) == []


@given(st.permutations(list(range(7))), st.permutations(list(range(7))))
def test_split_tag_flips_under_odd_conjugation(x, g):
    x, g = Perm(x), Perm(g)
    t = cycle_type(x.images)
    if not (is_even(t) and splits_in_alt(t)):
        return
    sign = 1 if is_even(g.cycle_type()) else -1
    assert split_tag(x.conj(g).images) == sign * split_tag(x.images)


KNOWN_MAXIMAL_COUNTS = {(5, 0): 3, (5, 1): 3, (6, 0): 5, (6, 1): 5, (7, 0): 4, (7, 1): 5, (8, 0): 6, (8, 1): 6, (9, 0): 6, (9, 1): 8, (10, 0): 7, (10, 1): 8}


@pytest.mark.parametrize("n, alt", sorted(KNOWN_MAXIMAL_COUNTS))
def test_maximal_subgroup_counts(n, alt):
    assert len(maximal_subgroups(n, bool(alt))) == KNOWN_MAXIMAL_COUNTS[(n, alt)]


def test_spec_examples():
    v = type_containment(8, "S", Imprimitive(4, 2), Intransitive(1))
    assert not v.contained and v.witness == (7, 1)
    v = type_containment(30, "S", Intransitive(14), Imprimitive(15, 2))
    assert not v.contained and v.witness == (30,)
    assert type_containment(12, "A", Imprimitive(3, 4), Imprimitive(3, 4)).contained


def test_a5_pair():
    assert type_containment(5, "A", Intransitive(2), Intransitive(1)).contained


def test_explicit_escalation_is_capped():
    # a 15-cycle is a split type in A15, shared with S3 wr S5
    K = Explicit.of([Perm.from_cycles(15, [tuple(range(15))])], "C15")
    with pytest.raises(UndecidedError):
        type_containment(15, "A", Imprimitive(3, 5), K)
    assert type_containment(15, "S", Imprimitive(3, 5), K).contained


@pytest.mark.parametrize("n", [5, 6, 7])
def test_brute_scan_small(n):
    rep = theorem_alt_scan([n])
    assert rep.disagreements == []
    assert rep.hits == ([("A5", "S3", "A4")] if n == 5 else [])


@pytest.mark.parametrize("n", [11, 20, 25, 30, 36])
def test_type_scan_finds_nothing(n):
    rep = theorem_alt_scan([n], engine="types")
    assert rep.hits == []
    assert rep.rows


@pytest.mark.parametrize("n", range(25, 41))
def test_imprimitive_order_window(n):
    assert imprim_order_bounds(n).ok


def test_parity_and_splitting():
    assert is_even((3, 1, 1)) and not is_even((2, 1))
    assert splits_in_alt((5, 3, 1)) and not splits_in_alt((3, 3)) and not splits_in_alt((4, 2))
