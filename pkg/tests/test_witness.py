import pytest

from fixerlab.fixers import is_fixer
from fixerlab.psl2 import ConditionError, build_group, fixer_family, maximal_subgroup, subfield_centralizer
from fixerlab.witness import certify_family, family_elements, target_for


@pytest.mark.parametrize("q, outer, which", [(16, "", "case_a"), (16, "", "case_c"), (32, "", "case_a"), (32, "phi", "case_a")])
def test_chains_replay(q, outer, which):
    c = certify_family(q, outer, which)
    assert c.ok, c.failures[:3]
    assert c.size == c.verified > 0


@pytest.mark.parametrize("outer, expect", [("", True), ("phi", False), ("phi^2", False)])
def test_certificate_agrees_with_enumeration(outer, expect):
    # the case_c family is a fixer on the subfield action only when |G:G0| is odd
    S = build_group(16, outer)
    K = fixer_family(S, "case_c").in_group()
    H = subfield_centralizer(S, 4)
    assert is_fixer(S.group, H, K, stability=False).is_fixer == expect
    assert certify_family(16, outer, "case_c").ok == expect


def test_family_elements_match_generated_family():
    S = build_group(64, "", enumerate=False)
    listed = {x.perm() for x in family_elements(S, "L_I", 4)}
    K = fixer_family(S, "L_I", 4).own
    assert len(listed) == K.order
    assert all(p in K for p in listed)


@pytest.mark.parametrize("outer", ["", "phi"])
def test_membership_tests_cut_out_the_right_subgroups(outer):
    S = build_group(16, outer)
    G = S.group
    for which, H in (("case_a", maximal_subgroup(S, "GL1(q)wrS2").in_group()), ("case_c", subfield_centralizer(S, 4))):
        test = target_for(S, which)
        members = [i for i in range(G.order) if test.member(S.elem(G.elements[i]))]
        assert sorted(members) == sorted(H.idx.tolist())


def test_odd_q_rejected():
    with pytest.raises(ConditionError):
        next(family_elements(build_group(27, enumerate=False), "case_a"))
