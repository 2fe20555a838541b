import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixerlab.groupio import (
    GroupFile,
    GroupFileError,
    group_from_file,
    parse_group_file,
    registry_lookup,
    registry_names,
    report_json,
    serialize_group,
    subgroup_files,
    subgroup_lookup,
    text_table,
)
from fixerlab.permcore import Perm


def test_s3_from_images():
    gf = parse_group_file("degree 3\n2 1 3\n2 3 1")
    assert gf.degree == 3 and len(gf.gens) == 2
    assert group_from_file(gf).order == 6


def test_cycle_format_and_comments():
    text = "# a comment\ndegree 5\nname A5\norder 60\nformat cycles\n(1,2,3,4,5)\n(1, 2, 3)  # 3-cycle\n()\n"
    assert group_from_file(parse_group_file(text)).order == 60


perms = st.integers(2, 9).flatmap(lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3).map(lambda ps: (n, ps)))


@given(perms, st.sampled_from(["images", "cycles"]))
def test_round_trip(data, fmt):
    n, ps = data
    gf = GroupFile(n, [Perm(p) for p in ps], name="X", order=None, format=fmt)
    text = serialize_group(gf)
    back = parse_group_file(text)
    assert back.degree == n and back.format == fmt and back.name == "X"
    assert back.gens == gf.gens
    assert serialize_group(back) == text


@pytest.mark.parametrize(
    "text, line",
    [
        ("degree 3\n2 1 3\n2 2 1", 3),
        ("degree 3\n2 1 4", 2),
        ("degree 3\n1 2", 2),
        ("degree 3\nformat cycles\n(1,2)(2,3)", 3),
        ("degree 3\nformat cycles\n(1,5)", 3),
        ("degree 3\n1 x 2", 2),
        ("degree 3\ndegree 4\n1 2 3", 2),
        ("2 1 3", 1),
        ("degree 3\nformat words\n1 2 3", 2),
    ],
)
def test_malformed_lines_report_their_number(text, line):
    with pytest.raises(GroupFileError) as e:
        parse_group_file(text)
    assert e.value.line == line
    assert f"line {line}" in str(e.value)


def test_order_mismatch_is_an_error():
    with pytest.raises(GroupFileError, match="differs|exceeds"):
        group_from_file(parse_group_file("degree 3\norder 3\n2 1 3\n2 3 1"))
    with pytest.raises(GroupFileError, match="differs"):
        group_from_file(parse_group_file("degree 3\norder 12\n2 1 3\n2 3 1"))


@pytest.mark.parametrize("name, order", [("A5", 60), ("M11", 7920), ("M12", 95040)])
def test_registry(name, order):
    assert registry_lookup(name).order == order


def test_registry_unknown_name():
    assert {"M11", "M12", "M22", "M23", "J1", "A5"} <= set(registry_names())
    with pytest.raises(KeyError):
        registry_lookup("M99")


def test_m11_subgroups_check_out():
    G = registry_lookup("M11")
    files = subgroup_files("M11")
    assert set(files) == {"GL2(3)", "M9.2", "M10", "PSL2(11)"}
    for name, gf in files.items():
        assert subgroup_lookup(G, "M11", name).order == gf.order


def test_reports_are_deterministic():
    a = report_json({"b": 1, "a": [1, 2]})
    assert a == report_json({"a": [1, 2], "b": 1})
    t = text_table([{"x": 1, "y": "long value"}], ["x", "y"])
    assert t.splitlines()[0].split() == ["x", "y"]
