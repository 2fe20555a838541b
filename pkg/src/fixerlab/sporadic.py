"""Derangement containment between maximal subgroups of small sporadic groups.

A row ``G:H:K`` asks whether every derangement of G on [G:H] is also a
derangement on [G:K].  Each row is decided twice: once from the conjugacy
classes of G and once elementwise on the realised coset action of G on
[G:H].  Subgroup names refer to the files shipped under
``data/groups/<G>/``.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from .fixers import derangement_containment, fixes_on_cosets, is_fixer
from .groupio import registry_lookup, subgroup_lookup


@dataclass(frozen=True)
class SporadicRow:
    group: str
    H: str
    K: str
    expected: bool
    kind: str = "table"  # "table" rows are claimed fixers, "control" rows are not

    @property
    def spec(self) -> str:
        return f"{self.group}:{self.H}:{self.K}"


TABLE_ROWS = (
    SporadicRow("M11", "GL2(3)", "M9.2", True),
    SporadicRow("M12", "PSL2(11)", "M11", True),
    SporadicRow("M22", "2^4.S5", "2^4.A6", True),
    SporadicRow("M22", "A7", "A7'", True),
    SporadicRow("M23", "PSigmaL3(4)", "2^4.A7", True),
    SporadicRow("M23", "2^4.A7", "PSigmaL3(4)", True),
    SporadicRow("J1", "D6xD10", "2xA5", True),
    SporadicRow("J1", "7.6", "2^3.7.3", True),
)

# one pair with |K| >= |H| per group of order at most 10^6, absent from the table
CONTROL_ROWS = (
    SporadicRow("M11", "PSL2(11)", "M10", False, "control"),
    SporadicRow("M12", "M10.2", "M11", False, "control"),
    SporadicRow("M22", "2^4.A6", "PSL3(4)", False, "control"),
    SporadicRow("J1", "2^3.7.3", "PSL2(11)", False, "control"),
)

ALL_ROWS = TABLE_ROWS + CONTROL_ROWS


def parse_row(spec: str) -> SporadicRow:
    """``G:H:K``; the expected verdict is looked up among the known rows."""
    parts = spec.split(":")
    if len(parts) != 3 or not all(parts):
        raise ValueError(f"row must look like G:H:K, got {spec!r}")
    for r in ALL_ROWS:
        if r.spec == spec:
            return r
    g, h, k = parts
    return SporadicRow(g, h, k, expected=None, kind="user")  # type: ignore[arg-type]


@dataclass
class RowResult:
    row: SporadicRow
    order_G: int
    order_H: int
    order_K: int
    by_classes: bool
    on_cosets: bool
    witness_order: int | None  # order of an element of K fixing no coset of H
    seconds: float

    @property
    def verdict(self) -> bool:
        return self.by_classes

    @property
    def routes_agree(self) -> bool:
        return self.by_classes == self.on_cosets

    @property
    def matches(self) -> bool | None:
        if self.row.expected is None:
            return None
        return self.routes_agree and self.verdict == self.row.expected

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        d.update(verdict=self.verdict, routes_agree=self.routes_agree, matches=self.matches)
        return d


def check_row(row: SporadicRow) -> RowResult:
    t0 = time.perf_counter()
    G = registry_lookup(row.group)
    H = subgroup_lookup(G, row.group, row.H)
    K = subgroup_lookup(G, row.group, row.K)
    by_classes = derangement_containment(G, H, K)
    on_cosets = fixes_on_cosets(G, H, K)
    witness = None
    if not by_classes:
        v = is_fixer(G, H, K, stability=False)
        witness = int(G.element_orders[v.witness])
    return RowResult(row, G.order, H.order, K.order, by_classes, on_cosets, witness, time.perf_counter() - t0)
