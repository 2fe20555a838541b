"""Large fixers for every primitive action of every G with socle PSL_2(q).

``survey_group`` walks the core-free maximal subgroups H of G and, for each,
lists the maximal non-stable fixers of order at least |H| (exhaustively, or
among a targeted candidate list), the best fixer order and the exact
integers behind the rho bound.  Results can be compared with the shipped
expectation file ``psl2_large_fixers.json``.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .ffield import data_path
from .fixers import Classification, fixer_classes, iso_label, targeted_fixers
from .permcore import Subgroup
from .psl2 import (
    ConditionError,
    FAMILIES,
    PSL2Setting,
    all_outer_subgroups,
    build_group,
    fixer_family,
    maximal_subgroups,
    normal_maximal_subgroups,
    polyhedral_subgroups,
)

EXPECTATION_FILE = "psl2_large_fixers.json"
SCOPES = ("exhaustive", "targeted")


@dataclass
class PairReport:
    q: int
    group: str
    order: int
    h_class: int
    h_type: str
    h_order: int
    q0: int | None
    scope: str
    large: list[tuple[str, int]] = field(default_factory=list)  # (label of L n G0, |L|)
    fixer_classes: int = 0
    best_order: int = 0
    expected: list[str] | None = None

    @property
    def labels(self) -> list[str]:
        return sorted({lab for lab, _ in self.large})

    @property
    def rho_lhs(self) -> int:
        return 2 * self.best_order**2

    @property
    def rho_rhs(self) -> int:
        return self.order * self.h_order

    @property
    def rho_bound(self) -> bool:
        """2 |K_best|^2 < |G| |H|."""
        return self.rho_lhs < self.rho_rhs

    @property
    def matches(self) -> bool | None:
        return None if self.expected is None else self.labels == sorted(self.expected)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["large"] = [list(x) for x in self.large]
        d.update(labels=self.labels, rho_lhs=self.rho_lhs, rho_rhs=self.rho_rhs, rho_bound=self.rho_bound, matches=self.matches)
        return d


def targeted_candidates(S: PSL2Setting, maximals=None) -> list[Subgroup]:
    """Maximal subgroups, polyhedral subgroups of the socle and the Borel fixer families."""
    maximals = maximal_subgroups(S) if maximals is None else maximals
    cands = [m.sub for m in maximals]
    for n in (12, 24, 60):
        cands += polyhedral_subgroups(S, n)
    q0s = [S.p ** (S.f // r) for r in range(2, S.f + 1) if S.f % r == 0]
    for which in FAMILIES:
        for q0 in [None] + q0s:
            try:
                cands.append(fixer_family(S, which, q0).in_group())
            except ConditionError:
                continue
    return cands


def _labels(S: PSL2Setting, c: Classification) -> list[tuple[str, int]]:
    G = S.group
    out = []
    for L in c.maximal_large:
        L0 = Subgroup(G, L.sub.idx[S.socle.mask[L.sub.idx]])
        out.append((iso_label(G, L0), L.order))
    return sorted(out)


def survey_group(S: PSL2Setting, scope: str = "exhaustive") -> list[PairReport]:
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}")
    G = S.group
    maximals = maximal_subgroups(S)
    if scope == "exhaustive":
        containers = [m.sub for m in maximals] + normal_maximal_subgroups(S)
    else:
        cands = targeted_candidates(S, maximals)
    out = []
    for k, m in enumerate(maximals):
        H = m.sub
        if scope == "exhaustive":
            c = fixer_classes(G, H, containers)
        else:
            c = targeted_fixers(G, H, cands + [H])
        q0 = int(m.note.split("=")[1]) if m.note.startswith("q0=") else None
        out.append(
            PairReport(
                q=S.q,
                group=S.name,
                order=G.order,
                h_class=k,
                h_type=m.type,
                h_order=H.order,
                q0=q0,
                scope=scope,
                large=_labels(S, c),
                fixer_classes=len(c.fixers),
                best_order=max(c.best.order, H.order),
            )
        )
    return out


def load_expectations(path=None) -> dict[tuple[str, int], dict]:
    path = data_path(EXPECTATION_FILE) if path is None else path
    rows = json.loads(open(path).read())
    return {(r["group"], r["class"]): r for r in rows}


def attach_expectations(reports: list[PairReport], table: dict | None = None) -> list[PairReport]:
    table = load_expectations() if table is None else table
    for r in reports:
        row = table.get((r.group, r.h_class))
        if row is None:
            continue
        if row["H_type"] != r.h_type or row["H_order"] != r.h_order:
            raise ValueError(f"expectation file out of step at {r.group} class {r.h_class}")
        r.expected = list(row["expected"])
    return reports


def survey(qs, outer: str | None = None, scope: str = "exhaustive", threads: int = 1) -> list[PairReport]:
    """Reports for every G (or the one given by ``outer``) over each q, in a fixed order."""
    specs = []
    for q in qs:
        if outer is None:
            specs += all_outer_subgroups(q)
        else:
            specs.append(build_group(q, outer, enumerate=False).spec)

    def run(spec):
        return survey_group(build_group(spec), scope)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            chunks = list(ex.map(run, specs))
    else:
        chunks = [run(s) for s in specs]
    return attach_expectations([r for ch in chunks for r in ch])
