"""Permutation characters, exact inner products and the rank-2 certificate.

Characters are stored per conjugacy class of an enumerated PermGroup, as
Fractions.  No irreducible characters are ever computed: the certificate
that pi_Omega - pi_Delta is a character rests on three inner products.

With pi_Delta 2-transitive, <pi_Delta, pi_Delta> = 2 gives pi_Delta = 1 + chi
with chi irreducible.  If also <pi_Omega, 1> = 1 and <pi_Omega, pi_Delta> = 2
then <pi_Omega, chi> = 1, so both constituents of pi_Delta occur in pi_Omega.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ffield import prime_power
from .fixers import derangement_set
from .permcore import ActionView, PermGroup, Subgroup, orbits
from .psl2 import SemilinearElem, _conj_outside, build_group, maximal_subgroup, polyhedral_subgroups


class TableMismatchError(ValueError):
    """Class functions on different groups."""


@dataclass(frozen=True)
class ClassFunction:
    group: PermGroup
    values: tuple[Fraction, ...]  # indexed by class id

    def _check(self, other: "ClassFunction") -> None:
        if other.group is not self.group:
            raise TableMismatchError("class functions live on different groups")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.group, tuple(a - b for a, b in zip(self.values, other.values)))

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassFunction) and other.group is self.group and other.values == self.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __getitem__(self, cid: int) -> Fraction:
        return self.values[cid]

    @property
    def degree(self) -> Fraction:
        ct = self.group.classes
        return self.values[int(np.flatnonzero(ct.orders == 1)[0])]

    def is_nonnegative_integral(self) -> bool:
        return all(v >= 0 and v.denominator == 1 for v in self.values)

    def as_ints(self) -> list[int]:
        if any(v.denominator != 1 for v in self.values):
            raise ValueError("class function is not integral")
        return [int(v) for v in self.values]


def trivial_character(G: PermGroup) -> ClassFunction:
    return ClassFunction(G, (Fraction(1),) * G.classes.count)


def perm_character(view: ActionView) -> ClassFunction:
    """Fixed-point counts of class representatives under a realised action."""
    G = view.group
    reps = G.classes.reps
    return ClassFunction(G, tuple(Fraction(int(view.fix[int(r)])) for r in reps))


def coset_character(G: PermGroup, H: Subgroup) -> ClassFunction:
    """1_H induced to G, i.e. the character of G on [G:H]."""
    return perm_character(ActionView.on_cosets(G, H))


def pair_view(G: PermGroup) -> ActionView:
    """G on unordered pairs of points: x fixes {a,b} iff it fixes both or swaps them."""
    X = G.elements
    n = G.degree
    fix = G.fixed_counts.astype(np.int64)
    pts = np.arange(n)
    sq = np.take_along_axis(X, X.astype(np.intp), axis=1)
    in_2cycles = (sq == pts).sum(axis=1) - fix
    return ActionView(G, n * (n - 1) // 2, fix * (fix - 1) // 2 + in_2cycles // 2)


def inner_product(chi: ClassFunction, psi: ClassFunction) -> Fraction:
    """(1/|G|) sum over classes of size * chi * psi; the values here are real."""
    chi._check(psi)
    G = chi.group
    sizes = G.classes.sizes
    total = sum((int(s) * a * b for s, a, b in zip(sizes, chi.values, psi.values)), Fraction(0))
    return total / G.order


# ------------------------------------------------------------ direct counts

def orbit_count(degree: int, gens) -> int:
    return len(orbits(degree, gens))


def pair_orbit_count(G: PermGroup) -> int:
    """Orbits of G on unordered pairs, by union-find on pair codes."""
    n = G.degree
    parent = list(range(n * n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in G.gens:
        im = g.images
        for a in range(n):
            for b in range(a + 1, n):
                x, y = int(im[a]), int(im[b])
                u, v = find(a * n + b), find(min(x, y) * n + max(x, y))
                if u != v:
                    parent[u] = v
    return len({find(a * n + b) for a in range(n) for b in range(a + 1, n)})


def ordered_pair_orbit_count(G: PermGroup) -> int:
    """Orbits on ordered pairs of distinct points; 1 exactly when 2-transitive."""
    n = G.degree
    gens = []
    for g in G.gens:
        im = g.images
        gens.append([int(im[k // n]) * n + int(im[k % n]) for k in range(n * n)])
    parent = list(range(n * n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for im in gens:
        for k in range(n * n):
            u, v = find(k), find(im[k])
            if u != v:
                parent[u] = v
    return len({find(a * n + b) for a in range(n) for b in range(n) if a != b})


# ------------------------------------------------------------ certificate

@dataclass
class SpigaCertificate:
    verdict: str  # "character-difference", "equal" or "fail"
    triple: tuple[int, int, int] | None = None  # <pD,pD>, <pO,pD>, <pO,1>
    witness_class: int | None = None
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "triple": list(self.triple) if self.triple else None,
            "witness_class": self.witness_class,
            "evidence": self.evidence,
        }


def _exact(x: Fraction) -> int | str:
    return int(x) if x.denominator == 1 else str(x)


def spiga_certificate(G: PermGroup, H: Subgroup, K: Subgroup) -> SpigaCertificate:
    """Check D(G,H) = D(G,K), then certify pi_Omega - pi_Delta is a character.

    Omega = [G:H], Delta = [G:K].  Verdict ``equal`` when the two
    permutation characters coincide, ``character-difference`` when the
    three inner products are (2, 2, 1), ``fail`` otherwise.
    """
    dH, dK = derangement_set(G, H), derangement_set(G, K)
    ev: dict = {"order_G": G.order, "order_H": H.order, "order_K": K.order}
    if dH.classes != dK.classes:
        diff = sorted(dH.classes ^ dK.classes)
        c = diff[0]
        ev["reason"] = "derangement sets differ"
        ev["witness_order"] = int(G.classes.orders[c])
        ev["derangement_of"] = "H" if c in dH else "K"
        return SpigaCertificate("fail", witness_class=c, evidence=ev)
    pO, pD = coset_character(G, H), coset_character(G, K)
    one = trivial_character(G)
    if pO == pD:
        ev["reason"] = "permutation characters coincide"
        return SpigaCertificate("equal", evidence=ev)
    triple = (inner_product(pD, pD), inner_product(pO, pD), inner_product(pO, one))
    ev["triple"] = [_exact(v) for v in triple]
    if triple == (2, 2, 1):
        ev["degree_difference"] = int(pO.degree - pD.degree)
        return SpigaCertificate("character-difference", tuple(int(v) for v in triple), evidence=ev)
    ev["reason"] = "inner products do not certify a character"
    ints = tuple(int(v) for v in triple) if all(v.denominator == 1 for v in triple) else None
    return SpigaCertificate("fail", ints, evidence=ev)


# ------------------------------------------------------------ instances

@dataclass
class SpigaInstance:
    q: int
    case: str  # "a" (torus normaliser vs P1) or "b", "c", "d" (H and its delta conjugate)
    G: PermGroup
    H: Subgroup
    K: Subgroup
    expected: str


def equal_cases(q: int) -> list[str]:
    """Which of the delta-conjugate families exist for the simple group PSL_2(q)."""
    p, f = prime_power(q)
    out = []
    if f == 1 and p % 8 in (1, 7):
        out.append("b")
    if f == 1 and p % 10 in (1, 9):
        out.append("c")
    if f == 2 and p != 3 and p % 10 in (3, 7):
        out.append("d")
    return out


def spiga_instances(q: int) -> list[SpigaInstance]:
    """The desk instances at G = PSL_2(q): case a for even q, cases b-d as they apply."""
    S = build_group(q)
    G = S.group
    out = []
    if q % 2 == 0:
        H = maximal_subgroup(S, "GL1(q)wrS2").in_group()
        K = maximal_subgroup(S, "P1").in_group()
        out.append(SpigaInstance(q, "a", G, H, K, "character-difference"))
    delta = SemilinearElem.delta(S.ctx)
    for case in equal_cases(q):
        H = polyhedral_subgroups(S, 24 if case == "b" else 60)[0]
        out.append(SpigaInstance(q, case, G, H, _conj_outside(S, H, delta), "equal"))
    return out
