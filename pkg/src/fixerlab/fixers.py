"""Fixers, derangement sets, the rho invariants and the large-fixer classifier.

Throughout, G is an enumerated PermGroup and H, K are Subgroup handles of G;
H is the point stabiliser of the coset action on [G:H].  K is a fixer when
every element of K fixes some coset, equivalently every G-class meeting K
meets H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .permcore import (
    ActionView,
    PermGroup,
    Subgroup,
    coset_action,
    conjugate_into,
    is_transitive,
    prime_set,
    subgroup_lattice,
    subgroups_conjugate,
)


class ScopeError(ValueError):
    """Neither the exhaustive nor the targeted path applies."""


# ------------------------------------------------------------ verdicts

@dataclass
class FixerVerdict:
    is_fixer: bool
    witness: int | None = None  # element index of K meeting no class of H
    witness_class: int | None = None
    is_stable: bool = False
    conjugator: int | None = None  # g with K^g <= H
    order_K: int = 0
    order_H: int = 0

    @property
    def is_large(self) -> bool:
        return self.is_fixer and not self.is_stable and self.order_K >= self.order_H

    @property
    def is_strictly_large(self) -> bool:
        return self.is_large and self.order_K > self.order_H


@dataclass(frozen=True)
class DerangementSet:
    """Class ids of G whose elements fix no point of [G:H]."""

    classes: frozenset[int]
    class_count: int

    def __contains__(self, cid: int) -> bool:
        return cid in self.classes

    def size(self, G: PermGroup) -> int:
        sizes = G.classes.sizes
        return int(sum(int(sizes[c]) for c in self.classes))


def class_mask(G: PermGroup, S: Subgroup) -> np.ndarray:
    """Boolean over class ids: does the class meet S."""
    m = np.zeros(G.classes.count, dtype=bool)
    m[np.unique(G.classes.class_of[S.idx])] = True
    return m


def fixed_element_mask(G: PermGroup, H: Subgroup) -> np.ndarray:
    """Boolean over elements of G: union of the conjugates of H."""
    return class_mask(G, H)[G.classes.class_of]


def derangement_set(G: PermGroup, H: Subgroup) -> DerangementSet:
    meet = class_mask(G, H)
    return DerangementSet(frozenset(int(c) for c in np.flatnonzero(~meet)), len(meet))


def derangement_containment(G: PermGroup, H: Subgroup, K: Subgroup) -> bool:
    """D(G,H) inside D(G,K)."""
    return derangement_set(G, H).classes <= derangement_set(G, K).classes


def is_fixer(G: PermGroup, H: Subgroup, K: Subgroup, stability: bool = True) -> FixerVerdict:
    cls = G.classes.class_of
    meet = class_mask(G, H)
    bad = ~meet[cls[K.idx]]
    v = FixerVerdict(is_fixer=not bad.any(), order_K=K.order, order_H=H.order)
    if not v.is_fixer:
        w = int(K.idx[np.flatnonzero(bad)[0]])
        v.witness, v.witness_class = w, int(cls[w])
        return v
    if stability:
        g = conjugate_into(G, K, H)
        v.is_stable = g is not None
        v.conjugator = g
    return v


def fixes_on_cosets(G: PermGroup, H: Subgroup, K: Subgroup) -> bool:
    """Elementwise definition on the realised action: every k fixes some coset Hg."""
    act = coset_action(G, H, bound=max(20_000, G.order // H.order))
    for k in K.idx:
        img = act.image_of(int(k))
        if not (img == np.arange(img.shape[0])).any():
            return False
    return True


# ------------------------------------------------------------ prefilter

@dataclass
class Prefilter:
    passed: bool
    reasons: list[str] = field(default_factory=list)


def _spectrum(G: PermGroup, S: Subgroup) -> set[int]:
    return set(np.unique(G.element_orders[S.idx]).tolist())


def prefilter(G: PermGroup, H: Subgroup, K: Subgroup, aux: ActionView | None = None) -> Prefilter:
    """Cheap necessary conditions for K to be a fixer; every rejection is sound.

    Checks element orders, prime divisors, transitivity of K on the cosets
    (via |K||H| / |K n H| = |G|) and, given an auxiliary action of G, the
    fixed-point ratios and minimal degrees.
    """
    reasons = []
    sK, sH = _spectrum(G, K), _spectrum(G, H)
    if not sK <= sH:
        reasons.append(f"spectrum: orders {sorted(sK - sH)} occur in K but not in H")
    if not prime_set(K.order) <= prime_set(H.order):
        reasons.append(f"primes: {sorted(prime_set(K.order) - prime_set(H.order))} divide |K| only")
    inter = int((H.mask[K.idx]).sum())
    if K.order * H.order // inter == G.order:
        reasons.append("factorisation: KH = G, so K is transitive on the cosets")
    if aux is not None:
        fix = aux.fix
        fK = set(np.unique(fix[K.idx]).tolist())
        fH = set(np.unique(fix[H.idx]).tolist())
        if not fK <= fH:
            reasons.append(f"fixed point ratio: K has fixed-point counts {sorted(fK - fH)} absent from H")
        movK = aux.point_count - max((int(fix[i]) for i in K.idx if i != 0), default=0)
        movH = aux.point_count - max((int(fix[i]) for i in H.idx if i != 0), default=0)
        if K.order > 1 and H.order > 1 and movK < movH:
            reasons.append(f"minimal degree: {movK} < {movH}")
    return Prefilter(not reasons, reasons)


def socle_size_bound(order_K: int, order_H: int, socle_part_H: int) -> Fraction:
    """Lower bound |K| |H n G0| / |H| for |K n G0| in a primitive group."""
    return Fraction(order_K * socle_part_H, order_H)


# ------------------------------------------------------------ rho values

@dataclass
class RhoResult:
    best_order: int
    order_G: int
    order_H: int
    achieved_by: str
    candidates: int = 0

    @property
    def degree(self) -> int:
        return self.order_G // self.order_H

    @property
    def lhs(self) -> int:
        """2 |K|^2."""
        return 2 * self.best_order**2

    @property
    def rhs(self) -> int:
        """|G| |H| = |H|^2 |Omega|."""
        return self.order_G * self.order_H

    @property
    def bound_verdict(self) -> bool:
        """rho < 1/sqrt(2), decided on integers."""
        return self.lhs < self.rhs

    @property
    def squared(self) -> Fraction:
        return Fraction(self.best_order**2, self.order_H**2 * self.degree)

    def compare(self, ratio: Fraction) -> int:
        """Sign of rho^2 - ratio, exact."""
        a = self.best_order**2 * ratio.denominator
        b = ratio.numerator * self.order_H**2 * self.degree
        return (a > b) - (a < b)

    @property
    def display(self) -> float:
        return self.best_order / (self.order_H * math.sqrt(self.degree))


# ------------------------------------------------------ classification

@dataclass(eq=False)
class FixerClass:
    sub: Subgroup
    stable: bool
    maximal: bool = False  # no fixer properly contains a conjugate
    label: str = ""

    @property
    def order(self) -> int:
        return self.sub.order


@dataclass
class Classification:
    order_G: int
    order_H: int
    fixers: list[FixerClass]  # every fixer class found, up to G-conjugacy
    complete: bool

    @property
    def large(self) -> list[FixerClass]:
        return [c for c in self.fixers if not c.stable and c.order >= self.order_H]

    @property
    def maximal_large(self) -> list[FixerClass]:
        return [c for c in self.large if c.maximal]

    @property
    def best(self) -> FixerClass:
        return max(self.fixers, key=lambda c: (c.order, not c.stable))


def _hist(G: PermGroup, S: Subgroup) -> tuple[int, ...]:
    return tuple(np.bincount(G.classes.class_of[S.idx], minlength=G.classes.count).tolist())


def _dedupe(G: PermGroup, subs: list[Subgroup]) -> list[Subgroup]:
    out: list[Subgroup] = []
    keys: dict[tuple, list[int]] = {}
    for S in subs:
        key = (S.order, _hist(G, S))
        if any(subgroups_conjugate(G, S, out[j]) is not None for j in keys.get(key, [])):
            continue
        keys.setdefault(key, []).append(len(out))
        out.append(S)
    return out


def _fixers_in(G: PermGroup, M: Subgroup, allowed: np.ndarray) -> tuple[list[Subgroup], list[Subgroup]]:
    """All fixer classes inside M (up to M-conjugacy), and the maximal ones, as G-subgroups."""
    Mg = M.as_group()
    to_G = G.index(Mg.elements)
    lat = subgroup_lattice(Mg, allowed[to_G], bound=max(Mg.order, 1))
    subs, tops = [], []
    for c in lat:
        S = Subgroup(G, np.sort(to_G[c.rep.idx]), tuple(int(to_G[i]) for i in c.rep.small_gens()))
        subs.append(S)
        if c.maximal:
            tops.append(S)
    return subs, tops


def fixer_classes(G: PermGroup, H: Subgroup, containers: list[Subgroup] | None = None) -> Classification:
    """Every fixer of G on [G:H] up to conjugacy.

    Without ``containers`` the subgroup lattice of G is searched inside the
    union of conjugates of H.  With ``containers`` (representatives of all
    classes of maximal subgroups of G) the search runs inside each of them,
    which is complete because G itself is never a fixer of a transitive
    action with more than one point.
    """
    allowed = fixed_element_mask(G, H)
    if containers is None:
        lat = subgroup_lattice(G, allowed, bound=G.order)
        subs = [c.rep for c in lat]
        tops = [c.rep for c in lat if c.maximal]
    else:
        subs, tops = [], []
        for M in containers:
            s, t = _fixers_in(G, M, allowed)
            subs += s
            tops += t
        subs = _dedupe(G, subs)
        tops = _dedupe(G, tops)
    # maximal fixers: family-maximal tops that sit in no other top
    top_max = [
        T
        for T in tops
        if not any(U.order > T.order and conjugate_into(G, T, U) is not None for U in tops)
    ]
    out = []
    for S in subs:
        stable = conjugate_into(G, S, H) is not None
        maximal = any(S.order == T.order and subgroups_conjugate(G, S, T) is not None for T in top_max)
        out.append(FixerClass(S, stable, maximal))
    out.sort(key=lambda c: (c.order, _hist(G, c.sub)))
    return Classification(G.order, H.order, out, complete=True)


def classify_large_fixers(
    G: PermGroup,
    H: Subgroup,
    containers: list[Subgroup] | None = None,
    candidates: list[Subgroup] | None = None,
) -> list[FixerClass]:
    """Non-stable fixers K with |K| >= |H|, one per conjugacy class.

    Exhaustive when ``candidates`` is None (see fixer_classes); otherwise
    only the given candidates and nothing else are tested, and ``maximal``
    is relative to that list.
    """
    if candidates is None:
        return fixer_classes(G, H, containers).large
    return targeted_fixers(G, H, candidates).large


def targeted_fixers(G: PermGroup, H: Subgroup, candidates: list[Subgroup]) -> Classification:
    if not candidates:
        raise ScopeError("empty candidate list")
    allowed_cls = class_mask(G, H)
    fx = [S for S in _dedupe(G, candidates) if allowed_cls[G.classes.class_of[S.idx]].all()]
    out = []
    for S in fx:
        stable = conjugate_into(G, S, H) is not None
        maximal = not any(U.order > S.order and conjugate_into(G, S, U) is not None for U in fx)
        out.append(FixerClass(S, stable, maximal))
    return Classification(G.order, H.order, out, complete=False)


def rho0(G: PermGroup, H: Subgroup, classification: Classification | None = None, **kw) -> RhoResult:
    c = classification if classification is not None else fixer_classes(G, H, **kw)
    if not c.fixers:
        raise ScopeError("no fixers in scope")
    best = c.best
    return RhoResult(best.order, G.order, H.order, best.label or f"order {best.order}", len(c.fixers))


def rho1(G: PermGroup, H: Subgroup, maximals: list[Subgroup]) -> RhoResult:
    """Best |K| over maximal subgroups K that are fixers (H itself always counts)."""
    meet = class_mask(G, H)
    best, name = H.order, "H"
    for k, M in enumerate(maximals):
        if M.order > best and meet[G.classes.class_of[M.idx]].all():
            best, name = M.order, f"maximal #{k}"
    return RhoResult(best, G.order, H.order, name, len(maximals))


def ekr_predicates(c: Classification) -> dict[str, bool]:
    """weak-EKR: no fixer beats |H|; strict-weak-EKR: no large fixer at all."""
    return {
        "weak_EKR": not any(f.order > c.order_H for f in c.fixers),
        "strict_weak_EKR": not c.large,
    }


def transitive_on_cosets(G: PermGroup, H: Subgroup, K: Subgroup) -> bool:
    """Direct check of K's transitivity on [G:H] (for cross-checking the prefilter)."""
    act = coset_action(G, H, bound=max(20_000, G.order // H.order))
    return is_transitive(act.group.degree, [act.image_of(int(k)) for k in K.small_gens()])


# ------------------------------------------------------ isomorphism labels

def iso_label(G: PermGroup, S: Subgroup) -> str:
    """A short structural label for small groups occurring as L n G0.

    Recognises A4, S4, A5 and S3 by order and element orders, cyclic and
    dihedral groups, and groups C_p^a : C_m with a normal elementary
    abelian Sylow p-subgroup and cyclic complement.
    """
    n = S.order
    orders = G.element_orders[S.idx]
    spec = set(np.unique(orders).tolist())
    if n == 1:
        return "1"
    if int(orders.max()) == n:
        return f"C{n}"
    if n == 12 and spec == {1, 2, 3}:
        return "A4"
    if n == 24 and spec == {1, 2, 3, 4}:
        return "S4"
    if n == 60 and spec == {1, 2, 3, 5}:
        return "A5"
    if n == 6:
        return "S3"
    half = n // 2
    if n % 2 == 0 and int((orders == half).sum()) >= 2 and int((orders == 2).sum()) >= half:
        return f"D{n}"
    for p in sorted(prime_set(n)):
        a = 0
        m = n
        while m % p == 0:
            m //= p
            a += 1
        psub = S.idx[orders == p]
        # normal elementary abelian Sylow: exactly p^a - 1 elements of order p
        if psub.shape[0] == p**a - 1:
            P = G.subgroup([0] + psub.tolist())
            if P.order != p**a:
                continue
            if m == 1:
                return f"C{p}^{a}"
            if int((orders == m).sum()) > 0 and all(int(o) % p for o in orders[orders == m]):
                return f"C{p}^{a}:C{m}"
    return f"[{n}]"
