"""Cycle types in S_n and A_n and derangement containment between maximal subgroups.

A subgroup X of S_n is described by a descriptor (``Intransitive(k)``,
``Imprimitive(a, b)`` or ``Explicit`` generators).  Inside G = A_n the
descriptor stands for X n A_n.  Since conjugacy in S_n is decided by cycle
type, D(G,H) is contained in D(G,K) exactly when every (G-class of) element
of K is met by H, which for G = S_n is a comparison of cycle-type sets.  In
A_n a type whose parts are odd and pairwise distinct splits into two
classes; the class of an element is tagged by the sign of a permutation
carrying a fixed representative onto it.

The brute-force side (``brute_containment``, ``theorem_alt_scan`` with
``engine="brute"``) enumerates G and goes through permcore class tables.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

import numpy as np

from .ffield import get_field
from .fixers import derangement_containment
from .permcore import Perm, PermGroup, Subgroup

CycleType = tuple[int, ...]
ESCALATION_MAX_N = 14
BRUTE_MAX_N = 12
TYPE_SCAN_MAX_N = 64  # partitions(n) is cached; n = 100 does not fit in memory


class UndecidedError(RuntimeError):
    """Shared split types with an explicit subgroup beyond the escalation range."""


# ------------------------------------------------------------ partitions

@lru_cache(maxsize=None)
def partitions(n: int, largest: int | None = None) -> tuple[CycleType, ...]:
    """Partitions of n in descending lexicographic order."""
    largest = n if largest is None else min(largest, n)
    if n == 0:
        return ((),)
    out = []
    for first in range(largest, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def is_even(t: CycleType) -> bool:
    return (sum(t) - len(t)) % 2 == 0


def splits_in_alt(t: CycleType) -> bool:
    """The S_n-class of type t is a union of two A_n-classes."""
    return sum(t) > 1 and all(x % 2 for x in t) and len(set(t)) == len(t)


def cycle_type(images) -> CycleType:
    images = list(images)
    seen = [False] * len(images)
    out = []
    for i in range(len(images)):
        if seen[i]:
            continue
        j, m = i, 0
        while not seen[j]:
            seen[j] = True
            j = images[j]
            m += 1
        out.append(m)
    return tuple(sorted(out, reverse=True))


def split_tag(images) -> int:
    """+1 or -1: which A_n-class of a split type the permutation lies in.

    The sign of sigma with sigma(i) listing the cycles longest first; any
    rotation of an odd cycle is even, so the sign does not depend on where
    a cycle is started.
    """
    images = list(images)
    seen = [False] * len(images)
    cycles = []
    for i in range(len(images)):
        if seen[i]:
            continue
        cyc, j = [], i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = images[j]
        cycles.append(cyc)
    cycles.sort(key=len, reverse=True)
    seq = [a for c in cycles for a in c]
    return _sign(seq)


def _sign(seq: list[int]) -> int:
    seen = [False] * len(seq)
    s = 1
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, m = i, 0
        while not seen[j]:
            seen[j] = True
            j = seq[j]
            m += 1
        if m % 2 == 0:
            s = -s
    return s


def _merge(a: CycleType, b: CycleType) -> CycleType:
    return tuple(sorted(a + b, reverse=True))


# ------------------------------------------------------------ realisable types

@lru_cache(maxsize=None)
def wreath_cycle_types(a: int, b: int) -> frozenset[CycleType]:
    """Cycle types of S_a wr S_b on ab points.

    A top cycle of length t whose block product has type mu contributes the
    parts t*mu; the set is built over top-cycle multisets by adding one top
    cycle at a time.
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    per_len = {t: {tuple(t * m for m in mu) for mu in partitions(a)} for t in range(1, b + 1)}

    @lru_cache(maxsize=None)
    def over(top: CycleType) -> frozenset[CycleType]:
        if not top:
            return frozenset({()})
        t, rest = top[0], top[1:]
        return frozenset(_merge(x, y) for x in over(rest) for y in per_len[t])

    out: set[CycleType] = set()
    for top in partitions(b):
        out |= over(top)
    return frozenset(out)


def intransitive_cycle_types(k: int, n: int) -> frozenset[CycleType]:
    """Cycle types of S_k x S_(n-k)."""
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    return frozenset(_merge(x, y) for x in partitions(k) for y in partitions(n - k))


def in_intransitive(t: CycleType, k: int) -> bool:
    """Some sub-multiset of the parts sums to k."""
    reach = 1
    for x in t:
        reach |= reach << x
    return bool(reach >> k & 1)


@lru_cache(maxsize=None)
def _wreath_ok(parts: CycleType, a: int, b: int) -> bool:
    if not parts:
        return b == 0
    P, rest = parts[0], parts[1:]
    for ell in range(1, min(P, b) + 1):
        if P % ell or P // ell > a:
            continue
        need = a - P // ell
        for chosen in _sub_multisets(rest, ell, need):
            left = list(rest)
            for c in chosen:
                left.remove(c)
            if _wreath_ok(tuple(left), a, b - ell):
                return True
    return False


def _sub_multisets(parts: CycleType, ell: int, need: int) -> Iterator[CycleType]:
    """Sub-multisets of parts, all divisible by ell, with sum(part / ell) = need."""
    vals = sorted({x for x in parts if x % ell == 0 and x // ell <= need}, reverse=True)
    counts = Counter(parts)

    def rec(i: int, need: int) -> Iterator[CycleType]:
        if need == 0:
            yield ()
            return
        if i == len(vals):
            return
        v = vals[i]
        for c in range(min(counts[v], need // (v // ell)), -1, -1):
            for tail in rec(i + 1, need - c * (v // ell)):
                yield (v,) * c + tail

    yield from rec(0, need)


def _wreath_type_iter(a: int, b: int) -> Iterator[CycleType]:
    """Lazy version of wreath_cycle_types (with repeats), long top cycles first."""
    for top in partitions(b):
        choices = [[tuple(t * m for m in mu) for mu in partitions(a)] for t in top]
        for pick in itertools.product(*choices):
            yield tuple(sorted((x for part in pick for x in part), reverse=True))


def in_wreath(t: CycleType, a: int, b: int) -> bool:
    return _wreath_ok(tuple(sorted(t, reverse=True)), a, b)


# ------------------------------------------------------------ descriptors

@dataclass(frozen=True)
class Intransitive:
    k: int

    def label(self, n: int, alt: bool = False) -> str:
        if alt:
            return {1: f"A{n - 1}", 2: f"S{n - 2}"}.get(self.k, f"(S{self.k}xS{n - self.k})nA{n}")
        return f"S{self.k}xS{n - self.k}" if self.k > 1 else f"S{n - 1}"


@dataclass(frozen=True)
class Imprimitive:
    a: int
    b: int

    def label(self, n: int, alt: bool = False) -> str:
        return f"(S{self.a}wrS{self.b})nA{n}" if alt else f"S{self.a}wrS{self.b}"


@dataclass(frozen=True)
class Explicit:
    gens: tuple[tuple[int, ...], ...]
    name: str = "X"

    @classmethod
    def of(cls, perms, name: str = "X") -> "Explicit":
        return cls(tuple(tuple(p.images) if isinstance(p, Perm) else tuple(p) for p in perms), name)

    def label(self, n: int, alt: bool = False) -> str:
        return self.name

    def group(self, n: int) -> PermGroup:
        return _explicit_group(self, n)


Descriptor = Union[Intransitive, Imprimitive, Explicit]


@lru_cache(maxsize=64)
def _explicit_group(desc: Explicit, n: int) -> PermGroup:
    if any(len(g) != n for g in desc.gens):
        raise ValueError(f"{desc.name}: generators are not of degree {n}")
    return PermGroup(n, [Perm(g) for g in desc.gens], name=desc.name).enumerate()


def validate(n: int, d: Descriptor) -> None:
    if isinstance(d, Intransitive):
        if not 1 <= d.k < n:
            raise ValueError(f"intransitive({d.k}) needs 1 <= k < {n}")
    elif isinstance(d, Imprimitive):
        if d.a * d.b != n or d.a < 2 or d.b < 2:
            raise ValueError(f"imprimitive({d.a},{d.b}) needs a, b >= 2 and ab = {n}")
    elif isinstance(d, Explicit):
        if any(len(g) != n for g in d.gens):
            raise ValueError(f"{d.name}: generators are not of degree {n}")
    else:
        raise TypeError(f"not a subgroup descriptor: {d!r}")


def _factorial(n: int) -> int:
    return math.factorial(n)


def order_in(n: int, d: Descriptor, alt: bool) -> int:
    """|X| or |X n A_n|."""
    if isinstance(d, Explicit):
        G = d.group(n)
        if not alt:
            return G.order
        return int(sum(1 for r in G.elements if is_even(cycle_type(r))))
    if isinstance(d, Intransitive):
        full = _factorial(d.k) * _factorial(n - d.k)
    else:
        full = _factorial(d.a) ** d.b * _factorial(d.b)
    return full // 2 if alt else full


def _explicit_classes(n: int, d: Explicit, alt: bool) -> dict[CycleType, set[int]]:
    """type -> set of split tags (0 for unsplit) over the elements of X (n A_n)."""
    G = d.group(n)
    out: dict[CycleType, set[int]] = {}
    for r in G.elements:
        t = cycle_type(r)
        if alt and not is_even(t):
            continue
        tag = split_tag(r) if alt and splits_in_alt(t) else 0
        out.setdefault(t, set()).add(tag)
    return out


def types_of(n: int, d: Descriptor, alt: bool = False) -> Iterator[CycleType]:
    """Realisable cycle types, long cycles first, each once."""
    validate(n, d)
    if isinstance(d, Explicit):
        src: Iterator[CycleType] = iter(sorted(_explicit_classes(n, d, alt), reverse=True))
    elif isinstance(d, Intransitive):
        src = (_merge(x, y) for x in partitions(d.k) for y in partitions(n - d.k))
    else:
        src = _wreath_type_iter(d.a, d.b)
    seen: set[CycleType] = set()
    for t in src:
        if t in seen or (alt and not is_even(t)):
            continue
        seen.add(t)
        yield t


def realisable(n: int, d: Descriptor, t: CycleType) -> bool:
    if isinstance(d, Intransitive):
        return in_intransitive(t, d.k)
    if isinstance(d, Imprimitive):
        return in_wreath(t, d.a, d.b)
    return t in _explicit_classes(n, d, alt=False)


@lru_cache(maxsize=256)
def minimal_degree_types(n: int, d: Descriptor, alt: bool) -> int:
    """Smallest support of a non-identity element, read off cycle types."""
    for s in range(2, n + 1):
        for mu in partitions(s):
            if 1 in mu:
                continue
            t = mu + (1,) * (n - s)
            if (not alt or is_even(t)) and realisable(n, d, t):
                return s
    return n


# ------------------------------------------------------------ containment

@dataclass
class TypeVerdict:
    contained: bool
    witness: CycleType | None = None
    witness_tag: int = 0
    reason: str = ""


def type_containment(n: int, group: str, H: Descriptor, K: Descriptor) -> TypeVerdict:
    """Type-level decision of D(G,H) in D(G,K), with the offending type when false."""
    alt = _is_alt(group)
    validate(n, H)
    validate(n, K)
    if H == K:
        return TypeVerdict(True, reason="H = K")
    Hx = _explicit_classes(n, H, alt) if isinstance(H, Explicit) else None
    Kx = _explicit_classes(n, K, alt) if isinstance(K, Explicit) else None
    for t in types_of(n, K, alt):
        inH = (t in Hx) if Hx is not None else realisable(n, H, t)
        if not inH:
            muK, muH = minimal_degree_types(n, K, alt), minimal_degree_types(n, H, alt)
            reason = f"minimal degree {muK} < {muH}" if muK < muH else "type absent from H"
            return TypeVerdict(False, t, reason=reason)
        if alt and splits_in_alt(t) and (Hx is not None or Kx is not None):
            # a descriptor subgroup of S_n contains a transposition, whose
            # conjugation swaps the two A_n-classes of a split type, so it
            # meets both; explicit subgroups need their elements inspected
            if n > ESCALATION_MAX_N:
                raise UndecidedError(f"split type {t} shared with an explicit subgroup at n = {n}")
            tagsK = Kx[t] if Kx is not None else {1, -1}
            tagsH = Hx[t] if Hx is not None else {1, -1}
            missing = tagsK - tagsH
            if missing:
                return TypeVerdict(False, t, min(missing), "split class absent from H")
    return TypeVerdict(True)


def sn_containment(n: int, group: str, H: Descriptor, K: Descriptor) -> bool:
    """D(G,H) inside D(G,K) for G = Sym(n) or Alt(n), decided on cycle types."""
    return type_containment(n, group, H, K).contained


def _is_alt(group: str) -> bool:
    g = group.strip().lower()
    if g in ("a", "alt", "an"):
        return True
    if g in ("s", "sym", "sn"):
        return False
    raise ValueError(f"group must be Sym or Alt, got {group!r}")


# ------------------------------------------------------------ explicit groups

def symmetric_gens(n: int) -> list[Perm]:
    return [Perm.from_cycles(n, [(0, 1)]), Perm.from_cycles(n, [tuple(range(n))])]


def alternating_gens(n: int) -> list[Perm]:
    # (0 1 2) and an (n-1)- or n-cycle, whichever is even
    if n < 3:
        return []
    long = tuple(range(1, n)) if n % 2 == 0 else tuple(range(n))
    return [Perm.from_cycles(n, [(0, 1, 2)]), Perm.from_cycles(n, [long])]


def descriptor_gens(n: int, d: Descriptor) -> list[Perm]:
    """Generators of X itself (always inside S_n)."""
    if isinstance(d, Explicit):
        return [Perm(g) for g in d.gens]
    if isinstance(d, Intransitive):
        out = []
        for lo, size in ((0, d.k), (d.k, n - d.k)):
            if size >= 2:
                out.append(Perm.from_cycles(n, [(lo, lo + 1)]))
                out.append(Perm.from_cycles(n, [tuple(range(lo, lo + size))]))
        return out
    a, b = d.a, d.b
    out = [Perm.from_cycles(n, [(0, 1)]), Perm.from_cycles(n, [tuple(range(a))])]
    out.append(Perm.from_cycles(n, [(i, a + i) for i in range(a)]))
    out.append(Perm.from_cycles(n, [tuple(j * a + i for j in range(b)) for i in range(a)]))
    return out


def _line_perm(q: int, fn) -> Perm:
    """A map of GF(q) u {inf} (inf stored as q)."""
    return Perm([fn(x) for x in range(q + 1)])


def _projective_gens(q: int, semilinear: bool, squares_only: bool = False) -> list[Perm]:
    F = get_field(q)
    inf = q
    g = F.pow(F.gen, 2) if squares_only else F.gen
    gens = [
        _line_perm(q, lambda x: inf if x == inf else F.add(x, 1)),
        _line_perm(q, lambda x: inf if x == inf else F.mul(g, x)),
        _line_perm(q, lambda x: 0 if x == inf else (inf if x == 0 else F.neg(F.inv(x)))),
    ]
    if semilinear and F.f > 1:
        gens.append(_line_perm(q, lambda x: inf if x == inf else F.frob(x)))
    return gens


def _affine_gens(p: int, d: int) -> list[Perm]:
    """AGL_d(p) on p^d points, vectors coded base p."""
    pts = list(itertools.product(range(p), repeat=d))
    code = {v: i for i, v in enumerate(pts)}

    def lin(M):
        return Perm([code[tuple(sum(M[r][c] * v[c] for c in range(d)) % p for r in range(d))] for v in pts])

    shift = Perm([code[((v[0] + 1) % p,) + v[1:]] for v in pts])
    if d == 1:
        return [shift, lin([[_primitive_root(p)]])]
    # a diagonal matrix, a transvection and a cyclic permutation matrix;
    # callers check the closure order
    diag = [[_primitive_root(p) if r == c == 0 else int(r == c) for c in range(d)] for r in range(d)]
    trans = [[int(r == c or (r == 0 and c == 1)) for c in range(d)] for r in range(d)]
    cyc = [[int(c == (r + 1) % d) for c in range(d)] for r in range(d)]
    return [shift, lin(diag), lin(trans), lin(cyc)]


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)):
            return g
    return 1


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _fano_gens() -> list[Perm]:
    """Collineations of the Fano plane with lines {i, i+1, i+3} mod 7."""
    lines = {frozenset({i % 7, (i + 1) % 7, (i + 3) % 7}) for i in range(7)}
    keep = []
    for p in itertools.permutations(range(7)):
        if all(frozenset(p[x] for x in L) in lines for L in lines):
            keep.append(Perm(p))
    G = PermGroup(7, keep).enumerate()
    return Subgroup(G, np.arange(G.order)).perms()


def _even_part(n: int, gens: list[Perm], name: str) -> Explicit:
    X = PermGroup(n, gens).enumerate()
    even = np.array([is_even(cycle_type(r)) for r in X.elements])
    sub = Subgroup(X, np.flatnonzero(even))
    return Explicit.of(sub.perms(), name)


def _conj_by_transposition(d: Explicit, n: int, name: str) -> Explicit:
    t = Perm.from_cycles(n, [(0, 1)])
    return Explicit.of([Perm(g).conj(t) for g in d.gens], name)


@dataclass(frozen=True)
class MaxSub:
    label: str
    desc: Descriptor
    kind: str  # intransitive | imprimitive | primitive
    order: int


@lru_cache(maxsize=None)
def _primitive_maximals(n: int, alt: bool) -> tuple[tuple[str, Explicit, int], ...]:
    """Primitive maximal subgroups (other than A_n) of S_n / A_n, 5 <= n <= 10."""
    if not 5 <= n <= 10:
        raise ValueError("explicit primitive data covers 5 <= n <= 10")
    out: list[tuple[str, Explicit, int]] = []
    if n == 5:
        agl = Explicit.of(_affine_gens(5, 1), "AGL1(5)")
        out.append(("D10", _even_part(5, list(map(Perm, agl.gens)), "D10"), 10) if alt else ("AGL1(5)", agl, 20))
    elif n == 6:
        out.append(("PSL2(5)", Explicit.of(_projective_gens(5, False, True), "PSL2(5)"), 60) if alt
                   else ("PGL2(5)", Explicit.of(_projective_gens(5, False), "PGL2(5)"), 120))
    elif n == 7:
        if alt:
            L = Explicit.of(_fano_gens(), "PSL2(7)")
            out += [("PSL2(7)", L, 168), ("PSL2(7)'", _conj_by_transposition(L, 7, "PSL2(7)'"), 168)]
        else:
            out.append(("AGL1(7)", Explicit.of(_affine_gens(7, 1), "AGL1(7)"), 42))
    elif n == 8:
        if alt:
            A = Explicit.of(_affine_gens(2, 3), "AGL3(2)")
            out += [("AGL3(2)", A, 1344), ("AGL3(2)'", _conj_by_transposition(A, 8, "AGL3(2)'"), 1344)]
        else:
            out.append(("PGL2(7)", Explicit.of(_projective_gens(7, False), "PGL2(7)"), 336))
    elif n == 9:
        if alt:
            P = Explicit.of(_projective_gens(8, True), "PGammaL2(8)")
            out += [("PGammaL2(8)", P, 1512), ("PGammaL2(8)'", _conj_by_transposition(P, 9, "PGammaL2(8)'"), 1512)]
            out.append(("ASL2(3)", _even_part(9, _affine_gens(3, 2), "ASL2(3)"), 216))
        else:
            out.append(("AGL2(3)", Explicit.of(_affine_gens(3, 2), "AGL2(3)"), 432))
    elif n == 10:
        pg = _projective_gens(9, True)
        if alt:
            M = _even_part(10, pg, "M10")
            out += [("M10", M, 720), ("M10'", _conj_by_transposition(M, 10, "M10'"), 720)]
        else:
            out.append(("PGammaL2(9)", Explicit.of(pg, "PGammaL2(9)"), 1440))
    for label, d, order in out:
        got = d.group(n).order
        if got != order:
            raise AssertionError(f"{label}: closure order {got}, expected {order}")
    return tuple(out)


def maximal_subgroups(n: int, alt: bool) -> list[MaxSub]:
    """Core-free maximal subgroups of S_n or A_n, one per conjugacy class.

    Intransitive S_k x S_(n-k) with k < n/2, imprimitive S_a wr S_b with
    a, b >= 2 (in A_8 the 2 wr 4 case lies in AGL_3(2) and is dropped), and
    for n <= 10 the explicit primitive ones.
    """
    out = []
    for k in range(1, (n + 1) // 2):
        if 2 * k == n:
            continue
        d = Intransitive(k)
        out.append(MaxSub(d.label(n, alt), d, "intransitive", order_in(n, d, alt)))
    for a in range(2, n):
        if n % a or n // a < 2:
            continue
        if alt and (a, n // a) == (2, 4):
            continue
        d = Imprimitive(a, n // a)
        out.append(MaxSub(d.label(n, alt), d, "imprimitive", order_in(n, d, alt)))
    if n <= 10:
        for label, d, order in _primitive_maximals(n, alt):
            out.append(MaxSub(label, d, "primitive", order))
    return out


# ------------------------------------------------------------ brute force

@lru_cache(maxsize=2)
def ambient(n: int, alt: bool) -> PermGroup:
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_MAX_N}")
    gens = alternating_gens(n) if alt else symmetric_gens(n)
    order = _factorial(n) // (2 if alt else 1)
    G = PermGroup(n, gens, name=("A" if alt else "S") + str(n), order=order)
    G.enumerate(order)
    return G


def subgroup_in(G: PermGroup, n: int, d: Descriptor, alt: bool) -> Subgroup:
    X = PermGroup(n, descriptor_gens(n, d)).enumerate()
    rows = X.elements
    if alt:
        even = np.array([is_even(cycle_type(r)) for r in rows])
        rows = rows[even]
    idx = G.index(rows)
    if (idx < 0).any():
        raise ValueError("subgroup rows not found in the ambient group")
    return Subgroup(G, np.sort(idx))


def brute_containment(n: int, alt: bool, H: Descriptor, K: Descriptor) -> bool:
    G = ambient(n, alt)
    return derangement_containment(G, subgroup_in(G, n, H, alt), subgroup_in(G, n, K, alt))


def order_profile(G: PermGroup, S: Subgroup) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Order and element-order histogram, used as an isomorphism invariant."""
    c = Counter(G.element_orders[S.idx].tolist())
    return S.order, tuple(sorted(c.items()))


def split_rule_check(n: int) -> list[CycleType]:
    """Even types where the A_n class count disagrees with the split rule (empty when all agree)."""
    G = ambient(n, True)
    ct = G.classes
    per_type: Counter = Counter(cycle_type(G.elements[r]) for r in ct.reps)
    bad = []
    for t in partitions(n):
        if not is_even(t):
            continue
        want = 2 if splits_in_alt(t) else 1
        if per_type[t] != want:
            bad.append(t)
    return bad


# ------------------------------------------------------------ scans

@dataclass
class ScanRow:
    group: str
    H: str
    K: str
    order_H: int
    order_K: int
    contained: bool
    isomorphic: bool


@dataclass
class ScanReport:
    n_values: list[int]
    engine: str
    hits: list[tuple[str, str, str]] = field(default_factory=list)
    isomorphic_hits: list[tuple[str, str, str]] = field(default_factory=list)
    rows: list[ScanRow] = field(default_factory=list)
    disagreements: list[tuple[str, str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def theorem_alt_scan(n_values, engine: str = "brute", check_types: bool = True) -> ScanReport:
    """Pairs (H intransitive or imprimitive, K maximal, |K| >= |H|) with D(G,H) in D(G,K).

    ``engine="brute"`` (n <= 12) decides every pair on enumerated G and, with
    ``check_types``, also runs the type-level engine on every pair of
    maximal subgroups and records any disagreement.  ``engine="types"``
    works at type level only, with K restricted to intransitive and
    imprimitive subgroups; primitive K are covered only where |H| >= 2^n
    (order bound for primitive groups of degree n >= 25).
    """
    rep = ScanReport(list(n_values), engine)
    for n in n_values:
        for alt in (False, True):
            gname = ("A" if alt else "S") + str(n)
            if engine == "brute":
                _scan_brute(n, alt, gname, rep, check_types)
            elif engine == "types":
                if n > TYPE_SCAN_MAX_N:
                    raise ValueError(f"type scan limited to n <= {TYPE_SCAN_MAX_N}")
                _scan_types(n, alt, gname, rep)
            else:
                raise ValueError(f"unknown engine {engine!r}")
    return rep


def _scan_brute(n: int, alt: bool, gname: str, rep: ScanReport, check_types: bool) -> None:
    G = ambient(n, alt)
    maxs = maximal_subgroups(n, alt)
    subs = {m.label: subgroup_in(G, n, m.desc, alt) for m in maxs}
    prof = {k: order_profile(G, s) for k, s in subs.items()}
    for mh in maxs:
        for mk in maxs:
            if mh.label == mk.label:
                continue
            brute = derangement_containment(G, subs[mh.label], subs[mk.label])
            if check_types and type_containment(n, gname[0], mh.desc, mk.desc).contained != brute:
                rep.disagreements.append((gname, mh.label, mk.label))
            if mh.kind == "primitive" or mk.order < mh.order:
                continue
            iso = prof[mh.label] == prof[mk.label]
            rep.rows.append(ScanRow(gname, mh.label, mk.label, mh.order, mk.order, brute, iso))
            if brute:
                (rep.isomorphic_hits if iso else rep.hits).append((gname, mh.label, mk.label))
    ambient.cache_clear()


def _scan_types(n: int, alt: bool, gname: str, rep: ScanReport) -> None:
    maxs = [m for m in maximal_subgroups(n, alt) if m.kind != "primitive"]
    for mh in maxs:
        if n >= 25 and mh.order < 2**n:
            rep.notes.append(f"{gname}: |{mh.label}| < 2^{n}, primitive K not screened")
        elif n < 25:
            rep.notes.append(f"{gname}: primitive K not covered below degree 25")
        for mk in maxs:
            if mh.label == mk.label or mk.order < mh.order:
                continue
            v = type_containment(n, gname[0], mh.desc, mk.desc)
            rep.rows.append(ScanRow(gname, mh.label, mk.label, mh.order, mk.order, v.contained, False))
            if v.contained:
                rep.hits.append((gname, mh.label, mk.label))
    rep.notes = sorted(set(rep.notes))


# ------------------------------------------------------------ order bounds

@dataclass
class ImprimBound:
    a: int
    b: int
    order: int  # |S_a wr S_b|
    lower_ok: bool  # 2^n <= |S_a wr S_b| / 2
    upper_ok: bool  # |S_a wr S_b| <= 2 (ceil(n/2)!)^2
    extremal: bool  # equality in the upper bound
    three_part_ok: bool | None  # b >= 3: |S_a wr S_b| <= 6 (ceil(n/3)!)^3


@dataclass
class ImprimBoundsReport:
    n: int
    rows: list[ImprimBound]

    @property
    def ok(self) -> bool:
        return all(
            r.lower_ok and r.upper_ok and (r.three_part_ok is not False) and (r.extremal == (r.b == 2))
            for r in self.rows
        )


def imprim_order_bounds(n: int) -> ImprimBoundsReport:
    """Exact integer check of the order window for imprimitive maximal subgroups."""
    up2 = 2 * _factorial(-(-n // 2)) ** 2
    up3 = 6 * _factorial(-(-n // 3)) ** 3
    rows = []
    for a in range(2, n):
        if n % a or n // a < 2:
            continue
        b = n // a
        order = _factorial(a) ** b * _factorial(b)
        rows.append(
            ImprimBound(a, b, order, 2**n * 2 <= order, order <= up2, order == up2, order <= up3 if b >= 3 else None)
        )
    return ImprimBoundsReport(n, rows)
