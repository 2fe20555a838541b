"""The semilinear affine group AGammaL_1(q) as abstract triples.

An element (a, lam, i) stands for the map x -> (lam * (x + a))^(p^i) of
GF(q); products are taken left to right, so

    (a, lam)phi^i * (b, mu)phi^j = (a + lam^-1 b^(phi^-i), lam mu^(phi^-i)) phi^(i+j).

Besides the group law this module carries constructive versions of the
conjugacy facts used for fixer proofs: a trace criterion for elements
(a,1)phi, conjugators between (a,1)phi^i and (b,1)phi^i, reduction of the
translation part into a subfield, and conjugation into the torus
GF(q)^x : <phi>.  Every conjugator that is returned has been checked by
multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffield import (
    FFElem,
    FieldCtx,
    _trace_code,
    fixed_degree,
    get_field,
    hilbert90_additive,
    solve_semilinear,
)
from .permcore import ClassTable, Perm, PermGroup

GAMMA_BOUND = 1_000_000


class HypothesisError(ValueError):
    """A lemma was invoked outside its hypotheses."""


@dataclass(frozen=True)
class GammaElem:
    ctx: FieldCtx
    a: int
    lam: int
    i: int

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")
        object.__setattr__(self, "i", self.i % self.ctx.f)

    @classmethod
    def make(cls, a: FFElem | int, lam: FFElem | int, i: int = 0, ctx: FieldCtx | None = None) -> "GammaElem":
        if ctx is None:
            ctx = a.ctx if isinstance(a, FFElem) else lam.ctx
        return cls(ctx, int(a), int(lam), i)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "GammaElem":
        return cls(ctx, 0, 1, 0)

    @property
    def a_elem(self) -> FFElem:
        return FFElem(self.ctx, self.a)

    @property
    def lam_elem(self) -> FFElem:
        return FFElem(self.ctx, self.lam)

    def __mul__(self, y: "GammaElem") -> "GammaElem":
        return gamma_mul(self, y)

    def __pow__(self, k: int) -> "GammaElem":
        if k < 0:
            return gamma_inv(self) ** (-k)
        out, base = GammaElem.identity(self.ctx), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self, g: "GammaElem") -> "GammaElem":
        """g^-1 * self * g."""
        return gamma_inv(g) * self * g

    def is_identity(self) -> bool:
        return self.a == 0 and self.lam == 1 and self.i == 0

    def __call__(self, x: int) -> int:
        c = self.ctx
        return c.frob(c.mul(self.lam, c.add(x, self.a)), self.i)

    def perm(self) -> Perm:
        c = self.ctx
        xs = np.arange(c.q)
        return Perm(c.frob_arr(c.mul_arr(self.lam, c.add_arr(xs, self.a)), self.i))

    def __repr__(self) -> str:
        return f"({self.a_elem!r}, {self.lam_elem!r})phi^{self.i}"


def gamma_mul(x: GammaElem, y: GammaElem) -> GammaElem:
    c = x.ctx
    if y.ctx is not c:
        raise ValueError("elements over different fields")
    a = c.add(x.a, c.mul(c.inv(x.lam), c.frob(y.a, -x.i)))
    lam = c.mul(x.lam, c.frob(y.lam, -x.i))
    return GammaElem(c, a, lam, x.i + y.i)


def gamma_inv(x: GammaElem) -> GammaElem:
    c = x.ctx
    a = c.frob(c.neg(c.mul(x.lam, x.a)), x.i)
    lam = c.frob(c.inv(x.lam), x.i)
    return GammaElem(c, a, lam, -x.i)


def gamma_order(x: GammaElem) -> int:
    """Order of x: the Frobenius part contributes s = |phi^i|, then x^s is affine."""
    c = x.ctx
    s = c.f // math.gcd(x.i, c.f) if x.i else 1
    y = x**s
    if y.lam != 1:
        # multiplicative order of lam, times p if there is a translation part left
        m = (c.q - 1) // math.gcd(int(c.log[y.lam]), c.q - 1)
        return s * m if (y**m).is_identity() else s * m * c.p
    return s if y.a == 0 else s * c.p


def frob_order(ctx: FieldCtx, i: int) -> int:
    """s = |phi^i|."""
    return ctx.f // fixed_degree(ctx.f, i)


def _trace_down(ctx: FieldCtx, a: int, i: int) -> int:
    """Trace of a to the fixed field of phi^i."""
    return _trace_code(ctx, a, fixed_degree(ctx.f, i))


# ------------------------------------------------------- conjugacy lemmas

def conj_shirt(x: GammaElem, y: GammaElem) -> bool:
    """Trace criterion for (a,1)phi ~ (b,1)phi in Gamma."""
    for e in (x, y):
        if e.lam != 1 or e.i != 1 % e.ctx.f:
            raise HypothesisError("conj_shirt expects elements of the form (a,1)phi")
    c = x.ctx
    ta, tb = _trace_code(c, x.a, 1), _trace_code(c, y.a, 1)
    return (ta != 0 and tb != 0) or (ta == 0 and tb == 0)


@dataclass(frozen=True)
class ConjVerdict:
    conjugate: bool
    conjugator: GammaElem | None = None
    orders: tuple[int, int] | None = None


def _translate_conjugator(x: GammaElem, y: GammaElem) -> GammaElem:
    """(c,1) with ((a,1)phi^i)^(c,1) = (b,1)phi^i, assuming equal traces."""
    c = x.ctx
    # (-c + a + c^(phi^-i), 1)phi^i = (b,1)phi^i  <=>  c^(phi^-i) - c = b - a
    sol = hilbert90_additive(FFElem(c, c.sub(y.a, x.a)), x.i)
    return GammaElem(c, sol.code, 1, 0)


def conj_l33(x: GammaElem, y: GammaElem, mode: str) -> ConjVerdict:
    """The three cases comparing (a,1)phi^i and (b,1)phi^i through traces.

    mode "i": equal traces to the fixed field of phi^i; returns a
    translation (c,1) conjugating x to y.
    mode "ii": both traces nonzero; returns (0,lam)(c,1) with lam in the
    fixed field.
    mode "iii": exactly one trace zero; returns the two distinct orders.
    """
    c = x.ctx
    if x.lam != 1 or y.lam != 1 or x.i != y.i:
        raise HypothesisError("expected (a,1)phi^i and (b,1)phi^i with the same i")
    i = x.i
    ta, tb = _trace_down(c, x.a, i), _trace_down(c, y.a, i)
    if mode == "i":
        if ta != tb:
            raise HypothesisError("traces to the fixed field of phi^i differ")
        g = _translate_conjugator(x, y)
    elif mode == "ii":
        if ta == 0 or tb == 0:
            raise HypothesisError("both traces must be nonzero")
        lam = c.div(tb, ta)  # lies in the fixed field, so it commutes with phi^i
        scale = GammaElem(c, 0, lam, 0)
        mid = x.conj(scale)
        g = scale * _translate_conjugator(mid, y)
    elif mode == "iii":
        if (ta == 0) == (tb == 0):
            raise HypothesisError("exactly one of the traces must vanish")
        ox, oy = gamma_order(x), gamma_order(y)
        assert ox != oy
        return ConjVerdict(False, None, (ox, oy))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if x.conj(g) != y:  # pragma: no cover - guarded by the algebra above
        raise AssertionError("conjugator failed verification")
    return ConjVerdict(True, g)


def subfield_reduce(x: GammaElem, q0: int) -> tuple[GammaElem, GammaElem]:
    """Conjugate (a,1)phi^i to some (b,1)phi^i with b in GF(q0).

    Returns (target, conjugator).  Requires q = q0^r with r prime and
    either r not dividing s = |phi^i| or r != p.
    """
    c = x.ctx
    if x.lam != 1:
        raise HypothesisError("expected an element (a,1)phi^i")
    f0 = _subfield_degree(c, q0)
    r = c.f // f0
    if not _is_prime(r):
        raise HypothesisError(f"q is not a prime power of q0={q0}")
    s = frob_order(c, x.i)
    if r == c.p and s % r == 0:
        raise HypothesisError("r = p divides |phi^i|: no subfield reduction")
    if c.frob(x.a, f0) == x.a:
        return x, GammaElem.identity(c)
    ta = _trace_down(c, x.a, x.i)
    if ta == 0:
        target = GammaElem(c, 0, 1, x.i)
        g = _translate_conjugator(x, target)
    else:
        # least b in GF(q0) with nonzero trace to the fixed field of phi^i
        b = next(b for b in c.subfield_codes(f0) if _trace_down(c, b, x.i) != 0)
        target = GammaElem(c, b, 1, x.i)
        g = conj_l33(x, target, "ii").conjugator
    if x.conj(g) != target:  # pragma: no cover
        raise AssertionError("conjugator failed verification")
    return target, g


def reduce_to_torus(x: GammaElem, member=None) -> tuple[GammaElem, GammaElem]:
    """Conjugate x into GF(q)^x : <phi> by a translation.

    ``member`` is an optional predicate for the ambient subgroup X; when it
    is given, the hypotheses (translations and the p-part of <phi> lie in
    X, and x in X) are checked.  Returns (target, conjugator) with the
    conjugator a translation (c,1), hence in X.
    """
    c = x.ctx
    if member is not None:
        if not member(x):
            raise HypothesisError("x is not in X")
        sylow_gens = [GammaElem(c, c.p**j, 1, 0) for j in range(c.f)]
        fp = c.f
        while fp % c.p == 0:
            fp //= c.p
        sylow_gens.append(GammaElem(c, 0, 1, fp))  # generator of <phi>_p
        if not all(member(g) for g in sylow_gens):
            raise HypothesisError("X must contain F_q^+ : <phi>_p")
    if meets_translations(x):
        raise HypothesisError("<x> meets the translation subgroup nontrivially")
    if x.a == 0:
        return x, GammaElem.identity(c)
    # the translation part of x^(c,1) is -c + a + lam^-1 c^(phi^-i)
    sol = solve_semilinear(
        FFElem(c, c.neg(1)), FFElem(c, c.inv(x.lam)), -x.i, FFElem(c, c.neg(x.a))
    )
    if sol is None:  # pragma: no cover - excluded by the hypotheses
        raise AssertionError("no translation conjugates x into the torus")
    g = GammaElem(c, sol.code, 1, 0)
    target = x.conj(g)
    if target.a != 0:  # pragma: no cover
        raise AssertionError("conjugator failed verification")
    return target, g


def meets_translations(x: GammaElem) -> bool:
    """Whether <x> contains a nontrivial translation (a,1)."""
    # the translations form a normal p-subgroup, so it is enough to test the
    # unique subgroup of order p in <x>
    n = gamma_order(x)
    if n % x.ctx.p:
        return False
    y = x ** (n // x.ctx.p)
    return y.lam == 1 and y.i == 0


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def _subfield_degree(ctx: FieldCtx, q0: int) -> int:
    f0 = round(math.log(q0, ctx.p)) if q0 > 1 else 0
    if f0 < 1 or ctx.p**f0 != q0 or ctx.f % f0:
        raise HypothesisError(f"GF({q0}) is not a subfield of GF({ctx.q})")
    return f0


# ----------------------------------------------------------- brute force

@dataclass
class GammaTable:
    """All elements of Gamma with their conjugacy classes."""

    ctx: FieldCtx
    group: PermGroup
    classes: ClassTable

    def index(self, x: GammaElem) -> int:
        return self.group.index_of(x.perm())

    def class_of(self, x: GammaElem) -> int:
        return int(self.classes.class_of[self.index(x)])

    def elements(self):
        c = self.ctx
        for i in range(c.f):
            for lam in range(1, c.q):
                for a in range(c.q):
                    yield GammaElem(c, a, lam, i)


@lru_cache(maxsize=8)
def gamma_classes(q: int) -> GammaTable:
    """Conjugacy classes of Gamma(q) via its faithful action on GF(q)."""
    c = get_field(q)
    order = q * (q - 1) * c.f
    if order > GAMMA_BOUND:
        raise ValueError(f"|Gamma({q})| = {order} exceeds {GAMMA_BOUND}")
    gens = [GammaElem(c, 1, 1, 0), GammaElem(c, 0, c.gen, 0), GammaElem(c, 0, 1, 1)]
    G = PermGroup(q, [g.perm() for g in gens], name=f"AGammaL1({q})", order=order)
    G.enumerate()
    return GammaTable(c, G, G.classes)


# ------------------------------------------------------- oracle checks

@dataclass
class OracleReport:
    """Counts of lemma predictions compared with brute-force classes."""

    q: int
    checked: dict[str, int]
    mismatches: list[str]
    strata_classes: int = 0
    predicted_strata_classes: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.strata_classes == self.predicted_strata_classes


def _torus_member_p(ctx: FieldCtx):
    """Membership in F_q^+ : (F_q^x : <phi>_p), the smallest X allowed by reduce_to_torus."""
    fp = ctx.f
    while fp % ctx.p == 0:
        fp //= ctx.p
    return lambda x: x.i % fp == 0


def oracle_check(q: int, sample: int | None = None) -> OracleReport:
    """Compare every lemma with the class table of Gamma(q).

    Covers the trace criterion for (a,1)phi, the three trace cases for
    (a,1)phi^i, subfield reduction for every admissible q0, and reduction
    to the torus for every x with <x> n F_q^+ = 1 (with X = Gamma and with
    the smallest admissible X).  ``sample`` thins the pair loops for quick runs.
    """
    T = gamma_classes(q)
    c = T.ctx
    cls = lambda x: T.class_of(x)  # noqa: E731
    step = 1 if sample is None else max(1, q // sample)
    checked = {"shirt": 0, "l33": 0, "subfield": 0, "torus": 0}
    bad: list[str] = []

    if c.f > 1:
        for a in range(0, q, step):
            for b in range(q):
                x, y = GammaElem(c, a, 1, 1), GammaElem(c, b, 1, 1)
                checked["shirt"] += 1
                if conj_shirt(x, y) != (cls(x) == cls(y)):
                    bad.append(f"shirt a={a} b={b}")

    for i in range(1, c.f):
        for a in range(0, q, step):
            x = GammaElem(c, a, 1, i)
            for b in range(q):
                y = GammaElem(c, b, 1, i)
                ta, tb = _trace_down(c, a, i), _trace_down(c, b, i)
                same = cls(x) == cls(y)
                checked["l33"] += 1
                if ta == tb or (ta and tb):
                    v = conj_l33(x, y, "i" if ta == tb else "ii")
                    if not same or x.conj(v.conjugator) != y:
                        bad.append(f"l33 i={i} a={a} b={b}")
                else:
                    v = conj_l33(x, y, "iii")
                    if same or v.orders[0] == v.orders[1]:
                        bad.append(f"l33(iii) i={i} a={a} b={b}")

    for f0 in [d for d in range(1, c.f) if c.f % d == 0 and _is_prime(c.f // d)]:
        q0 = c.p**f0
        r = c.f // f0
        for i in range(c.f):
            s = frob_order(c, i)
            for a in range(0, q, step):
                x = GammaElem(c, a, 1, i)
                if r == c.p and s % r == 0:
                    try:
                        subfield_reduce(x, q0)
                        bad.append(f"subfield accepted r=p|s q0={q0} i={i}")
                    except HypothesisError:
                        pass
                    continue
                target, g = subfield_reduce(x, q0)
                checked["subfield"] += 1
                if c.frob(target.a, f0) != target.a or x.conj(g) != target or cls(x) != cls(target):
                    bad.append(f"subfield q0={q0} i={i} a={a}")

    small_X = _torus_member_p(c)
    for x in T.elements():
        if sample is not None and (x.a + x.lam) % step:
            continue
        members = [None] + ([small_X] if small_X(x) else [])
        for member in members:
            try:
                target, g = reduce_to_torus(x, member)
            except HypothesisError:
                continue
            checked["torus"] += 1
            if target.a != 0 or x.conj(g) != target or cls(x) != cls(target):
                bad.append(f"torus x={x}")
            if member is not None and not member(g):
                bad.append(f"torus conjugator outside X for x={x}")

    strata = {cls(GammaElem(c, a, 1, i)) for i in range(c.f) for a in range(q)}
    return OracleReport(q, checked, bad, len(strata), 2 * c.f)
