"""Groups between PSL_2(q) and PGammaL_2(q) on the projective line.

Points are column vectors up to scalars.  The point (x:1) has index x (the
field code of x) and the point at infinity (1:0) has index q.  A semilinear
element (A, i) sends v to A * v^(phi^i); products are left to right, so
(A, i) * (B, j) = (B * A^(phi^j), i + j), matching permcore.Perm.

With this convention the unipotent U(a) = [[1,a],[0,1]] is x -> x + a,
diag(l, m) is x -> l x / m, and N(Q) is the stabiliser of infinity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .ffield import FieldCtx, _trace_code, divisors, factor_int, get_field
from .gammagrp import GammaElem
from .permcore import (
    DEFAULT_BOUND,
    Perm,
    PermGroup,
    Subgroup,
    TooLargeError,
    closure_indices,
    coset_action,
    is_primitive,
    normalizer,
    subgroups_conjugate,
)

VIRTUAL_Q = 81  # beyond this G is handled element-wise only


class ConditionError(ValueError):
    """A construction was requested outside the conditions where it exists."""


# ------------------------------------------------------------- elements

@dataclass(frozen=True)
class ProjPoint:
    """A point (x : y) of the projective line, stored as (x, 1) or (1, 0)."""

    x: int
    y: int

    @classmethod
    def make(cls, ctx: FieldCtx, x: int, y: int) -> "ProjPoint":
        if x == 0 and y == 0:
            raise ValueError("(0:0) is not a projective point")
        if y == 0:
            return cls(1, 0)
        return cls(ctx.div(x, y), 1)

    @classmethod
    def from_index(cls, ctx: FieldCtx, k: int) -> "ProjPoint":
        return cls(*_point_vector(ctx, k))

    def index(self, ctx: FieldCtx) -> int:
        return ctx.q if self.y == 0 else self.x


class SemilinearElem:
    """A 2x2 matrix class modulo scalars together with a Frobenius exponent."""

    __slots__ = ("ctx", "m", "i")

    def __init__(self, ctx: FieldCtx, m, i: int = 0):
        a, b, c, d = (int(v) for v in m)
        if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) == 0:
            raise ValueError("singular matrix")
        lead = next(v for v in (a, b, c, d) if v)
        s = ctx.inv(lead)
        self.ctx = ctx
        self.m = (ctx.mul(a, s), ctx.mul(b, s), ctx.mul(c, s), ctx.mul(d, s))
        self.i = i % ctx.f

    # named elements ------------------------------------------------------
    @classmethod
    def identity(cls, ctx: FieldCtx) -> "SemilinearElem":
        return cls(ctx, (1, 0, 0, 1))

    @classmethod
    def unipotent(cls, ctx: FieldCtx, a: int) -> "SemilinearElem":
        return cls(ctx, (1, a, 0, 1))

    @classmethod
    def diagonal(cls, ctx: FieldCtx, lam: int, mu: int = 1) -> "SemilinearElem":
        return cls(ctx, (lam, 0, 0, mu))

    @classmethod
    def frobenius(cls, ctx: FieldCtx, i: int = 1) -> "SemilinearElem":
        return cls(ctx, (1, 0, 0, 1), i)

    @classmethod
    def swap(cls, ctx: FieldCtx) -> "SemilinearElem":
        """The involution z = [[0,1],[1,0]]."""
        return cls(ctx, (0, 1, 1, 0))

    @classmethod
    def delta(cls, ctx: FieldCtx) -> "SemilinearElem":
        return cls(ctx, (ctx.gen, 0, 0, 1))

    # algebra ---------------------------------------------------------------
    def _frob_matrix(self, j: int) -> tuple[int, ...]:
        return tuple(self.ctx.frob(v, j) for v in self.m)

    def __mul__(self, other: "SemilinearElem") -> "SemilinearElem":
        c = self.ctx
        a0, b0, c0, d0 = self._frob_matrix(other.i)
        a1, b1, c1, d1 = other.m
        m = (
            c.add(c.mul(a1, a0), c.mul(b1, c0)),
            c.add(c.mul(a1, b0), c.mul(b1, d0)),
            c.add(c.mul(c1, a0), c.mul(d1, c0)),
            c.add(c.mul(c1, b0), c.mul(d1, d0)),
        )
        return SemilinearElem(c, m, self.i + other.i)

    def inverse(self) -> "SemilinearElem":
        c = self.ctx
        a, b, cc, d = self._frob_matrix(-self.i)
        # adjugate is the inverse up to a scalar
        return SemilinearElem(c, (d, c.neg(b), c.neg(cc), a), -self.i)

    def __pow__(self, k: int) -> "SemilinearElem":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = SemilinearElem.identity(self.ctx), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self, g: "SemilinearElem") -> "SemilinearElem":
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return self.i == 0 and self.m == (1, 0, 0, 1)

    def det(self) -> int:
        a, b, c, d = self.m
        return self.ctx.sub(self.ctx.mul(a, d), self.ctx.mul(b, c))

    def outer_class(self) -> tuple[int, int]:
        """(d, e): the image delta^d phi^e in Out(PSL_2(q))."""
        c = self.ctx
        d = 0 if c.p == 2 else int(c.log[self.det()]) % 2
        return d, self.i

    def in_socle(self) -> bool:
        return self.outer_class() == (0, 0)

    def images(self) -> np.ndarray:
        c = self.ctx
        q = c.q
        a, b, cc, d = self.m
        xs = c.frob_arr(np.arange(q), self.i)
        num = c.add_arr(c.mul_arr(a, xs), b)
        den = c.add_arr(c.mul_arr(cc, xs), d)
        out = np.full(q + 1, q, dtype=np.int64)
        nz = den != 0
        out[:q][nz] = c.mul_arr(num[nz], c.inv_arr(den[nz]))
        out[q] = q if cc == 0 else c.div(a, cc)
        return out

    def perm(self) -> Perm:
        return Perm(self.images())

    def apply(self, pt: ProjPoint) -> ProjPoint:
        c = self.ctx
        x, y = c.frob(pt.x, self.i), c.frob(pt.y, self.i)
        a, b, cc, d = self.m
        return ProjPoint.make(c, c.add(c.mul(a, x), c.mul(b, y)), c.add(c.mul(cc, x), c.mul(d, y)))

    def __eq__(self, other) -> bool:
        return isinstance(other, SemilinearElem) and self.ctx is other.ctx and self.m == other.m and self.i == other.i

    def __hash__(self) -> int:
        return hash((self.m, self.i))

    def __repr__(self) -> str:
        a, b, c, d = (repr(self.ctx(v)) for v in self.m)
        tail = f" phi^{self.i}" if self.i else ""
        return f"[[{a}, {b}], [{c}, {d}]]{tail}"


def _point_vector(ctx: FieldCtx, pt: int) -> tuple[int, int]:
    return (1, 0) if pt == ctx.q else (pt, 1)


def from_perm(ctx: FieldCtx, images) -> SemilinearElem:
    """Recover (A, i) from the permutation of the projective line."""
    images = np.asarray(images)
    q = ctx.q
    u = _point_vector(ctx, int(images[q]))  # image of infinity = A e1
    v = _point_vector(ctx, int(images[0]))  # image of 0 = A e2
    w = _point_vector(ctx, int(images[1]))  # image of 1 = A (e1 + e2)
    # w = alpha u + beta v
    det = ctx.sub(ctx.mul(u[0], v[1]), ctx.mul(v[0], u[1]))
    if det == 0:
        raise ValueError("not a projective semilinear map")
    alpha = ctx.div(ctx.sub(ctx.mul(w[0], v[1]), ctx.mul(v[0], w[1])), det)
    beta = ctx.div(ctx.sub(ctx.mul(u[0], w[1]), ctx.mul(w[0], u[1])), det)
    m = (ctx.mul(alpha, u[0]), ctx.mul(beta, v[0]), ctx.mul(alpha, u[1]), ctx.mul(beta, v[1]))
    for i in range(ctx.f):
        x = SemilinearElem(ctx, m, i)
        if np.array_equal(x.images(), images):
            return x
    raise ValueError("permutation is not induced by PGammaL_2(q)")


# ------------------------------------------------------ group settings

def _out_closure(gens: list[tuple[int, int]], two: int, f: int) -> frozenset[tuple[int, int]]:
    elems = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = ((x[0] + g[0]) % two, (x[1] + g[1]) % f)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def parse_outer(text: str, q: int) -> list[tuple[int, int]]:
    """Parse generator words like "phi^2,delta" or "delta*phi" into (d, e) pairs."""
    p, f = _pf(q)
    words = [w.strip() for w in (text or "").split(",") if w.strip() and w.strip() != "1"]
    out = []
    for w in words:
        d = e = 0
        for tok in w.replace(" ", "").split("*"):
            mt = re.fullmatch(r"(delta|phi)(?:\^(-?\d+))?", tok)
            if not mt:
                raise ValueError(f"cannot parse outer word {w!r}")
            k = int(mt.group(2) or 1)
            if mt.group(1) == "delta":
                d += k
            else:
                e += k
        out.append((d % (2 if p != 2 else 1), e % f))
    return out


def _pf(q: int) -> tuple[int, int]:
    fac = factor_int(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, f), = fac.items()
    return p, f


@dataclass(frozen=True)
class GroupSpec:
    """PSL_2(q).O for a subgroup O of Out = <delta> x <phi>.

    ``outer`` lists generators of O as pairs (d, e) meaning delta^d phi^e.
    """

    q: int
    outer: tuple[tuple[int, int], ...] = ()

    @classmethod
    def parse(cls, q: int, text: str = "") -> "GroupSpec":
        return cls(q, tuple(parse_outer(text, q))).canonical()

    @property
    def p(self) -> int:
        return _pf(self.q)[0]

    @property
    def f(self) -> int:
        return _pf(self.q)[1]

    @property
    def two(self) -> int:
        return 1 if self.p == 2 else 2

    @cached_property
    def out_elements(self) -> frozenset[tuple[int, int]]:
        return _out_closure([(d % self.two, e % self.f) for d, e in self.outer], self.two, self.f)

    def canonical(self) -> "GroupSpec":
        """Same group, with a canonical generating list."""
        O = self.out_elements
        gens: list[tuple[int, int]] = []
        for x in sorted(O, key=lambda t: (t[1] == 0 and t[0] == 0, _word_len(t, self.f), t)):
            if x == (0, 0):
                continue
            if x not in _out_closure(gens, self.two, self.f):
                gens.append(x)
        return GroupSpec(self.q, tuple(gens))

    @property
    def out_order(self) -> int:
        return len(self.out_elements)

    @property
    def socle_order(self) -> int:
        q = self.q
        return q * (q * q - 1) // math.gcd(2, q - 1)

    @property
    def order(self) -> int:
        return self.socle_order * self.out_order

    @property
    def has_delta(self) -> bool:
        return any(d for d, _ in self.out_elements)

    @property
    def phi_part(self) -> int:
        """Size of the image of O in <phi>."""
        return len({e for _, e in self.out_elements})

    def outer_word(self, x: tuple[int, int]) -> str:
        d, e = x
        parts = (["delta"] if d else []) + ([f"phi^{e}" if e != 1 else "phi"] if e else [])
        return "*".join(parts) or "1"

    @property
    def name(self) -> str:
        q, O = self.q, self.out_elements
        if len(O) == 1:
            return f"PSL2({q})"
        full_phi = self.phi_part == self.f
        if self.p != 2 and O == frozenset((d, 0) for d in range(2)):
            return f"PGL2({q})"
        if len(O) == self.two * self.f and self.p != 2:
            return f"PGammaL2({q})"
        if self.p == 2 and full_phi:
            return f"PGammaL2({q})"
        if not self.has_delta and full_phi and len(O) == self.f:
            return f"PSigmaL2({q})"
        return f"PSL2({q}).<{','.join(self.outer_word(g) for g in self.outer)}>"

    def __str__(self) -> str:
        return self.name


def _word_len(x: tuple[int, int], f: int) -> tuple[int, int]:
    d, e = x
    return (d + (1 if e else 0), min(e, f - e) if e else 0)


def all_outer_subgroups(q: int) -> list[GroupSpec]:
    """Every G with socle PSL_2(q), one per subgroup O of Out."""
    p, f = _pf(q)
    two = 1 if p == 2 else 2
    elems = [(d, e) for d in range(two) for e in range(f)]
    seen: dict[frozenset, GroupSpec] = {}
    for a in elems:
        for b in elems:
            O = _out_closure([a, b], two, f)
            if O not in seen:
                seen[O] = GroupSpec(q, (a, b)).canonical()
    return sorted(seen.values(), key=lambda s: (s.out_order, sorted(s.out_elements)))


# ------------------------------------------------------------- settings

class PSL2Setting:
    """A concrete group G = PSL_2(q).O acting on q+1 points."""

    def __init__(self, spec: GroupSpec, bound: int | None = None):
        self.spec = spec.canonical()
        self.q, self.p, self.f = spec.q, spec.p, spec.f
        self.ctx = get_field(spec.q)
        self.degree = self.q + 1
        self.bound = DEFAULT_BOUND if bound is None else bound
        c = self.ctx
        nu = c.gen
        self.socle_gens = [
            SemilinearElem.unipotent(c, 1),
            SemilinearElem.diagonal(c, nu, c.inv(nu)),
            SemilinearElem(c, (0, 1, c.neg(1), 0)),
        ]
        self.outer_gens = [self.outer_lift(x) for x in self.spec.outer]
        self._group: PermGroup | None = None

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def order(self) -> int:
        return self.spec.order

    @property
    def is_virtual(self) -> bool:
        return self.q > VIRTUAL_Q or self.order > self.bound

    def outer_lift(self, x: tuple[int, int]) -> SemilinearElem:
        d, e = x
        return SemilinearElem(self.ctx, (self.ctx.pow(self.ctx.gen, d), 0, 0, 1), e)

    @property
    def gens(self) -> list[SemilinearElem]:
        return self.socle_gens + self.outer_gens

    def contains(self, x: SemilinearElem) -> bool:
        return x.outer_class() in self.spec.out_elements

    def perm(self, x: SemilinearElem) -> Perm:
        return x.perm()

    def elem(self, perm) -> SemilinearElem:
        imgs = perm.images if isinstance(perm, Perm) else perm
        return from_perm(self.ctx, imgs)

    @property
    def group(self) -> PermGroup:
        """The enumerated permutation group (raises if G is too large)."""
        if self._group is None:
            if self.order > self.bound:
                raise TooLargeError(f"{self.name} has order {self.order} > {self.bound}", self.order)
            G = PermGroup(self.degree, [x.perm() for x in self.gens], name=self.name, order=self.order)
            self._group = G.enumerate(self.bound)
        return self._group

    def subgroup(self, elems, name: str) -> "NamedSubgroup":
        return NamedSubgroup(self, name, list(elems))

    @cached_property
    def socle(self) -> Subgroup:
        G = self.group
        return G.subgroup([G.index_of(x.perm()) for x in self.socle_gens])

    def outer_of_index(self) -> np.ndarray:
        """For each element index of G, the position of its outer class in sorted(O)."""
        G = self.group
        X = G.elements
        S = self.socle
        labels = np.full(G.order, -1, dtype=np.int64)
        for k, o in enumerate(sorted(self.spec.out_elements)):
            row = np.array(self.outer_lift(o).images(), dtype=X.dtype)
            labels[G.index(row[X[S.idx]])] = k
        return labels

    def __repr__(self) -> str:
        return f"<PSL2Setting {self.name} order={self.order}>"


def build_group(spec: GroupSpec | int, outer: str = "", bound: int | None = None, enumerate: bool = True) -> PSL2Setting:
    if isinstance(spec, int):
        spec = GroupSpec.parse(spec, outer)
    S = PSL2Setting(spec, bound)
    if enumerate and not S.is_virtual:
        G = S.group
        assert S.socle.order == spec.socle_order
        assert G.order == spec.order
    return S


# ---------------------------------------------------------- subgroups

@dataclass(eq=False)
class NamedSubgroup:
    """A subgroup of G given by semilinear generators.

    It can be closed on its own (no need to enumerate G) or located inside
    the enumerated G.
    """

    setting: PSL2Setting
    name: str
    gens: list[SemilinearElem]
    _own: PermGroup | None = field(default=None, repr=False)
    _inside: Subgroup | None = field(default=None, repr=False)

    def perms(self) -> list[Perm]:
        return [g.perm() for g in self.gens]

    @property
    def own(self) -> PermGroup:
        if self._own is None:
            self._own = PermGroup(self.setting.degree, self.perms(), name=self.name).enumerate()
        return self._own

    @property
    def order(self) -> int:
        if self._inside is not None:
            return self._inside.order
        return self.own.order

    def in_group(self) -> Subgroup:
        if self._inside is None:
            G = self.setting.group
            self._inside = G.subgroup([G.index_of(p) for p in self.perms()])
        return self._inside

    def elements(self) -> list[SemilinearElem]:
        ctx = self.setting.ctx
        return [from_perm(ctx, row) for row in self.own.elements]

    def socle_part_order(self) -> int:
        return sum(1 for x in self.elements() if x.in_socle())

    @classmethod
    def from_subgroup(cls, setting: PSL2Setting, name: str, S: Subgroup) -> "NamedSubgroup":
        G = setting.group
        gens = [from_perm(setting.ctx, G.elements[i]) for i in S.small_gens()]
        return cls(setting, name, gens, _inside=S)

    def __repr__(self) -> str:
        return f"<{self.name} in {self.setting.name}>"


def _greedy_gens(elems: list[SemilinearElem]) -> list[SemilinearElem]:
    """A short generating list for the group formed by ``elems`` (assumed closed)."""
    target = {e.perm() for e in elems}
    gens: list[SemilinearElem] = []
    span = {Perm.identity(elems[0].ctx.q + 1)} if elems else set()
    for e in sorted(elems, key=lambda x: -x.perm().order()):
        if len(span) == len(target):
            break
        if e.perm() in span:
            continue
        gens.append(e)
        span = set(_close([g.perm() for g in gens]))
    return gens


def _close(perms: list[Perm]) -> list[Perm]:
    if not perms:
        return []
    seen = {Perm.identity(perms[0].degree)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in perms:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return list(seen)


def subgroup_Q(S: PSL2Setting) -> NamedSubgroup:
    """Upper unitriangular matrices, elementary abelian of order q."""
    c = S.ctx
    return S.subgroup([SemilinearElem.unipotent(c, c.p**j) for j in range(c.f)], "Q")


def subgroup_D(S: PSL2Setting) -> NamedSubgroup:
    """All diagonal matrices modulo scalars, cyclic of order q-1 (in PGL_2(q))."""
    c = S.ctx
    return S.subgroup([SemilinearElem.diagonal(c, c.gen)], "D")


def _in_G(S: PSL2Setting, elems) -> list[SemilinearElem]:
    return [x for x in elems if S.contains(x)]


def torus_normalizer_in_borel(S: PSL2Setting, lam_codes=None, frob=None) -> list[SemilinearElem]:
    """Elements diag(lam,1) phi^i of G with lam from ``lam_codes`` and i from ``frob``."""
    c = S.ctx
    lam_codes = range(1, c.q) if lam_codes is None else lam_codes
    frob = range(c.f) if frob is None else frob
    return _in_G(S, [SemilinearElem(c, (lam, 0, 0, 1), i) for lam in lam_codes for i in frob])


def borel(S: PSL2Setting) -> NamedSubgroup:
    """P1 = N_G(Q) = (Q:D):<phi> intersected with G."""
    elems = torus_normalizer_in_borel(S)
    return S.subgroup(subgroup_Q(S).gens + _greedy_gens(elems), "P1")


def split_torus_normalizer(S: PSL2Setting) -> NamedSubgroup:
    """Stabiliser of {0, infinity}: type GL_1(q) wr S_2."""
    c = S.ctx
    elems = torus_normalizer_in_borel(S)
    swap = SemilinearElem(c, (0, 1, c.neg(1), 0))
    return S.subgroup(_greedy_gens(elems) + [swap], "GL1(q)wrS2")


def nonsplit_torus_generator(S: PSL2Setting) -> SemilinearElem:
    """A companion matrix of projective order q+1 (least in lexicographic search)."""
    c = S.ctx
    q = c.q
    for n in range(1, q):
        for t in range(q):
            # x^2 - t x + n irreducible: no root in GF(q)
            xs = np.arange(q)
            val = c.add_arr(c.add_arr(c.mul_arr(xs, xs), c.neg_arr(c.mul_arr(t, xs))), n)
            if (val == 0).any():
                continue
            m = SemilinearElem(c, (0, c.neg(n), 1, t))
            if m.perm().order() == q + 1:
                return m
    raise AssertionError("no nonsplit torus found")  # pragma: no cover


def nonsplit_torus(S: PSL2Setting) -> NamedSubgroup:
    g = nonsplit_torus_generator(S)
    if S.p != 2:
        g = g * g
    return S.subgroup([g], "T+")


def subfield_subgroup(S: PSL2Setting, q0: int) -> NamedSubgroup:
    """The subfield subgroup G n (PGL_2(q0):<phi>) for q = q0^r, r prime.

    Built from generators so it also works when G is not enumerated.
    """
    c = S.ctx
    f0 = _subfield_degree(S, q0)
    r = S.f // f0
    if not _is_prime(r):
        raise ConditionError(f"q = {S.q} is not a prime power of {q0}")
    if S.p == 2 and q0 == 2:
        raise ConditionError("GL2(q0) with q0 = 2 and q even is not maximal")
    nu0 = _subfield_generator(c, f0)
    gens = [
        SemilinearElem.unipotent(c, 1),
        SemilinearElem.diagonal(c, nu0, c.inv(nu0)),
        SemilinearElem(c, (0, 1, c.neg(1), 0)),
    ]
    # one lift of each coset of PSL_2(q0) that lies in G
    gens += [
        x
        for d in range(2)
        for e in range(S.f)
        if (x := SemilinearElem(c, (c.pow(nu0, d), 0, 0, 1), e)) and S.contains(x)
    ]
    return S.subgroup(_greedy_gens_mixed(S, gens), f"GL2({q0})")


def _greedy_gens_mixed(S: PSL2Setting, gens: list[SemilinearElem]) -> list[SemilinearElem]:
    """Drop generators already in the span of earlier ones."""
    out: list[SemilinearElem] = []
    span: set[Perm] = {Perm.identity(S.degree)}
    for g in gens:
        if g.perm() in span:
            continue
        out.append(g)
        span = set(_close([x.perm() for x in out]))
    return out


def _subfield_generator(c: FieldCtx, f0: int) -> int:
    return c.pow(c.gen, (c.q - 1) // (c.p**f0 - 1))


def _subfield_degree(S: PSL2Setting, q0: int) -> int:
    for d in divisors(S.f):
        if S.p**d == q0:
            return d
    raise ConditionError(f"GF({q0}) is not a subfield of GF({S.q})")


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


# ----------------------------------------------------- maximal subgroup classes

MAXIMAL_TYPES = ("P1", "GL1(q)wrS2", "GL1(q^2)", "GL2(q0)", "2^(1+2).O2-(2)", "A5")


def polyhedral_subgroups(S: PSL2Setting, target: int) -> list[Subgroup]:
    """Subgroups of the socle isomorphic to A4 (12), S4 (24) or A5 (60).

    Found as <a, b> with |a| = 2, |b| = 3 and |ab| = 3, 4 or 5, a running
    over one involution (all involutions of PSL_2(q) are conjugate) and b
    over all elements of order 3; one representative per socle class.
    """
    k = {12: 3, 24: 4, 60: 5}[target]
    G = S.group
    G0 = S.socle
    X = G.elements
    orders = G.element_orders
    in0 = G0.mask
    invs = np.flatnonzero(in0 & (orders == 2))
    threes = np.flatnonzero(in0 & (orders == 3))
    if invs.shape[0] == 0 or threes.shape[0] == 0:
        return []
    found: list[Subgroup] = []
    a = int(invs[0])
    prods = G.index(X[threes][:, X[a]])  # row for a * b: b(a(i))
    cand = threes[orders[prods] == k]
    covered = np.zeros(G.order, dtype=bool)
    for b in cand:
        b = int(b)
        if covered[b]:
            continue
        T = G.subgroup([a, b])
        if T.order != target:
            continue
        covered[T.idx] = True
        if not any(subgroups_conjugate_in(G, G0, T, U) for U in found):
            found.append(T)
    # the involution a is fixed, so classes may still repeat under G0 conjugacy
    return found


def subgroups_conjugate_in(G: PermGroup, N: Subgroup, A: Subgroup, B: Subgroup) -> bool:
    """Is some n in N with A^n = B?"""
    if A.order != B.order:
        return False
    ok = N.mask.copy()
    for a in A.small_gens():
        ok &= B.mask[G.conj_all(a)]
        if not ok.any():
            return False
    return bool(ok.any())


def _is_maximal(S: PSL2Setting, M: Subgroup) -> bool:
    G = S.group
    if M.order == G.order or S.socle.mask[M.idx].sum() == S.socle.order:
        return False
    act = coset_action(G, M, bound=G.order)
    stab = [act.image_of(int(k)) for k in M.small_gens()]
    return is_primitive(act.group.degree, act.group.gens, stab)


@dataclass(eq=False)
class MaximalClass:
    type: str
    sub: Subgroup
    note: str = ""

    @property
    def order(self) -> int:
        return self.sub.order


def maximal_subgroups(S: PSL2Setting) -> list[MaximalClass]:
    """Conjugacy classes of maximal subgroups of G not containing the socle.

    Candidates are built from the geometric constructions (and their delta
    conjugates), normalisers of the torus and of the polyhedral subgroups;
    a candidate is kept when the coset action is primitive.  Duplicates under
    G-conjugacy keep the first type in MAXIMAL_TYPES order.
    """
    G = S.group
    c = S.ctx
    cands: list[tuple[str, Subgroup, str]] = []
    cands.append(("P1", borel(S).in_group(), ""))
    cands.append(("GL1(q)wrS2", split_torus_normalizer(S).in_group(), ""))
    cands.append(("GL1(q^2)", normalizer(G, nonsplit_torus(S).in_group()), ""))
    for r in sorted(factor_int(S.f)):
        q0 = S.p ** (S.f // r)
        if S.p == 2 and q0 == 2:
            continue
        H = subfield_centralizer(S, q0)
        cands.append(("GL2(q0)", H, f"q0={q0}"))
        if S.p != 2:
            cands.append(("GL2(q0)", _conj_outside(S, H, SemilinearElem.delta(c)), f"q0={q0}"))
    for tgt, label in ((24, "2^(1+2).O2-(2)"), (12, "2^(1+2).O2-(2)"), (60, "A5")):
        for T in polyhedral_subgroups(S, tgt):
            cands.append((label, normalizer(G, T), ""))
    out: list[MaximalClass] = []
    for label, M, note in cands:
        if M is None:
            continue
        if any(subgroups_conjugate(G, M, e.sub) is not None for e in out):
            continue
        if _is_maximal(S, M):
            out.append(MaximalClass(label, M, note))
    return out


def maximal_subgroup(S: PSL2Setting, kind: str, q0: int | None = None):
    """One maximal subgroup of the given type.

    P1, GL1(q)wrS2 and GL2(q0) come back as generator handles (usable for
    virtual groups); the remaining types need the enumerated group and come
    back as Subgroup handles of ``S.group``.
    """
    if kind == "P1":
        return borel(S)
    if kind == "GL1(q)wrS2":
        return split_torus_normalizer(S)
    if kind == "GL2(q0)":
        if q0 is None:
            raise ConditionError("GL2(q0) needs q0")
        return subfield_subgroup(S, q0)
    if S.is_virtual:
        raise TooLargeError(f"{kind} needs the enumerated group; {S.name} is handled virtually", S.order)
    G = S.group
    if kind == "GL1(q^2)":
        return normalizer(G, nonsplit_torus(S).in_group())
    if kind in ("2^(1+2).O2-(2)", "A5"):
        hits = [m.sub for m in maximal_subgroups(S) if m.type == kind]
        if not hits:
            raise ConditionError(f"{S.name} has no maximal subgroup of type {kind}")
        return hits[0]
    raise ValueError(f"unknown maximal type {kind!r}")


def normal_maximal_subgroups(S: PSL2Setting) -> list[Subgroup]:
    """The maximal subgroups G0.O' of G, one for each maximal subgroup O' of O."""
    G = S.group
    O = sorted(S.spec.out_elements)
    labels = S.outer_of_index()
    two, f = S.spec.two, S.f
    subs = {_out_closure([a, b], two, f) for a in O for b in O}
    proper = [U for U in subs if len(U) < len(O)]
    maximal = [U for U in proper if not any(U < V for V in proper)]
    out = []
    for U in sorted(maximal, key=lambda U: sorted(U)):
        keep = np.array([o in U for o in O])
        out.append(Subgroup(G, np.flatnonzero(keep[labels])))
    return out


def all_maximal_subgroups(S: PSL2Setting) -> list[Subgroup]:
    """Representatives of every class of maximal subgroups, socle overgroups included."""
    return [m.sub for m in maximal_subgroups(S)] + normal_maximal_subgroups(S)


def subfield_centralizer(S: PSL2Setting, q0: int) -> Subgroup:
    """C_G(phi^(f/r)) computed by comparing permutations, phi need not lie in G."""
    G = S.group
    f0 = _subfield_degree(S, q0)
    phi = np.array(SemilinearElem.frobenius(S.ctx, f0).images())
    X = G.elements
    comm = (X[:, phi] == phi[X]).all(axis=1)  # x * phi == phi * x
    return Subgroup(G, np.flatnonzero(comm))


def _conj_outside(S: PSL2Setting, H: Subgroup, g: SemilinearElem) -> Subgroup:
    """H^g for g in PGammaL_2(q), which normalises G."""
    G = S.group
    X = G.elements
    gr = np.array(g.images(), dtype=X.dtype)
    gi = np.argsort(gr).astype(X.dtype)
    rows = X[H.idx]
    conj = gr[rows[:, gi]]  # g^-1 h g : i -> g(h(g^-1(i)))
    return Subgroup(G, np.sort(G.index(conj)))


# ------------------------------------------------------- the map rho

def rho_iso(x: SemilinearElem) -> GammaElem:
    """N(Q) -> AGammaL_1(q), (A, i) -> (a, lam mu^-1) phi^i."""
    c = x.ctx
    if x.m[2] != 0:
        raise ValueError("element does not normalise Q (not upper triangular)")
    a, b, _, d = (c.frob(v, -x.i) for v in x.m)
    return GammaElem(c, c.div(b, a), c.div(a, d), x.i)


def rho_inverse(g: GammaElem) -> SemilinearElem:
    c = g.ctx
    m = (g.lam, c.mul(g.lam, g.a), 0, 1)
    return SemilinearElem(c, tuple(c.frob(v, g.i) for v in m), g.i)


# -------------------------------------------------------- fixer families

FAMILIES = ("L_I", "L_II", "L_III", "M", "case_a", "case_c")


def _phi_p_part(f: int, p: int, want_p: bool) -> list[int]:
    """Exponents i with phi^i in <phi>_p (want_p) or <phi>_p'."""
    out = []
    for i in range(f):
        s = f // math.gcd(i, f) if i else 1
        is_p = s == 1 or set(factor_int(s)) == {p}
        is_pp = s % p != 0
        if (want_p and is_p) or (not want_p and is_pp):
            out.append(i)
    return out


def fixer_family(S: PSL2Setting, which: str, q0: int | None = None) -> NamedSubgroup:
    """Explicit fixer families inside N_G(Q).

    L_I   = Q : (H n (D:<phi>))            q = q0^r, r odd prime, r != p
    L_II  = Q : (H n (D:<phi>_p'))         q = q0^p, p odd
    L_III = M : (H n (D:<phi>))            q = q0^p, p odd
    M     = trace-zero unipotents          q = q0^p
    case_a = (Q:D_0) . <psi>_2'            q even
    case_c = Q : (C : <psi>)               q even, f even, |C| = 2^(f/2)+1
    where H = C_G(phi^(f/r)) and <psi> is the image of G in <phi>.
    """
    c = S.ctx
    p, f = S.p, S.f
    if which not in FAMILIES:
        raise ValueError(f"unknown family {which!r}")
    Q = subgroup_Q(S)
    if which in ("case_a", "case_c"):
        if p != 2:
            raise ConditionError(f"{which} needs q even")
        psi_exps = sorted({e for _, e in S.spec.out_elements})
        odd = [e for e in psi_exps if (f // math.gcd(e, f) if e else 1) % 2 == 1]
        frobs = [SemilinearElem.frobenius(c, e) for e in odd if e]
        if which == "case_a":
            D = SemilinearElem.diagonal(c, c.gen)
            return S.subgroup(Q.gens + [D] + _greedy_gens_mixed(S, frobs), "case_a")
        if f % 2:
            raise ConditionError("case_c needs f even (q = q0^2)")
        m = 2 ** (f // 2) + 1
        C = SemilinearElem.diagonal(c, c.pow(c.gen, (c.q - 1) // m))
        frobs_all = [SemilinearElem.frobenius(c, e) for e in psi_exps if e]
        return S.subgroup(Q.gens + [C] + _greedy_gens_mixed(S, frobs_all), "case_c")
    if q0 is None:
        raise ConditionError(f"{which} needs q0")
    f0 = _subfield_degree(S, q0)
    r = f // f0
    if not _is_prime(r):
        raise ConditionError(f"q = {S.q} is not a prime power of q0 = {q0}")
    if which == "L_I" and (r % 2 == 0 or r == p):
        raise ConditionError("L_I needs q = q0^r with r odd and r != p")
    if which in ("L_II", "L_III") and not (r == p and p != 2):
        raise ConditionError(f"{which} needs q = q0^p with p odd")
    if which == "M" and r != p:
        raise ConditionError("M needs q = q0^p")
    sub_nz = [x for x in c.subfield_codes(f0) if x]
    trace0 = [a for a in range(c.q) if _trace_code(c, a, f0) == 0]
    M_gens = _basis_gens(c, trace0)
    if which == "M":
        return S.subgroup(M_gens, "M")
    frob = range(f) if which != "L_II" else _phi_p_part(f, p, want_p=False)
    # H n (D:<phi>) = {diag(lam,1) phi^i in G : lam in GF(q0)}
    top = torus_normalizer_in_borel(S, sub_nz, frob)
    base = Q.gens if which != "L_III" else M_gens
    return S.subgroup(base + _greedy_gens_mixed(S, top), which)


def _basis_gens(c: FieldCtx, codes: list[int]) -> list[SemilinearElem]:
    """Unipotents U(a) for a GF(p)-basis of the additive subgroup ``codes``."""
    span = {0}
    gens = []
    for a in codes:
        if a in span:
            continue
        gens.append(SemilinearElem.unipotent(c, a))
        new = set(span)
        for k in range(1, c.p):
            ka = c.mul(c.scalar(k), a)
            new |= {c.add(s, ka) for s in span}
        span = new
    return gens
