"""Exact arithmetic in GF(p^f).

Elements are integer codes ``sum(c[j] * p**j)`` of their coefficient
vectors over a monic irreducible polynomial (Conway polynomials unless an
override is supplied).  Multiplication, inversion and Frobenius go through
log/exp tables built once per field; addition is digitwise mod p.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "FieldCtx",
    "FFElem",
    "FieldMismatchError",
    "NoSolutionError",
    "get_field",
    "conway_polynomial",
    "is_irreducible",
    "prime_power",
    "factor_int",
    "field_arith",
    "frobenius",
    "rel_trace",
    "rel_norm",
    "hilbert90_additive",
    "hilbert90_multiplicative",
    "subfield_membership",
    "solve_semilinear",
]

# above this size the Hilbert 90 solvers stop scanning the field
SEARCH_LIMIT = 4096


class FieldMismatchError(ValueError):
    pass


class NoSolutionError(ValueError):
    pass


# ---------------------------------------------------------------- integers

def factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    fac = factor_int(q)
    if q < 2 or len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, f),) = fac.items()
    return p, f


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ------------------------------------------------- polynomials over GF(p)
# coefficient lists, lowest degree first

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for j, mc in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mc) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _polymod(out, m, p)


def _polypowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(list(a), m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def is_irreducible(poly: list[int] | tuple[int, ...], p: int) -> bool:
    """Rabin's test: x^(p^f) = x mod poly and no factor of lower degree."""
    poly = [c % p for c in poly]
    f = len(poly) - 1
    if f < 1 or poly[-1] != 1:
        return False
    x = [0, 1]
    if _polypowmod(x, p**f, poly, p) != _polymod(x, poly, p):
        return False
    for r in factor_int(f):
        h = _polypowmod(x, p ** (f // r), poly, p)
        diff = _trim([(h[j] if j < len(h) else 0) - (1 if j == 1 else 0) for j in range(max(len(h), 2))])
        diff = [c % p for c in diff]
        if len(_polygcd(poly, diff, p)) != 1:
            return False
    return True


# ---------------------------------------------------------- Conway data

def data_path(name: str) -> Path:
    """A data file, looked up first in $FIXERLAB_DATA and then in the package."""
    env = os.environ.get("FIXERLAB_DATA")
    if env and (Path(env) / name).exists():
        return Path(env) / name
    return Path(str(resources.files("fixerlab") / "data")) / name


@lru_cache(maxsize=1)
def _conway_table() -> dict[tuple[int, int], tuple[int, ...]]:
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    path = data_path("conway.txt")
    if not path.exists():
        return table
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            nums = [int(t) for t in line.split()]
            p, f, coeffs = nums[0], nums[1], tuple(nums[2:])
            if len(coeffs) != f + 1:
                raise ValueError(f"bad Conway entry for p={p}, f={f}")
            table[(p, f)] = coeffs
    return table


def conway_polynomial(p: int, f: int) -> tuple[int, ...]:
    try:
        return _conway_table()[(p, f)]
    except KeyError:
        raise KeyError(f"no shipped Conway polynomial for GF({p}^{f}); pass poly= explicitly") from None


# ----------------------------------------------------------------- fields

class FieldCtx:
    """GF(p^f) with precomputed log/exp/digit tables.

    ``gen`` is the canonical primitive element: the class of t when the
    defining polynomial is primitive (always true for Conway polynomials),
    otherwise the primitive element with least code.
    """

    __slots__ = ("p", "f", "q", "poly", "gen", "exp", "log", "digits", "weights", "_frob")

    def __init__(self, p: int, f: int, poly=None):
        if factor_int(p) != {p: 1}:
            raise ValueError(f"{p} is not prime")
        if poly is None:
            poly = conway_polynomial(p, f)
        poly = tuple(int(c) % p for c in poly)
        if len(poly) != f + 1 or poly[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree f")
        if not is_irreducible(poly, p):
            raise ValueError(f"{poly} is reducible over GF({p})")
        self.p, self.f, self.q, self.poly = p, f, p**f, poly
        self.weights = np.array([p**j for j in range(f)], dtype=np.int64)
        codes = np.arange(self.q, dtype=np.int64)
        self.digits = (codes[:, None] // self.weights[None, :]) % p
        self._build_tables()
        self._frob = None

    def _build_tables(self) -> None:
        p, f, q = self.p, self.f, self.q
        poly = list(self.poly)
        order = q - 1

        def times_t(c: list[int]) -> list[int]:
            lead = c[-1]
            out = [0] + c[:-1]
            if lead:
                out = [(out[j] - lead * poly[j]) % p for j in range(f)]
            return out

        def run(step, start):
            exp = np.empty(order, dtype=np.int64)
            log = np.full(q, -1, dtype=np.int64)
            c = start
            for k in range(order):
                code = sum(cj * p**j for j, cj in enumerate(c))
                if log[code] != -1:
                    return None
                exp[k] = code
                log[code] = k
                c = step(c)
            return exp, log

        one = [1] + [0] * (f - 1)
        if f == 1:
            root = (-poly[0]) % p
            res = run(lambda c: [c[0] * root % p], one)
            gen_code = root
        else:
            res = run(times_t, one)
            gen_code = p
        if res is None:
            # defining polynomial not primitive: scan for a primitive element
            for gen_code in range(2, q):
                g = [int(x) for x in self.digits[gen_code]]
                res = run(lambda c, g=g: (_polymulmod(c, g, poly, p) + [0] * f)[:f], one)
                if res is not None:
                    break
        self.exp, self.log = res
        self.gen = int(gen_code)

    # integer-code arithmetic -------------------------------------------
    def encode(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coefficients")
        return sum((int(c) % self.p) * self.p**j for j, c in enumerate(coeffs))

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.f == 1:
            return (a + b) % self.p
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self.weights)

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.f == 1:
            return (-a) % self.p
        return int(((-self.digits[a]) % self.p) @ self.weights)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return int(self.exp[(self.log[a] * k) % (self.q - 1)])

    def frob(self, a: int, i: int = 1) -> int:
        """a^(p^i), with i read mod f (negative i gives the inverse map)."""
        if a == 0:
            return 0
        e = pow(self.p, i % self.f, self.q - 1) if self.q > 2 else 1
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    def scalar(self, k: int) -> int:
        return k % self.p

    # vectorised variants on code arrays ---------------------------------
    def add_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.weights

    def neg_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return ((-self.digits[a]) % self.p) @ self.weights

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def frob_arr(self, a, i: int = 1):
        a = np.asarray(a, dtype=np.int64)
        e = pow(self.p, i % self.f, self.q - 1) if self.q > 2 else 1
        return np.where(a == 0, 0, self.exp[(self.log[a] * e) % (self.q - 1)])

    # element handles ----------------------------------------------------
    def __call__(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.ctx is not self:
                raise FieldMismatchError("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            return FFElem(self, self.encode(value))
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"code {value} out of range for GF({self.q})")
        return FFElem(self, value)

    @property
    def zero(self) -> "FFElem":
        return FFElem(self, 0)

    @property
    def one(self) -> "FFElem":
        return FFElem(self, 1)

    @property
    def primitive(self) -> "FFElem":
        return FFElem(self, self.gen)

    def elements(self):
        return [FFElem(self, c) for c in range(self.q)]

    def subfield_codes(self, f1: int) -> list[int]:
        _check_divisor(self, f1)
        return [c for c in range(self.q) if self.frob(c, f1) == c]

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, f={self.f}, poly={self.poly})"


@lru_cache(maxsize=None)
def get_field(q: int) -> FieldCtx:
    p, f = prime_power(q)
    return FieldCtx(p, f)


class FFElem:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = int(code)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.ctx.digits[self.code])

    def _other(self, y) -> int:
        if isinstance(y, FFElem):
            if y.ctx is not self.ctx:
                raise FieldMismatchError("elements from different fields")
            return y.code
        if isinstance(y, int):
            return self.ctx.scalar(y)
        return NotImplemented

    def __add__(self, y):
        return FFElem(self.ctx, self.ctx.add(self.code, self._other(y)))

    __radd__ = __add__

    def __sub__(self, y):
        return FFElem(self.ctx, self.ctx.sub(self.code, self._other(y)))

    def __rsub__(self, y):
        return FFElem(self.ctx, self.ctx.sub(self._other(y), self.code))

    def __neg__(self):
        return FFElem(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, y):
        return FFElem(self.ctx, self.ctx.mul(self.code, self._other(y)))

    __rmul__ = __mul__

    def __truediv__(self, y):
        return FFElem(self.ctx, self.ctx.div(self.code, self._other(y)))

    def __rtruediv__(self, y):
        return FFElem(self.ctx, self.ctx.div(self._other(y), self.code))

    def __pow__(self, k: int):
        return FFElem(self.ctx, self.ctx.pow(self.code, k))

    def inverse(self) -> "FFElem":
        return FFElem(self.ctx, self.ctx.inv(self.code))

    def __eq__(self, y) -> bool:
        if isinstance(y, FFElem):
            return self.ctx is y.ctx and self.code == y.code
        if isinstance(y, int):
            return self.code == self.ctx.scalar(y)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.q, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                mono = "1" if j == 0 else ("t" if j == 1 else f"t^{j}")
                terms.append(mono if c == 1 and j else (f"{c}" if j == 0 else f"{c}*{mono}"))
        return "+".join(reversed(terms)) or "0"


# ------------------------------------------------------ module-level ops

def _check_divisor(ctx: FieldCtx, f1: int) -> None:
    if f1 < 1 or ctx.f % f1:
        raise ValueError(f"{f1} does not divide f={ctx.f}")


def field_arith(x: FFElem, y: FFElem | None, op: str, k: int | None = None) -> FFElem:
    if op == "pow":
        return x ** int(k)
    if y is None or x.ctx is not y.ctx:
        raise FieldMismatchError("operands must share a field")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if not y:
            raise ZeroDivisionError("division by zero field element")
        return x / y
    raise ValueError(f"unknown op {op!r}")


def frobenius(x: FFElem, i: int) -> FFElem:
    return FFElem(x.ctx, x.ctx.frob(x.code, i))


def _trace_code(ctx: FieldCtx, a: int, f1: int) -> int:
    acc = 0
    for j in range(ctx.f // f1):
        acc = ctx.add(acc, ctx.frob(a, f1 * j))
    return acc


def _norm_code(ctx: FieldCtx, a: int, f1: int) -> int:
    if a == 0:
        return 0
    e = (ctx.q - 1) // (ctx.p**f1 - 1)
    return ctx.pow(a, e)


def rel_trace(x: FFElem, f1: int) -> FFElem:
    """Relative trace from GF(p^f) down to GF(p^f1)."""
    _check_divisor(x.ctx, f1)
    return FFElem(x.ctx, _trace_code(x.ctx, x.code, f1))


def rel_norm(x: FFElem, f1: int) -> FFElem:
    _check_divisor(x.ctx, f1)
    return FFElem(x.ctx, _norm_code(x.ctx, x.code, f1))


def subfield_membership(x: FFElem, f1: int) -> bool:
    _check_divisor(x.ctx, f1)
    return x.ctx.frob(x.code, f1) == x.code


def fixed_degree(f: int, i: int) -> int:
    """Degree over GF(p) of the fixed field of phi^i in GF(p^f)."""
    return math.gcd(i % f, f) or f


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of rows * x = rhs over GF(p), free variables set to 0."""
    m, n = len(rows), len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((k for k in range(r, m) if aug[k][c] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for k in range(m):
            if k != r and aug[k][c] % p:
                fac = aug[k][c]
                aug[k] = [(vk - fac * vr) % p for vk, vr in zip(aug[k], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[k][n] % p for k in range(r, m)):
        return None
    x = [0] * n
    for k, c in enumerate(pivots):
        x[c] = aug[k][n]
    return x


def hilbert90_additive(b: FFElem, i: int) -> FFElem:
    """Return c with c^(phi^-i) - c = b.

    Solvable exactly when b has trace zero down to the fixed field of phi^i.
    """
    ctx = b.ctx
    d = fixed_degree(ctx.f, i)
    if _trace_code(ctx, b.code, d) != 0:
        raise NoSolutionError("trace to the fixed field of phi^i is nonzero")
    if ctx.q <= SEARCH_LIMIT:
        target = b.code
        for c in range(ctx.q):
            if ctx.sub(ctx.frob(c, -i), c) == target:
                return FFElem(ctx, c)
        raise NoSolutionError("no solution found")  # pragma: no cover
    # the map c -> c^(phi^-i) - c is GF(p)-linear; solve in the basis t^j
    cols = []
    for j in range(ctx.f):
        e = ctx.p**j
        cols.append([int(v) for v in ctx.digits[ctx.sub(ctx.frob(e, -i), e)]])
    rows = [[cols[j][k] for j in range(ctx.f)] for k in range(ctx.f)]
    sol = _solve_mod_p(rows, list(b.coeffs), ctx.p)
    if sol is None:
        raise NoSolutionError("linear system inconsistent")  # pragma: no cover
    c = FFElem(ctx, ctx.encode(sol))
    assert frobenius(c, -i) - c == b
    return c


def hilbert90_multiplicative(lam: FFElem, i: int) -> FFElem:
    """Return mu != 0 with mu^(phi^-i) * mu^-1 = lam.

    Solvable exactly when lam has norm one down to the fixed field of phi^i.
    """
    ctx = lam.ctx
    if not lam:
        raise NoSolutionError("zero has no multiplicative preimage")
    d = fixed_degree(ctx.f, i)
    if _norm_code(ctx, lam.code, d) != 1:
        raise NoSolutionError("norm to the fixed field of phi^i is not 1")
    if ctx.q <= SEARCH_LIMIT:
        for m in range(1, ctx.q):
            if ctx.div(ctx.frob(m, -i), m) == lam.code:
                return FFElem(ctx, m)
        raise NoSolutionError("no solution found")  # pragma: no cover
    # in exponents of the primitive element: k * (p^(f-i) - 1) = log(lam) mod q-1
    n = ctx.q - 1
    e = (pow(ctx.p, (-i) % ctx.f, n) - 1) % n
    target = int(ctx.log[lam.code])
    g = math.gcd(e, n)
    if target % g:
        raise NoSolutionError("congruence unsolvable")  # pragma: no cover
    k = (target // g) * pow(e // g, -1, n // g) % (n // g) if n // g > 1 else 0
    mu = FFElem(ctx, int(ctx.exp[k]))
    assert frobenius(mu, -i) / mu == lam
    return mu


def solve_semilinear(u: FFElem, v: FFElem, k: int, rhs: FFElem) -> FFElem | None:
    """Some c with u*c + v*c^(phi^k) = rhs, or None when there is none.

    The left side is GF(p)-linear in c, so this is a p-ary linear system of
    size f.  Among several solutions the one with all free coordinates zero
    is returned, which keeps witnesses reproducible.
    """
    ctx = u.ctx
    cols = []
    for j in range(ctx.f):
        e = ctx.p**j
        img = ctx.add(ctx.mul(u.code, e), ctx.mul(v.code, ctx.frob(e, k)))
        cols.append([int(x) for x in ctx.digits[img]])
    rows = [[cols[j][r] for j in range(ctx.f)] for r in range(ctx.f)]
    sol = _solve_mod_p(rows, list(rhs.coeffs), ctx.p)
    if sol is None:
        return None
    return FFElem(ctx, ctx.encode(sol))
