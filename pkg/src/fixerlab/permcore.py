"""Permutations and fully enumerated permutation groups.

Groups are stored as an ``(N, n)`` array of image rows in canonical
(lexicographic) order, so index 0 is always the identity.  Membership goes
through 64-bit random-weight hashes of the rows; every hash hit is confirmed
by comparing the full row, and the weights are redrawn if two group elements
ever share a hash, so lookups are exact.

Composition is left-to-right: ``(x * y)(i) = y(x(i))``, and ``x ** g`` in
the docs means ``g^-1 x g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

DEFAULT_BOUND = 3_000_000
SUBGROUP_BOUND = 100_000
_CHUNK = 1 << 17


class TooLargeError(RuntimeError):
    """Raised when closure exceeds the enumeration bound."""

    def __init__(self, msg: str, lower_bound: int):
        super().__init__(msg)
        self.lower_bound = lower_bound


class NotInGroupError(ValueError):
    pass


class _HashCollision(Exception):
    pass


# --------------------------------------------------------------- Perm

class Perm:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("images do not form a permutation")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Perm":
        img = list(range(n))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        o = other.images
        return Perm(o[i] for i in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Perm.identity(self.degree), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self, g: "Perm") -> "Perm":
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def cycles(self, singletons: bool = False) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1 or singletons:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(singletons=True)), reverse=True))

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles(singletons=True)), 1)

    def fixed_points(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i == j)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


# --------------------------------------------------------- row helpers

def row_dtype(n: int):
    return np.uint8 if n <= 256 else np.uint16


def compose_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise a * b (apply a, then b); shapes broadcast on the first axis."""
    if b.ndim == 1:
        return b[a]
    if a.ndim == 1:
        return b[:, a]
    out = np.empty(a.shape, dtype=b.dtype)
    for s in range(0, a.shape[0], 8 * _CHUNK):
        sl = slice(s, s + 8 * _CHUNK)
        out[sl] = np.take_along_axis(b[sl], a[sl].astype(np.intp), axis=1)
    return out


def invert_rows(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    if a.ndim == 1:
        out[a] = np.arange(a.shape[0], dtype=a.dtype)
        return out
    rows = np.arange(a.shape[0])[:, None]
    out[rows, a] = np.arange(a.shape[1], dtype=a.dtype)[None, :]
    return out


class _Hasher:
    def __init__(self, n: int, seed: int):
        rng = np.random.default_rng(0x5EED0000 + seed)
        self.w = rng.integers(1, 2**63, size=n, dtype=np.uint64) | np.uint64(1)

    def __call__(self, rows: np.ndarray) -> np.ndarray:
        if rows.ndim == 1:
            rows = rows[None, :]
        out = np.empty(rows.shape[0], dtype=np.uint64)
        for s in range(0, rows.shape[0], _CHUNK):
            blk = rows[s : s + _CHUNK].astype(np.uint64)
            blk *= self.w
            out[s : s + _CHUNK] = blk.sum(axis=1, dtype=np.uint64)
        return out


# ------------------------------------------------------------ groups

@dataclass
class ClassTable:
    class_of: np.ndarray  # element index -> class id
    reps: np.ndarray  # class id -> canonical least element index
    sizes: np.ndarray
    orders: np.ndarray  # element order of each class

    @property
    def count(self) -> int:
        return len(self.reps)


class PermGroup:
    """Finitely generated permutation group with lazy full enumeration."""

    def __init__(self, degree: int, gens, name: str | None = None, order: int | None = None):
        self.degree = int(degree)
        self.gens = [g if isinstance(g, Perm) else Perm(g) for g in gens]
        for g in self.gens:
            if g.degree != self.degree:
                raise ValueError("generator degree mismatch")
        self.name = name
        self._declared_order = order
        self._elems: np.ndarray | None = None
        self._cache: dict = {}

    # -- enumeration ------------------------------------------------------
    @property
    def enumerated(self) -> bool:
        return self._elems is not None

    def enumerate(self, bound: int | None = None) -> "PermGroup":
        if self._elems is not None:
            return self
        bound = DEFAULT_BOUND if bound is None else bound
        for attempt in range(8):
            try:
                self._enumerate(bound, attempt)
                break
            except _HashCollision:
                continue
        else:  # pragma: no cover
            raise RuntimeError("persistent hash collisions")
        if self._declared_order is not None and self._declared_order != self.order:
            raise ValueError(f"closure order {self.order} != declared order {self._declared_order}")
        return self

    def _enumerate(self, bound: int, attempt: int) -> None:
        n = self.degree
        dt = row_dtype(n)
        hasher = _Hasher(n, attempt)
        gens = [np.array(g.images, dtype=dt) for g in self.gens] or [np.arange(n, dtype=dt)]
        ident = np.arange(n, dtype=dt)[None, :]
        chunks = [ident]
        known_keys = hasher(ident)
        frontier = ident
        total = 1
        while frontier.shape[0]:
            cand = np.concatenate([g[frontier] for g in gens])
            ck = hasher(cand)
            uk, first, inv = np.unique(ck, return_index=True, return_inverse=True)
            cand_u = cand[first]
            if not np.array_equal(cand_u[inv.ravel()], cand):
                raise _HashCollision
            pos = np.searchsorted(known_keys, uk)
            pos_c = np.minimum(pos, known_keys.shape[0] - 1)
            seen = known_keys[pos_c] == uk
            frontier = cand_u[~seen]
            if frontier.shape[0]:
                chunks.append(frontier)
                known_keys = np.sort(np.concatenate([known_keys, uk[~seen]]))
                total += frontier.shape[0]
                if total > bound:
                    raise TooLargeError(f"group order exceeds enumeration bound {bound}", total)
        elems = np.concatenate(chunks)
        keys_all = hasher(elems)
        if np.unique(keys_all).shape[0] != elems.shape[0]:
            raise _HashCollision
        order = np.lexsort(elems.T[::-1])
        elems = np.ascontiguousarray(elems[order])
        keys_all = keys_all[order]
        korder = np.argsort(keys_all)
        self._elems = elems
        self._hasher = hasher
        self._skeys = keys_all[korder]
        self._korder = korder
        # certificate: the stored set is closed under every generator, with
        # full-row comparison, so a hash clash cannot have hidden an element
        for s in range(0, elems.shape[0], _CHUNK):
            blk = elems[s : s + _CHUNK]
            for g in gens:
                if (self.index(g[blk]) < 0).any():
                    self._elems = None
                    raise _HashCollision

    @property
    def elements(self) -> np.ndarray:
        self.enumerate()
        return self._elems

    @property
    def order(self) -> int:
        if self._elems is not None:
            return int(self._elems.shape[0])
        if self._declared_order is not None:
            return self._declared_order
        return int(self.enumerate()._elems.shape[0])

    def __len__(self) -> int:
        return self.order

    def perm(self, i: int) -> Perm:
        return Perm(self.elements[int(i)])

    def index(self, rows: np.ndarray) -> np.ndarray:
        """Element indices of the given rows, -1 where a row is not in the group."""
        self.enumerate()
        rows = np.asarray(rows)
        single = rows.ndim == 1
        if single:
            rows = rows[None, :]
        out = np.empty(rows.shape[0], dtype=np.int64)
        for s in range(0, rows.shape[0], 8 * _CHUNK):
            blk = rows[s : s + 8 * _CHUNK]
            k = self._hasher(blk)
            pos = np.minimum(np.searchsorted(self._skeys, k), self._skeys.shape[0] - 1)
            cand = self._korder[pos]
            ok = self._skeys[pos] == k
            ok &= (self._elems[cand] == blk).all(axis=1)
            out[s : s + 8 * _CHUNK] = np.where(ok, cand, -1)
        return out[0] if single else out

    def index_of(self, x) -> int:
        if isinstance(x, Perm):
            x = np.array(x.images, dtype=row_dtype(self.degree))
        i = int(self.index(np.asarray(x)))
        if i < 0:
            raise NotInGroupError("element is not in the group")
        return i

    def __contains__(self, x) -> bool:
        if isinstance(x, Perm):
            x = np.array(x.images, dtype=row_dtype(self.degree))
        return int(self.index(np.asarray(x))) >= 0

    # -- per-element data -------------------------------------------------
    @property
    def inverse_index(self) -> np.ndarray:
        if "inv" not in self._cache:
            self._cache["inv"] = self.index(invert_rows(self.elements))
        return self._cache["inv"]

    @property
    def element_orders(self) -> np.ndarray:
        if "orders" not in self._cache:
            X = self.elements
            ident = np.arange(self.degree, dtype=X.dtype)
            orders = np.zeros(X.shape[0], dtype=np.int64)
            Y = X.copy()
            k = 1
            while True:
                done = (orders == 0) & (Y == ident).all(axis=1)
                orders[done] = k
                if (orders > 0).all():
                    break
                Y = compose_rows(Y, X)
                k += 1
            self._cache["orders"] = orders
        return self._cache["orders"]

    @property
    def fixed_counts(self) -> np.ndarray:
        if "fix" not in self._cache:
            X = self.elements
            self._cache["fix"] = (X == np.arange(self.degree, dtype=X.dtype)).sum(axis=1)
        return self._cache["fix"]

    def power_index(self, k: int) -> np.ndarray:
        """Index of x^k for every element x."""
        key = ("pow", k)
        if key not in self._cache:
            X = self.elements
            Y = np.broadcast_to(np.arange(self.degree, dtype=X.dtype), X.shape).copy()
            base, e = X, k
            while e:
                if e & 1:
                    Y = compose_rows(Y, base)
                base = compose_rows(base, base)
                e >>= 1
            self._cache[key] = self.index(Y)
        return self._cache[key]

    def conj_by(self, g: int | np.ndarray) -> np.ndarray:
        """Index of g^-1 x g for every element x (g an index or a row)."""
        g_row = self.elements[g] if np.isscalar(g) else np.asarray(g)
        g_inv = invert_rows(g_row)
        rows = g_row[self.elements[:, g_inv]]
        return self.index(rows)

    def conj_all(self, i: int) -> np.ndarray:
        """Index of g^-1 x_i g for every g, in canonical order of g."""
        X = self.elements
        a = X[int(i)]
        inner = a[X[self.inverse_index]]
        return self.index(compose_rows(inner, X))

    def mul(self, i: int, j: int) -> int:
        X = self.elements
        return int(self.index(X[j][X[i]]))

    def gen_indices(self) -> list[int]:
        return [self.index_of(g) for g in self.gens]

    # -- conjugacy classes ----------------------------------------------------
    @property
    def classes(self) -> ClassTable:
        if "classes" not in self._cache:
            self._cache["classes"] = self._compute_classes()
        return self._cache["classes"]

    def conj_maps(self) -> list[np.ndarray]:
        if "cmaps" not in self._cache:
            self._cache["cmaps"] = [self.conj_by(np.array(g.images, dtype=self.elements.dtype)) for g in self.gens]
        return self._cache["cmaps"]

    def _compute_classes(self) -> ClassTable:
        N = self.order
        maps = self.conj_maps()
        if maps:
            src = np.tile(np.arange(N, dtype=np.int32), len(maps))
            dst = np.concatenate(maps).astype(np.int32)
            graph = coo_matrix((np.ones(src.shape[0], dtype=np.int32), (src, dst)), shape=(N, N)).tocsr()
            _, labels = connected_components(graph, directed=True, connection="weak")
        else:
            labels = np.zeros(N, dtype=np.int64)
        # canonical numbering: classes ordered by their least element index
        first = np.full(labels.max() + 1, N, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(N))
        rank = np.empty_like(first)
        rank[np.argsort(first)] = np.arange(first.shape[0])
        class_of = rank[labels]
        reps = np.sort(first)
        sizes = np.bincount(class_of)
        return ClassTable(class_of=class_of, reps=reps, sizes=sizes, orders=self.element_orders[reps])

    # -- subgroups ------------------------------------------------------------
    def subgroup(self, gen_idx, allowed: np.ndarray | None = None) -> "Subgroup | None":
        idx = closure_indices(self, gen_idx, allowed)
        if idx is None:
            return None
        return Subgroup(self, idx, tuple(int(i) for i in gen_idx))

    def subgroup_from_perms(self, perms) -> "Subgroup":
        return self.subgroup([self.index_of(p) for p in perms])

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), tuple(self.gen_indices()))

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        size = self.order if (self._elems is not None or self._declared_order) else "?"
        return f"<{label} degree={self.degree} order={size}>"


def closure_indices(G: PermGroup, gen_idx, allowed: np.ndarray | None = None) -> np.ndarray | None:
    """Sorted element indices of the subgroup generated inside G.

    With ``allowed`` given, returns None as soon as an element outside the
    mask appears.
    """
    X = G.elements
    N = X.shape[0]
    gen_idx = [int(i) for i in gen_idx]
    if allowed is not None and not all(allowed[i] for i in gen_idx):
        return None
    gens = [X[i] for i in dict.fromkeys(gen_idx) if i != 0]
    mask = np.zeros(N, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    while frontier.shape[0] and gens:
        rows = X[frontier]
        cand = np.unique(np.concatenate([G.index(g[rows]) for g in gens]))
        cand = cand[~mask[cand]]
        if allowed is not None and not allowed[cand].all():
            return None
        mask[cand] = True
        frontier = cand
    return np.flatnonzero(mask)


@dataclass(eq=False)
class Subgroup:
    """Subgroup of an enumerated group, held as sorted element indices."""

    group: PermGroup
    idx: np.ndarray
    gens: tuple[int, ...] = ()
    _mask: np.ndarray | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return int(self.idx.shape[0])

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.group.order, dtype=bool)
            m[self.idx] = True
            self._mask = m
        return self._mask

    @property
    def rows(self) -> np.ndarray:
        return self.group.elements[self.idx]

    def small_gens(self) -> tuple[int, ...]:
        if self.gens:
            return self.gens
        self.gens = generating_set(self.group, self.idx)
        return self.gens

    def perms(self) -> list[Perm]:
        return [self.group.perm(i) for i in self.small_gens()]

    def as_group(self, name: str | None = None) -> PermGroup:
        H = PermGroup(self.group.degree, self.perms(), name=name)
        H.enumerate()
        return H

    def class_ids(self) -> np.ndarray:
        return np.unique(self.group.classes.class_of[self.idx])

    def conjugate(self, g: int) -> "Subgroup":
        G = self.group
        cmap = G.conj_by(g)
        return Subgroup(G, np.sort(cmap[self.idx]), tuple(int(cmap[s]) for s in self.small_gens()))

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return bool(self.mask[other.idx].all())

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.group!r}>"


def generating_set(G: PermGroup, idx: np.ndarray) -> tuple[int, ...]:
    """A small generating set for the subgroup with element indices idx.

    Greedy: repeatedly add the element of largest order outside the current
    closure (ties broken by canonical index).
    """
    idx = np.asarray(idx)
    target = idx.shape[0]
    orders = G.element_orders[idx]
    ranked = idx[np.lexsort((idx, -orders))]
    gens: list[int] = []
    cur = np.zeros(G.order, dtype=bool)
    cur[0] = True
    size = 1
    while size < target:
        x = int(next(i for i in ranked if not cur[i]))
        gens.append(x)
        members = closure_indices(G, gens)
        cur[:] = False
        cur[members] = True
        size = members.shape[0]
    return tuple(gens)


# ------------------------------------------------------- basic operations

def group_from_generators(degree: int, gens, bound: int | None = None, name: str | None = None) -> PermGroup:
    return PermGroup(degree, gens, name=name).enumerate(bound)


def conjugacy_classes(G: PermGroup) -> ClassTable:
    return G.classes


def is_conjugate(G: PermGroup, x, y) -> tuple[bool, Perm | None]:
    """Decide x ~ y in G; on success also return g with g^-1 x g = y.

    The witness comes from a breadth-first search over conjugation by the
    generators, with parent pointers.
    """
    xi, yi = G.index_of(x), G.index_of(y)
    cls = G.classes.class_of
    if cls[xi] != cls[yi]:
        return False, None
    maps = G.conj_maps()
    parent = {xi: None}
    frontier = [xi]
    while yi not in parent:
        nxt = []
        for v in frontier:
            for k, m in enumerate(maps):
                w = int(m[v])
                if w not in parent:
                    parent[w] = (v, k)
                    nxt.append(w)
        frontier = nxt
    word = []
    v = yi
    while parent[v] is not None:
        v, k = parent[v]
        word.append(k)
    g = Perm.identity(G.degree)
    for k in reversed(word):
        g = g * G.gens[k]
    return True, g


def normalizer(G: PermGroup, S: Subgroup) -> Subgroup:
    ok = np.ones(G.order, dtype=bool)
    for s in S.small_gens():
        # g normalises S iff g^-1 s g lies in S for every generator s
        ok &= S.mask[G.conj_all(s)]
    return Subgroup(G, np.flatnonzero(ok))


def centralizer(G: PermGroup, x) -> Subgroup:
    xi = x if isinstance(x, (int, np.integer)) else G.index_of(x)
    return Subgroup(G, np.flatnonzero(G.conj_all(int(xi)) == xi))


def subgroups_conjugate(G: PermGroup, A: Subgroup, B: Subgroup) -> int | None:
    """Index of some g with A^g = B, or None."""
    if A.order != B.order:
        return None
    ok = np.ones(G.order, dtype=bool)
    for a in A.small_gens():
        ok &= B.mask[G.conj_all(a)]
        if not ok.any():
            return None
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.shape[0] else None


def conjugate_into(G: PermGroup, K: Subgroup, H: Subgroup) -> int | None:
    """Index of some g with K^g <= H, or None."""
    if H.order % K.order:
        return None
    ok = np.ones(G.order, dtype=bool)
    for k in K.small_gens():
        ok &= H.mask[G.conj_all(k)]
        if not ok.any():
            return None
    return int(np.flatnonzero(ok)[0])


def spectrum(G: PermGroup | Subgroup) -> set[int]:
    if isinstance(G, Subgroup):
        return set(int(o) for o in np.unique(G.group.element_orders[G.idx]))
    return set(int(o) for o in np.unique(G.element_orders))


def prime_set(order: int) -> set[int]:
    out, d = set(), 2
    while d * d <= order:
        while order % d == 0:
            out.add(d)
            order //= d
        d += 1
    if order > 1:
        out.add(order)
    return out


def orbits(degree: int, gens) -> list[list[int]]:
    parent = list(range(degree))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        img = g.images if isinstance(g, Perm) else g
        for i, j in enumerate(img):
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(degree):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def is_transitive(degree: int, gens) -> bool:
    return len(orbits(degree, gens)) == 1


def minimal_block(degree: int, gens, a: int, b: int) -> list[int]:
    """Smallest block of imprimitivity containing a and b.

    Atkinson's closure, done in bulk: join a and b, then repeatedly join
    g(x) with g(root(x)) for every point x and generator g until the
    partition stops changing.  Assumes the group is transitive.
    """
    imgs = np.array([np.asarray(g.images if isinstance(g, Perm) else g) for g in gens], dtype=np.int64)
    src = np.array([a], dtype=np.int64)
    dst = np.array([b], dtype=np.int64)
    count = degree
    while True:
        graph = coo_matrix((np.ones(src.shape[0], dtype=np.int32), (src, dst)), shape=(degree, degree))
        n, lab = connected_components(graph, directed=False)
        if n == count:
            break
        if 2 * int((lab == lab[a]).sum()) > degree:
            # block sizes divide the degree
            return list(range(degree))
        count = n
        # canonical root of each class: its smallest point
        root = np.full(n, degree, dtype=np.int64)
        np.minimum.at(root, lab, np.arange(degree))
        r = root[lab]
        moved = r != np.arange(degree)
        src = np.concatenate([src] + [img[moved] for img in imgs])
        dst = np.concatenate([dst] + [img[r[moved]] for img in imgs])
    return np.flatnonzero(lab == lab[a]).tolist()


def is_primitive(degree: int, gens, stab_gens=None) -> bool:
    """Primitivity test; ``stab_gens`` (generators of the stabiliser of 0)
    lets it try one point per suborbit instead of every point."""
    if not is_transitive(degree, gens):
        return False
    if stab_gens is None:
        reps = range(1, degree)
    else:
        reps = [orb[0] for orb in orbits(degree, stab_gens) if orb[0] != 0]
    return all(len(minimal_block(degree, gens, 0, b)) == degree for b in reps)


# ---------------------------------------------------------- coset actions

@dataclass
class CosetAction:
    group: PermGroup  # the image group on [G:H]
    labels: np.ndarray  # element index of G -> coset number
    reps: np.ndarray  # coset number -> representative element index
    source: PermGroup

    def image_of(self, i: int) -> np.ndarray:
        """Permutation of the cosets induced by element i of the source group."""
        G = self.source
        X = G.elements
        prods = G.index(X[int(i)][X[self.reps]])
        return self.labels[prods]


def coset_action(G: PermGroup, H: Subgroup, bound: int = 20_000) -> CosetAction:
    """Right-multiplication action of G on the right cosets Hx."""
    if H.group is not G:
        raise ValueError("H must be a subgroup handle of G")
    if closure_indices(G, H.small_gens()).shape[0] != H.order:
        raise ValueError("H is not a subgroup")
    N = G.order
    m = N // H.order
    if m > bound:
        raise TooLargeError(f"index {m} exceeds coset bound {bound}", m)
    X = G.elements
    Hrows = H.rows
    labels = np.full(N, -1, dtype=np.int64)
    reps = []
    c = 0
    for x in range(N):
        if labels[x] >= 0:
            continue
        coset = G.index(X[x][Hrows])
        labels[coset] = c
        reps.append(x)
        c += 1
    reps = np.array(reps)
    images = []
    for g in G.gens:
        row = np.array(g.images, dtype=X.dtype)
        images.append(labels[G.index(row[X[reps]])])
    img_group = PermGroup(m, [Perm(r) for r in images])
    return CosetAction(group=img_group, labels=labels, reps=reps, source=G)


# ------------------------------------------------------------- statistics

@dataclass
class ActionView:
    """Fixed-point data for G acting on some set.

    ``fix`` gives the number of fixed points of every element of ``group``
    (indexed like ``group.elements``); ``point_count`` is the size of the set.
    """

    group: PermGroup
    point_count: int
    fix: np.ndarray

    @classmethod
    def natural(cls, G: PermGroup) -> "ActionView":
        return cls(G, G.degree, G.fixed_counts)

    @classmethod
    def on_cosets(cls, G: PermGroup, H: Subgroup) -> "ActionView":
        """Fixed points on [G:H] from the class formula |x^G n H| |G:H| / |x^G|."""
        ct = G.classes
        meet = np.bincount(ct.class_of[H.idx], minlength=ct.count)
        index = G.order // H.order
        per_class = meet * index // ct.sizes
        return cls(G, index, per_class[ct.class_of])


def action_stats(view: ActionView, x) -> tuple[int, float]:
    G = view.group
    i = x if isinstance(x, (int, np.integer)) else G.index_of(x)
    fix = int(view.fix[int(i)])
    return fix, fix / view.point_count


def minimal_degree(view: ActionView) -> int:
    if view.group.order <= 1:
        raise ValueError("minimal degree of the trivial group is undefined")
    return int(view.point_count - view.fix[1:].max())


# ------------------------------------------------------ subgroup lattice

@dataclass(eq=False)
class SubgroupClass:
    rep: Subgroup
    class_hist: tuple[int, ...]
    normalizer_order: int
    maximal: bool = True  # no proper supergroup inside the family

    @property
    def order(self) -> int:
        return self.rep.order

    @property
    def length(self) -> int:
        return self.rep.group.order // self.normalizer_order


def _is_prime_power(n: int) -> bool:
    return n > 1 and len(prime_set(n)) == 1


def _cyclic_canon(G: PermGroup) -> np.ndarray:
    """For each element, the least index among generators of the same cyclic subgroup."""
    if "cyc" in G._cache:
        return G._cache["cyc"]
    orders = G.element_orders
    canon = np.arange(G.order)
    for k in range(2, int(orders.max())):
        sel = (orders > k) & (np.gcd(orders, k) == 1)
        if sel.any():
            pk = G.power_index(k)
            canon = np.where(sel, np.minimum(canon, pk), canon)
    G._cache["cyc"] = canon
    return canon


def _orbit_reps(G: PermGroup, Nsub: Subgroup, cand: np.ndarray, canon: np.ndarray) -> np.ndarray:
    """Representatives of the N-conjugation orbits on the cyclic subgroups in cand."""
    if cand.shape[0] == 0:
        return cand
    if Nsub.order == G.order:
        cls = G.classes.class_of
        # cyclic subgroups with conjugate generators are conjugate
        _, first = np.unique(cls[cand], return_index=True)
        return np.sort(cand[first])
    src, dst = [], []
    for n in Nsub.small_gens():
        img = canon[G.conj_by(int(n))[cand]]
        local = np.searchsorted(cand, img)
        src.append(np.arange(cand.shape[0]))
        dst.append(local)
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.shape[0], dtype=np.int32), (src, dst)), shape=(cand.shape[0],) * 2).tocsr()
    _, lab = connected_components(graph, directed=True, connection="weak")
    _, first = np.unique(lab, return_index=True)
    return np.sort(cand[first])


def subgroup_lattice(
    G: PermGroup,
    allowed: np.ndarray | None = None,
    bound: int = SUBGROUP_BOUND,
    progress=None,
) -> list[SubgroupClass]:
    """Conjugacy classes of subgroups of G all of whose elements lie in ``allowed``.

    ``allowed`` must be closed under conjugation (a union of classes); the
    default is all of G.  Subgroups are built by layered joins of known
    classes with cyclic subgroups of prime-power order, up to conjugacy by
    the normaliser at each step, so the result is complete.  ``maximal``
    marks classes with no proper supergroup inside the family.
    """
    if G.order > bound:
        raise TooLargeError(f"|G| = {G.order} exceeds the subgroup-search bound {bound}", G.order)
    N = G.order
    if allowed is None:
        allowed = np.ones(N, dtype=bool)
    ct = G.classes
    orders = G.element_orders
    canon = _cyclic_canon(G)
    ppmask = np.array([_is_prime_power(int(o)) for o in range(orders.max() + 1)])[orders]
    base_cand = np.flatnonzero(allowed & ppmask & (canon == np.arange(N)))

    def hist(sub: Subgroup) -> tuple[int, ...]:
        return tuple(np.bincount(ct.class_of[sub.idx], minlength=ct.count).tolist())

    trivial = Subgroup(G, np.array([0]), ())
    found: list[SubgroupClass] = [SubgroupClass(trivial, hist(trivial), N)]
    by_key: dict[tuple, list[int]] = {(1, found[0].class_hist): [0]}
    head = 0
    while head < len(found):
        entry = found[head]
        S = entry.rep
        Nsub = normalizer(G, S) if S.order > 1 else Subgroup(G, np.arange(N), tuple(G.gen_indices()))
        entry.normalizer_order = Nsub.order
        cand = base_cand[~S.mask[base_cand]]
        reps = _orbit_reps(G, Nsub, cand, canon)
        X = G.elements
        Srows = S.rows
        for x in reps:
            x = int(x)
            # cheap necessary condition: the coset S*x lies in the family
            if not allowed[G.index(X[x][Srows])].all():
                continue
            T = G.subgroup(list(S.small_gens()) + [x], allowed)
            if T is None:
                continue
            entry.maximal = False
            key_h = hist(T)
            key = (T.order, key_h)
            dup = False
            for j in by_key.get(key, []):
                if subgroups_conjugate(G, T, found[j].rep) is not None:
                    dup = True
                    break
            if not dup:
                T.gens = generating_set(G, T.idx) if len(T.gens) > 3 else T.gens
                by_key.setdefault(key, []).append(len(found))
                found.append(SubgroupClass(T, key_h, 0))
                if progress:
                    progress(len(found), T.order)
        head += 1
    found.sort(key=lambda c: (c.order, c.class_hist))
    return found


def subgroups_up_to_conjugacy(G: PermGroup, min_order: int = 1, bound: int = SUBGROUP_BOUND) -> list[Subgroup]:
    return [c.rep for c in subgroup_lattice(G, bound=bound) if c.order >= min_order]
