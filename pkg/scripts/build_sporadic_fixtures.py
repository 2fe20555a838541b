"""Write data/groups/*.grp: small sporadic groups and the subgroups used by the sporadic checks.

Constructions:

* M24 on the projective line over GF(23) from t+1, 2t, -1/t and the map
  t -> t^3/9 on squares, 9 t^3 on non-squares (fixing 0 and infinity); the
  last map is accepted only after checking it preserves the Golay code
  spanned by the PSL_2(23)-images of the non-squares plus infinity.
  M23 is generated by the three generators that fix infinity, M22 is the
  stabiliser of 0 in M23.
* M12 on the projective line over GF(11) in the same way (t -> t^3/3 on
  squares, 3 t^3 on non-squares); M11 is the stabiliser of infinity.
* J1 from two 7x7 matrices over GF(11), acting on the 266 cosets of a
  PSL_2(11) found by a (2,3,11) search.

Every group and subgroup is written with its order and re-read through
groupio before the script finishes.  Runtime is a few minutes (M23 is
enumerated in full).

    python scripts/build_sporadic_fixtures.py [outdir]
"""

from __future__ import annotations

import os
import random
import sys
import time
from pathlib import Path

import numpy as np

from fixerlab.groupio import GroupFile, load_group_file, serialize_group, subgroup_files, subgroup_lookup
from fixerlab.permcore import Perm, PermGroup, Subgroup, centralizer, normalizer

ROOT = Path(__file__).resolve().parents[1]


# ------------------------------------------------------------ helpers

def qr(p: int) -> set[int]:
    return {x * x % p for x in range(1, p)}


def line_perm(p: int, fn) -> Perm:
    """Permutation of GF(p) u {inf}, with inf stored as p."""
    return Perm([fn(x) for x in range(p + 1)])


def cube_map(p: int, c: int) -> Perm:
    Q = qr(p)
    cinv = pow(c, p - 2, p)

    def f(x):
        if x in (0, p):
            return x
        return pow(x, 3, p) * cinv % p if x in Q else c * pow(x, 3, p) % p

    return line_perm(p, f)


def psl2_line(p: int, b: int) -> list[Perm]:
    inv = lambda x: pow(x, p - 2, p)
    return [
        line_perm(p, lambda x: p if x == p else (x + 1) % p),
        line_perm(p, lambda x: p if x == p else b * x % p),
        line_perm(p, lambda x: 0 if x == p else (p if x == 0 else -inv(x) % p)),
    ]


def restrict(perms: list[Perm], points: list[int]) -> list[Perm]:
    pos = {a: i for i, a in enumerate(points)}
    return [Perm([pos[g.images[a]] for a in points]) for g in perms]


def set_stabiliser(G: PermGroup, pts) -> Subgroup:
    pts = np.array(sorted(pts))
    X = G.elements
    ok = np.ones(G.order, dtype=bool)
    inside = np.zeros(G.degree, dtype=bool)
    inside[pts] = True
    for s in range(0, G.order, 1 << 20):
        ok[s : s + (1 << 20)] = inside[X[s : s + (1 << 20)][:, pts]].all(axis=1)
    return Subgroup(G, np.flatnonzero(ok))


def golay_words(p: int, gens: list[Perm]) -> set[int]:
    seed = frozenset((set(range(1, p)) - qr(p)) | {p})
    seen, frontier = {seed}, [seed]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = frozenset(g.images[a] for a in s)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    basis: list[int] = []
    for s in seen:
        v = sum(1 << a for a in s)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    words = {0}
    for b in basis:
        words |= {w ^ b for w in words}
    return words


def preserves(g: Perm, words: set[int]) -> bool:
    n = len(g.images)
    return all(sum(1 << g.images[a] for a in range(n) if w >> a & 1) in words for w in words)


# ------------------------------------------------------------ writers

class Writer:
    def __init__(self, outdir: Path):
        self.outdir = outdir
        outdir.mkdir(parents=True, exist_ok=True)

    def group(self, name: str, G: PermGroup, gens: list[Perm]) -> None:
        text = serialize_group(GroupFile(G.degree, gens, name, G.order))
        (self.outdir / f"{name}.grp").write_text(text)
        print(f"{name}: degree {G.degree} order {G.order}")

    def sub(self, group: str, name: str, S: Subgroup) -> None:
        d = self.outdir / group
        d.mkdir(exist_ok=True)
        slug = name.replace("'", "b").replace("/", "_")
        text = serialize_group(GroupFile(S.group.degree, S.perms(), name, S.order))
        (d / f"{slug}.grp").write_text(text)
        print(f"  {group} > {name}: order {S.order}")


def check_orders(S: Subgroup, expected: int, what: str) -> None:
    if S.order != expected:
        raise SystemExit(f"{what}: order {S.order}, expected {expected}")


# ------------------------------------------------------------ builders

def build_m12_m11(w: Writer) -> None:
    p = 11
    gens = psl2_line(p, 3) + [cube_map(p, 3)]
    G = PermGroup(12, gens, name="M12").enumerate(100_000)
    check_orders(G.whole, 95040, "M12")
    w.group("M12", G, gens)
    w.sub("M12", "PSL2(11)", G.subgroup_from_perms(gens[:3]))
    M11 = set_stabiliser(G, [p])
    check_orders(M11, 7920, "M12 point stabiliser")
    w.sub("M12", "M11", M11)
    pair = set_stabiliser(G, [0, p])
    check_orders(pair, 1440, "M12 pair stabiliser")
    w.sub("M12", "M10.2", pair)

    g11 = restrict(M11.perms(), list(range(11)))
    H = PermGroup(11, g11, name="M11").enumerate()
    check_orders(H.whole, 7920, "M11")
    w.group("M11", H, g11)
    inv = int(np.flatnonzero(H.element_orders == 2)[0])
    w.sub("M11", "GL2(3)", _checked(centralizer(H, inv), 48, "M11 involution centraliser"))
    w.sub("M11", "M9.2", _checked(set_stabiliser(H, [0, 1]), 144, "M11 pair stabiliser"))
    w.sub("M11", "M10", _checked(set_stabiliser(H, [0]), 720, "M11 point stabiliser"))
    psl = next(
        S
        for S in (H.subgroup([a, b]) for a in _some(H, 2, 40) for b in _some(H, 3, 40))
        if S.order == 660
    )
    w.sub("M11", "PSL2(11)", psl)


def _checked(S: Subgroup, order: int, what: str) -> Subgroup:
    check_orders(S, order, what)
    return S


def _some(G: PermGroup, order: int, k: int) -> list[int]:
    cand = np.flatnonzero(G.element_orders == order)
    rng = random.Random(order)
    return [int(cand[rng.randrange(cand.shape[0])]) for _ in range(k)]


def build_m23_m22(w: Writer) -> None:
    p = 23
    line = psl2_line(p, 2)
    words = golay_words(p, line)
    delta = cube_map(p, 9)
    if not preserves(delta, words):
        raise SystemExit("cube map does not preserve the Golay code")
    octads = [w_ for w_ in words if bin(w_).count("1") == 8]
    pts = lambda m: [a for a in range(p + 1) if m >> a & 1]

    gens = restrict([line[0], line[1], delta], list(range(p)))
    t0 = time.perf_counter()
    G = PermGroup(23, gens, name="M23").enumerate(11_000_000)
    check_orders(G.whole, 10200960, "M23")
    print(f"  (M23 enumerated in {time.perf_counter() - t0:.0f}s)")
    w.group("M23", G, gens)
    w.sub("M23", "PSigmaL3(4)", _checked(set_stabiliser(G, [0, 1]), 40320, "M23 pair stabiliser"))
    heptad = next(pts(o) for o in octads if o >> p & 1)
    heptad = [a for a in heptad if a != p]
    w.sub("M23", "2^4.A7", _checked(set_stabiliser(G, heptad), 40320, "M23 heptad stabiliser"))

    M22 = set_stabiliser(G, [0])
    check_orders(M22, 443520, "M22")
    rest = list(range(1, p))
    g22 = restrict(M22.perms(), rest)
    del G, M22
    H = PermGroup(22, g22, name="M22").enumerate()
    check_orders(H.whole, 443520, "M22")
    w.group("M22", H, g22)
    pos = {a: i for i, a in enumerate(rest)}
    hexad = next(pts(o) for o in octads if o >> p & 1 and o & 1)
    hexad = [pos[a] for a in hexad if a not in (0, p)]
    w.sub("M22", "2^4.A6", _checked(set_stabiliser(H, hexad), 5760, "M22 hexad stabiliser"))
    w.sub("M22", "2^4.S5", _checked(set_stabiliser(H, [0, 1]), 1920, "M22 pair stabiliser"))
    hept_a = [pos[a] for a in next(pts(o) for o in octads if o >> p & 1 and not o & 1) if a != p]
    hept_b = [pos[a] for a in next(pts(o) for o in octads if o & 1 and not o >> p & 1) if a != 0]
    w.sub("M22", "A7", _checked(set_stabiliser(H, hept_a), 2520, "M22 heptad stabiliser"))
    w.sub("M22", "A7'", _checked(set_stabiliser(H, hept_b), 2520, "M22 second heptad stabiliser"))
    w.sub("M22", "PSL3(4)", _checked(set_stabiliser(H, [0]), 20160, "M22 point stabiliser"))


JANKO_Z = [
    [-3, 2, -1, -1, -3, -1, -3],
    [-2, 1, 1, 3, 1, 3, 3],
    [-1, -1, -3, -1, -3, -3, 2],
    [-1, -3, -1, -3, -3, 2, -1],
    [-3, -1, -3, -3, 2, -1, -1],
    [1, 3, 3, -2, 1, 1, 3],
    [3, 3, -2, 1, 1, 3, 1],
]


def _matrix_closure(gens, p: int, bound: int) -> dict[bytes, np.ndarray] | None:
    key = lambda M: M.astype(np.uint8).tobytes()
    ident = np.eye(gens[0].shape[0], dtype=np.int64)
    seen = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for g in gens:
                N = M @ g % p
                k = key(N)
                if k not in seen:
                    seen[k] = N
                    nxt.append(N)
                    if len(seen) > bound:
                        return None
        frontier = nxt
    return seen


def _matrix_order(M: np.ndarray, p: int) -> int:
    ident = np.eye(M.shape[0], dtype=np.int64)
    X, k = M.copy(), 1
    while not (X == ident).all():
        X = X @ M % p
        k += 1
    return k


def build_j1(w: Writer) -> None:
    p = 11
    Y = np.roll(np.eye(7, dtype=np.int64), 1, axis=1)
    Z = np.array(JANKO_Z, dtype=np.int64) % p
    elems = _matrix_closure([Y, Z], p, 200_000)
    if elems is None or len(elems) != 175560:
        raise SystemExit("matrix generators do not give a group of order 175560")
    key = lambda M: M.astype(np.uint8).tobytes()
    index = {k: i for i, k in enumerate(elems)}
    mats = list(elems.values())
    rng = random.Random(1)
    sample = [mats[rng.randrange(len(mats))] for _ in range(4000)]
    invols = [M for M in sample if _matrix_order(M, p) == 2][:5]
    threes = [M for M in sample if _matrix_order(M, p) == 3]
    H = None
    for x in invols:
        for y in threes:
            if _matrix_order(x @ y % p, p) == 11:
                S = _matrix_closure([x, y], p, 700)
                if S is not None and len(S) == 660:
                    H = np.array(list(S.values()))
                    break
        if H is not None:
            break
    if H is None:
        raise SystemExit("no PSL2(11) found")

    def label(M):
        return min(index[key(m)] for m in np.einsum("hij,jk->hik", H, M) % p)

    ident = np.eye(7, dtype=np.int64)
    cosets = {label(ident): 0}
    frontier = [ident]
    images = [dict(), dict()]
    while frontier:
        nxt = []
        for M in frontier:
            c = cosets[label(M)]
            for gi, g in enumerate((Y, Z)):
                N = M @ g % p
                lab = label(N)
                if lab not in cosets:
                    cosets[lab] = len(cosets)
                    nxt.append(N)
                images[gi][c] = cosets[lab]
        frontier = nxt
    if len(cosets) != 266:
        raise SystemExit(f"expected 266 cosets, got {len(cosets)}")
    gens = [Perm([im[c] for c in range(266)]) for im in images]
    G = PermGroup(266, gens, name="J1").enumerate()
    check_orders(G.whole, 175560, "J1")
    w.group("J1", G, gens)
    w.sub("J1", "PSL2(11)", _checked(set_stabiliser(G, [0]), 660, "J1 point stabiliser"))
    ords = G.element_orders
    t = int(np.flatnonzero(ords == 2)[0])
    C = _checked(centralizer(G, t), 120, "J1 involution centraliser")
    w.sub("J1", "2xA5", C)
    x15 = int(np.flatnonzero(ords == 15)[0])
    w.sub("J1", "D6xD10", _checked(normalizer(G, G.subgroup([x15])), 60, "J1 N(C15)"))
    x7 = int(np.flatnonzero(ords == 7)[0])
    w.sub("J1", "7.6", _checked(normalizer(G, G.subgroup([x7])), 42, "J1 N(C7)"))
    # a Sylow 2-subgroup is <t> x V with V a Klein four-group of C(t)
    invs = [int(i) for i in C.idx if ords[i] == 2 and i != t]
    E = next(S for S in (G.subgroup([t, a, b]) for a in invs for b in invs) if S.order == 8)
    w.sub("J1", "2^3.7.3", _checked(normalizer(G, E), 168, "J1 N(2^3)"))


def verify(outdir: Path) -> None:
    """Re-read everything through groupio: closure orders and subgroup containment."""
    os.environ["FIXERLAB_DATA"] = str(outdir.parent)
    for f in sorted(outdir.glob("*.grp")):
        G = load_group_file(f)
        for name in subgroup_files(f.stem):
            subgroup_lookup(G, f.stem, name)
        print(f"verified {f.stem}")


def main(argv: list[str]) -> None:
    outdir = Path(argv[1]) if len(argv) > 1 else ROOT / "src" / "fixerlab" / "data" / "groups"
    w = Writer(outdir)
    build_m12_m11(w)
    build_j1(w)
    build_m23_m22(w)
    verify(outdir)


if __name__ == "__main__":
    main(sys.argv)
