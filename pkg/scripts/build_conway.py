"""Regenerate src/fixerlab/data/conway.txt.

Conway polynomials are found by direct search: the first polynomial in
Conway's alternating-sign lexicographic order that is primitive and whose
root maps to a root of every smaller-degree Conway polynomial under the
norm-like power x -> x^((p^n-1)/(p^d-1)).

    python scripts/build_conway.py [--max-q 65536] [--out PATH]
"""

from __future__ import annotations

import argparse
import itertools
import time
from pathlib import Path

from fixerlab.ffield import _polymod, _polymulmod, _polypowmod, factor_int


def is_primitive(poly: list[int], p: int) -> bool:
    n = len(poly) - 1
    order = p**n - 1
    one = [1]
    if _polypowmod([0, 1], order, poly, p) != one:
        return False
    return all(_polypowmod([0, 1], order // r, poly, p) != one for r in factor_int(order))


def evaluate_at(cpoly: tuple[int, ...], y: list[int], mod: list[int], p: int) -> list[int]:
    acc: list[int] = []
    for c in reversed(cpoly):
        acc = _polymulmod(acc, y, mod, p) or [0]
        acc[0] += c
        acc = _polymod(acc, mod, p)
    return acc


def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fac = factor_int(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in fac):
            return g
    raise AssertionError


def conway(p: int, n: int, known: dict[tuple[int, int], tuple[int, ...]]) -> tuple[int, ...]:
    g = least_primitive_root(p)
    if n == 1:
        return ((-g) % p, 1)
    divs = [d for d in range(1, n) if n % d == 0]
    # the constant term is pinned by the norm: (-1)^n a_0 = g
    for head in itertools.product(range(p), repeat=n - 1):
        cseq = list(head) + [g]  # c_{n-1}, ..., c_0
        a = [0] * (n + 1)
        a[n] = 1
        for k, c in enumerate(cseq):
            i = n - 1 - k
            a[i] = ((-1) ** (n - i) * c) % p
        if not is_primitive(a, p):
            continue
        ok = True
        for d in divs:
            y = _polypowmod([0, 1], (p**n - 1) // (p**d - 1), a, p)
            if evaluate_at(known[(p, d)], y, a, p):
                ok = False
                break
        if ok:
            return tuple(a)
    raise AssertionError(f"no Conway polynomial found for {p}^{n}")


def primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-q", type=int, default=2**16)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/fixerlab/data/conway.txt")
    args = ap.parse_args()
    t0 = time.time()
    known: dict[tuple[int, int], tuple[int, ...]] = {}
    lines = ["# p f c_0 ... c_f  (Conway polynomials, coefficients lowest degree first)"]
    for p in primes_upto(args.max_q):
        n = 1
        while p**n <= args.max_q:
            known[(p, n)] = conway(p, n, known)
            lines.append(" ".join(map(str, (p, n) + known[(p, n)])))
            n += 1
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(known)} polynomials to {args.out} in {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
