"""Write data/psl2_large_fixers.json: expected maximal large fixers for small q.

For every G with socle PSL_2(q) and every class of core-free maximal
subgroups H (as produced by psl2.maximal_subgroups), the expected value is
the set of isomorphism labels of L n G0 over the maximal non-stable fixers
L with |L| >= |H|.  The labels come from the row conditions below, evaluated
by hand from (q, G, type of H); no fixer computation is used here.

Two small-q readings are applied:
  * q = 4: the SL_2(q^(1/2)) row gives S3 = H itself, which is stable, so it
    contributes nothing.
  * q = 5: PSL_2(5) = PSL_2(4) and PGL_2(5) = PGammaL_2(4); the rows of both
    readings are combined, matching types through the isomorphism.

Usage: python scripts/build_psl2_fixture.py [--out PATH] [q ...]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from fixerlab.ffield import prime_power
from fixerlab.psl2 import all_outer_subgroups, build_group, maximal_subgroups

QS = (4, 5, 7, 8, 9, 11, 13, 16, 19, 23, 25, 27, 29, 31)
DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "fixerlab" / "data" / "psl2_large_fixers.json"

# q = 5 type  ->  the same subgroup read inside PSL_2(4)
Q5_AS_Q4 = {"P1": "GL1(q^2)", "GL1(q^2)": "GL1(q)wrS2", "2^(1+2).O2-(2)": "P1"}


def _semidirect(p: int, a: int, m: int) -> str:
    if (p, a, m) == (2, 2, 3):
        return "A4"
    return f"C{p}^{a}" if m == 1 else f"C{p}^{a}:C{m}"


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def expected_labels(q: int, spec, htype: str, q0: int | None) -> set[str]:
    """Labels of L n G0 for the rows that apply to (G, type of H)."""
    p, f = prime_power(q)
    out_order = len(spec.out_elements)
    is_socle = out_order == 1
    name = spec.name
    only_field = all(d == 0 for d, _ in spec.out_elements)  # G <= PSigmaL_2(q)
    labels: set[str] = set()
    if htype == "GL2(q0)":
        f0 = prime_power(q0)[1]
        r = f // f0
        two = 2 if q % 2 else 1
        if r % 2 == 1 and r != p and _is_prime(r):
            labels.add(_semidirect(p, f, (q0 - 1) // two))
        if r == p and p != 2 and q != 27:
            labels.add(_semidirect(p, f, (q0 - 1) // 2))
        if r == p and p > 3:
            labels.add(_semidirect(p, f - f // p, (q0 - 1) // 2))
        if p == 2 and r == 2 and out_order % 2 == 1:
            labels.add(_semidirect(2, f, 2 ** (f // 2) + 1))
    elif htype == "GL1(q)wrS2":
        if p == 2:
            labels.add(_semidirect(2, f, q - 1))
            if f % 2 == 0 and q != 4:
                labels.add("A5" if q == 16 else f"SL2({2 ** (f // 2)})")
        if q == 13 or name == "PGL2(7)":
            labels.add("A4")
        if q == 25 and only_field:
            labels.add("S4")
        if q == 31 or (q in (16, 61) and is_socle):
            labels.add("A5")
    elif htype == "GL1(q^2)":
        if q == 11 or (q == 5 and is_socle):
            labels.add("A4")
        if q == 23 and is_socle:
            labels.add("S4")
        if q == 29 or (q == 59 and is_socle):
            labels.add("A5")
    elif htype == "2^(1+2).O2-(2)":
        if is_socle and f == 1 and q % 8 in (1, 7):
            labels.add("S4")
    elif htype == "A5":
        if is_socle and f == 1 and q % 10 in (1, 9):
            labels.add("A5")
        if is_socle and f == 2 and p != 3 and p % 10 in (3, 7):
            labels.add("A5")
    return labels


def build(qs=QS) -> list[dict]:
    rows = []
    for q in qs:
        specs = all_outer_subgroups(q)
        for spec in specs:
            S = build_group(spec)
            for k, m in enumerate(maximal_subgroups(S)):
                q0 = int(m.note.split("=")[1]) if m.note.startswith("q0=") else None
                labels = expected_labels(q, spec, m.type, q0)
                if q == 5:
                    # read the same group as PSL_2(4).O with O = 1 or <phi>
                    spec4 = next(s for s in all_outer_subgroups(4) if len(s.out_elements) == len(spec.out_elements))
                    labels |= expected_labels(4, spec4, Q5_AS_Q4[m.type], None)
                rows.append(
                    {
                        "q": q,
                        "group": S.name,
                        "outer": sorted(list(x) for x in spec.out_elements),
                        "order": S.order,
                        "class": k,
                        "H_type": m.type,
                        "H_order": m.order,
                        "q0": q0,
                        "expected": sorted(labels),
                    }
                )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    ap.add_argument("q", nargs="*", type=int)
    args = ap.parse_args()
    rows = build(tuple(args.q) or QS)
    args.out.write_text(json.dumps(rows, indent=1) + "\n")
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
