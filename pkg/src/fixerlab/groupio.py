"""Permutation-group files, the named-group registry and report output.

File format (whitespace tolerant, ``#`` starts a comment)::

    degree 11
    name M11
    order 7920
    format images          # or: format cycles
    2 3 4 5 6 7 8 9 10 11 1
    ...

Header keys may come in any order but precede the body.  In ``images``
format every body line lists the 1-based images of 1..n.  In ``cycles``
format a line is a product of disjoint cycles such as ``(1,2,3)(4,5)``
and ``()`` is the identity.

Shipped groups live in ``data/groups/<name>.grp``; subgroups of a shipped
group live in ``data/groups/<name>/`` with their own name in the header.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .ffield import data_path
from .permcore import NotInGroupError, Perm, PermGroup, Subgroup, TooLargeError, row_dtype

HEADER_KEYS = ("degree", "name", "order", "format")
FORMATS = ("images", "cycles")


class GroupFileError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass
class GroupFile:
    degree: int
    gens: list[Perm] = field(default_factory=list)
    name: str | None = None
    order: int | None = None
    format: str = "images"


# ------------------------------------------------------------ parsing

_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_images(body: str, n: int, lineno: int) -> Perm:
    try:
        imgs = [int(t) for t in body.replace(",", " ").split()]
    except ValueError:
        raise GroupFileError(f"not an integer sequence: {body!r}", lineno) from None
    if len(imgs) != n:
        raise GroupFileError(f"expected {n} images, got {len(imgs)}", lineno)
    return _checked(imgs, n, lineno)


def _parse_cycles(body: str, n: int, lineno: int) -> Perm:
    compact = body.replace(" ", "")
    if _CYCLE.sub("", compact):
        raise GroupFileError(f"not a product of cycles: {body!r}", lineno)
    imgs = list(range(1, n + 1))
    seen: set[int] = set()
    for m in _CYCLE.finditer(compact):
        if not m.group(1):
            continue
        try:
            pts = [int(t) for t in m.group(1).split(",")]
        except ValueError:
            raise GroupFileError(f"bad cycle ({m.group(1)})", lineno) from None
        for a in pts:
            if not 1 <= a <= n:
                raise GroupFileError(f"point {a} out of range 1..{n}", lineno)
            if a in seen:
                raise GroupFileError(f"point {a} repeated", lineno)
            seen.add(a)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            imgs[a - 1] = b
    return _checked(imgs, n, lineno)


def _checked(imgs: list[int], n: int, lineno: int) -> Perm:
    bad = [a for a in imgs if not 1 <= a <= n]
    if bad:
        raise GroupFileError(f"image {bad[0]} out of range 1..{n}", lineno)
    if len(set(imgs)) != n:
        dup = next(a for a in imgs if imgs.count(a) > 1)
        raise GroupFileError(f"image {dup} repeated", lineno)
    return Perm(np.array([a - 1 for a in imgs]))


def parse_group_file(text: str) -> GroupFile:
    header: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key.lower() in HEADER_KEYS and not body:
            k = key.lower()
            if k in header:
                raise GroupFileError(f"duplicate header key {k!r}", lineno)
            header[k] = rest.strip()
            if k in ("degree", "order") and not re.fullmatch(r"\d+", header[k]):
                raise GroupFileError(f"{k} must be a positive integer", lineno)
            if k == "format" and header[k] not in FORMATS:
                raise GroupFileError(f"format must be one of {FORMATS}", lineno)
            continue
        if "degree" not in header:
            raise GroupFileError("missing 'degree' header before the first permutation", lineno)
        body.append((lineno, line))
    if "degree" not in header:
        raise GroupFileError("missing 'degree' header")
    n = int(header["degree"])
    if n < 1:
        raise GroupFileError("degree must be positive")
    fmt = header.get("format", "images")
    parse = _parse_images if fmt == "images" else _parse_cycles
    gens = [parse(b, n, ln) for ln, b in body]
    order = int(header["order"]) if "order" in header else None
    return GroupFile(n, gens, header.get("name"), order, fmt)


def _cycle_string(p: Perm) -> str:
    cyc = p.cycles()
    return "".join("(" + ",".join(str(a + 1) for a in c) + ")" for c in cyc) or "()"


def serialize_group(gf: GroupFile) -> str:
    lines = [f"degree {gf.degree}"]
    if gf.name is not None:
        lines.append(f"name {gf.name}")
    if gf.order is not None:
        lines.append(f"order {gf.order}")
    if gf.format != "images":
        lines.append(f"format {gf.format}")
    for g in gf.gens:
        if g.degree != gf.degree:
            raise GroupFileError(f"generator of degree {g.degree} in a degree {gf.degree} file")
        if gf.format == "cycles":
            lines.append(_cycle_string(g))
        else:
            lines.append(" ".join(str(int(a) + 1) for a in g.images))
    return "\n".join(lines) + "\n"


def group_from_file(gf: GroupFile, verify: bool = True) -> PermGroup:
    """Enumerate the group; with ``verify`` the closure must hit the declared order."""
    bound = None if gf.order is None else max(gf.order, 1)
    G = PermGroup(gf.degree, gf.gens, name=gf.name)
    try:
        G.enumerate(bound)
    except TooLargeError as exc:
        if gf.order is not None and verify:
            raise GroupFileError(f"closure of {gf.name or 'group'} exceeds declared order {gf.order}") from exc
        raise
    if verify and gf.order is not None and G.order != gf.order:
        raise GroupFileError(f"closure order {G.order} differs from declared order {gf.order}")
    return G


def load_group_file(path, verify: bool = True) -> PermGroup:
    return group_from_file(parse_group_file(Path(path).read_text()), verify)


# ------------------------------------------------------------ registry

_BUILTIN = {
    "A5": GroupFile(5, [Perm.from_cycles(5, [(0, 1, 2, 3, 4)]), Perm.from_cycles(5, [(0, 1, 2)])], "A5", 60),
}
_USER: dict[str, GroupFile] = {}


def groups_dir() -> Path:
    return data_path("groups")


def register(gf: GroupFile, name: str | None = None) -> None:
    name = name or gf.name
    if not name:
        raise ValueError("a registered group needs a name")
    _USER[name] = gf
    registry_lookup.cache_clear()


def registry_names() -> list[str]:
    shipped = [p.stem for p in groups_dir().glob("*.grp")]
    return sorted(set(shipped) | set(_BUILTIN) | set(_USER))


def _group_file(name: str) -> GroupFile:
    if name in _USER:
        return _USER[name]
    if name in _BUILTIN:
        return _BUILTIN[name]
    path = groups_dir() / f"{name}.grp"
    if not path.exists():
        raise KeyError(f"unknown group {name!r}; known: {', '.join(registry_names())}")
    return parse_group_file(path.read_text())


@lru_cache(maxsize=8)
def registry_lookup(name: str) -> PermGroup:
    """The named group, enumerated, with its order checked against the file."""
    return group_from_file(_group_file(name))


def subgroup_files(name: str) -> dict[str, GroupFile]:
    d = groups_dir() / name
    out = {}
    for p in sorted(d.glob("*.grp")) if d.is_dir() else []:
        gf = parse_group_file(p.read_text())
        out[gf.name or p.stem] = gf
    return out


def subgroup_lookup(G: PermGroup, group_name: str, sub_name: str) -> Subgroup:
    """A shipped subgroup of a registry group, checked by containment and order."""
    files = subgroup_files(group_name)
    if sub_name not in files:
        raise KeyError(f"no subgroup {sub_name!r} of {group_name}; known: {', '.join(files)}")
    gf = files[sub_name]
    if gf.degree != G.degree:
        raise GroupFileError(f"{sub_name}: degree {gf.degree} does not match {group_name}")
    dt = row_dtype(G.degree)
    idx = []
    for g in gf.gens:
        try:
            idx.append(G.index_of(np.array(g.images, dtype=dt)))
        except NotInGroupError:
            raise GroupFileError(f"{sub_name}: a generator is not in {group_name}") from None
    S = G.subgroup(idx)
    if gf.order is not None and S.order != gf.order:
        raise GroupFileError(f"{sub_name}: closure order {S.order} differs from declared {gf.order}")
    return S


# ------------------------------------------------------------ reports

def report_json(report: dict) -> str:
    """Deterministic JSON: sorted keys, no floats outside the display block."""
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def text_table(rows: list[dict], columns: list[str]) -> str:
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*columns), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*row) for row in cells]
    return "\n".join(s.rstrip() for s in out) + "\n"
