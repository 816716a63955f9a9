"""Group-spec strings used by the command line.

    grigorchuk:fsa | grigorchuk:family[,omega=<omega-spec>]
    free:k=<int>   | freelike:m1=<int>,m2=<int>
    cyclic:q=<int> | table:<table-spec>
    lamplighter:q=<int>[,gens=standard|dl]
    wreath:H=<table-spec>,X=<int>,G=<perm-gens>
    permwreath:H=<table-spec>,omega=<omega-spec>,points=<p1;p2;...>[,preset=fsa|family]
    racg:n=<int>,edges=<i-j;...>

A table-spec is a product such as ``C2``, ``C5xC5``, ``S3`` or ``1``.
Perm-gens are cycles over 0..X-1 separated by ``;``, e.g. ``(0 1 2);(0 1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from .errors import SpecParseError
from .finite import (TableGroup, cycle, cyclic_group, direct_product, perm_mul, symmetric_group,
                     trivial_group)
from .growth import MarkedGroupBackend
from .schreier import RAY, OrbitPoint
from .selfsim import FIRST_GRIGORCHUK, OmegaSeq, grig_group


@dataclass
class ParsedGroup:
    spec: str
    kind: str
    backend: MarkedGroupBackend
    info: dict


def split_fields(body: str) -> dict[str, str]:
    """``k=v,k2=v2`` into a dict; values may not contain commas."""
    out: dict[str, str] = {}
    if not body:
        return out
    for part in body.split(","):
        if "=" not in part:
            raise SpecParseError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _int(fields: dict, key: str, default: int | None = None) -> int:
    if key not in fields:
        if default is None:
            raise SpecParseError(f"missing field {key!r}")
        return default
    try:
        return int(fields[key])
    except ValueError:
        raise SpecParseError(f"field {key!r} must be an integer") from None


def table_group(spec: str) -> tuple[TableGroup, list[int]]:
    """A finite group from a table-spec, with a symmetric generating set."""
    spec = spec.strip()
    if spec in ("1", "trivial", ""):
        return trivial_group(), []
    group: TableGroup | None = None
    gens: list[int] = []
    for tok in spec.split("x"):
        m = re.fullmatch(r"([CS])(\d+)", tok.strip())
        if not m:
            raise SpecParseError(f"cannot read table factor {tok!r}")
        kind, n = m.group(1), int(m.group(2))
        if n < 1 or n > 5000 or (kind == "S" and n > 6):
            raise SpecParseError(f"factor {tok!r} is out of range")
        if kind == "C":
            f = cyclic_group(n)
            fg = sorted({1 % n, (n - 1) % n} - {0})
        else:
            f = symmetric_group(n)
            idx = {p: i for i, p in enumerate(f.elements)}
            fg = []
            if n > 1:
                fg.append(idx[cycle(n, 0, 1)])
            if n > 2:
                c = idx[cycle(n, *range(n))]
                fg += [c, f.inv(c)]
        if group is None:
            group, gens = f, fg
        else:
            k = f.n
            gens = [g * k for g in gens] + list(fg)
            group = direct_product(group, f)
    return group, gens


def parse_perm_gens(text: str, degree: int) -> list[tuple]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        p = tuple(range(degree))
        for cyc in re.findall(r"\(([^)]*)\)", part):
            pts = [int(x) for x in cyc.replace(",", " ").split()]
            if any(x < 0 or x >= degree for x in pts) or len(set(pts)) != len(pts):
                raise SpecParseError(f"bad cycle ({cyc}) on {degree} points")
            if len(pts) > 1:
                p = perm_mul(p, cycle(degree, *pts))
        out.append(p)
    if not out:
        raise SpecParseError("no permutation generators given")
    return out


def parse_point(text: str) -> OrbitPoint:
    """An orbit point written ``1̄u``, ``u`` or ``ray``."""
    text = text.strip()
    if text in ("", "ray", "1̄"):
        return RAY
    text = text.replace("1̄", "")
    try:
        return OrbitPoint(text)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None


def _omega(fields: dict) -> OmegaSeq:
    return OmegaSeq.parse(fields["omega"]) if "omega" in fields else FIRST_GRIGORCHUK


def parse_group(spec: str, weights: dict | None = None) -> ParsedGroup:
    from . import backends as B
    from .permwreath import PermWreathBackend
    from .wreath import at, from_perm

    if ":" not in spec:
        raise SpecParseError(f"group spec {spec!r} has no kind")
    kind, body = spec.split(":", 1)
    kind = kind.strip()
    info: dict[str, Any] = {}
    if kind == "grigorchuk":
        head, _, rest = body.partition(",")
        preset = head.strip() or "fsa"
        if preset not in ("fsa", "family"):
            raise SpecParseError(f"unknown preset {preset!r}")
        fields = split_fields(rest)
        omega = _omega(fields)
        group = grig_group(omega, preset)
        backend = B.GrigBackend(group, weights=weights)
        info.update(preset=preset, omega=omega, group=group)
    elif kind == "free":
        fields = split_fields(body)
        backend = B.FreeLikeBackend(0, _int(fields, "k"))
    elif kind == "freelike":
        fields = split_fields(body)
        backend = B.FreeLikeBackend(_int(fields, "m1", 0), _int(fields, "m2", 0))
    elif kind == "cyclic":
        backend = B.cyclic_backend(_int(split_fields(body), "q"))
    elif kind == "table":
        g, gens = table_group(body)
        backend = B.TableGroupBackend(g, gens)
    elif kind == "lamplighter":
        fields = split_fields(body)
        q = _int(fields, "q")
        if q < 2:
            raise SpecParseError("lamplighter needs q >= 2")
        gens = fields.get("gens", "standard")
        f = cyclic_group(q)
        lamp = sorted({1, q - 1})
        backend = B.LamplighterBackend(f, lamp, gens=gens) if gens == "standard" else \
            B.LamplighterBackend(f, gens=gens)
        info.update(q=q)
    elif kind == "wreath":
        fields = split_fields(body)
        h, hg = table_group(fields.get("H", "C2"))
        d = _int(fields, "X")
        perms = parse_perm_gens(fields.get("G", ""), d)
        elems = [from_perm(p, h) for p in perms] + [at(x, 0, h, d) for x in hg]
        labels = [f"g{i}" for i in range(len(perms))] + [f"t{x}" for x in hg]
        backend = B.FiniteWreathBackend(elems, labels)
    elif kind == "permwreath":
        fields = split_fields(body)
        h, hg = table_group(fields.get("H", "C2"))
        preset = fields.get("preset", "fsa")
        pts = [parse_point(p) for p in fields.get("points", "").split(";")] if "points" in fields else [RAY]
        backend = PermWreathBackend(h, {f"t{x}": x for x in hg}, _omega(fields), preset, points=pts)
        info.update(h=h)
    elif kind == "racg":
        fields = split_fields(body)
        n = _int(fields, "n")
        edges = []
        for e in filter(None, fields.get("edges", "").split(";")):
            i, j = e.split("-")
            edges.append((int(i), int(j)))
        backend = B.RACGBackend(n, edges)
    else:
        raise SpecParseError(f"unknown group kind {kind!r}")
    if weights and kind != "grigorchuk":
        backend = backend.with_weights(weights)
    return ParsedGroup(spec, kind, backend, info)


def split_word(text: str, backend: MarkedGroupBackend) -> list[str]:
    """Split a word into generator labels.

    Labels may be separated by spaces or dots; without separators the
    word is read greedily, longest label first.
    """
    labels = sorted((g.label for g in backend.generators), key=len, reverse=True)
    known = set(labels)
    parts = [p for p in re.split(r"[\s.]+", text.strip()) if p]
    out: list[str] = []
    for part in parts:
        if part in known:
            out.append(part)
            continue
        i = 0
        while i < len(part):
            for lab in labels:
                if part.startswith(lab, i):
                    out.append(lab)
                    i += len(lab)
                    break
            else:
                raise SpecParseError(f"cannot read {part[i:]!r} as generators {sorted(known)}")
    return out
