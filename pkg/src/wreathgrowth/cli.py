"""Command-line entry point: ``wreathgrowth <subcommand> ...``.

Data goes to stdout in the chosen format (json, csv or text); progress
and warnings go to stderr. Exit codes: 0 success, 1 a check failed,
2 usage or input error, 3 a resource limit was hit.

Configuration is read from an INI file (``--config``, else
``$WREATHGROWTH_CONFIG``, else ``./wreathgrowth.ini`` if present) with a
``[wreathgrowth]`` section holding any of

    budget, max_radius, max_level, word_bound, tol, cache_dir, format

``$WREATHGROWTH_CACHE_DIR`` overrides the file's cache_dir, and command
line flags override both.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Sequence

from . import cache as cachemod
from .errors import ResourceError, WreathGrowthError
from .growth import enumerate_ball, find_k_hills, quotient_diameter
from .specparse import parse_group, parse_point, split_word, table_group

log = logging.getLogger("wreathgrowth")

FORMATS = ("json", "csv", "text")
CONFIG_ENV = "WREATHGROWTH_CONFIG"
CACHE_ENV = "WREATHGROWTH_CACHE_DIR"


@dataclass(frozen=True)
class RunConfig:
    budget: int = 10_000_000
    max_radius: int = 64
    max_level: int = 5
    word_bound: int = 14
    tol: float = 1e-9
    cache_dir: str = str(Path.home() / ".cache" / "wreathgrowth")
    format: str = "text"

    def __post_init__(self):
        for name in ("budget", "max_radius", "max_level", "word_bound"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the config file, then the cache env var, then ``overrides``."""
    values: dict[str, Any] = {}
    path = path or os.environ.get(CONFIG_ENV)
    if path is None and Path("wreathgrowth.ini").exists():
        path = "wreathgrowth.ini"
    if path:
        cp = configparser.ConfigParser()
        if not cp.read(path):
            raise ValueError(f"cannot read config file {path}")
        if cp.has_section("wreathgrowth"):
            types = {f.name: f.type for f in fields(RunConfig)}
            for k, v in cp.items("wreathgrowth"):
                if k not in types:
                    raise ValueError(f"unknown config key {k!r}")
                conv = {"int": int, "float": float}.get(types[k], str)
                values[k] = conv(v)
    if os.environ.get(CACHE_ENV):
        values["cache_dir"] = os.environ[CACHE_ENV]
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(**values)


# ---------------------------------------------------------------------------
# output


def _clean(obj):
    """Make values JSON-safe: tuples to lists, non-finite floats to None."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return obj.item()
    return obj


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, data: dict, rows: Sequence[dict] | None = None, text: str | None = None) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(_clean(data), sort_keys=True, indent=2) + "\n")
        elif self.fmt == "csv":
            table = rows if rows is not None else [{k: v for k, v in data.items()
                                                    if not isinstance(v, (list, dict, tuple))}]
            buf = io.StringIO()
            if table:
                w = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
                w.writeheader()
                for r in table:
                    w.writerow({k: _clean(v) for k, v in r.items()})
            self.stream.write(buf.getvalue())
        else:
            if text is None:
                text = "\n".join(f"{k}: {v}" for k, v in data.items())
            self.stream.write(text.rstrip("\n") + "\n")


def describe(parsed, x) -> str:
    """Readable normal form of a backend element."""
    b = parsed.backend
    if parsed.kind == "grigorchuk":
        return b.engine.to_portrait(x).text()
    if parsed.kind in ("free", "freelike"):
        labels = [g.label for g in b.generators]
        return " ".join(labels[i] for i in x) or "1"
    if parsed.kind == "racg":
        return json.dumps(x.tolist())
    return repr(x)


# ---------------------------------------------------------------------------
# subcommands


def _group(args, weights=None):
    return parse_group(args.group, weights)


def _read_weights(path: str | None) -> dict | None:
    if not path:
        return None
    with open(path) as fh:
        w = json.load(fh)
    if not isinstance(w, dict) or not all(isinstance(v, (int, float)) and v >= 0 for v in w.values()):
        raise ValueError("weights file must map generator labels to non-negative numbers")
    return {str(k): v for k, v in w.items()}


def cmd_mul(args, cfg, out):
    parsed = _group(args)
    b = parsed.backend
    x = b.identity()
    for w in args.word:
        x = b.multiply(x, b.evaluate(split_word(w, b)))
    data = {"group": args.group, "words": list(args.word), "normal_form": describe(parsed, x),
            "trivial": b.key(x) == b.key(b.identity())}
    out.emit(data, text=data["normal_form"])
    return 0


def cmd_wp(args, cfg, out):
    parsed = _group(args)
    b = parsed.backend
    if parsed.kind == "grigorchuk":
        trivial = parsed.info["group"].wp_trivial(args.word)
    else:
        x = b.evaluate(split_word(args.word, b))
        trivial = b.key(x) == b.key(b.identity())
    data = {"group": args.group, "word": args.word, "trivial": trivial}
    out.emit(data, text="trivial" if trivial else "nontrivial")
    return 0


def cmd_order(args, cfg, out):
    parsed = _group(args)
    b = parsed.backend
    if parsed.kind == "grigorchuk":
        n = parsed.info["group"].order(args.word)
    else:
        g = b.evaluate(split_word(args.word, b))
        e = b.key(b.identity())
        x, n = g, 1
        while b.key(x) != e:
            x, n = b.multiply(x, g), n + 1
            if n > cfg.budget:
                raise ResourceError(f"no power up to {cfg.budget} is trivial")
    data = {"group": args.group, "word": args.word, "order": n}
    out.emit(data, text=str(n))
    return 0


def cmd_portrait(args, cfg, out):
    parsed = _group(args)
    if parsed.kind != "grigorchuk":
        raise WreathGrowthError("portraits exist for grigorchuk groups only")
    p = parsed.info["group"].portrait(args.word)
    data = {"group": args.group, "word": args.word, "portrait": p.as_json(), "text": p.text(),
            "depth": p.depth()}
    out.emit(data, text=p.text())
    return 0


def cmd_ball(args, cfg, out):
    if args.radius > cfg.max_radius:
        raise ResourceError(f"radius {args.radius} exceeds max_radius {cfg.max_radius}")
    weights = _read_weights(args.weights)
    weighted = weights is not None
    if not weighted:
        if args.radius != int(args.radius):
            raise ValueError("unweighted balls need an integer radius")
        args.radius = int(args.radius)
    parsed = _group(args, weights)
    key_inputs = {"group": args.group, "radius": args.radius, "weights": weights}
    key = cachemod.cache_key("ball", key_inputs)

    def compute():
        log.info("enumerating ball of radius %s in %s", args.radius, args.group)
        t0 = time.perf_counter()
        rec = enumerate_ball(parsed.backend, args.radius, weighted=weighted, budget=cfg.budget)
        log.info("done: %d elements in %.2fs", len(rec), time.perf_counter() - t0)
        return cachemod.ball_to_payload(rec)

    hit = False
    if args.no_cache:
        payload = compute()
    else:
        payload, hit = cachemod.Cache(cfg.cache_dir).get_or_compute(key, compute)
        log.info("cache %s for %s", "hit" if hit else "miss", key)
    rec = cachemod.ball_from_payload(payload)
    cum = rec.cumulative()
    data = {"group": args.group, "radius": args.radius, "weighted": weighted,
            "spheres": rec.spheres, "cumulative": cum, "size": cum[-1] if cum else 0,
            "weights_digest": cachemod.digest(weights)}
    if args.edges:
        full = enumerate_ball(parsed.backend, args.radius, weighted=weighted, edges=True,
                              budget=cfg.budget)
        data["edges"] = sum(len(v) for v in full.edges.values())
    if weighted:
        rows = [{"norm": n, "count": c, "cumulative": s} for (n, c), s in zip(rec.spheres, cum)]
        text = "\n".join(f"{n:.12g} {c}" for n, c in rec.spheres)
    else:
        rows = [{"radius": r, "sphere": c, "cumulative": s} for r, (c, s) in enumerate(zip(rec.spheres, cum))]
        text = "spheres " + ",".join(map(str, rec.spheres))
    out.emit(data, rows, text)
    return 0


def cmd_diameter(args, cfg, out):
    t0 = time.perf_counter()
    d, order = quotient_diameter(args.level, max_level=cfg.max_level, kernel=args.kernel)
    log.info("level %d: BFS took %.2fs", args.level, time.perf_counter() - t0)
    data = {"level": args.level, "diameter": d, "order": order}
    out.emit(data, text=f"D={d} order={order}")
    return 0


def _factor_series(spec: str, order: int):
    from .growth import enumerate_ball as eb
    from .series import Series, cyclic_series, series_free_like

    kind, _, body = spec.partition(":")
    if kind == "trivial":
        return Series.constant(1, order)
    if kind == "cyclic":
        return cyclic_series(int(body.split("=")[1]), order)
    if kind in ("free", "freelike"):
        p = parse_group(spec).backend
        return series_free_like(p.m1, p.m2, order)
    if kind == "table":
        from .backends import TableGroupBackend
        g, gens = table_group(body)
        rec = eb(TableGroupBackend(g, gens), order)
        return Series(rec.spheres, order)
    raise ValueError(f"unknown series factor {spec!r}")


def cmd_series(args, cfg, out):
    from .series import (dirprod_series, finiteX_wreath_series, freeprod_series, graphprod_series,
                         parry_wreath_series)

    n = args.order
    if n < 0 or n > 10_000:
        raise ValueError("order must be in 0..10000")
    c = args.combinator
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "format", "config", "verbose")}
    key = cachemod.cache_key("series", inputs)

    def compute():
        if c == "free":
            from .series import series_free_like
            s = series_free_like(args.m1, args.m2, n)
        elif c == "cyclic":
            from .series import cyclic_series
            s = cyclic_series(args.q, n)
        elif c in ("dirprod", "freeprod"):
            if not args.factor:
                raise ValueError(f"{c} needs --factor")
            parts = [_factor_series(f, n) for f in args.factor]
            s = parts[0]
            for p in parts[1:]:
                s = dirprod_series(s, p) if c == "dirprod" else freeprod_series(s, p)
        elif c == "graphprod":
            verts = list(range(args.vertices))
            edges = [tuple(int(v) for v in e.split("-")) for e in filter(None, args.edges.split(";"))]
            facs = args.factor or ["cyclic:q=2"]
            if len(facs) == 1:
                facs = facs * len(verts)
            if len(facs) != len(verts):
                raise ValueError("give one factor, or one per vertex")
            s = graphprod_series(verts, edges, {v: _factor_series(f, n) for v, f in zip(verts, facs)})
        elif c == "finite-wreath":
            s = finiteX_wreath_series(_factor_series(args.h, n), _factor_series(args.g, n), args.d)
        elif c == "parry":
            s = parry_wreath_series(_factor_series(args.h, n), args.m1, args.m2, n)
        else:
            raise ValueError(f"unknown combinator {c!r}")
        return cachemod.series_to_payload(s)

    if args.no_cache:
        payload = compute()
    else:
        payload, hit = cachemod.Cache(cfg.cache_dir).get_or_compute(key, compute)
        log.info("cache %s for %s", "hit" if hit else "miss", key)
    s = cachemod.series_from_payload(payload)
    coeffs = s.as_ints()
    data = {"combinator": c, "order": n, "coefficients": coeffs}
    rows = [{"n": i, "coefficient": v} for i, v in enumerate(coeffs)]
    out.emit(data, rows, " ".join(map(str, coeffs)))
    return 0


def cmd_schreier(args, cfg, out):
    from .schreier import CayleyAction, GrigOrbitAction, build_schreier

    parsed = _group(args)
    if parsed.kind == "grigorchuk":
        action = GrigOrbitAction(parsed.info["group"])
        base = parse_point(args.basepoint or "")
    else:
        action = CayleyAction(parsed.backend)
        b = parsed.backend
        base = b.evaluate(split_word(args.basepoint, b)) if args.basepoint else b.identity()
    if args.limit is None and args.radius is None:
        raise ValueError("give --limit or --radius")
    g = build_schreier(action, base, limit=args.limit, radius=args.radius)
    if args.dot:
        out.stream.write(g.to_dot())
        return 0
    data = {"group": args.group, "vertices": g.names,
            "edges": [[s, lab, t] for s, lab, t in g.edges], "labels": g.labels}
    rows = [{"source": g.names[s], "label": lab, "target": g.names[t]} for s, lab, t in g.edges]
    out.emit(data, rows, g.to_csv())
    return 0


def cmd_invorbit(args, cfg, out):
    from .invorbit import inverted_orbit, orbit_stats, witness_word

    preset = args.preset
    if args.word is not None:
        o = inverted_orbit(args.word, preset=preset)
        data = {"word": args.word, "preset": preset, "size": len(o), "points": o.names()}
        out.emit(data, [{"point": p} for p in o.names()], " ".join(o.names()))
    elif args.delta is not None:
        if args.delta > cfg.word_bound:
            raise ResourceError(f"radius {args.delta} exceeds word_bound {cfg.word_bound}")
        st = orbit_stats(args.delta, preset=preset, max_length=cfg.word_bound)
        data = {"radius": args.delta, "preset": preset, "delta": st.delta, "witness": st.witness,
                "sigma": st.sigma, "words": st.words, "delta_by_radius": st.delta_by_radius,
                "sigma_by_radius": st.sigma_by_radius}
        rows = [{"radius": r, "delta": d, "sigma": s}
                for r, (d, s) in enumerate(zip(st.delta_by_radius, st.sigma_by_radius))]
        out.emit(data, rows, f"Delta={st.delta} Sigma={st.sigma} witness={st.witness}")
    else:
        rep = witness_word(args.witness)
        data = rep.as_dict()
        data["word"] = rep.word
        out.emit(data, text=f"{rep.word}\n#O={rep.orbit_size} length={rep.weighted_length:.12g}")
        return 0 if rep.ok else 1
    return 0


def cmd_omega_build(args, cfg, out):
    from .metrics import omega_build, parse_profile

    prof = parse_profile(args.profile)
    t0 = time.perf_counter()
    res = omega_build(prof, k_max=args.k)
    log.info("built %d syllables in %.2fs", len(res.syllables), time.perf_counter() - t0)
    if args.log:
        with open(args.log, "w") as fh:
            json.dump(_clean(res.log), fh, indent=1, sort_keys=True)
    data = {"profile": args.profile, "k": res.k, "syllables": res.syllable_string(),
            "fraction_012": res.letter_fraction(), "boundaries": len(res.log), "ok": res.ok}
    rows = [{k: e[k] for k in ("k", "kind", "G", "target", "ratio", "ok")} for e in res.log]
    out.emit(data, rows, res.syllable_string())
    return 0 if res.ok else 1


def cmd_supercontract(args, cfg, out):
    from .metrics import supercontract_check
    from .selfsim import FIRST_GRIGORCHUK, OmegaSeq

    omega = OmegaSeq.parse(args.omega) if args.omega else FIRST_GRIGORCHUK
    rep = supercontract_check(omega, preset=args.preset, letters=args.letters, tol=cfg.tol)
    data = rep.as_dict()
    out.emit(data, text=f"checked={rep.checked} violations={len(rep.violations)} ok={rep.ok}")
    return 0 if rep.ok else 1


def cmd_nueg(args, cfg, out):
    from .permwreath import c5xc5, compare_balls

    if args.h:
        h, gens = table_group(args.h)
        if len(gens) < 2:
            raise ValueError("H needs at least two generators")
        s, t = gens[0], gens[-1]
    else:
        h, s, t = c5xc5()
    equal = compare_balls(h, args.i, args.j, args.radius, s, t)
    data = {"i": args.i, "j": args.j, "radius": args.radius, "equal": equal}
    out.emit(data, text="equal" if equal else "different")
    return 0


def cmd_dl_check(args, cfg, out):
    from .wreath import dl_check

    rep = dl_check(args.q, args.radius)
    out.emit(rep.as_dict())
    return 0 if rep.ok else 1


def cmd_khills(args, cfg, out):
    parsed = _group(args)
    radius = args.radius if args.radius is not None else 4 * args.k + 2
    if radius > cfg.max_radius:
        raise ResourceError(f"radius {radius} exceeds max_radius {cfg.max_radius}")
    ball = enumerate_ball(parsed.backend, radius, edges=True, keep_elements=True, budget=cfg.budget)
    tops = find_k_hills(ball, args.k)
    tops.sort(key=lambda v: (ball.norms[v], repr(v)))
    shown = [{"norm": ball.norms[v], "element": describe(parsed, ball.elements[v])} for v in tops]
    data = {"group": args.group, "k": args.k, "radius": radius, "count": len(tops),
            "tops": shown[: args.show]}
    out.emit(data, shown, f"{len(tops)} tops of {args.k}-hills within radius {radius - 1}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--config")
    common.add_argument("--budget", type=int)
    common.add_argument("--cache-dir")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="wreathgrowth", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="subcommand")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("mul", cmd_mul, "multiply words and print the normal form")
    sp.add_argument("--group", required=True)
    sp.add_argument("--word", action="append", required=True)

    for name, func, h in (("wp", cmd_wp, "word problem"), ("order", cmd_order, "order of an element"),
                          ("portrait", cmd_portrait, "portrait of a grigorchuk element")):
        sp = add(name, func, h)
        sp.add_argument("--group", default="grigorchuk:fsa")
        sp.add_argument("--word", required=True)

    sp = add("ball", cmd_ball, "sphere sizes of a Cayley ball")
    sp.add_argument("--group", required=True)
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--weights", help="JSON file mapping generator labels to weights")
    sp.add_argument("--edges", action="store_true")
    sp.add_argument("--no-cache", action="store_true")

    sp = add("diameter", cmd_diameter, "diameter of the first Grigorchuk group on level n")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--kernel", choices=("auto", "numba", "numpy"), default="auto")

    sp = add("series", cmd_series, "growth series combinators")
    sp.add_argument("combinator",
                    choices=("free", "cyclic", "dirprod", "freeprod", "graphprod", "finite-wreath", "parry"))
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--m1", type=int, default=0)
    sp.add_argument("--m2", type=int, default=1)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--factor", action="append")
    sp.add_argument("--vertices", type=int, default=1)
    sp.add_argument("--edges", default="")
    sp.add_argument("--h", default="cyclic:q=2")
    sp.add_argument("--g", default="cyclic:q=2")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--no-cache", action="store_true")

    sp = add("schreier", cmd_schreier, "Schreier graph of an orbit (Cayley graph for other groups)")
    sp.add_argument("--group", default="grigorchuk:fsa")
    sp.add_argument("--basepoint", default="")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--radius", type=int)
    sp.add_argument("--dot", action="store_true")

    sp = add("invorbit", cmd_invorbit, "inverted orbits")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--word")
    g.add_argument("--delta", type=int)
    g.add_argument("--witness", type=int)
    sp.add_argument("--preset", choices=("fsa", "family"), default="fsa")

    sp = add("omega-build", cmd_omega_build, "build omega for a growth profile")
    sp.add_argument("--profile", required=True)
    sp.add_argument("--k", type=int, default=3000)
    sp.add_argument("--log", help="write the boundary log as JSON to this file")

    sp = add("supercontract", cmd_supercontract, "check the super-contraction inequality")
    sp.add_argument("--omega")
    sp.add_argument("--letters", type=int, default=8)
    sp.add_argument("--preset", choices=("fsa", "family"), default="family")

    sp = add("nueg-compare", cmd_nueg, "compare Cayley balls for shifted lamp generators")
    sp.add_argument("--i", type=int, default=4)
    sp.add_argument("--j", type=int, default=8)
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--h", help="table-spec of H (default C5xC5)")

    sp = add("dl-check", cmd_dl_check, "lamplighter Cayley graph vs Diestel-Leader graph")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--radius", type=int, default=4)

    sp = add("khills", cmd_khills, "tops of k-hills in a Cayley ball")
    sp.add_argument("--group", default="lamplighter:q=2,gens=dl")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--radius", type=int)
    sp.add_argument("--show", type=int, default=10)
    return p


def dispatch(argv: Sequence[str] | None = None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints usage to stderr itself
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, {"format": args.format, "budget": args.budget,
                                        "cache_dir": args.cache_dir})
        return args.func(args, cfg, Output(cfg.format, stdout))
    except (ResourceError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (WreathGrowthError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 2)


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
