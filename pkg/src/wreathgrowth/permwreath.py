"""Permutational wreath products W = H wr_X G_omega over the orbit X of 1̄.

Two equivalent normal forms are used.

* ``PermWreathElement`` is the form c g: a finitely supported decoration
  c: X -> H followed by g in G_omega. Products follow
  (c g)(c' g') = c (x -> c'(x g)) g g'.
* The marked-group backend stores g f instead (first g, then f), because
  right multiplication by a generator is then cheap: a letter of G moves
  the support points, and h@xi multiplies one value.

The two are related by g f = c g with c(x) = f(x g).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import DomainError
from .finite import TableGroup, cyclic_group, direct_product
from .growth import BallRecord, Generator, MarkedGroupBackend, enumerate_ball
from .schreier import (RAY, CayleyAction, OrbitPoint, act_orbit_point, act_orbit_point_element,
                       build_schreier, marked_ball_equal)
from .selfsim import FIRST_GRIGORCHUK, OmegaSeq, grig_group


class WreathContext:
    """The pair (H, G_omega) shared by the elements of one wreath product."""

    def __init__(self, h: TableGroup, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa"):
        self.h = h
        self.group = grig_group(omega, preset)
        self.group.require_faithful()
        self.engine = self.group.engine
        self.omega, self.preset = omega, preset

        @lru_cache(maxsize=1 << 16)
        def move(point: OrbitPoint, letter: str) -> OrbitPoint:
            return act_orbit_point(point, letter, self.group)

        self.move = move

    def act(self, point: OrbitPoint, g: int) -> OrbitPoint:
        return act_orbit_point_element(point, g, self.engine)


def _clean(dec: dict) -> tuple:
    return tuple(sorted((p, v) for p, v in dec.items() if v != 0))


@dataclass(frozen=True)
class PermWreathElement:
    """c g with c stored as sorted (point, value) pairs, g as a portrait id."""

    decoration: tuple
    base: int
    ctx: WreathContext = field(compare=False, hash=False, repr=False)

    def value(self, x: OrbitPoint) -> int:
        return dict(self.decoration).get(x, 0)

    def support(self) -> list[OrbitPoint]:
        return [p for p, _ in self.decoration]

    def __mul__(self, other: "PermWreathElement") -> "PermWreathElement":
        return pw_mul(self, other)


def pw_identity(ctx: WreathContext) -> PermWreathElement:
    return PermWreathElement((), ctx.engine.identity(0), ctx)


def pw_at(h_elem: int, point: OrbitPoint, ctx: WreathContext) -> PermWreathElement:
    return PermWreathElement(_clean({point: h_elem}), ctx.engine.identity(0), ctx)


def pw_base(word: str, ctx: WreathContext) -> PermWreathElement:
    return PermWreathElement((), ctx.engine.from_word(word, 0), ctx)


def pw_mul(u: PermWreathElement, v: PermWreathElement) -> PermWreathElement:
    """Result value at x is u(x) v(x g_u); bases compose."""
    if u.ctx is not v.ctx:
        raise DomainError("elements of different wreath products")
    ctx = u.ctx
    h = ctx.h
    dec = dict(u.decoration)
    if v.decoration:
        ginv = ctx.engine.inv(u.base)
        for y, val in v.decoration:
            x = ctx.act(y, ginv)  # x g_u = y
            dec[x] = h.mul(dec.get(x, 0), val)
    return PermWreathElement(_clean(dec), ctx.engine.mul(u.base, v.base), ctx)


def pw_inv(u: PermWreathElement) -> PermWreathElement:
    ctx = u.ctx
    # (c g)^-1 = g^-1 c^-1 = (x -> c(x g^-1)^-1) g^-1
    ginv = ctx.engine.inv(u.base)
    dec = {ctx.act(y, u.base): ctx.h.inv(val) for y, val in u.decoration}
    return PermWreathElement(_clean(dec), ginv, ctx)


def to_gf(u: PermWreathElement) -> tuple:
    """The backend's (g, f) form of c g, with f(y) = c(y g^-1)."""
    ctx = u.ctx
    return (u.base, _clean({ctx.act(x, u.base): v for x, v in u.decoration}))


def from_gf(x: tuple, ctx: WreathContext) -> PermWreathElement:
    g, f = x
    ginv = ctx.engine.inv(g)
    return PermWreathElement(_clean({ctx.act(y, ginv): v for y, v in f}), g, ctx)


# ---------------------------------------------------------------------------
# the marked group


def pw_generating_set(h_gens: dict, points: Sequence[OrbitPoint] = (RAY,), include_grig: bool = True,
                      letters: str = "abcd") -> list[tuple[str, tuple]]:
    """Labelled generators (label, spec): ("grig", letter) or ("lamp", point, h).

    ``h_gens`` maps labels to elements of H; a single point keeps the
    bare label, several points get labels ``label@point``.
    """
    out = []
    if include_grig:
        out += [(x, ("grig", x)) for x in letters]
    for p in points:
        for lab, hv in h_gens.items():
            name = lab if len(points) == 1 else f"{lab}@{p}"
            out.append((name, ("lamp", p, hv)))
    return out


class PermWreathBackend(MarkedGroupBackend):
    """W = H wr_X G_omega, elements (g, f) meaning g followed by f."""

    def __init__(self, h: TableGroup, h_gens, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                 points: Sequence[OrbitPoint] = (RAY,), include_grig: bool = True,
                 gens: Sequence[tuple[str, tuple]] | None = None):
        self.ctx = WreathContext(h, omega, preset)
        self.h = h
        engine = self.ctx.engine
        if gens is None:
            if not isinstance(h_gens, dict):
                h_gens = {f"t{x}": x for x in (h_gens or [])}
            gens = pw_generating_set(h_gens, points, include_grig)
        self._specs = []
        self.generators = []
        for label, spec in gens:
            if spec[0] == "grig":
                elem = (engine.from_word(spec[1], 0), ())
            else:
                _, p, hv = spec
                elem = (engine.identity(0), _clean({p: hv}))
            self._specs.append(spec)
            self.generators.append(Generator(label, elem))

    def identity(self):
        return (self.ctx.engine.identity(0), ())

    def multiply(self, x, y):
        g, f = x
        g2, f2 = y
        engine = self.ctx.engine
        # g f g2 f2 = g g2 (f moved by g2) f2
        dec = {self.ctx.act(p, g2): v for p, v in f}
        for p, v in f2:
            dec[p] = self.h.mul(dec.get(p, 0), v)
        return (engine.mul(g, g2), _clean(dec))

    def invert(self, x):
        g, f = x
        ginv = self.ctx.engine.inv(g)
        # (g f)^-1 = f^-1 g^-1 = g^-1 (f^-1 moved by g^-1)
        dec = {self.ctx.act(p, ginv): self.h.inv(v) for p, v in f}
        return (ginv, _clean(dec))

    def mul_gen(self, x, i):
        g, f = x
        spec = self._specs[i]
        if spec[0] == "grig":
            letter = spec[1]
            gid = self.generators[i].element[0]
            move = self.ctx.move
            dec = tuple(sorted((move(p, letter), v) for p, v in f))
            return (self.ctx.engine.mul(g, gid), dec)
        _, p, hv = spec
        dec = dict(f)
        dec[p] = self.h.mul(dec.get(p, 0), hv)
        return (g, _clean(dec))

    def is_trivial(self, x) -> bool:
        return x == self.identity()

    def to_element(self, x) -> PermWreathElement:
        return from_gf(x, self.ctx)


def imprimitive_act(ctx: WreathContext, pair: tuple, x) -> tuple:
    """(y, p) . (g f) = (y f(p g), p g), with H acting on itself on the right."""
    y, p = pair
    g, f = x
    q = ctx.act(p, g)
    return (ctx.h.mul(y, dict(f).get(q, 0)), q)


def w012_ball(h: TableGroup, h_gens, R: int, preset: str = "fsa", budget: int = 10_000_000) -> BallRecord:
    """Ball of radius R in W_012(H) for the generators a, b, c, d and T@1̄."""
    backend = PermWreathBackend(h, h_gens, FIRST_GRIGORCHUK, preset)
    return enumerate_ball(backend, R, budget=budget)


# ---------------------------------------------------------------------------
# ball coincidence for shifted basepoints


def spread_point(i: int) -> OrbitPoint:
    """x_i = 1̄ 0^i, at distance 0, 1, 2, 5, 10, 21, ... from 1̄."""
    return OrbitPoint("0" * i)


def c5xc5() -> tuple[TableGroup, int, int]:
    """C5 x C5 with its generators s = (1, 0) and t = (0, 1)."""
    return direct_product(cyclic_group(5), cyclic_group(5)), 5, 1


def shifted_backend(h: TableGroup, s: int, t: int, i: int, preset: str = "fsa") -> PermWreathBackend:
    """W with S_i = {a, b, c, d, s@x_0, t@x_i} and the inverses of the lamp generators."""
    x0, xi = RAY, spread_point(i)
    gens = [(x, ("grig", x)) for x in "abcd"]
    gens += [("s", ("lamp", x0, s)), ("s^-1", ("lamp", x0, h.inv(s))),
             ("t", ("lamp", xi, t)), ("t^-1", ("lamp", xi, h.inv(t)))]
    seen, uniq = set(), []
    for lab, spec in gens:
        if spec not in seen:  # an involutive lamp would repeat itself as its inverse
            seen.add(spec)
            uniq.append((lab, spec))
    return PermWreathBackend(h, None, FIRST_GRIGORCHUK, preset, gens=uniq)


def compare_balls(h: TableGroup | None = None, i: int = 4, j: int = 8, R: int = 3,
                  s: int | None = None, t: int | None = None, preset: str = "fsa") -> bool:
    """Do the radius-R Cayley balls for S_i and S_j coincide as labelled rooted graphs?"""
    if h is None:
        h, s, t = c5xc5()
    g1 = _cayley_ball(shifted_backend(h, s, t, i, preset), R)
    g2 = _cayley_ball(shifted_backend(h, s, t, j, preset), R)
    return marked_ball_equal(g1, g2, R)


def _cayley_ball(backend: MarkedGroupBackend, R: int):
    return build_schreier(CayleyAction(backend), backend.identity(), radius=R)
