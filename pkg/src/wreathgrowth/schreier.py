"""Schreier graphs, the orbit of the ray 1^infinity, and ball comparison.

Points of the orbit of the ray ...111 are written 1̄u for a finite binary
word u whose rightmost letter sits at level 1. Leading 1s of u merge with
the tail, so the canonical word never starts with 1.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .finite import perm_inv, perm_mul
from .selfsim import FIRST_GRIGORCHUK, GrigGroup, OmegaSeq, grig_group


@dataclass(frozen=True, order=True)
class OrbitPoint:
    word: str = ""

    def __post_init__(self):
        if set(self.word) - set("01"):
            raise ValueError(f"not a binary word: {self.word!r}")
        object.__setattr__(self, "word", self.word.lstrip("1"))

    def __str__(self) -> str:
        return "1̄" + self.word


RAY = OrbitPoint("")


# ---------------------------------------------------------------------------
# actions


class Action:
    """Right action of labelled generators on hashable points."""

    labels: Sequence[str]

    def act(self, point, label: str):
        raise NotImplementedError

    def key(self, point) -> Hashable:
        return point

    def name(self, point) -> str:
        return str(point)


class PermutationAction(Action):
    def __init__(self, gens: dict[str, tuple]):
        self.gens = dict(gens)
        self.labels = list(self.gens)

    def act(self, point, label):
        return self.gens[label][point]


class SubsetAction(Action):
    """Induced action on subsets of the points."""

    def __init__(self, gens: dict[str, tuple]):
        self.gens = dict(gens)
        self.labels = list(self.gens)

    def act(self, point, label):
        p = self.gens[label]
        return frozenset(p[i] for i in point)

    def name(self, point):
        return "{" + ",".join(str(i) for i in sorted(point)) + "}"


class ConjugationAction(Action):
    """x -> s^-1 x s on permutations."""

    def __init__(self, gens: dict[str, tuple]):
        self.gens = dict(gens)
        self.labels = list(self.gens)

    def act(self, point, label):
        s = self.gens[label]
        return perm_mul(perm_mul(perm_inv(s), point), s)


class CayleyAction(Action):
    """Right multiplication by the generators of a marked group."""

    def __init__(self, backend):
        self.backend = backend
        self.labels = [g.label for g in backend.generators]
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def act(self, point, label):
        return self.backend.mul_gen(point, self._index[label])

    def key(self, point):
        return self.backend.key(point)


class GrigOrbitAction(Action):
    """G_omega acting on the orbit of the ray 1̄."""

    def __init__(self, group: GrigGroup | None = None, labels: Sequence[str] = ("a", "b", "c", "d")):
        self.group = group or grig_group()
        self.labels = list(labels)

    def act(self, point: OrbitPoint, label: str) -> OrbitPoint:
        return act_orbit_point(point, label, self.group)


def act_orbit_point(point: OrbitPoint, word: str, group: GrigGroup | None = None) -> OrbitPoint:
    """Image of 1̄u under a word, applied letter by letter.

    A single generator changes at most the first tail letter: its section
    on reaching the tail is in {1, a, b, c, d}, and b, c, d fix 1̄.
    """
    group = group or grig_group()
    u = point.word
    for ch in word:
        u = group.act_vertex(ch, "1" + u).lstrip("1")
    return OrbitPoint(u)


def act_orbit_point_element(point: OrbitPoint, g: int, engine) -> OrbitPoint:
    """Image of 1̄u under a portrait id of ``engine``.

    The finite word u is read from level 1 upwards; the walk then
    follows the tail of 1s until the current section is a nucleus leaf,
    and a leaf fixes 1̄ unless it is ``a``, which flips one more letter.
    """
    i = g
    out = []
    u = point.word
    for pos in range(len(u) - 1, -1, -1):
        x = int(u[pos])
        swap, left, right, _ = engine._expand(i)
        out.append(str(x ^ int(swap)))
        i = left if x == 0 else right
    head = []
    while True:
        t = engine.node(i)
        if t[0] == "leaf":
            if t[1] == "a":
                head.append("0")
            break
        swap, _, right, _ = engine._expand(i)
        head.append("0" if swap else "1")
        i = right
    return OrbitPoint("".join(reversed(head)) + "".join(reversed(out)))


# ---------------------------------------------------------------------------
# graphs


@dataclass
class SchreierGraph:
    vertices: list  # canonical keys, in discovery order
    names: list
    edges: list  # (source index, label, target index)
    basepoint: int = 0
    labels: list = field(default_factory=list)
    expanded: list = field(default_factory=list)  # has every out-edge been computed?
    points: list = field(default_factory=list)

    def __post_init__(self):
        self._out = {}
        for s, lab, t in self.edges:
            self._out[(s, lab)] = t
        self._index = {k: i for i, k in enumerate(self.vertices)}

    def out(self, v: int, label: str) -> int | None:
        return self._out.get((v, label))

    def index(self, key) -> int:
        return self._index[key]

    def __len__(self) -> int:
        return len(self.vertices)

    def loops(self, v: int) -> list[str]:
        return [lab for lab in self.labels if self.out(v, lab) == v]

    def distances(self, source: int | None = None, radius: int | None = None) -> dict[int, int]:
        src = self.basepoint if source is None else source
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if radius is not None and dist[u] >= radius:
                continue
            for lab in self.labels:
                w = self.out(u, lab)
                if w is not None and w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def to_dot(self) -> str:
        lines = ["digraph schreier {"]
        for i, name in enumerate(self.names):
            lines.append(f'  {i} [label="{name}"];')
        for s, lab, t in self.edges:
            lines.append(f'  {s} -> {t} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "label", "target"])
        for s, lab, t in self.edges:
            w.writerow([self.names[s], lab, self.names[t]])
        return buf.getvalue()


def build_schreier(action: Action, basepoint, limit: int | None = None,
                   radius: int | None = None) -> SchreierGraph:
    """Breadth-first closure of the basepoint.

    Stops after ``limit`` vertices or after expanding every vertex of
    distance at most ``radius``; vertices beyond that carry no out-edges.
    Vertex numbering is the discovery order.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    keys = [action.key(basepoint)]
    points = [basepoint]
    index = {keys[0]: 0}
    depth = [0]
    edges = []
    expanded = [False]
    i = 0
    while i < len(points):
        if radius is not None and depth[i] > radius:
            break
        if limit is not None and i >= limit:
            break
        p = points[i]
        added = 0
        for lab in action.labels:
            q = action.act(p, lab)
            kq = action.key(q)
            j = index.get(kq)
            if j is None:
                if limit is not None and len(points) >= limit:
                    continue
                j = len(points)
                index[kq] = j
                keys.append(kq)
                points.append(q)
                depth.append(depth[i] + 1)
                expanded.append(False)
            edges.append((i, lab, j))
            added += 1
        expanded[i] = added == len(action.labels)
        i += 1
    names = [action.name(p) for p in points]
    return SchreierGraph(keys, names, edges, 0, list(action.labels), expanded, points)


def marked_ball_equal(g1: SchreierGraph, g2: SchreierGraph, radius: int,
                      base1: int | None = None, base2: int | None = None) -> bool:
    """Are the radius balls around the basepoints isomorphic as labelled rooted graphs?

    Labels make the isomorphism unique, so it is found by walking both
    graphs in step. Balls are taken along out-edges; for generating sets
    closed under inverses this is the usual ball.
    """
    if sorted(g1.labels) != sorted(g2.labels):
        return False
    b1 = g1.basepoint if base1 is None else base1
    b2 = g2.basepoint if base2 is None else base2
    d1 = g1.distances(b1, radius)
    d2 = g2.distances(b2, radius)
    if len(d1) != len(d2):
        return False
    mapping = {b1: b2}
    queue = deque([b1])
    while queue:
        u = queue.popleft()
        v = mapping[u]
        for lab in g1.labels:
            x, y = g1.out(u, lab), g2.out(v, lab)
            in1 = x is not None and x in d1
            in2 = y is not None and y in d2
            if in1 != in2:
                return False
            if not in1:
                if d1[u] < radius:
                    return False  # an inner vertex must have every neighbour in the ball
                continue
            if x in mapping:
                if mapping[x] != y:
                    return False
            else:
                mapping[x] = y
                queue.append(x)
    return len(set(mapping.values())) == len(mapping) == len(d1)


# ---------------------------------------------------------------------------
# the line of G_omega


def gray(n: int) -> int:
    return n ^ (n >> 1)


def inverse_gray(g: int) -> int:
    n = 0
    while g:
        n ^= g
        g >>= 1
    return n


def position_point_closed_form(n: int) -> OrbitPoint:
    """Point at distance n from 1̄: the bitwise complement of gray(n)."""
    if n == 0:
        return RAY
    g = gray(n)
    width = g.bit_length()
    return OrbitPoint(format(g ^ ((1 << width) - 1), f"0{width}b"))


def point_position_closed_form(p: OrbitPoint) -> int:
    u = p.word
    if not u:
        return 0
    g = int(u, 2) ^ ((1 << len(u)) - 1)
    return inverse_gray(g)


class GrigLine:
    """Positions on the orbit of 1̄, found by walking the Schreier graph."""

    def __init__(self, group: GrigGroup | None = None):
        self.group = group or grig_group()
        self.points: list[OrbitPoint] = [RAY]
        self.index: dict[OrbitPoint, int] = {RAY: 0}

    def _extend(self, n: int) -> None:
        while len(self.points) <= n:
            cur = self.points[-1]
            prev = self.points[-2] if len(self.points) > 1 else None
            nxt = None
            for s in "abcd":
                q = act_orbit_point(cur, s, self.group)
                if q != cur and q != prev:
                    nxt = q
                    break
            if nxt is None or nxt in self.index:
                raise RuntimeError("the orbit is not a half-line")
            self.index[nxt] = len(self.points)
            self.points.append(nxt)

    def point(self, n: int) -> OrbitPoint:
        self._extend(n)
        return self.points[n]

    def position(self, p: OrbitPoint) -> int:
        if p not in self.index:
            bound = 1 << (len(p.word) + 1)
            self._extend(bound)
        return self.index[p]


_LINES: dict = {}


def _line(omega, preset) -> GrigLine:
    key = (preset, omega)
    if key not in _LINES:
        _LINES[key] = GrigLine(grig_group(omega, preset))
    return _LINES[key]


def grig_orbit_position(p: OrbitPoint, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa") -> int:
    return _line(omega, preset).position(p)


def grig_position_point(n: int, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa") -> OrbitPoint:
    return _line(omega, preset).point(n)


def grig_line_action(gen: str, n: int, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa") -> int:
    p = position_point_closed_form(n)
    return point_position_closed_form(act_orbit_point(p, gen, grig_group(omega, preset)))


def grig_line_graph(count: int, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                    basepoint: OrbitPoint = RAY, radius: int | None = None) -> SchreierGraph:
    action = GrigOrbitAction(grig_group(omega, preset))
    return build_schreier(action, basepoint, limit=None if radius is not None else count, radius=radius)
