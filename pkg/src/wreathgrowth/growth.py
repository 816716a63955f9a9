"""Ball enumeration, quotient diameters, dead ends and k-hills.

Any group exposing the :class:`MarkedGroupBackend` interface can be fed to
:func:`enumerate_ball`. Elements are deduplicated by their canonical key,
never by the words that produced them.
"""

from __future__ import annotations

import heapq
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np

from . import _accel
from .errors import ResourceError

log = logging.getLogger(__name__)

TOL = 1e-9
DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Generator:
    label: str
    element: Any
    weight: Any = 1


class MarkedGroupBackend:
    """A group with an ordered generating set.

    Subclasses provide ``generators``, ``identity``, ``multiply``,
    ``invert`` and ``key``. ``key(x) == key(y)`` must hold exactly when x
    and y are the same group element.
    """

    generators: list[Generator]

    def identity(self):
        raise NotImplementedError

    def multiply(self, x, y):
        raise NotImplementedError

    def invert(self, x):
        raise NotImplementedError

    def key(self, x) -> Hashable:
        return x

    def mul_gen(self, x, i: int):
        """x times the i-th generator; override for speed."""
        return self.multiply(x, self.generators[i].element)

    def evaluate(self, labels: Sequence[str]):
        index = {g.label: g.element for g in self.generators}
        x = self.identity()
        for lab in labels:
            x = self.multiply(x, index[lab])
        return x

    def with_weights(self, weights: dict) -> "MarkedGroupBackend":
        """Same group, same elements, generator weights replaced by ``weights[label]``."""
        import copy

        other = copy.copy(self)
        other.generators = [Generator(g.label, g.element, weights.get(g.label, g.weight))
                            for g in self.generators]
        return other


@dataclass
class BallRecord:
    radius: Any
    norms: dict  # key -> norm
    spheres: list  # unweighted: count per radius; weighted: (norm, count) pairs
    weighted: bool = False
    edges: dict | None = None  # key -> list of (label, key) inside the ball
    elements: dict | None = None  # key -> element

    def v(self, r) -> int:
        """Number of elements of norm at most r."""
        if not self.weighted:
            r = int(np.floor(r + TOL))
            return sum(self.spheres[: r + 1])
        return sum(c for n, c in self.spheres if n <= r + TOL)

    def cumulative(self) -> list[int]:
        out, acc = [], 0
        for c in (self.spheres if not self.weighted else [c for _, c in self.spheres]):
            acc += c
            out.append(acc)
        return out

    def __len__(self) -> int:
        return len(self.norms)


def enumerate_ball(backend: MarkedGroupBackend, radius, weighted: bool = False,
                   edges: bool = False, keep_elements: bool = False,
                   budget: int = DEFAULT_BUDGET) -> BallRecord:
    """Exact ball of the given radius.

    Unweighted balls are built layer by layer; weighted ones by a
    shortest-path search where zero-weight generators are allowed.
    With ``edges=True`` the record lists, for every element of the ball,
    its generator neighbours that also lie in the ball.
    """
    if weighted:
        rec = _weighted_ball(backend, radius, budget, keep_elements or edges)
    else:
        rec = _unweighted_ball(backend, int(radius), budget, keep_elements or edges)
    if edges:
        rec.edges = _collect_edges(backend, rec)
        if not keep_elements:
            rec.elements = None
    return rec


def _unweighted_ball(backend, radius: int, budget: int, keep: bool) -> BallRecord:
    e = backend.identity()
    k0 = backend.key(e)
    norms = {k0: 0}
    elements = {k0: e} if keep else None
    frontier = [e]
    spheres = [1]
    ngen = len(backend.generators)
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for i in range(ngen):
                y = backend.mul_gen(x, i)
                ky = backend.key(y)
                if ky not in norms:
                    norms[ky] = r
                    nxt.append(y)
                    if keep:
                        elements[ky] = y
        if len(norms) > budget:
            raise ResourceError(f"element budget {budget} exceeded at radius {r}")
        spheres.append(len(nxt))
        frontier = nxt
        log.debug("radius %d: %d elements", r, len(norms))
    return BallRecord(radius, norms, spheres, False, None, elements)


def _weighted_ball(backend, radius, budget: int, keep: bool) -> BallRecord:
    e = backend.identity()
    k0 = backend.key(e)
    best = {k0: 0}
    store = {k0: e}
    done: dict = {}
    counter = 0
    heap = [(0, counter, k0)]
    weights = [g.weight for g in backend.generators]
    while heap:
        d, _, k = heapq.heappop(heap)
        if k in done or d > best[k] + TOL:
            continue
        done[k] = d
        x = store[k]
        for i, w in enumerate(weights):
            nd = d + w
            if nd > radius + TOL:
                continue
            y = backend.mul_gen(x, i)
            ky = backend.key(y)
            if ky in done:
                continue
            old = best.get(ky)
            if old is None or nd < old - TOL:
                best[ky] = nd
                store[ky] = y
                counter += 1
                heapq.heappush(heap, (nd, counter, ky))
        if len(best) > budget:
            raise ResourceError(f"element budget {budget} exceeded below weighted radius {d}")
    levels: list[list] = []
    for n in sorted(done.values()):
        if levels and abs(levels[-1][0] - n) <= TOL:
            levels[-1][1] += 1
        else:
            levels.append([n, 1])
    spheres = [(n, c) for n, c in levels]
    elements = {k: store[k] for k in done} if keep else None
    return BallRecord(radius, done, spheres, True, None, elements)


def _collect_edges(backend, rec: BallRecord) -> dict:
    out = {}
    for k, x in rec.elements.items():
        lst = []
        for i, g in enumerate(backend.generators):
            ky = backend.key(backend.mul_gen(x, i))
            if ky in rec.norms:
                lst.append((g.label, ky))
        out[k] = lst
    return out


def sphere_counts(backend: MarkedGroupBackend, radius: int, **kw) -> list[int]:
    return enumerate_ball(backend, radius, **kw).spheres


# ---------------------------------------------------------------------------
# dead ends and hills


def is_k_hill_top(ball: BallRecord, v: Hashable, k: int) -> bool:
    """Does every path from v to norm |v|+1 first descend to norm |v|-k?

    Searches from v inside the vertices of norm at least |v|-k+1; the
    ball must contain norm |v|+1.
    """
    n = ball.norms[v]
    if n + 1 > ball.radius:
        raise ValueError("the ball is too small to classify this element")
    floor = n - k + 1
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for _, w in ball.edges[u]:
            nw = ball.norms[w]
            if nw > n:
                return False
            if nw >= floor and w not in seen:
                seen.add(w)
                queue.append(w)
    return True


def find_k_hills(ball: BallRecord, k: int) -> list:
    """Canonical keys of the k-hill tops among elements of norm <= radius - 1.

    k = 0 gives the dead ends.
    """
    if ball.edges is None:
        raise ValueError("build the ball with edges=True")
    return [v for v, n in ball.norms.items() if n <= ball.radius - 1 and is_k_hill_top(ball, v, k)]


def hill_depth(ball: BallRecord, v: Hashable) -> int:
    """Largest k for which v is a k-hill top, or -1."""
    k = -1
    while k + 1 <= ball.norms[v] + 1 and is_k_hill_top(ball, v, k + 1):
        k += 1
    return k


# ---------------------------------------------------------------------------
# generating-set comparison


@dataclass
class GensetReport:
    c_forward: int  # max over S' of |s'|_S
    c_backward: int  # max over S of |s|_{S'}
    checked: list = field(default_factory=list)
    ok: bool = True


def genset_equiv_check(backend_s: MarkedGroupBackend, backend_t: MarkedGroupBackend,
                       radius: int) -> GensetReport:
    """Compare growth for two generating sets of the same group.

    With C = max_{s in S} |s|_{S'} every S-ball of radius r sits inside the
    S'-ball of radius C r, and symmetrically; both inclusions are checked
    on ball sizes for all r with C r <= radius.
    """
    ball_s = enumerate_ball(backend_s, radius)
    ball_t = enumerate_ball(backend_t, radius)

    def const(gens, ball, other):
        c = 0
        for g in gens:
            kk = other.key(g.element)
            if kk not in ball.norms:
                raise ResourceError(f"generator {g.label} not reached within radius {radius}")
            c = max(c, ball.norms[kk])
        return c

    c_fwd = const(backend_t.generators, ball_s, backend_s)
    c_bwd = const(backend_s.generators, ball_t, backend_t)
    rep = GensetReport(c_fwd, c_bwd)
    for c, small, big in ((c_bwd, ball_s, ball_t), (c_fwd, ball_t, ball_s)):
        for r in range(0, radius // max(c, 1) + 1):
            ok = small.v(r) <= big.v(c * r)
            rep.checked.append((c, r, small.v(r), big.v(c * r), ok))
            rep.ok &= ok
    return rep


# ---------------------------------------------------------------------------
# quotients of the first Grigorchuk group


def portrait_bit_generators(n: int, group=None) -> tuple[np.ndarray, np.ndarray]:
    """Encode left multiplication by a, b, c, d on level-n portraits.

    An element of the quotient acting on level n is given by the swap
    bits at the 2^n - 1 vertices of levels 0..n-1; vertex u of length l
    has bit index 2^l - 1 + int(u, 2). For a generator s,
    (s g)_v = s_v g_{v s}, so bit v of s g is swap(s_v) XOR bit (v s) of g.
    """
    from .selfsim import grig_group

    g = group or grig_group()
    nb = (1 << n) - 1
    vertices = [""] + [format(i, f"0{l}b") for l in range(1, n) for i in range(1 << l)]
    index = {v: i for i, v in enumerate(vertices)}
    src = np.zeros((4, nb), dtype=np.int64)
    masks = np.zeros(4, dtype=np.uint64)
    for gi, s in enumerate("abcd"):
        m = 0
        for v in vertices:
            word, img = s, []
            for pos in range(len(v) - 1, -1, -1):
                w0, w1, swap = g.sections(word)
                img.append(str(int(v[pos]) ^ int(swap)))
                word = w0 if v[pos] == "0" else w1
            image = "".join(reversed(img))
            src[gi, index[v]] = index[image]
            if g.sections(word)[2]:
                m |= 1 << index[v]
        masks[gi] = m
    return src, masks


def quotient_diameter(n: int, max_level: int = 5, kernel: str = "auto") -> tuple[int, int]:
    """Diameter and order of the first Grigorchuk group acting on level n."""
    if n < 1:
        raise ValueError("level must be positive")
    if n > max_level:
        raise ResourceError(f"level {n} is beyond the configured limit {max_level}")
    src, masks = portrait_bit_generators(n)
    if kernel == "numpy" or (kernel == "auto" and not _accel.HAVE_NUMBA):
        sizes = _accel.bitcode_bfs_numpy(src, masks)
    elif kernel in ("numba", "auto"):
        sizes = _accel.bitcode_bfs_numba(src, masks)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    return len(sizes) - 1, int(sizes.sum())


def quotient_diameter_perm(n: int) -> tuple[int, int]:
    """Slow oracle: BFS over tuples of the level-n permutations themselves."""
    from .selfsim import level_perm

    gens = [tuple(level_perm(s, n).tolist()) for s in "abcd"]
    e = tuple(range(1 << n))
    seen = {e}
    frontier = [e]
    depth = 0
    while True:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(s[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        if not nxt:
            return depth, len(seen)
        depth += 1
        frontier = nxt
