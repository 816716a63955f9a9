"""Wreath products over finite sets and over Z.

Elements of H wr_X G over a finite set are decorated permutations: a
permutation of X (acting on the right) and one label of H per point.
The product follows the arrows, multiplying labels on the way:

    (u v).labels[x] = u.labels[x] * v.labels[x u.perm]
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation, DomainError, InvalidTransversalError, ResourceError
from .finite import TableGroup, is_permutation, perm_inv, perm_mul


@dataclass(frozen=True)
class FiniteWreathElement:
    perm: tuple
    labels: tuple
    group: TableGroup = field(compare=False, repr=False)

    def __post_init__(self):
        if not is_permutation(self.perm):
            raise DomainError(f"{self.perm} is not a permutation")
        if len(self.labels) != len(self.perm):
            raise DomainError("one label per point is required")

    @property
    def degree(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "FiniteWreathElement") -> "FiniteWreathElement":
        return wr_mul(self, other)

    def __pow__(self, k: int) -> "FiniteWreathElement":
        result = wr_identity(self.group, self.degree)
        base = self if k >= 0 else wr_inv(self)
        for _ in range(abs(k)):
            result = wr_mul(result, base)
        return result

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.degree)) and all(x == 0 for x in self.labels)


def wr_identity(group: TableGroup, degree: int) -> FiniteWreathElement:
    return FiniteWreathElement(tuple(range(degree)), (0,) * degree, group)


def _check_same(u: FiniteWreathElement, v: FiniteWreathElement) -> None:
    if u.degree != v.degree or u.group != v.group:
        raise DomainError("wreath elements over different sets or label groups")


def wr_mul(u: FiniteWreathElement, v: FiniteWreathElement) -> FiniteWreathElement:
    _check_same(u, v)
    h = u.group
    labels = tuple(h.mul(u.labels[x], v.labels[u.perm[x]]) for x in range(u.degree))
    return FiniteWreathElement(perm_mul(u.perm, v.perm), labels, h)


def wr_inv(u: FiniteWreathElement) -> FiniteWreathElement:
    h = u.group
    p = perm_inv(u.perm)
    # the arrow into x comes from p[x] and carries u.labels[p[x]]
    labels = tuple(h.inv(u.labels[p[x]]) for x in range(u.degree))
    return FiniteWreathElement(p, labels, h)


def wr_conj(u: FiniteWreathElement, g: FiniteWreathElement) -> FiniteWreathElement:
    """u^g = g^-1 u g."""
    return wr_mul(wr_mul(wr_inv(g), u), g)


def at(h: int, x: int, group: TableGroup, degree: int) -> FiniteWreathElement:
    """The element h@x: trivial permutation, label h at x."""
    labels = [0] * degree
    labels[x] = h
    return FiniteWreathElement(tuple(range(degree)), tuple(labels), group)


def from_perm(perm: Sequence[int], group: TableGroup) -> FiniteWreathElement:
    return FiniteWreathElement(tuple(perm), (0,) * len(perm), group)


def random_wreath_element(group: TableGroup, degree: int, rng: random.Random) -> FiniteWreathElement:
    perm = list(range(degree))
    rng.shuffle(perm)
    return FiniteWreathElement(
        tuple(perm), tuple(rng.randrange(group.n) for _ in range(degree)), group
    )


# ---------------------------------------------------------------------------
# Kaloujnine-Krasner embedding


class KKEmbedding:
    """The map E -> K wr_{H\\E} Sym(H\\E) induced by f0: H -> K.

    Cosets are numbered by the position of their representative in the
    transversal; the edge Ht -> Hu of the image of e carries f0(t e u^-1).
    """

    def __init__(self, e_group: TableGroup, subgroup: Sequence[int], f0: Mapping[int, int],
                 k_group: TableGroup, transversal: Sequence[int], max_order: int = 5000):
        if e_group.n > max_order:
            raise ResourceError(f"groups beyond order {max_order} are not supported")
        self.e = e_group
        self.h = sorted(set(subgroup))
        self.f0 = dict(f0)
        self.k = k_group
        self.t = list(transversal)
        self._coset_of: dict[int, tuple[int, int]] = {}
        for i, t in enumerate(self.t):
            for hh in self.h:
                x = e_group.mul(hh, t)
                if x in self._coset_of:
                    raise InvalidTransversalError(
                        f"element {x} lies in two cosets of the transversal"
                    )
                self._coset_of[x] = (i, hh)
        if len(self._coset_of) != e_group.n:
            raise InvalidTransversalError("the transversal does not cover the group")
        for a in self.h:
            for b in self.h:
                if self.f0[e_group.mul(a, b)] != k_group.mul(self.f0[a], self.f0[b]):
                    raise ContractViolation("f0 is not a homomorphism on the subgroup")

    @property
    def degree(self) -> int:
        return len(self.t)

    def __call__(self, e: int) -> FiniteWreathElement:
        perm, labels = [], []
        g = self.e
        for t in self.t:
            te = g.mul(t, e)
            j, hh = self._coset_of[te]
            perm.append(j)
            # t e = hh u with u = t_j, so t e u^-1 = hh
            labels.append(self.f0[hh])
        return FiniteWreathElement(tuple(perm), tuple(labels), self.k)

    def check_homomorphism(self) -> bool:
        images = [self(e) for e in range(self.e.n)]
        return all(
            images[self.e.mul(a, b)] == wr_mul(images[a], images[b])
            for a in range(self.e.n)
            for b in range(self.e.n)
        )

    def is_injective(self) -> bool:
        images = {self(e) for e in range(self.e.n)}
        return len(images) == self.e.n


def kk_embed(e_group: TableGroup, subgroup: Sequence[int], f0: Mapping[int, int],
             k_group: TableGroup, transversal: Sequence[int]) -> KKEmbedding:
    return KKEmbedding(e_group, subgroup, f0, k_group, transversal)


def right_transversal(e_group: TableGroup, subgroup: Iterable[int]) -> list[int]:
    """Smallest-index representative of each right coset Ht."""
    sub = list(subgroup)
    seen: set[int] = set()
    reps = []
    for t in range(e_group.n):
        if t not in seen:
            reps.append(t)
            seen.update(e_group.mul(h, t) for h in sub)
    return reps


# ---------------------------------------------------------------------------
# Lamplighter groups F wr Z


@dataclass(frozen=True)
class LamplighterElement:
    """A finitely supported lamp configuration Z -> F and a shift.

    ``lamps`` is a sorted tuple of (position, value) with value != 0.
    """

    lamps: tuple
    shift: int

    @classmethod
    def make(cls, lamps: Mapping[int, int] | Iterable[tuple[int, int]], shift: int = 0):
        items = lamps.items() if isinstance(lamps, Mapping) else lamps
        return cls(tuple(sorted((int(k), int(v)) for k, v in items if v != 0)), int(shift))

    def lamp(self, x: int) -> int:
        for k, v in self.lamps:
            if k == x:
                return v
        return 0

    @property
    def support(self) -> tuple:
        return tuple(k for k, _ in self.lamps)


def lamp_identity() -> LamplighterElement:
    return LamplighterElement((), 0)


def lamp_mul(u: LamplighterElement, v: LamplighterElement, f: TableGroup) -> LamplighterElement:
    out = dict(u.lamps)
    for k, val in v.lamps:
        x = k - u.shift
        out[x] = f.mul(out.get(x, 0), val)
    return LamplighterElement.make(out, u.shift + v.shift)


def lamp_inv(u: LamplighterElement, f: TableGroup) -> LamplighterElement:
    return LamplighterElement.make({k + u.shift: f.inv(v) for k, v in u.lamps}, -u.shift)


def lamp_at(h: int, x: int) -> LamplighterElement:
    return LamplighterElement.make({x: h}, 0)


def lamp_shift(k: int = 1) -> LamplighterElement:
    return LamplighterElement((), k)


def diestel_leader_generators(f: TableGroup) -> list[tuple[str, LamplighterElement]]:
    """The generating set (F@1)s together with s^-1(F@1)."""
    s, s_inv = lamp_shift(1), lamp_shift(-1)
    gens = []
    for h in range(f.n):
        gens.append((f"up{h}", lamp_mul(lamp_at(h, 1), s, f)))
    for h in range(f.n):
        gens.append((f"down{h}", lamp_mul(s_inv, lamp_at(h, 1), f)))
    return gens


@dataclass(frozen=True)
class DLVertex:
    """A pair of tree vertices of opposite heights.

    Each tree vertex is (digits, height) where digits is a sorted tuple of
    (level, value) with level <= height and value non-trivial.
    """

    x: tuple
    y: tuple

    def __post_init__(self):
        if self.x[1] + self.y[1] != 0:
            raise DomainError("tree heights must sum to zero")


def _tree_adjacent(p: tuple, q: tuple) -> bool:
    (dp, hp), (dq, hq) = p, q
    if abs(hp - hq) != 1:
        return False
    if hp > hq:
        (dp, hp), (dq, hq) = (dq, hq), (dp, hp)
    # p is the lower vertex: it must be q with its top digit forgotten
    return dp == tuple((k, v) for k, v in dq if k <= hp)


def dl_adjacent(u: DLVertex, v: DLVertex) -> bool:
    return _tree_adjacent(u.x, v.x) and _tree_adjacent(u.y, v.y)


def dl_vertex(w: LamplighterElement) -> DLVertex:
    """Image of f s^m under the identification with B(q,q).

    The configuration is read as tau(k) = f(2 - k) at height n = m; the
    first tree keeps tau on (-inf, n] and the second keeps k -> tau(1 - k)
    on (-inf, -n].
    """
    n = w.shift
    tau = {2 - k: v for k, v in w.lamps}
    x = tuple(sorted((k, v) for k, v in tau.items() if k <= n))
    y = tuple(sorted((1 - k, v) for k, v in tau.items() if k > n))
    return DLVertex((x, n), (y, -n))


def dl_vertex_inverse(v: DLVertex) -> LamplighterElement:
    (dx, n), (dy, _) = v.x, v.y
    tau = dict(dx)
    tau.update({1 - j: val for j, val in dy})
    return LamplighterElement.make({2 - k: val for k, val in tau.items()}, n)


def dl_neighbours(v: DLVertex, q: int) -> list[DLVertex]:
    """All neighbours of a vertex in B(q,q), computed in tree coordinates."""
    (dx, n), (dy, m) = v.x, v.y
    out = []
    down_x = (tuple(p for p in dx if p[0] <= n - 1), n - 1)
    down_y = (tuple(p for p in dy if p[0] <= m - 1), m - 1)
    for val in range(q):
        ext = (n + 1, val)
        up_x = (tuple(sorted(dx + ((ext,) if val else ()))), n + 1)
        out.append(DLVertex(up_x, down_y))
        ext = (m + 1, val)
        up_y = (tuple(sorted(dy + ((ext,) if val else ()))), m + 1)
        out.append(DLVertex(down_x, up_y))
    return out


@dataclass
class DLReport:
    q: int
    radius: int
    vertices: int
    edges_checked: int
    mismatches: int
    collisions: int

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.collisions == 0

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "radius": self.radius,
            "vertices": self.vertices,
            "edges_checked": self.edges_checked,
            "mismatches": self.mismatches,
            "collisions": self.collisions,
            "ok": self.ok,
        }


def dl_check(q: int, radius: int, max_radius: int = 8) -> DLReport:
    """Compare the Cayley ball of F wr Z with B(q,q) edge by edge."""
    from .finite import cyclic_group

    if q < 2:
        raise DomainError("the lamp group needs at least two elements")
    if radius > max_radius:
        raise ResourceError(f"radius limited to {max_radius}")
    f = cyclic_group(q)
    gens = [g for _, g in diestel_leader_generators(f)]
    e = lamp_identity()
    dist = {e: 0}
    frontier = [e]
    for r in range(radius):
        nxt = []
        for w in frontier:
            for g in gens:
                y = lamp_mul(w, g, f)
                if y not in dist:
                    dist[y] = r + 1
                    nxt.append(y)
        frontier = nxt

    images: dict[DLVertex, LamplighterElement] = {}
    collisions = 0
    for w in dist:
        v = dl_vertex(w)
        if v in images or dl_vertex_inverse(v) != w:
            collisions += 1
        images[v] = w

    edges = mismatches = 0
    for w in dist:
        v = dl_vertex(w)
        cayley = {dl_vertex(lamp_mul(w, g, f)) for g in gens}
        tree = set(dl_neighbours(v, q))
        for u in cayley:
            edges += 1
            if not dl_adjacent(v, u):
                mismatches += 1
        mismatches += len(cayley ^ tree)
    return DLReport(q, radius, len(dist), edges, mismatches, collisions)
