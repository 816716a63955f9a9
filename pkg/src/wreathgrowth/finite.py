"""Small finite groups given by permutations or multiplication tables.

Permutations are tuples of image indices and act on the right, so the
product ``p * q`` means "first p, then q": ``(p*q)[i] = q[p[i]]``.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Hashable, Iterable, Sequence

from .errors import ResourceError

Perm = tuple


def perm_mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def transposition(n: int, i: int, j: int) -> Perm:
    p = list(range(n))
    p[i], p[j] = j, i
    return tuple(p)


def cycle(n: int, *points: int) -> Perm:
    p = list(range(n))
    for a, b in zip(points, points[1:] + points[:1]):
        p[a] = b
    return tuple(p)


def closure(gens: Iterable[Perm], limit: int = 5000) -> list[Perm]:
    """All elements of the permutation group generated by ``gens``, in BFS order."""
    gens = list(gens)
    if not gens:
        return []
    e = perm_identity(len(gens[0]))
    seen = {e: None}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = perm_mul(g, s)
                if h not in seen:
                    seen[h] = None
                    nxt.append(h)
                    if len(seen) > limit:
                        raise ResourceError(f"group larger than {limit} elements")
        frontier = nxt
    return list(seen)


class TableGroup:
    """A finite group with elements 0..n-1 and 0 as identity.

    ``table[i][j]`` is the index of the product of elements i and j.
    """

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        self.table = tuple(tuple(row) for row in table)
        self.n = len(self.table)
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(self.n))
        self._inv = tuple(row.index(0) for row in self.table)

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul, names=None) -> "TableGroup":
        """Build the table from an explicit element list whose first entry is the identity."""
        index = {e: i for i, e in enumerate(elements)}
        table = [[index[mul(x, y)] for y in elements] for x in elements]
        return cls(table, names)

    @classmethod
    def from_perms(cls, gens: Iterable[Perm], limit: int = 5000) -> "TableGroup":
        elements = closure(gens, limit)
        g = cls.from_elements(elements, perm_mul)
        g.elements = elements
        return g

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self._inv[i]

    @property
    def identity(self) -> int:
        return 0

    def order_of(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, TableGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self) -> str:
        return f"TableGroup(order={self.n})"


def cyclic_group(q: int) -> TableGroup:
    return TableGroup([[(i + j) % q for j in range(q)] for i in range(q)])


def direct_product(g: TableGroup, h: TableGroup) -> TableGroup:
    """Elements are numbered i*|H| + j for the pair (i, j)."""
    pairs = list(product(range(g.n), range(h.n)))
    return TableGroup.from_elements(
        pairs, lambda x, y: (g.mul(x[0], y[0]), h.mul(x[1], y[1]))
    )


def symmetric_group(n: int) -> TableGroup:
    elements = [perm_identity(n)] + [p for p in permutations(range(n)) if p != perm_identity(n)]
    g = TableGroup.from_elements(elements, perm_mul)
    g.elements = elements
    return g


def trivial_group() -> TableGroup:
    return TableGroup([[0]])


def is_homomorphism(src: TableGroup, dst: TableGroup, f: Sequence[int]) -> bool:
    return all(
        f[src.mul(i, j)] == dst.mul(f[i], f[j]) for i in range(src.n) for j in range(src.n)
    )


def subgroup_generated(g: TableGroup, gens: Iterable[int]) -> list[int]:
    seen = [0]
    members = {0}
    gens = list(gens)
    i = 0
    while i < len(seen):
        for s in gens:
            y = g.mul(seen[i], s)
            if y not in members:
                members.add(y)
                seen.append(y)
        i += 1
    return seen
