"""Concrete marked groups for the growth engine."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .finite import TableGroup, cyclic_group, perm_identity, perm_inv, perm_mul
from .growth import Generator, MarkedGroupBackend
from .selfsim import FIRST_GRIGORCHUK, GrigGroup, OmegaSeq, grig_group, reduce
from .wreath import (FiniteWreathElement, diestel_leader_generators,
                     lamp_at, lamp_identity, lamp_inv, lamp_mul, lamp_shift, wr_identity,
                     wr_inv, wr_mul)


class FreeLikeBackend(MarkedGroupBackend):
    """Free product of m1 copies of C2 and m2 copies of Z.

    Letters are integers: 0..m1-1 are involutions, then each Z factor j
    contributes letters m1+2j and m1+2j+1, inverse to each other.
    Elements are freely reduced tuples of letters.
    """

    def __init__(self, m1: int = 0, m2: int = 2):
        self.m1, self.m2 = m1, m2
        self._inv = list(range(m1))
        labels = [f"e{i}" for i in range(m1)]
        for j in range(m2):
            self._inv += [m1 + 2 * j + 1, m1 + 2 * j]
            labels += [f"x{j}", f"X{j}"]
        self.generators = [Generator(lab, (i,)) for i, lab in enumerate(labels)]

    def identity(self):
        return ()

    def multiply(self, x, y):
        out = list(x)
        for c in y:
            if out and out[-1] == self._inv[c]:
                out.pop()
            else:
                out.append(c)
        return tuple(out)

    def mul_gen(self, x, i):
        if x and x[-1] == self._inv[i]:
            return x[:-1]
        return x + (i,)

    def invert(self, x):
        return tuple(self._inv[c] for c in reversed(x))


def free_group(k: int) -> FreeLikeBackend:
    return FreeLikeBackend(0, k)


class ExtraGeneratorsBackend(MarkedGroupBackend):
    """Wrap a backend, adding products of existing generators as generators."""

    def __init__(self, base: MarkedGroupBackend, extra: dict[str, Sequence[str]]):
        self.base = base
        self.generators = list(base.generators) + [
            Generator(lab, base.evaluate(word)) for lab, word in extra.items()
        ]

    def identity(self):
        return self.base.identity()

    def multiply(self, x, y):
        return self.base.multiply(x, y)

    def invert(self, x):
        return self.base.invert(x)

    def key(self, x):
        return self.base.key(x)


class PermGroupBackend(MarkedGroupBackend):
    """Permutation group given by generating permutations (right action)."""

    def __init__(self, gens: Sequence[tuple], labels: Sequence[str] | None = None):
        labels = labels or [f"p{i}" for i in range(len(gens))]
        self.degree = len(gens[0]) if gens else 0
        self.generators = [Generator(l, tuple(g)) for l, g in zip(labels, gens)]

    def identity(self):
        return perm_identity(self.degree)

    def multiply(self, x, y):
        return perm_mul(x, y)

    def invert(self, x):
        return perm_inv(x)


class TableGroupBackend(MarkedGroupBackend):
    def __init__(self, group: TableGroup, gens: Sequence[int], labels: Sequence[str] | None = None):
        self.group = group
        labels = labels or [f"h{g}" for g in gens]
        self.generators = [Generator(l, g) for l, g in zip(labels, gens)]

    def identity(self):
        return 0

    def multiply(self, x, y):
        return self.group.mul(x, y)

    def invert(self, x):
        return self.group.inv(x)


class DirectProductBackend(MarkedGroupBackend):
    """A x B generated by S x {1} and {1} x T."""

    def __init__(self, a: MarkedGroupBackend, b: MarkedGroupBackend):
        self.a, self.b = a, b
        ea, eb = a.identity(), b.identity()
        self.generators = [Generator(f"L{g.label}", (g.element, eb), g.weight) for g in a.generators]
        self.generators += [Generator(f"R{g.label}", (ea, g.element), g.weight) for g in b.generators]

    def identity(self):
        return (self.a.identity(), self.b.identity())

    def multiply(self, x, y):
        return (self.a.multiply(x[0], y[0]), self.b.multiply(x[1], y[1]))

    def invert(self, x):
        return (self.a.invert(x[0]), self.b.invert(x[1]))

    def key(self, x):
        return (self.a.key(x[0]), self.b.key(x[1]))


class RACGBackend(MarkedGroupBackend):
    """Right-angled Coxeter group, i.e. the graph product of copies of C2.

    Elements are integer matrices of the Tits representation: the form B
    has B(e_i, e_i) = 1, B(e_i, e_j) = 0 for adjacent (commuting) vertices
    and -1 otherwise, and generator i acts by v -> v - 2 B(e_i, v) e_i.
    The representation is faithful, so matrices are canonical keys.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        self.n = n
        adj = {frozenset(e) for e in edges}
        form = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            form[i, i] = 1
        for e in adj:
            i, j = tuple(e)
            form[i, j] = form[j, i] = 0
        mats = []
        for i in range(n):
            m = np.eye(n, dtype=np.int64)
            m[i, :] -= 2 * form[i, :]
            mats.append(m)
        self.generators = [Generator(f"v{i}", m) for i, m in enumerate(mats)]

    def identity(self):
        return np.eye(self.n, dtype=np.int64)

    def multiply(self, x, y):
        return x @ y

    def invert(self, x):
        return np.rint(np.linalg.inv(x)).astype(np.int64)

    def key(self, x):
        return x.tobytes()


class LamplighterBackend(MarkedGroupBackend):
    """F wr Z, with either the standard or the Diestel-Leader generating set.

    The standard set is {s, s^-1} together with t@0 for t in ``lamp_gens``.
    """

    def __init__(self, f: TableGroup, lamp_gens: Sequence[int] | None = None, gens: str = "standard"):
        self.f = f
        if gens == "standard":
            lamp_gens = list(lamp_gens) if lamp_gens is not None else [1]
            self.generators = [Generator("s", lamp_shift(1)), Generator("S", lamp_shift(-1))]
            self.generators += [Generator(f"t{h}", lamp_at(h, 0)) for h in lamp_gens]
        elif gens == "dl":
            self.generators = [Generator(l, g) for l, g in diestel_leader_generators(f)]
        else:
            raise ValueError(f"unknown generating set {gens!r}")

    def identity(self):
        return lamp_identity()

    def multiply(self, x, y):
        return lamp_mul(x, y, self.f)

    def invert(self, x):
        return lamp_inv(x, self.f)


class RegularWreathBackend(MarkedGroupBackend):
    """H wr G for free-like G acting on itself, generated by T@1 and S.

    Elements c g are stored as (sorted lamp tuple, g) where lamp positions
    are elements of G (reduced tuples).
    """

    def __init__(self, h: TableGroup, h_gens: Sequence[int], base: FreeLikeBackend):
        self.h = h
        self.base = base
        self.generators = [Generator(g.label, ((), g.element)) for g in base.generators]
        for x in h_gens:
            self.generators.append(Generator(f"t{x}", ((((), x),), ())))

    def identity(self):
        return ((), ())

    def multiply(self, x, y):
        cx, gx = x
        cy, gy = y
        lamps = dict(cx)
        # c g . c' g' = c (c' translated by g) g g', where a lamp at p moves to g p
        for pos, val in cy:
            p = self.base.multiply(gx, pos)
            lamps[p] = self.h.mul(lamps.get(p, 0), val)
        return (tuple(sorted((p, v) for p, v in lamps.items() if v)), self.base.multiply(gx, gy))

    def invert(self, x):
        c, g = x
        ginv = self.base.invert(g)
        inv_c = (tuple(sorted((self.base.multiply(ginv, p), self.h.inv(v)) for p, v in c)), ())
        return self.multiply(inv_c, ((), self.base.invert(g)))


class FiniteWreathBackend(MarkedGroupBackend):
    def __init__(self, gens: Sequence[FiniteWreathElement], labels: Sequence[str] | None = None):
        labels = labels or [f"w{i}" for i in range(len(gens))]
        self.generators = [Generator(l, g) for l, g in zip(labels, gens)]
        self._e = wr_identity(gens[0].group, gens[0].degree)

    def identity(self):
        return self._e

    def multiply(self, x, y):
        return wr_mul(x, y)

    def invert(self, x):
        return wr_inv(x)


class GrigBackend(MarkedGroupBackend):
    """G_omega with generators given as words; elements are portrait ids."""

    def __init__(self, group: GrigGroup | None = None, words: Sequence[str] = ("a", "b", "c", "d"),
                 weights: dict | None = None, shift: int = 0):
        self.group = group or grig_group()
        self.group.require_faithful()
        self.engine = self.group.engine
        self.shift = self.group.canon(shift)
        weights = weights or {}
        self.generators = [
            Generator(w, self.engine.from_word(reduce(w), self.shift), weights.get(w, 1))
            for w in words
        ]

    def identity(self):
        return self.engine.identity(self.shift)

    def multiply(self, x, y):
        return self.engine.mul(x, y)

    def invert(self, x):
        return self.engine.inv(x)

    def element(self, word: str):
        return self.engine.from_word(reduce(word), self.shift)


def grigorchuk_backend(omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                       words: Sequence[str] = ("a", "b", "c", "d"), weights=None,
                       shift: int = 0) -> GrigBackend:
    return GrigBackend(grig_group(omega, preset), words, weights, shift)


def cyclic_backend(q: int) -> TableGroupBackend:
    g = cyclic_group(q)
    gens = [1] if q == 2 else [1, q - 1]
    return TableGroupBackend(g, gens)
