"""Truncated power series with exact rational coefficients.

Besides the ring operations, this module holds the growth-series
combinators: free-like groups, direct and free products, graph products
and the two wreath-product formulas.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError, ResourceError


class Series:
    """A power series known exactly up to (and including) z^order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = tuple(cs)

    # construction helpers
    @classmethod
    def constant(cls, c, order: int) -> "Series":
        return cls([c], order)

    @classmethod
    def z(cls, order: int, power: int = 1, coeff=1) -> "Series":
        cs = [0] * (order + 1)
        if power <= order:
            cs[power] = coeff
        return cls(cs)

    @classmethod
    def polynomial(cls, coeffs: Sequence, order: int) -> "Series":
        return cls(coeffs, order)

    @classmethod
    def rational(cls, num: Sequence, den: Sequence, order: int) -> "Series":
        return cls.polynomial(num, order) * cls.polynomial(den, order).inverse()

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise PreconditionError(f"cannot extend a series known to order {self.order}")
        return Series(self.coeffs[: order + 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other) -> "Series":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs])

    def __sub__(self, other) -> "Series":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Series":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            c = Fraction(other)
            return Series([c * x for x in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return Series(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Series":
        if k < 0:
            return self.inverse() ** (-k)
        result = Series.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Series":
        a = self.coeffs
        if a[0] == 0:
            raise PreconditionError("series with zero constant term is not invertible")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / a[0]
        for k in range(1, n + 1):
            s = sum((a[i] * inv[k - i] for i in range(1, k + 1) if a[i]), Fraction(0))
            inv[k] = -s * inv[0]
        return Series(inv)

    def __truediv__(self, other) -> "Series":
        if isinstance(other, Series):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other) -> "Series":
        return self._coerce(other) * self.inverse()

    def shift(self, k: int = 1) -> "Series":
        """Multiply by z^k, keeping the truncation order."""
        return Series([0] * k + list(self.coeffs[: self.order + 1 - k]), self.order)

    def partial_sums(self) -> list[Fraction]:
        out, acc = [], Fraction(0)
        for c in self.coeffs:
            acc += c
            out.append(acc)
        return out

    def as_ints(self) -> list[int]:
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError(f"non-integer coefficient {c}")
            out.append(int(c))
        return out

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs)
        return f"Series([{shown}])"


def star(f: Series) -> Series:
    """Quasi-inverse 1 + F + F^2 + ... = (1 - F)^-1."""
    if f[0] != 0:
        raise PreconditionError("quasi-inversion needs F(0) = 0")
    return (1 - f).inverse()


def series_free_like(m1: int, m2: int, order: int) -> Series:
    """Growth series of a free product of m1 copies of C2 and m2 copies of Z.

    The Cayley graph is the m-regular tree with m = m1 + 2*m2.
    """
    m = m1 + 2 * m2
    if m < 1:
        raise PreconditionError("need at least one free-like factor")
    return Series.rational([1, 0, -1], [1, -m, m - 1], order)


def dirprod_series(a: Series, b: Series) -> Series:
    return a * b


def _check_unit(*ss: Series) -> None:
    for s in ss:
        if s[0] != 1:
            raise PreconditionError("growth series must have constant term 1")


def freeprod_series(a: Series, b: Series) -> Series:
    _check_unit(a, b)
    return (a.inverse() + b.inverse() - 1).inverse()


def cliques(vertices: Sequence, edges: Iterable[tuple]) -> list[tuple]:
    """All cliques, the empty one included, of a simple graph."""
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    out: list[tuple] = []

    def grow(clique: tuple, candidates: list):
        out.append(clique)
        for i, v in enumerate(candidates):
            grow(clique + (v,), [w for w in candidates[i + 1:] if w in adj[v]])

    grow((), list(vertices))
    return out


def graphprod_series(
    vertices: Sequence, edges: Iterable[tuple], factors: Mapping, max_vertices: int = 16
) -> Series:
    """Growth series of a graph product with vertex groups of given series."""
    if len(vertices) > max_vertices:
        raise ResourceError(f"graph products are limited to {max_vertices} vertices")
    factors = {v: factors[v] for v in vertices}
    _check_unit(*factors.values())
    order = min(s.order for s in factors.values())
    reduced = {v: factors[v].truncate(order).inverse() - 1 for v in vertices}
    total = Series.constant(0, order)
    for clique in cliques(vertices, edges):
        term = Series.constant(1, order)
        for v in clique:
            term = term * reduced[v]
        total = total + term
    return total.inverse()


def finiteX_wreath_series(gamma_h: Series, gamma_g: Series, d: int) -> Series:
    """Growth series of H wr_X G for a finite set X of size d."""
    return gamma_h ** d * gamma_g


def _fixed_point(step, start, order: int):
    """Iterate ``step`` until the truncated value stops changing."""
    cur = start
    for _ in range(order + 2):
        nxt = step(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError("z-adic iteration failed to stabilise")


def parry_wreath_series(gamma_h: Series, m1: int, m2: int, order: int | None = None) -> Series:
    """Growth series of H wr G for free-like G, generated by T@1 and S.

    Only the image under the augmentation map is computed; all the
    subtree series collapse to a single unknown E, solved by z-adic
    fixed-point iteration.
    """
    _check_unit(gamma_h)
    m = m1 + 2 * m2
    if m < 1:
        raise PreconditionError("need at least one free-like factor")
    n = gamma_h.order if order is None else order
    x = gamma_h.truncate(n)
    y = x - 1
    z = Series.z(n)
    z2 = Series.z(n, 2)

    e = _fixed_point(lambda e: 1 + y * z2 + x * (e ** (m - 1) - 1) * z2, Series.constant(1, n), n)
    d = e
    dm2 = d ** (m - 2) if m >= 2 else Series.constant(0, n)
    # vertices on the geodesic to the endpoint each carry an arbitrary lamp
    f = _fixed_point(lambda f: x * (d ** (m - 1) + (m - 1) * dm2 * z * f), Series.constant(0, n), n)
    return x * (d ** m + m * d ** (m - 1) * z * f)


def parry_wreath_series_general(
    gamma_h: Series, m1: int, m2: int, order: int | None = None
) -> Series:
    """Same count as :func:`parry_wreath_series`, one unknown per generator.

    Generators are ``("c", i)`` for involutions (their own inverse) and
    ``("x", j, +1) / ("x", j, -1)`` for the two directions of a Z factor.
    Each subtree series excludes the inverse of the edge it hangs from.
    """
    _check_unit(gamma_h)
    gens: list[tuple] = [("c", i) for i in range(m1)]
    for j in range(m2):
        gens += [("x", j, 1), ("x", j, -1)]
    if not gens:
        raise PreconditionError("need at least one free-like factor")

    def inv(s):
        return s if s[0] == "c" else ("x", s[1], -s[2])

    n = gamma_h.order if order is None else order
    x = gamma_h.truncate(n)
    y = x - 1
    z = Series.z(n)
    z2 = Series.z(n, 2)
    one = Series.constant(1, n)

    def prod(series_map, skip):
        out = one
        for t in gens:
            if t not in skip:
                out = out * series_map[t]
        return out

    def e_step(es):
        return {s: 1 + y * z2 + x * (prod(es, {inv(s)}) - 1) * z2 for s in gens}

    es = {s: one for s in gens}
    for _ in range(n + 2):
        nxt = e_step(es)
        if nxt == es:
            break
        es = nxt
    else:
        raise RuntimeError("z-adic iteration failed to stabilise")
    ds = es

    def f_step(fs):
        out = {}
        for s in gens:
            acc = prod(ds, {inv(s)})
            for t in gens:
                if t != inv(s):
                    acc = acc + prod(ds, {t, inv(s)}) * z * fs[t]
            out[s] = x * acc
        return out

    fs = {s: Series.constant(0, n) for s in gens}
    for _ in range(n + 2):
        nxt = f_step(fs)
        if nxt == fs:
            break
        fs = nxt
    else:
        raise RuntimeError("z-adic iteration failed to stabilise")

    total = prod(ds, set())
    for s in gens:
        total = total + prod(ds, {s}) * z * fs[s]
    return x * total


def cyclic_series(q: int, order: int) -> Series:
    """Growth series of C_q generated by a single element and its inverse."""
    cs = [0] * (order + 1)
    for k in range(q):
        r = min(k, q - k)
        if r <= order:
            cs[r] += 1
    return Series(cs)
