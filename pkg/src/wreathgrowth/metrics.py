"""The simplex of generator norms for G_omega, and the omega builder.

A point p = (beta, gamma, delta) of the open simplex

    Delta = {beta + gamma + delta = 1, max < 1/2}

assigns norms to a, b, c, d. The matrices M_0, M_1, M_2 move such a point
one step along omega; eta is the expansion factor and mu the margin.

Coordinates may be ``Fraction`` (exact mode) or ``float``; the algebra
below works for both. The Hilbert metric and fixed points are floating.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, UnsupportedInputError
from .selfsim import FIRST_GRIGORCHUK, OmegaSeq

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
WINDOW_SLACK = math.log(1.05)

M = (
    np.array([[1, 1, 1], [0, 2, 0], [0, 0, 2]]),
    np.array([[2, 0, 0], [1, 1, 1], [0, 0, 2]]),
    np.array([[2, 0, 0], [0, 2, 0], [1, 1, 1]]),
)
CYCLE = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])


@dataclass(frozen=True)
class SimplexPoint:
    beta: float | Fraction
    gamma: float | Fraction
    delta: float | Fraction

    def __post_init__(self):
        c = self.coords
        exact = all(isinstance(x, (Fraction, int)) for x in c)
        total = sum(c)
        if exact:
            bad = total != 1
        else:
            bad = abs(float(total) - 1.0) > 1e-12
        if bad or min(c) <= 0 or max(c) >= Fraction(1, 2):
            raise DomainError(f"point {tuple(float(x) for x in c)} is not in the open simplex")

    @property
    def coords(self) -> tuple:
        return (self.beta, self.gamma, self.delta)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (Fraction, int)) for x in self.coords)

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.coords])

    @classmethod
    def from_array(cls, v) -> "SimplexPoint":
        v = np.asarray(v, dtype=float)
        v = v / v.sum()
        return cls(float(v[0]), float(v[1]), float(v[2]))


BARYCENTER = SimplexPoint(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))


def _as_point(p) -> SimplexPoint:
    if isinstance(p, SimplexPoint):
        return p
    return SimplexPoint(*p)


def _apply(p: SimplexPoint, lam: int) -> tuple:
    if lam not in (0, 1, 2):
        raise PreconditionError(f"lambda must be 0, 1 or 2, not {lam!r}")
    b, g, d = p.coords
    one = b + g + d
    if lam == 0:
        return (one, 2 * g, 2 * d)
    if lam == 1:
        return (2 * b, one, 2 * d)
    return (2 * b, 2 * g, one)


def eta(p, lam: int):
    """Column sum of M_lam p; for lam = 0 this is 3 - 2 beta."""
    return sum(_apply(_as_point(p), lam))


def mbar(p, lam: int) -> SimplexPoint:
    p = _as_point(p)
    v = _apply(p, lam)
    s = sum(v)
    if p.exact:
        return SimplexPoint(*(Fraction(x) / s for x in v))
    return SimplexPoint(*(float(x) / float(s) for x in v))


def mu(p):
    return min(_as_point(p).coords)


def hilbert_distance(p, q) -> float:
    """log of the cross-ratio (p, q; V-, V+) on the chord through p and q."""
    x = _as_point(p).as_float()
    y = _as_point(q).as_float()
    d = y - x
    if np.max(np.abs(d)) < 1e-15:
        return 0.0
    # the boundary of Delta inside the plane is where one coordinate hits 1/2
    t_plus, t_minus = math.inf, -math.inf
    for i in range(3):
        if abs(d[i]) < 1e-300:
            continue
        t = (0.5 - x[i]) / d[i]
        if t > 0:
            t_plus = min(t_plus, t)
        else:
            t_minus = max(t_minus, t)
    if not (t_plus > 1 and t_minus < 0) or math.isinf(t_plus) or math.isinf(t_minus):
        raise DomainError(f"degenerate chord: t- = {t_minus}, t+ = {t_plus}")
    return math.log((t_plus * (1 - t_minus)) / ((t_plus - 1) * (-t_minus)))


def eta_word(p, word: str) -> float:
    """eta(p, w_0 ... w_{n-1}): product of eta along the forward orbit."""
    total = 1.0
    p = _as_point(p)
    for ch in word:
        total *= float(eta(p, int(ch)))
        p = mbar(p, int(ch))
    return total


def log_eta_word(p, word: str) -> tuple[float, tuple]:
    """Sum of log eta along the word, and the coordinates reached."""
    total = 0.0
    v = tuple(float(x) for x in _as_point(p).coords)
    for ch in word:
        v, e = _raw_step(v, int(ch))
        total += math.log(e)
    return total, v


def _raw_step(v: tuple, lam: int) -> tuple[tuple, float]:
    """Unchecked floating step: (Mbar_lam v, eta(v, lam)).

    Long runs of one letter push a coordinate to within rounding of 1/2,
    where the checked constructor would refuse the point; eta is
    continuous there (it tends to 2), so the raw form is used in loops.
    """
    b, g, d = v
    one = b + g + d
    if lam == 0:
        w = (one, 2 * g, 2 * d)
    elif lam == 1:
        w = (2 * b, one, 2 * d)
    else:
        w = (2 * b, 2 * g, one)
    s = w[0] + w[1] + w[2]
    return (w[0] / s, w[1] / s, w[2] / s), s


def fixed_point_tail(tail: str = "012", tol: float = 1e-13, seed=None,
                     max_iter: int = 100_000) -> SimplexPoint:
    """p_omega for omega whose negative part is ... tail tail tail.

    One period applies M-bar for tail[0] first and tail[-1] last, so for
    tail 012 the period map is Mbar_2 Mbar_1 Mbar_0.
    """
    if tol <= 0:
        raise PreconditionError("tolerance must be positive")
    if not tail or set(tail) - set("012"):
        raise PreconditionError(f"tail must be a non-empty word over 012, not {tail!r}")
    p = _as_point(seed) if seed is not None else BARYCENTER
    p = SimplexPoint(*(float(x) for x in p.coords))
    for _ in range(max_iter):
        q = p
        for ch in tail:
            q = mbar(q, int(ch))
        step = hilbert_distance(p, q) if q != p else 0.0
        p = q
        if step < tol:
            return p
    raise UnsupportedInputError(f"no convergence for tail {tail!r}; does it use every symbol?")


def eta_plus(tol: float = 1e-14) -> float:
    """Positive root of T^3 - T^2 - 2T - 4, by bisection."""
    poly = lambda t: t ** 3 - t ** 2 - 2 * t - 4
    lo, hi = 2.46, 2.47
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if poly(mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def alpha() -> float:
    return LOG2 / math.log(eta_plus())


def spectral_radius_cycle(iterations: int = 500) -> float:
    """Power iteration for M_0 times the cyclic coordinate permutation."""
    a = (M[0] @ CYCLE).astype(float)
    v = np.ones(3)
    lam = 0.0
    for _ in range(iterations):
        w = a @ v
        lam = w.sum() / v.sum()
        v = w / w.sum()
    return float(lam)


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class NormAssignment:
    point: SimplexPoint
    a: float
    b: float
    c: float
    d: float
    eta: float  # eta(p, omega_0), when omega_0 is known
    mu: float

    def weights(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def norms_from_point(p, lam: int = 0) -> NormAssignment:
    p = _as_point(p)
    b, g, d = p.coords
    na = 1 - 2 * max(b, g, d)
    return NormAssignment(p, na, b - na, g - na, d - na, eta(p, lam), mu(p))


def point_along(omega: OmegaSeq, k: int, negative_tail: str = "012") -> SimplexPoint:
    """p_{sigma^k omega}, with the negative part of omega fixed to the given tail."""
    p = fixed_point_tail(negative_tail)
    for i in range(k):
        p = mbar(p, omega.letter(i))
    return p


@dataclass
class SupercontractReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    conjugate_checked: int = 0
    conjugate_failures: list = field(default_factory=list)
    eta: float = 0.0
    max_ratio: float = 0.0  # max of lhs / rhs over non-identity elements
    tightest: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.conjugate_failures

    def as_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": len(self.violations),
            "conjugate_checked": self.conjugate_checked,
            "conjugate_failures": len(self.conjugate_failures),
            "eta": self.eta,
            "max_ratio": self.max_ratio,
            "ok": self.ok,
        }


def supercontract_check(omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "family",
                        radius: float | None = None, letters: int | None = 8,
                        conjugates: bool = True, negative_tail: str = "012",
                        tol: float = 1e-9) -> SupercontractReport:
    """Check |g_0| + |g_1| <= (2/eta)(|g| + |a|) over a ball of G_omega.

    The ball is either all elements of at most ``letters`` letters in
    a, b, c, d, or all elements of weighted norm at most ``radius``.
    Norms are exact weighted word norms, found by shortest-path search in
    G_omega and in G_{sigma omega} with the weights of p_omega and
    p_{sigma omega}. The check runs in the family model; the fsa preset
    is the same group at omega = (012)^infinity and is accepted there.
    """
    from .backends import GrigBackend
    from .growth import enumerate_ball
    from .selfsim import grig_group

    if preset == "fsa" and omega != FIRST_GRIGORCHUK:
        raise UnsupportedInputError("the fsa preset only describes omega = (012)^infinity")
    group = grig_group(omega, "family")
    group.require_faithful()
    lam = omega.letter(0)
    p = point_along(omega, 0, negative_tail)
    q = mbar(p, lam)
    n0 = norms_from_point(p, lam)
    n1 = norms_from_point(q, omega.letter(1))
    eta0 = float(n0.eta)
    wmax = max(n0.weights().values())
    gens = ("a", "b", "c", "d")
    g_back = GrigBackend(group, gens, n0.weights(), 0)
    s_back = GrigBackend(group, gens, n1.weights(), 1)
    engine = g_back.engine

    if letters is not None:
        plain = enumerate_ball(GrigBackend(group, gens, None, 0), letters)
        elements = set(plain.norms)
        reach = letters * wmax
    else:
        if radius is None:
            raise PreconditionError("give either a letter count or a weighted radius")
        reach = radius
        elements = None
    extra = 2 * wmax if conjugates else 0.0
    ball = enumerate_ball(g_back, reach + extra, weighted=True)
    if elements is None:
        elements = {k for k, n in ball.norms.items() if n <= reach + tol}
    sball = enumerate_ball(s_back, 2 / eta0 * (reach + extra + n0.a) + tol, weighted=True)

    rep = SupercontractReport(eta=eta0)

    def sides(g):
        g0, g1 = engine.section(g, 0), engine.section(g, 1)
        return sball.norms[g0] + sball.norms[g1], ball.norms[g]

    for g in sorted(elements):
        lhs, ng = sides(g)
        rhs = 2 / eta0 * (ng + n0.a)
        rep.checked += 1
        if lhs > rhs + tol:
            rep.violations.append((engine.to_portrait(g).text(), lhs, rhs))
        if ng > 0:
            ratio = lhs / rhs
            if ratio > rep.max_ratio + tol:
                rep.max_ratio, rep.tightest = ratio, [g]
            elif abs(ratio - rep.max_ratio) <= tol:
                rep.tightest.append(g)
    if conjugates:
        conj = [g_back.identity()] + [g_back.element(x) for x in gens]
        nucleus = {g_back.element(x) for x in "bcd"}
        for g in sorted(elements):
            if g in nucleus:
                continue
            rep.conjugate_checked += 1
            good = False
            for x in conj:
                h = engine.mul(engine.mul(x, g), x)
                if h not in ball.norms:
                    continue
                lhs, nh = sides(h)
                if lhs <= 2 / eta0 * nh + tol:
                    good = True
                    break
            if not good:
                rep.conjugate_failures.append(engine.to_portrait(g).text())
    return rep


def upper_recursion_check(omega: OmegaSeq = FIRST_GRIGORCHUK, radii: Sequence[float] = (0.5, 1.0, 1.5),
                          negative_tail: str = "012", tol: float = 1e-9) -> list[dict]:
    """The recursion step v_omega(R + mu) <= 2 #{(g_0, g_1): |g_0| + |g_1| <= (2/eta)(R + mu + |a|)}.

    The right side counts pairs of elements of G_{sigma omega}; this is
    the count behind the displayed sum of products 2 v(R_0) v(R_1).
    """
    from .backends import GrigBackend
    from .growth import enumerate_ball
    from .selfsim import grig_group

    group = grig_group(omega, "family")
    lam = omega.letter(0)
    p = point_along(omega, 0, negative_tail)
    q = mbar(p, lam)
    n0 = norms_from_point(p, lam)
    n1 = norms_from_point(q, omega.letter(1))
    eta0 = float(n0.eta)
    gens = ("a", "b", "c", "d")
    rmax = max(radii)
    ball = enumerate_ball(GrigBackend(group, gens, n0.weights(), 0), rmax + float(n0.mu), weighted=True)
    bound_max = 2 / eta0 * (rmax + float(n0.mu) + float(n0.a))
    sball = enumerate_ball(GrigBackend(group, gens, n1.weights(), 1), bound_max + tol, weighted=True)
    snorms = np.sort(np.array(list(sball.norms.values())))
    out = []
    for r in radii:
        lhs = ball.v(r + float(n0.mu))
        bound = 2 / eta0 * (r + float(n0.mu) + float(n0.a))
        pairs = int(sum(np.searchsorted(snorms, bound - x + tol, side="right") for x in snorms if x <= bound + tol))
        out.append({"R": r, "lhs": lhs, "bound": bound, "rhs": 2 * pairs, "ok": lhs <= 2 * pairs})
    return out


# ---------------------------------------------------------------------------
# growth profiles and the omega builder


@dataclass
class GrowthProfile:
    """log g(R) as a function of log R, with g(1) = 1."""

    name: str
    G: Callable[[float], float]
    monotone: bool = True

    def __call__(self, rho: float) -> float:
        return self.G(rho)

    def validate(self, rho_max: float | None = None, points: int = 2001, rel: float = 1e-9) -> list:
        """Grid points where g(2R) <= 2 g(R) <= g(eta_+ R) fails."""
        le = math.log(eta_plus())
        rho_max = 200 * le if rho_max is None else rho_max
        bad = []
        prev = -math.inf
        for rho in np.linspace(0.0, rho_max, points):
            g = self.G(rho)
            lo = self.G(rho + LOG2)
            hi = self.G(rho + le)
            slack = rel * max(1.0, abs(g))
            if lo > g + LOG2 + slack or g + LOG2 > hi + slack:
                bad.append((float(rho), lo - g, hi - g))
            if g < prev - slack:
                bad.append((float(rho), "decreasing"))
            prev = g
        if abs(self.G(0.0)) > 1e-12:
            bad.append((0.0, "g(1) != 1"))
        return bad


def profile_exp_pow(a: float) -> GrowthProfile:
    return GrowthProfile(f"exp_pow:alpha={a}", lambda rho: a * rho)


def profile_exp() -> GrowthProfile:
    return GrowthProfile("exp", lambda rho: rho)


def profile_exp_over_log(c: float = 4.0) -> GrowthProfile:
    """g(R) = c R / (c + log R), i.e. f = exp(R / log R) up to equivalence."""
    return GrowthProfile(f"exp_over_log:c={c}", lambda rho: rho + math.log(c) - math.log(c + rho))


def profile_exp_over_loglog(c: float = 2.0) -> GrowthProfile:
    """g(R) = R log(K) / log(K + log R) with K = e^c."""
    k = math.exp(c)
    return GrowthProfile(f"exp_over_loglog:c={c}",
                         lambda rho: rho + math.log(math.log(k)) - math.log(math.log(k + rho)))


def profile_from_csv(path: str) -> GrowthProfile:
    """Piecewise linear interpolation of (log R, log g) rows, extended linearly."""
    xs, ys = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                continue  # header
            xs.append(x)
            ys.append(y)
    if len(xs) < 2:
        raise PreconditionError(f"{path}: need at least two rows")
    order = np.argsort(xs)
    xa, ya = np.array(xs)[order], np.array(ys)[order]
    slope = (ya[-1] - ya[-2]) / (xa[-1] - xa[-2])

    def G(rho):
        if rho <= xa[-1]:
            return float(np.interp(rho, xa, ya))
        return float(ya[-1] + slope * (rho - xa[-1]))

    return GrowthProfile(f"csv:{path}", G)


def parse_profile(text: str) -> GrowthProfile:
    """Read ``exp_pow:alpha=0.8``, ``exp``, ``exp_over_log``, ``exp_over_loglog`` or ``csv:path``."""
    name, _, params = text.partition(":")
    name = name.strip()
    if name == "csv":
        return profile_from_csv(params)
    kw = {}
    for item in filter(None, params.split(",")):
        k, _, v = item.partition("=")
        v = v.strip()
        if v in ("alpha", "log2/logeta+"):
            kw[k.strip()] = alpha()
        else:
            try:
                kw[k.strip()] = float(v)
            except ValueError as exc:
                raise PreconditionError(f"bad profile parameter {item!r}") from exc
    try:
        if name == "exp_pow":
            return profile_exp_pow(kw.get("alpha", alpha()))
        if name == "exp":
            return profile_exp()
        if name == "exp_over_log":
            return profile_exp_over_log(kw.get("c", 4.0))
        if name == "exp_over_loglog":
            return profile_exp_over_loglog(kw.get("c", 2.0))
    except TypeError as exc:
        raise PreconditionError(str(exc)) from exc
    raise PreconditionError(f"unknown profile {name!r}")


@dataclass
class BuildResult:
    syllables: list  # ("012", i) and ("2", j) pairs in order
    log: list  # per boundary: dict(k, kind, G, target, ratio, window, ok)
    k: int
    L: float

    @property
    def word(self) -> str:
        return "".join(b * r for b, r in self.syllables)

    @property
    def ok(self) -> bool:
        return all(e["ok"] for e in self.log)

    def letter_fraction(self) -> float:
        """Fraction of letters lying in 012-syllables."""
        n = sum(len(b) * r for b, r in self.syllables)
        m = sum(3 * r for b, r in self.syllables if b == "012")
        return m / n if n else 0.0

    def omega(self) -> OmegaSeq:
        return OmegaSeq(tuple(self.syllables), "012")

    def syllable_string(self) -> str:
        return " ".join(f"({b})^{r}" if len(b) > 1 else f"{b}^{r}" for b, r in self.syllables)


def omega_build(profile: GrowthProfile, k_max: int = 3000, validate: bool = True) -> BuildResult:
    """Greedy construction of omega = (012)^i1 2^j1 (012)^i2 2^j2 ... for a profile.

    Everything is kept in log scale: L is log eta(p_0, omega'), and the
    comparison g(eta) against 2^k becomes G(L) against k log 2.
    """
    if k_max > 10_000 or k_max < 1:
        raise PreconditionError("k_max must lie in 1..10000")
    if validate:
        bad = profile.validate()
        if bad:
            raise PreconditionError(f"profile {profile.name} violates g(2R) <= 2g(R) <= g(eta_+ R) at "
                                    f"{len(bad)} grid points, first {bad[:5]}")
    p = tuple(fixed_point_tail("012").coords)
    L, k = 0.0, 0
    syllables: list = []
    log: list = []

    def step(lam):
        nonlocal p, L, k
        p, e = _raw_step(p, lam)
        L += math.log(e)
        k += 1

    def boundary(kind):
        G, target = profile(L), k * LOG2
        lo, hi = (target, target + 3 * LOG3) if kind == "012" else (target - LOG2, target)
        ok = lo - WINDOW_SLACK <= G <= hi + WINDOW_SLACK
        log.append({"k": k, "kind": kind, "G": G, "target": target,
                    "ratio": G / target if target else math.nan, "window": (lo, hi), "ok": ok})

    while k < k_max:
        i = 0
        while k < k_max and (i == 0 or profile(L) < k * LOG2):
            for ch in (0, 1, 2):
                step(ch)
            i += 1
        syllables.append(("012", i))
        if profile(L) >= k * LOG2:
            boundary("012")
        if k >= k_max:
            break
        j = 0
        while k < k_max and (j == 0 or profile(L) > k * LOG2):
            step(2)
            j += 1
        syllables.append(("2", j))
        if profile(L) <= k * LOG2:
            boundary("2")
    return BuildResult(syllables, log, k, L)


def block_eta_bounds(n_max: int = 30, grid: int = 100, seed: int = 0) -> dict:
    """Empirical constants A' and B' in eta(p, (012)^n) >= A' eta_+^{3n}, eta(p, 2^n) <= B' 2^n.

    The grid is ``grid`` points of Delta: a triangular lattice plus
    random fill, away from the boundary by at least 1e-3.
    """
    le = math.log(eta_plus())
    pts = _simplex_grid(grid, seed)
    lower = np.full(n_max + 1, np.inf)
    upper = np.full(n_max + 1, -np.inf)
    for x in pts:
        p = tuple(float(t) for t in x)
        acc, q = 0.0, p
        lower[0] = min(lower[0], 1.0)
        for n in range(1, n_max + 1):
            s, q = log_eta_word(q, "012")
            acc += s
            lower[n] = min(lower[n], math.exp(acc - 3 * n * le))
        acc, q = 0.0, p
        upper[0] = max(upper[0], 1.0)
        for n in range(1, n_max + 1):
            s, q = log_eta_word(q, "2")
            acc += s
            upper[n] = max(upper[n], math.exp(acc - n * LOG2))
    return {"n_max": n_max, "points": len(pts), "lower": lower.tolist(), "upper": upper.tolist(),
            "A_prime": float(lower.min()), "B_prime": float(upper.max())}


def _simplex_grid(count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    out = []
    m = 12
    for i in range(1, m):
        for j in range(1, m - i):
            v = np.array([i, j, m - i - j], dtype=float) / m
            # map the standard simplex onto Delta via its vertices (1/2,1/2,0), ...
            w = 0.5 * (np.ones(3) - v)
            if len(out) < count and w.max() < 0.5 - 1e-3 and w.min() > 1e-3:
                out.append(w)
    while len(out) < count:
        v = rng.dirichlet(np.ones(3))
        w = 0.5 * (np.ones(3) - v)
        if w.max() < 0.5 - 1e-3:
            out.append(w)
    return out


def mu_window_check(omega: OmegaSeq, k_max: int, low: float = 0.2, high: float = 1 / 3) -> dict:
    """Track p_k forward from p_0 and record min/max of mu(p_k) for k <= k_max."""
    p = tuple(fixed_point_tail("012").coords)
    values = [min(p)]
    for k in range(k_max):
        p, _ = _raw_step(p, omega.letter(k))
        values.append(min(p))
    lo, hi = min(values), max(values)
    return {"k_max": k_max, "min": lo, "max": hi, "window": (low, high),
            "ok": low < lo and hi < high}
