"""Inverted orbits of words in G_omega acting on the orbit of 1̄.

For a word w = w_1 ... w_l the inverted orbit is the set of points
xi w_{i+1} ... w_l, 0 <= i <= l. Prepending a letter x to w adds the
single point xi x w, which is how the enumerations below build the sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceError, SpecParseError
from .metrics import eta, mbar, mu, norms_from_point, point_along
from .schreier import RAY, OrbitPoint, act_orbit_point, act_orbit_point_element
from .selfsim import FIRST_GRIGORCHUK, OmegaSeq, grig_group

DEFAULT_MAX_LENGTH = 14


@dataclass(frozen=True)
class InvertedOrbit:
    word: str
    points: frozenset

    def __len__(self) -> int:
        return len(self.points)

    def names(self) -> list[str]:
        return sorted(str(p) for p in self.points)


def inverted_orbit(word: str, xi: OrbitPoint = RAY, omega: OmegaSeq = FIRST_GRIGORCHUK,
                   preset: str = "fsa") -> InvertedOrbit:
    """All points xi s for suffixes s of the word, the empty suffix included.

    Suffix elements are accumulated right to left as portraits, so each
    point costs one walk down the tree rather than one action per letter.
    """
    group = grig_group(omega, preset)
    engine = group.engine
    suffix = engine.identity(0)
    points = {xi}
    for ch in reversed(word):
        suffix = engine.mul(engine.from_word(ch, 0), suffix)
        points.add(act_orbit_point_element(xi, suffix, engine))
    return InvertedOrbit(word, frozenset(points))


def inverted_orbit_naive(word: str, xi: OrbitPoint = RAY, omega: OmegaSeq = FIRST_GRIGORCHUK,
                         preset: str = "fsa") -> InvertedOrbit:
    """Same set, acting letter by letter on every suffix (the slow oracle)."""
    group = grig_group(omega, preset)
    pts = {act_orbit_point(xi, word[i:], group) for i in range(len(word) + 1)}
    return InvertedOrbit(word, frozenset(pts))


# ---------------------------------------------------------------------------
# enumeration over words of the monoid R


@dataclass
class OrbitStats:
    radius: float
    delta: int
    witness: str
    sigma: int
    words: int
    delta_by_radius: list = field(default_factory=list)
    sigma_by_radius: list = field(default_factory=list)


def _enumerate(R: float, omega, preset, xi, weights, max_length, budget) -> OrbitStats:
    """Depth-first search over words of the monoid R, built by prepending letters.

    R is the free monoid on a, b, c, d modulo b^2 = c^2 = d^2 = 1 and
    bc = d, cd = b, db = c; its reduced words have no two adjacent b, c, d
    letters but may repeat a.
    """
    group = grig_group(omega, preset)
    engine = group.engine
    if weights is None:
        if R > max_length:
            raise ResourceError(f"radius {R} is beyond the enumeration bound {max_length}")
        weights = {x: 1 for x in "abcd"}
    elif min(weights.values()) <= 0:
        raise ResourceError("weighted enumeration needs positive weights")
    letters = {x: engine.from_word(x, 0) for x in "abcd"}
    # b, c, d fixing xi makes bc -> d, bb -> 1, ... harmless, so adjacent
    # b, c, d letters can be skipped; a^2 is never cancelled (xi a != xi)
    prune = all(act_orbit_point_element(xi, letters[x], engine) == xi for x in "bcd")
    unweighted = all(w == 1 for w in weights.values())
    nbins = int(math.floor(R + 1e-9)) + 1 if unweighted else 1
    best = [(1, "")] * nbins
    sets_by_len: list[set] = [set() for _ in range(nbins)]
    all_sets: set = set()
    start = frozenset([xi])
    count = 0
    # stack entries: (word, element, orbit, weighted length)
    stack = [("", engine.identity(0), start, 0.0)]
    while stack:
        word, g, orb, length = stack.pop()
        count += 1
        if count > budget:
            raise ResourceError(f"word budget {budget} exceeded")
        b = int(round(length)) if unweighted else 0
        all_sets.add(orb)
        sets_by_len[b].add(orb)
        if len(orb) > best[b][0]:
            best[b] = (len(orb), word)
        nxt = "a" if prune and word[:1] in ("b", "c", "d") else "abcd"
        for x in nxt:
            nl = length + weights[x]
            if nl > R + 1e-9:
                continue
            h = engine.mul(letters[x], g)
            new = orb | {act_orbit_point_element(xi, h, engine)}
            stack.append((x + word, h, new, nl))
    # cumulative over radius
    delta_by, sigma_by = [], []
    acc: set = set()
    top = (0, "")
    for r in range(nbins):
        acc |= sets_by_len[r]
        if best[r][0] > top[0]:
            top = best[r]
        delta_by.append(top[0])
        sigma_by.append(len(acc))
    overall = max(best, key=lambda t: t[0])
    return OrbitStats(R, overall[0], overall[1], len(all_sets), count, delta_by, sigma_by)


def delta_exact(R: float, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                weights: dict | None = None, xi: OrbitPoint = RAY,
                max_length: int = DEFAULT_MAX_LENGTH, budget: int = 5_000_000) -> tuple[int, str]:
    """Largest inverted orbit over words of length at most R, with a word achieving it."""
    st = _enumerate(R, omega, preset, xi, weights, max_length, budget)
    return st.delta, st.witness


def sigma_exact(R: float, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                weights: dict | None = None, xi: OrbitPoint = RAY,
                max_length: int = DEFAULT_MAX_LENGTH, budget: int = 5_000_000) -> int:
    """Number of distinct inverted orbits of words of length at most R."""
    return _enumerate(R, omega, preset, xi, weights, max_length, budget).sigma


def orbit_stats(R: int, omega: OmegaSeq = FIRST_GRIGORCHUK, preset: str = "fsa",
                xi: OrbitPoint = RAY, max_length: int = DEFAULT_MAX_LENGTH) -> OrbitStats:
    """Delta and Sigma for every integer radius up to R in one search."""
    return _enumerate(R, omega, preset, xi, None, max_length, 5_000_000)


# ---------------------------------------------------------------------------
# substitutions


ZETA = {
    0: {"ab": "adabac", "ac": "acac", "ad": "adad"},
    1: {"ab": "abab", "ac": "abacad", "ad": "adad"},
    2: {"ab": "abab", "ac": "acac", "ad": "acadab"},
}
SYLLABLES = ("ab", "ac", "ad")


def split_syllables(word: str) -> list[str]:
    if len(word) % 2:
        raise SpecParseError(f"{word!r} is not a word in ab, ac, ad")
    out = [word[i:i + 2] for i in range(0, len(word), 2)]
    for s in out:
        if s not in SYLLABLES:
            raise SpecParseError(f"{word!r} contains the syllable {s!r}")
    return out


def zeta_apply(x: int, word: str) -> str:
    table = ZETA[int(x)]
    return "".join(table[s] for s in split_syllables(word))


def syllable_counts(word: str) -> np.ndarray:
    syl = split_syllables(word)
    return np.array([syl.count(s) for s in SYLLABLES], dtype=np.int64)


@dataclass
class WitnessReport:
    k: int
    word: str
    orbit_size: int
    weighted_length: float
    predicted_length: float
    syllable: str

    @property
    def ok(self) -> bool:
        return self.orbit_size >= 2 ** self.k and abs(self.weighted_length - self.predicted_length) <= 1e-9

    def as_dict(self) -> dict:
        return {"k": self.k, "word_length": len(self.word), "orbit_size": self.orbit_size,
                "weighted_length": self.weighted_length, "predicted_length": self.predicted_length,
                "syllable": self.syllable, "ok": self.ok}


def witness_word(k: int, omega: OmegaSeq = FIRST_GRIGORCHUK, negative_tail: str = "012") -> WitnessReport:
    """zeta_{omega_0} ... zeta_{omega_{k-1}} applied to the cheapest syllable for sigma^k omega.

    The word lives in the family model; its weighted length uses the
    norms of p_omega, and is compared with eta_omega ... eta_{sigma^{k-1} omega} mu_{sigma^k omega}.
    """
    if k < 0 or k > 10:
        raise ResourceError("witness words are built for 0 <= k <= 10")
    p = point_along(omega, 0, negative_tail)
    q, prod = p, 1.0
    for i in range(k):
        prod *= float(eta(q, omega.letter(i)))
        q = mbar(q, omega.letter(i))
    syl = SYLLABLES[int(np.argmin([float(x) for x in q.coords]))]
    w = syl
    for i in reversed(range(k)):
        w = zeta_apply(omega.letter(i), w)
    nw = norms_from_point(p).weights()
    length = sum(float(nw[ch]) for ch in w)
    size = len(inverted_orbit(w, RAY, omega, "family"))
    return WitnessReport(k, w, size, length, prod * float(mu(q)), syl)


# ---------------------------------------------------------------------------
# growth of W = H wr_X G


@dataclass
class GrowthWReport:
    R: int
    h_order: int
    v_g: int
    v_h: int
    v_w_r: int
    v_w_3r: int
    delta: int
    sigma: int
    lower_lhs: int
    upper_rhs: int

    @property
    def lower_ok(self) -> bool:
        return self.lower_lhs <= self.v_w_3r

    @property
    def upper_ok(self) -> bool:
        return self.v_w_r <= self.upper_rhs

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d.update(lower_ok=self.lower_ok, upper_ok=self.upper_ok, ok=self.ok)
        return d


def growthW_bounds_check(h, h_gens, R: int, omega: OmegaSeq = FIRST_GRIGORCHUK,
                         preset: str = "fsa", budget: int = 10_000_000) -> GrowthWReport:
    """Check v_G(R) v_H(R // Delta)^Delta <= v_W(3R) and v_W(R) <= v_G(R) #H^Delta Sigma(R).

    Every quantity is computed exactly: balls in G, H and W by search,
    Delta and Sigma by enumeration of words in the monoid R.
    """
    from .backends import GrigBackend, TableGroupBackend
    from .growth import enumerate_ball
    from .permwreath import PermWreathBackend

    group = grig_group(omega, preset)
    v_g = len(enumerate_ball(GrigBackend(group), R))
    st = orbit_stats(R, omega, preset)
    delta, sigma = st.delta_by_radius[R], st.sigma_by_radius[R]
    gens = list(h_gens.values()) if isinstance(h_gens, dict) else list(h_gens or [])
    hb = TableGroupBackend(h, gens) if gens else None
    v_h = len(enumerate_ball(hb, R // delta)) if hb else 1
    wb = PermWreathBackend(h, h_gens, omega=omega, preset=preset)
    ball = enumerate_ball(wb, 3 * R, budget=budget)
    v_w_r, v_w_3r = ball.v(R), ball.v(3 * R)
    order = len(h.table)
    return GrowthWReport(R, order, v_g, v_h, v_w_r, v_w_3r, delta, sigma,
                         v_g * v_h ** delta, v_g * order ** delta * sigma)
