import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wreathgrowth.errors import ResourceError, SpecParseError
from wreathgrowth.finite import cyclic_group, trivial_group
from wreathgrowth.invorbit import (SYLLABLES, delta_exact, growthW_bounds_check, inverted_orbit,
                                   inverted_orbit_naive, orbit_stats, sigma_exact, syllable_counts,
                                   witness_word, zeta_apply)
from wreathgrowth.metrics import M
from wreathgrowth.schreier import RAY, OrbitPoint
from wreathgrowth.selfsim import FIRST_GRIGORCHUK, grig_group, reduce

words = st.text(alphabet="abcd", max_size=16)
syllable_words = st.lists(st.sampled_from(SYLLABLES), max_size=6).map("".join)


def all_words(n):
    return ("".join(t) for t in itertools.product("abcd", repeat=n))


def r_reduce(w):
    """Reduction in the monoid R: b, c, d multiply as the Klein group, a is left alone."""
    out = []
    for ch in w:
        if out and ch != "a" and out[-1] != "a":
            top = out.pop()
            if top != ch:
                out.append(({"b", "c", "d"} - {top, ch}).pop())
        else:
            out.append(ch)
    return "".join(out)


def test_worked_example():
    o = inverted_orbit("acadab")
    assert o.points == {RAY, OrbitPoint("00"), OrbitPoint("010")}
    assert len(o) == 3
    assert inverted_orbit("").points == {RAY}
    assert inverted_orbit("acadab").points == inverted_orbit_naive("acadab").points


@given(words)
def test_fast_matches_naive(w):
    for preset in ("fsa", "family"):
        assert inverted_orbit(w, preset=preset).points == inverted_orbit_naive(w, preset=preset).points


@given(words)
def test_reduction_preserves_orbit(w):
    assert inverted_orbit(w).points == inverted_orbit(r_reduce(w)).points
    # cancelling a^2 as well can lose the point xi a ...
    assert inverted_orbit(reduce(w)).points <= inverted_orbit(w).points


def test_full_reduction_loses_points():
    assert len(inverted_orbit("aaaa")) == 2 and len(inverted_orbit("")) == 1


@given(words, words)
def test_subword_monotone(u, v):
    assert len(inverted_orbit(u + v)) >= len(inverted_orbit(v))


def test_orbit_contains_basepoint_and_image():
    from wreathgrowth.schreier import act_orbit_point

    rng = random.Random(5)
    for _ in range(50):
        w = "".join(rng.choice("abcd") for _ in range(rng.randrange(12)))
        pts = inverted_orbit(w).points
        assert RAY in pts and act_orbit_point(RAY, w) in pts


def test_delta_and_sigma():
    st_ = orbit_stats(12)
    d, s = st_.delta_by_radius, st_.sigma_by_radius
    assert d[0] == 1 and s[0] == 1
    assert delta_exact(6)[0] >= 3
    assert all(x <= y for x, y in zip(d, d[1:]))
    assert all(d[r] <= r + 1 for r in range(13))
    assert all(x < y for x, y in zip(s[:11], s[1:11]))
    # frozen values from this enumeration
    assert d == [1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7]
    assert s == [1, 2, 3, 4, 8, 11, 16, 19, 31, 41, 61, 80, 122]
    assert all(s[r] <= 4 ** (r + 1) for r in range(13))
    assert sigma_exact(5) == 11
    size, witness = delta_exact(12)
    assert len(inverted_orbit(witness)) == size and len(witness) <= 12


@pytest.mark.parametrize("xi", [RAY, OrbitPoint("0")])
def test_enumeration_matches_all_words(xi):
    R = 7
    sets, best, sigma = set(), [], []
    top = 0
    for n in range(R + 1):
        for w in all_words(n):
            pts = inverted_orbit_naive(w, xi).points
            top = max(top, len(pts))
            sets.add(pts)
        best.append(top)
        sigma.append(len(sets))
    st_ = orbit_stats(R, xi=xi)
    assert st_.delta_by_radius == best
    assert st_.sigma_by_radius == sigma


def test_bound_enforced():
    with pytest.raises(ResourceError):
        delta_exact(15)


def test_basepoint_robustness():
    d = orbit_stats(8).delta_by_radius
    d_shift = orbit_stats(8, xi=OrbitPoint("0")).delta_by_radius
    assert d_shift == [1, 2, 3, 4, 4, 5, 5, 6, 6]
    # 1̄ and 1̄0 are adjacent, yet a shift of 1 is not enough in one direction
    assert d_shift[3] > d[4]
    assert all(d[r] <= d_shift[r + 2] for r in range(7))
    assert all(d_shift[r] <= d[r + 2] for r in range(7))


def test_zeta_table():
    assert zeta_apply(0, "ab") == "adabac"
    assert zeta_apply(2, "ad") == "acadab"
    assert zeta_apply(1, "ac") == "abacad"
    with pytest.raises(SpecParseError):
        zeta_apply(0, "ba")
    with pytest.raises(SpecParseError):
        zeta_apply(0, "aba")


@given(syllable_words, st.integers(0, 2))
def test_zeta_counts_transform_by_transpose(w, x):
    assert np.array_equal(syllable_counts(zeta_apply(x, w)), M[x].T @ syllable_counts(w))


def _syllable_relators(max_syllables=8):
    g = grig_group(FIRST_GRIGORCHUK, "family")
    out = []
    for n in range(1, max_syllables + 1):
        for t in itertools.product(SYLLABLES, repeat=n):
            if g.wp_trivial("".join(t), 1):
                out.append("".join(t))
    return out


def test_zeta_is_a_homomorphism():
    g = grig_group(FIRST_GRIGORCHUK, "family")
    rels = _syllable_relators()
    assert len(rels) >= 10
    assert all(g.wp_trivial(zeta_apply(0, r), 0) for r in rels)
    # equal words upstairs give equal images downstairs
    rng = random.Random(11)
    for _ in range(100):
        u = [rng.choice(SYLLABLES) for _ in range(rng.randrange(1, 7))]
        k = rng.randrange(len(u) + 1)
        r = rng.choice(rels)
        v = "".join(u[:k]) + r + "".join(u[k:])
        assert g.equal(zeta_apply(0, "".join(u)), zeta_apply(0, v), 0)


@pytest.mark.parametrize("k", range(7))
def test_witness_words(k):
    rep = witness_word(k)
    assert rep.orbit_size >= 2 ** k
    assert abs(rep.weighted_length - rep.predicted_length) <= 1e-9
    assert rep.ok


def test_witness_zero_is_cheapest_syllable():
    from wreathgrowth.metrics import mu, norms_from_point, point_along

    rep = witness_word(0)
    assert rep.word == rep.syllable
    assert rep.predicted_length == pytest.approx(float(mu(point_along(FIRST_GRIGORCHUK, 0))), abs=1e-12)
    w = norms_from_point(point_along(FIRST_GRIGORCHUK, 0)).weights()
    assert rep.weighted_length == pytest.approx(min(w["a"] + w[x] for x in "bcd"), abs=1e-12)


def test_witness_consistent_with_delta():
    fam = orbit_stats(12, preset="family").delta_by_radius
    for k in range(3):
        rep = witness_word(k)
        if len(rep.word) <= 12:
            assert rep.orbit_size <= fam[len(rep.word)]


def test_growth_w_c2():
    c2 = cyclic_group(2)
    rep = growthW_bounds_check(c2, {"t": 1}, 3)
    assert rep.lower_ok and rep.upper_ok
    assert rep.v_g <= rep.v_w_r


def test_growth_w_trivial_and_c3():
    rep = growthW_bounds_check(trivial_group(), {}, 3)
    assert rep.ok and rep.v_w_r == rep.v_g
    c3 = cyclic_group(3)
    assert growthW_bounds_check(c3, {"t": 1, "T": 2}, 2).ok
