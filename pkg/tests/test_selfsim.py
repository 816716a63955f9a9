import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wreathgrowth.errors import SpecParseError, UnsupportedInputError
from wreathgrowth.selfsim import (FIRST_GRIGORCHUK, Leaf, Node, OmegaSeq, act_vertex, all_reduced_words,
                                  compose_perms, fsa_to_family, grig_group, inverse_word, level_perm,
                                  mealy_of, order, parse_word, portrait, reachability_analysis, reduce,
                                  sections, wp_trivial)

words = st.text(alphabet="abcd", max_size=12)
SMALL = all_reduced_words(10)


def perm_power_order(w: str, n: int) -> int:
    p = level_perm(w, n)
    q, k = p.copy(), 1
    while not np.array_equal(q, np.arange(len(p))):
        q, k = compose_perms(q, p), k + 1
    return k


def test_reduce_examples():
    assert reduce("bb") == ""
    assert reduce("bc") == "d"
    assert reduce("abab") == "abab"
    assert reduce("aa") == ""


@given(words)
def test_reduce_idempotent_and_reduced(w):
    r = reduce(w)
    assert reduce(r) == r
    assert "aa" not in r
    assert not any(x in "bcd" and y in "bcd" for x, y in zip(r, r[1:]))


def test_parse_word_powers():
    assert parse_word("(ad)^4") == "adadadad"
    assert parse_word("(ad)⁴") == "adadadad"
    with pytest.raises(SpecParseError):
        parse_word("axe")


def test_sections_examples():
    assert sections("b") == ("a", "c", False)
    assert sections("") == ("", "", False)
    assert sections("ad") == ("b", "", True)


def _section_composition(u, v, preset, omega):
    g = grig_group(omega, preset)
    u0, u1, su = g.sections(u)
    v0, v1, sv = g.sections(v)
    # (uv)_x = u_x v_{x^{sigma_u}}
    w0 = u0 + (v1 if su else v0)
    w1 = u1 + (v0 if su else v1)
    return w0, w1, su ^ sv


@pytest.mark.parametrize("preset", ["fsa", "family"])
def test_sections_are_multiplicative(preset):
    rng = random.Random(3)
    g = grig_group(FIRST_GRIGORCHUK, preset)
    for _ in range(200):
        u = "".join(rng.choice("abcd") for _ in range(rng.randrange(9)))
        v = "".join(rng.choice("abcd") for _ in range(rng.randrange(9)))
        w0, w1, swap = g.sections(reduce(u + v))
        e0, e1, eswap = _section_composition(u, v, preset, FIRST_GRIGORCHUK)
        assert swap == eswap
        assert g.wp_trivial(w0 + inverse_word(e0), shift=1)
        assert g.wp_trivial(w1 + inverse_word(e1), shift=1)


def test_word_problem_examples():
    assert wp_trivial(parse_word("(ad)^4"))
    assert not wp_trivial("a")
    assert not wp_trivial("ab" * 8)
    assert wp_trivial("ab" * 16)


def test_orders():
    assert [order(x) for x in "abcd"] == [2, 2, 2, 2]
    assert order("ad") == 4
    assert order("ab") == 16
    assert order("ac") == 8


def test_order_matches_level_five_brute_force():
    assert order("ab") == perm_power_order("ab", 5) == 16
    assert order("ac") == perm_power_order("ac", 5) == 8


@pytest.mark.parametrize("w", ["ad", "abac", "abad", "acab", "abacad"])
def test_order_matches_level_eight_brute_force(w):
    # level 5 is too shallow for abad, whose level-5 image has order 8
    assert order(w) == perm_power_order(w, 8)


def test_orders_are_powers_of_two():
    for w in all_reduced_words(8):
        n = order(w)
        assert n & (n - 1) == 0


def test_portraits():
    assert portrait("") == Leaf("1", 0)
    p = portrait("ad")
    assert isinstance(p, Node) and p.swap
    assert (p.left.text(), p.right.text()) == ("b", "1")
    assert p.text() == "s(b,1)"


@settings(max_examples=100, deadline=None)
@given(words)
def test_portrait_of_reduced_word(w):
    assert portrait(w) == portrait(reduce(w))


def test_portrait_is_a_canonical_key():
    rng = random.Random(5)
    for _ in range(500):
        u = "".join(rng.choice("abcd") for _ in range(rng.randrange(9)))
        v = "".join(rng.choice("abcd") for _ in range(rng.randrange(9)))
        assert (portrait(u) == portrait(v)) == wp_trivial(u + inverse_word(v))


def test_act_vertex():
    for v in ["", "0", "101", "1110"]:
        assert act_vertex("a", v + "0") == v + "1"
        assert act_vertex("", v) == v
    assert act_vertex("d", "1" * 9) == "1" * 9


def test_d_fixes_all_ones_on_every_level():
    for n in range(1, 9):
        assert level_perm("d", n)[(1 << n) - 1] == (1 << n) - 1


def test_level_perm_basics():
    assert level_perm("a", 1).tolist() == [1, 0]
    for n in range(1, 9):
        assert np.array_equal(level_perm(parse_word("(ad)^4"), n), np.arange(1 << n))


@given(words, words)
@settings(max_examples=50, deadline=None)
def test_level_perm_is_homomorphic(u, v):
    assert np.array_equal(level_perm(u + v, 6), compose_perms(level_perm(u, 6), level_perm(v, 6)))


def test_level_transitivity():
    for n in range(1, 9):
        gens = [level_perm(x, n) for x in "abcd"]
        seen, frontier = {0}, [0]
        while frontier:
            frontier = {int(p[i]) for i in frontier for p in gens} - seen
            seen.update(frontier)
        assert len(seen) == 1 << n


def test_injectivity_proxy():
    for w in SMALL:
        depth = portrait(w).depth()
        # a nucleus leaf other than 1 already moves some vertex of level 3
        ident = np.array_equal(level_perm(w, depth + 3), np.arange(1 << (depth + 3)))
        assert wp_trivial(w) == ident


def test_presets_agree_under_renaming():
    for w in SMALL:
        assert wp_trivial(w) == wp_trivial(fsa_to_family(w), preset="family")


def test_family_presets_on_other_omegas():
    omega = OmegaSeq.parse("syllables:(012)^2 2^3 (01)^2 tail=012")
    g = grig_group(omega, "family")
    assert g.wp_trivial("")
    for x in "bcd":
        assert g.order(x) == 2
    # a power of a swap element vanishes
    assert g.wp_trivial("ab" * g.order("ab"))


def test_non_omega_prime_rejected():
    omega = OmegaSeq.periodic("01")
    g = grig_group(omega, "family")
    g.sections("abab")
    with pytest.raises(UnsupportedInputError):
        g.wp_trivial("abab")
    with pytest.raises(UnsupportedInputError):
        g.order("ab")


def test_omega_parsing():
    o = OmegaSeq.parse("syllables:(012)^3 2^5 tail=012")
    assert o.prefix(14) == "012012012222220"[:14]
    assert o.shifted(9).prefix(5) == "22222"
    assert OmegaSeq.parse("periodic:012") == FIRST_GRIGORCHUK
    with pytest.raises(SpecParseError):
        OmegaSeq.parse("nonsense")


def test_mealy_automaton():
    m = mealy_of("fsa")
    assert set(m.states) == {"1", "a", "b", "c", "d"}
    a_edges = [e for e in m.edges() if e[0] == "a"]
    assert {e[3] for e in a_edges} == {"1"} and len(a_edges) == 2
    assert all(e[3] == "1" and e[1] == e[2] for e in m.edges() if e[0] == "1")


def test_reachability_certificate():
    m = mealy_of("fsa")
    _, _, trivial = reachability_analysis(m, list(parse_word("(ad)^4")))
    assert trivial
    reach, rec, trivial = reachability_analysis(m, ["1"])
    assert reach == frozenset({("1",)}) and trivial
    for w in all_reduced_words(6):
        if w:
            assert reachability_analysis(m, list(w))[2] == wp_trivial(w)
