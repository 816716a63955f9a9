import random

import pytest
from hypothesis import given, settings, strategies as st

from wreathgrowth.backends import grigorchuk_backend
from wreathgrowth.errors import ResourceError
from wreathgrowth.finite import cyclic_group, symmetric_group, trivial_group
from wreathgrowth.growth import enumerate_ball
from wreathgrowth.invorbit import orbit_stats
from wreathgrowth.permwreath import (PermWreathBackend, WreathContext, compare_balls, from_gf,
                                     imprimitive_act, pw_at, pw_base, pw_generating_set, pw_identity, pw_inv,
                                     pw_mul, shifted_backend, c5xc5, spread_point, to_gf, w012_ball)
from wreathgrowth.schreier import RAY, OrbitPoint, act_orbit_point
from wreathgrowth.selfsim import grig_group

C2 = cyclic_group(2)
CTX = WreathContext(C2)
S3 = symmetric_group(3)
CTX3 = WreathContext(S3)


def random_element(rng, ctx, length=6):
    u = pw_identity(ctx)
    for _ in range(length):
        if rng.random() < 0.3:
            p = OrbitPoint("".join(rng.choice("01") for _ in range(rng.randrange(3))))
            u = pw_mul(u, pw_at(rng.randrange(1, ctx.h.n), p, ctx))
        else:
            u = pw_mul(u, pw_base(rng.choice("abcd"), ctx))
    return u


seeds = st.integers(0, 2 ** 32 - 1)


def test_lamp_is_an_involution():
    t = pw_at(1, RAY, CTX)
    assert pw_mul(t, t) == pw_identity(CTX)


def test_conjugation_moves_support():
    rng = random.Random(3)
    t = pw_at(1, RAY, CTX)
    for _ in range(30):
        w = "".join(rng.choice("abcd") for _ in range(rng.randrange(1, 8)))
        g = pw_base(w, CTX)
        conj = pw_mul(pw_mul(pw_inv(g), t), g)
        assert conj == pw_at(1, act_orbit_point(RAY, w), CTX)


@given(seeds)
def test_group_axioms(seed):
    rng = random.Random(seed)
    for ctx in (CTX, CTX3):
        u, v, w = (random_element(rng, ctx) for _ in range(3))
        assert pw_mul(pw_mul(u, v), w) == pw_mul(u, pw_mul(v, w))
        assert pw_mul(u, pw_inv(u)) == pw_identity(ctx)
        assert from_gf(to_gf(u), ctx) == u


def test_backend_matches_element_form():
    b = PermWreathBackend(S3, {"s": 1, "r": 3})
    rng = random.Random(4)
    labels = [g.label for g in b.generators]
    for _ in range(100):
        word = [rng.choice(labels) for _ in range(rng.randrange(9))]
        x = b.evaluate(word)
        el = pw_identity(b.ctx)
        for lab in word:
            spec = dict(pw_generating_set({"s": 1, "r": 3}))[lab]
            step = pw_base(spec[1], b.ctx) if spec[0] == "grig" else pw_at(spec[2], spec[1], b.ctx)
            el = pw_mul(el, step)
        assert b.to_element(x) == el


def test_key_equality_agrees_with_word_problem():
    b = PermWreathBackend(C2, {"t": 1})
    g = grig_group()
    rng = random.Random(8)
    labels = [x.label for x in b.generators]
    trivial = 0
    for _ in range(500):
        word = [rng.choice(labels) for _ in range(rng.randrange(9))]
        # append the inverse of a random prefix so trivial elements come up often
        k = rng.randrange(len(word) + 1)
        word = word + [lab for lab in reversed(word[:k])]
        x = b.evaluate(word)
        base = "".join(lab for lab in word if lab != "t")
        lamps = {}
        for i, lab in enumerate(word):
            if lab == "t":
                p = act_orbit_point(RAY, "".join(l for l in word[:i] if l != "t"))
                lamps[p] = lamps.get(p, 0) ^ 1
        oracle = g.wp_trivial(base) and not any(lamps.values())
        assert b.is_trivial(x) == oracle
        trivial += oracle
    assert trivial > 50


def test_imprimitive_action_is_a_homomorphism():
    b = PermWreathBackend(S3, {"s": 1, "r": 3})
    rng = random.Random(9)
    labels = [g.label for g in b.generators]
    pts = [RAY, OrbitPoint("0"), OrbitPoint("01"), OrbitPoint("000")]
    for _ in range(100):
        x = b.evaluate([rng.choice(labels) for _ in range(rng.randrange(7))])
        y = b.evaluate([rng.choice(labels) for _ in range(rng.randrange(7))])
        pair = (rng.randrange(6), rng.choice(pts))
        lhs = imprimitive_act(b.ctx, pair, b.multiply(x, y))
        assert lhs == imprimitive_act(b.ctx, imprimitive_act(b.ctx, pair, x), y)


def test_generating_sets():
    assert len(pw_generating_set({"t": 1})) == 5
    assert [s[0] for _, s in pw_generating_set({"t": 1}, include_grig=False)] == ["lamp"]
    two = pw_generating_set({"t": 1}, [RAY, OrbitPoint("0")])
    assert [lab for lab, _ in two][4:] == ["t@1̄", "t@1̄0"]
    h, s, t = c5xc5()
    for i in range(21):
        b = shifted_backend(h, s, t, i)
        specs = [g.element for g in b.generators]
        assert len(specs) == 8 and len(set(specs)) == 8
        lamp_points = {p for _, f in specs for p, _ in f}
        assert lamp_points == {RAY, spread_point(i)}


def test_lamps_only_is_abelian():
    b = PermWreathBackend(C2, {"t": 1}, points=[RAY, OrbitPoint("0"), OrbitPoint("00")], include_grig=False)
    ball = enumerate_ball(b, 5)
    assert len(ball) == 8 and ball.spheres[:4] == [1, 3, 3, 1]


def test_w012_small_balls():
    ball = w012_ball(C2, {"t": 1}, 1)
    assert ball.v(1) == 6
    plain = enumerate_ball(grigorchuk_backend(), 6).spheres
    assert w012_ball(trivial_group(), {}, 6).spheres == plain


def test_w012_submultiplicative():
    ball = w012_ball(C2, {"t": 1}, 8)
    v = [ball.v(r) for r in range(9)]
    for r1 in range(9):
        for r2 in range(9 - r1):
            assert v[r1 + r2] <= v[r1] * v[r2]
    with pytest.raises(ResourceError):
        w012_ball(C2, {"t": 1}, 10, budget=1000)


def test_growth_sandwich():
    ball = w012_ball(C2, {"t": 1}, 4)
    g = enumerate_ball(grigorchuk_backend(), 4)
    sigma = orbit_stats(4).sigma_by_radius
    for r in range(5):
        assert g.v(r) <= ball.v(r) <= g.v(r) * 2 ** (r + 1) * sigma[r]


@pytest.mark.parametrize("i,j", [(3, 4), (3, 6), (4, 5), (4, 6), (5, 6), (4, 8)])
def test_compare_balls_far_apart(i, j):
    assert compare_balls(i=i, j=j, R=3)


def test_compare_balls_trivial_and_false():
    assert compare_balls(i=2, j=2, R=3)
    # s and t share the point 1̄ when i = 0
    assert not compare_balls(i=0, j=4, R=3)


@pytest.mark.parametrize("R,i,j,same", [(4, 1, 2, False), (4, 1, 4, False), (4, 2, 4, True), (4, 4, 7, True),
                                        (5, 1, 4, False), (5, 2, 5, True)])
def test_compare_balls_at_larger_radius(R, i, j, same):
    assert compare_balls(i=i, j=j, R=R) == same


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_compare_balls_symmetric(i, j):
    assert compare_balls(i=i, j=j, R=2) == compare_balls(i=j, j=i, R=2)
