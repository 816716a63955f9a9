import itertools
import random

import pytest

from wreathgrowth.backends import (ExtraGeneratorsBackend, LamplighterBackend, TableGroupBackend, free_group,
                                   grigorchuk_backend)
from wreathgrowth.errors import ResourceError
from wreathgrowth.finite import cyclic_group, trivial_group
from wreathgrowth.growth import (enumerate_ball, find_k_hills, genset_equiv_check, hill_depth,
                                 quotient_diameter, quotient_diameter_perm)
from wreathgrowth.schreier import CayleyAction, build_schreier
from wreathgrowth.specparse import parse_group

C2 = cyclic_group(2)


def test_free_group_balls():
    rec = enumerate_ball(free_group(2), 8)
    assert rec.cumulative()[:4] == [1, 5, 17, 53]
    assert rec.spheres == [1] + [4 * 3 ** (l - 1) for l in range(1, 9)]


def test_trivial_group():
    assert enumerate_ball(TableGroupBackend(trivial_group(), []), 3).spheres == [1, 0, 0, 0]


def test_lamplighter_ratio_decreases_towards_golden():
    cum = enumerate_ball(LamplighterBackend(C2), 16).cumulative()
    ratios = [cum[r] / cum[r - 1] for r in range(6, 17)]
    assert all(x > y for x, y in zip(ratios, ratios[1:]))
    assert ratios[-1] > (1 + 5 ** 0.5) / 2


def test_triangle_inequality_on_norms():
    b = grigorchuk_backend()
    rec = enumerate_ball(b, 8, keep_elements=True)
    keys = sorted(rec.norms, key=repr)
    rng = random.Random(0)
    for _ in range(500):
        u, v = rng.choice(keys), rng.choice(keys)
        uv = b.key(b.multiply(rec.elements[u], rec.elements[v]))
        if uv in rec.norms:
            assert rec.norms[uv] <= rec.norms[u] + rec.norms[v]
        else:
            assert rec.norms[u] + rec.norms[v] > 8


def test_determinism():
    b = grigorchuk_backend()
    assert enumerate_ball(b, 7).spheres == enumerate_ball(grigorchuk_backend(), 7).spheres


def test_norms_are_bfs_distances():
    b = free_group(2)
    rec = enumerate_ball(b, 4, keep_elements=True)
    graph = build_schreier(CayleyAction(b), b.identity(), radius=4)
    dist = graph.distances()
    for i, k in enumerate(graph.vertices):
        if i in dist and dist[i] <= 4:
            assert rec.norms[k] == dist[i]


def test_weighted_balls():
    b = grigorchuk_backend()
    w = enumerate_ball(b.with_weights({"a": 1, "b": 1, "c": 1, "d": 1}), 5, weighted=True)
    u = enumerate_ball(b, 5)
    assert [c for _, c in w.spheres] == u.spheres
    # a costs nothing: 1 and a share norm 0
    z = enumerate_ball(b.with_weights({"a": 0}), 2, weighted=True)
    assert z.spheres[0] == (0, 2)
    # norm <= 1: {1, a} plus x, ax, xa, axa for x in {b, c, d}
    assert z.v(1) == 14


def test_budget_is_enforced():
    with pytest.raises(ResourceError):
        enumerate_ball(free_group(2), 10, budget=1000)


def test_free_group_has_no_dead_ends():
    ball = enumerate_ball(free_group(2), 8, edges=True)
    assert find_k_hills(ball, 0) == []
    assert find_k_hills(ball, 1) == []


def _down_up_down(k):
    for labs in itertools.product("01", repeat=4 * k):
        yield ([f"down{x}" for x in labs[:k]] + [f"up{x}" for x in labs[k:3 * k]]
               + [f"down{x}" for x in labs[3 * k:]])


@pytest.mark.parametrize("k,count", [(1, 1), (2, 4)])
def test_k_hills_in_lamplighter(k, count):
    b = parse_group("lamplighter:q=2,gens=dl").backend
    ball = enumerate_ball(b, 4 * k + 2, edges=True, keep_elements=True)
    tops = find_k_hills(ball, k)
    assert len(tops) == count
    assert all(ball.norms[v] == 4 * k for v in tops)
    # every top is the endpoint of a geodesic down^k up^2k down^k
    ends = {b.key(b.evaluate(w)) for w in _down_up_down(k)}
    geodesic_ends = {e for e in ends if ball.norms.get(e) == 4 * k}
    assert set(tops) <= geodesic_ends
    assert all(hill_depth(ball, t) == k for t in tops)
    assert find_k_hills(ball, k + 1) == []


def test_genset_equivalence():
    f2 = free_group(2)
    same = genset_equiv_check(f2, free_group(2), 6)
    assert (same.c_forward, same.c_backward, same.ok) == (1, 1, True)
    bigger = ExtraGeneratorsBackend(f2, {"xy": ["x0", "x1"], "YX": ["X1", "X0"]})
    rep = genset_equiv_check(f2, bigger, 6)
    assert (rep.c_forward, rep.c_backward) == (2, 1)
    assert rep.ok
    g = grigorchuk_backend()
    assert genset_equiv_check(g, ExtraGeneratorsBackend(g, {"ab": ["a", "b"]}), 8).ok


def test_genset_not_generated_within_radius():
    f2 = free_group(2)
    far = ExtraGeneratorsBackend(f2, {"w": ["x0"] * 5})
    with pytest.raises(ResourceError):
        genset_equiv_check(f2, far, 3)


@pytest.mark.parametrize("n,expected", [(1, (1, 2)), (2, (4, 8)), (3, (8, 128)), (4, (24, 4096))])
def test_quotient_diameters(n, expected):
    assert quotient_diameter(n) == expected
    assert quotient_diameter(n, kernel="numpy") == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quotient_diameter_perm_oracle(n):
    assert quotient_diameter_perm(n) == quotient_diameter(n)


def test_order_formula_and_recurrence():
    d = {n: quotient_diameter(n) for n in range(1, 6)}
    for n in (3, 4, 5):
        assert d[n][1] == 2 ** (5 * 2 ** (n - 3) + 2)
    assert d[5][0] == d[4][0] + 2 * d[3][0] + 4 * d[2][0]
    # the same recurrence does not reach back to n = 4: 8 + 2*4 + 4*1 = 20
    assert d[4][0] == 24


def test_level_limit():
    with pytest.raises(ResourceError):
        quotient_diameter(6)
