"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Two literal sub-claims do not hold for exact computations; they are kept
as strict xfails that record FAIL, next to a passing test of what does hold.
"""

import itertools
import math
import time

import numpy as np
import pytest

from wreathgrowth.backends import LamplighterBackend, RegularWreathBackend, free_group
from wreathgrowth.finite import cyclic_group
from wreathgrowth.growth import enumerate_ball, find_k_hills, quotient_diameter
from wreathgrowth.invorbit import growthW_bounds_check, inverted_orbit, witness_word
from wreathgrowth.metrics import (eta, eta_plus, fixed_point_tail, hilbert_distance, mbar, omega_build,
                                  parse_profile, supercontract_check)
from wreathgrowth.permwreath import compare_balls
from wreathgrowth.schreier import OrbitPoint, RAY
from wreathgrowth.selfsim import level_perm, order, wp_trivial
from wreathgrowth.series import cyclic_series, parry_wreath_series, series_free_like
from wreathgrowth.specparse import parse_group
from wreathgrowth.wreath import dl_check

C2 = cyclic_group(2)
PHI = (1 + math.sqrt(5)) / 2


def perm_order(p: np.ndarray) -> int:
    seen, result = np.zeros(len(p), bool), 1
    for i in range(len(p)):
        n, j = 0, i
        while not seen[j]:
            seen[j], j, n = True, p[j], n + 1
        if n:
            result = math.lcm(result, n)
    return result


def test_1_relations_and_torsion(record):
    t0 = time.perf_counter()
    checks = [wp_trivial("adadadad")]
    checks += [order(x) == 2 for x in "abcd"]
    checks.append(order("ad") == 4)
    brute = {w: perm_order(level_perm(w, 5)) for w in ("ab", "ac")}
    checks += [order("ab") == brute["ab"] == 16, order("ac") == brute["ac"] == 8]
    dt = time.perf_counter() - t0
    assert record("criterion 1", all(checks) and dt < 1, f"level-5 orders {brute}, {dt:.2f}s")


DIAMETERS = {1: 1, 2: 4, 3: 8, 4: 24, 5: 56}


def test_2_quotient_diameters(record):
    t0 = time.perf_counter()
    got = {n: quotient_diameter(n) for n in range(1, 6)}
    ok = {n: d for n, (d, _) in got.items()} == DIAMETERS
    ok &= got[3][1] == 128 and got[4][1] == 4096 and got[5][1] == 2 ** 22
    D = DIAMETERS
    ok &= D[5] == D[4] + 2 * D[3] + 4 * D[2]
    dt = time.perf_counter() - t0
    assert record("criterion 2 (diameters, recurrence at n=5)", ok, f"{got}, {dt:.1f}s")


@pytest.mark.xfail(strict=True, reason="D4 = 24 but D3 + 2 D2 + 4 D1 = 20")
def test_2_recurrence_at_n4(record):
    D = {n: quotient_diameter(n)[0] for n in range(1, 5)}
    rhs = D[3] + 2 * D[2] + 4 * D[1]
    assert record("criterion 2 (recurrence at n=4)", D[4] == rhs, f"D4 = {D[4]}, recurrence gives {rhs}")


def test_3_free_group_series(record):
    cumulative = enumerate_ball(free_group(2), 8).cumulative()
    # (1 + z) / (1 - 3z) = 1 + 4z + 12z^2 + ...
    coeffs = [1] + [4 * 3 ** (n - 1) for n in range(1, 9)]
    partial = list(itertools.accumulate(coeffs))
    from_series = list(itertools.accumulate(series_free_like(0, 2, 8).as_ints()))
    assert record("criterion 3", cumulative == partial == from_series, f"v(8) = {cumulative[-1]}")


def _lamplighter_ratios(R):
    v = list(itertools.accumulate(parry_wreath_series(cyclic_series(2, R), 0, 1, R).as_ints()))
    return [v[r] / v[r - 1] for r in range(1, R + 1)]


def test_4_parry_oracle(record):
    z = parry_wreath_series(cyclic_series(2, 12), 0, 1, 12).as_ints()
    zb = enumerate_ball(LamplighterBackend(C2), 12).spheres
    f = parry_wreath_series(cyclic_series(2, 8), 0, 2, 8).as_ints()
    fb = enumerate_ball(RegularWreathBackend(C2, [1], free_group(2)), 8).spheres
    ratios = _lamplighter_ratios(40)
    # what holds for the golden ratio: within 2% from R = 18 on, decreasing towards phi
    tail_ok = all(abs(r / PHI - 1) < 0.02 for r in ratios[17:])
    monotone = all(a > b > PHI for a, b in zip(ratios[5:], ratios[6:]))
    ok = z == zb and f == fb and tail_ok and monotone
    assert record("criterion 4 (Parry = BFS; ratio within 2% of phi for R >= 18)", ok,
                  f"ratio at R=18 is {ratios[17]:.4f}")


@pytest.mark.xfail(strict=True, reason="v(14)/v(13) = 1.6646 is 2.88% above phi")
def test_4_golden_ratio_at_14(record):
    v = enumerate_ball(LamplighterBackend(C2), 14).cumulative()
    r = v[14] / v[13]
    assert record("criterion 4 (ratio within 2% of phi at R=14)", abs(r / PHI - 1) < 0.02,
                  f"v(14)/v(13) = {r:.4f}, off by {100 * abs(r / PHI - 1):.2f}%")


def test_5_metric_machinery(record):
    e = eta_plus()
    poly_ok = abs(e ** 3 - e ** 2 - 2 * e - 4) < 1e-12 and 2.46 < e < 2.47
    p = fixed_point_tail("012")
    q, prod = p, 1.0
    for lam in (0, 1, 2):
        prod *= float(eta(q, lam))
        q = mbar(q, lam)
    residual = float(np.max(np.abs(p.as_float() - q.as_float())))
    fixed_ok = residual < 1e-12 and abs(prod - e ** 3) < 1e-9
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(1000):
        a, b = (0.5 * (1 - rng.dirichlet(np.ones(3))) for _ in range(2))
        lam = int(rng.integers(3))
        d0 = hilbert_distance(tuple(a), tuple(b))
        d1 = hilbert_distance(mbar(tuple(a), lam), mbar(tuple(b), lam))
        worst = max(worst, d1 - d0)
    ok = poly_ok and fixed_ok and worst <= 1e-12
    assert record("criterion 5", ok, f"eta+ = {e:.13f}, residual {residual:.1e}, max d1-d0 {worst:.1e}")


def test_6_supercontraction(record):
    t0 = time.perf_counter()
    rep = supercontract_check(letters=8)
    dt = time.perf_counter() - t0
    assert record("criterion 6", rep.ok and not rep.violations and dt < 300,
                  f"{rep.checked} elements, {len(rep.violations)} violations, {dt:.1f}s")


def test_7_inverted_orbits(record):
    orbit = set(inverted_orbit("acadab").points)
    ok = orbit == {RAY, OrbitPoint("00"), OrbitPoint("010")}
    reports = [witness_word(k) for k in range(7)]
    ok &= all(r.orbit_size >= 2 ** r.k and abs(r.weighted_length - r.predicted_length) <= 1e-9 for r in reports)
    sizes = [r.orbit_size for r in reports]
    assert record("criterion 7", ok, f"witness orbit sizes {sizes}")


def test_8_growthW_inequalities(record):
    t0 = time.perf_counter()
    reps = [growthW_bounds_check(C2, {"t": 1}, R) for R in (1, 2, 3)]
    dt = time.perf_counter() - t0
    detail = ", ".join(f"R={r.R}: {r.lower_lhs}<={r.v_w_3r}, {r.v_w_r}<={r.upper_rhs}" for r in reps)
    assert record("criterion 8", all(r.lower_ok and r.upper_ok for r in reps), f"{detail}, {dt:.1f}s")


def test_9_omega_builder(record):
    t0 = time.perf_counter()
    slow = omega_build(parse_profile("exp_pow:alpha=log2/logeta+"), 3000)
    fast = omega_build(parse_profile("exp"), 3000)
    dt = time.perf_counter() - t0
    ok = slow.ok and fast.ok and slow.letter_fraction() >= 0.9 and fast.letter_fraction() <= 0.1 and dt < 10
    assert record("criterion 9", ok, f"012-fractions {slow.letter_fraction():.3f} and "
                                     f"{fast.letter_fraction():.3f}, {dt:.1f}s")


def test_10_diestel_leader(record):
    t0 = time.perf_counter()
    rep = dl_check(2, 4)
    b = parse_group("lamplighter:q=2,gens=dl").backend
    counts, ok = [], rep.ok
    for k in (1, 2, 3):
        ball = enumerate_ball(b, 4 * k + 2, edges=True, keep_elements=True)
        tops = set(find_k_hills(ball, k))
        ends = set()
        for labs in itertools.product("01", repeat=4 * k):
            word = ([f"down{x}" for x in labs[:k]] + [f"up{x}" for x in labs[k:3 * k]]
                    + [f"down{x}" for x in labs[3 * k:]])
            key = b.key(b.evaluate(word))
            if ball.norms.get(key) == 4 * k:
                ends.add(key)
        ok &= bool(tops) and tops == ends
        counts.append(len(tops))
    dt = time.perf_counter() - t0
    assert record("criterion 10", ok and dt < 60,
                  f"{rep.mismatches} mismatches over {rep.edges_checked} edges; k-hill tops {counts}, {dt:.1f}s")


def test_11_nueg_mechanism(record):
    t0 = time.perf_counter()
    pairs = [(i, j) for i in range(3, 7) for j in range(3, 7)]
    same = all(compare_balls(i=i, j=j, R=3) for i, j in pairs)
    false_instance = not compare_balls(i=0, j=3, R=3)
    dt = time.perf_counter() - t0
    assert record("criterion 11", same and false_instance,
                  f"{len(pairs)} pairs with i, j in 3..6 coincide; (0, 3) differs; {dt:.1f}s")


def test_12_asymptotics_not_reproducible(record):
    from conftest import ACCEPTANCE

    substitutes = ["criterion 5", "criterion 6", "criterion 7", "criterion 8", "criterion 9", "criterion 11"]
    done = [ACCEPTANCE.get(n, "") for n in substitutes]
    ok = all(line.startswith(n + ": PASS") for n, line in zip(substitutes, done))
    assert record("criterion 12", ok, "asymptotic statements not reproducible; finite substitutes 5-9, 11 pass")
