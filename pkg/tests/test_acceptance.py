"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete. Every tolerance is pinned here; nothing is calibrated elsewhere.
"""

import functools
import math
import random

from conftest import random_strict_curve
from smlab import (
    SimConfig,
    certificate_value,
    delta_sweep,
    detect_collapse,
    estimate_map,
    key_quantities,
    demand_law_checks,
    make_linear,
    make_q_epsilon,
    p_ser_delta,
    run,
    run_with_states,
    tightness_thresholds,
    validate,
)

LIN = make_linear(1.0, 1.0)
KQ = key_quantities(LIN, 1.0)


def criterion(number, description):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {number:02d} FAIL  {description}")
                raise
            print(f"ACCEPTANCE {number:02d} PASS  {description}")

        return wrapper

    return deco


def p2_formula(d):
    return (2 + d) / (4 * (1 + d))


def rev2_formula(d):
    return (2 + d) ** 2 / (16 * (1 + d))


def p3_formula(d):
    return (2 * d + d**2 + 4) / (8 * (1 + d + d**2))


def rev3_formula(d):
    return (2 * d + d**2 + 4) ** 2 / (64 * (1 + d + d**2))


@criterion(1, "golden first-three-round values for the unit linear curve")
def test_golden_example_values():
    for d in (0.1, 0.5, 0.9):
        recs = run(SimConfig(LIN, 1.0, d, 3))
        assert (recs[0].price, recs[0].quantity, recs[0].revenue) == (0.5, 0.5, 0.25)
        assert abs(recs[1].price - p2_formula(d)) <= 1e-10
        assert abs(recs[1].revenue - rev2_formula(d)) <= 1e-10
    recs = run(SimConfig(LIN, 1.0, 0.9, 3))
    assert abs(recs[2].price - p3_formula(0.9)) <= 1e-10


@criterion(2, "third-round jump threshold brackets 2*sqrt(2) - 2")
def test_jump_threshold():
    recs_low = run(SimConfig(LIN, 1.0, 0.82, 3))
    assert recs_low[2].price == 0.5
    assert recs_low[2].jumped
    recs_high = run(SimConfig(LIN, 1.0, 0.84, 3))
    assert recs_high[2].price < recs_high[1].price
    assert not recs_high[2].jumped
    threshold = 2 * math.sqrt(2) - 2
    assert 0.82 < threshold < 0.84
    # the closed-form third-round revenue crosses the one-shot level there
    assert rev3_formula(0.82) - 0.25 < 0
    assert rev3_formula(0.84) - 0.25 > 0
    assert abs(rev3_formula(threshold) - 0.25) <= 1e-10


@criterion(3, "100-step tail minimum ~ 0.363 at delta = 0.5")
def test_tail_minimum_reference():
    recs = run(SimConfig(LIN, 1.0, 0.5, 100))
    est = estimate_map(recs, KQ)
    assert 0.353 <= est.p_map_hat <= 0.373


@criterion(4, "per-round and asymptotic lower bounds hold over 500 steps")
def test_lower_bound_soundness():
    for d in (0.25, 0.5, 0.75):
        recs = run(SimConfig(LIN, 1.0, d, 500))
        for r in recs:
            assert r.price >= (1 - d) / (2 * (1 - d**r.t)) - 1e-9
        est = estimate_map(recs, KQ)
        assert est.p_map_hat >= (1 - d) / 2 - 1e-9


@criterion(5, "collapse to the one-shot price in the shallow-slope regime")
def test_collapse():
    qe = make_q_epsilon(0.1)
    kq = key_quantities(qe, 1.0)
    for r in run(SimConfig(qe, 1.0, 0.5, 200)):
        assert abs(r.price - 0.5) <= 1e-9
    q0 = make_q_epsilon(0.0)
    kq0 = key_quantities(q0, 1.0)
    for d in (0.3, 0.9):
        recs = run(SimConfig(q0, 1.0, d, 100))
        assert detect_collapse(recs, kq0, tol=1e-9)
        for r in recs:
            assert abs(r.price - 0.5) <= 1e-9


@criterion(6, "upper bound and recurring one-shot visits at delta = 0.95")
def test_upper_bound_large_delta():
    recs = run(SimConfig(LIN, 1.0, 0.95, 500))
    est = estimate_map(recs, KQ)
    ub = p_ser_delta(LIN, 1.0, 0.95)
    assert abs(ub - 0.30) <= 1e-12
    assert est.p_map_hat <= ub + 1e-6
    late_visits = [r.t for r in recs if abs(r.price - KQ.p_mon) <= 1e-9 and r.t > 250]
    assert len(late_visits) >= 2


@criterion(7, "randomized battery: band, monotone-or-jump, certificate, demand-gap")
def test_invariant_battery():
    rng = random.Random(20240815)
    checked = 0
    for i in range(50):
        curve = random_strict_curve(rng)
        supply = rng.uniform(0.4, 1.5) * curve.eval(0.0)
        kq = key_quantities(curve, supply)
        for d in (0.2, 0.5, 0.8, 0.95):
            records, states = run_with_states(SimConfig(curve, supply, d, 200))
            report = validate(records, states, kq, supply, tol=1e-9)
            assert report.band_violations == []
            assert report.monotonicity_violations == []
            assert report.certificate_violations == []
            gap_upper = dict(demand_law_checks(states, curve, d, 1000, seed=i))[
                "demand_gap_upper"
            ]
            assert gap_upper <= 1e-9
            checked += 1
    assert checked == 200


@criterion(8, "closed-form maximizer matches a 1e-5-grid brute force (T <= 6)")
def test_oracle_equivalence():
    from test_oracle_grid import grid_run

    rng = random.Random(424242)
    for _ in range(20):
        kind = rng.choice(["linear", "q_epsilon", "knots"])
        if kind == "linear":
            curve = make_linear(rng.uniform(0.4, 2.0), rng.uniform(0.4, 2.0))
        elif kind == "q_epsilon":
            curve = make_q_epsilon(rng.uniform(0.05, 0.8))
        else:
            curve = random_strict_curve(rng)
        supply = rng.uniform(0.3, 1.5) * curve.eval(0.0)
        delta = rng.uniform(0.05, 0.95)
        steps = rng.randint(1, 6)
        engine_prices = [r.price for r in run(SimConfig(curve, supply, delta, steps))]
        oracle_prices = grid_run(curve, supply, delta, steps)
        for a, b in zip(engine_prices, oracle_prices):
            assert abs(a - b) <= 1e-4


@criterion(9, "analytic quantities exact; threshold gap below 2*epsilon")
def test_key_quantities_exactness():
    assert abs(KQ.p_mon - 0.5) <= 1e-12
    assert abs(KQ.p_ser - 0.25) <= 1e-12
    assert abs(KQ.p_bar_ser - 1 / 3) <= 1e-12
    assert abs(KQ.delta_bar_ser - 11 / 12) <= 1e-12
    for eps in (0.1, 0.25, 0.5):
        kq = key_quantities(make_q_epsilon(eps), 1.0)
        assert abs(kq.p_mon - 0.5) <= 1e-12
        assert abs(kq.q_mon - 0.5) <= 1e-12
        assert abs(kq.p_ser - 0.25) <= 1e-12
        assert abs(kq.q_ser - (1 + eps) / 2) <= 1e-12
        assert abs(kq.p_bar_ser - 1 / (2 * (1 + eps))) <= 1e-12
        assert abs(kq.q_bar_ser - (0.5 + eps**2 / (1 + eps))) <= 1e-12
        assert abs(kq.delta_bar_ser - (1 - eps / 2 + eps**2 / (1 + eps))) <= 1e-12
    for eps in (0.05, 0.1, 0.25):
        low, high = tightness_thresholds(eps)
        assert low < high
        assert high - low < 2 * eps


@criterion(10, "sweep is weakly decreasing from 0.5 and ends at or above 0.25")
def test_sweep_shape():
    rows = delta_sweep(LIN, 1.0, [0.0, 0.25, 0.5, 0.75, 1.0], 100)
    hats = [r.p_map_hat for r in rows]
    assert hats[0] == 0.5
    for a, b in zip(hats, hats[1:]):
        assert b <= a + 1e-12
    assert hats[-1] >= 0.25 - 1e-9
