import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from smlab import (
    DemandError,
    NoSolutionError,
    from_knots,
    load_curve,
    make_linear,
    make_q_epsilon,
    parse_curve_text,
)


def test_linear_examples():
    c = make_linear(1.0, 1.0)
    assert c.eval(0.5) == 0.5
    assert c.eval(1.0) == 0.0
    assert c.eval(2.0) == 0.0  # beyond the domain
    assert make_linear(2.0, 4.0).eval(0.25) == 1.0  # 2 - 4*0.25 by hand


def test_linear_metadata():
    c = make_linear(2.0, 4.0)
    assert c.domain_max == 0.5
    assert c.strict
    assert c.family.kind == "linear" and c.family.c == 2.0 and c.family.m == 4.0


@pytest.mark.parametrize("c,m", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_linear_rejects_nonpositive(c, m):
    with pytest.raises(DemandError):
        make_linear(c, m)


def test_q_epsilon_examples():
    assert make_q_epsilon(0.1).eval(0.0) == 0.6
    assert make_q_epsilon(0.1).eval(0.25) == pytest.approx(0.55, abs=1e-15)
    assert make_q_epsilon(0.0).eval(0.3) == 0.5
    with pytest.raises(DemandError):
        make_q_epsilon(-0.01)


def test_q_epsilon_half_equals_unit_linear():
    qe = make_q_epsilon(0.5)
    lin = make_linear(1.0, 1.0)
    for i in range(101):
        p = i / 100
        assert abs(qe.eval(p) - lin.eval(p)) <= 1e-15


def test_q_zero_is_flat_then_linear():
    q0 = make_q_epsilon(0.0)
    assert not q0.strict
    assert q0.family.kind == "q_zero"
    assert q0.eval(0.0) == 0.5
    assert q0.eval(0.5) == 0.5
    assert q0.eval(0.75) == 0.25


def test_eval_rejects_negative_price():
    with pytest.raises(DemandError):
        make_linear(1.0, 1.0).eval(-0.1)


def test_inverse_examples():
    lin = make_linear(1.0, 1.0)
    assert lin.inverse_max_price(0.70) == pytest.approx(0.30, abs=1e-15)
    assert make_q_epsilon(0.0).inverse_max_price(0.5) == 0.5  # right end of the flat run
    assert make_q_epsilon(0.2).inverse_max_price(0.6) == pytest.approx(0.25, abs=1e-14)


def test_inverse_edges():
    lin = make_linear(1.0, 1.0)
    assert lin.inverse_max_price(0.0) == 1.0  # largest price in the domain
    assert lin.inverse_max_price(1.0) == 0.0
    with pytest.raises(NoSolutionError):
        lin.inverse_max_price(1.5)
    with pytest.raises(DemandError):
        lin.inverse_max_price(-0.2)


@given(
    c=st.floats(0.2, 3.0),
    m=st.floats(0.2, 3.0),
    u=st.floats(0.0, 1.0),
    v=st.floats(0.0, 1.0),
)
@settings(max_examples=300)
def test_eval_monotone_nonincreasing(c, m, u, v):
    curve = make_linear(c, m)
    p1, p2 = sorted((u * 1.5 * curve.domain_max, v * 1.5 * curve.domain_max))
    assert curve.eval(p1) >= curve.eval(p2)


@given(
    eps=st.floats(0.0, 0.8),
    u=st.floats(0.0, 1.0),
    v=st.floats(0.0, 1.0),
)
@settings(max_examples=300)
def test_eval_monotone_kinked(eps, u, v):
    curve = make_q_epsilon(eps)
    p1, p2 = sorted((u * 1.2, v * 1.2))
    assert curve.eval(p1) >= curve.eval(p2)


@given(c=st.floats(0.2, 3.0), m=st.floats(0.2, 3.0), frac=st.floats(0.0, 1.0))
@settings(max_examples=300)
def test_inverse_round_trip_strict(c, m, frac):
    curve = make_linear(c, m)
    q = frac * curve.eval(0.0)
    assert curve.eval(curve.inverse_max_price(q)) == pytest.approx(q, abs=1e-12)


def test_round_trip_random_strict_curves():
    from conftest import random_strict_curve

    rng = random.Random(7)
    for _ in range(50):
        curve = random_strict_curve(rng)
        q = rng.uniform(0.0, curve.eval(0.0))
        assert curve.eval(curve.inverse_max_price(q)) == pytest.approx(q, abs=1e-12)


def test_step_curve_left_continuity():
    curve = from_knots([(0.0, 1.0), (0.4, 0.8), (0.4, 0.3), (1.0, 0.0)])
    assert curve.has_steps and not curve.strict
    assert curve.eval(0.4) == pytest.approx(0.8, abs=1e-15)  # value from below
    assert curve.eval(0.4 + 1e-9) == pytest.approx(0.3, abs=1e-8)
    assert curve.inverse_max_price(0.5) == pytest.approx(0.4, abs=1e-15)


def test_knot_validation():
    with pytest.raises(DemandError):
        from_knots([(0.1, 1.0), (1.0, 0.0)])  # must start at price 0
    with pytest.raises(DemandError):
        from_knots([(0.0, 1.0), (0.5, 1.2), (1.0, 0.0)])  # rising quantity
    with pytest.raises(DemandError):
        from_knots([(0.0, 1.0), (0.5, 0.8), (0.4, 0.2)])  # descending price
    with pytest.raises(DemandError):
        from_knots([(0.0, 1.0)])  # single knot
    with pytest.raises(DemandError):
        from_knots([(0.0, 1.0), (0.5, 0.8), (0.5, 0.6), (0.5, 0.4), (1.0, 0.0)])


def test_parse_curve_text():
    curve = parse_curve_text("0,1\n0.5, 0.6\n# comment\n\n1.0,0\n")
    assert curve.eval(0.25) == pytest.approx(0.8, abs=1e-15)
    assert curve.eval(0.75) == pytest.approx(0.3, abs=1e-15)


def test_parse_curve_text_reports_line_numbers():
    with pytest.raises(DemandError, match="line 2"):
        parse_curve_text("0,1\n0.5 0.6\n1,0\n")
    with pytest.raises(DemandError, match="line 3"):
        parse_curve_text("0,1\n0.5,0.6\nx,0\n")
    with pytest.raises(DemandError, match="no data"):
        parse_curve_text("# only a comment\n")


def test_load_curve(tmp_path):
    path = tmp_path / "curve.csv"
    path.write_text("0,2\n1,1\n2,0\n")
    curve = load_curve(path)
    assert curve.eval(1.5) == pytest.approx(0.5, abs=1e-15)
    assert curve.domain_max == 2.0


def test_pieces_cover_domain():
    curve = make_q_epsilon(0.25)
    pieces = curve.pieces()
    assert pieces[0][0] == 0.0
    assert pieces[-1][1] == curve.domain_max
    for (lo, up, a, b), (lo2, up2, a2, b2) in zip(pieces, pieces[1:]):
        assert up == lo2
        assert math.isclose(a - b * up, a2 - b2 * up, abs_tol=1e-12)  # continuity
