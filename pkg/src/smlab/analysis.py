"""Trajectory analytics and invariant validation.

The minimum admission price of an infinite dynamic cannot be decided from a
finite run, so estimate_map reports the tail-minimum price together with the
largest observed recurrence gap at that level as evidence. validate() and
demand_law_checks() are the machine-checkable forms of the theory's guarantees:
price band, monotone-or-jump, revenue-certificate nonnegativity, and the
pent-up demand-difference inequalities. On a correct engine every violation
list is empty; they exist to catch regressions and corrupted inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import engine
from .bounds import KeyQuantities, certificate_value, key_quantities, pent_up_weight
from .demand import DemandCurve

STRICT_TOL = 1e-12


class AnalysisError(ValueError):
    pass


@dataclass
class AdmissionEstimate:
    """Finite-horizon estimate of the minimum admission price.

    p_map_hat is the minimum price over the post-burn-in tail;
    recurrence_gap is the largest spacing between consecutive tail rounds
    priced at that level (1 means the level recurs every round).
    """

    p_map_hat: float
    recurrence_gap: int
    burn_in: int
    horizon: int


def _tail_estimate(trajectory, burn_in_fraction, level_tol) -> AdmissionEstimate:
    n = len(trajectory)
    if not 0.0 <= burn_in_fraction < 1.0:
        raise AnalysisError(f"burn_in_fraction must be in [0, 1), got {burn_in_fraction}")
    burn = int(n * burn_in_fraction)
    tail = trajectory[burn:]
    p_hat = min(r.price for r in tail)
    hits = [r.t for r in tail if r.price <= p_hat + level_tol]
    if len(hits) >= 2:
        gap = max(b - a for a, b in zip(hits, hits[1:]))
    else:
        gap = len(tail)
    return AdmissionEstimate(p_map_hat=p_hat, recurrence_gap=gap, burn_in=burn, horizon=n)


def estimate_map(
    trajectory,
    kq: KeyQuantities,
    burn_in_fraction: float = 0.5,
    level_tol: float = 1e-9,
) -> AdmissionEstimate:
    """Tail-minimum admission price estimate with recurrence evidence."""
    if len(trajectory) < 10:
        raise AnalysisError(
            f"trajectory too short for estimation: {len(trajectory)} < 10 rounds"
        )
    return _tail_estimate(trajectory, burn_in_fraction, level_tol)


def detect_collapse(trajectory, kq: KeyQuantities, tol: float = 1e-9) -> bool:
    """True iff every round priced at the one-shot optimum (within tol)."""
    if not trajectory:
        raise AnalysisError("empty trajectory")
    return all(abs(r.price - kq.p_mon) <= tol for r in trajectory)


@dataclass
class ValidationReport:
    """Violations found in a trajectory; all lists empty on a correct engine."""

    band_violations: list = field(default_factory=list)
    monotonicity_violations: list = field(default_factory=list)
    certificate_violations: list = field(default_factory=list)
    monopolist_visits: list = field(default_factory=list)
    collapsed: bool = False

    @property
    def ok(self) -> bool:
        return not (
            self.band_violations
            or self.monotonicity_violations
            or self.certificate_violations
        )

    def to_json_dict(self) -> dict:
        return {
            "band_violations": [list(v) for v in self.band_violations],
            "monotonicity_violations": [list(v) for v in self.monotonicity_violations],
            "certificate_violations": [list(v) for v in self.certificate_violations],
            "monopolist_visits": list(self.monopolist_visits),
            "collapsed": self.collapsed,
        }


def validate(
    trajectory,
    states,
    kq: KeyQuantities,
    supply: float,
    tol: float = 1e-9,
    visit_tol: float = 1e-9,
) -> ValidationReport:
    """Check a trajectory against the guaranteed price-path invariants.

    states must be the snapshots from engine.run_with_states (one more entry
    than the trajectory). Checks: p_ser <= p_t <= p_mon within tol; each
    price either drops or returns exactly to p_mon; the round certificate is
    never meaningfully negative at the chosen price.
    """
    if len(states) != len(trajectory) + 1:
        raise AnalysisError(
            f"states/trajectory length mismatch: {len(states)} != {len(trajectory)} + 1"
        )
    curve = states[0].curve
    delta = states[0].delta
    report = ValidationReport()
    prev_price = None
    for rec in trajectory:
        p = rec.price
        if p < kq.p_ser - tol or p > kq.p_mon + tol:
            report.band_violations.append((rec.t, p))
        if prev_price is not None:
            if not (p < prev_price + STRICT_TOL or abs(p - kq.p_mon) <= STRICT_TOL):
                report.monotonicity_violations.append((rec.t, p))
        cert = certificate_value(curve, supply, delta, rec.t, p, kq)
        if cert < -tol:
            report.certificate_violations.append((rec.t, cert))
        if abs(p - kq.p_mon) <= visit_tol:
            report.monopolist_visits.append(rec.t)
        prev_price = p
    report.collapsed = len(report.monopolist_visits) == len(trajectory)
    return report


def demand_law_checks(states, curve: DemandCurve, delta: float, sample_count: int, seed: int = 0):
    """Sampled checks of the pent-up demand-difference laws.

    Over random (p, p', t) with p < p': the demand gap D_t(p) - D_t(p') never
    exceeds a_t * (Q(p) - Q(p')) ("demand_gap_upper"); and when no round
    since the last time the price was at or below p has priced below p', the
    gap equals a_{t-T} * (Q(p) - Q(p')) exactly ("demand_gap_equality").
    Returns [(check_id, max_violation)] — both should be at rounding level.
    """
    if sample_count < 1:
        raise AnalysisError(f"sample_count must be >= 1, got {sample_count}")
    if not states:
        raise AnalysisError("no states supplied")
    rng = random.Random(seed)
    hi = curve.domain_max
    prices = [st.last_price for st in states[1:]]  # prices[k] = price of round k+1

    max_upper = 0.0
    max_equality = 0.0
    for _ in range(sample_count):
        t = rng.randint(1, len(states))
        state = states[t - 1]
        p1, p2 = sorted((rng.uniform(0.0, hi), rng.uniform(0.0, hi)))
        if p1 == p2:
            continue
        gap_d = engine.total_demand(state, p1) - engine.total_demand(state, p2)
        gap_q = curve.eval(p1) - curve.eval(p2)
        max_upper = max(max_upper, gap_d - pent_up_weight(delta, t) * gap_q)

        anchor = 0
        for tau in range(t - 1, 0, -1):
            if prices[tau - 1] <= p1:
                anchor = tau
                break
        if all(prices[tau - 1] >= p2 for tau in range(anchor + 1, t)):
            expect = pent_up_weight(delta, t - anchor) * gap_q
            max_equality = max(max_equality, abs(gap_d - expect))
    return [("demand_gap_upper", max_upper), ("demand_gap_equality", max_equality)]


@dataclass
class SweepRow:
    delta: float
    p_map_hat: float
    recurrence_gap: int
    collapsed: bool
    monopolist_visits: int


def delta_sweep(
    curve: DemandCurve,
    supply: float,
    delta_grid,
    steps: int,
    burn_in_fraction: float = 0.5,
    tie_tol: float = engine.DEFAULT_TIE_TOL,
    visit_tol: float = 1e-9,
) -> list[SweepRow]:
    """One deterministic run per delta, summarized; rows follow grid order.

    Short horizons are allowed here (the tail estimate degrades gracefully);
    estimate_map itself refuses runs under 10 rounds.
    """
    deltas = list(delta_grid)
    if not deltas:
        raise AnalysisError("empty delta grid")
    kq = key_quantities(curve, supply, tie_tol)
    rows = []
    for d in deltas:
        records = engine.run(engine.SimConfig(curve, supply, d, steps, tie_tol))
        est = _tail_estimate(records, burn_in_fraction, 1e-9)
        visits = sum(1 for r in records if abs(r.price - kq.p_mon) <= visit_tol)
        rows.append(
            SweepRow(
                delta=d,
                p_map_hat=est.p_map_hat,
                recurrence_gap=est.recurrence_gap,
                collapsed=detect_collapse(records, kq, visit_tol),
                monopolist_visits=visits,
            )
        )
    return rows


SWEEP_HEADER = "delta,p_map_hat,recurrence_gap,collapsed,monopolist_visits"


def write_sweep_csv(rows, fh) -> None:
    """Write sweep rows in the canonical CSV schema (12 significant digits)."""
    fh.write(SWEEP_HEADER + "\n")
    for r in rows:
        fh.write(
            f"{r.delta:.12g},{r.p_map_hat:.12g},{r.recurrence_gap},"
            f"{int(r.collapsed)},{r.monopolist_visits}\n"
        )
