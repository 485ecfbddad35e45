"""Analytic quantities and admission-price bounds.

Everything here is closed-form over the curve's linear pieces. The central
objects are:

* KeyQuantities: the one-shot optimum (p_mon, q_mon, rev_mon), the serial
  price p_ser = rev_mon / supply below which a full block cannot beat the
  one-shot revenue, and the derived (p_bar_ser, q_bar_ser, delta_bar_ser)
  that decide when the patience-dependent upper bound applies.
* p_ser_delta: the upper bound on the minimum admission price for
  delta > delta_bar_ser, defined as the root of Q(p) = q_ser - (1-delta)*s.
* certificate_value / forbidden_interval: the per-round certificate
  p * (a_t*Q(p) - (a_t - 1)*q_mon) - rev_mon, with a_t the geometric
  carry-over weight; negativity at p proves the round cannot post p.
* asymptotic_admission_lb: t -> infinity limits of the certificate roots for
  the linear and kinked-linear families plus the general-curve fallback.
* collapse_predicted / tightness_thresholds: the regime where the dynamic
  sits at p_mon forever, and how sharply that regime borders the one where
  the upper bound applies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import engine
from .demand import DemandCurve

ROOT_TOL = 1e-12


class NotApplicableError(ValueError):
    """A bound's precondition does not hold for the given inputs."""


@dataclass(frozen=True)
class KeyQuantities:
    """Prices and quantities characterizing a (curve, supply) pair."""

    p_mon: float
    q_mon: float
    rev_mon: float
    p_ser: float
    q_ser: float
    p_bar_ser: float
    q_bar_ser: float
    delta_bar_ser: float


def key_quantities(curve: DemandCurve, supply: float, tie_tol: float = engine.DEFAULT_TIE_TOL) -> KeyQuantities:
    """Compute the characteristic quantities for a curve and supply cap.

    p_mon is found by the same per-piece maximizer the simulator uses (ties
    resolve to the largest price), so the two never disagree about where the
    one-shot optimum sits.
    """
    if supply <= 0.0:
        raise NotApplicableError(f"supply must be positive, got {supply}")
    if curve.eval(0.0) <= 0.0:
        raise NotApplicableError("degenerate curve: Q(0) = 0")
    config = engine.SimConfig(curve, supply, 0.0, 1, tie_tol)
    rec = engine.step(engine.new_state(config), config)
    p_mon, q_mon = rec.price, rec.quantity
    rev_mon = p_mon * q_mon
    p_ser = rev_mon / supply
    q_ser = curve.eval(p_ser)
    if q_ser <= 0.0:
        raise NotApplicableError("no demand at the serial price")
    p_bar_ser = rev_mon / q_ser
    q_bar_ser = curve.eval(p_bar_ser)
    return KeyQuantities(
        p_mon=p_mon,
        q_mon=q_mon,
        rev_mon=rev_mon,
        p_ser=p_ser,
        q_ser=q_ser,
        p_bar_ser=p_bar_ser,
        q_bar_ser=q_bar_ser,
        delta_bar_ser=1.0 - (q_ser - q_bar_ser) / supply,
    )


def pent_up_weight(delta: float, t: int) -> float:
    """Geometric carry-over weight 1 + delta + ... + delta^(t-1).

    Evaluates to t at delta = 1 (the formula's limit); the branch point sits
    at |1 - delta| < 1e-12 to avoid catastrophic cancellation.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if abs(1.0 - delta) < 1e-12:
        return float(t)
    return (1.0 - delta**t) / (1.0 - delta)


def p_ser_delta(curve: DemandCurve, supply: float, delta: float, kq: KeyQuantities | None = None) -> float:
    """Upper bound on the minimum admission price for delta > delta_bar_ser.

    The largest price at which demand reaches q_ser - (1-delta)*supply; it
    always lies strictly between p_ser and p_bar_ser.
    """
    kq = kq or key_quantities(curve, supply)
    if delta <= kq.delta_bar_ser:
        raise NotApplicableError(
            f"delta = {delta} must exceed delta_bar_ser = {kq.delta_bar_ser}"
        )
    return curve.inverse_max_price(kq.q_ser - (1.0 - delta) * supply)


def delta_min(curve: DemandCurve, supply: float, p_star: float, kq: KeyQuantities | None = None) -> float:
    """Patience threshold above which p_star is an admission price.

    Equals 1 - (Q(p_ser) - Q(p_star)) / supply; strictly below 1 whenever
    the curve strictly decreases through (p_ser, p_star].
    """
    kq = kq or key_quantities(curve, supply)
    if p_star <= kq.p_ser:
        raise NotApplicableError(f"p_star = {p_star} must exceed p_ser = {kq.p_ser}")
    return 1.0 - (kq.q_ser - curve.eval(p_star)) / supply


def certificate_value(
    curve: DemandCurve,
    supply: float,
    delta: float,
    t: int,
    p: float,
    kq: KeyQuantities | None = None,
) -> float:
    """Round-t revenue certificate at price p.

    Upper-bounds the gap between the revenue available at p and the one-shot
    optimum; a negative value proves the round cannot post p.
    """
    kq = kq or key_quantities(curve, supply)
    a = pent_up_weight(delta, t)
    return p * (a * curve.eval(p) - (a - 1.0) * kq.q_mon) - kq.rev_mon


def forbidden_interval(
    curve: DemandCurve,
    supply: float,
    delta: float,
    t: int,
    kq: KeyQuantities | None = None,
):
    """Certificate root pair (p_low, p_mon) at round t, if p_low < p_mon.

    The certificate is negative on [0, p_low), so no round-t price can fall
    there. Returns None when the first upward zero-crossing is not strictly
    below p_mon (then every price below p_mon is excluded and the dynamic
    must sit at the one-shot optimum at round t).
    """
    kq = kq or key_quantities(curve, supply)
    a = pent_up_weight(delta, t)
    lo = 0.0
    for up, qa, qb in curve._pieces:
        # F(p) = c2*p^2 + c1*p + c0 on (lo, up]
        c2 = -a * qb
        c1 = a * qa - (a - 1.0) * kq.q_mon
        c0 = -kq.rev_mon
        crossing = None
        if c2 == 0.0:
            if c1 > 0.0:
                root = -c0 / c1
                if root <= up + ROOT_TOL:
                    crossing = max(root, lo)
        else:
            disc = c1 * c1 - 4.0 * c2 * c0
            if disc >= 0.0:
                sq = disc**0.5
                r1, r2 = sorted(((-c1 + sq) / (2.0 * c2), (-c1 - sq) / (2.0 * c2)))
                # concave: F >= 0 exactly on [r1, r2]
                if r2 >= lo - ROOT_TOL and r1 <= up + ROOT_TOL:
                    crossing = max(r1, lo)
        if crossing is not None:
            if crossing < kq.p_mon - ROOT_TOL:
                return (crossing, kq.p_mon)
            return None
        lo = up
    return None


LB_LINEAR = "linear"
LB_Q_EPSILON = "q_epsilon"
LB_GENERAL = "general_q"


def _lower_bound_routes(curve: DemandCurve, supply: float, delta: float, kq: KeyQuantities):
    """All applicable asymptotic lower bounds plus reasons for the failed ones."""
    candidates = []
    reasons = {}
    fam = curve.family

    if fam.kind == "linear":
        if supply >= fam.c / 2.0:
            candidates.append(((1.0 - delta) / 2.0 * (fam.c / fam.m), LB_LINEAR))
        else:
            reasons["lower_bound_linear"] = f"supply {supply} < c/2 = {fam.c / 2.0}"
    elif fam.kind in ("q_epsilon", "q_zero"):
        eps = fam.epsilon
        if eps < 0.5:
            reasons["lower_bound_q_epsilon"] = f"epsilon {eps} < 1/2"
        elif supply < 0.5:
            reasons["lower_bound_q_epsilon"] = f"supply {supply} < 1/2"
        else:
            candidates.append(((1.0 - delta) / (4.0 * eps), LB_Q_EPSILON))

    if delta >= 1.0:
        reasons["lower_bound_general_q"] = "delta must be below 1"
    else:
        q0 = curve.eval(0.0)
        cap = supply + delta * (kq.q_mon - supply)
        if q0 <= cap + ROOT_TOL:
            denom = q0 / (1.0 - delta) + kq.q_mon - kq.q_mon / (1.0 - delta)
            candidates.append((kq.rev_mon / denom, LB_GENERAL))
        else:
            reasons["lower_bound_general_q"] = (
                f"Q(0) = {q0} exceeds supply + delta*(q_mon - supply) = {cap}"
            )
    return candidates, reasons


def asymptotic_admission_lb(curve: DemandCurve, supply: float, delta: float):
    """Tightest applicable t -> infinity lower bound on the admission price.

    Returns (value, route) with route one of "linear", "q_epsilon",
    "general_q", or None when no route's precondition holds.
    """
    kq = key_quantities(curve, supply)
    candidates, _ = _lower_bound_routes(curve, supply, delta, kq)
    return max(candidates) if candidates else None


def collapse_predicted(epsilon: float, delta: float) -> bool:
    """Whether the kinked-linear dynamic sits at p_mon forever.

    True iff epsilon < (1 - delta) / 2; epsilon = 0 (the flat variant)
    collapses for every delta < 1.
    """
    if epsilon < 0.0:
        raise NotApplicableError(f"epsilon must be nonnegative, got {epsilon}")
    if not 0.0 <= delta < 1.0:
        raise NotApplicableError(f"delta must be in [0, 1), got {delta}")
    return epsilon < (1.0 - delta) / 2.0


def tightness_thresholds(epsilon: float) -> tuple[float, float]:
    """Patience thresholds (collapse below first, upper bound above second).

    For the kinked-linear family with 0 < epsilon < 1/2: below 1 - 2*epsilon
    the dynamic collapses to p_mon, above 1 - eps/2 + eps^2/(1+eps) the
    admission upper bound applies; the gap between them is below 2*epsilon.
    """
    if not 0.0 < epsilon < 0.5:
        raise NotApplicableError(f"epsilon must be in (0, 1/2), got {epsilon}")
    return (1.0 - 2.0 * epsilon, 1.0 - epsilon / 2.0 + epsilon**2 / (1.0 + epsilon))


@dataclass
class BoundReport:
    """Every applicable bound for a (curve, supply, delta) triple.

    Non-applicable bounds are None with the failed precondition named in
    reasons, so batch outputs stay rectangular.
    """

    kq: KeyQuantities
    delta: float
    supply: float
    curve_strict: bool
    upper_bound: float | None = None
    upper_bound_closed_form: float | None = None
    asymptotic_lower: float | None = None
    asymptotic_lower_route: str | None = None
    collapse_predicted: bool | None = None
    tightness: tuple[float, float] | None = None
    adjusted_lower_price: float | None = None
    reasons: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "p_mon": self.kq.p_mon,
            "q_mon": self.kq.q_mon,
            "rev_mon": self.kq.rev_mon,
            "p_ser": self.kq.p_ser,
            "q_ser": self.kq.q_ser,
            "p_bar_ser": self.kq.p_bar_ser,
            "q_bar_ser": self.kq.q_bar_ser,
            "delta_bar_ser": self.kq.delta_bar_ser,
            "delta": self.delta,
            "supply": self.supply,
            "curve_strict": self.curve_strict,
            "upper_bound": self.upper_bound,
            "upper_bound_closed_form": self.upper_bound_closed_form,
            "asymptotic_lower": self.asymptotic_lower,
            "asymptotic_lower_route": self.asymptotic_lower_route,
            "collapse_predicted": self.collapse_predicted,
            "tightness_collapse_below": self.tightness[0] if self.tightness else None,
            "tightness_upper_above": self.tightness[1] if self.tightness else None,
            "adjusted_lower_price": self.adjusted_lower_price,
            "reasons": dict(sorted(self.reasons.items())),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _stated_upper_form(curve: DemandCurve, delta: float) -> float | None:
    """Published closed-form variant of the upper bound, where one exists.

    Kept for cross-reference only: it disagrees with the defining root-solve
    by a factor of two in the patience term, so reports carry both.
    """
    fam = curve.family
    if fam.kind == "q_epsilon" and fam.epsilon > 0.0:
        return 0.25 + (1.0 - delta) / fam.epsilon
    if fam.kind == "linear" and fam.c == 1.0 and fam.m == 1.0:
        return 0.25 + 2.0 * (1.0 - delta)
    return None


def bound_report(curve: DemandCurve, supply: float, delta: float) -> BoundReport:
    """Aggregate every bound that applies to (curve, supply, delta)."""
    if not 0.0 <= delta <= 1.0:
        raise NotApplicableError(f"delta must be in [0, 1], got {delta}")
    kq = key_quantities(curve, supply)
    report = BoundReport(kq=kq, delta=delta, supply=supply, curve_strict=curve.strict)

    if delta > kq.delta_bar_ser:
        report.upper_bound = p_ser_delta(curve, supply, delta, kq)
        report.upper_bound_closed_form = _stated_upper_form(curve, delta)
    else:
        report.reasons["upper_bound"] = (
            f"delta = {delta} <= delta_bar_ser = {kq.delta_bar_ser}"
        )

    candidates, lb_reasons = _lower_bound_routes(curve, supply, delta, kq)
    report.reasons.update(lb_reasons)
    if candidates:
        report.asymptotic_lower, report.asymptotic_lower_route = max(candidates)

    fam = curve.family
    if fam.kind in ("q_epsilon", "q_zero") and delta < 1.0:
        report.collapse_predicted = collapse_predicted(fam.epsilon, delta)
    else:
        report.reasons["collapse_predicted"] = (
            "collapse criterion applies to the q_epsilon family with delta < 1"
        )
    if fam.kind == "q_epsilon" and 0.0 < fam.epsilon < 0.5:
        report.tightness = tightness_thresholds(fam.epsilon)
    else:
        report.reasons["tightness"] = "thresholds require a q_epsilon curve with epsilon in (0, 1/2)"

    if not curve.strict:
        report.adjusted_lower_price = curve.inverse_max_price(kq.q_ser)
    return report
