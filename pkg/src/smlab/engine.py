"""Exact simulator for the serial-monopoly posted-price dynamic.

Each round, a myopic seller facing total demand D_t posts the price that
maximizes p * min(s, D_t(p)), where s is the per-round supply cap. Demand
consists of the daily curve Q plus carried-over (pent-up) demand: a fraction
delta of what went unserved at round t-1 returns at round t, so

    D_t(p) = delta * Z_{t-1}(p) + Q(p)
    Z_t(p) = D_t(p) - q_t   for p <= p_t,   0 above p_t,

with q_t = D_t(p_t). The pent-up function Z_t is piecewise of the form
alpha*Q(p) - beta, so the state stores exact (alpha, beta) coefficients per
price segment instead of sampling. This stays correct after upward price
jumps, when the region between the running-minimum price and the jump target
carries its own accumulated coefficients and no single closed form covers
all prices.

The per-round maximizer is closed-form: on every maximal interval where
D_t(p) = A - B*p, the only candidates are the interval's right endpoint, the
unconstrained vertex A/(2B), and the capacity crossing D_t(p) = s. Revenue
ties within tie_tol resolve to the largest price, so an exact tie with the
one-shot optimum jumps the price back up.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .demand import DemandCurve

if TYPE_CHECKING:
    from .bounds import KeyQuantities

DEFAULT_TIE_TOL = 1e-12


class EngineError(ValueError):
    """Invalid configuration or degenerate dynamic."""


@dataclass(frozen=True)
class SimConfig:
    """Immutable run parameters, safe to share across sweep workers.

    supply is the maximum number of transactions served per round; delta in
    [0, 1] is the fraction of unserved demand that survives to the next
    round; tie_tol is the revenue window within which ties resolve to the
    largest price.
    """

    curve: DemandCurve
    supply: float
    delta: float
    steps: int
    tie_tol: float = DEFAULT_TIE_TOL

    def __post_init__(self):
        if not isinstance(self.curve, DemandCurve):
            raise EngineError("curve must be a DemandCurve")
        if not self.supply > 0.0:
            raise EngineError(f"supply must be positive, got {self.supply}")
        if not 0.0 <= self.delta <= 1.0:
            raise EngineError(f"delta must be in [0, 1], got {self.delta}")
        if not (isinstance(self.steps, int) and self.steps >= 1):
            raise EngineError(f"steps must be a positive integer, got {self.steps}")
        if not self.tie_tol > 0.0:
            raise EngineError(f"tie_tol must be positive, got {self.tie_tol}")


@dataclass
class Segment:
    """Pent-up demand Z(p) = alpha*Q(p) - beta on [p_lo, p_hi)."""

    p_lo: float
    p_hi: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class StepRecord:
    """Outcome of one round.

    jumped is set when the price did not fall below the previous round's
    price (only possible by returning to the one-shot optimum).
    """

    t: int
    price: float
    quantity: float
    revenue: float
    jumped: bool
    segment_count: int


class PentUpState:
    """Mutable simulation state: exact pent-up demand before round t.

    Single-writer: only step() mutates it. The segments tile [0, last_price]
    with Z = 0 above last_price; before the first round the segment list is
    empty and Z is identically zero.
    """

    def __init__(self, curve: DemandCurve, delta: float):
        self.curve = curve
        self.delta = delta
        self.segments: list[Segment] = []
        self.last_price: float | None = None
        self.t = 1
        self.running_min = math.inf
        self._lowers: list[float] = []

    def copy(self) -> "PentUpState":
        dup = PentUpState(self.curve, self.delta)
        dup.segments = [Segment(s.p_lo, s.p_hi, s.alpha, s.beta) for s in self.segments]
        dup.last_price = self.last_price
        dup.t = self.t
        dup.running_min = self.running_min
        dup._lowers = list(self._lowers)
        return dup

    def _reindex(self):
        self._lowers = [s.p_lo for s in self.segments]

    def pent_up(self, p: float) -> float:
        """Z_{t-1}(p), zero above the previous price."""
        if p < 0.0:
            raise EngineError(f"price must be nonnegative, got {p}")
        if not self.segments or p > self.last_price:
            return 0.0
        seg = self.segments[min(bisect_right(self._lowers, p), len(self.segments)) - 1]
        return seg.alpha * self.curve.eval(p) - seg.beta


def new_state(config: SimConfig) -> PentUpState:
    """Fresh state with no pent-up demand."""
    return PentUpState(config.curve, config.delta)


def total_demand(state: PentUpState, p: float) -> float:
    """D_t(p) for the round the state is about to play."""
    return state.delta * state.pent_up(p) + state.curve.eval(p)


def _demand_pieces(state: PentUpState):
    """Maximal intervals (lo, up, A, B) with D(p) = A - B*p on (lo, up].

    Overlays the pent-up segments onto the curve pieces; above last_price the
    coefficients are the curve's own.
    """
    curve = state.curve
    delta = state.delta
    q_uppers = curve._uppers
    q_pieces = curve._pieces

    cut_set = set(q_uppers)
    for seg in state.segments:
        if seg.p_hi < curve.domain_max:
            cut_set.add(seg.p_hi)
    cuts = sorted(b for b in cut_set if 0.0 < b <= curve.domain_max)

    pieces = []
    lo = 0.0
    last = state.last_price if state.segments else -math.inf
    for up in cuts:
        qa, qb = 0.0, 0.0
        qi = bisect_left(q_uppers, up)
        if qi < len(q_pieces):
            _, qa, qb = q_pieces[qi]
        if up <= last:
            seg = state.segments[min(bisect_right(state._lowers, lo), len(state.segments)) - 1]
            scale = delta * seg.alpha + 1.0
            pieces.append((lo, up, scale * qa - delta * seg.beta, scale * qb))
        else:
            pieces.append((lo, up, qa, qb))
        lo = up
    return pieces


def _argmax_revenue(pieces, supply: float, tie_tol: float):
    """Best (price, quantity) for p * min(supply, A - B*p) over the pieces.

    Candidates per piece: right endpoint, interior vertex, capacity crossing.
    Among candidates within tie_tol of the maximum revenue, the largest price
    wins.
    """
    cands = []  # (revenue, price, quantity)
    for lo, up, a, b in pieces:
        d_up = a - b * up
        if b <= 0.0:
            cands.append((up * min(supply, d_up), up, d_up))
            continue
        if d_up >= supply:
            cands.append((up * supply, up, d_up))
            continue
        lo2 = lo
        if a - b * lo > supply:
            pc = (a - supply) / b
            cands.append((pc * supply, pc, supply))
            lo2 = pc
        v = a / (2.0 * b)
        if lo2 < v < up:
            cands.append((v * (a - b * v), v, a - b * v))
        cands.append((up * d_up, up, d_up))

    best_rev = max(rev for rev, _, _ in cands)
    price, quantity = max(
        (price, qty) for rev, price, qty in cands if rev >= best_rev - tie_tol
    )
    return price, quantity


def step(state: PentUpState, config: SimConfig) -> StepRecord:
    """Play one round: choose p_t, record it, and advance the pent-up state."""
    if config.curve is not state.curve or config.delta != state.delta:
        raise EngineError("config does not match the state it created")
    if state.curve.eval(0.0) <= 0.0:
        raise EngineError("no demand: Q(0) = 0")

    price, quantity = _argmax_revenue(
        _demand_pieces(state), config.supply, config.tie_tol
    )
    delta = state.delta
    prev = state.last_price

    new_segments = []
    for seg in state.segments:
        if seg.p_lo >= price:
            break
        new_segments.append(
            Segment(
                seg.p_lo,
                min(seg.p_hi, price),
                delta * seg.alpha + 1.0,
                delta * seg.beta + quantity,
            )
        )
    fresh_lo = prev if prev is not None else 0.0
    if price > fresh_lo:
        new_segments.append(Segment(fresh_lo, price, 1.0, quantity))

    t = state.t
    state.segments = new_segments
    state.last_price = price
    state.running_min = min(state.running_min, price)
    state.t = t + 1
    state._reindex()

    return StepRecord(
        t=t,
        price=price,
        quantity=quantity,
        revenue=price * quantity,
        jumped=prev is not None and price >= prev,
        segment_count=len(new_segments),
    )


def run(config: SimConfig) -> list[StepRecord]:
    """Simulate config.steps rounds from an empty mempool."""
    state = new_state(config)
    return [step(state, config) for _ in range(config.steps)]


def run_with_states(config: SimConfig):
    """Like run(), also returning the pre-round state snapshots.

    states[i] is the state before round i+1 (so it holds Z_i); the list has
    steps + 1 entries, the last being the state after the final round.
    """
    state = new_state(config)
    states = [state.copy()]
    records = []
    for _ in range(config.steps):
        records.append(step(state, config))
        states.append(state.copy())
    return records, states


def revenue_diff(state: PentUpState, p: float, kq: "KeyQuantities") -> float:
    """Gap p * D_t(p) - rev_mon between posting p now and the one-shot optimum.

    Negative values certify that the round cannot choose p.
    """
    return p * total_demand(state, p) - kq.rev_mon


TRAJECTORY_HEADER = "t,price,quantity,revenue,jumped,segments"


def write_trajectory_csv(records, fh) -> None:
    """Write records in the canonical trajectory CSV schema (12 significant digits)."""
    fh.write(TRAJECTORY_HEADER + "\n")
    for r in records:
        fh.write(
            f"{r.t},{r.price:.12g},{r.quantity:.12g},{r.revenue:.12g},"
            f"{int(r.jumped)},{r.segment_count}\n"
        )
