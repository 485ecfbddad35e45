"""Piecewise-linear daily demand curves.

A demand curve maps a posted price p to the number of newly arriving
transactions willing to pay p or more. Curves are stored exactly as knots
(price, quantity) with weakly increasing prices and weakly decreasing
quantities; between knots the curve is linear. A repeated knot price encodes
a downward step, and evaluation is left-continuous (the value at a step price
is the limit from below), so that a mass of transactions valuing the good at
exactly p is counted by Q(p). Beyond the last knot price the curve is zero.

The per-piece (intercept, slope) table derived from the knots is what the
simulation engine and the bound calculators consume: every revenue
maximization and root-solve in this package is closed-form per piece, never
iterative.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

ABS_TOL = 1e-12


class DemandError(ValueError):
    """Invalid curve construction or evaluation input."""


class NoSolutionError(DemandError):
    """Requested quantity is not attained anywhere on the curve."""


@dataclass(frozen=True)
class CurveFamily:
    """Tag recording which constructor produced a curve.

    kind is one of "linear", "q_epsilon", "q_zero", "custom". Parameters are
    only set for the kinds that have them (c, m for linear; epsilon for
    q_epsilon).
    """

    kind: str
    c: float | None = None
    m: float | None = None
    epsilon: float | None = None


CUSTOM = CurveFamily("custom")


class DemandCurve:
    """Exact piecewise-linear, weakly decreasing demand curve.

    Immutable after construction; safe to share across workers. Use the
    module constructors (make_linear, make_q_epsilon, from_knots, load_curve)
    rather than instantiating directly.
    """

    def __init__(self, knots, family=CUSTOM):
        knots = tuple((float(p), float(q)) for p, q in knots)
        if len(knots) < 2:
            raise DemandError("a curve needs at least two knots")
        if knots[0][0] != 0.0:
            raise DemandError("the first knot must be at price 0")
        for p, q in knots:
            if not (p >= 0.0 and q >= 0.0) or p != p or q != q:
                raise DemandError(f"knot ({p}, {q}) is not finite and nonnegative")

        pieces = []  # (upper_price, intercept, slope): Q(p) = intercept - slope*p on (lower, upper]
        has_step = False
        last_step_at = None
        prev_p, prev_q = knots[0]
        for p, q in knots[1:]:
            if q > prev_q + ABS_TOL:
                raise DemandError(f"quantities must be weakly decreasing (rises at price {p})")
            if p == prev_p:
                if last_step_at == p:
                    raise DemandError(f"more than two knots share price {p}")
                if q >= prev_q:
                    raise DemandError(f"duplicate knot at price {p} must step downward")
                has_step = True
                last_step_at = p
                prev_q = q
                continue
            if p < prev_p:
                raise DemandError("knot prices must be ascending")
            slope = (prev_q - q) / (p - prev_p)
            pieces.append((p, prev_q + slope * prev_p, slope))
            prev_p, prev_q = p, q

        if not pieces:
            raise DemandError("curve has zero width")

        self.knots = knots
        self.family = family
        self.domain_max = knots[-1][0]
        self.has_steps = has_step or knots[-1][1] > 0.0
        # strict = strictly decreasing everywhere it is positive: no flat
        # pieces and no jumps.
        self.strict = (not self.has_steps) and all(b > 0.0 for _, _, b in pieces)
        self._pieces = pieces
        self._uppers = [up for up, _, _ in pieces]

    def __repr__(self):
        return f"DemandCurve({self.family.kind}, knots={list(self.knots)})"

    def eval(self, p: float) -> float:
        """Quantity demanded at price p (left-continuous, 0 beyond the domain)."""
        if p < 0.0:
            raise DemandError(f"price must be nonnegative, got {p}")
        if p == 0.0:
            return self.knots[0][1]
        if p > self.domain_max:
            return 0.0
        up, a, b = self._pieces[bisect_left(self._uppers, p)]
        return a - b * p

    __call__ = eval

    def inverse_max_price(self, q: float) -> float:
        """Largest price p with eval(p) >= q.

        Flat segments resolve to their right end; on a strictly decreasing
        curve this is the unique root of Q(p) = q. Raises NoSolutionError for
        q above Q(0).
        """
        q0 = self.knots[0][1]
        if q < -ABS_TOL:
            raise DemandError(f"quantity must be nonnegative, got {q}")
        if q > q0 + ABS_TOL:
            raise NoSolutionError(f"quantity {q} exceeds Q(0) = {q0}")
        q = min(max(q, 0.0), q0)
        for i in range(len(self._pieces) - 1, -1, -1):
            up, a, b = self._pieces[i]
            lo = self._uppers[i - 1] if i > 0 else 0.0
            if a - b * up >= q:
                return up
            if b > 0.0 and a - b * lo >= q:
                return (a - q) / b
        return 0.0

    def pieces(self):
        """Linear pieces as (lower, upper, intercept, slope) tuples.

        Q(p) = intercept - slope*p holds on (lower, upper]; the value at
        price 0 is the first knot quantity.
        """
        out = []
        lo = 0.0
        for up, a, b in self._pieces:
            out.append((lo, up, a, b))
            lo = up
        return out


def make_linear(c: float, m: float) -> DemandCurve:
    """Linear curve Q(p) = c - m*p, truncated at zero."""
    if not c > 0.0:
        raise DemandError(f"intercept c must be positive, got {c}")
    if not m > 0.0:
        raise DemandError(f"slope m must be positive, got {m}")
    return DemandCurve([(0.0, c), (c / m, 0.0)], CurveFamily("linear", c=c, m=m))


def make_q_epsilon(epsilon: float) -> DemandCurve:
    """Two-piece curve: 1/2 + eps - 2*eps*p on [0, 1/2], then 1 - p on [1/2, 1].

    epsilon = 0 gives the flat-then-linear variant (weakly decreasing);
    epsilon = 1/2 coincides with make_linear(1, 1).
    """
    if epsilon < 0.0:
        raise DemandError(f"epsilon must be nonnegative, got {epsilon}")
    if epsilon == 0.0:
        family = CurveFamily("q_zero", epsilon=0.0)
    else:
        family = CurveFamily("q_epsilon", epsilon=epsilon)
    return DemandCurve([(0.0, 0.5 + epsilon), (0.5, 0.5), (1.0, 0.0)], family)


def from_knots(points, family=CUSTOM) -> DemandCurve:
    """Curve through explicit (price, quantity) knots.

    A repeated price encodes a downward step evaluated left-continuously.
    """
    return DemandCurve(points, family)


def parse_curve_text(text: str, source: str = "<string>") -> DemandCurve:
    """Parse the two-column "price,quantity" format, one pair per line.

    Blank lines and lines starting with '#' are skipped. Errors report the
    offending 1-based line number.
    """
    points = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DemandError(f"{source}: line {lineno}: expected 'price,quantity', got {raw!r}")
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise DemandError(f"{source}: line {lineno}: non-numeric value in {raw!r}") from None
    if not points:
        raise DemandError(f"{source}: no data lines")
    try:
        return from_knots(points)
    except DemandError as exc:
        raise DemandError(f"{source}: {exc}") from None


def load_curve(path) -> DemandCurve:
    """Load a custom curve from a two-column text file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_curve_text(fh.read(), source=str(path))
