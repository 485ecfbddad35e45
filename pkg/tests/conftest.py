import random

from smlab import from_knots


def random_strict_curve(rng: random.Random, max_pieces: int = 4):
    """Random strictly decreasing piecewise-linear curve hitting zero.

    Knot gaps are bounded away from zero so every piece has a genuine slope
    and the one-shot optimum is well separated from degenerate ties.
    """
    n = rng.randint(1, max_pieces)
    hi = rng.uniform(0.4, 2.0)
    top = rng.uniform(0.5, 2.0)
    price_gaps = [rng.uniform(0.15, 1.0) for _ in range(n)]
    quant_gaps = [rng.uniform(0.15, 1.0) for _ in range(n)]
    ps = [0.0]
    acc = 0.0
    for g in price_gaps:
        acc += g
        ps.append(hi * acc / sum(price_gaps))
    qs = [top]
    acc = 0.0
    for g in quant_gaps:
        acc += g
        qs.append(top * (1.0 - acc / sum(quant_gaps)))
    ps[-1] = hi
    qs[-1] = 0.0
    return from_knots(list(zip(ps, qs)))
