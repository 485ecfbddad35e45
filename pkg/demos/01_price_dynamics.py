"""Price paths of the serial-monopoly dynamic at different patience levels.

A seller posts one price per round against the daily demand Q(p) = 1 - p
plus whatever unserved demand carried over from earlier rounds. With fully
impatient buyers (delta = 0) the price pins to the one-shot optimum 0.5
forever; with patient buyers pent-up demand builds below the posted price
and drags the price down until serving it earns less than the one-shot
revenue, at which point the price snaps back up.

Run: python demos/01_price_dynamics.py
"""

from smlab import SimConfig, key_quantities, make_linear, run

curve = make_linear(1.0, 1.0)
kq = key_quantities(curve, 1.0)

print(f"one-shot optimum p_mon = {kq.p_mon}, floor p_ser = {kq.p_ser}\n")

print("first 12 rounds for several carry-over fractions delta:")
deltas = [0.0, 0.25, 0.5, 0.75, 1.0]
paths = {d: run(SimConfig(curve, 1.0, d, 12)) for d in deltas}
header = "round " + "".join(f"  d={d:<5}" for d in deltas)
print(header)
for t in range(12):
    row = f"{t + 1:>5} " + "".join(f"  {paths[d][t].price:7.4f}" for d in deltas)
    print(row)

print(
    "\nEvery price stays inside [p_ser, p_mon], and each move either"
    "\ndecreases the price or jumps it back to p_mon exactly."
)

# The third round is the first interesting decision: keep discounting, or
# reset? The switch happens near delta = 0.828.
print("\nthird-round behavior around the jump threshold:")
for d in (0.80, 0.82, 0.83, 0.84, 0.86):
    rec = run(SimConfig(curve, 1.0, d, 3))[2]
    verdict = "jumps back to 0.5" if rec.jumped else f"keeps falling to {rec.price:.4f}"
    print(f"  delta = {d:.2f}: {verdict}")

print("\n100-round summary (minimum price reached and number of resets):")
for d in deltas:
    recs = run(SimConfig(curve, 1.0, d, 100))
    floor = min(r.price for r in recs)
    resets = sum(1 for r in recs[1:] if r.jumped)
    print(f"  delta = {d:<5}: floor {floor:.4f}, {resets:3d} jumps")
