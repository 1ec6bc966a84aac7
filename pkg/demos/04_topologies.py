"""
Random topologies and mobility
==============================

Pairs are dropped uniformly in a square and redrawn until no receiver
hears more than D foreign transmitters within range.
"""

from ttsched import topology as tp

side = tp.area_for_density(50, 200.0, 5)
print(f"square side giving density about 5 for 50 pairs: {side:.0f} m")

t = tp.generate_topology(50, 200.0, 5, side, side, seed=1)
print("max interferers:", t.max_interferer_count())
print("interferers of pair 0:", sorted(t.interferers(0)))

# Rayleigh outage model for the link success probability
ch = tp.PhysicalChannel(power=0.1)
for d in (50, 100, 150):
    print(f"p(d={d} m) = {tp.physical_success_prob(ch, d):.4f}")

# random-waypoint motion at 30 m/s for one second of 0.8 ms slots
m = tp.mobility_init(t, 30.0, rng=2)
moved = tp.step_mobility(t, m, 1250, rng=2)
print("mean displacement after 1 s:",
      round(float(((moved.tx - t.tx) ** 2).sum(axis=1).mean() ** 0.5), 2), "m")
print("density after moving:", moved.max_interferer_count())

# snapshots round-trip through a small text format
assert tp.Topology.from_text(t.to_text()) == t
print(t.to_text().splitlines()[0])
