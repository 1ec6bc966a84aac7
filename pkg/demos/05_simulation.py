"""
Monte-Carlo comparison of the schemes
=====================================

Frame-synchronised traffic: every pair gets a fresh packet at the start
of each frame and it expires at the end of the frame.
"""

from ttsched import analytics, simulator as sim

N, T, p = 50, 30, 0.8
for D in (1, 15, 29):
    topo = sim.TopologyParams.for_density(N, D, p).generate(seed=D)
    print(f"D={D} (measured {topo.max_interferer_count()})")
    for scheme in ("aloha", "tdma", "gf"):
        res = sim.run(sim.SimConfig(scheme, N, D, T, replications=5, seed=D), topo)
        bound = analytics.scheme_value(scheme, D, N, T, p)
        print(f"   {scheme:6s} {res.average:.4f} +/- {res.stderr:.4f}   formula {bound:.4f}")

# stopping after delivery only helps schemes that transmit more than once
topo = sim.TopologyParams.for_density(20, 10, p).generate(seed=3)
for scheme in ("aloha", "gf", "tdma"):
    base = sim.SimConfig(scheme, 20, 10, 30, horizon=1000, replications=4)
    off = sim.run(base, topo).average
    on = sim.run(sim.SimConfig(scheme, 20, 10, 30, horizon=1000, replications=4,
                               feedback=True), topo).average
    print(f"feedback gain {scheme:6s} {on - off:+.4f}")

# Poisson arrivals with the frame length as deadline
pois = sim.SimConfig("gf", 20, 10, 10, horizon=500, traffic="poisson",
                     mean_interarrival=10.0, replications=2)
topo = sim.TopologyParams.for_density(20, 10, p).generate(seed=4)
print("poisson gf:", round(sim.run(pois, topo).average, 4))
