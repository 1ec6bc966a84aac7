"""
Closed-form timely throughput
=============================

A pair with one collision-free slot per period L delivers a packet of a
T-slot frame with a probability that depends only on L, T and the link
success probability p.
"""

import numpy as np

from ttsched import analytics

print("L=50, T=30, p=0.8:", analytics.throughput(50, 30, 0.8))
print("L=20, T=30, p=0.8:", analytics.throughput(20, 30, 0.8))

# the same number from an explicit per-frame count of free slots
prof = analytics.collision_free_profile(3, 4, 1)
print("free slots per frame, L=3, T=4:", prof,
      "->", analytics.profile_throughput(prof, 0.5))

N, T, p = 50, 30, 0.8
print("\n  D   aloha_lb  gf_lb   tdma")
for D in (1, 3, 5, 10, 20, 29):
    print(f"{D:3d}   {analytics.aloha_average_lb(D, N, T, p):.4f}   "
          f"{analytics.gf_average_lb(D, N, T, p):.4f}  {analytics.tdma_average(N, T, p):.4f}")

print("largest D where the ALOHA bound still matches TDMA:",
      analytics.critical_density(N, T, p))
print("largest D with a GF period shorter than TDMA's (N=100):",
      analytics.gf_period_critical_density(100))

# heterogeneous links are accepted as one probability per pair
ps = np.random.default_rng(0).uniform(0.5, 1.0, N)
print("TDMA with mixed links:", round(analytics.tdma_average(N, T, ps), 4))
