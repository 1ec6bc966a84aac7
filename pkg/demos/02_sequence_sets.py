"""
Transmission schedules
======================

Three deterministic constructions: TDMA, polynomial sequences over GF(q)
and constant-weight combination words. None of them lets D interferers
cover every transmit slot of a pair.
"""

from itertools import combinations

from ttsched import schemes

print("TDMA, 3 pairs:", [str(s) for s in schemes.tdma_sequences(3)])

# q and k are the smallest field and degree that cover N pairs at density D
for D, N in [(1, 4), (4, 100), (13, 100)]:
    print(f"q(D={D}, N={N}) =", schemes.gf_params(D, N))

gf = schemes.gf_sequences(1, 4)
print("GF, D=1, N=4:", [str(s) for s in gf])

# every schedule keeps a free slot against any D=2 others
nine = list(schemes.gf_sequences(2, 9))
worst = any(schemes.blocked(s, pair)
            for i, s in enumerate(nine)
            for pair in combinations(nine[:i] + nine[i + 1:], 2))
print("some GF(3) schedule blocked by two others:", worst)

comb = schemes.combination_sequences(10)
print("combination, N=10, period", comb.period, ":", [str(s) for s in comb])

# periods side by side: TDMA grows with N, GF with D
for N in (10, 50, 100, 1000):
    q, _ = schemes.gf_params(1, N)
    print(f"N={N:5d}  tdma={N:5d}  gf(D=1)={q * q:5d}  combination={schemes.combination_min_length(N)}")
