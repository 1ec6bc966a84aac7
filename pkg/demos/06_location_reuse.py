"""
Reusing sequences by location
=============================

With positions known, cells far enough apart can share a schedule, so
the sequence set only has to cover G cells instead of all pairs.
"""

from ttsched import reuse

for R, d_min in ((5, 10), (20, 10), (100, 10)):
    lat = reuse.reuse_factor(R, d_min)
    info = reuse.reuse_scheme_params(2, lat)
    print(f"R={R} d_min={d_min}: G={lat.G} (b1={lat.b1}, b2={lat.b2}) "
          f"tdma period {info['tdma_period']}, gf period {info['gf_period']}")

strict = reuse.reuse_factor(100, 10, strict=True)
print("strict threshold:", strict.G, (strict.b1, strict.b2))

# colour map of a 7-colour pattern around the origin
lat = reuse.lattice_for(7)
for n in range(3, -4, -1):
    row = " ".join(str(reuse.cell_index(m, n, lat)) for m in range(-4, 5))
    print(" " * (n + 3) + row)
