"""Location-based sequence reuse on a hexagonal cell lattice.

Cells are indexed by oblique coordinates ``(m, n)`` on axes 60 degrees
apart; the centre of cell ``(m, n)`` lies at Cartesian
``((m + n/2) * d_min, n * sqrt(3)/2 * d_min)``. Cells sharing a colour form
a coset of the sublattice spanned by ``(b1, b2)`` and ``(-b2, b1 + b2)``,
which has index ``G = b1**2 + b1*b2 + b2**2`` and minimum distance
``sqrt(G) * d_min``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import schemes


@dataclass(frozen=True)
class ReuseLattice:
    d_min: float
    R: float
    G: int
    b1: int
    b2: int

    @property
    def cell_radius(self) -> float:
        return self.d_min / math.sqrt(3)

    @property
    def threshold(self) -> float:
        return (2 * self.R / self.d_min) ** 2


def loeschian_reps(limit: int) -> dict:
    """Map every Loeschian number <= limit to its (b1, b2) with b1 >= b2 >= 0
    and smallest b1."""
    reps = {}
    b = 0
    while b * b <= limit:
        for b2 in range(b + 1):
            G = b * b + b * b2 + b2 * b2
            if G <= limit and G not in reps:
                reps[G] = (b, b2)
        b += 1
    # smallest b1 wins; the loop visits b1 in ascending order
    return reps


def reuse_factor(R: float, d_min: float, strict: bool = False) -> ReuseLattice:
    """Smallest G = b1^2 + b1*b2 + b2^2 with G >= (2R/d_min)^2 (``>`` if strict).

    Searches b1, b2 in [0, ceil(2R/d_min) + 1]. Among representations of the
    same G, ``b1 >= b2`` is imposed (the mirror image gives the same
    colouring up to reflection) and the smallest such b1 is kept.
    """
    if R <= 0 or d_min <= 0:
        raise ValueError("R and d_min must be positive")
    thr = (2 * R / d_min) ** 2
    top = math.ceil(2 * R / d_min) + 1
    best = None
    for b1 in range(top + 1):
        for b2 in range(b1 + 1):
            G = b1 * b1 + b1 * b2 + b2 * b2
            if G == 0 or G < thr or (strict and G <= thr):
                continue
            if best is None or (G, b1) < (best[0], best[1]):
                best = (G, b1, b2)
    G, b1, b2 = best
    return ReuseLattice(float(d_min), float(R), G, b1, b2)


def lattice_for(G: int, d_min: float = 1.0) -> ReuseLattice:
    """Lattice with a prescribed Loeschian G (R set to the largest range it supports)."""
    reps = loeschian_reps(G)
    if G not in reps or G == 0:
        raise ValueError(f"{G} is not a positive Loeschian number")
    b1, b2 = reps[G]
    return ReuseLattice(float(d_min), math.sqrt(G) * d_min / 2, G, b1, b2)


def _coset_key(m, n, b1, b2, G):
    # coordinates in the sublattice basis scaled by G, reduced mod G
    return (((b1 + b2) * m + b2 * n) % G, (-b2 * m + b1 * n) % G)


@lru_cache(maxsize=64)
def _colour_table(b1: int, b2: int) -> dict:
    G = b1 * b1 + b1 * b2 + b2 * b2
    m, n = np.meshgrid(np.arange(G), np.arange(G), indexing="ij")
    k1, k2 = _coset_key(m.ravel(), n.ravel(), b1, b2, G)
    table = {}
    # lexicographic scan over (m, n): first visit defines the canonical
    # representative and the colour number
    for a, b in zip(k1.tolist(), k2.tolist()):
        if (a, b) not in table:
            table[(a, b)] = len(table)
            if len(table) == G:
                break
    return table


def cell_index(m: int, n: int, lat: ReuseLattice) -> int:
    """Colour of cell (m, n), in [0, G)."""
    if lat.G == 1:
        return 0
    return _colour_table(lat.b1, lat.b2)[_coset_key(m, n, lat.b1, lat.b2, lat.G)]


def cell_center(m: int, n: int, d_min: float) -> tuple:
    return ((m + n / 2) * d_min, n * math.sqrt(3) / 2 * d_min)


def reuse_scheme_params(D: int, lat: ReuseLattice) -> dict:
    """Periods of location-reused TDMA (G) and GF (q(D, G)**2)."""
    q, k = schemes.gf_params(D, lat.G)
    return {"G": lat.G, "b1": lat.b1, "b2": lat.b2, "tdma_period": lat.G,
            "gf_q": q, "gf_k": k, "gf_period": q * q}


def colour_grid(lat: ReuseLattice, extent: int) -> list:
    """(m, n, colour) for |m|, |n| <= extent."""
    return [(m, n, cell_index(m, n, lat))
            for m in range(-extent, extent + 1) for n in range(-extent, extent + 1)]
