"""Pair placement, interference sets, channel quality and mobility."""

import math
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

# stated simulation parameters for the practical MANET scenario
DEFAULT_D_RANGE = (50.0, 150.0)
SLOT_DURATION = 0.8e-3


class GenerationTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class FixedChannel:
    p: float = 1.0

    def probs(self, distances: np.ndarray) -> np.ndarray:
        return np.full(len(distances), float(self.p))


@dataclass(frozen=True)
class PhysicalChannel:
    """Rayleigh-faded link with an outage threshold on the achievable rate."""

    power: float = 0.1        # W
    tau: float = 3.0          # path-loss exponent
    noise: float = 1e-7       # W/Hz
    r_th: float = 1.0         # bps/Hz

    def __post_init__(self):
        if min(self.power, self.tau, self.noise, self.r_th) <= 0:
            raise ValueError("physical channel parameters must be positive")

    def probs(self, distances: np.ndarray) -> np.ndarray:
        return np.array([physical_success_prob(self, d) for d in distances])


def physical_success_prob(spec: PhysicalChannel, d: float) -> float:
    return math.exp(-spec.noise * d**spec.tau * (2**spec.r_th - 1) / spec.power)


@dataclass(frozen=True, eq=False)
class Topology:
    tx: np.ndarray            # (N, 2) metres
    rx: np.ndarray            # (N, 2)
    delta: float
    success_probs: np.ndarray
    area: tuple = (math.inf, math.inf)

    @property
    def N(self) -> int:
        return len(self.tx)

    def pair_distances(self) -> np.ndarray:
        return np.linalg.norm(self.tx - self.rx, axis=1)

    def interference_matrix(self) -> np.ndarray:
        """``A[i, j]`` is true when transmitter j interferes at receiver i."""
        d = np.linalg.norm(self.rx[:, None, :] - self.tx[None, :, :], axis=2)
        A = d <= self.delta
        np.fill_diagonal(A, False)
        return A

    def interferers(self, i: int) -> set:
        return set(np.flatnonzero(self.interference_matrix()[i]).tolist())

    def max_interferer_count(self) -> int:
        if self.N == 0:
            return 0
        return int(self.interference_matrix().sum(axis=1).max())

    def __eq__(self, other):
        if not isinstance(other, Topology):
            return NotImplemented
        return (
            self.delta == other.delta
            and tuple(self.area) == tuple(other.area)
            and np.array_equal(self.tx, other.tx)
            and np.array_equal(self.rx, other.rx)
            and np.array_equal(self.success_probs, other.success_probs)
        )

    def to_text(self) -> str:
        w, h = self.area
        lines = [f"# N={self.N} delta={self.delta!r} area={w!r}x{h!r}",
                 "tx_x,tx_y,rx_x,rx_y,p"]
        for (tx, ty), (rx, ry), p in zip(self.tx, self.rx, self.success_probs):
            lines.append(",".join(repr(float(v)) for v in (tx, ty, rx, ry, p)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Topology":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        m = re.match(r"#\s*N=(\d+)\s+delta=(\S+)\s+area=(\S+)x(\S+)", lines[0])
        if not m:
            raise ValueError("missing topology header line")
        n = int(m.group(1))
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]]).reshape(-1, 5)
        if len(rows) != n:
            raise ValueError(f"header announces {n} pairs, found {len(rows)}")
        return cls(rows[:, 0:2].copy(), rows[:, 2:4].copy(), float(m.group(2)),
                   rows[:, 4].copy(), (float(m.group(3)), float(m.group(4))))


def interferers(t: Topology, i: int) -> set:
    return t.interferers(i)


def max_interferer_count(t: Topology) -> int:
    return t.max_interferer_count()


def _place_receivers(tx, d_range, width, height, rng):
    n = len(tx)
    dist = rng.uniform(d_range[0], d_range[1], n)
    ang = rng.uniform(0.0, 2 * math.pi, n)
    rx = tx + np.column_stack([dist * np.cos(ang), dist * np.sin(ang)])
    return np.column_stack([np.clip(rx[:, 0], 0, width), np.clip(rx[:, 1], 0, height)])


def _sample(N, width, height, d_range, rng):
    tx = np.column_stack([rng.uniform(0, width, N), rng.uniform(0, height, N)])
    return tx, _place_receivers(tx, d_range, width, height, rng)


def _max_count(tx, rx, delta):
    d = np.linalg.norm(rx[:, None, :] - tx[None, :, :], axis=2)
    A = d <= delta
    np.fill_diagonal(A, False)
    return int(A.sum(axis=1).max()) if len(tx) else 0


def generate_topology(N: int, delta: float, D: Optional[int], area_width: float,
                      area_height: float, d_tx_rx_range=DEFAULT_D_RANGE,
                      channel=None, seed=None, max_attempts: int = 100_000) -> Topology:
    """Uniform placement, redrawn until no receiver hears more than D
    interferers. ``D=None`` keeps the first draw (free mode)."""
    if N < 1:
        raise ValueError("N must be positive")
    if d_tx_rx_range[1] > delta or d_tx_rx_range[0] < 0:
        raise ValueError("transmitter-receiver distances must lie within [0, delta]")
    channel = channel or FixedChannel(1.0)
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        tx, rx = _sample(N, area_width, area_height, d_tx_rx_range, rng)
        if D is None or _max_count(tx, rx, delta) <= D:
            dist = np.linalg.norm(tx - rx, axis=1)
            return Topology(tx, rx, float(delta), channel.probs(dist),
                            (float(area_width), float(area_height)))
    raise GenerationTimeout(
        f"no placement of {N} pairs with density <= {D} in "
        f"{area_width}x{area_height} after {max_attempts} attempts")


@lru_cache(maxsize=256)
def area_for_density(N: int, delta: float, D: int, d_tx_rx_range=DEFAULT_D_RANGE,
                     samples: int = 200, seed: int = 0) -> float:
    """Side of a square area in which about half of all unconstrained
    placements have density <= D.

    Rejection sampling in that square then yields topologies whose density
    sits at or just below D, which is what a sweep over D needs.
    """
    if D >= N - 1:
        return float(delta) / 2
    rng = np.random.default_rng(seed)

    def accept_rate(side):
        ok = 0
        for _ in range(samples):
            tx, rx = _sample(N, side, side, d_tx_rx_range, rng)
            ok += _max_count(tx, rx, delta) <= D
        return ok / samples

    lo, hi = float(delta) / 2, float(delta)
    while accept_rate(hi) < 0.5:
        lo, hi = hi, hi * 2
    for _ in range(16):
        mid = (lo + hi) / 2
        if accept_rate(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return hi


def full_interference_topology(N: int, ps=1.0, delta: float = 200.0) -> Topology:
    """Every pair within range of every receiver (density N - 1)."""
    ang = np.linspace(0, 2 * math.pi, N, endpoint=False)
    r = delta / 8
    c = delta / 2
    tx = c + np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    rx = c + (tx - c) * 0.5
    probs = np.broadcast_to(np.asarray(ps, dtype=float), (N,)).copy()
    return Topology(tx, rx, float(delta), probs, (delta, delta))


@dataclass
class MobilityState:
    targets: np.ndarray           # (N, 2) waypoint of each transmitter
    speed: float                  # m/s
    slot_duration: float = SLOT_DURATION

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be non-negative")


def mobility_init(t: Topology, speed: float, slot_duration: float = SLOT_DURATION,
                  rng=None) -> MobilityState:
    rng = np.random.default_rng(rng)
    w, h = t.area
    targets = np.column_stack([rng.uniform(0, w, t.N), rng.uniform(0, h, t.N)])
    return MobilityState(targets, speed, slot_duration)


def _reflect(x, hi):
    # fold coordinates back into [0, hi]
    period = 2 * hi
    x = np.mod(x, period)
    return np.where(x > hi, period - x, x)


def step_mobility(t: Topology, m: MobilityState, slots: int, rng=None,
                  channel=None) -> Topology:
    """Random-waypoint move of every transmitter; receivers follow rigidly.

    Receivers keep their offset to their transmitter and are reflected into
    the area, which can only shorten the pair distance. Density is not
    re-checked, so it may exceed its generation-time bound. ``m.targets`` is
    updated in place as waypoints are reached.
    """
    rng = np.random.default_rng(rng)
    w, h = t.area
    budget = np.full(t.N, m.speed * m.slot_duration * slots)
    pos = t.tx.astype(float).copy()
    offsets = t.rx - t.tx
    while np.any(budget > 1e-12):
        vec = m.targets - pos
        dist = np.linalg.norm(vec, axis=1)
        reach = (dist <= budget) & (budget > 1e-12)
        moving = (budget > 1e-12) & ~reach
        pos[reach] = m.targets[reach]
        budget[reach] -= dist[reach]
        scale = np.where(moving, budget / np.where(dist > 0, dist, 1), 0)
        pos += vec * scale[:, None]
        budget[moving] = 0
        if reach.any():
            k = int(reach.sum())
            m.targets[reach] = np.column_stack([rng.uniform(0, w, k), rng.uniform(0, h, k)])
    pos = np.column_stack([_reflect(pos[:, 0], w), _reflect(pos[:, 1], h)])
    rx = np.column_stack([_reflect(pos[:, 0] + offsets[:, 0], w),
                          _reflect(pos[:, 1] + offsets[:, 1], h)])
    probs = t.success_probs
    if channel is not None:
        probs = channel.probs(np.linalg.norm(pos - rx, axis=1))
    return replace(t, tx=pos, rx=rx, success_probs=probs)
