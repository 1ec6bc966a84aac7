"""Monte-Carlo engine for the slotted collision channel with hard deadlines.

Frame-synchronised traffic is simulated as a batch over frames (frames are
independent given the topology), looping only over the T slots of a frame.
Poisson traffic runs slot by slot, vectorised over pairs.
"""

import csv
import io
import json
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import schemes
from .topology import (FixedChannel, Topology, area_for_density, generate_topology,
                       mobility_init, step_mobility)

FRAME_SYNC = "frame"
POISSON = "poisson"
MIN_FRAMES = 200
BLOCK_FRAMES = 4096


class ConfigMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TopologyParams:
    """Everything needed to draw a fresh topology. ``D=None`` draws freely."""

    N: int
    delta: float
    D: Optional[int]
    width: float
    height: float
    d_range: tuple = (50.0, 150.0)
    channel: object = FixedChannel(1.0)

    def generate(self, seed) -> Topology:
        return generate_topology(self.N, self.delta, self.D, self.width, self.height,
                                 self.d_range, self.channel, seed)

    @classmethod
    def for_density(cls, N: int, D: int, p: float = 1.0, delta: float = 200.0,
                    d_range=(50.0, 150.0)) -> "TopologyParams":
        """Square area calibrated so the density bound D is nearly tight."""
        side = area_for_density(N, delta, D, tuple(d_range))
        return cls(N, delta, D, side, side, tuple(d_range), FixedChannel(p))


@dataclass(frozen=True)
class Mobility:
    speed: float
    slot_duration: float = 0.8e-3
    step_frames: int = 1


@dataclass(frozen=True)
class SimConfig:
    scheme: str
    N: int                               # live pairs, must match the topology
    D: int                               # density the scheme is designed for
    T: int
    horizon: Optional[int] = None        # frames; None picks whole super periods
    traffic: str = FRAME_SYNC
    mean_interarrival: Optional[float] = None   # slots, Poisson only; default T
    feedback: bool = False
    replications: int = 1
    seed: tuple = (0,)
    N_design: Optional[int] = None       # pairs the sequences were sized for
    topology_refresh: Optional[int] = None      # redraw topology every K frames
    topology_params: Optional[TopologyParams] = None
    mobility: Optional[Mobility] = None
    # "random": distinct schedules drawn uniformly from the space per
    # replication; "ordered": pair i gets the i-th schedule of the space
    assignment: str = "random"

    def __post_init__(self):
        if self.scheme not in schemes.SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.traffic not in (FRAME_SYNC, POISSON):
            raise ValueError(f"unknown traffic pattern {self.traffic!r}")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be at least one frame")
        if self.assignment not in ("random", "ordered"):
            raise ValueError(f"unknown assignment {self.assignment!r}")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.mean_interarrival is not None and self.mean_interarrival <= 0:
            raise ValueError("mean inter-arrival time must be positive")
        if self.topology_refresh is not None and self.topology_params is None:
            raise ValueError("topology refresh needs topology_params")
        if isinstance(self.seed, int):
            object.__setattr__(self, "seed", (self.seed,))

    @property
    def design_N(self) -> int:
        return self.N_design or self.N


@dataclass
class SimResult:
    per_pair_throughput: np.ndarray
    average: float
    stderr: float
    delivered: int
    generated: int
    replication_averages: np.ndarray = field(repr=False, default=None)


def timely_throughput(delivered: int, frames_or_packets: int) -> float:
    if frames_or_packets < 1:
        raise ValueError("denominator must be at least 1")
    return delivered / frames_or_packets


def assign_sequences(space: schemes.SequenceSet, live_pairs: int, rng,
                     shuffle: bool = False) -> np.ndarray:
    """Schedules for ``live_pairs`` pairs as a boolean (pairs, L) matrix.

    The first pairs receive distinct schedules, in space order or, with
    ``shuffle``, a uniformly random distinct selection. Once the space is
    exhausted, further pairs reuse uniformly random members of it.
    """
    if len(space) == 0:
        raise ValueError("empty sequence space")
    bits = space.as_array()
    n = min(live_pairs, len(space))
    first = rng.permutation(len(space))[:n] if shuffle else np.arange(n)
    extra = rng.integers(0, len(space), size=live_pairs - n)
    return np.concatenate([bits[first], bits[extra]])


def _auto_horizon(config: SimConfig) -> int:
    if config.scheme == schemes.ALOHA:
        return MIN_FRAMES
    L = schemes.sequences(config.scheme, config.D, config.design_N).period
    super_frames = L // math.gcd(L, config.T)
    return math.ceil(MIN_FRAMES / super_frames) * super_frames


def _hits(tx: np.ndarray, A_T: np.ndarray) -> np.ndarray:
    # tx (..., N) boolean; A_T[j, i] true when j interferes at receiver i
    return (tx.astype(np.float32) @ A_T) > 0


def _frame_block(bits, delta, A, probs, T, f0, F, feedback, rng):
    N = len(probs)
    A_T = A.T.astype(np.float32)
    delivered = np.zeros((F, N), dtype=bool)
    slot0 = np.arange(f0, f0 + F) * T
    for t in range(T):
        if bits is not None:
            tx = bits.T[(slot0 + t) % bits.shape[1]]
        else:
            tx = rng.random((F, N)) < delta
        ok = rng.random((F, N)) < probs
        if feedback:
            tx = tx & ~delivered
        delivered |= tx & ok & ~_hits(tx, A_T)
    return delivered.sum(axis=0)


class _TopologyTrack:
    """Supplies the topology in force for each frame of a replication."""

    def __init__(self, config: SimConfig, topology: Topology, rng):
        self.config = config
        self.topology = topology
        self.rng = rng
        self.A = topology.interference_matrix()
        self.mob = None
        if config.mobility is not None:
            self.mob = mobility_init(topology, config.mobility.speed,
                                     config.mobility.slot_duration, rng)

    def next_boundary(self, frame: int) -> Optional[int]:
        steps = [k for k in (self.config.topology_refresh,
                             self.config.mobility and self.config.mobility.step_frames) if k]
        if not steps:
            return None
        return min((frame // k + 1) * k for k in steps)

    def advance(self, frame: int) -> None:
        """Called at the start of ``frame`` (0-indexed) when it is a boundary."""
        cfg = self.config
        if cfg.topology_refresh and frame % cfg.topology_refresh == 0:
            seed = int(self.rng.integers(2**63))
            self.topology = cfg.topology_params.generate(seed)
            if self.mob is not None:
                self.mob = mobility_init(self.topology, cfg.mobility.speed,
                                         cfg.mobility.slot_duration, self.rng)
        elif self.mob is not None and frame % cfg.mobility.step_frames == 0:
            channel = cfg.topology_params.channel if cfg.topology_params else None
            self.topology = step_mobility(self.topology, self.mob,
                                          cfg.mobility.step_frames * cfg.T, self.rng,
                                          channel)
        else:
            return
        self.A = self.topology.interference_matrix()

    def is_boundary(self, frame: int) -> bool:
        cfg = self.config
        if frame == 0:
            return False
        if cfg.topology_refresh and frame % cfg.topology_refresh == 0:
            return True
        return bool(self.mob is not None and frame % cfg.mobility.step_frames == 0)


def _run_frame_sync(config, topology, bits, delta, horizon, rng):
    track = _TopologyTrack(config, topology, rng)
    delivered = np.zeros(config.N, dtype=np.int64)
    f = 0
    while f < horizon:
        if track.is_boundary(f):
            track.advance(f)
        stop = track.next_boundary(f) or horizon
        F = min(stop - f, BLOCK_FRAMES, horizon - f)
        delivered += _frame_block(bits, delta, track.A, track.topology.success_probs,
                                  config.T, f, F, config.feedback, rng)
        f += F
    return delivered, np.full(config.N, horizon, dtype=np.int64)


def _poisson_arrivals(N, n_slots, mean, rng):
    counts = np.zeros((n_slots, N), dtype=np.int64)
    for i in range(N):
        times = []
        total = 0.0
        while True:
            draw = rng.exponential(mean, size=max(16, int(2 * n_slots / mean) + 16))
            cum = total + np.cumsum(draw)
            times.append(cum[cum < n_slots - 0.5])
            total = cum[-1]
            if total >= n_slots - 0.5:
                break
        slots = np.rint(np.concatenate(times)).astype(np.int64)
        np.add.at(counts[:, i], slots, 1)
    return counts


def _run_poisson(config, topology, bits, delta, horizon, rng):
    T = config.T
    N = config.N
    n_slots = horizon * T
    mean = config.mean_interarrival or float(T)
    arrivals = _poisson_arrivals(N, n_slots, mean, rng)
    track = _TopologyTrack(config, topology, rng)
    A = track.A.astype(np.float32)
    deadline = np.full(N, -1, dtype=np.int64)
    done = np.zeros(N, dtype=bool)
    delivered = np.zeros(N, dtype=np.int64)
    for s in range(n_slots):
        if s % T == 0 and track.is_boundary(s // T):
            track.advance(s // T)
            A = track.A.astype(np.float32)
        new = arrivals[s] > 0
        deadline[new] = s + T - 1
        done[new] = False
        live = deadline >= s
        if bits is not None:
            tx = live & bits[:, s % bits.shape[1]]
        else:
            tx = live & (rng.random(N) < delta)
        ok = rng.random(N) < track.topology.success_probs
        if config.feedback:
            tx &= ~done
        hit = (A @ tx.astype(np.float32)) > 0
        succ = tx & ok & ~hit & ~done
        delivered += succ
        done |= succ
    return delivered, arrivals.sum(axis=0)


def run(config: SimConfig, topology: Topology) -> SimResult:
    """Simulate ``config.replications`` independent replications."""
    if topology.N != config.N:
        raise ConfigMismatch(f"config has N={config.N}, topology has {topology.N} pairs")
    if config.topology_params is not None and config.topology_params.N != config.N:
        raise ConfigMismatch("topology_params.N differs from config.N")
    horizon = config.horizon or _auto_horizon(config)
    space = None
    delta = None
    if config.scheme == schemes.ALOHA:
        delta = schemes.aloha_probability(config.D).delta
    else:
        space = schemes.sequence_space(config.scheme, config.D, config.design_N)
    engine = _run_frame_sync if config.traffic == FRAME_SYNC else _run_poisson

    per_rep = []
    tot_del = tot_gen = 0
    for r in range(config.replications):
        rng = np.random.default_rng([*config.seed, r])
        bits = None
        if space is not None:
            bits = assign_sequences(space, config.N, rng, config.assignment == "random")
        delivered, denom = engine(config, topology, bits, delta, horizon, rng)
        per_rep.append(np.divide(delivered, denom, out=np.zeros(config.N), where=denom > 0))
        tot_del += int(delivered.sum())
        tot_gen += int(denom.sum())
    per_rep = np.array(per_rep)
    rep_avg = per_rep.mean(axis=1)
    stderr = (float(rep_avg.std(ddof=1) / math.sqrt(len(rep_avg)))
              if len(rep_avg) > 1 else math.nan)
    per_pair = per_rep.mean(axis=0)
    return SimResult(per_pair, float(per_pair.mean()), stderr, tot_del, tot_gen, rep_avg)


def run_dynamic(scheme: str, N_design: int, D_design: int, T: int, p: float,
                big_frames: int, frames_per_big: int = 50, N_range=(50, 75),
                D_range=(10, 15), delta: float = 200.0, seed=0) -> list:
    """Topology, pair count and density redrawn at every big frame.

    Returns one dict per big frame with the pair count, density bound,
    measured density and average timely throughput within that big frame.
    """
    seed = (seed,) if isinstance(seed, int) else tuple(seed)
    rng = np.random.default_rng([*seed, 7])
    space = None if scheme == schemes.ALOHA else schemes.sequence_space(scheme, D_design, N_design)
    out = []
    for b in range(big_frames):
        n = int(rng.integers(N_range[0], N_range[1] + 1))
        d = int(rng.integers(D_range[0], D_range[1] + 1))
        params = TopologyParams.for_density(n, d, p, delta)
        topo = params.generate(int(rng.integers(2**63)))
        cfg = SimConfig(scheme, n, D_design, T, horizon=frames_per_big, N_design=N_design)
        bits = assign_sequences(space, n, rng, shuffle=True) if space is not None else None
        dlt = schemes.aloha_probability(D_design).delta if space is None else None
        delivered, _ = _run_frame_sync(cfg, topo, bits, dlt, frames_per_big, rng)
        out.append({"big_frame": b, "N": n, "D": d,
                    "D_measured": topo.max_interferer_count(),
                    "throughput": float((delivered / frames_per_big).mean())})
    return out


# --- experiment harness -------------------------------------------------------

EXPERIMENT_FIELDS = ("experiment", "scheme", "N", "D_design", "D_measured", "T",
                     "p_summary", "traffic", "feedback", "avg_throughput", "stderr",
                     "topologies", "runs")


@dataclass(frozen=True)
class GridPoint:
    experiment: str
    config: SimConfig
    topology: TopologyParams
    p_summary: str = ""


@dataclass
class ExperimentRow:
    experiment: str
    scheme: str
    N: int
    D_design: int
    D_measured: float
    T: int
    p_summary: str
    traffic: str
    feedback: bool
    avg_throughput: float
    stderr: float
    topologies: int
    runs: int


def _key(obj) -> int:
    return zlib.crc32(repr(obj).encode())


def run_point(point: GridPoint, topologies: int, runs: int, root_seed: int) -> ExperimentRow:
    topo_key = _key(point.topology)
    run_key = _key((point.topology, point.config.scheme, point.config.traffic))
    means, errs, dens = [], [], []
    for ti in range(topologies):
        topo = point.topology.generate([root_seed, topo_key, ti])
        cfg = replace(point.config, replications=runs, seed=(root_seed, run_key, ti))
        res = run(cfg, topo)
        means.append(res.average)
        errs.append(res.stderr)
        dens.append(topo.max_interferer_count())
    means = np.array(means)
    if topologies > 1:
        stderr = float(means.std(ddof=1) / math.sqrt(topologies))
    else:
        stderr = float(errs[0])
    cfg = point.config
    return ExperimentRow(point.experiment, cfg.scheme, cfg.N, cfg.D, float(np.mean(dens)),
                         cfg.T, point.p_summary, cfg.traffic, cfg.feedback,
                         float(means.mean()), stderr, topologies, runs)


def _run_point_star(args):
    return run_point(*args)


def run_experiment(grid: Sequence[GridPoint], topologies: int, runs_per_topology: int,
                   root_seed: int = 0, jobs: int = 1) -> list:
    """Evaluate every grid point; rows come back in grid order."""
    args = [(pt, topologies, runs_per_topology, root_seed) for pt in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_point_star, args))
    return [run_point(*a) for a in args]


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EXPERIMENT_FIELDS)
    for r in rows:
        d = asdict(r)
        w.writerow([repr(v) if isinstance(v, float) else v for v in (d[k] for k in EXPERIMENT_FIELDS)])
    return buf.getvalue()


def rows_to_jsonl(rows: Sequence[ExperimentRow]) -> str:
    return "".join(json.dumps({k: asdict(r)[k] for k in EXPERIMENT_FIELDS}) + "\n" for r in rows)
