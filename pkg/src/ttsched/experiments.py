"""Parameter grids for the simulation studies."""

from dataclasses import replace
from typing import Iterable, Optional, Sequence

from . import schemes
from .simulator import (POISSON, GridPoint, Mobility, SimConfig, TopologyParams)
from .topology import PhysicalChannel

ALOHA, TDMA, GF, COMB = schemes.ALOHA, schemes.TDMA, schemes.GF, schemes.COMBINATION
BASIC = (ALOHA, TDMA, GF)

PRESETS = ("effect-d", "effect-p", "effect-t", "d1-compare", "robustness-n",
           "robustness-d", "robustness-nd", "poisson", "feedback-gain", "practical-manet")


def _point(experiment, scheme, N, D, T, p, horizon=None, topo_D=None, **kw) -> GridPoint:
    topo = TopologyParams.for_density(N, D if topo_D is None else topo_D, p)
    cfg = SimConfig(scheme, N, D, T, horizon=horizon, **kw)
    return GridPoint(experiment, cfg, topo, f"{p:g}")


def effect_d(Ts: Sequence[int] = (30, 70), Ds: Iterable[int] = range(1, 30, 2),
             N: int = 50, p: float = 0.8, horizon=None):
    return [_point("effect-d", s, N, D, T, p, horizon)
            for T in Ts for D in Ds for s in BASIC]


def effect_p(Ds: Sequence[int] = (3, 30), ps=None, N: int = 50, T: int = 30, horizon=None):
    ps = ps or [round(0.1 * i, 1) for i in range(1, 11)]
    return [_point("effect-p", s, N, D, T, p, horizon)
            for D in Ds for p in ps for s in BASIC]


def effect_t(Ds: Sequence[int] = (1, 10), Ts=None, N: int = 20, p: float = 0.8, horizon=None):
    Ts = Ts or list(range(10, 201, 10))
    return [_point("effect-t", s, N, D, T, p, horizon)
            for D in Ds for T in Ts for s in BASIC]


def d1_compare(Ns=None, Ts=None, p: float = 0.8, horizon=None):
    Ns = Ns or list(range(5, 51, 5))
    Ts = Ts or list(range(2, 21, 2))
    pts = [_point("d1-compare-T10", s, N, 1, 10, p, horizon)
           for N in Ns for s in (ALOHA, TDMA, GF, COMB)]
    pts += [_point("d1-compare-N10", s, 10, 1, T, p, horizon)
            for T in Ts for s in (ALOHA, TDMA, GF, COMB)]
    return pts


def robustness_n(Ns=range(50, 76, 5), N_design: int = 50, D: int = 10, T: int = 50,
                 p: float = 0.8, horizon=None):
    return [_point("robustness-n", s, N, D, T, p, horizon, N_design=N_design)
            for N in Ns for s in BASIC]


def robustness_d(Ds=range(10, 16), D_design: int = 10, N: int = 50, T: int = 50,
                 p: float = 0.8, horizon=None):
    return [_point("robustness-d", s, N, D_design, T, p, horizon, topo_D=D)
            for D in Ds for s in BASIC]


def poisson(Ds=range(1, 20, 2), ps=(0.8, 0.1), N: int = 20, T: int = 10,
            mean: float = 10.0, horizon=None):
    return [_point("poisson", s, N, D, T, p, horizon, traffic=POISSON,
                   mean_interarrival=mean)
            for p in ps for D in Ds for s in BASIC]


def feedback_gain(Ds=range(1, 20, 2), N: int = 20, T: int = 30, p: float = 0.8, horizon=None):
    return [_point("feedback-gain", s, N, D, T, p, horizon, feedback=fb)
            for D in Ds for s in BASIC for fb in (False, True)]


def practical_manet(powers=(0.1, 0.2, 0.3, 0.4, 0.5), T: int = 30, N: int = 50,
                    horizon=None, speed: float = 30.0, step_frames: int = 10):
    """Physical channel with mobility; placement is free (density measured)."""
    scenarios = (("practical-manet-sparse", 2000.0, 4), ("practical-manet-dense", 500.0, 27))
    pts = []
    for name, side, D in scenarios:
        for P in powers:
            ch = PhysicalChannel(power=P)
            topo = TopologyParams(N, 200.0, None, side, side, (50.0, 150.0), ch)
            for s in BASIC:
                cfg = SimConfig(s, N, D, T, horizon=horizon, topology_params=topo,
                                mobility=Mobility(speed, 0.8e-3, step_frames))
                pts.append(GridPoint(name, cfg, topo, f"P={P:g}W"))
    return pts


def preset(name: str, T: Optional[int] = None, horizon: Optional[int] = None,
           powers: Optional[Sequence[float]] = None) -> list:
    if name == "effect-d":
        return effect_d(Ts=(T,) if T else (30, 70), horizon=horizon)
    if name == "effect-p":
        return effect_p(T=T or 30, horizon=horizon)
    if name == "effect-t":
        return effect_t(Ts=[T] if T else None, horizon=horizon)
    if name == "d1-compare":
        return d1_compare(horizon=horizon)
    if name == "robustness-n":
        return robustness_n(T=T or 50, horizon=horizon)
    if name == "robustness-d":
        return robustness_d(T=T or 50, horizon=horizon)
    if name == "poisson":
        return poisson(T=T or 10, horizon=horizon)
    if name == "feedback-gain":
        return feedback_gain(T=T or 30, horizon=horizon)
    if name == "practical-manet":
        return practical_manet(powers=powers or (0.1, 0.2, 0.3, 0.4, 0.5), T=T or 30,
                               horizon=horizon)
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def with_horizon(points: Sequence[GridPoint], horizon: int) -> list:
    return [replace(pt, config=replace(pt.config, horizon=horizon)) for pt in points]
