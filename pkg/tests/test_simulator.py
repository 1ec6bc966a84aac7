import math
from dataclasses import replace

import numpy as np
import pytest

from ttsched import analytics as an
from ttsched import schemes as sc
from ttsched import simulator as sim
from ttsched.topology import FixedChannel, full_interference_topology, generate_topology
from oracles import deterministic_deliveries


def within(res, value, k=3.0):
    return abs(res.average - value) <= k * res.stderr + 1e-12


def topo_with_density(N, D, p=1.0, seed=0):
    return sim.TopologyParams.for_density(N, D, p).generate(seed)


def test_timely_throughput():
    assert sim.timely_throughput(0, 7) == 0
    assert sim.timely_throughput(7, 7) == 1
    assert sim.timely_throughput(24, 50) == 0.48
    with pytest.raises(ValueError):
        sim.timely_throughput(1, 0)


def test_assign_sequences():
    space = sc.tdma_sequences(4)
    rng = np.random.default_rng(0)
    bits = sim.assign_sequences(space, 4, rng, shuffle=True)
    assert sorted(map(tuple, bits.astype(int))) == sorted(map(tuple, space.as_array().astype(int)))
    assert (sim.assign_sequences(space, 4, rng) == space.as_array()).all()
    extra = sim.assign_sequences(space, 5, rng)
    assert len({tuple(r) for r in extra}) == 4


def test_single_pair():
    t = full_interference_topology(1, 1.0)
    res = sim.run(sim.SimConfig("tdma", 1, 1, 1, horizon=50), t)
    assert res.average == 1 and math.isnan(res.stderr)


def test_config_validation():
    t = full_interference_topology(3)
    with pytest.raises(sim.ConfigMismatch):
        sim.run(sim.SimConfig("tdma", 4, 1, 3), t)
    with pytest.raises(ValueError):
        sim.SimConfig("csma", 3, 1, 3)
    with pytest.raises(ValueError):
        sim.SimConfig("tdma", 3, 1, 3, traffic="bursty")
    with pytest.raises(ValueError):
        sim.SimConfig("tdma", 3, 1, 3, topology_refresh=5)
    assert sim.SimConfig("tdma", 3, 1, 3, seed=7).seed == (7,)


@pytest.mark.parametrize("N,T,p,frames,reps", [(5, 3, 1.0, 10_000, 3),
                                                (3, 5, 0.5, 10_000, 10),
                                                (50, 30, 0.8, 10_000, 5)])
def test_tdma_converges_to_formula(N, T, p, frames, reps):
    t = topo_with_density(N, min(N - 1, 10), p) if N > 5 else full_interference_topology(N, p)
    res = sim.run(sim.SimConfig("tdma", N, 1, T, horizon=frames, replications=reps), t)
    assert within(res, an.tdma_average(N, T, p)), (res.average, res.stderr)


@pytest.mark.parametrize("scheme,D,N,T", [("tdma", 3, 8, 5), ("gf", 2, 9, 4), ("gf", 1, 6, 7),
                                          ("combination", 1, 10, 3), ("gf", 3, 12, 20)])
@pytest.mark.parametrize("feedback", [False, True])
def test_deterministic_runs_match_slot_oracle(scheme, D, N, T, feedback):
    t = topo_with_density(N, D, 1.0, seed=N)
    cfg = sim.SimConfig(scheme, N, D, T, horizon=37, feedback=feedback, assignment="ordered")
    res = sim.run(cfg, t)
    bits = sc.sequences(scheme, D, N).as_array().astype(int).tolist()
    want = deterministic_deliveries(bits, t.interference_matrix().tolist(), T, 37, feedback)
    assert res.delivered == sum(want)
    assert np.allclose(res.per_pair_throughput, np.array(want) / 37)


def test_aloha_single_interferer_matches_bound():
    t = full_interference_topology(2, 1.0)
    res = sim.run(sim.SimConfig("aloha", 2, 1, 1, horizon=20_000, replications=10), t)
    assert within(res, 0.25)


def test_aloha_worst_case_topology_matches_bound():
    t = full_interference_topology(3, 0.5)
    res = sim.run(sim.SimConfig("aloha", 3, 2, 2, horizon=20_000, replications=10), t)
    assert within(res, an.aloha_average_lb(2, 3, 2, 0.5))


@pytest.mark.parametrize("scheme", ["aloha", "gf"])
def test_lower_bound_dominance(scheme):
    t = topo_with_density(50, 3, 0.8, seed=11)
    assert t.max_interferer_count() <= 3
    res = sim.run(sim.SimConfig(scheme, 50, 3, 30, replications=10, seed=2), t)
    lb = an.scheme_value(scheme, 3, 50, 30, 0.8)
    assert res.average >= lb - 3 * res.stderr


def test_combination_is_exact_at_p1():
    t = topo_with_density(10, 1, 1.0, seed=4)
    for T in (5, 6, 11):
        res = sim.run(sim.SimConfig("combination", 10, 1, T, replications=3), t)
        assert res.average == 1.0 and (res.per_pair_throughput == 1).all()


def test_determinism():
    t = topo_with_density(20, 5, 0.8)
    for scheme in sc.SCHEMES:
        cfg = sim.SimConfig(scheme, 20, 5, 10, replications=3, seed=(4, 2))
        a, b = sim.run(cfg, t), sim.run(cfg, t)
        assert (a.per_pair_throughput == b.per_pair_throughput).all()
        assert (a.average, a.delivered) == (b.average, b.delivered)
    c = sim.run(replace(cfg, seed=(4, 3)), t)
    assert c.average != a.average


@pytest.mark.parametrize("scheme", ["aloha", "gf", "tdma"])
def test_feedback_gain(scheme):
    t = topo_with_density(20, 10, 0.8, seed=1)
    cfg = sim.SimConfig(scheme, 20, 10, 30, horizon=2000, replications=10, seed=5)
    off = sim.run(cfg, t)
    on = sim.run(replace(cfg, feedback=True), t)
    gain = on.replication_averages - off.replication_averages
    err = gain.std(ddof=1) / math.sqrt(len(gain))
    if scheme == "tdma":
        assert np.all(gain == 0)
    else:
        assert gain.mean() >= -3 * err


@pytest.mark.parametrize("scheme", sc.SCHEMES)
def test_non_decreasing_in_T(scheme):
    t = topo_with_density(20, 1, 0.8, seed=3)
    prev = None
    for T in (5, 10, 20, 40):
        res = sim.run(sim.SimConfig(scheme, 20, 1, T, horizon=1200, replications=5, seed=1), t)
        if prev is not None:
            assert res.average >= prev.average - 3 * math.hypot(res.stderr, prev.stderr)
        prev = res


def test_poisson_traffic():
    t = full_interference_topology(3, 1.0)
    cfg = sim.SimConfig("tdma", 3, 2, 3, horizon=5000, traffic="poisson",
                        mean_interarrival=100.0, replications=2)
    res = sim.run(cfg, t)
    assert res.delivered <= res.generated
    assert 0.95 <= res.average <= 1.0
    again = sim.run(cfg, t)
    assert again.delivered == res.delivered


@pytest.mark.parametrize("scheme", ["aloha", "gf"])
def test_poisson_runs_for_random_schemes(scheme):
    t = topo_with_density(20, 5, 0.8)
    cfg = sim.SimConfig(scheme, 20, 5, 10, horizon=300, traffic="poisson",
                        mean_interarrival=10.0, replications=2, feedback=True)
    res = sim.run(cfg, t)
    assert 0 < res.average <= 1 and res.delivered <= res.generated


def test_auto_horizon_covers_super_periods():
    cfg = sim.SimConfig("gf", 50, 29, 30)
    h = sim._auto_horizon(cfg)
    assert h % 961 == 0 and h >= sim.MIN_FRAMES
    assert sim._auto_horizon(sim.SimConfig("tdma", 50, 1, 30)) % 5 == 0


def test_gf_assignment_order_matters_at_high_density():
    # the first 50 polynomials over GF(31) are constants and slope-1 lines,
    # which behave like a TDMA code; random selection does not
    t = topo_with_density(50, 29, 0.8, seed=0)
    base = sim.SimConfig("gf", 50, 29, 30, replications=4)
    ordered = sim.run(replace(base, assignment="ordered"), t)
    shuffled = sim.run(base, t)
    tdma = an.tdma_average(50, 30, 0.8)
    assert ordered.average > tdma
    assert shuffled.average < tdma


def test_topology_refresh_and_mobility():
    params = sim.TopologyParams.for_density(20, 5, 0.8)
    t = params.generate(1)
    cfg = sim.SimConfig("gf", 20, 5, 10, horizon=120, topology_refresh=50,
                        topology_params=params, mobility=sim.Mobility(30.0, 0.8e-3, 7),
                        replications=2)
    a, b = sim.run(cfg, t), sim.run(cfg, t)
    assert a.average == b.average and 0 < a.average <= 1


def test_robustness_with_more_pairs_than_designed():
    t = topo_with_density(60, 10, 0.8)
    res = sim.run(sim.SimConfig("tdma", 60, 10, 50, N_design=50, replications=2), t)
    # ten pairs share a slot with someone else's TDMA schedule
    assert res.average < an.tdma_average(50, 50, 0.8)


def test_run_dynamic():
    out = sim.run_dynamic("gf", 50, 10, 50, 0.8, big_frames=3, frames_per_big=10, seed=2)
    assert len(out) == 3
    assert all(50 <= r["N"] <= 75 and 10 <= r["D"] <= 15 for r in out)
    assert all(r["D_measured"] <= r["D"] for r in out)
    assert out == sim.run_dynamic("gf", 50, 10, 50, 0.8, big_frames=3, frames_per_big=10, seed=2)


def _grid():
    pts = []
    for s in ("tdma", "gf"):
        topo = sim.TopologyParams.for_density(10, 2, 0.8)
        pts.append(sim.GridPoint("unit", sim.SimConfig(s, 10, 2, 5, horizon=40), topo, "0.8"))
    return pts


def test_run_experiment_rows():
    rows = sim.run_experiment(_grid(), 3, 2, root_seed=1)
    assert [r.scheme for r in rows] == ["tdma", "gf"]
    assert all(r.topologies == 3 and r.runs == 2 and r.D_measured <= 2 for r in rows)
    text = sim.rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(sim.EXPERIMENT_FIELDS)
    assert text == sim.rows_to_csv(sim.run_experiment(_grid(), 3, 2, root_seed=1))
    assert len(sim.rows_to_jsonl(rows).splitlines()) == 2


def test_run_experiment_parallel_matches_serial():
    serial = sim.run_experiment(_grid(), 2, 2, root_seed=3)
    parallel = sim.run_experiment(_grid(), 2, 2, root_seed=3, jobs=2)
    assert sim.rows_to_csv(serial) == sim.rows_to_csv(parallel)


def test_channel_probabilities_drive_success():
    t = generate_topology(5, 200, None, 3000, 3000, channel=FixedChannel(0.25), seed=0)
    res = sim.run(sim.SimConfig("tdma", 5, 1, 5, horizon=4000, replications=5), t)
    assert within(res, 0.25)
