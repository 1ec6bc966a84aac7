import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ttsched import analytics as an
from ttsched import schemes as sc


def slot_oracle(L, T, offset, p):
    """Average success probability per frame, enumerated slot by slot over
    the super period of lcm(L, T) slots."""
    span = L * T // math.gcd(L, T)
    frames = span // T
    total = 0.0
    for f in range(frames):
        chances = sum(1 for s in range(f * T + 1, f * T + T + 1) if (s - offset) % L == 0)
        total += 1 - (1 - p) ** chances
    return total / frames


def test_case_examples():
    assert an.throughput_case1(4, 3, 1) == pytest.approx(0.75, abs=1e-12)
    assert an.throughput_case1(7, 7, 1) == 1
    assert an.throughput_case1(50, 30, 0.8) == pytest.approx(0.48, abs=1e-12)
    assert an.throughput_case2(3, 4, 1) == pytest.approx(1, abs=1e-12)
    assert an.throughput_case2(3, 4, 0.5) == pytest.approx(0.75 / 3 + 1 / 3, abs=1e-12)
    assert an.throughput_case2(1, 5, 0.3) == pytest.approx(1 - 0.7**5, abs=1e-12)
    with pytest.raises(an.CaseViolation):
        an.throughput_case1(3, 4, 0.5)
    with pytest.raises(an.CaseViolation):
        an.throughput_case2(4, 4, 0.5)
    with pytest.raises(ValueError):
        an.throughput(4, 4, 0.0)


def test_average_examples():
    assert an.tdma_average(50, 30, 0.8) == pytest.approx(0.48, abs=1e-12)
    assert an.tdma_average(1, 1, 1) == 1
    assert an.tdma_average(20, 30, [0.8] * 20) == pytest.approx(0.88, abs=1e-12)
    assert an.aloha_pair_lb(1, 1, 1, 0.5) == pytest.approx(0.25)
    assert an.aloha_pair_lb(1, 1, 1, 1.0) == 0
    assert an.aloha_pair_lb(3, 10, 0.8, 0.25) == pytest.approx(
        1 - (1 - 0.25 * 0.75**3 * 0.8) ** 10, abs=1e-15)
    assert an.aloha_average_lb(1, 1, 1, 1) == pytest.approx(0.25)
    assert an.aloha_average_lb(2, 3, 2, 0.5) == pytest.approx(
        1 - (1 - (1 / 3) * (2 / 3) ** 2 * 0.5) ** 2, abs=1e-15)
    assert an.gf_average_lb(1, 20, 30, 0.8) == pytest.approx(an.throughput_case2(9, 30, 0.8))
    assert an.gf_average_lb(5, 100, 30, 1) == pytest.approx(30 / 121)
    assert an.gf_average_lb(1, 1, 4, 1) == 1
    assert an.combination_average_lb(10, 5, 1) == 1
    assert an.combination_average_lb(10, 10, 0.8) == pytest.approx(0.96)
    assert an.combination_average_lb(3, 2, 0.5) == pytest.approx(1 / 3)


def test_heterogeneous_probabilities():
    ps = np.linspace(0.1, 1.0, 10)
    want = np.mean([an.throughput(10, 7, p) for p in ps])
    assert an.tdma_average(10, 7, ps) == pytest.approx(want)
    with pytest.raises(ValueError):
        an.tdma_average(10, 7, ps[:3])
    assert an.p_summary(ps).startswith("mean=")
    assert an.p_summary(0.8) == "0.8"


def test_profile_examples():
    assert an.collision_free_profile(3, 4, 1) in {(2, 1, 1), (1, 2, 1), (1, 1, 2)}
    prof = an.collision_free_profile(3, 4, 1)
    assert sorted(prof) == [1, 1, 2]
    for off in (1, 2):
        assert an.collision_free_profile(2, 4, off) == (2, 2)
    # T = 3 collision-free slots in one super period of 4 frames: three
    # frames get one chance and one frame gets none
    assert an.collision_free_profile(4, 3, 2) == (1, 1, 0, 1)
    assert sum(an.collision_free_profile(4, 3, 2)) == 3
    assert an.expected_deliveries((1, 1, 1), 1) == 3
    assert an.expected_deliveries((2, 1, 1), 0.5) == pytest.approx(1.75)


def test_closed_form_matches_enumeration():
    worst = 0.0
    for L in range(1, 13):
        for T in range(1, 13):
            for off in range(1, L + 1):
                prof = an.collision_free_profile(L, T, off)
                assert sum(prof) == T
                for p in (0.3, 0.7, 1.0):
                    f = an.throughput(L, T, p)
                    worst = max(worst, abs(f - an.profile_throughput(prof, p)),
                                abs(f - slot_oracle(L, T, off, p)))
    assert worst <= 1e-12


def test_case1_strictly_decreasing_in_L():
    for T in range(1, 201, 7):
        vals = [an.throughput_case1(L, T, Fraction(4, 5)) for L in range(T, 201)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        fl = [an.throughput_case1(L, T, 0.8) for L in range(T, 201)]
        assert all(a - b > 1e-9 for a, b in zip(fl, fl[1:]))


def test_case2_unit_at_p1():
    for T in range(2, 101):
        assert all(an.throughput_case2(L, T, 1) == 1 for L in range(1, T))


@pytest.mark.parametrize("p", [Fraction(k, 10) for k in range(1, 10)])
def test_case2_strictly_decreasing_in_L(p):
    for T in range(2, 101):
        vals = [an.throughput_case2(L, T, p) for L in range(1, T)]
        assert all(a > b for a, b in zip(vals, vals[1:])), T


def test_case_boundary():
    for T in range(1, 40):
        for p in (0.1, 0.5, 1.0):
            assert an.throughput_case1(T, T, p) == pytest.approx(p, abs=1e-15)
            if T > 1:
                # one step below the boundary every frame still holds >= 1 chance
                assert an.throughput_case2(T - 1, T, p) >= p


@pytest.mark.parametrize("T,p", [(1, 1.0), (10, 0.5), (30, 0.8), (100, 0.2)])
def test_aloha_lb_strictly_decreasing_in_D(T, p):
    vals = [an.aloha_average_lb(D, 50, T, p) for D in range(1, 101)]
    assert all(a - b > 1e-9 for a, b in zip(vals, vals[1:]))


def test_gf_lb_non_increasing_in_D():
    for N in (10, 50, 100):
        vals = [an.gf_average_lb(D, N, 30, 0.8) for D in range(1, 31)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_critical_density():
    assert an.critical_density(1, 1, 1) == -math.inf
    d = an.critical_density(50, 30, 0.8)
    assert math.isfinite(d) and d >= 1
    tdma = an.tdma_average(50, 30, 0.8)
    assert an.aloha_average_lb(d, 50, 30, 0.8) >= tdma
    assert an.aloha_average_lb(d + 1, 50, 30, 0.8) < tdma
    assert all(an.aloha_average_lb(D, 50, 30, 0.8) >= tdma for D in range(1, d + 1))
    assert an.gf_period_critical_density(100) == 4
    for T in (1, 10, 30, 81):
        assert an.critical_density(100, T, 1, "gf") == 4
    with pytest.raises(ValueError):
        an.critical_density(10, 10, 1, "tdma")


def test_critical_density_tie_counts_for_aloha(monkeypatch):
    # when the bound equals the TDMA value exactly, that D is included
    monkeypatch.setattr(an, "tdma_average", lambda N, T, ps: an.aloha_average_lb(3, N, T, ps))
    assert an.critical_density(20, 10, 0.5) == 3


def _h(counts, p):
    return an.expected_deliveries(counts, p)


def _profiles(total, length):
    if length == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _profiles(total - first, length - 1):
            yield (first, *rest)


@pytest.mark.parametrize("p", [0.3, 0.8])
def test_balancing_never_decreases_expected_deliveries(p):
    for total in range(0, 13):
        for length in range(1, 5):
            for prof in _profiles(total, length):
                base = _h(prof, p)
                assert base <= p * total + 1e-12
                for i in range(length):
                    for j in range(length):
                        if prof[i] > prof[j] + 1:
                            moved = list(prof)
                            moved[i] -= 1
                            moved[j] += 1
                            assert _h(moved, p) >= base - 1e-12


def _exact_throughput(bits, T, p):
    """Exact average timely throughput for schedules under full interference."""
    N, L = bits.shape
    free = bits & (bits.sum(axis=0) == 1)
    span = L * T // math.gcd(L, T)
    frames = span // T
    tot = 0.0
    for i in range(N):
        slots = np.flatnonzero(np.tile(free[i], span // L))
        counts = np.bincount(slots // T, minlength=frames)
        tot += an.expected_deliveries(counts, p) / frames
    return tot / N


@pytest.mark.parametrize("N", [2, 3, 4, 5, 7, 8, 9])
def test_tdma_dominates_gf_under_full_interference(N):
    rng = np.random.default_rng(N)
    space = sc.sequence_space(sc.GF, N - 1, N).as_array()
    for T in range(1, 21):
        tdma = an.tdma_average(N, T, 0.8)
        assert _exact_throughput(sc.tdma_sequences(N).as_array(), T, 0.8) == pytest.approx(tdma)
        for _ in range(5):
            pick = space[rng.choice(len(space), N, replace=False)]
            gf = _exact_throughput(pick, T, 0.8)
            assert tdma >= gf - 1e-12
            assert gf >= an.gf_average_lb(N - 1, N, T, 0.8) - 1e-12


def test_rows_to_csv():
    rows = [an.analytics_row(s, 1, 10, 10, 0.8) for s in sc.SCHEMES]
    text = an.rows_to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(an.ANALYTICS_FIELDS)
    assert lines[1].startswith("tdma,1,10,10,0.8,") and lines[1].endswith(",exact")
    assert all(ln.endswith(",lower_bound") for ln in lines[2:])


@given(st.integers(1, 60), st.integers(1, 60), st.floats(0.01, 1.0))
def test_throughput_bounded_by_p_and_one(L, T, p):
    v = an.throughput(L, T, p)
    assert 0 < v <= 1
    assert v <= min(1.0, p * T / L) + 1e-12
