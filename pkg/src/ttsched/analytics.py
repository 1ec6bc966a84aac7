"""Closed-form timely throughput of the scheduling schemes.

All ``ps`` arguments accept either one success probability shared by every
pair or a sequence with one value per pair.
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import schemes

NEG_INF = float("-inf")

Probs = Union[float, Sequence[float], np.ndarray]


class CaseViolation(ValueError):
    pass


def _check_p(p: float) -> None:
    if not 0 < p <= 1:
        raise ValueError(f"success probability must lie in (0, 1], got {p}")


def _as_ps(ps: Probs, N: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(ps, dtype=float))
    if arr.size == 1:
        arr = np.full(N, arr[0])
    if arr.size != N:
        raise ValueError(f"expected {N} success probabilities, got {arr.size}")
    if np.any(arr <= 0) or np.any(arr > 1):
        raise ValueError("success probabilities must lie in (0, 1]")
    return arr


def throughput_case1(L: int, T: int, p: float) -> float:
    """Timely throughput with one collision-free slot per period, L >= T."""
    if L < T:
        raise CaseViolation(f"case 1 needs L >= T, got L={L}, T={T}")
    _check_p(p)
    return T * p / L


def throughput_case2(L: int, T: int, p: float) -> float:
    """Timely throughput with one collision-free slot per period, L < T."""
    if L >= T:
        raise CaseViolation(f"case 2 needs L < T, got L={L}, T={T}")
    _check_p(p)
    alpha = T % L
    beta = L - alpha
    return (alpha * (1 - (1 - p) ** -(-T // L)) + beta * (1 - (1 - p) ** (T // L))) / L


def throughput(L: int, T: int, p: float) -> float:
    """Case 1 or case 2 according to the period/frame split."""
    return throughput_case1(L, T, p) if L >= T else throughput_case2(L, T, p)


def _period_average(L: int, T: int, ps: Probs, N: int) -> float:
    return float(np.mean([throughput(L, T, p) for p in _as_ps(ps, N)]))


def tdma_average(N: int, T: int, ps: Probs) -> float:
    """Exact average timely throughput of TDMA (period N)."""
    return _period_average(N, T, ps, N)


def aloha_pair_lb(D: int, T: int, p: float, delta: float) -> float:
    if D < 1:
        raise ValueError("D must be positive")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    _check_p(p)
    return 1 - (1 - delta * (1 - delta) ** D * p) ** T


def aloha_average_lb(D: int, N: int, T: int, ps: Probs) -> float:
    delta = schemes.aloha_probability(D).delta
    return float(np.mean([aloha_pair_lb(D, T, p, delta) for p in _as_ps(ps, N)]))


def gf_average_lb(D: int, N: int, T: int, ps: Probs) -> float:
    q, _ = schemes.gf_params(D, N)
    return _period_average(q * q, T, ps, N)


def combination_average_lb(N: int, T: int, ps: Probs) -> float:
    return _period_average(schemes.combination_min_length(N), T, ps, N)


def scheme_value(scheme: str, D: int, N: int, T: int, ps: Probs) -> float:
    """Exact value for TDMA, lower bound for the other schemes."""
    if scheme == schemes.TDMA:
        return tdma_average(N, T, ps)
    if scheme == schemes.GF:
        return gf_average_lb(D, N, T, ps)
    if scheme == schemes.COMBINATION:
        return combination_average_lb(N, T, ps)
    if scheme == schemes.ALOHA:
        return aloha_average_lb(D, N, T, ps)
    raise ValueError(f"unknown scheme {scheme!r}")


def _largest_true(pred) -> float:
    # pred is monotone: true on 1..D*, false afterwards
    if not pred(1):
        return NEG_INF
    lo, hi = 1, 2
    while pred(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def critical_density(N: int, T: int, ps: Probs, scheme: str = schemes.ALOHA) -> float:
    """Largest D at which the scheme's lower bound is at least the TDMA value.

    ``scheme`` is ``"aloha"`` or ``"gf"``. Returns ``-inf`` when no D >= 1
    qualifies. For GF the search range is capped where q(D, N) stops
    changing (D >= q(N) - 1), since the bound is constant beyond it.
    """
    tdma = tdma_average(N, T, ps)
    tol = 1e-12
    if scheme == schemes.ALOHA:
        return _largest_true(lambda D: aloha_average_lb(D, N, T, ps) >= tdma - tol)
    if scheme == schemes.GF:
        cap, _ = schemes.gf_params(10**9, N)
        if gf_average_lb(cap, N, T, ps) >= tdma - tol:
            return math.inf
        return _largest_true(lambda D: gf_average_lb(D, N, T, ps) >= tdma - tol)
    raise ValueError(f"critical density is defined for aloha and gf, not {scheme!r}")


def gf_period_critical_density(N: int) -> float:
    """Largest D for which the GF period q(D, N)**2 is shorter than N."""
    def shorter(D):
        q, _ = schemes.gf_params(D, N)
        return q * q < N

    cap, _ = schemes.gf_params(10**9, N)
    if cap * cap < N:
        return math.inf
    return _largest_true(shorter)


def collision_free_profile(L: int, T: int, offset: int) -> tuple:
    """Collision-free slots per frame over one super period.

    A collision-free slot sits at ``offset`` (1..L) of every period; the
    super period spans T*L slots, i.e. L frames of T slots.
    """
    if L < 1 or T < 1:
        raise ValueError("L and T must be positive")
    if not 1 <= offset <= L:
        raise ValueError(f"offset must lie in 1..{L}")
    counts = [0] * L
    for slot in range(offset, T * L + 1, L):
        counts[(slot - 1) // T] += 1
    return tuple(counts)


def expected_deliveries(profile: Sequence[int], p: float) -> float:
    """Expected packets delivered when frame k holds profile[k] chances."""
    _check_p(p)
    return float(sum(1 - (1 - p) ** c for c in profile))


def profile_throughput(profile: Sequence[int], p: float) -> float:
    return expected_deliveries(profile, p) / len(profile)


@dataclass
class AnalyticsRow:
    scheme: str
    D: int
    N: int
    T: int
    p_summary: str
    value: float
    kind: str


ANALYTICS_FIELDS = ("scheme", "D", "N", "T", "p_summary", "value", "kind")


def p_summary(ps: Probs) -> str:
    arr = np.atleast_1d(np.asarray(ps, dtype=float))
    if np.all(arr == arr[0]):
        return f"{arr[0]:g}"
    return f"mean={arr.mean():.6g}"


def analytics_row(scheme: str, D: int, N: int, T: int, ps: Probs) -> AnalyticsRow:
    kind = "exact" if scheme == schemes.TDMA else "lower_bound"
    return AnalyticsRow(scheme, D, N, T, p_summary(ps), scheme_value(scheme, D, N, T, ps), kind)


def rows_to_csv(rows: Sequence[AnalyticsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ANALYTICS_FIELDS)
    for r in rows:
        w.writerow([r.scheme, r.D, r.N, r.T, r.p_summary, repr(r.value), r.kind])
    return buf.getvalue()
