"""Transmit schedules for TDMA, GF polynomial sequences, combination
sequences, and the ALOHA transmit probability."""

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from . import galois

TDMA = "tdma"
GF = "gf"
COMBINATION = "combination"
ALOHA = "aloha"
SEQUENCE_SCHEMES = (TDMA, GF, COMBINATION)
SCHEMES = SEQUENCE_SCHEMES + (ALOHA,)


class PeriodMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    """One period of a periodic 0/1 transmit sequence."""

    bits: tuple

    def __post_init__(self):
        if not self.bits:
            raise ValueError("schedule period must be at least 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("schedule entries must be 0 or 1")

    @property
    def period(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def __call__(self, t: int) -> int:
        """Bit at 1-indexed slot ``t`` of the periodic extension."""
        return self.bits[(t - 1) % len(self.bits)]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    @classmethod
    def from_string(cls, s: str) -> "Schedule":
        return cls(tuple(int(c) for c in s.strip()))


@dataclass(frozen=True)
class SequenceSet:
    schedules: tuple
    scheme: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        periods = {s.period for s in self.schedules}
        if len(periods) > 1:
            raise PeriodMismatch(f"schedules have differing periods {sorted(periods)}")

    def __len__(self) -> int:
        return len(self.schedules)

    def __iter__(self):
        return iter(self.schedules)

    def __getitem__(self, i):
        return self.schedules[i]

    @property
    def period(self) -> int:
        return self.schedules[0].period

    def as_array(self) -> np.ndarray:
        """Boolean matrix, one row per schedule."""
        return np.array([s.bits for s in self.schedules], dtype=bool)

    def to_text(self) -> str:
        return "".join(f"{s}\n" for s in self.schedules)

    @classmethod
    def from_text(cls, text: str, scheme: str = "custom") -> "SequenceSet":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        return cls(tuple(Schedule.from_string(r) for r in rows), scheme)


@dataclass(frozen=True)
class AlohaPolicy:
    delta: float

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError(f"transmit probability must lie in (0, 1], got {self.delta}")


def tdma_sequences(N: int) -> SequenceSet:
    if N < 1:
        raise ValueError("N must be positive")
    rows = tuple(Schedule(tuple(int(t == i) for t in range(N))) for i in range(N))
    return SequenceSet(rows, TDMA)


def gf_params(D: int, N: int) -> tuple[int, int]:
    """Smallest prime power q (and smallest k for it) with q - k*D >= 1 and
    q**(k+1) >= N."""
    if D < 1 or N < 1:
        raise ValueError("D and N must be positive")
    q = 1
    while True:
        q += 1
        if not galois.is_prime_power(q):
            continue
        k = 0
        while q ** (k + 1) < N:
            k += 1
        if q - k * D >= 1:
            return q, k


def _gf_schedule(index: int, q: int, k: int, f: galois.FieldSpec) -> Schedule:
    coeffs = []
    for _ in range(k + 1):
        index, d = divmod(index, q)
        coeffs.append(d)
    bits = [0] * (q * q)
    for x in range(q):
        y = galois.eval_poly(coeffs, x, f)
        bits[x * q + y] = 1
    return Schedule(tuple(bits))


def gf_sequences(D: int, N: int, full_space: bool = False) -> SequenceSet:
    """Polynomial sequences over GF(q(D, N)).

    Transmitter ``i`` (1-indexed) gets the polynomial whose coefficients are
    the base-q digits of ``i - 1``, constant term least significant. With
    ``full_space`` all ``q**(k+1)`` polynomials are returned.
    """
    q, k = gf_params(D, N)
    f = galois.field_new(q)
    count = q ** (k + 1) if full_space else N
    rows = tuple(_gf_schedule(i, q, k, f) for i in range(count))
    return SequenceSet(rows, GF, {"q": q, "k": k})


def combination_min_length(N: int) -> int:
    """Smallest L with C(L, ceil(L/2)) >= N, by bisection on 1..N."""
    if N < 1:
        raise ValueError("N must be positive")
    lo, hi = 1, N
    while lo < hi:
        mid = (lo + hi) // 2
        if comb(mid, -(-mid // 2)) >= N:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _same_weight_words(L: int, w: int, count: Optional[int] = None) -> Iterable[int]:
    # Gosper's hack: successive integers with the same popcount, ascending
    v = (1 << w) - 1
    limit = 1 << L
    n = 0
    while v < limit and (count is None or n < count):
        yield v
        n += 1
        if v == 0:
            return
        c = v & -v
        r = v + c
        v = (((r ^ v) >> 2) // c) | r


def combination_sequences(N: int, full_space: bool = False) -> SequenceSet:
    """The first N weight-ceil(L/2) binary words of length L in ascending
    lexicographic order, L = combination_min_length(N)."""
    L = combination_min_length(N)
    w = -(-L // 2)
    words = _same_weight_words(L, w, None if full_space else N)
    rows = tuple(Schedule(tuple(int(c) for c in format(v, f"0{L}b"))) for v in words)
    return SequenceSet(rows, COMBINATION, {"L": L})


def aloha_probability(D: int) -> AlohaPolicy:
    if D < 1:
        raise ValueError("D must be positive")
    return AlohaPolicy(1.0 / (D + 1))


def blocked(s: Schedule, others: Sequence[Schedule]) -> bool:
    """True when every 1-slot of ``s`` is also a 1-slot of some other schedule."""
    for o in others:
        if o.period != s.period:
            raise PeriodMismatch(f"period {o.period} differs from {s.period}")
    for t, bit in enumerate(s.bits):
        if bit and not any(o.bits[t] for o in others):
            return False
    return True


def sequence_space(scheme: str, D: int, N: int) -> SequenceSet:
    """Every schedule a scheme designed for (D, N) can hand out."""
    if scheme == TDMA:
        return tdma_sequences(N)
    if scheme == GF:
        return gf_sequences(D, N, full_space=True)
    if scheme == COMBINATION:
        return combination_sequences(N, full_space=True)
    raise ValueError(f"{scheme!r} is not a sequence scheme")


def sequences(scheme: str, D: int, N: int) -> SequenceSet:
    if scheme == TDMA:
        return tdma_sequences(N)
    if scheme == GF:
        return gf_sequences(D, N)
    if scheme == COMBINATION:
        return combination_sequences(N)
    raise ValueError(f"{scheme!r} is not a sequence scheme")
