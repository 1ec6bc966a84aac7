"""Small finite fields GF(q), q = p**m <= 256.

Elements are plain integers in ``[0, q)``: digit ``j`` of the base-``p``
expansion is the coefficient of ``x**j`` in the polynomial representation.
Enumerating the field in integer order gives the element ordering used by
the sequence constructions (element number ``x`` is the integer ``x - 1``).
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

MAX_ORDER = 256


class NotPrimePower(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    q: int
    # monic irreducible polynomial, constant term first; () for prime fields
    reduction: tuple = ()

    def elements(self) -> range:
        return range(self.q)


def factor_prime_power(n: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``n == p**m``, or raise NotPrimePower."""
    if n < 2:
        raise NotPrimePower(f"{n} is not a prime power")
    p = next(d for d in range(2, n + 1) if n % d == 0)
    m = 0
    while n % p == 0:
        n //= p
        m += 1
    if n != 1:
        raise NotPrimePower(f"{p**m * n} has at least two distinct prime factors")
    return p, m


def is_prime_power(n: int) -> bool:
    try:
        factor_prime_power(n)
    except NotPrimePower:
        return False
    return True


def _poly_mod(a: list, b: Sequence[int], p: int) -> list:
    """Remainder of a modulo monic b over GF(p); coefficients constant first."""
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return [c % p for c in a[:db]]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility of a monic polynomial over GF(p).

    Tries every monic divisor of degree 1..deg/2, fine for the degrees that
    fit under MAX_ORDER.
    """
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not any(_poly_mod(poly, list(low) + [1], p)):
                return False
    return True


@lru_cache(maxsize=None)
def field_new(q: int) -> FieldSpec:
    """Build GF(q).

    For extension fields the reduction polynomial is the lexicographically
    smallest monic irreducible one, comparing coefficient tuples constant
    term first.
    """
    p, m = factor_prime_power(q)
    if q > MAX_ORDER:
        raise ValueError(f"field order {q} exceeds supported maximum {MAX_ORDER}")
    if m == 1:
        return FieldSpec(p, 1, q)
    for low in product(range(p), repeat=m):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return FieldSpec(p, m, q, poly)
    raise AssertionError("an irreducible polynomial of every degree exists")


def _digits(a: int, p: int, m: int) -> list:
    out = []
    for _ in range(m):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def add(a: int, b: int, f: FieldSpec) -> int:
    if f.m == 1:
        return (a + b) % f.p
    da, db = _digits(a, f.p, f.m), _digits(b, f.p, f.m)
    return _undigits([(x + y) % f.p for x, y in zip(da, db)], f.p)


def neg(a: int, f: FieldSpec) -> int:
    if f.m == 1:
        return (-a) % f.p
    return _undigits([(-x) % f.p for x in _digits(a, f.p, f.m)], f.p)


def sub(a: int, b: int, f: FieldSpec) -> int:
    return add(a, neg(b, f), f)


def mul(a: int, b: int, f: FieldSpec) -> int:
    if f.m == 1:
        return (a * b) % f.p
    da, db = _digits(a, f.p, f.m), _digits(b, f.p, f.m)
    prod = [0] * (2 * f.m - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] += x * y
    return _undigits(_poly_mod(prod, f.reduction, f.p), f.p)


def power(a: int, e: int, f: FieldSpec) -> int:
    result = 1
    while e:
        if e & 1:
            result = mul(result, a, f)
        a = mul(a, a, f)
        e >>= 1
    return result


def inv(a: int, f: FieldSpec) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    return power(a, f.q - 2, f)


def eval_poly(coeffs: Sequence[int], e: int, f: FieldSpec) -> int:
    """Evaluate ``sum(coeffs[j] * e**j)`` by Horner's rule."""
    acc = 0
    for c in reversed(coeffs):
        acc = add(mul(acc, e, f), c, f)
    return acc


@lru_cache(maxsize=None)
def tables(q: int) -> tuple:
    """Addition and multiplication tables of GF(q) as nested tuples."""
    f = field_new(q)
    addt = tuple(tuple(add(a, b, f) for b in range(q)) for a in range(q))
    mult = tuple(tuple(mul(a, b, f) for b in range(q)) for a in range(q))
    return addt, mult
