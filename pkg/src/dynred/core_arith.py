"""Exact integer/rational helpers: valuations, prime support, S-units and a
bounded solver for the S-unit equation u + v = 1.

Rationals are plain :class:`fractions.Fraction` values. Prime sets are sorted
tuples of distinct primes.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

__all__ = [
    "FactorizationError",
    "UnitEquationSolution",
    "as_fraction",
    "factorize",
    "format_rational",
    "is_prime",
    "is_s_unit",
    "parse_rational",
    "prime_set",
    "prime_support",
    "primes_up_to",
    "solve_unit_equation",
    "valuation",
]

TRIAL_LIMIT = 10**6
# Deterministic Miller-Rabin with the first 13 prime bases is exact below this.
MR_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FactorizationError(ArithmeticError):
    """Raised when an integer cannot be factored with certified primality."""


class UnitEquationSolution(NamedTuple):
    u: Fraction
    v: Fraction


def as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, str):
        return parse_rational(q)
    return Fraction(q)


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"``; whitespace is ignored."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def format_rational(q) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=None)
def primes_up_to(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _miller_rabin(n: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test, exact for ``n < 3.3e24``.

    Larger inputs raise :class:`FactorizationError` unless trial division finds
    a factor.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < MR_LIMIT:
        return _miller_rabin(n)
    if not _miller_rabin(n):
        return False
    raise FactorizationError(f"cannot certify primality of {n}")


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    for c in itertools.count(1):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError("unreachable")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if n < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(n):
        # no factor below TRIAL_LIMIT, so anything under its square is prime
        out[n] = out.get(n, 0) + 1
        return
    g = _pollard_brent(n)
    _split(g, out)
    _split(n // g, out)


def factorize(n: int) -> dict[int, int]:
    """Factor ``|n|`` into ``{prime: exponent}``.

    Trial division up to 10**6, then certified primality / Pollard-Brent on
    the cofactor.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor zero")
    out: dict[int, int] = {}
    for p in primes_up_to(TRIAL_LIMIT):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        if n < TRIAL_LIMIT * TRIAL_LIMIT:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, out)
    return dict(sorted(out.items()))


def prime_set(primes: Iterable[int]) -> tuple[int, ...]:
    """Validate and normalize a collection of primes into a sorted tuple."""
    result = sorted({int(p) for p in primes})
    for p in result:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    return tuple(result)


def valuation(q, p: int) -> int:
    """The exponent of the prime ``p`` in the nonzero rational ``q``."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = abs(q.numerator), q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def prime_support(q) -> tuple[int, ...]:
    q = as_fraction(q)
    if q == 0:
        raise ValueError("prime support of zero")
    primes = set(factorize(q.numerator)) | set(factorize(q.denominator))
    return tuple(sorted(primes))


def _is_s_smooth(n: int, primes: tuple[int, ...]) -> bool:
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


def is_s_unit(q, primes: Iterable[int]) -> bool:
    q = as_fraction(q)
    if q == 0:
        return False
    primes = tuple(primes)
    return _is_s_smooth(q.numerator, primes) and _is_s_smooth(q.denominator, primes)


def solve_unit_equation(primes: Iterable[int], bound: int) -> list[UnitEquationSolution]:
    """All solutions of ``u + v = 1`` in S-units with ``u = ±prod p_i^e_i``,
    ``|e_i| <= bound``.

    Incomplete by design: solutions whose ``u`` needs a larger exponent are
    missed. Sorted by ``(numerator, denominator)`` of ``u``.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    primes = prime_set(primes)
    found = set()
    for exps in itertools.product(range(-bound, bound + 1), repeat=len(primes)):
        mag = Fraction(1)
        for p, e in zip(primes, exps):
            mag *= Fraction(p) ** e
        for u in (mag, -mag):
            v = 1 - u
            if is_s_unit(v, primes):
                found.add(u)
    return [
        UnitEquationSolution(u, 1 - u)
        for u in sorted(found, key=lambda f: (f.numerator, f.denominator))
    ]
