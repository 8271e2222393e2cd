"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own machinery: trial
division and a plain bytearray sieve are slow but unarguable, and give the
tests something to disagree with.
"""

from __future__ import annotations

import math

import pytest

import prckit as pk


def trial_is_prime(n: int) -> bool:
    """Complete trial division up to the square root."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def sieve_list(limit: int) -> list[int]:
    """Primes <= limit by a plain bytearray sieve."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi) by trial division (fine for narrow test ranges)."""
    return [n for n in range(lo, hi) if trial_is_prime(n)]


@pytest.fixture(scope="session")
def powfact3_chain():
    return pk.build_chain(pk.parse_exponent_spec("powfact:3"), 2, 3, "min", pk.EMPIRICAL)


@pytest.fixture(scope="session")
def factorial_chain():
    return pk.build_chain(pk.parse_exponent_spec("factorial"), 2, 6, "min", pk.RH_CMS)


@pytest.fixture(scope="session")
def factorial_digits(factorial_chain):
    return pk.prc_digits(factorial_chain, 1000)


@pytest.fixture(scope="session")
def mills_chain():
    return pk.build_chain(pk.parse_exponent_spec("const:3"), 2, 4, "min", pk.EMPIRICAL)
