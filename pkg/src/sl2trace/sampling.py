"""Seeded random generators shared by the selftest suites and the tests.

All sampling flows through a caller-supplied random.Random so that every
empirical check is reproducible from its seed.
"""

from __future__ import annotations

from random import Random

from . import sl2
from .sl2 import Mat2C, inverse, is_plus_minus_identity, mul, shares_fixed_point
from .words import FreeWord

random_sl2 = sl2.random_sl2


def conjugate(u: Mat2C, g: Mat2C) -> Mat2C:
    return mul(mul(u, g), inverse(u))


def random_word(rng: Random, n: int, max_len: int) -> FreeWord:
    """A random word: up to max_len letters (before free reduction)."""
    length = rng.randint(1, max_len)
    return FreeWord(
        tuple((rng.randint(1, n), rng.choice((1, -1))) for _ in range(length))
    )


def random_nonempty_word(rng: Random, n: int, max_len: int) -> FreeWord:
    while True:
        w = random_word(rng, n, max_len)
        if not w.is_empty():
            return w


def random_no_shared_pair(rng: Random) -> tuple[Mat2C, Mat2C]:
    """A random pair without a common fixed point (and neither +-I)."""
    while True:
        g1, g2 = random_sl2(rng), random_sl2(rng)
        if is_plus_minus_identity(g1) or is_plus_minus_identity(g2):
            continue
        if not shares_fixed_point(g1, g2):
            return g1, g2


def random_parabolic_pair(rng: Random) -> tuple[Mat2C, Mat2C]:
    """A conjugated copy of (eps1*(1,1;0,1), eps2*(1,0;lam,1)), lam != 0."""
    lam = complex(rng.uniform(0.3, 3.0), rng.uniform(-1.0, 1.0))
    eps1 = rng.choice((1, -1))
    eps2 = rng.choice((1, -1))
    base1 = Mat2C(eps1, eps1, 0, eps1)
    base2 = Mat2C(eps2, 0, eps2 * lam, eps2)
    u = random_sl2(rng)
    return conjugate(u, base1), conjugate(u, base2)
