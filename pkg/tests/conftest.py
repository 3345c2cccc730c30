"""Shared generators for randomized tests."""

import random
from fractions import Fraction

from hahnsat.series import Series, make_exp


def random_exponent(rng: random.Random, dim: int, span: int = 3) -> tuple:
    return make_exp(
        [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(dim)],
        dim,
    )


def random_series(
    rng: random.Random,
    dim: int,
    max_terms: int = 4,
    span: int = 3,
    allow_zero: bool = True,
) -> Series:
    n = rng.randint(0 if allow_zero else 1, max_terms)
    terms = {}
    while True:
        for _ in range(n):
            exp = random_exponent(rng, dim, span)
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            if c:
                terms[exp] = c
        if terms or allow_zero:
            return Series(terms, dim)
        n = max(n, 1)
