from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confbetti import (
    RationalMatrix,
    UnusablePrimeError,
    rank,
    rank_modular,
    rank_profile_modular,
)
from confbetti.linalg import PRIMES


def _matrix(rows, cols, entries):
    return RationalMatrix(rows, cols, {k: Fraction(v) for k, v in entries.items()})


def test_rank_identity():
    m = _matrix(5, 5, {(i, i): 1 for i in range(5)})
    assert rank(m) == 5
    assert rank_modular(m, 7) == 5


def test_rank_zero_matrix():
    m = _matrix(4, 3, {})
    assert rank(m) == 0
    assert rank_modular(m, PRIMES[0]) == 0


def test_rank_with_fractions():
    m = _matrix(2, 2, {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 3),
                       (1, 0): Fraction(3, 2), (1, 1): 2})
    assert rank(m) == 2  # det = 1/2
    singular = _matrix(2, 2, {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 3),
                              (1, 0): Fraction(3, 2), (1, 1): 1})
    assert rank(singular) == 1  # second row = 3 * first row


def test_rank_dependent_rows():
    m = _matrix(3, 3, {(0, 0): 1, (0, 1): 2, (1, 0): 2, (1, 1): 4, (2, 2): 1})
    assert rank(m) == 2


def test_transpose_preserves_rank():
    rng = random.Random(11)
    for _ in range(10):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        entries = {
            (r, c): Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            for r in range(rows)
            for c in range(cols)
            if rng.random() < 0.4
        }
        entries = {k: v for k, v in entries.items() if v}
        m = RationalMatrix(rows, cols, entries)
        assert rank(m) == rank(m.transpose())


def test_row_and_column_scaling_invariance():
    rng = random.Random(5)
    entries = {
        (r, c): Fraction(rng.randint(-5, 5))
        for r in range(6)
        for c in range(6)
        if rng.random() < 0.5
    }
    entries = {k: v for k, v in entries.items() if v}
    m = RationalMatrix(6, 6, entries)
    scaled = RationalMatrix(
        6,
        6,
        {
            (r, c): v * Fraction(r + 1, 2) * Fraction(1, c + 1)
            for (r, c), v in entries.items()
        },
    )
    assert rank(m) == rank(scaled)


def test_permutation_invariance():
    rng = random.Random(13)
    entries = {
        (r, c): Fraction(rng.randint(-3, 3))
        for r in range(5)
        for c in range(7)
        if rng.random() < 0.5
    }
    entries = {k: v for k, v in entries.items() if v}
    m = RationalMatrix(5, 7, entries)
    rperm = list(range(5))
    cperm = list(range(7))
    rng.shuffle(rperm)
    rng.shuffle(cperm)
    permuted = RationalMatrix(
        5, 7, {(rperm[r], cperm[c]): v for (r, c), v in entries.items()}
    )
    assert rank(m) == rank(permuted)


def test_modular_matches_exact_on_random_products():
    rng = random.Random(23)
    for _ in range(8):
        rows, cols = rng.randint(2, 9), rng.randint(2, 9)
        entries = {
            (r, c): Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            for r in range(rows)
            for c in range(cols)
            if rng.random() < 0.6
        }
        entries = {k: v for k, v in entries.items() if v}
        m = RationalMatrix(rows, cols, entries)
        assert rank_modular(m, PRIMES[0]) == rank(m)


def test_rank_profile_prefix_consistency():
    rng = random.Random(31)
    entries = {
        (r, c): Fraction(rng.randint(-6, 6))
        for r in range(8)
        for c in range(10)
        if rng.random() < 0.5
    }
    entries = {k: v for k, v in entries.items() if v}
    m = RationalMatrix(8, 10, entries)
    profile = rank_profile_modular(m, PRIMES[0], 10)
    assert profile.prefix_ranks[0] == 0
    assert profile.prefix_ranks[-1] == profile.rank
    for k in range(1, 11):
        assert profile.prefix_ranks[k] == rank(m.column_prefix(k))
        assert 0 <= profile.prefix_ranks[k] - profile.prefix_ranks[k - 1] <= 1


def test_unusable_prime_raises():
    p = PRIMES[0]
    m = _matrix(1, 1, {(0, 0): Fraction(1, p)})
    with pytest.raises(UnusablePrimeError):
        rank_modular(m, p)


def test_matmul_and_rank_of_composition():
    a = _matrix(3, 2, {(0, 0): 1, (1, 1): 2, (2, 0): 3})
    b = _matrix(2, 4, {(0, 0): 1, (0, 3): -1, (1, 1): Fraction(1, 2)})
    ab = a.matmul(b)
    assert (ab.rows, ab.cols) == (3, 4)
    assert ab.entries[(0, 0)] == 1
    assert ab.entries[(1, 1)] == 1
    assert ab.entries[(2, 3)] == -3
    assert rank(ab) <= min(rank(a), rank(b))


def test_submatrix_and_column_prefix():
    m = _matrix(3, 4, {(0, 0): 1, (1, 2): 5, (2, 3): 7})
    sub = m.submatrix([0, 2], [0, 3])
    assert (sub.rows, sub.cols) == (2, 2)
    assert sub.entries == {(0, 0): Fraction(1), (1, 1): Fraction(7)}
    prefix = m.column_prefix(3)
    assert prefix.cols == 3
    assert (2, 3) not in prefix.entries


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rank_bounds_hypothesis(rows, cols, data):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if data.draw(st.booleans()):
                v = data.draw(st.integers(-5, 5))
                if v:
                    entries[(r, c)] = Fraction(v)
    m = RationalMatrix(rows, cols, entries)
    value = rank(m)
    assert 0 <= value <= min(rows, cols)
    assert value == rank(m.transpose())


def test_sympy_rank_agreement():
    sympy = pytest.importorskip("sympy")
    rng = random.Random(41)
    for _ in range(6):
        rows, cols = rng.randint(2, 8), rng.randint(2, 8)
        entries = {
            (r, c): Fraction(rng.randint(-7, 7), rng.randint(1, 3))
            for r in range(rows)
            for c in range(cols)
            if rng.random() < 0.55
        }
        entries = {k: v for k, v in entries.items() if v}
        m = RationalMatrix(rows, cols, entries)
        dense = sympy.zeros(rows, cols)
        for (r, c), v in entries.items():
            dense[r, c] = sympy.Rational(v.numerator, v.denominator)
        assert rank(m) == dense.rank()
