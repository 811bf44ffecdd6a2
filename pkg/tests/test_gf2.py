"""GF(2) elimination checked against brute-force span enumeration."""

from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from dfsft.gf2 import XorBasis, rank, solve


def brute_span(rows):
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return span


def brute_rank(rows):
    return len(brute_span(rows)).bit_length() - 1


rows_strategy = st.lists(st.integers(0, (1 << 10) - 1), min_size=0, max_size=8)


@settings(max_examples=300, deadline=None)
@given(rows_strategy)
def test_rank_matches_span_size(rows):
    assert rank(rows) == brute_rank(rows)


@settings(max_examples=300, deadline=None)
@given(rows_strategy, st.integers(0, (1 << 10) - 1))
def test_contains_matches_span(rows, vec):
    basis = XorBasis()
    for r in rows:
        basis.insert(r)
    assert basis.contains(vec) == (vec in brute_span(rows))


@settings(max_examples=300, deadline=None)
@given(rows_strategy, st.integers(0, (1 << 10) - 1))
def test_solve_returns_valid_combination(rows, rhs):
    combo = solve(rows, rhs)
    if rhs in brute_span(rows):
        assert combo is not None
        acc = 0
        for i, r in enumerate(rows):
            if combo >> i & 1:
                acc ^= r
        assert acc == rhs
    else:
        assert combo is None


def test_dependent_insert_reports_combination():
    basis = XorBasis()
    rows = [0b1100, 0b0110, 0b0011]
    for r in rows:
        assert basis.insert(r)[0]
    independent, combo = basis.insert(0b1111)
    assert not independent
    acc = 0
    for i, r in enumerate(rows):
        if combo >> i & 1:
            acc ^= r
    assert acc == 0b1111


def test_reduce_residual_identity():
    basis = XorBasis()
    rows = [0b1011, 0b0110]
    for r in rows:
        basis.insert(r)
    for vec in range(16):
        residual, combo = basis.reduce(vec)
        acc = residual
        for i, r in enumerate(rows):
            if combo >> i & 1:
                acc ^= r
        assert acc == vec


def test_exhaustive_three_bit_pairs():
    for a, b in itertools.product(range(8), repeat=2):
        assert rank([a, b]) == brute_rank([a, b])
