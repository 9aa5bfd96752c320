from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locomp.counting import (
    count_brute,
    count_series,
    expected_occurrences,
    mean_variance_profile,
    occurrence_distribution,
    recurrent_free_series,
    transfer_entry,
    transfer_series,
)
from locomp.digraph import DigraphError, build_digraph, enumerate_structures
from locomp.parts import Alphabet, MultisetColor, NColor, Ordinary, Part
from locomp.rules import Alternating, AvoidPatterns, CarlitzDistance, Free

import oracles

CARLITZ = [1, 1, 1, 3, 4, 7, 14, 23, 39, 71, 124, 214, 378, 661, 1152]
CARLITZ2 = [1, 1, 1, 3, 3, 5, 11, 15, 23, 37, 67, 101, 165, 265, 419]
ALTERNATING = [1, 0, 1, 3, 4, 7, 12, 19, 29, 48, 75, 118, 186, 293, 460]
NCOLOR = [1, 1, 3, 8, 21, 55, 144, 377, 987, 2584, 6765]
MULTISET2 = [1, 2, 7, 24, 82, 280, 956, 3264, 11144, 38048]
AVOID_BB = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987]

BB = (Part(1, 1), Part(1, 1))


@pytest.mark.parametrize("spec, rule, m, expected", [
    (Ordinary(), Free(), 1, [1] + [2 ** (n - 1) for n in range(1, 15)]),
    (Ordinary(), CarlitzDistance(1), 1, CARLITZ),
    (Ordinary(), CarlitzDistance(1), 2, CARLITZ),
    (Ordinary(), CarlitzDistance(2), 2, CARLITZ2),
    (Ordinary(), Alternating(), 2, ALTERNATING),
    (NColor(), Free(), 1, NCOLOR),
    (MultisetColor(2), Free(), 1, MULTISET2),
    (Alphabet(2), AvoidPatterns([BB]), 1, AVOID_BB),
])
def test_count_series_frozen(spec, rule, m, expected):
    B = len(expected) - 1
    D = build_digraph(spec, rule, m, max(B, m))
    assert list(count_series(D, B)) == expected


def test_frozen_values_match_plain_recursion():
    assert [sum(1 for a in oracles.compositions(n) if oracles.carlitz_ok(a))
            for n in range(12)] == CARLITZ[:12]
    assert [sum(1 for a in oracles.compositions(n) if oracles.alternating_ok(a))
            for n in range(12)] == ALTERNATING[:12]


def test_count_brute_agrees():
    D = build_digraph(Ordinary(), CarlitzDistance(2), 2, 12)
    assert [count_brute(D, n) for n in range(13)] == CARLITZ2[:13]


def test_budget_exceeded():
    D = build_digraph(Ordinary(), Free(), 1, 5)
    with pytest.raises(DigraphError):
        count_series(D, 6)


def test_transfer_series_matches_walk_count():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 1, 10)
    fr = transfer_series(D, 10)
    rest = recurrent_free_series(D, 10)
    total = [fr[2 * n] + rest[n] for n in range(11)]
    assert total == CARLITZ[:11]
    assert all(fr[e] == 0 for e in range(1, 21, 2))


def test_transfer_entry():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 1, 4)
    # recurrent vertices ordered 1, 2, 3, 4
    assert transfer_entry(D, 0, 1) == 3
    assert transfer_entry(D, 0, 0) is None
    with pytest.raises(IndexError):
        transfer_entry(D, 0, 9)


def test_occurrence_distribution_small():
    D = build_digraph(Ordinary(), Free(), 1, 3)
    d = occurrence_distribution(D, Part(1), 3)
    # 3, 12, 21, 111
    assert d.as_dict() == {0: Fraction(1, 4), 1: Fraction(1, 2), 3: Fraction(1, 4)}


def test_occurrence_cap_bucket():
    D = build_digraph(Ordinary(), Free(), 1, 6)
    d = occurrence_distribution(D, Part(1), 6, cap=2)
    assert d.capped_at == 2
    full = occurrence_distribution(D, Part(1), 6)
    assert d[2] == sum(p for k, p in full.as_dict().items() if k >= 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 9), st.integers(1, 4))
def test_occurrences_match_enumeration(n, size):
    D = build_digraph(Ordinary(), CarlitzDistance(1), 1, 9)
    structs = enumerate_structures(D, n)
    if not structs:
        return
    target = Part(size)
    hits = [sum(1 for p in a if p == target) for a in structs]
    dist = occurrence_distribution(D, target, n)
    for j in set(hits):
        assert dist[j] == Fraction(hits.count(j), len(structs))
    assert expected_occurrences(D, target, n) == Fraction(sum(hits), len(structs))


def test_lumped_target_is_pinned():
    # every color of a given size counts separately
    D = build_digraph(NColor(), Free(), 1, 6)
    structs = enumerate_structures(D, 5)
    target = Part(2, 1)
    mean = Fraction(sum(a.count(target) for a in structs), len(structs))
    assert expected_occurrences(D, target, 5) == mean


def test_mean_variance_profile():
    D = build_digraph(Ordinary(), Free(), 1, 8)
    prof = mean_variance_profile(D, Part(1), 8)
    for n, mean, var in prof[1:]:
        structs = enumerate_structures(D, n)
        xs = [a.count(Part(1)) for a in structs]
        mu = Fraction(sum(xs), len(xs))
        assert mean == mu
        assert var == Fraction(sum(x * x for x in xs), len(xs)) - mu * mu
