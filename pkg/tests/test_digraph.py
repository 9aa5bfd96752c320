import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locomp.counting import count_series
from locomp.digraph import (
    EPS_F,
    EPS_S,
    DigraphError,
    EnumerationTooLarge,
    ExplicitDigraph,
    Vertex,
    build_digraph,
    check_regular,
    check_unique_walks,
    enumerate_structures,
    validate,
)
from locomp.parts import Alphabet, Explicit, MultisetColor, NColor, Ordinary, Part
from locomp.rules import Alternating, AvoidPatterns, CarlitzDistance, Free, RuleError

BB = (Part(1, 1), Part(1, 1))


def test_carlitz_small_digraph_passes():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 1, 3)
    rep = validate(D)
    assert rep.passed, rep.witnesses
    assert {str(v) for v in D.recurrent()} == {"R:1", "R:2", "R:3"}


def test_alternating_vertex_sets():
    D = build_digraph(Ordinary(), Alternating(), 2, 3)
    assert {str(v) for v in D.recurrent()} == {"R:21", "R:31", "R:32"}
    assert {str(v) for v in D.start()} == {"S:eps", "S:1", "S:2", "S:3"}
    assert {str(v) for v in D.finish()} == {"F:eps", "F:2", "F:3"}
    assert validate(D).passed


def test_single_recurrent_vertex_fails_c():
    D = build_digraph(Alphabet(1), Free(), 1, 1)
    rep = validate(D)
    assert rep.condition_a and rep.condition_b
    assert not rep.condition_c
    assert rep.witnesses["recurrent_count"] == 1


def test_removed_start_arc_fails_a():
    D = build_digraph(Ordinary(), Alternating(), 2, 3)
    E = ExplicitDigraph.from_digraph(D)
    s1 = Vertex("S", (Part(1),))
    broken = E.without_arcs([(EPS_S, s1)])
    rep = validate(broken)
    assert not rep.condition_a
    assert rep.condition_b and rep.condition_c


def test_start_finish_cycle_fails_c():
    s, f = Vertex("S", (Part(1),)), Vertex("F", (Part(2),))
    r1, r2 = Vertex("R", (Part(1),)), Vertex("R", (Part(2),))
    arcs = [(EPS_S, s), (EPS_S, r1), (s, f), (f, s), (f, EPS_F), (r1, r2), (r2, r1), (r2, f)]
    rep = validate(ExplicitDigraph(1, [s, f, r1, r2], arcs))
    assert not rep.condition_c
    assert "start_finish_cycle" in rep.witnesses


def test_ambiguous_digraph_detected():
    s1, r1, r2 = Vertex("S", (Part(1),)), Vertex("R", (Part(1),)), Vertex("R", (Part(2),))
    arcs = [(EPS_S, s1), (EPS_S, r1), (s1, r2), (r1, r2), (r2, r1), (r2, EPS_F), (r1, EPS_F)]
    E = ExplicitDigraph(1, [s1, r1, r2], arcs, budget=4)
    assert not check_unique_walks(E, 4)
    assert check_unique_walks(build_digraph(Ordinary(), CarlitzDistance(1), 1, 8), 8)
    assert check_unique_walks(build_digraph(Ordinary(), Alternating(), 2, 8), 8)


def test_regularity_flags():
    carlitz = check_regular(build_digraph(Ordinary(), CarlitzDistance(1), 1, 4), kmax=6)
    assert carlitz.cycle_gcd == 1 and carlitz.size_aperiodic and carlitz.certified
    words = check_regular(build_digraph(Alphabet(2), AvoidPatterns([BB]), 1, 4), kmax=6)
    assert words.cycle_gcd == 1
    assert not words.size_aperiodic


def test_window_too_wide_rejected():
    with pytest.raises(RuleError):
        build_digraph(Ordinary(), CarlitzDistance(3), 1, 5)
    with pytest.raises(RuleError):
        build_digraph(Ordinary(), Alternating(), 1, 5)


def test_budget_below_span_rejected():
    with pytest.raises(DigraphError):
        build_digraph(Ordinary(), Free(), 3, 2)


def test_enumeration_cap(monkeypatch):
    D = build_digraph(Ordinary(), Free(), 1, 12)
    with pytest.raises(EnumerationTooLarge):
        enumerate_structures(D, 12, cap=100)
    monkeypatch.setenv("LOCOMP_ENUM_CAP", "10")
    with pytest.raises(EnumerationTooLarge):
        enumerate_structures(D, 8)


def test_enumeration_order_is_deterministic():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 1, 5)
    got = [" ".join(map(str, a)) for a in enumerate_structures(D, 5)]
    assert got == ["5", "1 4", "2 3", "3 2", "4 1", "1 3 1", "2 1 2"]


def test_explicit_digraph_counts_like_rule_digraph():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 2, 8)
    E = ExplicitDigraph.from_digraph(D)
    assert list(count_series(E, 8)) == list(count_series(D, 8))


SPECS = st.sampled_from([Ordinary(), NColor(), MultisetColor(2), Alphabet(2),
                         Explicit((0, 1, 2, 1))])
RULES = st.sampled_from([Free(), CarlitzDistance(1), CarlitzDistance(2),
                         AvoidPatterns([(Part(1), Part(1))]),
                         AvoidPatterns([(Part(1), Part(2)), (Part(2, 1),)])])


@settings(max_examples=40, deadline=None)
@given(SPECS, RULES, st.integers(1, 3), st.integers(0, 7))
def test_walk_count_equals_enumeration(spec, rule, m, n):
    try:
        D = build_digraph(spec, rule, m, max(7, m))
    except RuleError:
        return
    structs = enumerate_structures(D, n)
    assert count_series(D, 7)[n] == len(structs)
    assert len(set(structs)) == len(structs)
    for a in structs:
        assert sum(p.size for p in a) == n
        assert rule.accepts(D.tokens(a))


@settings(max_examples=20, deadline=None)
@given(RULES, st.integers(1, 3))
def test_span_does_not_change_the_class(rule, m):
    # any admissible span gives the same structures
    try:
        D = build_digraph(Ordinary(), rule, m, 8)
        D3 = build_digraph(Ordinary(), rule, 3, 8)
    except RuleError:
        return
    assert list(count_series(D, 8)) == list(count_series(D3, 8))
