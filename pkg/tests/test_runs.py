from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from locomp.counting import count_series
from locomp.digraph import build_digraph, enumerate_structures
from locomp.parts import MultisetColor, Ordinary, Part
from locomp.rules import Alternating, CarlitzDistance, Free
from locomp.runs import (
    MalformedImage,
    RunDescriptor,
    RunHypothesisError,
    RunPart,
    build_run_class,
    expected_max_run_exact,
    g_from_table,
    is_xyx_free,
    max_run,
    max_run_multiplicity_exact,
    run_cdf_exact,
    run_cdf_table,
    run_parts_replaceable,
    theta,
    theta_inv,
    xyx_witness,
)

import oracles


def parts(s):
    return tuple(Part(int(ch)) for ch in s)


def test_xyx_free():
    assert is_xyx_free(parts("1"))
    assert is_xyx_free(parts("12"))
    assert is_xyx_free(parts("112"))
    assert not is_xyx_free(parts("121"))
    assert xyx_witness(parts("121")) == (parts("1"), parts("2"))
    assert xyx_witness(parts("1212")) == (parts("12"), ())
    assert xyx_witness(parts("11")) == (parts("1"), ())
    with pytest.raises(ValueError):
        is_xyx_free(())


def test_theta_example():
    rd = RunDescriptor.of(1, 2)
    a = parts("1212312")
    assert theta(a, rd) == [RunPart(2, 3), Part(3), RunPart(1, 3)]
    assert theta_inv(theta(a, rd), rd) == a


def test_bordered_c_needs_opt_in():
    rd = RunDescriptor.of(1, 2, 1)
    a = parts("12121121121")
    with pytest.raises(RunHypothesisError) as err:
        theta(a, rd)
    assert err.value.witness == (parts("1"), parts("2"))
    # scanning left to right replaces overlapping copies greedily
    assert theta(a, rd, earliest=True) == [RunPart(1, 4), Part(2), Part(1), RunPart(2, 4)]
    assert max_run(a, rd) == 3


def test_theta_inv_rejects_non_images():
    rd = RunDescriptor.of(1, 2)
    with pytest.raises(MalformedImage):
        theta_inv([RunPart(1, 3), RunPart(2, 3)], rd)
    with pytest.raises(MalformedImage):
        theta_inv([Part(1), Part(2)], rd)
    with pytest.raises(MalformedImage):
        theta_inv([RunPart(1, 3), Part(1), Part(2)], rd)


def test_run_part_size_and_order():
    assert RunPart(3, 2).size == 6
    assert RunPart(1, 2).sort_key > Part(2).sort_key
    with pytest.raises(ValueError):
        RunPart(0, 1)


def test_build_run_class_preconditions():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 2, 8)
    with pytest.raises(RunHypothesisError):
        build_run_class(D, RunDescriptor.of(1, 1))  # not admissible
    with pytest.raises(RunHypothesisError):
        build_run_class(D, RunDescriptor.of(1))  # length differs from the span
    with pytest.raises(RunHypothesisError):
        build_run_class(D, RunDescriptor.of(1, 2, 1))  # bordered
    C1 = build_digraph(Ordinary(), CarlitzDistance(1), 1, 8)
    with pytest.raises(RunHypothesisError):
        build_run_class(C1, RunDescriptor.of(1))  # no arc from 1 to itself


CLASSES = [
    (Ordinary(), Free(), RunDescriptor.of(1)),
    (Ordinary(), Free(), RunDescriptor.of(2, 1)),
    (Ordinary(), CarlitzDistance(1), RunDescriptor.of(1, 2)),
    (Ordinary(), CarlitzDistance(1), RunDescriptor.of(3, 1)),
    (Ordinary(), Alternating(), RunDescriptor.of(2, 1)),
    (MultisetColor(2), Free(), RunDescriptor((Part(1, 1),))),
]


@pytest.mark.parametrize("spec, rule, rd", CLASSES)
def test_run_class_counts_and_cdf(spec, rule, rd):
    B = 10
    D = build_digraph(spec, rule, rd.clen, B)
    Dp = build_run_class(D, rd)
    assert list(count_series(Dp, B)) == list(count_series(D, B))
    c = tuple((p.size, p.color) for p in rd.c)
    for n in (B - 1, B):
        structs = [tuple((p.size, p.color) for p in a) for a in enumerate_structures(D, n)]
        table = run_cdf_table(D, rd, n, 4)
        assert table == [oracles.run_cdf(structs, c, k) for k in range(1, 5)]


def test_cdf_is_one_beyond_the_longest_possible_run():
    D = build_digraph(Ordinary(), Free(), 1, 6)
    rd = RunDescriptor.of(1)
    assert run_cdf_exact(D, rd, 6, 7) == 1
    assert run_cdf_exact(D, rd, 6, 6) == 1 - Fraction(1, 32)
    with pytest.raises(ValueError):
        run_cdf_exact(D, rd, 6, 0)


def test_expected_max_run_matches_enumeration():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 2, 12)
    rd = RunDescriptor.of(1, 2)
    structs = enumerate_structures(D, 12)
    mean = Fraction(sum(max_run(a, rd) for a in structs), len(structs))
    assert expected_max_run_exact(D, rd, 12) == mean
    F = build_digraph(Ordinary(), Free(), 1, 10)
    assert expected_max_run_exact(F, RunDescriptor.of(1), 10) == Fraction(1107, 512)


def test_threads_do_not_change_results():
    D = build_digraph(Ordinary(), Free(), 1, 16)
    rd = RunDescriptor.of(1)
    assert run_cdf_table(D, rd, 16, 8, threads=2) == run_cdf_table(D, rd, 16, 8)


def test_max_run_multiplicity():
    D = build_digraph(Ordinary(), Free(), 1, 5)
    rd = RunDescriptor.of(1)
    table = max_run_multiplicity_exact(D, rd, 5)
    assert sum(table.values()) == 1
    t3 = max_run_multiplicity_exact(build_digraph(Ordinary(), Free(), 1, 3), rd, 3)
    # 3 | 12, 21 | 111
    assert t3 == {(0, 0): Fraction(1, 4), (1, 1): Fraction(1, 2), (3, 1): Fraction(1, 4)}
    assert g_from_table(t3, 1) == Fraction(3, 4)


def test_run_parts_replaceable():
    D = build_digraph(Ordinary(), CarlitzDistance(1), 2, 10)
    assert run_parts_replaceable(build_run_class(D, RunDescriptor.of(1, 2)), 10)
    F = build_digraph(Ordinary(), Free(), 1, 10)
    assert run_parts_replaceable(build_run_class(F, RunDescriptor.of(1)), 10)


def test_zero_max_run_counts_c_avoiding_structures():
    F = build_digraph(Ordinary(), Free(), 1, 10)
    Dp = build_run_class(F, RunDescriptor.of(1), max_run=0)
    # compositions without a part 1
    fib = [1, 0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert list(count_series(Dp, 10)) == fib


compositions_st = st.lists(st.integers(1, 3), max_size=14).map(lambda xs: tuple(Part(x) for x in xs))
c_st = st.sampled_from([parts("1"), parts("2"), parts("12"), parts("21"), parts("112")])


@given(compositions_st, c_st)
def test_theta_properties(a, c):
    rd = RunDescriptor(c)
    img = theta(a, rd)
    assert sum(x.size for x in img) == sum(p.size for p in a)
    assert theta_inv(img, rd) == a
    runs = [x.k for x in img if isinstance(x, RunPart)]
    assert max_run(a, rd) == max(runs, default=0)
    assert all(not (isinstance(x, RunPart) and isinstance(y, RunPart))
               for x, y in zip(img, img[1:]))
