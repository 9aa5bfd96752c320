"""Locally restricted sequential structures: exact counts and run statistics."""

from .asymptotics import (
    AsymptoticParams,
    allcomp_C,
    carlitz_C,
    carlitz_r,
    closed_form_r,
    complex_gamma,
    estimate_A,
    estimate_C,
    estimate_r,
    oscillation_P,
    poisson_tv,
    thm2_cdf,
    thm2_gnk,
    thm2_mean,
)
from .counting import (
    ExactDistribution,
    count_brute,
    count_series,
    expected_occurrences,
    mean_variance_profile,
    occurrence_distribution,
    transfer_entry,
    transfer_series,
)
from .digraph import (
    ClassDigraph,
    ExplicitDigraph,
    Vertex,
    build_digraph,
    check_regular,
    check_unique_walks,
    enumerate_structures,
    validate,
)
from .parts import (
    Alphabet,
    Explicit,
    MultisetColor,
    NColor,
    Ordinary,
    Part,
    coefficient,
    part_ogf,
    part_radius,
)
from .rules import Alternating, AvoidPatterns, CarlitzDistance, Free
from .runs import (
    RunDescriptor,
    RunPart,
    build_run_class,
    expected_max_run_exact,
    is_xyx_free,
    max_run,
    run_cdf_exact,
    theta,
    theta_inv,
)
from .series import CoeffSeries

__all__ = [name for name in dir() if not name.startswith("_")]
