"""Exact counting: graded walk DP, brute-force oracle, occurrence statistics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .digraph import (
    EPS_F,
    EPS_S,
    ClassDigraph,
    Digraph,
    DigraphError,
    EnumerationTooLarge,
    ExplicitDigraph,
    default_enum_cap,
    enumerate_structures,
    structure_key,
)
from .engine import run_plan
from .series import CoeffSeries

__all__ = [
    "ExactDistribution",
    "count_series",
    "count_brute",
    "transfer_entry",
    "transfer_series",
    "recurrent_free_series",
    "occurrence_distribution",
    "occurrence_counts",
    "mean_variance_profile",
    "expected_occurrences",
]

DEFAULT_CAP = 32


@dataclass
class ExactDistribution:
    """Finite distribution with exact rational probabilities.

    When ``capped_at`` is set, the mass at that value stands for every
    outcome ``>= capped_at``.
    """

    support: List[int]
    probabilities: List[Fraction]
    capped_at: Optional[int] = None

    def __post_init__(self):
        if sum(self.probabilities) != 1:
            raise ValueError("probabilities must sum to 1")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("negative probability")

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(zip(self.support, self.probabilities))

    def mean(self) -> Fraction:
        return sum((k * p for k, p in zip(self.support, self.probabilities)), Fraction(0))

    def __getitem__(self, k):
        return self.as_dict().get(k, Fraction(0))


def _check_budget(D: Digraph, n: int):
    if n > D.budget:
        raise DigraphError(f"size {n} exceeds the digraph budget {D.budget}")


def count_series(D: Digraph, B: int) -> CoeffSeries:
    """|A_n| for 0 <= n <= B by the size-graded walk DP."""
    _check_budget(D, B)
    return CoeffSeries(run_plan(D.counting_plan(B), B)[0])


def count_brute(D: Digraph, n: int, cap: Optional[int] = None) -> int:
    """Count structures of size n by filtering all part sequences.

    Rule-built digraphs are checked against the rule's whole-structure
    predicate, without using the digraph at all; colors that the rule
    cannot tell apart are counted by multiplicity.  Explicit digraphs fall
    back to walk enumeration.
    """
    cap = default_enum_cap() if cap is None else cap
    if not isinstance(D, ClassDigraph):
        return len(enumerate_structures(D, n, cap=cap))
    _check_budget(D, n)
    rule = D.rule
    aparts = sorted(((p, mult, rule.token(p, D.pinned)) for p, mult in D.abstract_parts(n)),
                    key=lambda x: x[0].size)
    total = 0
    visited = 0
    stack = [((), 1, 0)]
    while stack:
        toks, mult, size = stack.pop()
        visited += 1
        if visited > cap:
            raise EnumerationTooLarge(f"brute force for n={n} exceeds {cap} sequences")
        if size == n:
            if rule.accepts(toks):
                total += mult
            continue
        for p, pm, t in aparts:
            if size + p.size > n:
                break
            nt = toks + (t,)
            # the predicate is factor-closed, so rejected prefixes never recover
            if rule.ok(nt):
                stack.append((nt, mult * pm, size + p.size))
    return total


def _recurrent_order(D: Digraph, max_part=None):
    R = D.recurrent(max_part)
    return sorted(R, key=lambda v: structure_key(v.parts))


def transfer_entry(D: Digraph, i: int, j: int, max_part: Optional[int] = None):
    """Exponent |r_i| + |r_j| of the transfer-matrix entry, or None without an arc."""
    R = _recurrent_order(D, max_part)
    if not (0 <= i < len(R) and 0 <= j < len(R)):
        raise IndexError(f"recurrent vertex index out of range (|R| = {len(R)})")
    ri, rj = R[i], R[j]
    if D.has_arc(ri, rj):
        return ri.size + rj.size
    return None


def _poly_add(a: Dict[int, int], b: Dict[int, int], shift: int, top: int):
    for e, c in b.items():
        e2 = e + shift
        if e2 <= top:
            a[e2] = a.get(e2, 0) + c


def transfer_series(D: Digraph, B: int) -> List[int]:
    """Coefficients of F_R(z^2) = s(z)^t sum_k T(z)^k f(z) up to z^(2B).

    Arc weights are z^(|v|+|w|); the result counts walks through at least
    one recurrent vertex, with structure size n sitting at exponent 2n.
    """
    _check_budget(D, B)
    top = 2 * B
    adj = D.adjacency(max_part=B, max_size=B)
    verts = [v for v in adj] + [EPS_F]
    R = [v for v in verts if v.role == "R"]
    Rset = set(R)
    # s: walks eps_s -> (non-recurrent)* -> r
    s: Dict = {r: {} for r in R}
    frontier = {EPS_S: {0: 1}}
    while frontier:
        nxt: Dict = {}
        for u, poly in frontier.items():
            for v in adj.get(u, ()):
                w = u.size + v.size
                if v in Rset:
                    _poly_add(s[v], poly, w, top)
                elif v != EPS_F:
                    _poly_add(nxt.setdefault(v, {}), poly, w, top)
        frontier = {k: p for k, p in nxt.items() if p}
    # f: walks r -> (non-recurrent)* -> eps_f, computed backwards
    memo: Dict = {}

    def to_finish(u):
        if u in memo:
            return memo[u]
        out: Dict[int, int] = {}
        for v in adj.get(u, ()):
            w = u.size + v.size
            if v == EPS_F:
                _poly_add(out, {0: 1}, w, top)
            elif v not in Rset:
                _poly_add(out, to_finish(v), w, top)
        memo[u] = out
        return out

    f = {r: to_finish(r) for r in R}
    total: Dict[int, int] = {}
    X = s
    while any(X.values()):
        for r, poly in X.items():
            for e1, c1 in poly.items():
                for e2, c2 in f[r].items():
                    if e1 + e2 <= top:
                        total[e1 + e2] = total.get(e1 + e2, 0) + c1 * c2
        nxt = {r: {} for r in R}
        for r, poly in X.items():
            if not poly:
                continue
            for v in adj.get(r, ()):
                if v in Rset:
                    _poly_add(nxt[v], poly, r.size + v.size, top)
        X = nxt
    return [total.get(e, 0) for e in range(top + 1)]


def recurrent_free_series(D: Digraph, B: int) -> CoeffSeries:
    """Counts of structures whose walk avoids every recurrent vertex."""
    E = ExplicitDigraph.from_digraph(D, max_part=B)
    keep = [v for v in E.concrete_vertices() if v.role != "R"]
    arcs = [(u, v) for u, v in E.arcs if u.role != "R" and v.role != "R"]
    return count_series(ExplicitDigraph(D.span, keep, arcs, budget=B), B)


def occurrence_counts(D: Digraph, target, n: int, cap: int = DEFAULT_CAP) -> List[List[int]]:
    """``res[j][s]``: structures of size s with min(occurrences, cap) == j."""
    if cap < 1:
        raise ValueError("capCount must be positive")
    _check_budget(D, n)
    return run_plan(D.counting_plan(n, target=target), n, mode="register", cap=cap)


def occurrence_distribution(D: Digraph, target, n: int, cap: int = DEFAULT_CAP) -> ExactDistribution:
    """Exact law of the number of occurrences of ``target`` at size n."""
    res = occurrence_counts(D, target, n, cap)
    col = [res[j][n] for j in range(cap + 1)]
    total = sum(col)
    if total == 0:
        raise DigraphError(f"the class has no structure of size {n}")
    support = [j for j, c in enumerate(col) if c]
    probs = [Fraction(col[j], total) for j in support]
    return ExactDistribution(support, probs, capped_at=cap if col[cap] else None)


def _moments(D: Digraph, target, nmax: int):
    _check_budget(D, nmax)
    return run_plan(D.counting_plan(nmax, target=target), nmax, mode="moments")


def mean_variance_profile(D: Digraph, target, nmax: int):
    """``[(n, mean, variance)]`` of the occurrence count, exact, for n <= nmax.

    Sizes with no structure at all are skipped.
    """
    c, s1, s2 = _moments(D, target, nmax)
    out = []
    for n in range(nmax + 1):
        if c[n] == 0:
            continue
        mean = Fraction(s1[n], c[n])
        var = Fraction(s2[n], c[n]) - mean * mean
        out.append((n, mean, var))
    return out


def expected_occurrences(D: Digraph, target, n: int) -> Fraction:
    """E(number of occurrences of target) over structures of size n."""
    c, s1, _ = _moments(D, target, n)
    if c[n] == 0:
        raise DigraphError(f"the class has no structure of size {n}")
    return Fraction(s1[n], c[n])
