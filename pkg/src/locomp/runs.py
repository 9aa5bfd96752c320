"""Runs of a marked subcomposition and the run-part transform.

A maximal run of ``k`` consecutive copies of ``c`` is replaced by a single
run part ``RunPart(k)`` of size ``k*|c|``.  For ``c`` without a border
(no ``c = x y x`` with x non-empty) copies of ``c`` cannot overlap, so the
replacement is a size-preserving bijection onto a locally restricted class
over the extended part set, and the longest run becomes the largest run
part.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .counting import count_series
from .digraph import ClassDigraph, DigraphError, enumerate_structures
from .parts import Part
from .rules import Alternating, LocalRule

__all__ = [
    "RunPart",
    "RUN",
    "RunDescriptor",
    "RunHypothesisError",
    "MalformedImage",
    "RunAugmented",
    "is_xyx_free",
    "xyx_witness",
    "theta",
    "theta_inv",
    "max_run",
    "build_run_class",
    "run_cdf_exact",
    "run_cdf_table",
    "expected_max_run_exact",
    "max_run_multiplicity_exact",
    "g_from_table",
    "run_parts_replaceable",
]


class RunHypothesisError(ValueError):
    """The marked subcomposition or digraph violates the run-transform hypotheses."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class MalformedImage(ValueError):
    pass


@dataclass(frozen=True)
class RunPart:
    """Run part standing for ``k`` consecutive copies of the marked c."""

    k: int
    csize: int

    def __post_init__(self):
        if self.k < 1 or self.csize < 1:
            raise ValueError("run parts need k >= 1 and |c| >= 1")

    @property
    def size(self) -> int:
        return self.k * self.csize

    @property
    def sort_key(self):
        return (self.size, 1, self.k)

    def __repr__(self):
        return f"RunPart({self.k})"

    def __str__(self):
        return f"<{self.k}>"


class _Run:
    __slots__ = ()

    def __repr__(self):
        return "RUN"

    def __reduce__(self):
        return (_run, ())


def _run():
    return RUN


RUN = _Run()


def xyx_witness(c: Sequence) -> Optional[Tuple[tuple, tuple]]:
    """``(x, y)`` with ``c = x y x`` and x non-empty, shortest x first; else None."""
    c = tuple(c)
    for L in range(1, len(c) // 2 + 1):
        if c[:L] == c[-L:]:
            return c[:L], c[L:len(c) - L]
    return None


def is_xyx_free(c: Sequence) -> bool:
    if len(c) < 1:
        raise ValueError("c must be non-empty")
    return xyx_witness(c) is None


@dataclass(frozen=True)
class RunDescriptor:
    c: Tuple[Part, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(self.c))
        if not self.c:
            raise ValueError("the marked subcomposition must be non-empty")

    @classmethod
    def of(cls, *sizes) -> "RunDescriptor":
        """Shorthand for ordinary parts: ``RunDescriptor.of(1, 2)`` is c = 12."""
        return cls(tuple(p if isinstance(p, Part) else Part(p) for p in sizes))

    @property
    def csize(self) -> int:
        return sum(p.size for p in self.c)

    @property
    def clen(self) -> int:
        return len(self.c)

    @property
    def borderfree(self) -> bool:
        return is_xyx_free(self.c)

    def run(self, k: int) -> RunPart:
        return RunPart(k, self.csize)


def _require_borderfree(rd: RunDescriptor):
    w = xyx_witness(rd.c)
    if w is not None:
        x, y = w
        raise RunHypothesisError(
            f"c = {''.join(map(str, rd.c))} has the form x y x with "
            f"x = {''.join(map(str, x))}, y = {''.join(map(str, y)) or 'empty'}",
            witness=w)


def theta(a: Sequence, rd: RunDescriptor, earliest: bool = False) -> list:
    """Replace each maximal run c^k of a by ``RunPart(k)``, scanning left to right.

    ``earliest=True`` allows a bordered c; the scan then replaces copies at
    the earliest opportunity, for which no run statistics are claimed.
    """
    if not earliest:
        _require_borderfree(rd)
    a = tuple(a)
    c, L = rd.c, rd.clen
    out = []
    i = 0
    while i < len(a):
        k = 0
        while a[i + k * L:i + (k + 1) * L] == c:
            k += 1
        if k:
            out.append(RunPart(k, rd.csize))
            i += k * L
        else:
            out.append(a[i])
            i += 1
    return out


def theta_inv(ap: Sequence, rd: RunDescriptor, earliest: bool = False) -> tuple:
    """Expand run parts back into copies of c; reject sequences outside the image."""
    prev_run = False
    out: List[Part] = []
    for x in ap:
        if isinstance(x, RunPart):
            if prev_run:
                raise MalformedImage("two consecutive run parts")
            if x.csize != rd.csize:
                raise MalformedImage(f"run part {x!r} does not belong to c")
            out.extend(rd.c * x.k)
            prev_run = True
        else:
            out.append(x)
            prev_run = False
    out = tuple(out)
    if theta(out, rd, earliest=earliest) != list(ap):
        raise MalformedImage("expansion creates a run that is not a run part")
    return out


def max_run(a: Sequence, rd: RunDescriptor) -> int:
    """Largest k with c^k a contiguous factor of a (0 if c does not occur)."""
    a = tuple(a)
    c, L = rd.c, rd.clen
    best = 0
    for i in range(len(a) - L + 1):
        k = 0
        while a[i + k * L:i + (k + 1) * L] == c:
            k += 1
        best = max(best, k)
    return best


class RunAugmented(LocalRule):
    """Rule of the image class: base rule on the expansion, plus
    no two consecutive run parts and no factor c among atoms.

    Run parts all expand to c at their boundary, so every run part shares
    the single token ``RUN``; ``max_run`` bounds the run-part alphabet.
    """

    def __init__(self, base: LocalRule, rd: RunDescriptor, max_run: Optional[int] = None):
        self.base = base
        self.rd = rd
        self.max_run = max_run
        self.window = max(base.window, rd.clen, 2)
        self.lumps = base.lumps
        self._c = tuple(rd.c)

    def pinned_parts(self):
        return self.base.pinned_parts() | frozenset(self._c)

    def token(self, part, pinned):
        if isinstance(part, RunPart):
            return RUN
        return self.base.token(part, pinned)

    def abstract_parts(self, spec, size, pinned):
        out = list(self.base.abstract_parts(spec, size, pinned))
        cs = self.rd.csize
        if size % cs == 0:
            k = size // cs
            if self.max_run is None or k <= self.max_run:
                out.append((RunPart(k, cs), 1))
        return out

    def _expand(self, toks):
        out = []
        for t in toks:
            if t is RUN:
                out.extend(self._c)
            else:
                out.append(t)
        return tuple(out)

    def ok(self, toks):
        toks = tuple(toks)
        for a, b in zip(toks, toks[1:]):
            if a is RUN and b is RUN:
                return False
        c, L = self._c, len(self._c)
        for i in range(len(toks) - L + 1):
            if toks[i:i + L] == c:
                return False
        return self.base.ok(self._expand(toks))

    def accepts(self, toks):
        return self.ok(toks) and self.base.accepts(self._expand(toks))

    def check(self, spec, m):
        self.base.check(spec, m)
        super().check(spec, m)

    def __eq__(self, other):
        return (type(other) is RunAugmented and other.base == self.base
                and other.rd == self.rd and other.max_run == self.max_run)

    def __hash__(self):
        return hash(("Run", self.base, self.rd, self.max_run))

    def __repr__(self):
        c = "".join(map(str, self._c))
        cap = "" if self.max_run is None else f", max_run={self.max_run}"
        return f"RunAugmented({self.base!r}, c={c}{cap})"


def build_run_class(D: ClassDigraph, rd: RunDescriptor,
                    max_run: Optional[int] = None) -> ClassDigraph:
    """Digraph of theta(A) over parts plus run parts.

    ``max_run`` keeps only run parts of index <= max_run, which counts the
    structures whose longest run of c is at most that long.
    """
    if not isinstance(D, ClassDigraph):
        raise TypeError("run classes are built from rule-based digraphs")
    _require_borderfree(rd)
    if isinstance(D.rule, RunAugmented):
        raise RunHypothesisError("the digraph already carries run parts")
    c = rd.c
    if rd.clen != D.span:
        raise RunHypothesisError(f"span {D.span} differs from len(c) = {rd.clen}")
    if any(p.size > D.budget or p.color >= D.spec.count(p.size) for p in c):
        raise RunHypothesisError("c uses parts outside the part class or budget")
    rule = D.rule
    toks = D.tokens(c)
    if not rule.vertex_ok("R", toks, D.span):
        raise RunHypothesisError("c is not a recurrent vertex")
    if not rule.key_arc(rule.out_key("R", toks), rule.in_key("R", toks)):
        raise RunHypothesisError("the digraph has no arc from c to itself")
    # the alternating digraph has start vertices besides eps_s but its run
    # class is still given by the default construction
    if rule.role_lengths(D.span).get("S") and not isinstance(rule, Alternating):
        raise RunHypothesisError("the start set must be {eps_s}")
    return ClassDigraph(D.spec, RunAugmented(rule, rd, max_run), D.span, D.budget,
                        pinned=D.pinned | frozenset(c))


def _capped_count(args):
    D, rd, n, k = args
    return count_series(build_run_class(D, rd, max_run=k - 1), n)[n]


def run_cdf_table(D: ClassDigraph, rd: RunDescriptor, n: int, kmax: int,
                  threads: int = 1) -> List[Fraction]:
    """``[P(R_n < k) for k in 1..kmax]`` exactly."""
    total = count_series(D, n)[n]
    if total == 0:
        raise DigraphError(f"the class has no structure of size {n}")
    top = n // rd.csize
    ks = [k for k in range(1, kmax + 1) if k <= top]
    if threads > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            counts = list(ex.map(_capped_count, [(D, rd, n, k) for k in ks], chunksize=4))
    else:
        counts = [_capped_count((D, rd, n, k)) for k in ks]
    out = [Fraction(c, total) for c in counts]
    out.extend(Fraction(1) for _ in range(kmax - len(ks)))
    return out


def run_cdf_exact(D: ClassDigraph, rd: RunDescriptor, n: int, k: int) -> Fraction:
    """P(R_n < k) for a uniform structure of size n."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return run_cdf_table(D, rd, n, k)[-1] if k <= n // rd.csize else Fraction(1)


def expected_max_run_exact(D: ClassDigraph, rd: RunDescriptor, n: int,
                           threads: int = 1) -> Fraction:
    """E(R_n) = sum_k P(R_n >= k), summed over every possible k."""
    top = n // rd.csize
    if top == 0:
        return Fraction(0)
    cdf = run_cdf_table(D, rd, n, top, threads=threads)
    return sum((1 - p for p in cdf), Fraction(0))


def max_run_multiplicity_exact(D: ClassDigraph, rd: RunDescriptor, n: int,
                               cap: Optional[int] = None) -> Dict[Tuple[int, int], Fraction]:
    """Joint law of (R_n, number of runs of length R_n), by enumeration.

    Structures without any copy of c contribute to the key ``(0, 0)``.
    """
    _require_borderfree(rd)
    structs = enumerate_structures(D, n, cap=cap)
    if not structs:
        raise DigraphError(f"the class has no structure of size {n}")
    counts: Dict[Tuple[int, int], int] = {}
    for a in structs:
        R = max_run(a, rd)
        mult = sum(1 for x in theta(a, rd) if isinstance(x, RunPart) and x.k == R) if R else 0
        counts[(R, mult)] = counts.get((R, mult), 0) + 1
    total = len(structs)
    return {key: Fraction(v, total) for key, v in sorted(counts.items())}


def g_from_table(table: Dict[Tuple[int, int], Fraction], k: int) -> Fraction:
    """g_n(k): probability that exactly k runs reach the maximum length."""
    return sum((p for (R, m), p in table.items() if m == k), Fraction(0))


def run_parts_replaceable(Dp: ClassDigraph, n: int, cap: Optional[int] = None) -> bool:
    """Spot check that run parts are interchangeable in context.

    Every run part of every image structure of size <= n is replaced by a
    larger run part; the result must still be admissible.
    """
    rule = Dp.rule
    if not isinstance(rule, RunAugmented):
        raise TypeError("expected a run-class digraph")
    for size in range(n + 1):
        for ap in enumerate_structures(Dp, size, cap=cap):
            for i, x in enumerate(ap):
                if isinstance(x, RunPart):
                    bigger = ap[:i] + (RunPart(x.k + 1, x.csize),) + ap[i + 1:]
                    if not rule.accepts(Dp.tokens(bigger)):
                        return False
    return True
