"""Local restriction rules.

A rule is a factor-closed predicate on part sequences together with the
shape of the class digraph it induces.  Predicates never look at whole
parts directly; they see *tokens*.  Rules that only compare parts for
equality against a fixed finite set (free, pattern avoidance) map every
other part to the shared ``LUMP`` token, which lets the counting engine
merge vertices that differ only in size or color.
"""

from __future__ import annotations

from typing import FrozenSet, Iterable, Sequence, Tuple

from .parts import ANY_COLOR, Ordinary, Part, PartSpec

__all__ = [
    "LUMP",
    "LocalRule",
    "Free",
    "CarlitzDistance",
    "Alternating",
    "AvoidPatterns",
    "RuleError",
]


class RuleError(ValueError):
    """A rule is inconsistent with the requested span or part class."""


class _Lump:
    __slots__ = ()

    def __repr__(self):
        return "LUMP"

    def __reduce__(self):
        return (_lump, ())


def _lump():
    return LUMP


LUMP = _Lump()


class LocalRule:
    """Base rule: subclasses set ``window`` and override ``ok``.

    ``window`` is the length of the longest factor ``ok`` inspects.  The
    default digraph (start set {eps_s}, recurrent vertices = admissible
    length-m sequences, finish vertices = shorter admissible sequences)
    is correct whenever ``window <= m + 1``.
    """

    window = 1
    lumps = False

    # predicate -------------------------------------------------------
    def ok(self, toks: Sequence) -> bool:
        return True

    def accepts(self, toks: Sequence) -> bool:
        """Whole-structure predicate (defaults to ``ok``)."""
        return self.ok(toks)

    def pinned_parts(self) -> FrozenSet[Part]:
        return frozenset()

    # parts -----------------------------------------------------------
    def token(self, part, pinned: FrozenSet) -> object:
        if self.lumps and (part.color == ANY_COLOR or part not in pinned):
            return LUMP
        return part

    def abstract_parts(self, spec: PartSpec, size: int, pinned: FrozenSet):
        """``(part, multiplicity)`` pairs covering every part of this size."""
        count = spec.count(size)
        if not self.lumps:
            return [(Part(size, c), 1) for c in range(count)]
        out = [(p, 1) for p in sorted(pinned)
               if isinstance(p, Part) and p.size == size and p.color < count]
        rest = count - len(out)
        if rest > 0:
            out.append((Part(size, ANY_COLOR), rest))
        return out

    def check(self, spec: PartSpec, m: int) -> None:
        if self.window > m + 1:
            raise RuleError(
                f"{self!r} inspects factors of length {self.window}; "
                f"span {m} is too small")

    # digraph shape ---------------------------------------------------
    def role_lengths(self, m: int):
        return {"S": (), "R": (m,), "F": tuple(range(1, m))}

    def vertex_ok(self, role: str, toks: Tuple, m: int) -> bool:
        if role == "R":
            return len(toks) == m and self.ok(toks)
        if role == "F":
            return 0 < len(toks) < m and self.ok(toks)
        return False

    def out_key(self, role: str, toks: Tuple):
        w = self.window - 1
        return (role, toks[len(toks) - w:] if w > 0 else ())

    def in_key(self, role: str, toks: Tuple):
        if role == "F":
            return (role, toks)
        w = self.window - 1
        return (role, toks[:w] if w > 0 else ())

    def key_arc(self, src, dst) -> bool:
        (srole, stoks), (drole, dtoks) = src, dst
        if srole == "S":
            # only eps_s lives in S for the default construction
            if drole == "R":
                return True
            if drole == "F":
                return self.accepts(dtoks)
            return False
        if srole == "R":
            if drole in ("R", "F"):
                return self.ok(stoks + dtoks)
            return False
        # finish vertices only lead to eps_f
        return drole == "F" and not dtoks

    def __repr__(self):
        return f"{type(self).__name__}()"


class Free(LocalRule):
    """No restriction."""

    window = 1
    lumps = True

    def __eq__(self, other):
        return type(other) is Free

    def __hash__(self):
        return hash("Free")


class CarlitzDistance(LocalRule):
    """Parts at distance at most k are distinct (k-Carlitz)."""

    lumps = False

    def __init__(self, k: int = 1):
        if k < 1:
            raise RuleError("Carlitz distance must be positive")
        self.k = k
        self.window = k + 1

    def ok(self, toks):
        k = self.k
        n = len(toks)
        for i in range(n):
            ti = toks[i]
            for j in range(i + 1, min(n, i + k + 1)):
                if toks[j] == ti:
                    return False
        return True

    def check(self, spec, m):
        if m < self.k:
            raise RuleError(f"{self.k}-Carlitz needs span >= {self.k}, got {m}")
        super().check(spec, m)

    def __eq__(self, other):
        return type(other) is CarlitzDistance and other.k == self.k

    def __hash__(self):
        return hash(("Carlitz", self.k))

    def __repr__(self):
        return f"CarlitzDistance({self.k})"


class Alternating(LocalRule):
    """Up-down compositions with the literal span-2 digraph.

    Start vertices are eps_s and every single part, finish vertices are
    eps_f and every single part except 1, recurrent vertices are the
    descents ``ij`` with ``i > j``.  With that digraph the single-part
    composition ``1`` is not generated; ``accepts`` mirrors this so that
    the brute-force oracle and the digraph agree.
    """

    window = 3
    lumps = False

    def ok(self, toks):
        sizes = [p.size for p in toks]
        for a, b in zip(sizes, sizes[1:]):
            if a == b:
                return False
        for a, b, c in zip(sizes, sizes[1:], sizes[2:]):
            if (b - a) * (c - b) >= 0:
                return False
        return True

    def accepts(self, toks):
        if len(toks) == 1 and toks[0].size == 1:
            return False
        return self.ok(toks)

    def check(self, spec, m):
        if m != 2:
            raise RuleError("alternating compositions use span 2")
        if not isinstance(spec, Ordinary):
            raise RuleError("alternating compositions need ordinary parts")

    def role_lengths(self, m):
        return {"S": (1,), "R": (2,), "F": (1,)}

    def vertex_ok(self, role, toks, m):
        if role == "S":
            return len(toks) == 1
        if role == "F":
            return len(toks) == 1 and toks[0].size != 1
        if role == "R":
            return len(toks) == 2 and toks[0].size > toks[1].size
        return False

    def out_key(self, role, toks):
        return (role, toks[-1:])

    def in_key(self, role, toks):
        return (role, toks[:1])

    def key_arc(self, src, dst):
        (srole, s), (drole, d) = src, dst
        if srole == "S" and not s:
            return True
        if srole == "S":
            if drole == "R" or (drole == "F" and d):
                return s[0].size < d[0].size
            return False
        if srole == "R":
            if drole == "F" and not d:
                return True
            if drole in ("R", "F"):
                return s[0].size < d[0].size
            return False
        return drole == "F" and not d

    def __eq__(self, other):
        return type(other) is Alternating

    def __hash__(self):
        return hash("Alternating")


class AvoidPatterns(LocalRule):
    """Structures containing no element of ``patterns`` as a factor."""

    lumps = True

    def __init__(self, patterns: Iterable[Sequence[Part]]):
        pats = frozenset(tuple(p) for p in patterns)
        if any(len(p) == 0 for p in pats):
            raise RuleError("the empty pattern would forbid everything")
        self.patterns = pats
        self.window = max((len(p) for p in pats), default=1)
        self._lengths = sorted({len(p) for p in pats})

    def pinned_parts(self):
        return frozenset(q for p in self.patterns for q in p)

    def ok(self, toks):
        toks = tuple(toks)
        n = len(toks)
        for L in self._lengths:
            for i in range(n - L + 1):
                if toks[i:i + L] in self.patterns:
                    return False
        return True

    def __eq__(self, other):
        return type(other) is AvoidPatterns and other.patterns == self.patterns

    def __hash__(self):
        return hash(("Avoid", self.patterns))

    def __repr__(self):
        pats = sorted("".join(map(str, p)) for p in self.patterns)
        return f"AvoidPatterns({pats})"
