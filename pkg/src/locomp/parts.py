"""Part classes: the counting sequence P_n, its generating function and radius.

A part class is described only through P_n, the number of parts (``colors``)
of each size n >= 1.  Colors are dense indices ``0 .. P_n - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

__all__ = [
    "ANY_COLOR",
    "INF",
    "Part",
    "PartSpec",
    "Ordinary",
    "Alphabet",
    "NColor",
    "MultisetColor",
    "Explicit",
    "coefficient",
    "part_ogf",
    "part_radius",
]

#: color index of a lumped abstract part standing for every unpinned color
ANY_COLOR = -1

#: radius sentinel for polynomial part generating functions
INF = math.inf


@dataclass(frozen=True, order=True)
class Part:
    """A part of a given size and color index."""

    size: int
    color: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"part size must be positive, got {self.size}")

    @property
    def sort_key(self):
        return (self.size, 0, self.color)

    def __repr__(self):
        if self.color == 0:
            return f"Part({self.size})"
        return f"Part({self.size}, {self.color})"

    def __str__(self):
        if self.color == 0:
            return str(self.size)
        if self.color == ANY_COLOR:
            return f"{self.size}_*"
        return f"{self.size}_{self.color}"


@dataclass(frozen=True)
class PartSpec:
    """Base class; subclasses fix P_n for every n >= 1."""

    def count(self, n: int) -> int:
        raise NotImplementedError

    @property
    def radius(self) -> float:
        raise NotImplementedError

    def colors(self, n: int) -> range:
        return range(self.count(n)) if n >= 1 else range(0)

    def parts(self, n: int):
        """All concrete parts of size n."""
        return [Part(n, c) for c in self.colors(n)]

    @property
    def max_size(self) -> Optional[int]:
        """Largest size with P_n > 0, or None when unbounded."""
        return None


@dataclass(frozen=True)
class Ordinary(PartSpec):
    def count(self, n):
        return 1 if n >= 1 else 0

    @property
    def radius(self):
        return 1.0


@dataclass(frozen=True)
class Alphabet(PartSpec):
    """Words over a k-letter alphabet: k parts of size 1 and nothing else."""

    k: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("alphabet size must be positive")

    def count(self, n):
        return self.k if n == 1 else 0

    @property
    def radius(self):
        return INF

    @property
    def max_size(self):
        return 1


@dataclass(frozen=True)
class NColor(PartSpec):
    def count(self, n):
        return n if n >= 1 else 0

    @property
    def radius(self):
        return 1.0


@dataclass(frozen=True)
class MultisetColor(PartSpec):
    """A part of size n is a multiset of n balls drawn from N colors."""

    N: int = 2

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("number of ball colors must be positive")

    def count(self, n):
        return math.comb(n + self.N - 1, self.N - 1) if n >= 1 else 0

    @property
    def radius(self):
        return 1.0


@dataclass(frozen=True)
class Explicit(PartSpec):
    """Finite table: P_n = counts[n] inside the table, 0 beyond it."""

    counts: Tuple[int, ...] = (0, 1)

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if any(c < 0 for c in counts):
            raise ValueError("part counts must be non-negative")
        if counts and counts[0] != 0:
            raise ValueError("counts[0] must be 0: parts have positive size")

    def count(self, n):
        if 1 <= n < len(self.counts):
            return self.counts[n]
        return 0

    @property
    def radius(self):
        return INF

    @property
    def max_size(self):
        sizes = [n for n, c in enumerate(self.counts) if c > 0]
        return max(sizes) if sizes else 0


def coefficient(spec: PartSpec, n: int) -> int:
    """P_n for ``n >= 1``."""
    if n < 1:
        raise ValueError("coefficient is defined for n >= 1")
    return spec.count(n)


def part_ogf(spec: PartSpec, B: int):
    """Coefficients of P(z) = sum_n P_n z^n up to z^B."""
    from .series import CoeffSeries

    if B < 1:
        raise ValueError("truncation order must be positive")
    return CoeffSeries([0] + [spec.count(n) for n in range(1, B + 1)])


def part_radius(spec: PartSpec) -> float:
    """Radius of convergence of P(z); ``INF`` for polynomials."""
    return spec.radius
