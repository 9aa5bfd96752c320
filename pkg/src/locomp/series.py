"""Truncated power series with exact integer coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List


@dataclass
class CoeffSeries:
    """Coefficients a_0 .. a_B of a truncated ordinary generating function."""

    coeffs: List[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CoeffSeries):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == list(other)
        return NotImplemented

    def truncate(self, B: int) -> "CoeffSeries":
        return CoeffSeries(self.coeffs[: B + 1])
