"""GF(2) linear algebra on int bitmask rows (column k = bit k)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def gf2_rank(rows: Sequence[int], ncols: int) -> int:
    """Rank via Gaussian elimination, first-nonzero pivoting."""
    work = list(rows)
    rank = 0
    top = 0
    for col in range(ncols):
        pivot = None
        bit = 1 << col
        for r in range(top, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[top], work[pivot] = work[pivot], work[top]
        for r in range(len(work)):
            if r != top and work[r] & bit:
                work[r] ^= work[top]
        rank += 1
        top += 1
        if top == len(work):
            break
    return rank


@dataclass(frozen=True)
class Gf2Matrix:
    """Bit matrix; row r is the int ``rows[r]`` over ``ncols`` columns."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        if self.ncols < 0:
            raise ValueError("column count must be nonnegative")
        limit = 1 << self.ncols
        for r, row in enumerate(self.rows):
            if row < 0 or row >= limit:
                raise ValueError(f"row {r} has bits outside {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[int], ncols: int) -> "Gf2Matrix":
        return cls(tuple(rows), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return gf2_rank(self.rows, self.ncols)

    def stack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if other.ncols != self.ncols:
            raise ValueError("column counts differ")
        return Gf2Matrix(self.rows + other.rows, self.ncols)

    def apply(self, vector: int) -> int:
        """Matrix-vector product; returns output bits packed as an int."""
        out = 0
        for r, row in enumerate(self.rows):
            out |= ((row & vector).bit_count() & 1) << r
        return out
