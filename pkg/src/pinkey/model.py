"""Pairwise-independent network source models and their scaled multigraphs.

A model on terminals ``1..m`` assigns every unordered pair a nonnegative
correlation weight measured in bits.  Exact-mode models carry rational
weights and back all the combinatorial machinery (capacity LP, partition
bounds, tree packing); float-mode models derive their weights from per-pair
joint pmfs and are used for the entropy-based consistency checks, where
results carry a 1e-9 comparison tolerance.

Terminals are 1-indexed throughout.  Zero-weight pairs are stored
explicitly, so sparse inputs are legal.  All types are immutable after
construction and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import InvalidScaleError, UnsupportedModeError

# Exact weights live in fractions.Fraction: arbitrary precision, stored in
# lowest terms with a positive denominator.
Rational = Fraction

Pair = tuple[int, int]
EdgeRef = tuple[int, int, int]  # (i, j, copy) with i < j and 0 <= copy

PMF_SUM_TOLERANCE = 1e-12
WEIGHT_MATCH_TOLERANCE = 1e-9


def canonical_pair(i: int, j: int) -> Pair:
    if i == j:
        raise ValueError(f"self-pair ({i}, {j}) is not allowed")
    return (i, j) if i < j else (j, i)


def all_pairs(m: int) -> Iterator[Pair]:
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            yield (i, j)


def _entropy(probabilities: Iterable[float]) -> float:
    # 0 * log 0 == 0 convention
    return -sum(p * math.log2(p) for p in probabilities if p > 0.0)


@dataclass(frozen=True)
class PairPmf:
    """Joint pmf of one reciprocal pair, rows indexed by the lower terminal."""

    probs: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if not self.probs or not self.probs[0]:
            raise ValueError("pmf table must be non-empty")
        width = len(self.probs[0])
        if any(len(row) != width for row in self.probs):
            raise ValueError("pmf table must be rectangular")
        total = 0.0
        for row in self.probs:
            for p in row:
                if p < 0.0:
                    raise ValueError(f"negative probability {p}")
                total += p
        if abs(total - 1.0) > PMF_SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[float]]) -> "PairPmf":
        return cls(tuple(tuple(float(p) for p in row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.probs)

    @property
    def cols(self) -> int:
        return len(self.probs[0])

    def row_marginals(self) -> tuple[float, ...]:
        return tuple(sum(row) for row in self.probs)

    def col_marginals(self) -> tuple[float, ...]:
        return tuple(sum(row[j] for row in self.probs) for j in range(self.cols))

    def transpose(self) -> "PairPmf":
        return PairPmf(tuple(zip(*self.probs)))

    def joint_entropy(self) -> float:
        return _entropy(p for row in self.probs for p in row)

    def row_entropy(self) -> float:
        return _entropy(self.row_marginals())

    def col_entropy(self) -> float:
        return _entropy(self.col_marginals())

    def row_given_col_entropy(self) -> float:
        """H(row variable | column variable)."""
        return self.joint_entropy() - self.col_entropy()

    def col_given_row_entropy(self) -> float:
        return self.joint_entropy() - self.row_entropy()


def mutual_information(pmf: PairPmf) -> float:
    """Mutual information of a joint pmf in bits, with 0*log conventions."""
    rows = pmf.row_marginals()
    cols = pmf.col_marginals()
    total = 0.0
    for x, row in enumerate(pmf.probs):
        for y, p in enumerate(row):
            if p > 0.0:
                total += p * math.log2(p / (rows[x] * cols[y]))
    return total


@dataclass(frozen=True)
class TerminalSet:
    """A sorted set of at least two terminals seeking a shared key."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted(set(self.members)))
        if len(members) < 2:
            raise ValueError("a terminal set needs at least two terminals")
        if members[0] < 1:
            raise ValueError(f"terminals are 1-indexed, got {members[0]}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *terminals: int) -> "TerminalSet":
        return cls(tuple(terminals))

    @classmethod
    def full(cls, m: int) -> "TerminalSet":
        return cls(tuple(range(1, m + 1)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, terminal: object) -> bool:
        return terminal in self.members

    def mask(self) -> int:
        """Bitmask with bit ``t - 1`` set for each member ``t``."""
        out = 0
        for t in self.members:
            out |= 1 << (t - 1)
        return out

    def validate_within(self, m: int) -> None:
        if self.members[-1] > m:
            raise ValueError(
                f"terminal {self.members[-1]} is outside the model's 1..{m}"
            )


def _normalize_weights(
    m: int, weights: Mapping[Pair, object]
) -> dict[Pair, Fraction]:
    table: dict[Pair, Fraction] = {pair: Fraction(0) for pair in all_pairs(m)}
    explicit: dict[Pair, Fraction] = {}
    for (i, j), value in weights.items():
        pair = canonical_pair(i, j)
        if pair[1] > m:
            raise ValueError(f"pair {pair} is outside terminals 1..{m}")
        weight = Fraction(value)  # type: ignore[arg-type]
        if weight < 0:
            raise ValueError(f"weight for pair {pair} is negative: {weight}")
        if pair in explicit and explicit[pair] != weight:
            raise ValueError(f"conflicting weights for pair {pair}")
        explicit[pair] = weight
        table[pair] = weight
    return table


@dataclass(frozen=True)
class PinModel:
    """Source model: terminal count plus symmetric pairwise weights.

    ``weights`` is present exactly for exact-mode models.  ``pmfs`` may back
    any subset of pairs; a float-mode model reads its weights off the pmfs
    (pairs without a pmf have weight zero).
    """

    m: int
    weights: Mapping[Pair, Fraction] | None
    pmfs: Mapping[Pair, PairPmf]

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"need at least two terminals, got m={self.m}")
        pmfs = {canonical_pair(i, j): pmf for (i, j), pmf in self.pmfs.items()}
        for pair in pmfs:
            if pair[1] > self.m:
                raise ValueError(f"pmf pair {pair} outside terminals 1..{self.m}")
        object.__setattr__(self, "pmfs", pmfs)
        if self.weights is not None:
            table = _normalize_weights(self.m, self.weights)
            object.__setattr__(self, "weights", table)
            for pair, pmf in pmfs.items():
                drift = abs(mutual_information(pmf) - float(table[pair]))
                if drift > WEIGHT_MATCH_TOLERANCE:
                    raise ValueError(
                        f"pmf for pair {pair} disagrees with its weight "
                        f"by {drift:.3g} bits"
                    )

    @classmethod
    def from_weights(
        cls,
        m: int,
        weights: Mapping[Pair, object],
        pmfs: Mapping[Pair, PairPmf] | None = None,
    ) -> "PinModel":
        return cls(m=m, weights=dict(weights), pmfs=dict(pmfs or {}))

    @classmethod
    def from_pmfs(cls, m: int, pmfs: Mapping[Pair, PairPmf]) -> "PinModel":
        return cls(m=m, weights=None, pmfs=dict(pmfs))

    @property
    def exact(self) -> bool:
        return self.weights is not None

    def require_exact(self, operation: str) -> None:
        if not self.exact:
            raise UnsupportedModeError(
                f"{operation} needs exact rational weights; "
                "this model is float-mode (pmf-backed)"
            )

    def weight(self, i: int, j: int) -> Fraction:
        self.require_exact("rational weight lookup")
        assert self.weights is not None
        return self.weights[canonical_pair(i, j)]

    def mi(self, i: int, j: int) -> float:
        """Pairwise weight as a float, valid in either mode."""
        pair = canonical_pair(i, j)
        if self.weights is not None:
            return float(self.weights[pair])
        pmf = self.pmfs.get(pair)
        return mutual_information(pmf) if pmf is not None else 0.0

    def pmf(self, i: int, j: int) -> PairPmf | None:
        return self.pmfs.get(canonical_pair(i, j))

    def pairs(self) -> Iterator[Pair]:
        return all_pairs(self.m)

    def scaled(self, factor: Fraction) -> "PinModel":
        """Model with every weight multiplied by a positive rational."""
        self.require_exact("weight scaling")
        assert self.weights is not None
        if factor <= 0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        return PinModel.from_weights(
            self.m, {pair: w * factor for pair, w in self.weights.items()}
        )


@dataclass(frozen=True)
class Multigraph:
    """Integer edge multiplicities on terminals ``1..m``, no self-loops.

    Connectivity is checked per-query, not at construction: disconnected
    inputs are legal and simply pack zero trees.
    """

    m: int
    multiplicities: Mapping[Pair, int]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"need at least one vertex, got m={self.m}")
        table: dict[Pair, int] = {pair: 0 for pair in all_pairs(self.m)}
        for (i, j), count in self.multiplicities.items():
            pair = canonical_pair(i, j)
            if pair[1] > self.m:
                raise ValueError(f"pair {pair} outside vertices 1..{self.m}")
            if count < 0:
                raise ValueError(f"negative multiplicity for {pair}: {count}")
            table[pair] = int(count)
        object.__setattr__(self, "multiplicities", table)

    def multiplicity(self, i: int, j: int) -> int:
        return self.multiplicities[canonical_pair(i, j)]

    def total_edges(self) -> int:
        return sum(self.multiplicities.values())

    def support_pairs(self) -> tuple[Pair, ...]:
        return tuple(p for p in sorted(self.multiplicities) if self.multiplicities[p])

    def edge_refs(self) -> tuple[EdgeRef, ...]:
        """All edges in canonical order: sorted pair, then copy 0..e_ij-1."""
        refs: list[EdgeRef] = []
        for (i, j) in sorted(self.multiplicities):
            refs.extend((i, j, c) for c in range(self.multiplicities[(i, j)]))
        return tuple(refs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        out = []
        for (i, j), count in self.multiplicities.items():
            if count and v in (i, j):
                out.append(j if v == i else i)
        return tuple(sorted(out))


def base_scale(model: PinModel) -> int:
    """Least n making every scaled weight integral; valid scales are its
    positive multiples."""
    model.require_exact("base scale")
    assert model.weights is not None
    return math.lcm(*(w.denominator for w in model.weights.values()))


def realize_multigraph(model: PinModel, n: int) -> Multigraph:
    """Multigraph with exactly ``n * weight`` parallel edges per pair."""
    model.require_exact("multigraph realization")
    assert model.weights is not None
    n0 = base_scale(model)
    if n <= 0 or n % n0 != 0:
        raise InvalidScaleError(
            f"scale {n} is not a positive multiple of the base scale {n0}"
        )
    counts = {pair: int(w * n) for pair, w in model.weights.items()}
    return Multigraph(m=model.m, multiplicities=counts)


def format_rational(value: Fraction) -> str:
    """Render a rational as ``p/q``, or just ``p`` for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: object) -> Fraction:
    """Parse an integer or a ``p/q`` / ``p`` string into a Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"expected a rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        parts = text.strip().split("/")
        try:
            if len(parts) == 1:
                return Fraction(int(parts[0]))
            if len(parts) == 2:
                return Fraction(int(parts[0]), int(parts[1]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {text!r}") from exc
    raise ValueError(f"expected an integer or 'p/q' string, got {text!r}")
