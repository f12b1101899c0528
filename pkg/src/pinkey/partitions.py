"""Partition bounds: the crossing-weight upper bound and tree-packing counts.

Partitions of the terminals stream out as restricted-growth strings, so
enumeration is canonical and duplicate-free without materializing the whole
Bell-number family.  Only partitions with at least two atoms are considered
(the one-atom partition would divide by zero), and for a target set A only
partitions whose every atom meets A qualify.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import SizeLimitError
from .model import Multigraph, PinModel, TerminalSet

DEFAULT_TERMINAL_CAP = 12


@dataclass(frozen=True)
class Partition:
    """Canonical partition: ``assignment[t]`` is the atom of terminal t+1,
    atoms numbered by first appearance."""

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        seen = 0
        for k, atom in enumerate(self.assignment):
            if atom > seen:
                raise ValueError(
                    f"assignment {self.assignment} is not in canonical "
                    f"restricted-growth form at position {k}"
                )
            if atom == seen:
                seen += 1
        if seen < 2:
            raise ValueError("a partition needs at least two atoms")

    @property
    def size(self) -> int:
        return max(self.assignment) + 1

    def atoms(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.size)]
        for t, atom in enumerate(self.assignment):
            out[atom].append(t + 1)
        return tuple(tuple(a) for a in out)

    def crosses(self, i: int, j: int) -> bool:
        return self.assignment[i - 1] != self.assignment[j - 1]


def enumerate_partitions(
    m: int, target: TerminalSet, cap: int = DEFAULT_TERMINAL_CAP
) -> Iterator[Partition]:
    """Stream partitions of 1..m with >= 2 atoms, every atom meeting the
    target; atoms that can no longer be fixed by later target terminals
    prune the search early."""
    target.validate_within(m)
    if m > cap:
        raise SizeLimitError(
            f"m={m} exceeds the partition-enumeration cap {cap}"
        )
    in_target = [t in target for t in range(1, m + 1)]
    # target terminals strictly after position k
    remaining = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        remaining[k] = remaining[k + 1] + (1 if in_target[k] else 0)

    assignment = [0] * m

    def rec(k: int, natoms: int, unfixed: int) -> Iterator[Partition]:
        # unfixed = atoms opened so far that contain no target terminal
        if k == m:
            if natoms >= 2 and unfixed == 0:
                yield Partition(tuple(assignment))
            return
        fixes = in_target[k]
        for atom in range(natoms + 1):
            opening = atom == natoms
            if opening:
                new_unfixed = unfixed + (0 if fixes else 1)
            else:
                # does this atom currently lack a target terminal?
                lacks = not any(
                    in_target[t] for t in range(k) if assignment[t] == atom
                )
                new_unfixed = unfixed - (1 if lacks and fixes else 0)
            if new_unfixed > remaining[k + 1]:
                continue  # not enough target terminals left to fix every atom
            assignment[k] = atom
            yield from rec(k + 1, natoms + (1 if opening else 0), new_unfixed)

    yield from rec(0, 0, 0)


def crossing_weight(model: PinModel, partition: Partition) -> Fraction:
    """Total weight of pairs whose endpoints lie in different atoms."""
    model.require_exact("crossing weight")
    if len(partition.assignment) != model.m:
        raise ValueError("partition and model have different terminal counts")
    assert model.weights is not None
    return sum(
        (w for (i, j), w in model.weights.items() if partition.crosses(i, j)),
        Fraction(0),
    )


def best_partition(
    model: PinModel, target: TerminalSet, cap: int = DEFAULT_TERMINAL_CAP
) -> tuple[Fraction, Partition]:
    """Minimum of crossing-weight / (atoms - 1) with a minimizing partition."""
    model.require_exact("partition bound")
    best: tuple[Fraction, Partition] | None = None
    for partition in enumerate_partitions(model.m, target, cap=cap):
        value = crossing_weight(model, partition) / (partition.size - 1)
        if best is None or value < best[0]:
            best = (value, partition)
    assert best is not None  # the all-singletons partition always qualifies
    return best


def upper_bound(
    model: PinModel, target: TerminalSet, cap: int = DEFAULT_TERMINAL_CAP
) -> Fraction:
    """Capacity upper bound: min over qualifying partitions of the
    normalized crossing weight."""
    return best_partition(model, target, cap=cap)[0]


def spanning_rate(model: PinModel, cap: int = DEFAULT_TERMINAL_CAP) -> Fraction:
    """Upper bound with A = all terminals; equals the supremum of
    spanning-tree packing rates over valid scales."""
    return upper_bound(model, TerminalSet.full(model.m), cap=cap)


def crossing_edges(graph: Multigraph, partition: Partition) -> int:
    if len(partition.assignment) != graph.m:
        raise ValueError("partition and graph have different vertex counts")
    return sum(
        count
        for (i, j), count in graph.multiplicities.items()
        if count and partition.crosses(i, j)
    )


def nash_williams_count(
    graph: Multigraph, cap: int = DEFAULT_TERMINAL_CAP
) -> int:
    """Exact maximum number of edge-disjoint spanning trees, by the
    min over partitions of floor(crossing edges / (atoms - 1))."""
    if graph.m < 2:
        return 0
    best: int | None = None
    for partition in enumerate_partitions(graph.m, TerminalSet.full(graph.m),
                                          cap=cap):
        value = crossing_edges(graph, partition) // (partition.size - 1)
        if best is None or value < best:
            best = value
            if best == 0:
                break
    assert best is not None
    return best
