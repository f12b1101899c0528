"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the production code paths: cuts by
exhaustive bipartition enumeration, partitions via a plain recursive
builder, Steiner packing by undirected brute force over all tree subsets.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from pinkey import Multigraph, PairPmf, PinModel, TerminalSet


def random_exact_model(
    rng: random.Random,
    m: int | None = None,
    max_num: int = 8,
    max_den: int = 4,
    zero_chance: float = 0.25,
) -> PinModel:
    if m is None:
        m = rng.randint(2, 6)
    weights = {}
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            if rng.random() < zero_chance:
                continue
            weights[(i, j)] = Fraction(rng.randint(1, max_num),
                                       rng.randint(1, max_den))
    return PinModel.from_weights(m, weights)


def random_small_model(rng: random.Random, m: int) -> PinModel:
    """Sparse model with tiny weights, for packing tests that realize
    multigraphs of bounded edge count."""
    choices = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(1)]
    weights = {}
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            weights[(i, j)] = rng.choice(choices)
    if all(w == 0 for w in weights.values()):
        weights[(1, 2)] = Fraction(1)
    return PinModel.from_weights(m, weights)


def random_multigraph(
    rng: random.Random, max_m: int = 7, max_mult: int = 5
) -> Multigraph:
    m = rng.randint(2, max_m)
    counts = {}
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            counts[(i, j)] = rng.randint(0, max_mult)
    return Multigraph(m, counts)


def random_pmf(rng: random.Random, max_alpha: int = 3) -> PairPmf:
    rows = rng.randint(1, max_alpha)
    cols = rng.randint(1, max_alpha)
    raw = [[rng.random() for _ in range(cols)] for _ in range(rows)]
    total = sum(sum(row) for row in raw)
    return PairPmf.from_rows([[p / total for p in row] for row in raw])


def random_pmf_model(rng: random.Random, m: int = 3, max_alpha: int = 3) -> PinModel:
    pmfs = {}
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            pmfs[(i, j)] = random_pmf(rng, max_alpha)
    return PinModel.from_pmfs(m, pmfs)


def random_terminal_set(rng: random.Random, m: int, size: int | None = None) -> TerminalSet:
    if size is None:
        size = rng.randint(2, m)
    return TerminalSet(tuple(rng.sample(range(1, m + 1), size)))


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def brute_min_cut(graph: Multigraph, s: int, t: int) -> int:
    """Minimum crossing count over every bipartition separating s from t."""
    others = [v for v in range(1, graph.m + 1) if v not in (s, t)]
    best = None
    for picks in itertools.product((0, 1), repeat=len(others)):
        side = {s}
        for v, pick in zip(others, picks):
            if pick:
                side.add(v)
        crossing = sum(
            count
            for (i, j), count in graph.multiplicities.items()
            if (i in side) != (j in side)
        )
        if best is None or crossing < best:
            best = crossing
    return best if best is not None else 0


def brute_partitions(m: int) -> list[list[set[int]]]:
    """Every partition of 1..m (including the one-atom one), recursively."""
    parts: list[list[set[int]]] = [[]]
    for v in range(1, m + 1):
        grown: list[list[set[int]]] = []
        for partition in parts:
            for k in range(len(partition)):
                copy = [set(a) for a in partition]
                copy[k].add(v)
                grown.append(copy)
            copy = [set(a) for a in partition]
            copy.append({v})
            grown.append(copy)
        parts = grown
    return parts


def brute_nash_williams(graph: Multigraph) -> int:
    best = None
    for partition in brute_partitions(graph.m):
        if len(partition) < 2:
            continue
        atom_of = {}
        for k, atom in enumerate(partition):
            for v in atom:
                atom_of[v] = k
        crossing = sum(
            count
            for (i, j), count in graph.multiplicities.items()
            if atom_of[i] != atom_of[j]
        )
        value = crossing // (len(partition) - 1)
        if best is None or value < best:
            best = value
    return best if best is not None else 0


def _is_tree_over(pairs: tuple[tuple[int, int], ...]) -> bool:
    vertices = {v for pair in pairs for v in pair}
    if len(vertices) != len(pairs) + 1:
        return False
    adjacency: dict[int, list[int]] = {v: [] for v in vertices}
    for (i, j) in pairs:
        adjacency[i].append(j)
        adjacency[j].append(i)
    start = next(iter(vertices))
    stack = [start]
    seen = {start}
    while stack:
        for w in adjacency[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def brute_steiner_packing_count(graph: Multigraph, target: TerminalSet) -> int:
    """Maximum number of edge-disjoint Steiner trees by plain recursion.

    Candidate trees are all pair subsets that form a tree covering the
    target; packing search tries every multiset respecting multiplicities.
    Only usable for very small graphs.
    """
    support = [p for p, c in graph.multiplicities.items() if c]
    targets = set(target)
    candidates = []
    for size in range(1, graph.m):
        for combo in itertools.combinations(support, size):
            vertices = {v for pair in combo for v in pair}
            if targets <= vertices and _is_tree_over(combo):
                candidates.append(combo)

    caps = dict(graph.multiplicities)

    def search(start: int) -> int:
        best = 0
        for k in range(start, len(candidates)):
            combo = candidates[k]
            if all(caps[p] > 0 for p in combo):
                for p in combo:
                    caps[p] -= 1
                best = max(best, 1 + search(k))
                for p in combo:
                    caps[p] += 1
        return best

    return search(0)
