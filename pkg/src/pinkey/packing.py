"""Explicit tree packings in multigraphs.

Three packing routes, each certified by an independent count:

* edge-disjoint paths between two vertices, from a max-flow whose value is
  the minimum cut (augmenting-path search on the collapsed integer-capacity
  graph, then flow decomposition into unit paths);
* edge-disjoint spanning trees via matroid-union augmentation (grow k
  forests simultaneously, swapping along exchange chains), with k taken
  from the partition-count formula as the termination certificate;
* Steiner packings for intermediate target sets: exact by depth-first
  search over edge-disjoint trees with a partition-shaped bound for
  pruning (capped, the problem is NP-hard), or a deterministic
  shortest-path greedy that lower-bounds the optimum.

Edge copies are assigned canonically (sorted pair, then 0..e_ij-1), so
packings are reproducible run to run.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidPackingError, InvalidTreeError, SizeLimitError
from .model import EdgeRef, Multigraph, Pair, PinModel, TerminalSet, realize_multigraph
from .partitions import nash_williams_count

STEINER_EXACT_EDGE_CAP = 24


@dataclass(frozen=True)
class Tree:
    """A tree subgraph, edges named as (i, j, copy) into the parallel edges."""

    edges: tuple[EdgeRef, ...]

    def __post_init__(self) -> None:
        edges = tuple(sorted(self.edges))
        object.__setattr__(self, "edges", edges)
        if not edges:
            raise InvalidTreeError("a tree needs at least one edge")
        if len(set(edges)) != len(edges):
            raise InvalidTreeError("duplicate edge in tree")
        for (i, j, copy) in edges:
            if not (1 <= i < j) or copy < 0:
                raise InvalidTreeError(f"malformed edge ({i}, {j}, {copy})")
        vertices = self.vertices()
        if len(vertices) != len(edges) + 1 or not self._connected(vertices):
            raise InvalidTreeError("edges do not form a connected acyclic graph")

    def vertices(self) -> tuple[int, ...]:
        seen = set()
        for (i, j, _) in self.edges:
            seen.add(i)
            seen.add(j)
        return tuple(sorted(seen))

    def pairs(self) -> tuple[Pair, ...]:
        return tuple((i, j) for (i, j, _) in self.edges)

    def _connected(self, vertices: tuple[int, ...]) -> bool:
        adjacency: dict[int, list[int]] = {v: [] for v in vertices}
        for (i, j, _) in self.edges:
            adjacency[i].append(j)
            adjacency[j].append(i)
        stack = [vertices[0]]
        seen = {vertices[0]}
        while stack:
            for w in adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(vertices)


@dataclass(frozen=True)
class TreePacking:
    """Pairwise edge-disjoint trees, each spanning the target set."""

    graph: Multigraph
    target: TerminalSet
    trees: tuple[Tree, ...]

    def __post_init__(self) -> None:
        self.target.validate_within(self.graph.m)
        used: set[EdgeRef] = set()
        for index, tree in enumerate(self.trees):
            vertices = set(tree.vertices())
            missing = [t for t in self.target if t not in vertices]
            if missing:
                raise InvalidPackingError(
                    f"tree {index} misses target terminals {missing}"
                )
            for edge in tree.edges:
                i, j, copy = edge
                if copy >= self.graph.multiplicity(i, j):
                    raise InvalidPackingError(
                        f"tree {index} uses copy {copy} of pair ({i}, {j}) "
                        f"but the graph has {self.graph.multiplicity(i, j)}"
                    )
                if edge in used:
                    raise InvalidPackingError(f"edge {edge} used twice")
                used.add(edge)

    @property
    def count(self) -> int:
        return len(self.trees)


# ---------------------------------------------------------------------------
# Paths between two terminals (max-flow / min-cut)
# ---------------------------------------------------------------------------


def _max_flow(graph: Multigraph, s: int, t: int) -> tuple[int, dict]:
    """Integer max flow s->t; returns (value, net flow as {(u, v): units})."""
    residual: dict[int, dict[int, int]] = {v: {} for v in range(1, graph.m + 1)}
    for (i, j), count in graph.multiplicities.items():
        if count:
            residual[i][j] = count
            residual[j][i] = count
    value = 0
    while True:
        parent: dict[int, int | None] = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in sorted(residual[u]):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            break
        path = []
        v = t
        while parent[v] is not None:
            u = parent[v]
            path.append((u, v))
            v = u
        push = min(residual[u][v] for u, v in path)
        for u, v in path:
            residual[u][v] -= push
            residual[v][u] += push
        value += push
    net: dict[tuple[int, int], int] = {}
    for (i, j), count in graph.multiplicities.items():
        if count:
            sent = count - residual[i][j]
            if sent > 0:
                net[(i, j)] = sent
            elif sent < 0:
                net[(j, i)] = -sent
    return value, net


def min_cut(graph: Multigraph, s: int, t: int) -> int:
    """Minimum number of edges whose removal separates s from t."""
    if s == t:
        raise ValueError("cut endpoints must differ")
    for v in (s, t):
        if not 1 <= v <= graph.m:
            raise ValueError(f"vertex {v} outside 1..{graph.m}")
    return _max_flow(graph, s, t)[0]


def _walk_unit_path(flow: dict[int, dict[int, int]], s: int, t: int) -> list[int]:
    """One unit s->t path along positive flow; cancels cycles as it walks."""
    path = [s]
    position = {s: 0}
    while path[-1] != t:
        v = path[-1]
        w = min(u for u, units in flow[v].items() if units > 0)
        if w in position:
            cycle = path[position[w]:] + [w]
            for a, b in zip(cycle, cycle[1:]):
                flow[a][b] -= 1
            for dropped in path[position[w] + 1:]:
                del position[dropped]
            del path[position[w] + 1:]
            continue
        position[w] = len(path)
        path.append(w)
    for a, b in zip(path, path[1:]):
        flow[a][b] -= 1
    return path


def max_disjoint_paths(graph: Multigraph, s: int, t: int) -> TreePacking:
    """A maximum collection of edge-disjoint s-t paths; its size equals
    the minimum cut."""
    if s == t:
        raise ValueError("path endpoints must differ")
    target = TerminalSet.of(s, t)
    target.validate_within(graph.m)
    value, net = _max_flow(graph, s, t)
    flow: dict[int, dict[int, int]] = {v: {} for v in range(1, graph.m + 1)}
    for (u, v), units in net.items():
        flow[u][v] = units
    used: Counter = Counter()
    trees = []
    for _ in range(value):
        walk = _walk_unit_path(flow, s, t)
        edges = []
        for a, b in zip(walk, walk[1:]):
            pair = (a, b) if a < b else (b, a)
            edges.append((pair[0], pair[1], used[pair]))
            used[pair] += 1
        trees.append(Tree(tuple(edges)))
    return TreePacking(graph=graph, target=target, trees=tuple(trees))


# ---------------------------------------------------------------------------
# Spanning trees (matroid union)
# ---------------------------------------------------------------------------


class _Forest:
    """Mutable forest on 1..m; at most one edge per vertex pair."""

    __slots__ = ("adjacency",)

    def __init__(self) -> None:
        self.adjacency: dict[int, dict[int, EdgeRef]] = {}

    def edges(self) -> list[EdgeRef]:
        out = []
        for v, nbrs in self.adjacency.items():
            for w, edge in nbrs.items():
                if v < w:
                    out.append(edge)
        return out

    def path_edges(self, u: int, v: int) -> list[EdgeRef] | None:
        """Edges of the unique u-v path, or None if disconnected."""
        if u not in self.adjacency or v not in self.adjacency:
            return None
        parent: dict[int, tuple[int, EdgeRef] | None] = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for w in sorted(self.adjacency[x]):
                if w not in parent:
                    parent[w] = (x, self.adjacency[x][w])
                    queue.append(w)
        if v not in parent:
            return None
        path = []
        x = v
        while parent[x] is not None:
            prev, edge = parent[x]  # type: ignore[misc]
            path.append(edge)
            x = prev
        return path

    def add(self, edge: EdgeRef) -> None:
        i, j = edge[0], edge[1]
        if self.path_edges(i, j) is not None:
            raise AssertionError(f"adding {edge} would close a cycle")
        self.adjacency.setdefault(i, {})[j] = edge
        self.adjacency.setdefault(j, {})[i] = edge

    def remove(self, edge: EdgeRef) -> None:
        i, j = edge[0], edge[1]
        if self.adjacency.get(i, {}).get(j) != edge:
            raise AssertionError(f"edge {edge} is not in this forest")
        del self.adjacency[i][j]
        del self.adjacency[j][i]


def _augment(
    forests: list[_Forest], new_edge: EdgeRef, owner: dict[EdgeRef, int]
) -> bool:
    """Insert new_edge into the forest union via exchange chains.

    Breadth-first labeling over forest edges; when some labeled edge fits
    directly into a forest, swaps are unwound back to new_edge.  Returns
    False when the edge lies in the span of every forest (a full clump).
    """
    parent: dict[EdgeRef, tuple[EdgeRef, int] | None] = {new_edge: None}
    queue = deque([new_edge])
    while queue:
        x = queue.popleft()
        for index, forest in enumerate(forests):
            if owner.get(x) == index:
                continue
            path = forest.path_edges(x[0], x[1])
            if path is None:
                current = x
                forests[index].add(current)
                owner[current] = index
                entry = parent[current]
                while entry is not None:
                    prev_edge, holder = entry
                    forests[holder].remove(current)
                    forests[holder].add(prev_edge)
                    owner[prev_edge] = holder
                    current = prev_edge
                    entry = parent[current]
                return True
            for y in path:
                if y not in parent:
                    parent[y] = (x, index)
                    queue.append(y)
    return False


def spanning_packing(graph: Multigraph) -> TreePacking:
    """A maximum packing of edge-disjoint spanning trees; its size equals
    the partition-count formula."""
    if graph.m < 2:
        raise ValueError("spanning packing needs at least two vertices")
    target = TerminalSet.full(graph.m)
    certified = nash_williams_count(graph)
    if certified == 0:
        return TreePacking(graph=graph, target=target, trees=())
    forests = [_Forest() for _ in range(certified)]
    owner: dict[EdgeRef, int] = {}
    goal = certified * (graph.m - 1)
    total = 0
    dead_pairs: set[Pair] = set()
    for edge in graph.edge_refs():
        if total == goal:
            break
        pair = (edge[0], edge[1])
        if pair in dead_pairs:
            continue  # parallel copies share a span; once blocked, always blocked
        if _augment(forests, edge, owner):
            total += 1
        else:
            dead_pairs.add(pair)
    if total != goal:
        raise AssertionError(
            f"matroid union packed {total} edges, expected {goal}"
        )
    trees = tuple(Tree(tuple(sorted(f.edges()))) for f in forests)
    return TreePacking(graph=graph, target=target, trees=trees)


# ---------------------------------------------------------------------------
# Steiner packings for intermediate target sets
# ---------------------------------------------------------------------------


def _support_adjacency(pairs: Iterable[Pair]) -> dict[int, list[int]]:
    adjacency: dict[int, list[int]] = {}
    for (i, j) in pairs:
        adjacency.setdefault(i, []).append(j)
        adjacency.setdefault(j, []).append(i)
    for v in adjacency:
        adjacency[v].sort()
    return adjacency


def _approx_steiner_tree(
    caps: Mapping[Pair, int], target: TerminalSet
) -> tuple[Pair, ...] | None:
    """One cheap tree over pairs with remaining capacity, or None when the
    target is no longer connected.  Nearest-terminal shortest paths with
    lexicographic tie-breaks keep the choice deterministic."""
    support = [p for p, c in caps.items() if c > 0]
    adjacency = _support_adjacency(support)
    root = min(target)
    reachable = {root}
    stack = [root]
    while stack:
        for w in adjacency.get(stack.pop(), ()):
            if w not in reachable:
                reachable.add(w)
                stack.append(w)
    if any(t not in reachable for t in target):
        return None

    in_tree = {root}
    tree_pairs: set[Pair] = set()
    pending = [t for t in target if t != root]
    while pending:
        # BFS layers from the current tree
        dist = {v: 0 for v in in_tree}
        queue = deque(sorted(in_tree))
        while queue:
            v = queue.popleft()
            for w in adjacency.get(v, ()):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        goal = min(pending, key=lambda t: (dist[t], t))
        path = [goal]
        while dist[path[-1]] > 0:
            v = path[-1]
            step = min(
                w for w in adjacency[v] if dist.get(w, -1) == dist[v] - 1
            )
            path.append(step)
        path.reverse()
        for a, b in zip(path, path[1:]):
            tree_pairs.add((a, b) if a < b else (b, a))
            in_tree.add(b)
        pending = [t for t in pending if t not in in_tree]

    # prune any non-target leaf chains (defensive; paths end at terminals)
    while True:
        degree: Counter = Counter()
        for (i, j) in tree_pairs:
            degree[i] += 1
            degree[j] += 1
        dead = [
            (i, j)
            for (i, j) in tree_pairs
            if (degree[i] == 1 and i not in target)
            or (degree[j] == 1 and j not in target)
        ]
        if not dead:
            break
        tree_pairs.difference_update(dead)
    return tuple(sorted(tree_pairs))


def _assign_copies(
    graph: Multigraph, target: TerminalSet, chosen: list[tuple[Pair, ...]]
) -> TreePacking:
    used: Counter = Counter()
    trees = []
    for pairs in chosen:
        edges = []
        for pair in pairs:
            edges.append((pair[0], pair[1], used[pair]))
            used[pair] += 1
        trees.append(Tree(tuple(edges)))
    return TreePacking(graph=graph, target=target, trees=tuple(trees))


def _greedy_steiner(graph: Multigraph, target: TerminalSet) -> TreePacking:
    caps = dict(graph.multiplicities)
    chosen: list[tuple[Pair, ...]] = []
    while True:
        tree_pairs = _approx_steiner_tree(caps, target)
        if tree_pairs is None:
            break
        for pair in tree_pairs:
            caps[pair] -= 1
        chosen.append(tree_pairs)
    return _assign_copies(graph, target, chosen)


def _steiner_tree_candidates(
    support: Iterable[Pair], target: TerminalSet, m: int
) -> list[tuple[Pair, ...]]:
    """Every minimal Steiner tree over the support pairs, each exactly once.

    Trees grow from the least target terminal one leaf at a time; banning
    earlier siblings before each recursive call makes the enumeration
    duplicate-free.  Minimality (every leaf a target) is forced because a
    tree already covering the target cannot shed a non-target leaf by
    growing further.
    """
    pair_neighbors: dict[int, list[Pair]] = {}
    for pair in sorted(support):
        pair_neighbors.setdefault(pair[0], []).append(pair)
        pair_neighbors.setdefault(pair[1], []).append(pair)
    targets = set(target)
    root = min(target)
    found: list[tuple[Pair, ...]] = []

    def rec(tree: frozenset[Pair], vertices: frozenset[int],
            banned: frozenset[Pair]) -> None:
        if targets <= vertices:
            degree: Counter = Counter()
            for (i, j) in tree:
                degree[i] += 1
                degree[j] += 1
            if all(v in targets for v, d in degree.items() if d == 1):
                found.append(tuple(sorted(tree)))
            return
        extensions = sorted(
            {
                pair
                for v in vertices
                for pair in pair_neighbors.get(v, ())
                if pair not in banned
                and ((pair[0] in vertices) != (pair[1] in vertices))
            }
        )
        blocked = banned
        for pair in extensions:
            new_vertex = pair[1] if pair[0] in vertices else pair[0]
            rec(tree | {pair}, vertices | {new_vertex}, blocked)
            blocked = blocked | {pair}

    rec(frozenset(), frozenset({root}), frozenset())
    return sorted(found)


def _bound_partitions(m: int, target: TerminalSet) -> list[tuple[tuple[int, ...], int]]:
    """Partitions used for the packing upper bound during exact search.

    Any subset of qualifying partitions yields a valid (weaker) bound, so
    for larger m only the two-atom splits are used.
    """
    from .partitions import enumerate_partitions

    if m <= 8:
        return [
            (p.assignment, p.size)
            for p in enumerate_partitions(m, target, cap=m)
        ]
    amask = target.mask()
    out = []
    for mask in range(1, 1 << (m - 1)):  # sides up to complement symmetry
        if (mask & amask) and ((~mask) & amask):
            assignment = tuple(0 if mask >> t & 1 else 1 for t in range(m))
            first = assignment[0]
            canon = tuple(a ^ first for a in assignment)
            out.append((canon, 2))
    return out


def _packing_upper_bound(
    caps: Mapping[Pair, int],
    partitions_data: list[tuple[tuple[int, ...], int]],
) -> int:
    best: int | None = None
    for assignment, size in partitions_data:
        crossing = 0
        for (i, j), count in caps.items():
            if count and assignment[i - 1] != assignment[j - 1]:
                crossing += count
        value = crossing // (size - 1)
        if best is None or value < best:
            best = value
            if best == 0:
                break
    return 0 if best is None else best


def _exact_steiner(
    graph: Multigraph, target: TerminalSet, edge_cap: int
) -> TreePacking:
    total = graph.total_edges()
    if total > edge_cap:
        raise SizeLimitError(
            f"exact Steiner packing is capped at {edge_cap} edges; "
            f"this graph has {total} (use greedy mode)"
        )
    candidates = _steiner_tree_candidates(graph.support_pairs(), target, graph.m)
    partitions_data = _bound_partitions(graph.m, target)
    caps = dict(graph.multiplicities)

    greedy = _greedy_steiner(graph, target)
    best_count = greedy.count
    best_choice = [tuple(sorted(set(t.pairs()))) for t in greedy.trees]
    chosen: list[int] = []

    def dfs(start: int, count: int) -> None:
        nonlocal best_count, best_choice
        if count + _packing_upper_bound(caps, partitions_data) <= best_count:
            return
        for index in range(start, len(candidates)):
            pairs = candidates[index]
            if all(caps[p] > 0 for p in pairs):
                for p in pairs:
                    caps[p] -= 1
                chosen.append(index)
                if count + 1 > best_count:
                    best_count = count + 1
                    best_choice = [candidates[k] for k in chosen]
                dfs(index, count + 1)
                chosen.pop()
                for p in pairs:
                    caps[p] += 1

    dfs(0, 0)
    return _assign_copies(graph, target, best_choice)


def steiner_packing(
    graph: Multigraph,
    target: TerminalSet,
    mode: str = "exact",
    edge_cap: int = STEINER_EXACT_EDGE_CAP,
) -> TreePacking:
    """Edge-disjoint trees spanning the target set.

    Two-terminal targets reduce to path packing and full targets to
    spanning-tree packing (both exact in either mode).  In between, exact
    mode searches exhaustively under the edge cap while greedy mode returns
    a valid packing of at most the maximum size.
    """
    target.validate_within(graph.m)
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown packing mode {mode!r}")
    if len(target) == 2:
        return max_disjoint_paths(graph, target.members[0], target.members[1])
    if len(target) == graph.m:
        return spanning_packing(graph)
    if mode == "greedy":
        return _greedy_steiner(graph, target)
    return _exact_steiner(graph, target, edge_cap)


def steiner_rate_lower_bound(
    model: PinModel,
    target: TerminalSet,
    n: int,
    mode: str = "exact",
    edge_cap: int = STEINER_EXACT_EDGE_CAP,
) -> Fraction:
    """Packing count over blocklength at scale n; in exact mode this never
    exceeds the capacity."""
    graph = realize_multigraph(model, n)
    packing = steiner_packing(graph, target, mode=mode, edge_cap=edge_cap)
    return Fraction(packing.count, n)
