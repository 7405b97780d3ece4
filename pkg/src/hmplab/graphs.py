"""Simple undirected graphs: girth computation, bipartite structure, and
decomposition of regular bipartite graphs into perfect matchings.

All algorithms here are deterministic: vertices are scanned in ascending
order and adjacency lists are kept sorted, so repeated runs produce the same
matchings in the same order.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n."""

    n: int
    edges: FrozenSet[Edge]
    bipartition: Optional[Tuple[FrozenSet[int], FrozenSet[int]]] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge ({u},{v}) is not normalized within 1..{self.n}")
        if self.bipartition is not None:
            left, right = self.bipartition
            if left & right:
                raise ValueError("bipartition sides overlap")
            if left | right != set(range(1, self.n + 1)):
                raise ValueError("bipartition must cover all vertices")
            for u, v in self.edges:
                if (u in left) == (v in left):
                    raise ValueError(f"edge ({u},{v}) does not cross the bipartition")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        bipartition: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
    ) -> "Graph":
        norm = frozenset(normalize_edge(u, v) for u, v in edges)
        bip = None
        if bipartition is not None:
            bip = (frozenset(bipartition[0]), frozenset(bipartition[1]))
        return cls(n=n, edges=norm, bipartition=bip)

    @cached_property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        adj: Dict[int, List[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(nb)) for v, nb in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def regular_degree(self) -> Optional[int]:
        """Common degree if the graph is regular, else None."""
        degrees = {len(nb) for nb in self.adjacency.values()}
        if len(degrees) == 1:
            return degrees.pop()
        return None


def two_coloring(g: Graph) -> Optional[Tuple[FrozenSet[int], FrozenSet[int]]]:
    """BFS 2-coloring; None if some component has an odd cycle."""
    color: Dict[int, int] = {}
    for start in range(1, g.n + 1):
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    left = frozenset(v for v, c in color.items() if c == 0)
    right = frozenset(v for v, c in color.items() if c == 1)
    return (left, right)


def girth(g: Graph) -> Optional[int]:
    """Length of a shortest cycle, or None for a forest.

    BFS from every root; for each non-tree adjacency (u, w) seen from u the
    candidate cycle length is dist[u] + dist[w] + 1. Per root this can
    overshoot, but the minimum over all roots is exact because a root on a
    shortest cycle realizes its length.
    """
    best: Optional[int] = None
    for root in range(1, g.n + 1):
        dist = {root: 0}
        parent = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and dist[u] > best // 2:
                break
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cand = dist[u] + dist[w] + 1
                    if best is None or cand < best:
                        best = cand
    return best


def verify_girth(g: Graph, d: int) -> bool:
    """True iff the graph has no cycle of length <= 2d."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    got = girth(g)
    return got is None or got > 2 * d


def edge_count_bound(n: int, d: int) -> float:
    """Extremal bound on edges for graphs with no cycle of length <= 2d."""
    return 90.0 * d * n ** (1.0 + 1.0 / d)


def maximum_bipartite_matching(
    left: List[int], right: List[int], adjacency: Dict[int, List[int]]
) -> Dict[int, int]:
    """Hopcroft-Karp maximum matching; returns {left vertex: right vertex}.

    Left vertices and adjacency lists are processed in ascending order, so
    the result is deterministic with ties going to the lowest vertex index.
    """
    INF = math.inf
    match_l: Dict[int, Optional[int]] = {u: None for u in left}
    match_r: Dict[int, Optional[int]] = {v: None for v in right}
    dist: Dict[Optional[int], float] = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if match_l[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        dist[None] = INF
        while queue:
            u = queue.popleft()
            if dist[u] < dist[None]:
                for v in adjacency[u]:
                    nxt = match_r[v]
                    if dist.get(nxt, INF) == INF:
                        dist[nxt] = dist[u] + 1
                        if nxt is not None:
                            queue.append(nxt)
        return dist[None] != INF

    def dfs(u: Optional[int]) -> bool:
        if u is None:
            return True
        for v in adjacency[u]:
            nxt = match_r[v]
            if dist.get(nxt, INF) == dist[u] + 1 and dfs(nxt):
                match_r[v] = u
                match_l[u] = v
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in left:
            if match_l[u] is None:
                dfs(u)
    return {u: v for u, v in match_l.items() if v is not None}


def decompose_regular_bipartite(g: Graph) -> Tuple[Tuple[Edge, ...], ...]:
    """Split a Delta-regular bipartite graph into Delta perfect matchings.

    Repeatedly extracts a maximum matching (necessarily perfect while the
    remainder stays regular) and deletes its edges. Edges within a matching
    are sorted; the matching order is determined by the deterministic search.
    """
    bip = g.bipartition if g.bipartition is not None else two_coloring(g)
    if bip is None:
        raise ValueError("graph is not bipartite")
    delta = g.regular_degree
    if delta is None or delta < 1:
        raise ValueError("graph is not regular with positive degree")
    left = sorted(bip[0])
    right = sorted(bip[1])
    if len(left) != len(right):
        raise ValueError("bipartition sides differ in size; no perfect matching")

    adjacency: Dict[int, List[int]] = {u: [] for u in left}
    for u, v in sorted(g.edges):
        if u in adjacency:
            adjacency[u].append(v)
        else:
            adjacency[v].append(u)
    for u in adjacency:
        adjacency[u].sort()

    matchings: List[Tuple[Edge, ...]] = []
    for _ in range(delta):
        match = maximum_bipartite_matching(left, right, adjacency)
        if len(match) != len(left):
            raise ValueError("no perfect matching found; graph was not regular")
        edges = tuple(sorted(normalize_edge(u, v) for u, v in match.items()))
        matchings.append(edges)
        for u, v in match.items():
            adjacency[u].remove(v)
    if any(adjacency[u] for u in adjacency):
        raise ValueError("edges left over after decomposition; graph was not regular")
    return tuple(matchings)


def random_regular_bipartite(n: int, degree: int, rng) -> Graph:
    """Random degree-regular bipartite graph on 1..n (left half 1..n/2).

    Built as a union of `degree` random permutation matchings, resampling any
    permutation that would duplicate an edge.
    """
    from .seeding import as_rng

    rng = as_rng(rng)
    if n < 2 or n % 2 != 0:
        raise ValueError(f"n must be even and >= 2, got {n}")
    half = n // 2
    if not 1 <= degree <= half:
        raise ValueError(f"degree must be in 1..{half}, got {degree}")
    left = list(range(1, half + 1))
    right = list(range(half + 1, n + 1))
    edges: set = set()
    for _ in range(degree):
        for _attempt in range(1000):
            perm = right[:]
            rng.shuffle(perm)
            new = [(left[i], perm[i]) for i in range(half)]
            if all(e not in edges for e in new):
                edges.update(new)
                break
        else:
            raise ValueError(
                f"failed to stack {degree} disjoint permutation matchings at n={n}"
            )
    return Graph.from_edges(n, edges, bipartition=(left, right))
