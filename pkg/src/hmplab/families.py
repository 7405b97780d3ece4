"""Families of pairwise edge-disjoint perfect matchings on 1..n.

Three constructions are provided: the full decomposition of the complete
bipartite graph (cyclic shifts), the point-line incidence graph of a
projective plane of prime order (girth 6), and a randomized search for
regular bipartite graphs with no short cycles. Families serialize to a small
JSON document with 1-based vertex pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .graphs import (
    Edge,
    Graph,
    decompose_regular_bipartite,
    girth,
    normalize_edge,
    random_regular_bipartite,
    verify_girth,
)
from .seeding import as_rng

CONSTRUCTIONS = ("complete-bipartite", "projective-plane", "random-girth-search", "explicit-file")


@dataclass(frozen=True)
class MatchingFamily:
    """t pairwise edge-disjoint perfect matchings of 1..n.

    d, when set, records the girth guarantee: the union graph has no cycle of
    length <= 2d. Matchings are 1-indexed everywhere in the package.
    """

    n: int
    matchings: Tuple[Tuple[Edge, ...], ...]
    d: Optional[int] = None
    construction: str = "explicit-file"

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError(f"n must be even and >= 2, got {self.n}")
        if not self.matchings:
            raise ValueError("a family needs at least one matching")
        if len(self.matchings) > self.n:
            raise ValueError(f"family has {len(self.matchings)} matchings, more than n={self.n}")
        seen: set = set()
        for idx, m in enumerate(self.matchings, start=1):
            covered: set = set()
            for u, v in m:
                if not (1 <= u < v <= self.n):
                    raise ValueError(f"matching {idx}: edge ({u},{v}) is not normalized within 1..{self.n}")
                if u in covered or v in covered:
                    raise ValueError(f"matching {idx} is not a matching: vertex reused")
                covered.update((u, v))
                if (u, v) in seen:
                    raise ValueError(f"edge ({u},{v}) appears in two matchings")
                seen.add((u, v))
            if len(covered) != self.n:
                raise ValueError(f"matching {idx} is not perfect: covers {len(covered)} of {self.n} vertices")
        if self.d is not None and self.d < 1:
            raise ValueError(f"d must be >= 1 when set, got {self.d}")
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction tag {self.construction!r}")

    @property
    def t(self) -> int:
        return len(self.matchings)

    @cached_property
    def edge_sets(self) -> Tuple[FrozenSet[Edge], ...]:
        return tuple(frozenset(m) for m in self.matchings)

    def union_graph(self) -> Graph:
        edges = [e for m in self.matchings for e in m]
        return Graph.from_edges(self.n, edges)


def family_from_matchings(
    n: int,
    matchings: Sequence[Sequence[Tuple[int, int]]],
    d: Optional[int] = None,
    construction: str = "explicit-file",
) -> MatchingFamily:
    """Normalize raw edge lists (sort each matching's edges) into a family."""
    norm = tuple(
        tuple(sorted(normalize_edge(u, v) for (u, v) in m)) for m in matchings
    )
    return MatchingFamily(n=n, matchings=norm, d=d, construction=construction)


def cyclic_family(n: int) -> MatchingFamily:
    """All n/2 cyclic-shift matchings of the complete bipartite graph on
    left 1..n/2, right n/2+1..n; shift s pairs left i with right
    n/2 + 1 + ((i - 1 + s) mod n/2)."""
    if n < 2 or n % 2 != 0:
        raise ValueError(f"n must be even and >= 2, got {n}")
    half = n // 2
    matchings = []
    for s in range(half):
        edges = [(i, half + 1 + ((i - 1 + s) % half)) for i in range(1, half + 1)]
        matchings.append(edges)
    return family_from_matchings(n, matchings, d=None, construction="complete-bipartite")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def projective_plane_family(q: int) -> MatchingFamily:
    """Point-line incidence family of the projective plane of prime order q.

    Points and lines are the q*q+q+1 normalized triples over Z/qZ; point P
    lies on line L iff <P, L> = 0 (mod q). The incidence graph is
    (q+1)-regular bipartite with girth 6 on n = 2(q*q+q+1) vertices; its
    decomposition gives q+1 matchings and girth parameter d = 2.

    Only prime q is supported; prime powers would need genuine field
    arithmetic and are rejected with an explanatory error.
    """
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if not _is_prime(q):
        raise ValueError(
            f"q={q} is not prime; only prime orders are supported (prime powers are not)"
        )
    triples: List[Tuple[int, int, int]] = []
    for x in range(q):
        for y in range(q):
            for z in range(q):
                if (x, y, z) == (0, 0, 0):
                    continue
                # normalized representative: first nonzero coordinate is 1
                first = x if x != 0 else (y if y != 0 else z)
                inv = pow(first, q - 2, q) if q > 2 else first
                rep = ((x * inv) % q, (y * inv) % q, (z * inv) % q)
                if rep not in triples:
                    triples.append(rep)
    triples.sort()
    count = q * q + q + 1
    if len(triples) != count:
        raise AssertionError("projective point count mismatch")

    n = 2 * count
    point_vertex = {p: i + 1 for i, p in enumerate(triples)}
    line_vertex = {l: count + i + 1 for i, l in enumerate(triples)}
    edges = []
    for p in triples:
        for l in triples:
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0:
                edges.append((point_vertex[p], line_vertex[l]))
    graph = Graph.from_edges(
        n, edges, bipartition=(range(1, count + 1), range(count + 1, n + 1))
    )
    matchings = decompose_regular_bipartite(graph)
    return MatchingFamily(n=n, matchings=matchings, d=2, construction="projective-plane")


@dataclass(frozen=True)
class GirthSearchResult:
    """Outcome of the randomized girth-constrained search; found=False is a
    normal 'not found' result, not an error."""

    found: bool
    family: Optional[MatchingFamily]
    attempts: int
    message: str = ""


def _short_cycle_roots(adjacency: Dict[int, List[int]], n: int, limit: int) -> int:
    """Number of BFS roots whose shortest detected cycle is <= limit."""
    from collections import deque

    bad = 0
    for root in range(1, n + 1):
        dist = {root: 0}
        parent = {root: 0}
        queue = deque([root])
        shortest = None
        while queue:
            u = queue.popleft()
            if dist[u] > limit // 2:
                break
            for w in adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cand = dist[u] + dist[w] + 1
                    if shortest is None or cand < shortest:
                        shortest = cand
        if shortest is not None and shortest <= limit:
            bad += 1
    return bad


def random_girth_family(
    n: int,
    t: int,
    d: int,
    rng,
    max_attempts: int = 40,
    swap_budget: Optional[int] = None,
) -> GirthSearchResult:
    """Search for t disjoint perfect matchings whose union has no cycle of
    length <= 2d.

    Each attempt stacks t random permutation matchings and then hill-climbs
    with random 2-swaps (rewiring two edges while preserving degrees),
    accepting a swap when the number of vertices lying on short cycles does
    not increase. Deterministic for a fixed seed.
    """
    rng = as_rng(rng)
    if n < 2 or n % 2 != 0:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if not 1 <= t <= n // 2:
        raise ValueError(f"t must be in 1..{n // 2}, got {t}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if swap_budget is None:
        swap_budget = 60 * n

    half = n // 2
    limit = 2 * d
    for attempt in range(1, max_attempts + 1):
        try:
            graph = random_regular_bipartite(n, t, rng)
        except ValueError:
            continue
        edges = set(graph.edges)
        adjacency: Dict[int, List[int]] = {v: [] for v in range(1, n + 1)}
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        score = _short_cycle_roots(adjacency, n, limit)
        swaps = 0
        while score > 0 and swaps < swap_budget:
            swaps += 1
            (a, b), (c, e) = rng.sample(sorted(edges), 2)
            # keep left endpoints on the left side: a,c <= half < b,e
            if not (a <= half and c <= half):
                continue
            if a == c or b == e:
                continue
            new1, new2 = (a, e), (c, b)
            if new1 in edges or new2 in edges:
                continue
            for old, new in (((a, b), new1), ((c, e), new2)):
                edges.remove(old)
                edges.add(new)
                adjacency[old[0]].remove(old[1])
                adjacency[old[1]].remove(old[0])
                adjacency[new[0]].append(new[1])
                adjacency[new[1]].append(new[0])
            new_score = _short_cycle_roots(adjacency, n, limit)
            if new_score <= score:
                score = new_score
            else:
                for old, new in (((a, b), new1), ((c, e), new2)):
                    edges.remove(new)
                    edges.add(old)
                    adjacency[new[0]].remove(new[1])
                    adjacency[new[1]].remove(new[0])
                    adjacency[old[0]].append(old[1])
                    adjacency[old[1]].append(old[0])
        if score == 0:
            candidate = Graph.from_edges(
                n, edges, bipartition=(range(1, half + 1), range(half + 1, n + 1))
            )
            if verify_girth(candidate, d):
                matchings = decompose_regular_bipartite(candidate)
                family = MatchingFamily(
                    n=n, matchings=matchings, d=d, construction="random-girth-search"
                )
                return GirthSearchResult(found=True, family=family, attempts=attempt)
    return GirthSearchResult(
        found=False,
        family=None,
        attempts=max_attempts,
        message=f"no {t}-matching family on {n} vertices free of cycles <= {2 * d} "
        f"after {max_attempts} attempts",
    )


@dataclass(frozen=True)
class EdgeSpanReport:
    """Sampled count of vertices touched by one random edge per matching,
    against the floor t^(1-1/(2k+1)) / (180 k) with k = d/2."""

    trials: int
    t: int
    k: int
    bound: float
    min_touched: int
    max_touched: int
    mean_touched: float
    violation: bool
    in_declared_regime: bool


def edge_span_check(family: MatchingFamily, trials: int, rng) -> EdgeSpanReport:
    """Sample one edge per matching and count touched vertices; flags a
    violation if any trial goes below the floor. Families with d = 2 sit
    outside the k >= 2 regime and the check is a diagnostic only."""
    rng = as_rng(rng)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if family.d is None or family.d % 2 != 0:
        raise ValueError("edge_span_check needs a family built with an even girth parameter d")
    k = family.d // 2
    t = family.t
    bound = t ** (1.0 - 1.0 / (2 * k + 1)) / (180.0 * k)
    lo, hi, total = family.n + 1, 0, 0
    for _ in range(trials):
        touched: set = set()
        for m in family.matchings:
            u, v = m[rng.randrange(len(m))]
            touched.update((u, v))
        count = len(touched)
        lo = min(lo, count)
        hi = max(hi, count)
        total += count
    return EdgeSpanReport(
        trials=trials,
        t=t,
        k=k,
        bound=bound,
        min_touched=lo,
        max_touched=hi,
        mean_touched=total / trials,
        violation=lo < bound,
        in_declared_regime=k >= 2,
    )


def family_to_dict(family: MatchingFamily) -> dict:
    return {
        "n": family.n,
        "t": family.t,
        "d": family.d,
        "construction": family.construction,
        "matchings": [[[u, v] for (u, v) in m] for m in family.matchings],
    }


def family_from_dict(data: dict) -> MatchingFamily:
    """Validate and load the documented family schema."""
    if not isinstance(data, dict):
        raise ValueError("family document must be a JSON object")
    required = {"n", "t", "d", "construction", "matchings"}
    missing = required - set(data)
    if missing:
        raise ValueError(f"family document missing keys: {sorted(missing)}")
    n = data["n"]
    if not isinstance(n, int):
        raise ValueError("family field 'n' must be an integer")
    d = data["d"]
    if d is not None and not isinstance(d, int):
        raise ValueError("family field 'd' must be an integer or null")
    raw = data["matchings"]
    if not isinstance(raw, list) or not all(isinstance(m, list) for m in raw):
        raise ValueError("family field 'matchings' must be a list of edge lists")
    matchings = []
    for m in raw:
        edges = []
        for e in m:
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
                raise ValueError(f"malformed edge {e!r}; expected [i, j]")
            edges.append((e[0], e[1]))
        matchings.append(edges)
    family = family_from_matchings(
        n, matchings, d=d, construction=data["construction"]
    )
    if data["t"] != family.t:
        raise ValueError(f"family field 't'={data['t']} does not match {family.t} matchings")
    return family


def dump_family(family: MatchingFamily) -> str:
    """Canonical serialized form; load/dump round-trips are byte-identical."""
    return json.dumps(family_to_dict(family), indent=2, sort_keys=True) + "\n"


def save_family(family: MatchingFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_family(family))


def load_family(path) -> MatchingFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return family_from_dict(json.load(fh))
