"""Exact probabilities over all labeled graphs on at most 6 vertices.

Every graph on n vertices is a bitmask over the C(n,2) vertex-pair slots in
lexicographic order, and the G(n,p) measure of an event is the sum of
p^|E| (1-p)^(C(n,2)-|E|) over the satisfying masks.  The mask space is
walked in fixed contiguous partitions and each partial sum uses error-free
float summation (math.fsum), so results are deterministic and exact up to
the final rounding; pass a Fraction p with ``exact=True`` to get exact
rational values instead.

These values calibrate the closed-form main terms: those omit exp[O(.)]
corrections, the oracle does not.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Union

from .analytic import PairProfile
from .graph import Graph, from_edges
from .matching import exact_um_k

__all__ = [
    "MAX_ORACLE_N",
    "MaskGraph",
    "enumerate_matchings",
    "exact_event_probability",
    "exact_expected_Xm",
    "exact_pair_profile_table",
    "exact_prob_distance_ge_k",
    "exact_prob_k_matching",
    "exact_umk_distribution",
    "pair_slots",
]

#: Hard enumeration cap: 2^C(6,2) = 32768 masks.  Larger n is refused
#: rather than silently approximated.
MAX_ORACLE_N = 6

_PARTITION = 1 << 12


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_ORACLE_N:
        raise ValueError(f"oracle handles n <= {MAX_ORACLE_N}, got {n}")


@lru_cache(maxsize=None)
def pair_slots(n: int) -> tuple[tuple[int, int], ...]:
    """The C(n,2) vertex pairs in lexicographic (slot) order."""
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


class MaskGraph:
    """Lightweight graph view of one mask: per-vertex neighbor bitmasks."""

    __slots__ = ("n", "mask", "adj")

    def __init__(self, n: int, mask: int):
        self.n = n
        self.mask = mask
        adj = [0] * n
        slots = pair_slots(n)
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            u, v = slots[low.bit_length() - 1]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj = adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        slots = pair_slots(self.n)
        return [slots[i] for i in range(len(slots)) if self.mask >> i & 1]

    def distance_at_least(self, sources: int, targets: int, k: int) -> bool:
        """True iff every source/target vertex pair (given as bitmasks) is
        at distance >= k."""
        if sources & targets:
            return k <= 0
        seen = sources
        frontier = sources
        for _ in range(k - 1):
            nxt = 0
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                nxt |= self.adj[low.bit_length() - 1]
            nxt &= ~seen
            if nxt & targets:
                return False
            seen |= nxt
            frontier = nxt
            if not frontier:
                break
        return True

    def to_graph(self) -> Graph:
        return from_edges(self.n, self.edges())


def exact_event_probability(
    n: int,
    p: Union[float, Fraction],
    predicate: Callable[[MaskGraph], bool],
    *,
    exact: bool = False,
) -> Union[float, Fraction]:
    """G(n,p)-probability of the event described by ``predicate``.

    Sums p^|E| (1-p)^(N-|E|) over all 2^N masks (N = C(n,2)) whose graph
    satisfies the predicate.  With ``exact=True`` and a Fraction p the
    arithmetic is exact rational.
    """
    _check_n(n)
    slots = len(pair_slots(n))
    if exact:
        pf = Fraction(p)
        weights = [pf**j * (1 - pf) ** (slots - j) for j in range(slots + 1)]
        total = Fraction(0)
        for mask in range(1 << slots):
            if predicate(MaskGraph(n, mask)):
                total += weights[mask.bit_count()]
        return total
    pw = [float(p) ** j * (1.0 - float(p)) ** (slots - j) for j in range(slots + 1)]
    partials = []
    for start in range(0, 1 << slots, _PARTITION):
        stop = min(start + _PARTITION, 1 << slots)
        partials.append(
            math.fsum(
                pw[mask.bit_count()]
                for mask in range(start, stop)
                if predicate(MaskGraph(n, mask))
            )
        )
    return math.fsum(partials)


def exact_prob_distance_ge_k(
    n: int,
    p: Union[float, Fraction],
    k: int,
    u: int,
    v: int,
    *,
    exact: bool = False,
) -> Union[float, Fraction]:
    """Exact P[d_G(u,v) >= k] under G(n,p)."""
    _check_n(n)
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError("vertex out of range")
    su, sv = 1 << u, 1 << v
    return exact_event_probability(
        n, p, lambda g: g.distance_at_least(su, sv, k), exact=exact
    )


def _normalize_matching(n: int, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    out = []
    seen: set[int] = set()
    for u, v in edges:
        if u > v:
            u, v = v, u
        if u == v or not (0 <= u < v < n):
            raise ValueError(f"bad matching edge ({u}, {v})")
        if u in seen or v in seen:
            raise ValueError("matching edges must be vertex-disjoint")
        seen.update((u, v))
        out.append((u, v))
    return sorted(out)


def exact_prob_k_matching(
    n: int,
    p: Union[float, Fraction],
    k: int,
    matching: Iterable[tuple[int, int]],
    *,
    exact: bool = False,
) -> Union[float, Fraction]:
    """Exact probability that all edges of the given vertex-disjoint pair
    set are present and pairwise at endpoint distance >= k."""
    _check_n(n)
    members = _normalize_matching(n, matching)
    pair_bits = [(1 << u) | (1 << v) for u, v in members]

    def pred(g: MaskGraph) -> bool:
        for u, v in members:
            if not g.has_edge(u, v):
                return False
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if not g.distance_at_least(pair_bits[i], pair_bits[j], k):
                    return False
        return True

    return exact_event_probability(n, p, pred, exact=exact)


@lru_cache(maxsize=None)
def enumerate_matchings(n: int, m: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All size-m matchings of K_n as sorted edge tuples."""
    _check_n(n)
    out = []
    for combo in combinations(pair_slots(n), m):
        verts = [x for e in combo for x in e]
        if len(set(verts)) == 2 * m:
            out.append(combo)
    return tuple(out)


def exact_expected_Xm(
    n: int, p: Union[float, Fraction], k: int, m: int, *, exact: bool = False
) -> Union[float, Fraction]:
    """Exact E[number of size-m k-matchings of G]: the sum over all size-m
    matchings of K_n of their exact k-matching probability (equivalently
    the graph-average of the per-graph count)."""
    _check_n(n)
    if m == 0:
        return Fraction(1) if exact else 1.0
    terms = [
        exact_prob_k_matching(n, p, k, mm, exact=exact)
        for mm in enumerate_matchings(n, m)
    ]
    return sum(terms, Fraction(0)) if exact else math.fsum(terms)


def exact_pair_profile_table(n: int, m: int) -> dict[PairProfile, int]:
    """Count ordered pairs of size-m matchings of K_n by intersection
    profile (r disjoint rest-edges, c_v single shared vertices, c_e shared
    edges), restricted to pairs where neither matching has an edge whose
    endpoints lie in two different edges of the other."""
    _check_n(n)
    if m > 2:
        raise ValueError("profile enumeration is kept to m <= 2")
    matchings = enumerate_matchings(n, m)
    table: dict[PairProfile, int] = {}
    owners = []
    for mm in matchings:
        owner: dict[int, tuple[int, int]] = {}
        for e in mm:
            owner[e[0]] = e
            owner[e[1]] = e
        owners.append(owner)

    def crosses(mi, owner_j) -> bool:
        # an edge of mi with endpoints in two different edges of mj
        for a, b in mi:
            ea = owner_j.get(a)
            eb = owner_j.get(b)
            if ea is not None and eb is not None and ea != eb:
                return True
        return False

    for i, mi in enumerate(matchings):
        set_i = set(mi)
        owner_i = owners[i]
        for j, mj in enumerate(matchings):
            if crosses(mi, owners[j]) or crosses(mj, owner_i):
                continue
            c_e = len(set_i & set(mj))
            c_v = sum(
                1
                for v, e in owner_i.items()
                if v in owners[j] and owners[j][v] != e
            )
            profile = PairProfile(r=m - c_e - c_v, c_v=c_v, c_e=c_e)
            table[profile] = table.get(profile, 0) + 1
    return table


def exact_umk_distribution(
    n: int, p: Union[float, Fraction], k: int, *, exact: bool = False
) -> dict[int, Union[float, Fraction]]:
    """Exact distribution of the k-matching number over G(n,p), by running
    the exact solver on every mask."""
    _check_n(n)
    slots = len(pair_slots(n))
    if exact:
        pf = Fraction(p)
        weights = [pf**j * (1 - pf) ** (slots - j) for j in range(slots + 1)]
        dist: dict[int, Fraction] = {}
        for mask in range(1 << slots):
            size, _ = exact_um_k(MaskGraph(n, mask).to_graph(), k)
            dist[size] = dist.get(size, Fraction(0)) + weights[mask.bit_count()]
        return dict(sorted(dist.items()))
    pw = [float(p) ** j * (1.0 - float(p)) ** (slots - j) for j in range(slots + 1)]
    buckets: dict[int, list[float]] = {}
    for mask in range(1 << slots):
        size, _ = exact_um_k(MaskGraph(n, mask).to_graph(), k)
        buckets.setdefault(size, []).append(pw[mask.bit_count()])
    return {size: math.fsum(terms) for size, terms in sorted(buckets.items())}
