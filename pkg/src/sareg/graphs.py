"""Small exact graph searches on bitmask adjacency (vertex ``i`` is bit ``i``)."""

from __future__ import annotations

from typing import Sequence

__all__ = [
    "adjacency",
    "complement",
    "max_clique",
    "greedy_clique",
    "max_independent_set",
    "is_clique",
    "bits",
]


def bits(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def adjacency(n: int, edges) -> list:
    adj = [0] * n
    for u, v in edges:
        if u != v:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def complement(adj: Sequence[int]) -> list:
    n = len(adj)
    full = (1 << n) - 1
    return [(full ^ a) & ~(1 << i) for i, a in enumerate(adj)]


def is_clique(adj: Sequence[int], vertices) -> bool:
    vs = list(vertices)
    return all(adj[u] >> v & 1 for i, u in enumerate(vs) for v in vs[i + 1 :])


def _color_bound(adj, cand):
    # greedy colouring of the candidate set; returns vertices in colour order with bounds
    order, bounds = [], []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            uncolored &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique(adj: Sequence[int], within: int | None = None, target: int | None = None) -> list:
    """A maximum clique (sorted), by branch and bound with colouring bounds.

    Stops early once a clique of size ``target`` is found.
    """
    n = len(adj)
    cand0 = (1 << n) - 1 if within is None else within
    best: list = []

    def expand(current: list, cand: int):
        nonlocal best
        order, bounds = _color_bound(adj, cand)
        for k in range(len(order) - 1, -1, -1):
            if len(current) + bounds[k] <= len(best):
                return
            v = order[k]
            current.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(current, nxt)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            if target is not None and len(best) >= target:
                return
            cand &= ~(1 << v)

    if cand0:
        expand([], cand0)
    return sorted(best)


def greedy_clique(adj: Sequence[int], within: int | None = None) -> list:
    """Repeatedly take the lowest-index candidate of highest degree inside the candidates."""
    n = len(adj)
    cand = (1 << n) - 1 if within is None else within
    out = []
    while cand:
        v = max(bits(cand), key=lambda u: (bin(adj[u] & cand).count("1"), -u))
        out.append(v)
        cand &= adj[v]
    return sorted(out)


def max_independent_set(adj: Sequence[int], within: int | None = None) -> list:
    return max_clique(complement(adj), within)
