"""Monochromatic cliques in colourings given by covering relation families.

The search follows the cutting argument: take the most populated cell, keep
the outside points whose surfaces avoid it (each such point relates to the
whole cell through one fixed relation), and recurse on the cell with the
relevant targets lowered by one, or on the largest class of outside points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import InputError, PairTable, RelationFamily, make_points
from .cutting import CuttingFailed, cut_1d, cut_adaptive
from .graphs import max_clique
from .regularity import build_surfaces

__all__ = [
    "CliqueQuery",
    "RamseyResult",
    "mono_clique_search",
    "brute_ramsey_check",
    "BASE_CASE",
    "BRUTE_MAX_N",
    "BRUTE_MAX_P",
]

BASE_CASE = 12
BRUTE_MAX_N = 16
BRUTE_MAX_P = 5


@dataclass(frozen=True)
class CliqueQuery:
    targets: tuple
    family: RelationFamily

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(p) for p in self.targets))
        if len(self.targets) != self.family.m:
            raise InputError(f"need {self.family.m} targets, got {len(self.targets)}")
        if any(p < 2 for p in self.targets):
            raise InputError("every target must be at least 2")


@dataclass
class RamseyResult:
    relation: int
    clique: tuple
    route: str = "search"
    stats: dict = field(default_factory=dict)


def _prepare(V, Q: CliqueQuery):
    V = make_points(V)
    table = PairTable(V, Q.family)
    bad = [(i, j) for i, j in combinations(range(len(V)), 2) if table.rows[i][j] == 0]
    if bad:
        raise InputError(f"family does not cover {len(bad)} pair(s), e.g. {bad[0]}")
    return V, table


def _color_adj(table: PairTable, i: int) -> list:
    bit = 1 << i
    n = table.n
    adj = []
    for u in range(n):
        row = table.rows[u]
        a = 0
        for v in range(n):
            if v != u and row[v] & bit:
                a |= 1 << v
        adj.append(a)
    return adj


class _Search:
    def __init__(self, V, Q: CliqueQuery, table: PairTable):
        self.V = V
        self.F = Q.family
        self.table = table
        self.adj = [_color_adj(table, i) for i in range(self.F.m)]
        self.surfaces = build_surfaces(V, self.F)
        self.s_total = self.F.s_total
        self.stats = {"calls": 0, "base_cases": 0, "max_depth": 0}

    def base(self, idx, targets):
        self.stats["base_cases"] += 1
        within = 0
        for v in idx:
            within |= 1 << v
        for i, p in enumerate(targets):
            c = max_clique(self.adj[i], within, target=p)
            if len(c) >= p:
                return i, c[:p]
        return None

    def cut(self, idx):
        surf = [self.surfaces[u * self.s_total + k] for u in idx for k in range(self.s_total)]
        r = Fraction(2 * self.s_total)
        if self.F.dim == 1:
            cutting = cut_1d(surf, r)
        else:
            pts = [self.V[u] for u in idx]
            try:
                cutting = cut_adaptive(surf, r, self.F.dim, points=pts, depth_cap=30)
            except CuttingFailed as exc:
                cutting = exc.cutting
        return cutting

    def solve(self, idx: list, targets: tuple, depth: int = 0):
        self.stats["calls"] += 1
        self.stats["max_depth"] = max(self.stats["max_depth"], depth)
        for i, p in enumerate(targets):
            if p <= 0:
                return i, []
            if p == 1 and idx:
                return i, [idx[0]]
        if len(idx) <= BASE_CASE:
            return self.base(idx, targets)
        cutting = self.cut(idx)
        loc = [cutting.locate(self.V[u]) for u in idx]
        counts: dict = {}
        for c in loc:
            counts[c] = counts.get(c, 0) + 1
        delta = max(sorted(counts), key=lambda c: counts[c])
        V1 = [u for u, c in zip(idx, loc) if c == delta]
        if len(V1) == len(idx):
            V1 = idx[: len(idx) // 2]
        in1 = set(V1)
        crossing_local = set(cutting.cells[delta].crossing)
        s = self.s_total
        crossing_pts = {idx[k // s] for k in crossing_local}
        chi: dict = {}
        rows = self.table.rows
        for v in idx:
            if v in in1 or v in crossing_pts:
                continue
            acc = (1 << self.F.m) - 1
            row = rows[v]
            for u in V1:
                acc &= row[u]
                if not acc:
                    break
            if acc:
                chi[v] = (acc & -acc).bit_length() - 1
        classes: dict = {}
        for v in sorted(chi):
            classes.setdefault(chi[v], []).append(v)
        if classes:
            c3 = max(sorted(classes), key=lambda c: len(classes[c]))
            V3 = classes[c3]
            t3 = tuple(p - 1 if i == c3 else p for i, p in enumerate(targets))
            hit = self.solve(V3, t3, depth + 1)
            if hit is not None:
                i, K = hit
                if i == c3:
                    return i, sorted(K + [V1[0]])
                return hit
        I = set(classes)
        t1 = tuple(p - 1 if i in I else p for i, p in enumerate(targets))
        hit = self.solve(V1, t1, depth + 1)
        if hit is not None:
            i, K = hit
            if i in I:
                return i, sorted(K + [classes[i][0]])
            return hit
        return None


def _verify(table: PairTable, rel: int, clique) -> bool:
    bit = 1 << rel
    return len(set(clique)) == len(clique) and all(table.rows[u][v] & bit for u, v in combinations(clique, 2))


def mono_clique_search(V: Sequence, Q: CliqueQuery, brute_fallback: bool = True) -> RamseyResult | None:
    """Find ``i`` and a clique of size ``targets[i]`` inside relation ``i``, or ``None``.

    The recursion is sound but not complete; when it comes back empty on
    at most 16 points the exhaustive check decides, so ``None`` there is
    exact.
    """
    V, table = _prepare(V, Q)
    search = _Search(V, Q, table)
    hit = search.solve(list(range(len(V))), Q.targets)
    route = "search"
    if hit is None and brute_fallback and len(V) <= BRUTE_MAX_N and max(Q.targets) <= BRUTE_MAX_P:
        hit = _brute(table, Q.targets)
        route = "exhaustive"
    if hit is None:
        return None
    rel, clique = hit
    clique = tuple(sorted(clique))
    if len(clique) != Q.targets[rel] or not _verify(table, rel, clique):
        raise AssertionError(f"search returned an invalid clique {clique} for relation {rel}")
    return RamseyResult(rel, clique, route, search.stats)


def _brute(table: PairTable, targets):
    n = table.n
    for i, p in enumerate(targets):
        bit = 1 << i
        for S in combinations(range(n), p):
            if all(table.rows[u][v] & bit for u, v in combinations(S, 2)):
                return i, list(S)
    return None


def brute_ramsey_check(V: Sequence, Q: CliqueQuery) -> RamseyResult | None:
    """Exhaustive oracle: first relation (by index) and lexicographically first clique."""
    if len(V) > BRUTE_MAX_N or max(Q.targets) > BRUTE_MAX_P:
        raise InputError(f"brute force capped at {BRUTE_MAX_N} points and targets <= {BRUTE_MAX_P}")
    V, table = _prepare(V, Q)
    hit = _brute(table, Q.targets)
    if hit is None:
        return None
    return RamseyResult(hit[0], tuple(hit[1]), "exhaustive")
