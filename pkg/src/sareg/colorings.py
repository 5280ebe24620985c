"""Edge colourings induced by disjoint covering relation families.

Includes the doubling construction on the line whose colourings force only
logarithmically many colours on every p-set, the recursive "layered" sets
that such colourings always contain, and exhaustive checkers for both.
Colours are relation indices, counted from 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import (
    And,
    Atom,
    InputError,
    Not,
    PairTable,
    Polynomial,
    RelationFamily,
    SemiAlgebraicRelation,
    make_points,
)
from .graphs import greedy_clique, max_clique
from .regularity import partition_homogeneous

__all__ = [
    "ColoredGraph",
    "LayeredCertificate",
    "PQResult",
    "LayeredSearchResult",
    "build_layered",
    "verify_pq",
    "are_isomorphic",
    "is_s_layered",
    "check_certificate",
    "find_layered_set",
    "ISO_CAP",
    "LAYERED_CAP",
]

ISO_CAP = 12
LAYERED_CAP = 16


@dataclass
class ColoredGraph:
    """Complete graph on ``points`` with colour matrix ``colors`` (diagonal is -1)."""

    points: tuple
    colors: list
    family: RelationFamily | None = None

    @classmethod
    def from_family(cls, V: Sequence, F: RelationFamily) -> "ColoredGraph":
        V = make_points(V)
        table = PairTable(V, F, check_symmetry=True)
        n = len(V)
        colors = [[-1] * n for _ in range(n)]
        uncovered, doubled = [], []
        for i, j in combinations(range(n), 2):
            mk = table.rows[i][j]
            if mk == 0:
                uncovered.append((i, j))
            elif mk & (mk - 1):
                doubled.append((i, j))
            else:
                colors[i][j] = colors[j][i] = mk.bit_length() - 1
        if uncovered or doubled or table.asymmetric:
            raise InputError(
                f"family is not a symmetric disjoint cover: {len(uncovered)} uncovered, "
                f"{len(doubled)} multiply covered, {len(table.asymmetric)} asymmetric pair(s)"
            )
        return cls(V, colors, F)

    @classmethod
    def from_matrix(cls, colors: Sequence[Sequence[int]], points=None) -> "ColoredGraph":
        n = len(colors)
        mat = [list(row) for row in colors]
        for i in range(n):
            mat[i][i] = -1
            for j in range(i + 1, n):
                if mat[i][j] != mat[j][i] or mat[i][j] < 0:
                    raise InputError(f"colour matrix invalid at ({i}, {j})")
        pts = tuple(points) if points is not None else tuple((i,) for i in range(n))
        return cls(pts, mat)

    @property
    def n(self) -> int:
        return len(self.colors)

    def color(self, i: int, j: int) -> int:
        return self.colors[i][j]

    def color_set(self, S) -> set:
        S = list(S)
        return {self.colors[u][v] for a, u in enumerate(S) for v in S[a + 1 :]}


@dataclass
class LayeredCertificate:
    """Balanced bipartition tree; ``bijection`` maps ``left`` onto ``right`` preserving colours."""

    points: tuple
    color: int | None = None
    left: "LayeredCertificate | None" = None
    right: "LayeredCertificate | None" = None
    bijection: dict = field(default_factory=dict)

    @property
    def s(self) -> int:
        return len(self.points).bit_length() - 1

    def to_dict(self) -> dict:
        out = {"points": list(self.points), "color": self.color}
        if self.left is not None:
            out["left"] = self.left.to_dict()
            out["right"] = self.right.to_dict()
            out["bijection"] = [[a, b] for a, b in sorted(self.bijection.items())]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "LayeredCertificate":
        if "left" not in d:
            return cls(tuple(d["points"]), d.get("color"))
        return cls(
            tuple(d["points"]),
            d["color"],
            cls.from_dict(d["left"]),
            cls.from_dict(d["right"]),
            {a: b for a, b in d["bijection"]},
        )


# ---------------------------------------------------------------------------
# the doubling construction


def _gap_relation(C, name: str) -> SemiAlgebraicRelation:
    x = Polynomial.var(0, 2)
    y = Polynomial.var(1, 2)
    dd = (x - y) ** 2
    polys = (C * C - 4 * dd, dd - 4 * C * C)
    # (2|u-v|)^2 > C^2 and (u-v)^2 < 4C^2
    return SemiAlgebraicRelation(polys, And((Not(Atom(0)), Not(Atom(1)))), 4, 1, name)


def build_layered(m: int):
    """Points ``V_m`` (2^m integers) with relations ``E_1..E_m`` and the construction tree.

    ``E_1`` is unit distance; ``E_{i+1}`` is ``C/2 < |u - v| < 2C`` with
    ``C = 10 max V_i`` and ``V_{i+1} = V_i ∪ (V_i + C)``.
    """
    if m < 1:
        raise InputError("m must be at least 1")
    x = Polynomial.var(0, 2)
    y = Polynomial.var(1, 2)
    g = (x - y) ** 2 - 1
    rels = [SemiAlgebraicRelation((g, -g), And((Atom(0), Atom(1))), 4, 1, "E1")]
    pts = [1, 2]
    shifts = []
    for i in range(1, m):
        C = 10 * max(pts)
        shifts.append(C)
        rels.append(_gap_relation(C, f"E{i + 1}"))
        pts = pts + [p + C for p in pts]
    F = RelationFamily(tuple(rels), covering=True, disjoint=True)
    G = ColoredGraph.from_family([(p,) for p in pts], F)

    def tree(lo: int, size: int, level: int) -> LayeredCertificate:
        if size == 2:
            return LayeredCertificate((lo, lo + 1), 0)
        half = size // 2
        return LayeredCertificate(
            tuple(range(lo, lo + size)),
            level - 1,
            tree(lo, half, level - 1),
            tree(lo + half, half, level - 1),
            {k: k + half for k in range(lo, lo + half)},
        )

    cert = tree(0, len(pts), m)
    G.shifts = tuple(shifts)
    return G, cert


# ---------------------------------------------------------------------------
# (p, q) colourings


@dataclass
class PQResult:
    ok: bool
    p: int
    q: int
    witness: tuple | None = None
    colors: tuple | None = None

    @property
    def status(self) -> str:
        return "PASS" if self.ok else "FAIL"


def verify_pq(G: ColoredGraph, p: int, q: int) -> PQResult:
    """Check that every ``p``-subset sees at least ``q`` colours.

    Depth-first over subsets in lexicographic order, pruning any prefix that
    already shows ``q`` colours, so the first failure found is the
    lexicographically smallest one.
    """
    n = G.n
    if p < 2:
        raise InputError("p must be at least 2")
    if q > p * (p - 1) // 2:
        raise InputError(f"q = {q} exceeds C(p, 2)")
    if p > n or q <= 1:
        return PQResult(True, p, q)
    cm = [[0 if c < 0 else 1 << c for c in row] for row in G.colors]
    chosen: list = []

    def dfs(start: int, mask: int):
        if bin(mask).count("1") >= q:
            return None
        if len(chosen) == p:
            return tuple(chosen)
        need = p - len(chosen)
        for v in range(start, n - need + 1):
            row = cm[v]
            add = 0
            for u in chosen:
                add |= row[u]
            chosen.append(v)
            hit = dfs(v + 1, mask | add)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    hit = dfs(0, 0)
    if hit is None:
        return PQResult(True, p, q)
    return PQResult(False, p, q, hit, tuple(sorted(G.color_set(hit))))


# ---------------------------------------------------------------------------
# isomorphism and layered sets


def _profile(G: ColoredGraph, u: int, S) -> tuple:
    counts: dict = {}
    for v in S:
        if v != u:
            c = G.colors[u][v]
            counts[c] = counts.get(c, 0) + 1
    return tuple(sorted(counts.items()))


def are_isomorphic(G: ColoredGraph, S1: Sequence[int], S2: Sequence[int]) -> dict | None:
    """A colour-preserving bijection ``S1 -> S2``, or ``None`` if none exists."""
    S1, S2 = list(S1), list(S2)
    if len(S1) != len(S2):
        return None
    if len(S1) > ISO_CAP:
        raise InputError(f"isomorphism search capped at {ISO_CAP} points")
    if sorted(S1) == sorted(S2):
        return {u: u for u in S1}
    prof1 = {u: _profile(G, u, S1) for u in S1}
    prof2 = {v: _profile(G, v, S2) for v in S2}
    if sorted(prof1.values()) != sorted(prof2.values()):
        return None
    rank1 = {u: k for k, u in enumerate(sorted(S1))}
    srt2 = sorted(S2)
    order = sorted(S1, key=lambda u: (prof1[u], u))
    h: dict = {}
    used: set = set()

    def candidates(u):
        same = srt2[rank1[u]]
        rest = [v for v in srt2 if v != same]
        return [v for v in [same] + rest if v not in used and prof2[v] == prof1[u]]

    def bt(k: int) -> bool:
        if k == len(order):
            return True
        u = order[k]
        for v in candidates(u):
            if all(G.colors[u][w] == G.colors[v][h[w]] for w in order[:k]):
                h[u] = v
                used.add(v)
                if bt(k + 1):
                    return True
                del h[u]
                used.discard(v)
        return False

    return dict(sorted(h.items())) if bt(0) else None


def _mono_cross(G: ColoredGraph, A, B):
    c = G.colors[A[0]][B[0]]
    for u in A:
        row = G.colors[u]
        for v in B:
            if row[v] != c:
                return None
    return c


def _pow2_exponent(size: int) -> int:
    if size < 2 or size & (size - 1):
        raise InputError(f"layered sets have size 2^s with s >= 1, got {size}")
    return size.bit_length() - 1


def is_s_layered(S: Sequence[int], G: ColoredGraph) -> LayeredCertificate | None:
    """Exhaustive search for a layered certificate of ``S``, canonical split tried first."""
    S = tuple(sorted(S))
    _pow2_exponent(len(S))
    if len(S) > LAYERED_CAP:
        raise InputError(f"layered recognition capped at {LAYERED_CAP} points")
    memo: dict = {}

    def rec(T: tuple):
        if T in memo:
            return memo[T]
        if len(T) == 2:
            out = LayeredCertificate(T, G.colors[T[0]][T[1]])
            memo[T] = out
            return out
        half = len(T) // 2
        first, rest = T[0], T[1:]
        out = None
        for combo in combinations(rest, half - 1):
            A = (first,) + combo
            Aset = set(A)
            B = tuple(v for v in T if v not in Aset)
            c = _mono_cross(G, A, B)
            if c is None:
                continue
            ca = rec(A)
            if ca is None:
                continue
            h = are_isomorphic(G, A, B)
            if h is None:
                continue
            cb = rec(B)
            if cb is None:
                continue
            out = LayeredCertificate(T, c, ca, cb, h)
            break
        memo[T] = out
        return out

    return rec(S)


def check_certificate(G: ColoredGraph, cert: LayeredCertificate) -> bool:
    """Independent re-verification of every condition along the tree."""
    T = tuple(cert.points)
    if len(set(T)) != len(T) or len(T) < 2 or len(T) & (len(T) - 1):
        return False
    if len(T) == 2:
        return cert.left is None
    if cert.left is None or cert.right is None:
        return False
    A, B = tuple(cert.left.points), tuple(cert.right.points)
    if len(A) != len(B) or set(A) | set(B) != set(T) or set(A) & set(B):
        return False
    if any(G.colors[u][v] != cert.color for u in A for v in B):
        return False
    h = cert.bijection
    if set(h) != set(A) or set(h.values()) != set(B):
        return False
    if any(G.colors[u][w] != G.colors[h[u]][h[w]] for u, w in combinations(A, 2)):
        return False
    return check_certificate(G, cert.left) and check_certificate(G, cert.right)


# ---------------------------------------------------------------------------
# searching for layered sets


@dataclass
class LayeredSearchResult:
    subset: tuple
    certificate: LayeredCertificate
    route: str
    diagnostics: dict = field(default_factory=dict)


def _join(G, ca: LayeredCertificate, cb: LayeredCertificate):
    A, B = ca.points, cb.points
    if set(A) & set(B):
        return None
    c = _mono_cross(G, A, B)
    if c is None:
        return None
    h = are_isomorphic(G, A, B) if len(A) <= ISO_CAP else None
    if h is None:
        return None
    if A[0] > B[0]:
        ca, cb, A, B = cb, ca, B, A
        h = are_isomorphic(G, A, B)
    return LayeredCertificate(tuple(sorted(A + B)), c, ca, cb, h)


def _induction(G: ColoredGraph, idx: list, s: int, eps_override, stats: dict, depth: int = 0):
    if len(idx) < 2**s:
        return None
    if s == 1:
        return LayeredCertificate((idx[0], idx[1]), G.colors[idx[0]][idx[1]])
    F = G.family
    m = F.m
    eps = Fraction(eps_override) if eps_override is not None else Fraction(1, m**s)
    if not 0 < eps < 1:
        eps = Fraction(1, 2)
    stats["partitions"] = stats.get("partitions", 0) + 1
    P = partition_homogeneous([G.points[i] for i in idx], F, eps)
    parts = [[idx[k] for k in part] for part in P.parts]
    eligible = [k for k, part in enumerate(parts) if len(part) >= 2 ** (s - 1)]
    if len(eligible) < 2:
        return None
    n_el = len(eligible)
    adj = [0] * n_el
    cross: dict = {}
    for a, b in combinations(range(n_el), 2):
        c = _mono_cross(G, parts[eligible[a]], parts[eligible[b]])
        if c is not None:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
            cross[(a, b)] = c
    clique = max_clique(adj) if n_el <= 20 else greedy_clique(adj)
    stats.setdefault("clique_sizes", []).append(len(clique))
    found: list = []
    for a in clique:
        cert = _induction(G, parts[eligible[a]], s - 1, eps_override, stats, depth + 1)
        if cert is None:
            continue
        for b, cb in found:
            joined = _join(G, cb, cert)
            if joined is not None:
                return joined
        found.append((a, cert))
    return None


def _bottom_up(G: ColoredGraph, s: int, level_cap: int):
    n = G.n
    level = [LayeredCertificate((i, j), G.colors[i][j]) for i, j in combinations(range(n), 2)]
    for _ in range(1, s):
        nxt, seen = [], set()
        for ca, cb in combinations(level, 2):
            if ca.points[0] > cb.points[0]:
                ca, cb = cb, ca
            key = tuple(sorted(ca.points + cb.points))
            if key in seen:
                continue
            joined = _join(G, ca, cb)
            if joined is None:
                continue
            seen.add(key)
            nxt.append(joined)
            if len(nxt) >= level_cap:
                break
        if not nxt:
            return None
        level = nxt
    return level[0] if level else None


def find_layered_set(
    V: Sequence,
    F: RelationFamily,
    s: int,
    eps_override=None,
    exhaustive_limit: int = 64,
    level_cap: int = 5000,
) -> LayeredSearchResult | None:
    """Find a ``2^s``-point layered set, or ``None``.

    Runs the partition-and-recurse induction first; if that fails and the
    point set is small, falls back to an exhaustive bottom-up join of
    layered pairs (exact unless a level exceeds ``level_cap`` sets).
    """
    if s < 1:
        raise InputError("s must be at least 1")
    if not F.disjoint:
        raise InputError("find_layered_set needs a family declared disjoint")
    G = ColoredGraph.from_family(V, F)
    n = G.n
    if n < 2**s:
        return None
    stats: dict = {}
    cert = _induction(G, list(range(n)), s, eps_override, stats)
    route = "induction"
    if cert is None and n <= exhaustive_limit:
        cert = _bottom_up(G, s, level_cap)
        route = "exhaustive"
    if cert is None:
        return None
    assert check_certificate(G, cert)
    return LayeredSearchResult(tuple(sorted(cert.points)), cert, route, stats)
