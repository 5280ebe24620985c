"""Distinct distances in the plane: exact distance classes, the quadruple
relation on ordered pairs, and checkable forms of each finite inequality
in the counting argument. Distances are compared through exact squared
distances throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, isqrt
from typing import Sequence

from .algebra import (
    And,
    Atom,
    InputError,
    Or,
    Polynomial,
    SemiAlgebraicRelation,
    make_points,
)

__all__ = [
    "DistanceProfile",
    "QuadRelation",
    "distance_profile",
    "greedy_matching",
    "build_Q",
    "quad_holds",
    "distance_bound_audit",
    "check_obs1",
    "check_obs2",
    "kst_audit",
    "kst_edge_bound",
    "pq_distance_check",
    "count_distances",
    "INFINITY",
]

INFINITY = "inf"


def sqdist(a, b):
    return sum((x - y) ** 2 for x, y in zip(a, b))


def _planar(V) -> tuple:
    V = make_points(V)
    if V and len(V[0]) != 2:
        raise InputError("planar point sets only")
    if len(set(V)) != len(V):
        raise InputError("duplicate points")
    return V


def count_distances(points) -> int:
    pts = list(points)
    return len({sqdist(a, b) for a, b in combinations(pts, 2)})


@dataclass
class DistanceProfile:
    classes: dict
    n: int

    @property
    def m(self) -> int:
        return len(self.classes)

    def sizes(self) -> dict:
        return {k: len(v) for k, v in self.classes.items()}

    def max_degree(self) -> int:
        best = 0
        for pairs in self.classes.values():
            deg: dict = {}
            for i, j in pairs:
                deg[i] = deg.get(i, 0) + 1
                deg[j] = deg.get(j, 0) + 1
            best = max(best, max(deg.values()))
        return best


def distance_profile(V: Sequence) -> DistanceProfile:
    V = _planar(V)
    classes: dict = {}
    for i, j in combinations(range(len(V)), 2):
        classes.setdefault(sqdist(V[i], V[j]), []).append((i, j))
    return DistanceProfile(dict(sorted(classes.items())), len(V))


def greedy_matching(edges: Sequence, p: int) -> list:
    """Take edges in order, dropping every later edge that touches a taken one."""
    deg: dict = {}
    for u, v in edges:
        if u == v:
            raise InputError("loops are not edges")
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if deg and max(deg.values()) > p:
        raise InputError(f"maximum degree {max(deg.values())} exceeds p = {p}")
    used: set = set()
    out = []
    for u, v in edges:
        if u not in used and v not in used:
            out.append((u, v))
            used.update((u, v))
    return out


def quad_holds(V, a, b) -> bool:
    """Membership of the ordered pairs ``a = (u1, u2)``, ``b = (v1, v2)`` (indices into ``V``)."""
    u1, u2 = a
    v1, v2 = b
    if len({u1, u2, v1, v2}) < 4:
        return False
    P = V
    return sqdist(P[u1], P[v1]) == sqdist(P[u2], P[v2]) or sqdist(P[u1], P[v2]) == sqdist(P[u2], P[v1])


def _quad_encoding() -> SemiAlgebraicRelation:
    X = Polynomial.variables(8)
    u1, u2, v1, v2 = (X[0], X[1]), (X[2], X[3]), (X[4], X[5]), (X[6], X[7])

    def d2(a, b):
        return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2

    h1 = d2(u1, v1) - d2(u2, v2)
    h2 = d2(u1, v2) - d2(u2, v1)
    formula = Or((And((Atom(0), Atom(1))), And((Atom(2), Atom(3)))))
    return SemiAlgebraicRelation((h1, -h1, h2, -h2), formula, 4, 4, "Q")


@dataclass
class QuadRelation:
    """Unordered pairs ``{a, b}`` of ordered index pairs; stored with ``a < b``.

    ``encoding`` is the relation on R^4 given by the two squared-distance
    equalities. It omits the requirement that all four points be distinct,
    which :func:`quad_holds` enforces on indices.
    """

    base: tuple
    edges: set
    encoding: SemiAlgebraicRelation = field(default_factory=_quad_encoding, repr=False)

    def __len__(self):
        return len(self.edges)

    def contains(self, a, b) -> bool:
        a, b = tuple(a), tuple(b)
        return (min(a, b), max(a, b)) in self.edges


def build_Q(V: Sequence) -> QuadRelation:
    V = _planar(V)
    n = len(V)
    U = [(i, j) for i in range(n) for j in range(n) if i != j]
    edges = set()
    for x, a in enumerate(U):
        for b in U[x + 1 :]:
            if quad_holds(V, a, b):
                edges.add((a, b))
    return QuadRelation(V, edges)


def distance_bound_audit(V: Sequence, p: int, Q: QuadRelation | None = None) -> dict:
    """Exact check of ``m >= (n^4 - 2n^3) / ((2p)^2 |Q|)`` with intermediates."""
    V = _planar(V)
    n = len(V)
    if n < 3:
        raise InputError("need at least 3 points")
    if p < 1:
        raise InputError("p must be positive")
    prof = distance_profile(V)
    Q = Q if Q is not None else build_Q(V)
    sizes = [len(c) for c in prof.classes.values()]
    matchings = [len(greedy_matching(c, n)) for c in prof.classes.values()]
    num = n**4 - 2 * n**3
    report = {
        "n": n,
        "p": p,
        "m": prof.m,
        "Q": len(Q),
        "sum_sq_class_sizes": sum(k * k for k in sizes),
        "sum_sq_matchings_x4": 4 * sum(k * k for k in matchings),
        "max_class_degree": prof.max_degree(),
        "degree_precondition": prof.max_degree() < p,
    }
    if len(Q) == 0:
        report["bound"] = INFINITY
        report["holds"] = False
        report["degenerate"] = True
        return report
    bound = Fraction(num, (2 * p) ** 2 * len(Q))
    report["bound"] = bound
    report["holds"] = prof.m >= bound
    report["degenerate"] = False
    return report


def check_obs1(V: Sequence, u1: int, u2: int, v: int, ws: Sequence[int]) -> dict:
    """Count distances among ``u1, u2, v, w_1..w_{p-3}`` against ``C(p,2) - p + 3``."""
    V = _planar(V)
    idx = [u1, u2, v, *ws]
    if len(set(idx)) != len(idx):
        raise InputError("points must be distinct")
    if not ws:
        raise InputError("need at least one w")
    for w in ws:
        if not quad_holds(V, (u1, u2), (v, w)):
            raise InputError(f"({u1}{u2}, {v}{w}) is not in Q")
    p = len(idx)
    count = count_distances(V[i] for i in idx)
    threshold = comb(p, 2) - p + 3
    return {"p": p, "count": count, "threshold": threshold, "satisfied": count <= threshold}


def check_obs2(V: Sequence, a, b, vpairs: Sequence, extra=None) -> dict:
    """Distance count of a ``K_{2,r}`` pattern between ``a, b`` and ``vpairs``.

    Case 1 (``a`` and ``b`` share no point) counts the ``2r + 4`` points.
    Case 2 (exactly one shared point) counts the ``2r + 3`` distinct points
    plus ``extra``: an index into ``V`` or a coordinate pair; when omitted a
    fresh point to the right of everything is used.
    """
    V = _planar(V)
    a, b = tuple(a), tuple(b)
    r = len(vpairs)
    if r < 1:
        raise InputError("need at least one pair on the second side")
    if a == b:
        raise InputError("the two first-side pairs must differ")
    vs = [x for pr in vpairs for x in pr]
    if len(set(vs)) != len(vs):
        raise InputError("second-side pairs must be pairwise disjoint")
    for pr in vpairs:
        for u in (a, b):
            if not quad_holds(V, u, tuple(pr)):
                raise InputError(f"({u}, {tuple(pr)}) is not in Q")
    shared = set(a) & set(b)
    threshold = comb(2 * r + 4, 2) - 2 * r
    pts = [V[i] for i in sorted(set(a) | set(b) | set(vs))]
    if not shared:
        case = 1
    elif len(shared) == 1:
        case = 2
        if extra is None:
            right = max(pt[0] for pt in V) + 1
            w = (right, 0)
        elif isinstance(extra, int):
            w = V[extra]
        else:
            w = tuple(extra)
        if w in pts:
            raise InputError("extra point must be new")
        pts.append(w)
    else:
        raise InputError("first-side pairs sharing both points are not covered")
    count = count_distances(pts)
    return {
        "case": case,
        "r": r,
        "points": len(pts),
        "count": count,
        "threshold": threshold,
        "satisfied": count <= threshold,
    }


def kst_edge_bound(m: int, n: int, r: int) -> int:
    """Largest ``e`` with ``e^2 - n e - (r-1) m (m-1) n <= 0``.

    With ``|U| = m``, ``|V| = n`` and no ``K_{2,r}`` (two vertices in ``U``),
    ``sum_v C(deg v, 2) <= (r-1) C(m, 2)``, and convexity gives the quadratic.
    """
    if n == 0:
        return 0
    c = (r - 1) * m * (m - 1) * n
    e = (n + isqrt(n * n + 4 * c)) // 2
    while e * e - n * e - c > 0:
        e -= 1
    while (e + 1) ** 2 - n * (e + 1) - c <= 0:
        e += 1
    return e


def kst_audit(m: int, n: int, edges: Sequence, r: int) -> dict:
    """Bipartite ``(U = range(m), V = range(n))`` with ``edges`` as ``(u, v)`` pairs."""
    if r < 1:
        raise InputError("r must be positive")
    E = sorted(set((int(u), int(v)) for u, v in edges))
    for u, v in E:
        if not (0 <= u < m and 0 <= v < n):
            raise InputError(f"edge {(u, v)} out of range")
    nbrs = [0] * m
    for u, v in E:
        nbrs[u] |= 1 << v
    witness = None
    for u, w in combinations(range(m), 2):
        if bin(nbrs[u] & nbrs[w]).count("1") >= r:
            witness = (u, w)
            break
    bound = kst_edge_bound(m, n, r)
    scale = m * n**0.5 + n
    return {
        "is_K2r_free": witness is None,
        "witness_pair": witness,
        "edges": len(E),
        "bound": bound,
        "within_bound": witness is not None or len(E) <= bound,
        "asymptotic_ratio": len(E) / scale if scale else 0.0,
        "asymptotic_flag": bool(scale) and len(E) > scale,
    }


def pq_distance_check(V: Sequence, p: int, q: int) -> dict:
    """Every ``p``-subset determines at least ``q`` distances; first failure in lexicographic order."""
    V = _planar(V)
    if p > len(V):
        raise InputError("p exceeds the number of points")
    if p < 2:
        raise InputError("p must be at least 2")
    n = len(V)
    D = [[sqdist(V[i], V[j]) for j in range(n)] for i in range(n)]
    for S in combinations(range(n), p):
        count = len({D[i][j] for i, j in combinations(S, 2)})
        if count < q:
            return {"status": "FAIL", "witness": S, "count": count}
    return {"status": "PASS", "witness": None, "count": None}
