"""Segment-intersection graphs placed in far-apart copies.

Copies of a triangle-free segment family sit in small balls centred at
``(i, 0)``; two segments are adjacent when they intersect or when their left
endpoints are at least 1/2 apart. Cross-copy pairs are therefore always
adjacent, and a clique meets each copy in at most two segments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import floor
from typing import Sequence

from .algebra import (
    And,
    Atom,
    InputError,
    Not,
    Or,
    Polynomial,
    RelationFamily,
    SemiAlgebraicRelation,
    exact,
    make_points,
)
from .graphs import adjacency, bits, max_clique, max_independent_set
from .regularity import PartitionDegraded, partition_homogeneous

__all__ = [
    "Segment",
    "RTGraph",
    "orientation",
    "segments_intersect",
    "segment_relation",
    "compose_rt",
    "intersection_graph",
    "clique_number",
    "independence_number",
    "rt_upper_audit",
    "triangle_free_fixture",
    "EXACT_CAP",
]

EXACT_CAP = 60
RADIUS = Fraction(1, 10)
FAR = Fraction(1, 4)


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(exact(c) for c in self.a)
        b = tuple(exact(c) for c in self.b)
        if len(a) != 2 or len(b) != 2:
            raise InputError("segments are planar")
        if a == b:
            raise InputError("segment endpoints must differ")
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def left(self) -> tuple:
        return self.a

    def as_point(self) -> tuple:
        return self.a + self.b

    def translate(self, dx, dy=0) -> "Segment":
        return Segment((self.a[0] + dx, self.a[1] + dy), (self.b[0] + dx, self.b[1] + dy))


def orientation(p, q, r) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _on_segment(p, q, r) -> bool:
    # r collinear with pq
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def segments_intersect(s: Segment, t: Segment) -> bool:
    """Closed segments meet (touching and collinear overlap included)."""
    p1, q1, p2, q2 = s.a, s.b, t.a, t.b
    o1 = orientation(p1, q1, p2)
    o2 = orientation(p1, q1, q2)
    o3 = orientation(p2, q2, p1)
    o4 = orientation(p2, q2, q1)
    if o1 != o2 and o3 != o4 and o1 * o2 <= 0 and o3 * o4 <= 0:
        return True
    if o1 == 0 and _on_segment(p1, q1, p2):
        return True
    if o2 == 0 and _on_segment(p1, q1, q2):
        return True
    if o3 == 0 and _on_segment(p2, q2, p1):
        return True
    if o4 == 0 and _on_segment(p2, q2, q1):
        return True
    return False


def _far(s: Segment, t: Segment) -> bool:
    return (s.a[0] - t.a[0]) ** 2 + (s.a[1] - t.a[1]) ** 2 >= FAR


def rt_adjacent(s: Segment, t: Segment) -> bool:
    return segments_intersect(s, t) or _far(s, t)


def segment_relation() -> SemiAlgebraicRelation:
    """The adjacency rule on R^4 (segment = left endpoint, right endpoint).

    Atoms: both straddle tests, "all four collinear", x-overlap, a
    verticality test with y-overlap, and the far-apart test.
    """
    X = Polynomial.variables(8)
    a, b, c, d = (X[0], X[1]), (X[2], X[3]), (X[4], X[5]), (X[6], X[7])

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    polys = (
        -(o1 * o2),
        -(o3 * o4),
        -(o1 * o1 + o2 * o2),
        b[0] - c[0],
        d[0] - a[0],
        a[0] - b[0],
        b[1] - c[1],
        d[1] - a[1],
        (a[0] - c[0]) ** 2 + (a[1] - c[1]) ** 2 - FAR,
    )
    overlap = And((Atom(3), Atom(4), Or((Not(Atom(5)), And((Atom(6), Atom(7)))))))
    meet = And((Atom(0), Atom(1), Or((Not(Atom(2)), overlap))))
    return SemiAlgebraicRelation(polys, Or((meet, Atom(8))), 10, 4, "rt")


def intersection_graph(S: Sequence[Segment]) -> list:
    n = len(S)
    return adjacency(n, [(i, j) for i, j in combinations(range(n), 2) if segments_intersect(S[i], S[j])])


@dataclass
class RTGraph:
    segments: list
    adj: list
    p: int
    copy_of: list
    relation: SemiAlgebraicRelation = field(default_factory=segment_relation, repr=False)

    @property
    def n(self) -> int:
        return len(self.segments)

    @property
    def points(self) -> tuple:
        return tuple(s.as_point() for s in self.segments)

    def edges(self) -> list:
        return [(i, j) for i in range(self.n) for j in bits(self.adj[i]) if i < j]

    def edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2


def compose_rt(S: Sequence[Segment], p: int, check_triangle_free: bool = True) -> RTGraph:
    """``p - 1`` translated copies of ``S``; copy ``i`` sits in the ball at ``(i, 0)``."""
    if p < 2:
        raise InputError("p must be at least 2")
    S = [s if isinstance(s, Segment) else Segment(*s) for s in S]
    if not S:
        raise InputError("empty segment family")
    for s in S:
        for pt in (s.a, s.b):
            if pt[0] ** 2 + pt[1] ** 2 > RADIUS**2:
                raise InputError(f"segment endpoint {pt} lies outside the radius-1/10 ball")
    warnings = []
    if check_triangle_free:
        if len(S) <= EXACT_CAP:
            if len(max_clique(intersection_graph(S), target=3)) >= 3:
                raise InputError("segment family has a triangle in its intersection graph")
        else:
            warnings.append("triangle-freeness not checked above 60 segments")
    segs, copy_of = [], []
    for i in range(1, p):
        for s in S:
            segs.append(s.translate(i))
            copy_of.append(i)
    n = len(segs)
    adj = adjacency(n, [(u, v) for u, v in combinations(range(n), 2) if rt_adjacent(segs[u], segs[v])])
    G = RTGraph(segs, adj, p, copy_of)
    G.warnings = warnings
    return G


def _check_cap(adj, cap):
    if len(adj) > cap:
        raise InputError(f"exact search capped at {cap} vertices")


def clique_number(adj: Sequence[int], cap: int = EXACT_CAP) -> int:
    _check_cap(adj, cap)
    return len(max_clique(adj))


def independence_number(adj: Sequence[int], cap: int = EXACT_CAP) -> int:
    _check_cap(adj, cap)
    return len(max_independent_set(adj))


def triangle_free_fixture() -> list:
    """Nine segments: sides of a near-regular 9-gon, each extended by a tenth at both ends.

    Neighbouring sides cross near the shared corner, others stay apart, so
    the intersection graph is the 9-cycle (triangle-free, independence 4).
    Vertices are rational approximations on the circle of radius 1/20.
    """
    from math import cos, pi, sin

    R = Fraction(1, 20)
    verts = []
    for k in range(9):
        ang = 2 * pi * k / 9
        verts.append((R * Fraction(round(1000 * cos(ang)), 1000), R * Fraction(round(1000 * sin(ang)), 1000)))
    out = []
    for k in range(9):
        (x0, y0), (x1, y1) = verts[k], verts[(k + 1) % 9]
        dx, dy = (x1 - x0) / 10, (y1 - y0) / 10
        out.append(Segment((x0 - dx, y0 - dy), (x1 + dx, y1 + dy)))
    return out


# ---------------------------------------------------------------------------
# the deletion argument, audited


def rt_upper_audit(points: Sequence, relation: SemiAlgebraicRelation, eps, p: int) -> dict:
    """Partition for ``{E, not E}`` at ``eps/4``, delete intra-part and irregular edges, inspect what is left.

    If ``p`` parts are pairwise complete, either one of them is independent
    or an edge in each gives a ``K_{2p}``; otherwise the reduced graph is
    ``K_p``-free and its edge count is compared with Turán's bound.
    """
    eps = Fraction(exact(eps))
    if not 0 < eps < 1:
        raise InputError("epsilon must lie in (0, 1)")
    if p < 2:
        raise InputError("p must be at least 2")
    V = make_points(points)
    n = len(V)
    comp = SemiAlgebraicRelation(relation.polys, Not(relation.formula), relation.complexity, relation.dim, "not-" + (relation.name or "E"))
    F = RelationFamily((relation, comp), covering=True, disjoint=True)
    edges = [(i, j) for i, j in combinations(range(n), 2) if relation.holds(V[i], V[j])]
    adj = adjacency(n, edges)
    degraded = False
    try:
        P = partition_homogeneous(V, F, eps / 4)
    except PartitionDegraded as exc:
        P = exc.partition
        degraded = True
    parts = P.parts
    K = len(parts)
    part_of = P.part_of()
    intra = sum(1 for i, j in edges if part_of[i] == part_of[j])
    # part pair status: 1 complete in E, 0 empty in E, None mixed
    status: dict = {}
    for a, b in combinations(range(K), 2):
        cnt = sum(1 for u in parts[a] for v in parts[b] if adj[u] >> v & 1)
        full = len(parts[a]) * len(parts[b])
        status[(a, b)] = 1 if cnt == full else (0 if cnt == 0 else None)
    mixed_edges = 0
    for i, j in edges:
        a, b = sorted((part_of[i], part_of[j]))
        if a != b and status[(a, b)] is None:
            mixed_edges += 1
    remaining = len(edges) - intra - mixed_edges
    threshold = Fraction(1, 2) * (1 - Fraction(1, p - 1) + eps / 5) * n * n
    reduced = adjacency(K, [ab for ab, st in status.items() if st == 1])
    kp = max_clique(reduced, target=p)
    report = {
        "n": n,
        "p": p,
        "eps": eps,
        "K": K,
        "degraded": degraded,
        "edges": len(edges),
        "intra_part_edges": intra,
        "irregular_pair_edges": mixed_edges,
        "remaining_edges": remaining,
        "remaining_threshold": threshold,
        "remaining_below_threshold": remaining <= threshold,
        "reduced_edges": sum(1 for st in status.values() if st == 1),
        "outcome": None,
    }
    if not edges:
        report["outcome"] = "independent"
        report["independent_set"] = list(range(n))
        return report
    if len(kp) >= p:
        kp = kp[:p]
        inner = []
        for a in kp:
            e = next(((u, v) for u, v in combinations(parts[a], 2) if adj[u] >> v & 1), None)
            inner.append(e)
        if all(e is not None for e in inner):
            wit = sorted(x for e in inner for x in e)
            assert all(adj[u] >> v & 1 for u, v in combinations(wit, 2))
            report["outcome"] = "clique"
            report["clique_witness"] = wit
        else:
            best = max((a for a, e in zip(kp, inner) if e is None), key=lambda a: (len(parts[a]), -a))
            report["outcome"] = "independent"
            report["independent_set"] = sorted(parts[best])
            report["independent_meets_n_over_K"] = len(parts[best]) >= floor(n / K)
        report["reduced_clique"] = kp
    else:
        turan = Fraction(1, 2) * (1 - Fraction(1, p - 1)) * K * K
        report["outcome"] = "no_reduced_Kp"
        report["turan_bound"] = turan
        report["turan_consistent"] = report["reduced_edges"] <= turan
    return report
