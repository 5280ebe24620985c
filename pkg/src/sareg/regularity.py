"""Homogeneous partitions of a point set with respect to a relation family.

Points are cut by the surfaces ``y -> g(u, y)`` of every point ``u`` and
every polynomial ``g`` of the family. Two points land in the same part when
they share a cell and, on every occupied cell, agree on which of their
surfaces cross it and on the constant sign of the others. A pair of parts
(A, B) is then complete for some relation whenever B's surfaces avoid A's
cell, so only pairs that involve a crossing can be bad.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil
from typing import Sequence

from .algebra import InputError, PairTable, RelationFamily, exact, make_points
from .cutting import (
    Cutting,
    CuttingFailed,
    Surface,
    cut_1d,
    cut_adaptive,
)
from .realroots import RealAlgebraic

__all__ = [
    "Partition",
    "HomogeneityReport",
    "PartitionDegraded",
    "build_surfaces",
    "partition_homogeneous",
    "verify_homogeneity",
    "equitable_refine",
    "sign_signature",
]

CROSS = "X"


@dataclass
class Partition:
    parts: list
    provenance: list = field(default_factory=list)
    signatures: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    cutting: Cutting | None = field(default=None, repr=False)

    @property
    def K(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    def part_of(self) -> dict:
        return {v: k for k, part in enumerate(self.parts) for v in part}

    def sizes(self) -> list:
        return [len(p) for p in self.parts]

    def is_cover(self, n: int) -> bool:
        seen = sorted(v for p in self.parts for v in p)
        return seen == list(range(n)) and all(self.parts)


@dataclass
class HomogeneityReport:
    bad_pairs: list
    bad_mass: Fraction
    witnesses: dict
    n: int
    K: int

    @property
    def bad_fraction(self) -> Fraction:
        total = self.K * (self.K - 1) // 2
        return Fraction(len(self.bad_pairs), total) if total else Fraction(0)


class PartitionDegraded(Exception):
    """Cutting left too many points unresolved for the requested ε."""

    def __init__(self, message, partition: Partition, residual_mass: Fraction):
        super().__init__(message)
        self.partition = partition
        self.residual_mass = residual_mass


def build_surfaces(V: Sequence, F: RelationFamily) -> list:
    """One surface per (point, relation, polynomial), in that nesting order."""
    out = []
    for u_idx, u in enumerate(V):
        for i, rel in enumerate(F.relations):
            for j, g in enumerate(rel.polys):
                out.append(Surface(g.substitute_prefix(u), (u_idx, i, j)))
    return out


def _check_eps(eps) -> Fraction:
    eps = Fraction(exact(eps))
    if not 0 < eps < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def _constant_sign(surface: Surface, pt) -> int:
    if surface.poly.is_zero:
        return 0
    if isinstance(pt, RealAlgebraic):
        return pt.sign_of(surface.poly.univariate_coeffs())
    if not isinstance(pt, tuple):
        pt = (pt,)
    return surface.poly.sign_at(pt)


def sign_signature(u: int, surfaces: Sequence[Surface], s_total: int, cutting: Cutting, cells: Sequence[int], samples=None):
    """Per occupied cell, per surface of point ``u``: ``"X"`` if it crosses, else its constant sign."""
    sig = []
    base = u * s_total
    for c in cells:
        cell = cutting.cells[c]
        crossing = set(cell.crossing)
        pt = samples[c] if samples is not None else cell.sample_point()
        for k in range(base, base + s_total):
            sig.append(CROSS if k in crossing else _constant_sign(surfaces[k], pt))
    return tuple(sig)


def partition_homogeneous(V: Sequence, F: RelationFamily, eps, depth_cap: int = 40) -> Partition:
    eps = _check_eps(eps)
    V = make_points(V)
    n = len(V)
    if n == 0:
        raise InputError("empty point set")
    if len(V[0]) != F.dim:
        raise InputError("point dimension differs from the family")
    table = PairTable(V, F, check_symmetry=True)
    uncovered = [(i, j) for i, j in combinations(range(n), 2) if table.rows[i][j] == 0]
    if uncovered:
        raise InputError(f"family does not cover {len(uncovered)} pair(s), e.g. {uncovered[0]}")
    if table.asymmetric:
        raise InputError(f"family is not symmetric on {len(table.asymmetric)} pair(s), e.g. {table.asymmetric[0]}")
    s_total = F.s_total
    surfaces = build_surfaces(V, F)
    r = Fraction(s_total) / eps if s_total else Fraction(1)
    r = max(r, Fraction(1))
    residual_cells: tuple = ()
    if F.dim == 1:
        cutting = cut_1d(surfaces, r)
    else:
        try:
            cutting = cut_adaptive(surfaces, r, F.dim, depth_cap=depth_cap, points=V)
        except CuttingFailed as exc:
            cutting = exc.cutting
            residual_cells = exc.residual
    loc = [cutting.locate(p) for p in V]
    residual = set(residual_cells)
    quarantine = [i for i in range(n) if loc[i] in residual]
    q = len(quarantine)
    residual_mass = Fraction(q * (n - q), n * n)
    occupied = sorted(set(loc))
    samples = {c: cutting.cells[c].sample_point() for c in occupied}
    groups: dict = {}
    order = []
    for i in range(n):
        if loc[i] in residual:
            continue
        key = (loc[i], sign_signature(i, surfaces, s_total, cutting, occupied, samples))
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(i)
    order.sort(key=lambda k: (k[0], groups[k][0]))
    sig_ids: dict = {}
    parts, prov, sigs = [], [], []
    for key in order:
        sid = sig_ids.setdefault(key[1], len(sig_ids))
        parts.append(groups[key])
        prov.append((key[0], sid))
        sigs.append(key[1])
    for i in quarantine:
        parts.append([i])
        prov.append((loc[i], None))
        sigs.append(None)
    P = Partition(
        parts=parts,
        provenance=prov,
        signatures=sigs,
        diagnostics={
            "K": len(parts),
            "n": n,
            "eps": eps,
            "r": r,
            "surfaces": len(surfaces),
            "cells": len(cutting.cells),
            "occupied_cells": len(occupied),
            "max_crossing": cutting.max_crossing(),
            "budget": cutting.budget,
            "quarantined": q,
            "residual_mass": residual_mass,
        },
        cutting=cutting,
    )
    if residual_mass > eps / 2:
        raise PartitionDegraded(
            f"residual mass {residual_mass} exceeds eps/2 = {eps / 2}", P, residual_mass
        )
    return P


def verify_homogeneity(V: Sequence, F: RelationFamily, P: Partition, table: PairTable | None = None) -> HomogeneityReport:
    """Exhaustively test every pair of parts for single-relation completeness."""
    V = make_points(V)
    n = len(V)
    if not P.is_cover(n):
        raise InputError("partition does not cover the point set exactly once")
    table = table or PairTable(V, F)
    full = (1 << F.m) - 1
    bad, witnesses = [], {}
    mass = 0
    rows = table.rows
    for a, b in combinations(range(P.K), 2):
        alive = full
        killers: dict = {}
        for u in P.parts[a]:
            ru = rows[u]
            for v in P.parts[b]:
                mk = ru[v]
                dead = alive & ~mk
                if dead:
                    for i in range(F.m):
                        if dead >> i & 1:
                            killers[i] = (u, v)
                    alive &= mk
                    if not alive:
                        break
            if not alive:
                break
        if not alive:
            bad.append((a, b))
            witnesses[(a, b)] = {F.relations[i].name or f"E{i}": killers[i] for i in sorted(killers)}
            mass += len(P.parts[a]) * len(P.parts[b])
    return HomogeneityReport(bad, Fraction(mass, n * n) if n else Fraction(0), witnesses, n, P.K)


def equitable_refine(V: Sequence, P: Partition, eps) -> Partition:
    """Split ``P`` into ``K = min(ceil(8K'/eps), n)`` parts whose sizes differ by at most one.

    Each old part is carved into blocks of the target sizes while quota
    remains; leftovers are pooled (in old-part order) and fill the rest.
    """
    eps = _check_eps(eps)
    n = len(V)
    if not P.is_cover(n):
        raise InputError("partition does not cover the point set exactly once")
    K = min(ceil(8 * P.K / eps), n)
    q, rem = divmod(n, K)
    big_left, small_left = rem, K - rem  # blocks of size q+1 and q still to place
    blocks, origin, pool = [], [], []
    for k, part in enumerate(P.parts):
        part = list(part)
        while part:
            if big_left and len(part) >= q + 1:
                size = q + 1
                big_left -= 1
            elif small_left and len(part) >= q:
                size = q
                small_left -= 1
            else:
                break
            blocks.append(part[:size])
            origin.append(k)
            part = part[size:]
        pool.extend(part)
    for size, count in ((q + 1, big_left), (q, small_left)):
        for _ in range(count):
            blocks.append(pool[:size])
            origin.append(None)
            pool = pool[size:]
    assert not pool and len(blocks) == K
    return Partition(
        parts=blocks,
        provenance=origin,
        diagnostics={"K": K, "K_prev": P.K, "eps": eps, "sizes": (q, q + 1 if rem else q)},
    )
