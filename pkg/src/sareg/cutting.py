"""Cuttings: subdivisions of space in which every cell is crossed by few surfaces.

A surface is the zero set of a polynomial ``y -> g(u, y)``. It *crosses* a
cell when it meets the cell without containing it. In one dimension the
test is exact (root isolation); in higher dimension cells are axis-aligned
boxes and the test is certified by exact interval arithmetic, so it can
report a crossing that does not happen but never misses one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import floor, lcm
from typing import Sequence

from .algebra import InputError, Polynomial, exact
from .realroots import RealAlgebraic, compare, isolate_roots

__all__ = [
    "Surface",
    "Crossing",
    "IntervalCell",
    "BoxCell",
    "Cutting",
    "CuttingFailed",
    "crosses",
    "isolate_roots",
    "cut_1d",
    "cut_adaptive",
    "bounding_box",
    "interval_eval",
]


@dataclass(frozen=True)
class Surface:
    poly: Polynomial
    source: tuple = ()

    @property
    def degenerate(self) -> bool:
        return self.poly.is_zero


class Crossing(str, enum.Enum):
    CROSSES = "CROSSES"
    DISJOINT = "DISJOINT"
    CONTAINS = "CONTAINS"


# ---------------------------------------------------------------------------
# cells


@dataclass
class IntervalCell:
    """A convex subset of the real line; ``None`` endpoints are infinite."""

    lo: RealAlgebraic | None
    lo_closed: bool
    hi: RealAlgebraic | None
    hi_closed: bool
    crossing: tuple = ()
    containing: tuple = ()

    @property
    def is_singleton(self) -> bool:
        return self.lo is not None and self.lo is self.hi

    @classmethod
    def singleton(cls, at: RealAlgebraic, containing=()) -> "IntervalCell":
        return cls(at, True, at, True, (), tuple(containing))

    def contains_point(self, x) -> bool:
        if isinstance(x, (tuple, list)):
            (x,) = x
        x = exact(x)
        if self.lo is not None:
            c = self.lo.cmp_rational(x)  # sign(lo - x)
            if c > 0 or (c == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            c = self.hi.cmp_rational(x)
            if c < 0 or (c == 0 and not self.hi_closed):
                return False
        return True

    def contains_root(self, root: RealAlgebraic) -> bool:
        if self.lo is not None:
            c = compare(root, self.lo)
            if c < 0 or (c == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            c = compare(root, self.hi)
            if c > 0 or (c == 0 and not self.hi_closed):
                return False
        return True

    def sample_point(self):
        """A point of the cell: rational when the cell has interior, else the singleton."""
        if self.is_singleton:
            return self.lo
        lo, hi = self.lo, self.hi
        if lo is None and hi is None:
            return 0
        if lo is None:
            return exact(floor(hi.lo) - 1)
        if hi is None:
            return exact(floor(lo.hi) + 1)
        while lo.hi >= hi.lo:
            lo.refine()
            hi.refine()
        return exact(Fraction(lo.hi + hi.lo, 2))


@dataclass
class BoxCell:
    """Closed axis-aligned box; point location resolves shared faces by cell order."""

    lows: tuple
    highs: tuple
    crossing: tuple = ()
    containing: tuple = ()
    depth: int = 0

    def contains_point(self, x) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lows, x, self.highs))

    def sample_point(self):
        return tuple(exact(Fraction(a + b, 2)) for a, b in zip(self.lows, self.highs))


@dataclass
class Cutting:
    cells: list
    r: Fraction
    budget: int
    dim: int
    n_surfaces: int
    idle: tuple = ()
    tree: list = field(default_factory=list, repr=False)
    diagnostics: dict = field(default_factory=dict)

    def max_crossing(self, cells=None) -> int:
        idle = set(self.idle)
        return max(
            (len(c.crossing) for k, c in enumerate(self.cells) if k not in idle and (cells is None or k in cells)),
            default=0,
        )

    def locate(self, x) -> int:
        """Index of the first cell (in cell order) containing the point ``x``."""
        if self.dim == 1:
            (v,) = x if isinstance(x, (tuple, list)) else (x,)
            lo, hi = 0, len(self.cells) - 1
            while lo < hi:
                mid = (lo + hi) // 2
                c = self.cells[mid]
                if c.hi is not None and (
                    c.hi.cmp_rational(v) < 0 or (c.hi.cmp_rational(v) == 0 and not c.hi_closed)
                ):
                    lo = mid + 1
                else:
                    hi = mid
            return lo
        node = self.tree[0]
        while node[0] == "split":
            _, axis, mid, left, right = node
            node = self.tree[left] if x[axis] <= mid else self.tree[right]
        return node[1]


class CuttingFailed(Exception):
    """Some cells could not be brought under the crossing budget."""

    def __init__(self, message, cutting: Cutting, residual: Sequence[int]):
        super().__init__(message)
        self.cutting = cutting
        self.residual = tuple(residual)


# ---------------------------------------------------------------------------
# crossing tests


def _ipow(lo, hi, k):
    if k == 1:
        return lo, hi
    if k % 2 or lo >= 0:
        return lo**k, hi**k
    if hi <= 0:
        return hi**k, lo**k
    return 0, max(lo**k, hi**k)


def interval_eval(poly: Polynomial, lows: Sequence, highs: Sequence):
    """Exact enclosure ``[a, b]`` of ``poly`` over the closed box (natural extension)."""
    tot_lo = tot_hi = 0
    for c, mono in poly._compiled:
        t_lo = t_hi = c
        for i, k in mono:
            a, b = _ipow(lows[i], highs[i], k)
            prods = (t_lo * a, t_lo * b, t_hi * a, t_hi * b)
            t_lo, t_hi = min(prods), max(prods)
        tot_lo += t_lo
        tot_hi += t_hi
    return tot_lo, tot_hi


def _scaled_box(lows, highs):
    # integer box (L, H) and denominator D with lows = L / D
    D = lcm(*(Fraction(v).denominator for v in lows + highs))
    return [int(v * D) for v in lows], [int(v * D) for v in highs], D


def _excludes_zero(poly: Polynomial, L, H, D) -> bool:
    """Whether the natural interval extension over ``[L/D, H/D]`` is zero-free.

    Evaluated as ``D^deg * c * poly`` with integers only; the positive
    scaling leaves the signs of both enclosure ends unchanged.
    """
    deg = poly.degree
    tot_lo = tot_hi = 0
    for c, mono, k in poly.integral_terms():
        t = c * D ** (deg - k)
        t_lo = t_hi = t
        for i, e in mono:
            a, b = _ipow(L[i], H[i], e)
            if t_lo >= 0 and a >= 0:
                t_lo, t_hi = t_lo * a, t_hi * b
            else:
                prods = (t_lo * a, t_lo * b, t_hi * a, t_hi * b)
                t_lo, t_hi = min(prods), max(prods)
        tot_lo += t_lo
        tot_hi += t_hi
    return tot_lo > 0 or tot_hi < 0


def _box_status(poly: Polynomial, lows, highs, scaled=None) -> Crossing:
    if poly.is_zero:
        return Crossing.CONTAINS
    L, H, D = scaled or _scaled_box(lows, highs)
    if _excludes_zero(poly, L, H, D):
        return Crossing.DISJOINT
    return Crossing.CROSSES


def crosses(s: Surface, c) -> Crossing:
    """Classify surface ``s`` against cell ``c``."""
    poly = s.poly
    if poly.is_zero:
        return Crossing.CONTAINS
    if isinstance(c, BoxCell):
        if poly.nvars != len(c.lows):
            raise InputError("surface and cell dimensions differ")
        return _box_status(poly, c.lows, c.highs)
    if poly.nvars != 1:
        raise InputError("interval cells need univariate surfaces")
    coeffs = poly.univariate_coeffs()
    if len(coeffs) == 1:
        return Crossing.DISJOINT
    if c.is_singleton:
        return Crossing.CONTAINS if c.lo.sign_of(coeffs) == 0 else Crossing.DISJOINT
    if any(c.contains_root(r) for r in isolate_roots(coeffs)):
        return Crossing.CROSSES
    return Crossing.DISJOINT


# ---------------------------------------------------------------------------
# one dimension


def _check_r(r) -> Fraction:
    r = Fraction(exact(r))
    if r < 1:
        raise InputError(f"cutting parameter r must be >= 1, got {r}")
    return r


def _events(surfaces: Sequence[Surface]):
    """Distinct real roots of all surfaces, sorted, with the surfaces vanishing there."""
    cache: dict = {}
    raw = []
    for idx, s in enumerate(surfaces):
        if s.poly.is_zero or s.poly.degree <= 0:
            continue
        key = s.poly
        if key not in cache:
            cache[key] = isolate_roots(s.poly.univariate_coeffs())
        for root in cache[key]:
            raw.append((root, idx))
    # identical polynomials share root objects; group those first
    by_root: dict = {}
    order = []
    for root, idx in raw:
        if id(root) not in by_root:
            by_root[id(root)] = (root, [])
            order.append(id(root))
        by_root[id(root)][1].append(idx)
    items = [by_root[k] for k in order]
    items.sort(key=cmp_to_key(lambda a, b: compare(a[0], b[0])))
    events: list = []
    for root, idxs in items:
        if events and compare(events[-1][0], root) == 0:
            events[-1][1].update(idxs)
        else:
            events.append((root, set(idxs)))
    return events


def _separator(a: RealAlgebraic, b: RealAlgebraic):
    """A rational strictly between ``a < b``."""
    while a.hi >= b.lo:
        a.refine()
        b.refine()
    return exact(Fraction(a.hi + b.lo, 2))


def cut_1d(surfaces: Sequence[Surface], r) -> Cutting:
    """Sweep the roots left to right, closing a cell before it exceeds the budget.

    Cells are ``(s_k, s_{k+1}]`` between rational separators; a root shared by
    more than ``budget`` surfaces gets a singleton cell of its own (every
    surface vanishing there contains it, so it is crossed by none).
    """
    r = _check_r(r)
    n = len(surfaces)
    budget = floor(n / r)
    zero = tuple(k for k, s in enumerate(surfaces) if s.poly.is_zero)
    for s in surfaces:
        if s.poly.nvars != 1:
            raise InputError("cut_1d needs univariate surfaces")
    events = _events(surfaces)
    cells: list = []
    cur_lo, cur_closed, cur = None, False, set()
    prev = None
    for root, z in events:
        if len(z) > budget:
            cells.append(IntervalCell(cur_lo, cur_closed, root, False, tuple(sorted(cur)), zero))
            cells.append(IntervalCell.singleton(root, sorted(set(zero) | z)))
            cur_lo, cur_closed, cur = root, False, set()
        elif len(cur | z) > budget:
            sep = RealAlgebraic.rational(_separator(prev, root))
            cells.append(IntervalCell(cur_lo, cur_closed, sep, True, tuple(sorted(cur)), zero))
            cur_lo, cur_closed, cur = sep, False, set(z)
        else:
            cur |= z
        prev = root
    cells.append(IntervalCell(cur_lo, cur_closed, None, False, tuple(sorted(cur)), zero))
    t = max((s.poly.degree for s in surfaces), default=0)
    t = max(t, 1)
    return Cutting(
        cells=cells,
        r=r,
        budget=budget,
        dim=1,
        n_surfaces=n,
        diagnostics={
            "cell_count": len(cells),
            "cell_bound": 2 * t * r + 1,
            "events": len(events),
            "max_degree": t,
        },
    )


# ---------------------------------------------------------------------------
# boxes


def bounding_box(points: Sequence, pad=1):
    if not points:
        raise InputError("bounding box of an empty point set")
    d = len(points[0])
    lows = tuple(exact(min(p[i] for p in points) - pad) for i in range(d))
    highs = tuple(exact(max(p[i] for p in points) + pad) for i in range(d))
    return lows, highs


def cut_adaptive(
    surfaces: Sequence[Surface],
    r,
    d: int,
    depth_cap: int = 40,
    bbox=None,
    points: Sequence | None = None,
    max_cells: int = 200_000,
) -> Cutting:
    """Refine boxes (longest axis, midpoint) until each is crossed by at most ``|surfaces|/r``.

    The region is ``bbox`` (default: bounding box of ``points`` padded by 1).
    With ``points`` given, boxes holding no point are not refined; if still
    over budget they are listed in ``Cutting.idle``. Boxes that hold points
    and remain over budget at ``depth_cap`` (or once ``max_cells`` is reached)
    make the call raise :class:`CuttingFailed`.
    """
    if d < 2:
        raise InputError("cut_adaptive is for d >= 2; use cut_1d")
    r = _check_r(r)
    n = len(surfaces)
    budget = floor(n / r)
    for s in surfaces:
        if s.poly.nvars != d:
            raise InputError("surface dimension differs from d")
    if bbox is None:
        if not points:
            raise InputError("need a bounding box or points")
        bbox = bounding_box(points)
    lows0, highs0 = (tuple(exact(v) for v in b) for b in bbox)
    zero = tuple(k for k, s in enumerate(surfaces) if s.poly.is_zero)
    live = [k for k, s in enumerate(surfaces) if not s.poly.is_zero]
    pts = None if points is None else list(range(len(points)))

    cells: list = []
    tree: list = []
    idle: list = []
    residual: list = []

    def visit(lows, highs, cand, depth, held):
        scaled = _scaled_box(lows, highs)
        crossing = [k for k in cand if _box_status(surfaces[k].poly, lows, highs, scaled) is Crossing.CROSSES]
        node = len(tree)
        tree.append(None)
        over = len(crossing) > budget
        empty = held is not None and not held
        if not over or empty or depth >= depth_cap or len(cells) + 1 >= max_cells:
            if over:
                (idle if empty else residual).append(len(cells))
            tree[node] = ("leaf", len(cells))
            cells.append(BoxCell(lows, highs, tuple(crossing), zero, depth))
            return node
        widths = [b - a for a, b in zip(lows, highs)]
        axis = widths.index(max(widths))
        mid = exact(Fraction(lows[axis] + highs[axis], 2))
        lh = highs[:axis] + (mid,) + highs[axis + 1 :]
        rl = lows[:axis] + (mid,) + lows[axis + 1 :]
        if held is None:
            lheld = rheld = None
        else:
            lheld = [i for i in held if points[i][axis] <= mid]
            rheld = [i for i in held if points[i][axis] > mid]
        left = visit(lows, lh, crossing, depth + 1, lheld)
        right = visit(rl, highs, crossing, depth + 1, rheld)
        tree[node] = ("split", axis, mid, left, right)
        return node

    visit(lows0, highs0, live, 0, pts)
    cutting = Cutting(
        cells=cells,
        r=r,
        budget=budget,
        dim=d,
        n_surfaces=n,
        idle=tuple(idle),
        tree=tree,
        diagnostics={"cell_count": len(cells), "depth_cap": depth_cap, "bbox": (lows0, highs0)},
    )
    if residual:
        raise CuttingFailed(
            f"{len(residual)} cell(s) still crossed by more than {budget} surfaces", cutting, residual
        )
    return cutting
