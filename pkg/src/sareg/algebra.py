"""Exact polynomials, sign formulas and semi-algebraic relations.

Every value here is an exact rational. Integers are kept as ``int`` (Python
mixes them freely with :class:`~fractions.Fraction`), which keeps evaluation
on integer data fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]
Point = tuple  # tuple of exact rationals
Exps = tuple


class InputError(ValueError):
    """Raised when an operation's preconditions are violated by its inputs."""


def exact(x) -> Number:
    """Coerce ``x`` to an exact rational, as ``int`` when integral.

    Accepts ints, Fractions and strings such as ``"3/4"``; floats are
    rejected so that no rounded value can slip into a predicate.
    """
    if isinstance(x, bool):
        raise InputError(f"boolean is not a rational: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        try:
            f = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {x!r}") from exc
        return f.numerator if f.denominator == 1 else f
    if isinstance(x, Rational):
        f = Fraction(x.numerator, x.denominator)
        return f.numerator if f.denominator == 1 else f
    raise InputError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def make_point(coords: Iterable) -> Point:
    return tuple(exact(c) for c in coords)


def make_points(rows: Iterable[Iterable], dim: int | None = None) -> tuple:
    pts = tuple(make_point(r) for r in rows)
    if pts:
        d = len(pts[0]) if dim is None else dim
        for k, p in enumerate(pts):
            if len(p) != d:
                raise InputError(f"point {k} has dimension {len(p)}, expected {d}")
    return pts


def sign(x) -> int:
    return (x > 0) - (x < 0)


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (length ``nvars``) to nonzero
    coefficients, stored in lexicographic exponent order.
    """

    __slots__ = ("nvars", "terms", "degree", "_compiled", "_integral")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None):
        if nvars < 0:
            raise InputError("nvars must be nonnegative")
        clean: dict = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise InputError(f"bad exponent vector {e} for {nvars} variables")
            c = exact(c)
            if c:
                clean[e] = c
        self.nvars = nvars
        self.terms = dict(sorted(clean.items()))
        self.degree = max((sum(e) for e in self.terms), default=-1)
        self._compiled = tuple(
            (c, tuple((i, k) for i, k in enumerate(e) if k)) for e, c in self.terms.items()
        )
        self._integral = None

    def integral_terms(self) -> tuple:
        """Terms ``(a, mono, total_degree)`` with integer ``a``, a positive multiple of the coefficients."""
        if self._integral is None:
            den = lcm(*(Fraction(c).denominator for c in self.terms.values())) if self.terms else 1
            self._integral = tuple(
                (int(c * den), mono, sum(k for _, k in mono)) for c, mono in self._compiled
            )
        return self._integral

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise InputError(f"variable index {i} out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def variables(cls, nvars: int) -> list:
        return [cls.var(i, nvars) for i in range(nvars)]

    # -- basic queries ------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return self.degree <= 0

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Polynomial(" + " + ".join(parts) + ")"

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise InputError("polynomials live in different numbers of variables")
            return other
        return Polynomial.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("only nonnegative integer powers")
        result = Polynomial.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- evaluation ---------------------------------------------------
    def __call__(self, *values) -> Number:
        if len(values) == 1 and isinstance(values[0], (tuple, list)):
            values = values[0]
        if len(values) != self.nvars:
            raise InputError(f"expected {self.nvars} values, got {len(values)}")
        total = 0
        for c, mono in self._compiled:
            t = c
            for i, k in mono:
                t = t * values[i] ** k
            total += t
        return exact(total) if isinstance(total, Fraction) else total

    def sign_at(self, values: Sequence) -> int:
        """Sign of the value at ``values``, computed in integers only."""
        if len(values) != self.nvars:
            raise InputError(f"expected {self.nvars} values, got {len(values)}")
        if all(type(v) is int for v in values):
            nums, den = values, 1
        else:
            den = lcm(*(Fraction(v).denominator for v in values))
            nums = [int(v * den) for v in values]
        deg = self.degree
        total = 0
        for a, mono, td in self.integral_terms():
            t = a if den == 1 or td == deg else a * den ** (deg - td)
            for i, k in mono:
                t *= nums[i] ** k
            total += t
        return (total > 0) - (total < 0)

    def substitute_prefix(self, values: Sequence) -> "Polynomial":
        """Fix the first ``len(values)`` variables; return a polynomial in the rest."""
        k = len(values)
        if k > self.nvars:
            raise InputError("too many substitution values")
        out: dict = {}
        for e, c in self.terms.items():
            t = c
            for i in range(k):
                if e[i]:
                    t = t * values[i] ** e[i]
            key = e[k:]
            out[key] = out.get(key, 0) + t
        return Polynomial(self.nvars - k, out)

    def remap(self, nvars: int, mapping: Sequence[int]) -> "Polynomial":
        """Rename variable ``i`` to ``mapping[i]`` inside an ``nvars``-variable ring."""
        if len(mapping) != self.nvars:
            raise InputError("mapping length must equal nvars")
        out: dict = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                new[mapping[i]] += k
            key = tuple(new)
            out[key] = out.get(key, 0) + c
        return Polynomial(nvars, out)

    def univariate_coeffs(self) -> list:
        """Coefficients lowest degree first (requires ``nvars == 1``)."""
        if self.nvars != 1:
            raise InputError("not a univariate polynomial")
        if self.is_zero:
            return []
        out = [0] * (self.degree + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    @classmethod
    def from_univariate(cls, coeffs: Sequence) -> "Polynomial":
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    def swap_halves(self) -> "Polynomial":
        """For a polynomial in 2d variables, exchange the two d-blocks."""
        if self.nvars % 2:
            raise InputError("odd number of variables")
        d = self.nvars // 2
        return self.remap(self.nvars, [i + d if i < d else i - d for i in range(self.nvars)])


def eval_polynomial(p: Polynomial, u: Sequence, v: Sequence) -> Number:
    """Exact value of ``p`` at the concatenation ``(u, v)``."""
    if len(u) != len(v) or p.nvars != 2 * len(u):
        raise InputError(f"dimension mismatch: {len(u)}+{len(v)} values for {p.nvars} variables")
    return p(tuple(u) + tuple(v))


# ---------------------------------------------------------------------------
# Boolean formulas over atoms "g_k >= 0"


@dataclass(frozen=True)
class Atom:
    index: int

    def evaluate(self, signs: Sequence[int]) -> bool:
        return signs[self.index] >= 0

    def atoms(self):
        yield self.index


@dataclass(frozen=True)
class Not:
    arg: object

    def evaluate(self, signs):
        return not self.arg.evaluate(signs)

    def atoms(self):
        yield from self.arg.atoms()


@dataclass(frozen=True)
class And:
    args: tuple

    def evaluate(self, signs):
        return all(a.evaluate(signs) for a in self.args)

    def atoms(self):
        for a in self.args:
            yield from a.atoms()


@dataclass(frozen=True)
class Or:
    args: tuple

    def evaluate(self, signs):
        return any(a.evaluate(signs) for a in self.args)

    def atoms(self):
        for a in self.args:
            yield from a.atoms()


Formula = Union[Atom, Not, And, Or]


def all_of(*args) -> And:
    return And(tuple(args))


def any_of(*args) -> Or:
    return Or(tuple(args))


def shift_formula(f: Formula, offset: int) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.index + offset)
    if isinstance(f, Not):
        return Not(shift_formula(f.arg, offset))
    if isinstance(f, And):
        return And(tuple(shift_formula(a, offset) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(shift_formula(a, offset) for a in f.args))
    raise InputError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemiAlgebraicRelation:
    """A binary relation on points of R^dim decided by sign conditions."""

    polys: tuple
    formula: Formula
    complexity: int
    dim: int
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if len(self.polys) > self.complexity:
            raise InputError(f"{len(self.polys)} polynomials exceed complexity {self.complexity}")
        for p in self.polys:
            if p.nvars != 2 * self.dim:
                raise InputError(f"polynomial has {p.nvars} variables, expected {2 * self.dim}")
            if p.degree > self.complexity:
                raise InputError(f"polynomial degree {p.degree} exceeds complexity {self.complexity}")
        for k in self.formula.atoms():
            if not 0 <= k < len(self.polys):
                raise InputError(f"formula atom {k} out of range")

    @property
    def s(self) -> int:
        return len(self.polys)

    def signs(self, u: Sequence, v: Sequence) -> tuple:
        if len(u) != self.dim or len(v) != self.dim:
            raise InputError(f"points must have dimension {self.dim}")
        x = tuple(u) + tuple(v)
        return tuple(p.sign_at(x) for p in self.polys)

    def holds(self, u: Sequence, v: Sequence) -> bool:
        return self.formula.evaluate(self.signs(u, v))

    def structurally_symmetric(self) -> bool:
        """True when swapping u and v permutes the polynomial list."""
        return set(self.polys) == {p.swap_halves() for p in self.polys}


def relation_holds(E: SemiAlgebraicRelation, u: Sequence, v: Sequence) -> bool:
    return E.holds(u, v)


@dataclass(frozen=True)
class RelationFamily:
    relations: tuple
    covering: bool = True
    disjoint: bool = False

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if not self.relations:
            raise InputError("empty relation family")
        dims = {r.dim for r in self.relations}
        if len(dims) != 1:
            raise InputError(f"relations disagree on dimension: {sorted(dims)}")
        # polynomials shared between relations are evaluated once per pair
        distinct: dict = {}
        plan = tuple(tuple(distinct.setdefault(p, len(distinct)) for p in r.polys) for r in self.relations)
        object.__setattr__(self, "_distinct", tuple(distinct))
        object.__setattr__(self, "_plan", plan)

    @property
    def m(self) -> int:
        return len(self.relations)

    @property
    def dim(self) -> int:
        return self.relations[0].dim

    @property
    def s_total(self) -> int:
        return sum(r.s for r in self.relations)

    def mask(self, u, v) -> int:
        """Bit ``i`` set iff relation ``i`` holds on ``(u, v)``."""
        if len(u) != self.dim or len(v) != self.dim:
            raise InputError(f"points must have dimension {self.dim}")
        x = tuple(u) + tuple(v)
        signs = [p.sign_at(x) for p in self._distinct]
        out = 0
        for i, (r, idx) in enumerate(zip(self.relations, self._plan)):
            if r.formula.evaluate([signs[k] for k in idx]):
                out |= 1 << i
        return out


class PairTable:
    """Relation-membership bitmasks for every unordered pair of a point set.

    Evaluated once and shared by the validators and verifiers, which would
    otherwise each redo the O(n^2 m) scan.
    """

    def __init__(self, points: Sequence, family: RelationFamily, check_symmetry: bool = False):
        self.points = tuple(points)
        self.family = family
        n = len(self.points)
        self.n = n
        rows = [[0] * n for _ in range(n)]
        self.asymmetric: list = []
        # swap-invariant polynomials give identical signs in both orders
        if check_symmetry and all(p.swap_halves() == p for r in family.relations for p in r.polys):
            check_symmetry = False
        for i in range(n):
            pi = self.points[i]
            ri = rows[i]
            for j in range(i + 1, n):
                mk = family.mask(pi, self.points[j])
                if check_symmetry:
                    back = family.mask(self.points[j], pi)
                    if back != mk:
                        self.asymmetric.append((i, j))
                ri[j] = mk
                rows[j][i] = mk
        self.rows = rows

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.rows[i][j]


@dataclass
class FamilyReport:
    covering_violations: list = field(default_factory=list)
    disjointness_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.covering_violations and not self.disjointness_violations


def validate_family(F: RelationFamily, V: Sequence, table: PairTable | None = None) -> FamilyReport:
    """Exhaustively list uncovered pairs and pairs lying in two or more relations."""
    table = table or PairTable(V, F)
    report = FamilyReport()
    for i, j in combinations(range(table.n), 2):
        mk = table.rows[i][j]
        if mk == 0:
            report.covering_violations.append((i, j))
        elif mk & (mk - 1):
            report.disjointness_violations.append((i, j))
    return report


def symmetry_violations(E: SemiAlgebraicRelation, V: Sequence) -> list:
    return [(i, j) for i, j in combinations(range(len(V)), 2) if E.holds(V[i], V[j]) != E.holds(V[j], V[i])]


def symmetrize_ordered_relation(E: SemiAlgebraicRelation, V: Sequence, ranks: Sequence[int] | None = None):
    """Lift an order-dependent relation to a symmetric one in one more dimension.

    Point ``V[k]`` becomes ``(V[k], rank_k)``; the lifted relation compares
    the last coordinates to decide which point comes first and then applies
    ``E`` to the original coordinates in that order.
    """
    d = E.dim
    ranks = list(range(1, len(V) + 1)) if ranks is None else [exact(r) for r in ranks]
    if len(ranks) != len(V):
        raise InputError("one rank per point required")
    if len(set(ranks)) != len(ranks):
        raise InputError("duplicate ranks")
    lifted = tuple(make_point(tuple(v) + (r,)) for v, r in zip(V, ranks))
    n2 = 2 * (d + 1)
    a = Polynomial.var(d, n2)
    b = Polynomial.var(2 * d + 1, n2)
    forward = [i if i < d else i + 1 for i in range(2 * d)]
    backward = [i + d + 1 if i < d else i - d for i in range(2 * d)]
    polys = [a - b, b - a]
    polys += [p.remap(n2, forward) for p in E.polys]
    polys += [p.remap(n2, backward) for p in E.polys]
    s = E.s
    formula = Or(
        (
            And((Not(Atom(0)), shift_formula(E.formula, 2))),
            And((Not(Atom(1)), shift_formula(E.formula, 2 + s))),
        )
    )
    rel = SemiAlgebraicRelation(
        tuple(polys), formula, 2 * E.complexity + 2, d + 1, name=(E.name + "*") if E.name else "lifted"
    )
    return lifted, rel
