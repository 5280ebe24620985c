"""Exact real root isolation for univariate rational polynomials.

Polynomials are coefficient lists, lowest degree first. Roots are returned
as :class:`RealAlgebraic` values: either an exact rational or a squarefree
defining polynomial plus an open isolating interval with rational ends.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, gcd, isqrt, lcm

from .algebra import InputError, exact, sign

# -- dense univariate helpers ---------------------------------------------


def strip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return [k * c for k, c in enumerate(p)][1:]


def pdivmod(a, b):
    a = [Fraction(c) for c in strip(a)]
    b = strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = strip(a)
    return strip(q), a


def monic(p):
    p = strip(p)
    if not p:
        return p
    lead = Fraction(p[-1])
    return [exact(Fraction(c) / lead) for c in p]


def pgcd(a, b):
    a, b = strip(a), strip(b)
    while b:
        _, r = pdivmod(a, b)
        a, b = b, r
    return monic(a)


def squarefree(p):
    p = strip(p)
    if len(p) <= 2:
        return monic(p)
    g = pgcd(p, derivative(p))
    q, _ = pdivmod(p, g)
    return monic(q)


def primitive_integer(p):
    """Scale ``p`` to coprime integer coefficients with positive leading term."""
    p = strip(p)
    den = lcm(*(Fraction(c).denominator for c in p))
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def sign_at_infinity(p, positive: bool) -> int:
    p = strip(p)
    if not p:
        return 0
    s = sign(p[-1])
    if not positive and (len(p) - 1) % 2:
        s = -s
    return s


def sturm_sequence(p):
    p = strip(p)
    seq = [p, derivative(p)]
    while strip(seq[-1]):
        _, r = pdivmod(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return [monic_sign(s) for s in seq if strip(s)]


def monic_sign(p):
    # scale by a positive constant only, keeping sign information
    p = strip(p)
    lead = abs(Fraction(p[-1]))
    return [exact(Fraction(c) / lead) for c in p]


def _variations(signs):
    v, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def variations_at(seq, x) -> int:
    """Sign variations of a Sturm sequence at ``x`` (``None`` means -inf, ``True`` +inf)."""
    if x is None:
        return _variations([sign_at_infinity(s, False) for s in seq])
    if x is True:
        return _variations([sign_at_infinity(s, True) for s in seq])
    return _variations([sign(peval(s, x)) for s in seq])


def count_roots(p, lo=None, hi=True, seq=None) -> int:
    """Distinct real roots of ``p`` in the half-open interval ``(lo, hi]``."""
    p = strip(p)
    if not p:
        raise InputError("zero polynomial has infinitely many roots")
    if len(p) == 1:
        return 0
    seq = seq or sturm_sequence(p)
    return variations_at(seq, lo) - variations_at(seq, hi)


def cauchy_bound(p) -> Fraction:
    p = strip(p)
    lead = Fraction(p[-1])
    return 1 + max((abs(Fraction(c) / lead) for c in p[:-1]), default=Fraction(0))


# -- real algebraic numbers -------------------------------------------------


class RealAlgebraic:
    """A real root held exactly.

    When ``value`` is set the root is that rational. Otherwise it is the
    unique root of the squarefree ``poly`` inside the open interval
    ``(lo, hi)``, and ``poly`` is nonzero with opposite signs at both ends.
    Refinement narrows the interval in place; the represented number never
    changes.
    """

    __slots__ = ("poly", "lo", "hi", "value")

    def __init__(self, poly, lo=None, hi=None, value=None):
        self.poly = poly
        self.value = None if value is None else exact(value)
        if self.value is not None:
            self.lo = self.hi = self.value
        else:
            self.lo, self.hi = exact(lo), exact(hi)

    @classmethod
    def rational(cls, x) -> "RealAlgebraic":
        x = exact(x)
        return cls([-x, 1], value=x)

    @property
    def is_rational(self) -> bool:
        return self.value is not None

    def __repr__(self):
        if self.is_rational:
            return f"RealAlgebraic({self.value})"
        return f"RealAlgebraic(root of {self.poly} in ({self.lo}, {self.hi}))"

    def width(self):
        return self.hi - self.lo

    def refine(self) -> None:
        """Halve the isolating interval (may discover the root is the midpoint)."""
        if self.is_rational:
            return
        mid = exact(Fraction(self.lo + self.hi, 2))
        sm = sign(peval(self.poly, mid))
        if sm == 0:
            self.value = mid
            self.lo = self.hi = mid
            return
        if sm == sign(peval(self.poly, self.lo)):
            self.lo = mid
        else:
            self.hi = mid

    def refine_to(self, width) -> None:
        while not self.is_rational and self.width() > width:
            self.refine()

    def cmp_rational(self, x) -> int:
        """Sign of ``self - x`` for rational ``x``."""
        if self.is_rational:
            return sign(self.value - x)
        if x <= self.lo:
            return 1
        if x >= self.hi:
            return -1
        sx = sign(peval(self.poly, x))
        if sx == 0:
            return 0
        # root lies where the sign differs from sign at x
        return 1 if sx == sign(peval(self.poly, self.lo)) else -1

    def sign_of(self, q) -> int:
        """Sign of the univariate polynomial ``q`` at this number."""
        q = strip(q)
        if not q:
            return 0
        if self.is_rational:
            return sign(peval(q, self.value))
        g = pgcd(self.poly, q)
        if len(g) > 1 and _roots_open(g, self.lo, self.hi) > 0:
            return 0
        while True:
            if self.is_rational:
                return sign(peval(q, self.value))
            if sign(peval(q, self.lo)) != 0 and count_roots(q, self.lo, self.hi) == 0:
                return sign(peval(q, self.lo))
            self.refine()

    def approx(self) -> Fraction:
        return Fraction(self.lo + self.hi, 2)


def _roots_open(p, lo, hi) -> int:
    n = count_roots(p, lo, hi)
    if sign(peval(p, hi)) == 0:
        n -= 1
    return n


def compare(a: RealAlgebraic, b: RealAlgebraic) -> int:
    """Exact comparison of two real algebraic numbers."""
    if a.is_rational:
        return -b.cmp_rational(a.value)
    if b.is_rational:
        return a.cmp_rational(b.value)
    rounds = 0
    while True:
        if a.is_rational or b.is_rational:
            return compare(a, b)
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        rounds += 1
        if rounds == 4:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            g = pgcd(a.poly, b.poly)
            if len(g) > 1 and _roots_open(g, lo, hi) > 0:
                return 0
        a.refine()
        b.refine()


def isolate_roots(p) -> list:
    """All distinct real roots of ``p``, sorted, as :class:`RealAlgebraic`.

    Rational roots are always returned exactly: once an interval is
    narrower than ``1/lead`` (``lead`` the leading coefficient of the
    primitive integer form) it holds at most one candidate ``k/lead``.
    """
    p = strip([exact(c) for c in p])
    if not p:
        raise InputError("zero polynomial has no isolated roots")
    if len(p) == 1:
        return []
    q = squarefree(p)
    if len(q) == 1:
        return []
    if len(q) <= 3:
        return _low_degree_roots(q)
    seq = sturm_sequence(q)
    bound = exact(cauchy_bound(q))
    found: list = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        k = count_roots(q, lo, hi, seq)
        if k == 0:
            continue
        if k == 1 and sign(peval(q, hi)) != 0 and sign(peval(q, lo)) != 0:
            found.append(RealAlgebraic(q, lo, hi))
            continue
        if k == 1 and sign(peval(q, hi)) == 0:
            found.append(RealAlgebraic(q, value=hi))
            continue
        mid = exact(Fraction(lo + hi, 2))
        if sign(peval(q, mid)) == 0:
            found.append(RealAlgebraic(q, value=mid))
            # carve out a root-free neighbourhood of mid
            delta = Fraction(hi - lo, 4)
            while count_roots(q, mid - delta, mid + delta, seq) != 1 or sign(peval(q, mid - delta)) == 0:
                delta /= 2
            stack.append((exact(mid + delta), hi))
            stack.append((lo, exact(mid - delta)))
        else:
            stack.append((mid, hi))
            stack.append((lo, mid))
    lead = primitive_integer(q)[-1]
    for r in found:
        if r.is_rational:
            continue
        r.refine_to(Fraction(1, 2 * lead))
        if r.is_rational:
            continue
        for k in range(ceil(r.lo * lead), floor(r.hi * lead) + 1):
            cand = exact(Fraction(k, lead))
            if r.lo < cand < r.hi and peval(q, cand) == 0:
                r.value = cand
                r.lo = r.hi = cand
    found.sort(key=lambda r: r.lo)
    return found


def _low_degree_roots(q) -> list:
    """Closed form for squarefree ``q`` of degree 1 or 2, exact in integers."""
    c = primitive_integer(q)
    if len(c) == 2:
        return [RealAlgebraic(q, value=exact(Fraction(-c[0], c[1])))]
    a0, b, a = c  # a > 0
    disc = b * b - 4 * a * a0
    if disc < 0:
        return []
    s = isqrt(disc)
    if s * s == disc:
        return [RealAlgebraic(q, value=exact(Fraction(-b + t, 2 * a))) for t in (-s, s)]
    # sqrt(disc) lies strictly inside (s, s + 1)
    return [
        RealAlgebraic(q, exact(Fraction(-b - s - 1, 2 * a)), exact(Fraction(-b - s, 2 * a))),
        RealAlgebraic(q, exact(Fraction(-b + s, 2 * a)), exact(Fraction(-b + s + 1, 2 * a))),
    ]
