"""Valued power series over Q: Gauss norms, Newton polygons, zero counting.

A ``CertifiedSeries`` is a finite head of exact rational coefficients plus,
for genuinely infinite series, a ``TailBound``: a proven lower bound on the
valuation of every coefficient past the head.  Everything is measured in
valuation units, so ``log|f|_r`` at ``t = log_p r`` is the upper envelope
``max_n (n*t - v(a_n))`` and every breakpoint is rational.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import isprime

from .pl import PLFun, Rational, as_domain, exact, linear, pl_max_all

ORDER_CAP = 512
TAIL_SCAN_CAP = 200_000


class SeriesError(ValueError):
    pass


class ZeroSeriesError(SeriesError):
    """The zero series has norm -inf everywhere; no norm operation accepts it."""


class UncertifiedError(SeriesError):
    """The requested quantity is not determined by the available data."""


class OrderCapError(SeriesError):
    pass


# -- valuations ---------------------------------------------------------------


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class ValuationSpec:
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "p-adic":
            if not isinstance(self.p, int) or not isprime(self.p):
                raise ValueError(f"p must be prime, got {self.p!r}")
        elif self.kind == "trivial":
            if self.p is not None:
                raise ValueError("the trivial valuation takes no prime")
        else:
            raise ValueError(f"unknown valuation kind {self.kind!r}")

    @classmethod
    def padic(cls, p: int) -> "ValuationSpec":
        return cls("p-adic", p)

    @classmethod
    def trivial(cls) -> "ValuationSpec":
        return cls("trivial")

    @property
    def is_trivial(self) -> bool:
        return self.kind == "trivial"

    def v(self, x: Rational) -> Optional[int]:
        """Valuation of ``x``; ``None`` stands for +inf (x = 0)."""
        x = exact(x)
        if x == 0:
            return None
        if self.is_trivial:
            return 0
        return _vp_int(abs(x.numerator), self.p) - _vp_int(x.denominator, self.p)


# -- tail bounds --------------------------------------------------------------


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for integers x >= 0, k >= 1."""
    if x < 2 or k == 1:
        return x
    hi = 1 << (x.bit_length() // k + 1)
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _ceil_power(c: Fraction, m: int, e: Fraction) -> int:
    """ceil(c * m**e) for rational c >= 0, integer m >= 0, rational e > 0."""
    a, b = e.numerator, e.denominator
    x = c ** b * Fraction(m) ** a
    k = _iroot(x.numerator // x.denominator, b)
    return k if k ** b == x else k + 1


@dataclass(frozen=True)
class PowerTail:
    """Valuation bound ``coeff * m**exponent + offset``, ``m = ceil((n - shift)/divisor)``.

    Valuations of rationals are integers, so the real bound is rounded up.
    """

    coeff: Fraction
    exponent: Fraction
    offset: Fraction = Fraction(0)
    shift: int = 0
    divisor: int = 1

    def __post_init__(self):
        for name in ("coeff", "exponent", "offset"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.coeff <= 0 or self.exponent <= 1:
            raise ValueError("tail bound must be superlinear: coeff > 0 and exponent > 1")
        if self.divisor < 1:
            raise ValueError("divisor must be positive")

    def _m(self, n: int) -> int:
        return -((self.shift - n) // self.divisor)

    def lower(self, n: int) -> Fraction:
        m = self._m(n)
        if m < 0:
            raise ValueError(f"index {n} precedes the tail bound's range")
        return _ceil_power(self.coeff, m, self.exponent) + self.offset

    def cutoff(self, slope: Fraction, floor: Fraction) -> int:
        """Some index ``N`` with ``n*slope - lower(n) < floor`` for all ``n >= N``.

        ``slope`` must be nonnegative.
        """
        big_a = self.shift * slope - self.offset - floor
        target = (self.divisor * slope + max(big_a, 0) + 1) / self.coeff
        # smallest m >= 1 with m**(e-1) >= target
        d = self.exponent - 1
        a, b = d.numerator, d.denominator
        need = target ** b

        def ok(m):
            return Fraction(m) ** a >= need

        hi = 1
        while not ok(hi):
            hi *= 2
        lo = hi // 2 + 1 if hi > 1 else 1
        while lo < hi:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid + 1
        return self.divisor * hi + self.shift

    def shifted(self, index_shift: int = 0, valuation_shift: Fraction = Fraction(0)) -> "PowerTail":
        return replace(self, shift=self.shift + index_shift, offset=self.offset + valuation_shift)


@dataclass(frozen=True)
class TailBound:
    """Lower bound on coefficient valuations past a series head.

    ``lower(n)`` is the tabulated value when ``n`` is in ``table``, otherwise
    the minimum over the superlinear ``pieces``.
    """

    pieces: Tuple[PowerTail, ...]
    table: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a tail bound needs at least one superlinear piece")
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "table", tuple(sorted((int(n), exact(v)) for n, v in self.table)))

    @classmethod
    def power(cls, coeff: Rational, exponent: Rational) -> "TailBound":
        return cls((PowerTail(exact(coeff), exact(exponent)),))

    @cached_property
    def _table(self) -> Dict[int, Fraction]:
        return dict(self.table)

    def lower(self, n: int) -> Fraction:
        t = self._table
        if n in t:
            return t[n]
        return min(p.lower(n) for p in self.pieces)

    def cutoff(self, slope: Fraction, floor: Fraction) -> int:
        n0 = max(p.cutoff(slope, floor) for p in self.pieces)
        if self.table:
            n0 = max(n0, self.table[-1][0] + 1)
        return n0

    def max_key(self) -> int:
        return self.table[-1][0] if self.table else -1

    def tail_min(self, start: int) -> Fraction:
        """Lower bound on ``lower(n)`` over all ``n >= start``."""
        vals = [v for n, v in self.table if n >= start]
        vals += [p.lower(max(start, p.shift)) for p in self.pieces]
        return min(vals)


# -- series -------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedSeries:
    """Power series with an exact rational head.

    ``truncated`` marks that coefficients past the head may be nonzero; such a
    series is certifiable only with a ``tail``.  ``precision``, when set, says
    the head coefficients are correct modulo elements of valuation
    ``>= precision`` (they come from truncating an infinite sum).
    """

    coeffs: Tuple[Fraction, ...]
    valuation: ValuationSpec
    truncated: bool = False
    tail: Optional[TailBound] = None
    precision: Optional[Fraction] = None

    def __post_init__(self):
        cs = [exact(c) for c in self.coeffs]
        if not self.truncated:
            while cs and cs[-1] == 0:
                cs.pop()
            if self.tail is not None or self.precision is not None:
                raise ValueError("a polynomial carries neither tail bound nor precision")
        elif not cs:
            raise ValueError("a truncated series needs a nonempty head")
        if self.truncated and self.valuation.is_trivial:
            raise SeriesError("under the trivial absolute value the only entire functions are polynomials")
        object.__setattr__(self, "coeffs", tuple(cs))
        if self.precision is not None:
            object.__setattr__(self, "precision", exact(self.precision))

    # constructors
    @classmethod
    def polynomial(cls, coeffs: Sequence[Rational], valuation: ValuationSpec) -> "CertifiedSeries":
        return cls(tuple(exact(c) for c in coeffs), valuation)

    @classmethod
    def constant(cls, c: Rational, valuation: ValuationSpec) -> "CertifiedSeries":
        return cls.polynomial([c], valuation)

    @classmethod
    def monomial(cls, n: int, valuation: ValuationSpec, c: Rational = 1) -> "CertifiedSeries":
        return cls.polynomial([0] * n + [c], valuation)

    @property
    def is_polynomial(self) -> bool:
        return not self.truncated

    @property
    def is_zero(self) -> bool:
        return self.is_polynomial and not self.coeffs

    @property
    def order(self) -> int:
        """Index of the last head coefficient (the degree, for polynomials)."""
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> Fraction:
        if n < len(self.coeffs):
            return self.coeffs[n]
        if self.is_polynomial:
            return Fraction(0)
        raise UncertifiedError(f"coefficient {n} lies beyond the truncation order {self.order}")

    def known_valuation(self, n: int) -> Optional[int]:
        """Exact valuation of head coefficient ``n``; ``None`` for a certain zero.

        Raises when the head precision cannot decide it.
        """
        c = self.coeff(n)
        v = self.valuation.v(c)
        if self.precision is None:
            return v
        if v is None or v >= self.precision:
            raise UncertifiedError(f"coefficient {n} is below the head precision {self.precision}")
        return v

    def with_tail(self, tail: TailBound) -> "CertifiedSeries":
        if self.is_polynomial:
            raise ValueError("polynomials take no tail bound")
        return replace(self, tail=tail)

    def head_lower(self, n: int) -> Optional[Fraction]:
        """Lower bound on the valuation of the true coefficient ``n`` (``None`` = +inf)."""
        if n < len(self.coeffs):
            v = self.valuation.v(self.coeffs[n])
            if self.precision is None:
                return None if v is None else Fraction(v)
            return self.precision if v is None else Fraction(min(v, self.precision))
        if self.is_polynomial:
            return None
        if self.tail is None:
            raise UncertifiedError("no tail bound available")
        return self.tail.lower(n)


def coefficient_log_norm(series: CertifiedSeries, n: int) -> Optional[Fraction]:
    """``-v(a_n)``; ``None`` encodes -inf (a zero coefficient)."""
    if series.truncated and n > series.order:
        if series.tail is None:
            raise UncertifiedError(f"index {n} is beyond the truncation order and no tail bound is declared")
        raise UncertifiedError(f"index {n} is in the tail; only the bound {series.tail.lower(n)} is known")
    v = series.known_valuation(n)
    return None if v is None else Fraction(-v)


def _head_lines(series: CertifiedSeries):
    exact_lines, vague = [], []
    for n, c in enumerate(series.coeffs):
        v = series.valuation.v(c)
        if series.precision is not None and (v is None or v >= series.precision):
            vague.append(n)
        elif v is not None:
            exact_lines.append((n, Fraction(v)))
    return exact_lines, vague


def gauss_norm(series: CertifiedSeries, domain: Sequence[Rational]) -> Tuple[PLFun, bool]:
    """``t -> log|f|_r`` as the envelope of the head, plus a certification flag.

    The flag is true only when every unknown coefficient (imprecise head
    entries and the whole tail) contributes strictly less than the head
    maximum at every ``t`` in the domain.
    """
    dom = as_domain(domain)
    lines, vague = _head_lines(series)
    if not lines:
        if series.is_zero:
            raise ZeroSeriesError("the zero series has no Gauss norm")
        raise UncertifiedError("the head carries no determined coefficient")
    head = pl_max_all(linear(dom, n, -v) for n, v in lines)
    if series.is_polynomial:
        return head, True
    if series.tail is None:
        return head, False
    slope = max(dom[1], Fraction(0))
    stop = series.tail.cutoff(slope, head.min())
    if stop - series.order > TAIL_SCAN_CAP:
        raise OrderCapError(f"tail certification would scan {stop - series.order} indices")
    # Each unknown term is a line and the head is convex, so line - head is
    # concave and peaks at a breakpoint of the head.
    unknown = [(n, series.precision) for n in vague]
    unknown += [(n, series.tail.lower(n)) for n in range(series.order + 1, stop)]
    pts = [(x, head(x)) for x in head.xs]
    return head, all(n * x - b < h for n, b in unknown for x, h in pts)


# -- Newton polygons and zeros ------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(n, v(a_n))``.

    A segment of slope ``s`` and length ``l`` stands for ``l`` zeros of
    log-radius ``s`` (valuation ``-s``).
    """

    segments: Tuple[Tuple[Fraction, int], ...]
    ord_at_zero: int

    def zero_count(self) -> int:
        return self.ord_at_zero + sum(l for _, l in self.segments)


def _lower_hull(points: List[Tuple[int, Fraction]]):
    hull: List[Tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # pop the middle point unless it lies strictly below the chord
            if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(series: CertifiedSeries, domain: Optional[Sequence[Rational]] = None) -> NewtonPolygon:
    """Newton polygon of a polynomial, or of a series on the slopes up to ``t_max``.

    For an infinite series the head must be certified on ``domain``; the
    polygon is then returned up to the vertex dominant at ``t_max``, which is
    exactly the part governing zeros of log-radius at most ``t_max``.
    """
    if series.is_zero:
        raise ZeroSeriesError("the zero polynomial has no Newton polygon")
    if series.is_polynomial:
        last = series.order
    else:
        if domain is None:
            raise UncertifiedError("an infinite series needs a domain to bound the slopes")
        dom = as_domain(domain)
        _, cert = gauss_norm(series, dom)
        if not cert:
            raise UncertifiedError("the series head is not certified on the requested domain")
        lines, _ = _head_lines(series)
        t = dom[1]
        best = max(n * t - v for n, v in lines)
        last = max(n for n, v in lines if n * t - v == best)
    points = []
    for n in range(last + 1):
        v = series.known_valuation(n)
        if v is not None:
            points.append((n, Fraction(v)))
    hull = _lower_hull(points)
    segs = tuple(
        ((y1 - y0) / (x1 - x0), x1 - x0) for (x0, y0), (x1, y1) in zip(hull, hull[1:])
    )
    return NewtonPolygon(segs, points[0][0])


@dataclass(frozen=True)
class ZeroCount:
    """Step function ``t -> #zeros of log-radius <= t`` (origin included)."""

    ord_at_zero: int
    zeros: Tuple[Tuple[Fraction, int], ...]

    def __call__(self, t: Rational) -> int:
        t = exact(t)
        return self.ord_at_zero + sum(l for tau, l in self.zeros if tau <= t)


def zero_counting(series: CertifiedSeries, domain: Sequence[Rational]) -> Tuple[ZeroCount, PLFun]:
    """Counting step function and ``N(t) = integral of n over [t_min, t]``."""
    lo, hi = as_domain(domain)
    poly = newton_polygon(series, (lo, hi))
    count = ZeroCount(poly.ord_at_zero, poly.segments)
    xs = sorted({lo, hi} | {tau for tau, _ in poly.segments if lo < tau < hi})

    def big_n(t):
        total = poly.ord_at_zero * (t - lo)
        for tau, l in poly.segments:
            start = max(tau, lo)
            if start < t:
                total += l * (t - start)
        return total

    return count, PLFun(tuple(xs), tuple(big_n(x) for x in xs))


def jensen_check(series: CertifiedSeries, domain: Sequence[Rational]) -> Fraction:
    """Largest ``|log|f|_t - log|f|_{t_min} - N(t)|`` on the domain; zero when consistent."""
    dom = as_domain(domain)
    norm, cert = gauss_norm(series, dom)
    if not cert:
        raise UncertifiedError("Jensen check needs a certified Gauss norm")
    _, big_n = zero_counting(series, dom)
    base = norm(dom[0])
    xs = sorted(set(norm.xs) | set(big_n.xs))
    return max(abs(norm(x) - base - big_n(x)) for x in xs)


# -- arithmetic ---------------------------------------------------------------


def _to_ints(cs: Sequence[Fraction]):
    den = 1
    for c in cs:
        den = den * c.denominator // _gcd(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in cs], den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _mul_trunc(a: Sequence[Fraction], b: Sequence[Fraction], n: Optional[int] = None) -> List[Fraction]:
    """Product of coefficient lists, keeping indices ``<= n`` when given."""
    if not a or not b:
        return []
    ai, ad = _to_ints(a)
    bi, bd = _to_ints(b)
    size = len(a) + len(b) - 1 if n is None else min(len(a) + len(b) - 1, n + 1)
    out = [0] * size
    for i, x in enumerate(ai):
        if x == 0 or i >= size:
            continue
        for j in range(min(len(bi), size - i)):
            y = bi[j]
            if y:
                out[i + j] += x * y
    den = ad * bd
    return [Fraction(c, den) for c in out]


def _check_same(*series: CertifiedSeries) -> ValuationSpec:
    val = series[0].valuation
    if any(s.valuation != val for s in series[1:]):
        raise SeriesError("series over different valuations")
    return val


def _min_opt(*vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def series_add(a: CertifiedSeries, b: CertifiedSeries) -> CertifiedSeries:
    val = _check_same(a, b)
    if a.is_polynomial and b.is_polynomial:
        n = max(len(a.coeffs), len(b.coeffs))
        return CertifiedSeries(tuple(a.coeff(i) + b.coeff(i) for i in range(n)), val)
    ops = (a, b)
    order = min(s.order for s in ops if s.truncated)
    head = tuple(
        sum((s.coeffs[i] for s in ops if i < len(s.coeffs)), Fraction(0)) for i in range(order + 1)
    )
    precision = _min_opt(*(s.precision for s in ops))
    tail = None
    if all(s.tail is not None for s in ops if s.truncated):
        pieces = tuple(p for s in ops if s.truncated for p in s.tail.pieces)
        reach = max(max(s.order for s in ops), max((s.tail.max_key() for s in ops if s.truncated), default=-1))
        table = []
        for n in range(order + 1, reach + 1):
            lv = _min_opt(*(s.head_lower(n) for s in ops))
            if lv is not None:
                table.append((n, lv))
        tail = TailBound(pieces, tuple(table))
    return CertifiedSeries(head, val, True, tail, precision)


def series_scale(s: CertifiedSeries, c: Rational) -> CertifiedSeries:
    c = exact(c)
    if c == 0:
        return CertifiedSeries((), s.valuation)
    head = tuple(c * x for x in s.coeffs)
    if s.is_polynomial:
        return CertifiedSeries(head, s.valuation)
    dv = Fraction(s.valuation.v(c))
    tail = None
    if s.tail is not None:
        tail = TailBound(
            tuple(p.shifted(0, dv) for p in s.tail.pieces),
            tuple((n, v + dv) for n, v in s.tail.table),
        )
    prec = None if s.precision is None else s.precision + dv
    return CertifiedSeries(head, s.valuation, True, tail, prec)


def series_sub(a: CertifiedSeries, b: CertifiedSeries) -> CertifiedSeries:
    return series_add(a, series_scale(b, -1))


def _min_poly_valuation(p: CertifiedSeries) -> Fraction:
    return Fraction(min(p.valuation.v(c) for c in p.coeffs if c != 0))


def series_mul(a: CertifiedSeries, b: CertifiedSeries, target_order: Optional[int] = None) -> CertifiedSeries:
    val = _check_same(a, b)
    if target_order is not None and target_order > ORDER_CAP:
        raise OrderCapError(f"target order {target_order} exceeds cap {ORDER_CAP}")
    if a.is_zero or b.is_zero:
        return CertifiedSeries((), val)
    if a.is_polynomial and b.is_polynomial:
        return CertifiedSeries(tuple(_mul_trunc(a.coeffs, b.coeffs)), val)
    if a.is_polynomial or b.is_polynomial:
        p, s = (a, b) if a.is_polynomial else (b, a)
        order = s.order if target_order is None else min(s.order, target_order)
        head = tuple(_mul_trunc(p.coeffs, s.coeffs[: order + 1], order))
        head += (Fraction(0),) * (order + 1 - len(head))
        vmin = _min_poly_valuation(p)
        prec = None if s.precision is None else s.precision + vmin
        tail = None
        if s.tail is not None:
            deg = p.order
            reach = max(s.order, s.tail.max_key()) + deg
            table = []
            for n in range(order + 1, reach + 1):
                cands = []
                for k, pk in enumerate(p.coeffs):
                    if pk == 0 or n - k < 0:
                        continue
                    lv = s.head_lower(n - k)
                    if lv is not None:
                        cands.append(Fraction(val.v(pk)) + lv)
                if cands:
                    table.append((n, min(cands)))
            tail = TailBound(tuple(pc.shifted(deg, vmin) for pc in s.tail.pieces), tuple(table))
        return CertifiedSeries(head, val, True, tail, prec)
    if a.precision is not None or b.precision is not None:
        raise UncertifiedError("product of two imprecise infinite series is not supported")
    order = min(a.order, b.order)
    if target_order is not None:
        order = min(order, target_order)
    head = tuple(_mul_trunc(a.coeffs, b.coeffs, order))
    head += (Fraction(0),) * (order + 1 - len(head))
    return CertifiedSeries(head, val, True, None, None)


def series_pow(s: CertifiedSeries, k: int, target_order: Optional[int] = None) -> CertifiedSeries:
    out = CertifiedSeries.constant(1, s.valuation)
    for _ in range(k):
        out = series_mul(out, s, target_order)
    return out


def _integral_head(s: CertifiedSeries) -> bool:
    return all(c == 0 or s.valuation.v(c) >= 0 for c in s.coeffs)


def series_compose(outer: CertifiedSeries, inner: CertifiedSeries, target_order: int) -> CertifiedSeries:
    """``outer(inner(z))`` with exact head coefficients up to ``target_order``.

    An infinite ``outer`` needs ``inner(0) = 0``, or else an integral ``inner``
    and a tail bound on ``outer``: the outer sum is then cut at its head and
    the result carries the tail's minimum as head precision.
    """
    val = _check_same(outer, inner)
    if target_order > ORDER_CAP:
        raise OrderCapError(f"target order {target_order} exceeds cap {ORDER_CAP}")
    if outer.is_zero or inner.is_zero:
        return CertifiedSeries.constant(outer.coeff(0) if not outer.is_zero else 0, val)
    if outer.is_polynomial:
        acc = CertifiedSeries.constant(outer.coeffs[-1], val)
        for k in range(outer.order - 1, -1, -1):
            acc = series_add(series_mul(acc, inner, target_order), CertifiedSeries.constant(outer.coeffs[k], val))
        return acc
    order = target_order if inner.is_polynomial else min(target_order, inner.order)
    if inner.coeffs[0] == 0 and inner.precision is None:
        order = min(order, outer.order)
        prec = outer.precision
        if prec is not None and not _integral_head(inner):
            raise UncertifiedError("imprecise outer series needs an integral inner series")
        tail = None
        if inner.is_polynomial and outer.tail is not None and _integral_head(inner):
            tail = _compose_tail(outer, inner, order)
    else:
        if inner.precision is not None or not _integral_head(inner):
            raise UncertifiedError("composition with inner(0) != 0 needs an exact integral inner head")
        if outer.tail is None:
            raise UncertifiedError("composition with inner(0) != 0 needs a tail bound on the outer series")
        prec = outer.tail.tail_min(outer.order + 1)
        if outer.precision is not None:
            prec = min(prec, outer.precision)
        tail = None
    inner_head = list(inner.coeffs[: order + 1])
    top = min(outer.order, order) if inner.coeffs[0] == 0 else outer.order
    acc = [outer.coeffs[top]]
    for k in range(top - 1, -1, -1):
        acc = _mul_trunc(acc, inner_head, order) or [Fraction(0)]
        acc[0] += outer.coeffs[k]
    head = tuple(acc) + (Fraction(0),) * (order + 1 - len(acc))
    return CertifiedSeries(head, val, True, tail, prec)


def _compose_tail(outer: CertifiedSeries, inner: CertifiedSeries, order: int) -> TailBound:
    # c_m only involves outer coefficients k with ceil(m/D) <= k <= m
    deg = inner.order
    reach = deg * (max(outer.order, outer.tail.max_key()) + 1)
    table = []
    for m in range(order + 1, reach + 1):
        lo_k = -(-m // deg)
        cands = [outer.head_lower(k) for k in range(lo_k, min(m, max(outer.order, outer.tail.max_key()) + 1) + 1)]
        cands += [pc.lower(max(lo_k, outer.order + 1)) for pc in outer.tail.pieces]
        cands = [c for c in cands if c is not None]
        table.append((m, min(cands)))
    pieces = tuple(
        replace(pc, shift=deg * pc.shift, divisor=deg * pc.divisor) for pc in outer.tail.pieces
    )
    return TailBound(pieces, tuple(table))


# -- builtin entire functions -------------------------------------------------


def g_series(valuation: ValuationSpec, order: int, a: Optional[Rational] = None) -> CertifiedSeries:
    """The entire function ``sum_n (a^n z)^n``, head up to ``order``; ``a`` defaults to ``p``."""
    if valuation.is_trivial:
        raise SeriesError("g needs a nontrivial absolute value")
    if order > ORDER_CAP:
        raise OrderCapError(f"order {order} exceeds cap {ORDER_CAP}")
    a = Fraction(valuation.p) if a is None else exact(a)
    va = valuation.v(a)
    if va is None or va < 1:
        raise SeriesError("g needs 0 < |a| < 1")
    head = tuple(a ** (n * n) for n in range(order + 1))
    return CertifiedSeries(head, valuation, True, TailBound.power(va, 2))


def g_iterate(valuation: ValuationSpec, order: int, a: Optional[Rational] = None) -> CertifiedSeries:
    """Head of ``g o g``; its tail bound is not derivable here and must be supplied."""
    g = g_series(valuation, order, a)
    return series_compose(g, g, order)
