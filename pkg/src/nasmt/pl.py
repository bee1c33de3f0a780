"""Exact piecewise-linear functions of the log-radius ``t``.

Every norm, height, proximity and counting quantity in the package is a
``PLFun``: a continuous function on a closed rational interval, affine
between consecutive breakpoints, with all breakpoints and values stored as
``fractions.Fraction``.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Rational = Union[int, Fraction, str]
Domain = Tuple[Fraction, Fraction]

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


class DomainError(ValueError):
    """Two functions were combined on different domains."""


def exact(x: Rational) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        if not _RATIONAL.fullmatch(x.strip()):
            raise ValueError(f"not an exact rational literal: {x!r}")
        return Fraction(x.strip())
    raise TypeError(f"inexact or unsupported scalar {x!r}")


def as_domain(domain: Sequence[Rational]) -> Domain:
    lo, hi = (exact(v) for v in domain)
    if not lo < hi:
        raise DomainError(f"degenerate domain [{lo}, {hi}]")
    return lo, hi


def fmt_q(x: Fraction) -> str:
    """Render an exact rational as ``num/den``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _canonical(xs: Sequence[Fraction], ys: Sequence[Fraction]):
    out_x = [xs[0]]
    out_y = [ys[0]]
    for i in range(1, len(xs)):
        x, y = xs[i], ys[i]
        if len(out_x) >= 2:
            x0, y0 = out_x[-2], out_y[-2]
            x1, y1 = out_x[-1], out_y[-1]
            # drop the middle point when it is collinear with its neighbours
            if (y1 - y0) * (x - x1) == (y - y1) * (x1 - x0):
                out_x[-1], out_y[-1] = x, y
                continue
        out_x.append(x)
        out_y.append(y)
    return tuple(out_x), tuple(out_y)


@dataclass(frozen=True)
class PLFun:
    """Continuous piecewise-linear function, always held in canonical form."""

    xs: Tuple[Fraction, ...]
    ys: Tuple[Fraction, ...]

    def __post_init__(self):
        xs = tuple(exact(x) for x in self.xs)
        ys = tuple(exact(y) for y in self.ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need matching breakpoints and values, at least two")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        xs, ys = _canonical(xs, ys)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def domain(self) -> Domain:
        return self.xs[0], self.xs[-1]

    def __call__(self, t: Rational) -> Fraction:
        t = exact(t)
        lo, hi = self.domain
        if t < lo or t > hi:
            raise DomainError(f"t={t} outside [{lo}, {hi}]")
        i = bisect_right(self.xs, t) - 1
        if i >= len(self.xs) - 1:
            return self.ys[-1]
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)

    def slopes(self) -> Tuple[Fraction, ...]:
        return tuple(
            (y1 - y0) / (x1 - x0)
            for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])
        )

    def segments(self):
        """Yield ``(left, right, slope)`` for each affine piece."""
        for (x0, x1), s in zip(zip(self.xs, self.xs[1:]), self.slopes()):
            yield x0, x1, s

    def right_slope(self) -> Fraction:
        return self.slopes()[-1]

    def is_constant(self) -> bool:
        return len(self.xs) == 2 and self.ys[0] == self.ys[1]

    def is_convex(self) -> bool:
        s = self.slopes()
        return all(a <= b for a, b in zip(s, s[1:]))

    def max(self) -> Fraction:
        return max(self.ys)

    def min(self) -> Fraction:
        return min(self.ys)

    def __add__(self, other):
        if isinstance(other, PLFun):
            return pl_add(self, other)
        c = exact(other)
        return PLFun(self.xs, tuple(y + c for y in self.ys))

    __radd__ = __add__

    def __neg__(self):
        return PLFun(self.xs, tuple(-y for y in self.ys))

    def __sub__(self, other):
        if isinstance(other, PLFun):
            return pl_add(self, -other)
        return self + (-exact(other))

    def __mul__(self, c):
        return pl_scale(self, c)

    __rmul__ = __mul__

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"PLFun[{pts}]"


def linear(domain: Sequence[Rational], slope: Rational, intercept: Rational = 0) -> PLFun:
    """The affine function ``t -> slope*t + intercept`` on ``domain``."""
    lo, hi = as_domain(domain)
    s, b = exact(slope), exact(intercept)
    return PLFun((lo, hi), (s * lo + b, s * hi + b))


def constant(domain: Sequence[Rational], value: Rational) -> PLFun:
    return linear(domain, 0, value)


def _check_domains(a: PLFun, b: PLFun) -> None:
    if a.domain != b.domain:
        raise DomainError(f"domain mismatch: {a.domain} vs {b.domain}")


def _merged(*funcs: PLFun):
    return sorted(set().union(*(f.xs for f in funcs)))


def pl_max(a: PLFun, b: PLFun) -> PLFun:
    """Pointwise maximum of two functions on a shared domain."""
    _check_domains(a, b)
    xs = _merged(a, b)
    out = []
    prev_d = None
    for i, x in enumerate(xs):
        d = a(x) - b(x)
        if i and prev_d * d < 0:
            x0 = xs[i - 1]
            out.append(x0 + (x - x0) * prev_d / (prev_d - d))
        out.append(x)
        prev_d = d
    return PLFun(tuple(out), tuple(max(a(x), b(x)) for x in out))


def pl_max_all(funcs: Iterable[PLFun]) -> PLFun:
    funcs = list(funcs)
    if not funcs:
        raise ValueError("maximum of no functions")
    acc = funcs[0]
    for f in funcs[1:]:
        acc = pl_max(acc, f)
    return acc


def pl_add(a: PLFun, b: PLFun) -> PLFun:
    _check_domains(a, b)
    xs = _merged(a, b)
    return PLFun(tuple(xs), tuple(a(x) + b(x) for x in xs))


def pl_sum(funcs: Iterable[PLFun]) -> PLFun:
    funcs = list(funcs)
    if not funcs:
        raise ValueError("sum of no functions")
    acc = funcs[0]
    for f in funcs[1:]:
        acc = pl_add(acc, f)
    return acc


def pl_scale(a: PLFun, c: Rational) -> PLFun:
    c = exact(c)
    if c == 0:
        return constant(a.domain, 0)
    return PLFun(a.xs, tuple(c * y for y in a.ys))


def pl_min_constant_dominating(lhs: PLFun, rhs: PLFun) -> Fraction:
    """Least ``C`` with ``lhs <= rhs + C`` everywhere on the shared domain."""
    _check_domains(lhs, rhs)
    return max(lhs(x) - rhs(x) for x in _merged(lhs, rhs))


def pl_right_slope(a: PLFun) -> Fraction:
    return a.right_slope()


def order_statistic(funcs: Sequence[PLFun], k: int) -> PLFun:
    """The ``k``-th largest (1-based) of ``funcs`` as a function of ``t``.

    Between consecutive points of the union of breakpoints and pairwise
    crossings the ordering is fixed, so evaluating there is exact.
    """
    if not 1 <= k <= len(funcs):
        raise ValueError(f"order statistic {k} of {len(funcs)} functions")
    for f in funcs[1:]:
        _check_domains(funcs[0], f)
    xs = set(_merged(*funcs))
    grid = sorted(xs)
    for i in range(len(funcs)):
        for j in range(i + 1, len(funcs)):
            a, b = funcs[i], funcs[j]
            for x0, x1 in zip(grid, grid[1:]):
                d0, d1 = a(x0) - b(x0), a(x1) - b(x1)
                if d0 * d1 < 0:
                    xs.add(x0 + (x1 - x0) * d0 / (d0 - d1))
    pts = sorted(xs)
    ys = [sorted((f(x) for f in funcs), reverse=True)[k - 1] for x in pts]
    return PLFun(tuple(pts), tuple(ys))
