"""Dense univariate polynomials over Q as coefficient lists, low degree first."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

UPoly = List[Fraction]


def strip(a: Sequence[Fraction]) -> UPoly:
    a = [Fraction(c) for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence[Fraction]) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(strip(a)) - 1


def derivative(a: Sequence[Fraction]) -> UPoly:
    return strip([i * c for i, c in enumerate(a)][1:])


def divmod_poly(a: Sequence[Fraction], b: Sequence[Fraction]):
    a, b = strip(a), strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b):
        c = r[-1] / lb
        shift = len(r) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = strip(r)
    return strip(q), r


def monic(a: Sequence[Fraction]) -> UPoly:
    a = strip(a)
    if not a:
        return a
    return [c / a[-1] for c in a]


def gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    a, b = strip(a), strip(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_part(a: Sequence[Fraction]) -> UPoly:
    a = strip(a)
    if len(a) <= 1:
        return monic(a)
    g = gcd(a, derivative(a))
    return monic(divmod_poly(a, g)[0])


def mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    a, b = strip(a), strip(b)
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return strip(out)
