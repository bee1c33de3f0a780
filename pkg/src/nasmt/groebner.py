"""Buchberger's algorithm over Q with optional cofactor tracking.

Polynomials are handled as ``{exponent tuple: Fraction}`` dicts internally;
every new basis element is made primitive (integer coefficients with unit
content) before it is stored, which keeps coefficient growth in check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Callable, Dict, List, Sequence, Tuple

from .forms import Monomial, Poly

Key = Callable[[Monomial], tuple]

MAX_BASIS = 3000
MAX_DEGREE = 80


class CapExceeded(RuntimeError):
    pass


def grevlex_key(e: Monomial) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Monomial) -> tuple:
    return e


ORDERS: Dict[str, Key] = {"grevlex": grevlex_key, "lex": lex_key}


def _key(order: str) -> Key:
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _axpy(f: dict, c: Fraction, q: Monomial, g: dict) -> None:
    """``f -= c * x^q * g`` in place."""
    for e, a in g.items():
        e2 = _add(e, q)
        v = f.get(e2, 0) - c * a
        if v:
            f[e2] = v
        else:
            f.pop(e2, None)


def _content_scale(f: dict) -> Fraction:
    """Scale factor making ``f`` primitive; the sign is fixed by the caller."""
    den = 1
    for c in f.values():
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in f.values():
        num = gcd(num, (c * den).numerator)
    return Fraction(den, num) if num else Fraction(1)


class _Elem:
    __slots__ = ("poly", "lm", "cof")

    def __init__(self, poly: dict, lm: Monomial, cof):
        self.poly = poly
        self.lm = lm
        self.cof = cof


def _scale(f: dict, s: Fraction) -> dict:
    return {e: c * s for e, c in f.items()}


def _reduce(f: dict, cof, basis: Sequence[_Elem], key: Key):
    """Full reduction of ``f``; returns ``(remainder, cofactors of f)`` updated.

    With tracking, ``f_original = remainder + sum(q_k g_k)`` is kept as
    cofactors on the generators: the returned ``cof`` expresses the remainder.
    """
    f = dict(f)
    r: dict = {}
    while f:
        m = max(f, key=key)
        c = f[m]
        for g in basis:
            if _divides(g.lm, m):
                q = _sub(m, g.lm)
                ratio = c / g.poly[g.lm]
                _axpy(f, ratio, q, g.poly)
                if cof is not None:
                    for i, gc in enumerate(g.cof):
                        if gc:
                            _axpy(cof[i], ratio, q, gc)
                break
        else:
            r[m] = c
            del f[m]
    return r, cof


def _normalize(f: dict, cof, key: Key):
    s = _content_scale(f)
    if f[max(f, key=key)] * s < 0:
        s = -s
    f = _scale(f, s)
    if cof is not None:
        cof = [_scale(c, s) for c in cof]
    return f, cof


def _buchberger(gens: Sequence[dict], nvars: int, key: Key, track: bool) -> List[_Elem]:
    basis: List[_Elem] = []
    pairs: set = set()

    def add(f: dict, cof):
        f, cof = _normalize(f, cof, key)
        lm = max(f, key=key)
        if sum(lm) > MAX_DEGREE:
            raise CapExceeded(f"basis degree exceeds {MAX_DEGREE}")
        basis.append(_Elem(f, lm, cof))
        if len(basis) > MAX_BASIS:
            raise CapExceeded(f"basis size exceeds {MAX_BASIS}")
        k = len(basis) - 1
        for i in range(k):
            pairs.add((i, k))

    for idx, g in enumerate(gens):
        cof = None
        if track:
            cof = [dict() for _ in gens]
            cof[idx] = {(0,) * nvars: Fraction(1)}
        r, cof = _reduce(g, cof, basis, key)
        if r:
            add(r, cof)

    done: set = set()
    while pairs:
        i, j = min(pairs, key=lambda p: (key(_lcm(basis[p[0]].lm, basis[p[1]].lm)), p))
        pairs.discard((i, j))
        done.add((i, j))
        a, b = basis[i], basis[j]
        lcm = _lcm(a.lm, b.lm)
        if lcm == _add(a.lm, b.lm):
            continue
        # chain criterion
        skip = False
        for k, c in enumerate(basis):
            if k in (i, j) or not _divides(c.lm, lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                skip = True
                break
        if skip:
            continue
        qa, qb = _sub(lcm, a.lm), _sub(lcm, b.lm)
        ca, cb = a.poly[a.lm], b.poly[b.lm]
        s: dict = {}
        _axpy(s, Fraction(-1) / ca, qa, a.poly)
        _axpy(s, Fraction(1) / cb, qb, b.poly)
        cof = None
        if track:
            cof = [dict() for _ in gens]
            for t in range(len(gens)):
                _axpy(cof[t], Fraction(-1) / ca, qa, a.cof[t])
                _axpy(cof[t], Fraction(1) / cb, qb, b.cof[t])
        r, cof = _reduce(s, cof, basis, key)
        if r:
            add(r, cof)
    return basis


def _to_dicts(polys: Sequence[Poly]) -> Tuple[List[dict], int]:
    if not polys:
        raise ValueError("need at least one polynomial")
    nv = polys[0].nvars
    if any(p.nvars != nv for p in polys):
        raise ValueError("polynomials in different rings")
    return [dict(p.terms) for p in polys], nv


def groebner(polys: Sequence[Poly], order: str = "grevlex") -> List[Poly]:
    """Reduced Groebner basis, monic, sorted by increasing leading monomial."""
    key = _key(order)
    gens, nv = _to_dicts(polys)
    gens = [g for g in gens if g]
    if not gens:
        return []
    basis = _buchberger(gens, nv, key, track=False)
    basis.sort(key=lambda e: key(e.lm))
    minimal = []
    for e in basis:
        if not any(_divides(m.lm, e.lm) for m in minimal):
            minimal.append(e)
    reduced = []
    for i, e in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {m: c for m, c in e.poly.items() if m != e.lm}
        r, _ = _reduce(tail, None, others, key)
        lc = e.poly[e.lm]
        r = {m: c / lc for m, c in r.items()}
        r[e.lm] = Fraction(1)
        reduced.append(Poly(nv, r))
    return reduced


def groebner_with_cofactors(polys: Sequence[Poly], order: str = "grevlex"):
    """A (non-reduced) Groebner basis ``G`` with ``G[k] = sum_i C[k][i] * polys[i]``."""
    key = _key(order)
    gens, nv = _to_dicts(polys)
    basis = _buchberger(gens, nv, key, track=True)
    return (
        [Poly(nv, e.poly) for e in basis],
        [[Poly(nv, c) for c in e.cof] for e in basis],
    )


def leading_monomial(p: Poly, order: str = "grevlex") -> Monomial:
    if p.is_zero():
        raise ValueError("zero polynomial has no leading monomial")
    return max(p.terms, key=_key(order))


def divide(f: Poly, basis: Sequence[Poly], order: str = "grevlex"):
    """Multivariate division: ``f = sum q_k basis[k] + r`` with ``r`` reduced."""
    key = _key(order)
    nv = f.nvars
    elems = [_Elem(dict(b.terms), max(b.terms, key=key), None) for b in basis]
    quot = [dict() for _ in basis]
    rem: dict = {}
    work = dict(f.terms)
    while work:
        m = max(work, key=key)
        c = work[m]
        for k, g in enumerate(elems):
            if _divides(g.lm, m):
                q = _sub(m, g.lm)
                ratio = c / g.poly[g.lm]
                _axpy(work, ratio, q, g.poly)
                quot[k][q] = quot[k].get(q, 0) + ratio
                break
        else:
            rem[m] = c
            del work[m]
    return [Poly(nv, q) for q in quot], Poly(nv, rem)


def normal_form(f: Poly, basis: Sequence[Poly], order: str = "grevlex") -> Poly:
    key = _key(order)
    elems = [_Elem(dict(b.terms), max(b.terms, key=key), None) for b in basis]
    r, _ = _reduce(dict(f.terms), None, elems, key)
    return Poly(f.nvars, r)


def krull_dimension(leading: Sequence[Monomial], nvars: int) -> int:
    """Dimension of ``k[x]/(leading monomials)``; -1 for the unit ideal."""
    if any(not any(m) for m in leading):
        return -1
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in leading]
    for size in range(nvars, -1, -1):
        for u in combinations(range(nvars), size):
            us = frozenset(u)
            if not any(s <= us for s in supports):
                return size
    return 0


def standard_monomials(leading: Sequence[Monomial], nvars: int, limit: int = 100_000) -> List[Monomial]:
    """Monomials outside the leading-term ideal; requires a zero-dimensional ideal."""
    if krull_dimension(leading, nvars) > 0:
        raise ValueError("infinitely many standard monomials")
    if any(not any(m) for m in leading):
        return []
    out = []
    frontier = [(0,) * nvars]
    seen = set(frontier)
    while frontier:
        m = frontier.pop()
        if any(_divides(l, m) for l in leading):
            continue
        out.append(m)
        if len(out) > limit:
            raise CapExceeded("too many standard monomials")
        for i in range(nvars):
            n = m[:i] + (m[i] + 1,) + m[i + 1:]
            if n not in seen:
                seen.add(n)
                frontier.append(n)
    return sorted(out, key=grevlex_key)
