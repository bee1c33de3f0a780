"""Sparse multivariate polynomials over Q and homogeneous forms."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .pl import Rational, exact

Monomial = Tuple[int, ...]


class InhomogeneousError(ValueError):
    pass


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: Fraction}`` in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Rational] = ()):
        clean: Dict[Monomial, Fraction] = {}
        for e, c in dict(terms).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = exact(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, c: Rational, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: Rational = 1) -> "Poly":
        return cls(len(exps), {tuple(exps): c})

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for zero."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_component(self, d: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coefficients(self):
        return self.terms.values()

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different rings")
            return other
        return Poly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly(self.nvars, out)

    def __call__(self, point: Sequence[Rational]) -> Fraction:
        pt = [exact(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def substitute(self, i: int, value: Rational) -> "Poly":
        """Set variable ``i`` to ``value``, keeping the variable count."""
        value = exact(value)
        out: Dict[Monomial, Fraction] = {}
        for e, c in self.terms.items():
            f = list(e)
            k = f[i]
            f[i] = 0
            f = tuple(f)
            out[f] = out.get(f, Fraction(0)) + c * value ** k
        return Poly(self.nvars, out)

    def to_str(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or [f"X{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.to_str()})"


def monomials_of_degree(nvars: int, d: int) -> Iterable[Monomial]:
    if nvars == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - k):
            yield (k,) + rest


def as_form(p: Poly) -> Poly:
    """Validate ``p`` as a nonzero homogeneous form."""
    if p.is_zero():
        raise InhomogeneousError("the zero polynomial defines no hypersurface")
    if not p.is_homogeneous():
        raise InhomogeneousError(f"inhomogeneous form {p.to_str()}")
    return p


def linear_form(coeffs: Sequence[Rational]) -> Poly:
    n = len(coeffs)
    return Poly(n, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(coeffs)})


def jacobian_minors(forms: Sequence[Poly]) -> list:
    """All maximal minors of the Jacobian matrix of ``forms``."""
    k = len(forms)
    nv = forms[0].nvars
    grads = [[f.derivative(j) for j in range(nv)] for f in forms]
    minors = []
    for cols in combinations(range(nv), k):
        det = Poly.zero(nv)
        for perm in permutations(range(k)):
            sign = 1
            for a in range(k):
                for b in range(a + 1, k):
                    if perm[a] > perm[b]:
                        sign = -sign
            term = Poly.const(sign, nv)
            for row, col_idx in enumerate(perm):
                term = term * grads[row][cols[col_idx]]
            det = det + term
        if not det.is_zero():
            minors.append(det)
    return minors
