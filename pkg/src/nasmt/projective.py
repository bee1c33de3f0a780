"""Analytic maps to projective space and their Nevanlinna functions.

For ``f = (f_0, ..., f_N)`` with entire coordinates without common zeros and
a hypersurface ``D = {Q = 0}`` of degree ``d``:

* ``T_f(t)   = max_i log|f_i|_t``
* ``m_f(t,D) = d*T_f(t) - log|Q(f)|_t``  (plus ``log|Q|`` when normalized)
* ``N_f(t,D)`` counts the zeros of ``Q(f)``, based at the left end of the domain

and ``m + N - d*T`` is exactly constant (First Main Theorem).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from . import upoly
from .forms import Poly, as_form
from .groebner import groebner, krull_dimension, leading_monomial, normal_form
from .pl import PLFun, Rational, as_domain, pl_max_all
from .series import (
    CertifiedSeries,
    UncertifiedError,
    ValuationSpec,
    gauss_norm,
    series_add,
    series_mul,
    zero_counting,
)


class MapError(ValueError):
    pass


class ContainedInHypersurfaceError(ValueError):
    """``Q(f)`` vanishes identically: the map lies inside the hypersurface."""


class UndeterminedError(UncertifiedError):
    """Vanishing of ``Q(f)`` cannot be decided from a truncated head."""


class FMTError(RuntimeError):
    """``m + N - d*T`` was not constant; this is an implementation bug."""


@dataclass(frozen=True)
class Hypersurface:
    name: str
    form: Poly

    def __post_init__(self):
        as_form(self.form)

    @property
    def degree(self) -> int:
        return self.form.degree()


def _dimension(gens: Sequence[Poly], nvars: int) -> int:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return nvars - 1
    basis = groebner(gens)
    return max(krull_dimension([leading_monomial(b) for b in basis], nvars) - 1, -1)


@dataclass(frozen=True)
class SpaceSpec:
    """``X`` inside ``P^N``; ``X_ideal`` empty means ``X = P^N``."""

    N: int
    X_ideal: Tuple[Poly, ...] = ()
    n: Optional[int] = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("ambient dimension must be at least 1")
        gens = tuple(as_form(g) for g in self.X_ideal)
        if any(g.nvars != self.N + 1 for g in gens):
            raise ValueError(f"X generators must have {self.N + 1} variables")
        object.__setattr__(self, "X_ideal", gens)
        if self.n is None:
            object.__setattr__(self, "n", self.N if not gens else _dimension(gens, self.N + 1))
        if self.n < 0:
            raise ValueError("X is empty")

    @property
    def nvars(self) -> int:
        return self.N + 1

    @property
    def is_projective_space(self) -> bool:
        return not self.X_ideal

    def contains_form(self, Q: Poly) -> bool:
        """True when ``Q`` vanishes on ``X`` to the extent its ideal shows (normal form 0)."""
        if not self.X_ideal:
            return Q.is_zero()
        return normal_form(Q, groebner(list(self.X_ideal))).is_zero()


def _coeff_gcd(coords: Sequence[CertifiedSeries]):
    g: list = []
    for c in coords:
        g = upoly.gcd(g, c.coeffs)
    return g


@dataclass(frozen=True)
class AnalyticMap:
    """Coordinates ``f_0..f_N`` of an analytic map ``K -> P^N``.

    Polynomial maps are checked for common zeros (a nonconstant gcd over Q);
    maps with transcendental coordinates are taken as reduced by assumption.
    """

    coords: Tuple[CertifiedSeries, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) < 2:
            raise MapError("a map to P^N needs at least two coordinates")
        val = coords[0].valuation
        if any(c.valuation != val for c in coords):
            raise MapError("coordinates over different valuations")
        if all(c.is_zero for c in coords):
            raise MapError("all coordinates vanish identically")
        if self.is_polynomial and upoly.degree(_coeff_gcd(coords)) > 0:
            raise MapError("coordinates share a common zero; divide out their gcd")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def reduced(cls, coords: Sequence[CertifiedSeries]) -> "AnalyticMap":
        """Divide polynomial coordinates by their gcd before building the map."""
        g = _coeff_gcd(coords)
        if upoly.degree(g) <= 0:
            return cls(tuple(coords))
        out = [CertifiedSeries.polynomial(upoly.divmod_poly(c.coeffs, g)[0], c.valuation) for c in coords]
        return cls(tuple(out))

    @property
    def N(self) -> int:
        return len(self.coords) - 1

    @property
    def valuation(self) -> ValuationSpec:
        return self.coords[0].valuation

    @property
    def is_polynomial(self) -> bool:
        return all(c.is_polynomial for c in self.coords)

    @property
    def reducedness(self) -> str:
        return "certified" if self.is_polynomial else "assumed"


@lru_cache(maxsize=4096)
def restrict_form_to_map(Q: Poly, f: AnalyticMap, target_order: Optional[int] = None) -> CertifiedSeries:
    """The series ``Q(f_0, ..., f_N)``."""
    if Q.nvars != f.N + 1:
        raise ValueError(f"form has {Q.nvars} variables, map has {f.N + 1} coordinates")
    val = f.valuation
    powers = {}

    def power(i, k):
        if (i, k) not in powers:
            if k == 0:
                powers[(i, k)] = CertifiedSeries.constant(1, val)
            else:
                powers[(i, k)] = series_mul(power(i, k - 1), f.coords[i], target_order)
        return powers[(i, k)]

    total = CertifiedSeries((), val)
    for e, c in sorted(Q.terms.items()):
        term = CertifiedSeries.constant(c, val)
        for i, k in enumerate(e):
            if k:
                term = series_mul(term, power(i, k), target_order)
        total = series_add(total, term)
    if total.is_zero:
        raise ContainedInHypersurfaceError(f"map contained in hypersurface {Q.to_str()}")
    if total.truncated:
        known = [c for c in total.coeffs if c != 0]
        if total.precision is not None:
            known = [c for c in known if val.v(c) < total.precision]
        if not known:
            raise UndeterminedError(f"cannot decide whether the map lies in {Q.to_str()}")
    return total


def _certified_norm(s: CertifiedSeries, domain) -> PLFun:
    norm, cert = gauss_norm(s, domain)
    if not cert:
        raise UncertifiedError("Gauss norm not certified on the domain")
    return norm


def characteristic(f: AnalyticMap, domain: Sequence[Rational]) -> PLFun:
    """``T_f(t) = max_i log|f_i|_t``."""
    dom = as_domain(domain)
    return pl_max_all(_certified_norm(c, dom) for c in f.coords if not c.is_zero)


def coefficient_height(Q: Poly, valuation: ValuationSpec) -> Fraction:
    """``log|Q|``: the largest coefficient log-norm of the form."""
    return max(Fraction(-valuation.v(c)) for c in Q.coefficients())


def proximity(f: AnalyticMap, D: Hypersurface, domain: Sequence[Rational], normalize_coeffs: bool = False) -> PLFun:
    dom = as_domain(domain)
    restricted = restrict_form_to_map(D.form, f)
    m = characteristic(f, dom) * D.degree - _certified_norm(restricted, dom)
    if normalize_coeffs:
        m = m + coefficient_height(D.form, f.valuation)
    return m


def counting(f: AnalyticMap, D: Hypersurface, domain: Sequence[Rational]) -> PLFun:
    return zero_counting(restrict_form_to_map(D.form, f), as_domain(domain))[1]


def fmt_defect(f: AnalyticMap, D: Hypersurface, domain: Sequence[Rational]) -> Tuple[PLFun, Fraction]:
    """``m + N - d*T`` and its constant value."""
    dom = as_domain(domain)
    diff = proximity(f, D, dom) + counting(f, D, dom) - characteristic(f, dom) * D.degree
    if not diff.is_constant():
        raise FMTError(f"m + N - dT is not constant for {D.name}: {diff}")
    return diff, diff.ys[0]
