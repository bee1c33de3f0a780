"""Arrangement invariants over Q: intersection dimensions, t_m, M, alpha,
Nullstellensatz certificates and separating hyperplanes.

Everything is decided ideal-theoretically; intersection points with
irrational coordinates are never constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from . import upoly
from .forms import Poly, as_form, jacobian_minors, linear_form
from .groebner import (
    CapExceeded,
    divide,
    grevlex_key,
    groebner,
    groebner_with_cofactors,
    krull_dimension,
    leading_monomial,
    normal_form,
    standard_monomials,
)
from .projective import (
    AnalyticMap,
    ContainedInHypersurfaceError,
    Hypersurface,
    SpaceSpec,
    UndeterminedError,
    restrict_form_to_map,
)

SUBSET_CAP = 12
POWER_CAP = 64
M_SEARCH_CAP = 8


class PositionError(ValueError):
    pass


class XInHypersurfaceError(PositionError):
    pass


class NonemptyLocusError(PositionError):
    pass


class UnsupportedError(PositionError):
    pass


class CertificateError(RuntimeError):
    pass


# ---------------------------------------------------------------- ideals


@dataclass(frozen=True)
class Ideal:
    """Homogeneous ideal in ``nvars`` variables; zero generators are dropped."""

    generators: Tuple[Poly, ...]
    nvars: int
    order: str = "grevlex"

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            as_form(g)
            if g.nvars != self.nvars:
                raise ValueError(f"generator {g.to_str()} not in {self.nvars} variables")
        object.__setattr__(self, "generators", gens)

    @cached_property
    def basis(self) -> Tuple[Poly, ...]:
        return tuple(groebner(self.generators, self.order)) if self.generators else ()

    @property
    def leading(self):
        return [leading_monomial(b, self.order) for b in self.basis]

    def contains(self, f: Poly) -> bool:
        if not self.basis:
            return f.is_zero()
        return normal_form(f, self.basis, self.order).is_zero()

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + other.generators, self.nvars, self.order)


def groebner_basis(ideal: Ideal) -> Ideal:
    return Ideal(ideal.basis, ideal.nvars, ideal.order)


def projective_dimension(ideal: Ideal) -> int:
    """Dimension of the projective zero locus; -1 when it is empty."""
    if not ideal.basis:
        return ideal.nvars - 1
    return max(krull_dimension(ideal.leading, ideal.nvars) - 1, -1)


def _space_ideal(space: SpaceSpec, forms: Sequence[Poly]) -> Ideal:
    return Ideal(tuple(space.X_ideal) + tuple(forms), space.nvars)


# ---------------------------------------------------------------- t_m


@dataclass(frozen=True)
class PositionProfile:
    """``t_values[m + 1] = t_m`` for ``m = -1..n-1``."""

    q: int
    n: int
    t_values: Tuple[int, ...]
    subset_dims: Tuple[Tuple[Tuple[int, ...], int], ...] = ()

    def t(self, m: int) -> int:
        if not -1 <= m <= self.n - 1:
            raise IndexError(f"t_m defined for m in -1..{self.n - 1}")
        return self.t_values[m + 1]

    @property
    def t0(self) -> int:
        return self.t(0)

    @property
    def t_minus1(self) -> int:
        return self.t(-1)

    @property
    def general_position(self) -> bool:
        return all(self.t(m) == min(self.n - m - 1, self.q) for m in range(-1, self.n))

    def dims(self) -> Dict[Tuple[int, ...], int]:
        return dict(self.subset_dims)


def t_sequence(space: SpaceSpec, hypersurfaces: Sequence[Hypersurface], subset_cap: int = SUBSET_CAP) -> PositionProfile:
    """Least ``c`` with every ``(c+1)``-subset cutting ``X`` to dimension ``<= m``, else ``q``."""
    q = len(hypersurfaces)
    if q == 0:
        raise PositionError("no hypersurfaces")
    if q > subset_cap:
        raise CapExceeded(f"{q} hypersurfaces exceed the subset cap {subset_cap}")
    for D in hypersurfaces:
        if D.form.nvars != space.nvars:
            raise PositionError(f"{D.name} is not a form in {space.nvars} variables")
        if space.X_ideal and space.contains_form(D.form):
            raise XInHypersurfaceError(f"X is contained in {D.name}")
    dims: Dict[Tuple[int, ...], int] = {}

    def dim(idx: Tuple[int, ...]) -> int:
        if idx not in dims:
            dims[idx] = projective_dimension(_space_ideal(space, [hypersurfaces[i].form for i in idx]))
        return dims[idx]

    n = space.n
    values = []
    for m in range(-1, n):
        t = q
        for c in range(q):
            if all(dim(I) <= m for I in combinations(range(q), c + 1)):
                t = c
                break
        values.append(t)
    return PositionProfile(q, n, tuple(values), tuple(sorted(dims.items())))


# ---------------------------------------------------------------- transversality


def is_transverse(forms: Sequence[Poly], space: Optional[SpaceSpec] = None) -> bool:
    """The forms and the maximal minors of their Jacobian have no common zero."""
    if space is not None and space.X_ideal:
        raise UnsupportedError("transversality is only implemented on projective space")
    nv = forms[0].nvars
    if len(forms) > nv:
        raise ValueError("more forms than variables")
    return projective_dimension(Ideal(tuple(forms) + tuple(jacobian_minors(forms)), nv)) == -1


def transversality_certificate(Q_a: Poly, Q_b: Poly, space: Optional[SpaceSpec] = None) -> bool:
    return is_transverse([Q_a, Q_b], space)


# ---------------------------------------------------------------- affine charts and radicals


def _chart(forms: Sequence[Poly], i: int, zero_before: bool = False) -> List[Poly]:
    """Dehomogenize at ``X_i = 1``; optionally force ``X_k = 0`` for ``k < i``."""
    nv = forms[0].nvars
    gens = [f.substitute(i, 1) for f in forms]
    gens.append(Poly.var(i, nv) - 1)
    if zero_before:
        gens.extend(Poly.var(k, nv) for k in range(i))
    return [g for g in gens if not g.is_zero()]


def _is_unit(basis: Sequence[Poly]) -> bool:
    return any(b.degree() == 0 for b in basis)


def minimal_polynomial(basis: Sequence[Poly], var: int) -> List[Fraction]:
    """Monic minimal polynomial of ``x_var`` modulo a zero-dimensional Groebner basis."""
    nv = basis[0].nvars
    bound = len(standard_monomials([leading_monomial(b) for b in basis], nv)) + 1
    x = Poly.var(var, nv)
    cur = normal_form(Poly.const(1, nv), basis)
    rows: List[Tuple[dict, dict, tuple]] = []
    for k in range(bound + 1):
        vec = dict(cur.terms)
        combo = {k: Fraction(1)}
        for rv, rc, piv in rows:
            c = vec.get(piv)
            if not c:
                continue
            s = c / rv[piv]
            for e, a in rv.items():
                v = vec.get(e, 0) - s * a
                if v:
                    vec[e] = v
                else:
                    vec.pop(e, None)
            for e, a in rc.items():
                combo[e] = combo.get(e, 0) - s * a
        if not vec:
            coeffs = [Fraction(0)] * (k + 1)
            for e, a in combo.items():
                coeffs[e] = a
            return [c / coeffs[-1] for c in coeffs]
        rows.append((vec, combo, max(vec, key=grevlex_key)))
        cur = normal_form(cur * x, basis)
    raise CertificateError("minimal polynomial search did not terminate")


def _upoly_in_var(coeffs: Sequence[Fraction], var: int, nv: int) -> Poly:
    terms = {}
    for k, c in enumerate(coeffs):
        e = [0] * nv
        e[var] = k
        terms[tuple(e)] = c
    return Poly(nv, terms)


def zero_dim_radical(gens: Sequence[Poly]) -> List[Poly]:
    """Radical of a zero-dimensional affine ideal (squarefree eliminant per variable)."""
    basis = groebner(gens)
    if _is_unit(basis):
        return basis
    nv = basis[0].nvars
    if krull_dimension([leading_monomial(b) for b in basis], nv) != 0:
        raise UnsupportedError("radical only implemented for zero-dimensional ideals")
    extra = []
    for v in range(nv):
        sf = upoly.squarefree_part(minimal_polynomial(basis, v))
        extra.append(_upoly_in_var(sf, v, nv))
    return groebner(list(basis) + extra)


@dataclass(frozen=True)
class ChartCheck:
    chart: int
    empty: bool
    passed: bool
    radical: Tuple[Poly, ...] = ()


def radical_power_contained(forms: Sequence[Poly], M: int) -> Tuple[bool, Tuple[ChartCheck, ...]]:
    """Whether ``rad(I)^M`` lies in ``I`` on every standard affine chart.

    ``I`` is generated by homogeneous ``forms`` with finite projective locus.
    """
    nv = forms[0].nvars
    checks = []
    ok = True
    for i in range(nv):
        chart = _chart(forms, i)
        basis = groebner(chart)
        if _is_unit(basis):
            checks.append(ChartCheck(i, True, True))
            continue
        rad = zero_dim_radical(basis)
        passed = all(
            normal_form(_prod(combo, nv), basis).is_zero()
            for combo in combinations_with_replacement(rad, M)
        )
        checks.append(ChartCheck(i, False, passed, tuple(rad)))
        ok = ok and passed
    return ok, tuple(checks)


def _prod(polys: Sequence[Poly], nv: int) -> Poly:
    out = Poly.const(1, nv)
    for p in polys:
        out = out * p
    return out


# ---------------------------------------------------------------- points


def _normalize_point(pt: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    pt = tuple(Fraction(x) for x in pt)
    lead = next((x for x in pt if x != 0), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    return tuple(x / lead for x in pt)


def _rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain=sympy.QQ)
    return sorted(Fraction(int(r.p), int(r.q)) for r in poly.ground_roots())


def _solve_affine(gens: List[Poly], fixed: Dict[int, Fraction]) -> List[Dict[int, Fraction]]:
    basis = groebner(gens)
    if _is_unit(basis):
        return []
    nv = basis[0].nvars
    free = [v for v in range(nv) if v not in fixed]
    if not free:
        return [dict(fixed)]
    v = free[0]
    out = []
    for a in _rational_roots(minimal_polynomial(basis, v)):
        out.extend(_solve_affine(list(basis) + [Poly.var(v, nv) - a], {**fixed, v: a}))
    return out


@dataclass(frozen=True)
class PointCount:
    rational: Tuple[Tuple[Fraction, ...], ...]
    total: int

    @property
    def all_rational(self) -> bool:
        return len(self.rational) == self.total


def intersection_points(forms: Sequence[Poly]) -> PointCount:
    """Rational points of a finite projective locus, and the number of all its points."""
    nv = forms[0].nvars
    pts = []
    total = 0
    for i in range(nv):
        gens = _chart(forms, i, zero_before=True)
        basis = groebner(gens)
        if _is_unit(basis):
            continue
        rad = zero_dim_radical(basis)
        total += len(standard_monomials([leading_monomial(b) for b in rad], nv))
        for sol in _solve_affine(list(rad), {}):
            pts.append(_normalize_point([sol[k] for k in range(nv)]))
    return PointCount(tuple(sorted(set(pts))), total)


# ---------------------------------------------------------------- M


@dataclass(frozen=True)
class MultiplicityRecord:
    M: int
    status: str
    witness: str = ""

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if self.status not in ("certified", "assumed"):
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def membership_certificate(gens: Sequence[Poly], target: Poly) -> Optional[Tuple[Poly, ...]]:
    """Cofactors ``A`` with ``target = sum A_i gens_i``, or ``None`` if not a member."""
    G, C = groebner_with_cofactors(gens)
    quot, rem = divide(target, G)
    if not rem.is_zero():
        return None
    nv = target.nvars
    A = [Poly.zero(nv) for _ in gens]
    for qk, row in zip(quot, C):
        if qk.is_zero():
            continue
        for i, c in enumerate(row):
            A[i] = A[i] + qk * c
    if target.is_homogeneous() and all(g.is_homogeneous() for g in gens):
        d = target.degree()
        A = [a.homogeneous_component(d - g.degree()) for a, g in zip(A, gens)]
    residual = target - sum((a * g for a, g in zip(A, gens)), Poly.zero(nv))
    if not residual.is_zero():
        raise CertificateError("membership certificate failed to re-expand")
    return tuple(A)


def _reduced_by_transverse_core(forms: Sequence[Poly], N: int) -> Optional[str]:
    for core in combinations(range(len(forms)), N):
        sub = [forms[i] for i in core]
        if not is_transverse(sub):
            continue
        ideal = Ideal(tuple(sub), forms[0].nvars)
        if all(ideal.contains(forms[k]) for k in range(len(forms)) if k not in core):
            return f"core {list(core)} transverse, others members"
    return None


def certify_M(
    space: SpaceSpec,
    hypersurfaces: Sequence[Hypersurface],
    profile: PositionProfile,
    candidate: Optional[int] = None,
    search_cap: int = M_SEARCH_CAP,
) -> MultiplicityRecord:
    """Certify a multiplicity bound for all ``(t_0+1)``-subsets.

    Order of attempts: transverse core (M = 1); the radical-power test for
    ``candidate``; without a candidate, the least M up to ``search_cap``
    passing that test. Unsupported settings fall back to ``candidate`` as an
    assumption.
    """
    k = profile.t0 + 1
    q = len(hypersurfaces)
    if k > q:
        return MultiplicityRecord(1, "certified", "no subsets of size t_0+1")
    if space.X_ideal:
        if candidate is None:
            raise UnsupportedError("M certification needs X = P^N; declare assumed_M")
        return MultiplicityRecord(candidate, "assumed", "X is not projective space")
    dims = profile.dims()
    subsets = []
    for I in combinations(range(q), k):
        d = dims.get(I)
        if d is None:
            d = projective_dimension(Ideal(tuple(hypersurfaces[i].form for i in I), space.nvars))
        if d == 0:
            subsets.append(I)
        elif d > 0:
            raise PositionError(f"subset {list(I)} has positive-dimensional intersection")
    if not subsets:
        return MultiplicityRecord(1, "certified", "every (t_0+1)-subset meets X emptily")

    forms_of = {I: [hypersurfaces[i].form for i in I] for I in subsets}
    if candidate in (None, 1):
        notes = [_reduced_by_transverse_core(forms_of[I], space.N) for I in subsets]
        if all(notes):
            return MultiplicityRecord(1, "certified", "transverse: " + "; ".join(
                f"{list(I)} {w}" for I, w in zip(subsets, notes)))
    try:
        trials = [candidate] if candidate is not None else list(range(1, search_cap + 1))
        for M in trials:
            if all(radical_power_contained(forms_of[I], M)[0] for I in subsets):
                return MultiplicityRecord(M, "certified", f"rad^{M} contained in the ideal on every chart")
    except (CapExceeded, UnsupportedError) as exc:
        if candidate is None:
            raise
        return MultiplicityRecord(candidate, "assumed", f"certification unavailable: {exc}")
    if candidate is not None:
        raise PositionError(f"declared M = {candidate} fails the radical-power test")
    raise CapExceeded(f"no M <= {search_cap} passes the radical-power test")


# ---------------------------------------------------------------- alpha


def alpha(profile: PositionProfile, M: Union[int, MultiplicityRecord], degrees: Sequence[int]) -> Fraction:
    """Largest sum of ``min(M/deg, 1)`` over ``(t_{-1} - t_0)``-subsets."""
    if isinstance(M, MultiplicityRecord):
        M = M.M
    size = profile.t_minus1 - profile.t0
    if size < 0:
        raise ValueError("t_{-1} < t_0")
    vals = sorted((min(Fraction(M, d), Fraction(1)) for d in degrees), reverse=True)
    return sum(vals[:size], Fraction(0))


# ---------------------------------------------------------------- Nullstellensatz


@dataclass(frozen=True)
class NullstellensatzCertificate:
    """``targets[j]^exponents[j] = sum_i cofactors[j][i] * generators[i]``."""

    generators: Tuple[Poly, ...]
    targets: Tuple[Poly, ...]
    exponents: Tuple[int, ...]
    cofactors: Tuple[Tuple[Poly, ...], ...]

    def residual(self, j: int) -> Poly:
        lhs = self.targets[j] ** self.exponents[j]
        for a, g in zip(self.cofactors[j], self.generators):
            lhs = lhs - a * g
        return lhs

    def verify(self) -> bool:
        return all(self.residual(j).is_zero() for j in range(len(self.targets)))


def nullstellensatz_certificate(
    generators: Sequence[Poly],
    targets: Optional[Sequence[Poly]] = None,
    power_cap: int = POWER_CAP,
) -> NullstellensatzCertificate:
    gens = tuple(g for g in generators if not g.is_zero())
    if not gens:
        raise NonemptyLocusError("no generators")
    nv = gens[0].nvars
    if targets is None:
        if projective_dimension(Ideal(gens, nv)) != -1:
            raise NonemptyLocusError("the forms have a common projective zero")
        targets = [Poly.var(j, nv) for j in range(nv)]
    G, C = groebner_with_cofactors(list(gens))
    exps, cofs = [], []
    for T in targets:
        p = T
        for m in range(1, power_cap + 1):
            quot, rem = divide(p, G)
            if rem.is_zero():
                break
            p = p * T
        else:
            raise CertificateError(f"no power <= {power_cap} of {T.to_str()} lies in the ideal")
        A = [Poly.zero(nv) for _ in gens]
        for qk, row in zip(quot, C):
            if qk.is_zero():
                continue
            for i, c in enumerate(row):
                A[i] = A[i] + qk * c
        if p.is_homogeneous() and all(g.is_homogeneous() for g in gens):
            A = [a.homogeneous_component(p.degree() - g.degree()) for a, g in zip(A, gens)]
        exps.append(m)
        cofs.append(tuple(A))
    cert = NullstellensatzCertificate(gens, tuple(targets), tuple(exps), tuple(cofs))
    if not cert.verify():
        raise CertificateError("certificate does not re-expand to zero")
    return cert


# ---------------------------------------------------------------- separating hyperplanes


@dataclass(frozen=True)
class SeparatingSystem:
    points: Tuple[Tuple[Fraction, ...], ...]
    forms: Tuple[Poly, ...]

    def check(self) -> bool:
        for i, L in enumerate(self.forms):
            for j, P in enumerate(self.points):
                if (L(P) == 0) != (i == j):
                    return False
        return True


def _lattice(nv: int, bound: int):
    vecs = []
    for v in product(range(-bound, bound + 1), repeat=nv):
        first = next((x for x in v if x), 0)
        if first > 0:
            vecs.append(v)
    vecs.sort(key=lambda v: (sum(map(abs, v)), max(map(abs, v)), [-x for x in v]))
    return vecs


def _avoids_image(L: Poly, f: Optional[AnalyticMap]) -> bool:
    if f is None:
        return True
    try:
        restrict_form_to_map(L, f)
    except (ContainedInHypersurfaceError, UndeterminedError):
        return False
    return True


def select_separating_hyperplanes(
    points: Sequence[Sequence[Fraction]],
    f: Optional[AnalyticMap] = None,
    bound: int = 2,
) -> SeparatingSystem:
    """Hyperplane ``L_i`` through ``P_i`` only, not containing the image of ``f``."""
    pts = [_normalize_point(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    if not pts:
        return SeparatingSystem((), ())
    nv = len(pts[0])
    lattice = _lattice(nv, bound)
    forms = []
    for i, P in enumerate(pts):
        for v in lattice:
            L = linear_form(v)
            if L(P) != 0 or any(L(Q) == 0 for j, Q in enumerate(pts) if j != i):
                continue
            if _avoids_image(L, f):
                forms.append(L)
                break
        else:
            raise CapExceeded(f"no separating hyperplane for point {i} with coefficients in [-{bound}, {bound}]")
    return SeparatingSystem(tuple(pts), tuple(forms))
