"""Second Main Theorem bounds checked as exact inequalities on a t-window.

Three right-hand sides are compared on ``sum_j m_f(t, D_j) / deg D_j``:

* ``quang``: ``t_{-1} * T``
* ``levin``: ``(n - 1 + max_j M / deg D_j) * T``, only in general position
* ``new``:   ``(t_0 + alpha) * T``

Every additive constant is the least one valid on the window, so reports
are domain-relative rather than asymptotic claims.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .pl import (
    PLFun,
    as_domain,
    exact,
    fmt_q,
    order_statistic,
    pl_min_constant_dominating,
    pl_sum,
)
from .position import (
    MultiplicityRecord,
    PositionProfile,
    alpha,
    certify_M,
    intersection_points,
    projective_dimension,
    Ideal,
    select_separating_hyperplanes,
    t_sequence,
)
from .projective import Hypersurface, characteristic, fmt_defect, proximity


@dataclass(frozen=True)
class BoundSpec:
    theorem: str
    coefficient: Fraction
    applicable: bool = True
    note: str = ""


def bound_coefficients(
    profile: PositionProfile,
    M: MultiplicityRecord,
    degrees: Sequence[int],
) -> List[BoundSpec]:
    a = alpha(profile, M, degrees)
    out = [BoundSpec("quang", Fraction(profile.t_minus1))]
    if profile.general_position:
        levin = profile.n - 1 + max(Fraction(M.M, d) for d in degrees)
        out.append(BoundSpec("levin", levin, note="general position"))
    out.append(BoundSpec("new", profile.t0 + a, note=f"t_0 = {profile.t0}, alpha = {fmt_q(a)}"))
    return out


@dataclass(frozen=True)
class BoundResult:
    spec: BoundSpec
    C_min: Fraction
    holds: bool
    slope_ok: bool

    @property
    def theorem(self) -> str:
        return self.spec.theorem

    @property
    def coefficient(self) -> Fraction:
        return self.spec.coefficient


@dataclass(frozen=True)
class VerificationReport:
    lhs: PLFun
    T: PLFun
    proximities: Tuple[PLFun, ...]
    profile: PositionProfile
    M: MultiplicityRecord
    alpha: Fraction
    bounds: Tuple[BoundResult, ...]
    sharpness_ratio: Optional[Fraction]
    fmt_constants: Tuple[Fraction, ...]
    assumptions: Tuple[str, ...] = ()

    @property
    def status(self) -> str:
        return "conditionally verified" if self.assumptions else "verified"

    @property
    def violated(self) -> bool:
        return any(not (b.holds and b.slope_ok) for b in self.bounds)

    def bound(self, theorem: str) -> BoundResult:
        for b in self.bounds:
            if b.theorem == theorem:
                return b
        raise KeyError(theorem)

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "assumptions": list(self.assumptions),
            "domain": [fmt_q(x) for x in self.T.domain],
            "constants": "domain-relative",
            "invariants": profile_json(self.profile, self.M, self.alpha),
            "T": plfun_json(self.T),
            "lhs": plfun_json(self.lhs),
            "proximity": [plfun_json(m) for m in self.proximities],
            "fmt_constants": [fmt_q(c) for c in self.fmt_constants],
            "sharpness_ratio": None if self.sharpness_ratio is None else fmt_q(self.sharpness_ratio),
            "bounds": [
                {
                    "theorem": b.theorem,
                    "coefficient": fmt_q(b.coefficient),
                    "C_min": fmt_q(b.C_min),
                    "holds": b.holds,
                    "slope_ok": b.slope_ok,
                    "note": b.spec.note,
                }
                for b in self.bounds
            ],
        }


def plfun_json(f: PLFun) -> Dict[str, List[str]]:
    return {"breakpoints": [fmt_q(x) for x in f.xs], "values": [fmt_q(y) for y in f.ys]}


def profile_json(profile: PositionProfile, M: MultiplicityRecord, a: Fraction) -> Dict[str, Any]:
    return {
        "q": profile.q,
        "n": profile.n,
        "t": {str(m): profile.t(m) for m in range(-1, profile.n)},
        "general_position": profile.general_position,
        "M": M.M,
        "M_status": M.status,
        "M_witness": M.witness,
        "alpha": fmt_q(a),
    }


@dataclass(frozen=True)
class Invariants:
    profile: PositionProfile
    M: MultiplicityRecord
    alpha: Fraction
    bounds: Tuple[BoundSpec, ...]


def invariants(scenario) -> Invariants:
    hyps = scenario.hypersurfaces
    profile = t_sequence(scenario.space, hyps, scenario.options.subset_cap)
    M = certify_M(scenario.space, hyps, profile, candidate=scenario.options.assumed_M)
    degrees = [D.degree for D in hyps]
    a = alpha(profile, M, degrees)
    return Invariants(profile, M, a, tuple(bound_coefficients(profile, M, degrees)))


def _assumptions(scenario, inv: Invariants) -> Tuple[str, ...]:
    out = list(getattr(scenario, "assumptions", ()))
    if inv.M.status == "assumed":
        out.append(f"M = {inv.M.M} assumed ({inv.M.witness})")
    if scenario.map.reducedness == "assumed":
        out.append("reducedness of the map assumed")
    return tuple(dict.fromkeys(out))


def _window(scenario, domain):
    return as_domain(domain if domain is not None else scenario.options.t_domain)


def lhs_function(scenario, domain=None) -> Tuple[PLFun, Tuple[PLFun, ...], PLFun]:
    dom = _window(scenario, domain)
    f = scenario.map
    norm = scenario.options.normalize_coeffs
    prox = tuple(proximity(f, D, dom, norm) for D in scenario.hypersurfaces)
    lhs = pl_sum(m * Fraction(1, D.degree) for m, D in zip(prox, scenario.hypersurfaces))
    return lhs, prox, characteristic(f, dom)


def verify(scenario, domain=None) -> VerificationReport:
    dom = _window(scenario, domain)
    inv = invariants(scenario)
    lhs, prox, T = lhs_function(scenario, dom)
    results = []
    for spec in inv.bounds:
        rhs = T * spec.coefficient
        C = pl_min_constant_dominating(lhs, rhs)
        holds = all(lhs(x) <= rhs(x) + C for x in sorted(set(lhs.xs) | set(rhs.xs)))
        slope_ok = lhs.right_slope() <= spec.coefficient * T.right_slope()
        results.append(BoundResult(spec, C, holds, slope_ok))
    ratio = None
    if T.right_slope() != 0:
        ratio = lhs.right_slope() / T.right_slope()
    fmt = tuple(fmt_defect(scenario.map, D, dom)[1] for D in scenario.hypersurfaces)
    return VerificationReport(lhs, T, prox, inv.profile, inv.M, inv.alpha, tuple(results), ratio, fmt,
                              _assumptions(scenario, inv))


# ---------------------------------------------------------------- proof trace


@dataclass(frozen=True)
class MiddleEntry:
    index: int
    value: Fraction
    bound: Fraction
    C: Fraction


@dataclass(frozen=True)
class ProofTrace:
    t: Fraction
    order: Tuple[int, ...]
    values: Tuple[Fraction, ...]
    lhs: Fraction
    T: Fraction
    pieces: Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]
    piece_sums: Tuple[Fraction, Fraction, Fraction]
    last_piece_bound: Optional[Fraction]
    last_piece_eventually_constant: Optional[bool]
    middle: Tuple[MiddleEntry, ...]
    middle_alpha_bound: Fraction
    hyperplanes: Optional[Dict[str, Any]] = None
    notices: Tuple[str, ...] = field(default=())

    def to_json(self) -> Dict[str, Any]:
        return {
            "t": fmt_q(self.t),
            "order": list(self.order),
            "m_over_deg": [fmt_q(v) for v in self.values],
            "lhs": fmt_q(self.lhs),
            "T": fmt_q(self.T),
            "pieces": [list(p) for p in self.pieces],
            "piece_sums": [fmt_q(s) for s in self.piece_sums],
            "last_piece_bound": None if self.last_piece_bound is None else fmt_q(self.last_piece_bound),
            "last_piece_eventually_constant": self.last_piece_eventually_constant,
            "middle": [
                {"index": e.index, "value": fmt_q(e.value), "bound": fmt_q(e.bound), "C": fmt_q(e.C)}
                for e in self.middle
            ],
            "middle_alpha_bound": fmt_q(self.middle_alpha_bound),
            "hyperplanes": self.hyperplanes,
            "notices": list(self.notices),
        }


def proof_trace(scenario, t, domain=None) -> ProofTrace:
    """Split ``sum m/deg`` at ``t`` into the pieces ``j <= t_0``, ``t_0 < j <= t_{-1}``, ``j > t_{-1}``."""
    dom = _window(scenario, domain)
    t = exact(t)
    if not dom[0] <= t <= dom[1]:
        raise ValueError("t outside the domain")
    inv = invariants(scenario)
    hyps: Sequence[Hypersurface] = scenario.hypersurfaces
    lhs, prox, T = lhs_function(scenario, dom)
    ratios = [m * Fraction(1, D.degree) for m, D in zip(prox, hyps)]
    vals = [r(t) for r in ratios]
    order = tuple(sorted(range(len(hyps)), key=lambda j: (-vals[j], j)))
    t0, tm1 = inv.profile.t0, inv.profile.t_minus1
    pieces = (order[:t0], order[t0:tm1], order[tm1:])
    sums = tuple(sum((vals[j] for j in p), Fraction(0)) for p in pieces)
    if sum(sums) != lhs(t):
        raise AssertionError("pieces do not sum to the left-hand side")

    last_bound = last_const = None
    if tm1 < len(hyps):
        stat = order_statistic(ratios, tm1 + 1)
        last_bound = stat.max()
        last_const = stat.right_slope() <= 0

    Tt = T(t)
    middle = []
    for j in pieces[1]:
        c = min(Fraction(inv.M.M, hyps[j].degree), Fraction(1))
        middle.append(MiddleEntry(j, vals[j], c * Tt, pl_min_constant_dominating(ratios[j], T * c)))

    notices = []
    hyper = None
    first = order[: t0 + 1]
    if t0 + 1 > len(hyps):
        notices.append("fewer than t_0 + 1 hypersurfaces; no support points")
    elif scenario.space.X_ideal:
        notices.append("separating hyperplanes only built on projective space")
    else:
        forms = [hyps[j].form for j in first]
        if projective_dimension(Ideal(tuple(forms), scenario.space.nvars)) != 0:
            notices.append("support of the first t_0 + 1 hypersurfaces is empty or not finite")
        else:
            pts = intersection_points(forms)
            if not pts.all_rational:
                notices.append(
                    f"{pts.total - len(pts.rational)} of {pts.total} support points are not rational; hyperplane check skipped"
                )
            else:
                sep = select_separating_hyperplanes(pts.rational, scenario.map)
                Hs = [Hypersurface(f"H{i + 1}", L) for i, L in enumerate(sep.forms)]
                total = pl_sum(proximity(scenario.map, H, dom) for H in Hs)
                hyper = {
                    "subset": list(first),
                    "points": [[fmt_q(x) for x in P] for P in sep.points],
                    "forms": [L.to_str() for L in sep.forms],
                    "sum_m_at_t": fmt_q(total(t)),
                    "T_at_t": fmt_q(Tt),
                    "C": fmt_q(pl_min_constant_dominating(total, T)),
                }
    return ProofTrace(
        t, order, tuple(vals), lhs(t), Tt, pieces, sums, last_bound, last_const,
        tuple(middle), inv.alpha * Tt, hyper, tuple(notices),
    )
