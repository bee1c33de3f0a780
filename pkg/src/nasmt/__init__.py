"""Exact non-Archimedean Nevanlinna quantities and arrangement invariants."""

from .forms import Poly, linear_form
from .pl import PLFun, constant, linear, order_statistic, pl_add, pl_max, pl_min_constant_dominating, pl_right_slope, pl_scale
from .position import (
    Ideal,
    MultiplicityRecord,
    NullstellensatzCertificate,
    PositionProfile,
    SeparatingSystem,
    alpha,
    certify_M,
    groebner_basis,
    nullstellensatz_certificate,
    projective_dimension,
    select_separating_hyperplanes,
    t_sequence,
    transversality_certificate,
)
from .projective import AnalyticMap, Hypersurface, SpaceSpec, characteristic, counting, fmt_defect, proximity, restrict_form_to_map
from .scenario import Scenario, builtin, load_scenario, parse_scenario
from .series import (
    CertifiedSeries,
    TailBound,
    ValuationSpec,
    coefficient_log_norm,
    gauss_norm,
    jensen_check,
    newton_polygon,
    series_add,
    series_compose,
    series_mul,
    zero_counting,
)
from .smt import BoundSpec, ProofTrace, VerificationReport, bound_coefficients, proof_trace, verify

__all__ = [name for name in dir() if not name.startswith("_")]
