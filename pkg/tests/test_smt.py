import json
import re
from fractions import Fraction

import pytest

from nasmt.pl import linear
from nasmt.position import MultiplicityRecord, PositionProfile
from nasmt.scenario import builtin, scenario_from_dict
from nasmt.smt import bound_coefficients, invariants, proof_trace, verify

DOM = (0, 10)


def scenario(coords, forms, p=5, N=2, **extra):
    d = {
        "valuation": {"kind": "p-adic", "p": p},
        "space": {"N": N, **extra.pop("space", {})},
        "map": {"coords": coords},
        "hypersurfaces": [{"name": f"D{i + 1}", "form": f} for i, f in enumerate(forms)],
        "options": {"t_domain": ["0", "10"], **extra.pop("options", {})},
    }
    return scenario_from_dict(d)


def coeffs(specs):
    return {b.theorem: b.coefficient for b in specs}


LINES_GP = ["X0", "X1", "X2", "X0 + X1 + X2"]


# ---------------------------------------------------------------- coefficients


def test_three_conic_coefficients():
    inv = invariants(builtin("three_conics"))
    assert coeffs(inv.bounds) == {"quang": 3, "new": 2}


def test_general_position_conics_recover_levin():
    prof = PositionProfile(3, 2, (2, 1, 0))
    c = coeffs(bound_coefficients(prof, MultiplicityRecord(1, "certified"), [2, 2, 2]))
    assert c == {"quang": 2, "levin": Fraction(3, 2), "new": Fraction(3, 2)}


def test_hyperplanes_make_new_equal_quang():
    inv = invariants(scenario(["1", "z", "z^2"], ["X0", "X1", "X0 + X1", "X2"]))
    c = coeffs(inv.bounds)
    assert c["new"] == c["quang"] == inv.profile.t_minus1


def test_general_position_lines_new_equals_levin():
    inv = invariants(scenario(["1", "z", "z^2"], LINES_GP))
    assert inv.profile.general_position and inv.profile.q > inv.profile.n
    c = coeffs(inv.bounds)
    assert c["new"] == c["levin"] == 2


# ---------------------------------------------------------------- verify


def test_three_conics_report():
    rep = verify(builtin("three_conics"))
    assert rep.lhs == linear(DOM, 2) and rep.T == linear(DOM, 1)
    new = rep.bound("new")
    assert (new.coefficient, new.C_min, new.holds, new.slope_ok) == (2, 0, True, True)
    assert rep.sharpness_ratio == 2
    assert rep.status == "verified" and not rep.violated
    assert rep.fmt_constants == (0, 0, 0)


def test_trivial_valuation_ratio():
    rep = verify(builtin("trivial_valuation_remark"))
    assert rep.sharpness_ratio == Fraction(149, 50)
    assert rep.bound("quang").coefficient == 3


def test_first_main_theorem_case_q_at_most_t0():
    rep = verify(scenario(["1", "z", "z^3"], ["X0*X1 - X2^2"]))
    assert rep.profile.q <= rep.profile.t0 + 1
    assert {b.theorem for b in rep.bounds} >= {"quang", "new"}
    assert not rep.violated


@pytest.mark.parametrize("coords,forms", [
    (["1", "z", "z^2"], LINES_GP),
    (["z^2", "z", "1"], ["X0*X1 - X2^2", "X1"]),
    (["z", "1", "0"], ["X0*X1 - X2^2", "X0*X2 - X1^2"]),
    (["1 + z", "z^3 - 2", "5*z"], ["X0^2 - X1*X2", "X0 - X1", "X2"]),
])
def test_certified_scenarios_satisfy_bound_relations(coords, forms):
    rep = verify(scenario(coords, forms))
    assert not rep.violated
    assert rep.bound("new").coefficient <= rep.bound("quang").coefficient
    assert rep.sharpness_ratio <= rep.bound("new").coefficient


def test_assumed_M_watermarks_the_report():
    sc = scenario(["1", "z", "z^2", "z^3"], ["X0", "X3", "X1 + X2"], N=3,
                  space={"X_ideal": ["X0*X3 - X1*X2"]}, options={"assumed_M": 1})
    rep = verify(sc)
    assert rep.M.status == "assumed"
    assert rep.status == "conditionally verified"
    assert any("assumed" in a for a in rep.assumptions)


def test_report_json_uses_exact_strings():
    data = verify(builtin("three_conics")).to_json()
    text = json.dumps(data)
    assert data["constants"] == "domain-relative"
    assert data["sharpness_ratio"] == "2/1"
    for b in data["bounds"]:
        assert re.fullmatch(r"-?\d+/\d+", b["coefficient"]) and re.fullmatch(r"-?\d+/\d+", b["C_min"])
    assert not re.search(r"\d\.\d", text)


# ---------------------------------------------------------------- proof trace


def test_three_conics_trace_at_five():
    tr = proof_trace(builtin("three_conics"), 5)
    assert tr.values == (Fraction(5, 2), 5, Fraction(5, 2))
    assert tr.order == (1, 0, 2)
    assert tr.pieces == ((1,), (0, 2), ())
    assert tr.piece_sums == (5, 5, 0)
    assert tr.lhs == 10 and tr.last_piece_bound is None
    assert all(e.value <= e.bound + e.C for e in tr.middle)


@pytest.mark.parametrize("t", [Fraction(1, 3), 2, 7, 10])
def test_trace_pieces_sum_to_lhs(t):
    for name in ("three_conics", "trivial_valuation_remark", "tangent_line_M2"):
        tr = proof_trace(builtin(name), t)
        assert sum(tr.piece_sums) == tr.lhs


def test_last_piece_is_constant_when_q_exceeds_t_minus1():
    sc = scenario(["1", "z", "z^2"], LINES_GP)
    traces = [proof_trace(sc, t) for t in (2, 4, 8)]
    assert traces[0].pieces[2]
    assert len({tr.piece_sums[2] for tr in traces}) == 1
    assert all(tr.last_piece_eventually_constant for tr in traces)
    assert all(tr.piece_sums[2] <= tr.last_piece_bound * len(tr.pieces[2]) for tr in traces)


def test_trace_hyperplane_diagnostic_and_notice():
    tr = proof_trace(scenario(["1", "z", "z^2"], LINES_GP), 4)
    h = tr.hyperplanes
    assert h is not None
    assert Fraction(h["sum_m_at_t"]) <= Fraction(h["T_at_t"]) + Fraction(h["C"])
    conics = proof_trace(builtin("three_conics"), 4)
    assert conics.hyperplanes is None
    assert any("not rational" in n for n in conics.notices)


def test_trace_rejects_t_outside_domain():
    with pytest.raises(ValueError):
        proof_trace(builtin("three_conics"), 11)
