from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nasmt.expr import ExpressionError, parse_form_expr, parse_series_expr, series_to_expr
from nasmt.forms import InhomogeneousError, Poly, as_form, jacobian_minors, linear_form
from nasmt.groebner import (
    divide,
    groebner,
    groebner_with_cofactors,
    krull_dimension,
    leading_monomial,
    normal_form,
    standard_monomials,
)
from nasmt.position import Ideal, groebner_basis, projective_dimension


def F(text, nv=3):
    return parse_form_expr(text, nv)


Q1 = F("X0*X1 - X2^2")
Q2 = F("X0*X2 - X1^2")
Q3 = Q1 + 3 * Q2

X = sympy.symbols("x0:3")


def to_sympy(p: Poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(x**k for x, k in zip(X, e))
               for e, c in p.terms.items())


def sympy_leading(polys, order="grevlex"):
    G = sympy.groebner([to_sympy(p) for p in polys], *X, order=order)
    return sorted(sympy.Poly(g, *X).monoms(order=order)[0] for g in G.exprs)


# ---------------------------------------------------------------- polynomials


def test_poly_arithmetic_and_evaluation():
    p = F("(X0 + X1)^2 - X0^2 - 2*X0*X1")
    assert p == F("X1^2")
    assert Q1((1, 1, 1)) == 0
    assert Q3((2, 3, 1)) == Fraction(5) + 3 * Fraction(-7)


def test_as_form_rejects_inhomogeneous_and_zero():
    with pytest.raises(InhomogeneousError):
        as_form(F("X0*X1 - X2^2 + X0"))
    with pytest.raises(InhomogeneousError):
        as_form(Poly.zero(3))


def test_jacobian_minors_of_line_pair_is_determinant():
    L1, L2 = linear_form([1, 2, 0]), linear_form([0, 1, 1])
    minors = jacobian_minors([L1, L2])
    # rows (1,2,0),(0,1,1): minors over column pairs (0,1),(0,2),(1,2)
    assert sorted(m.terms[(0, 0, 0)] for m in minors) == [1, 1, 2]


# ---------------------------------------------------------------- expression parser


def test_parser_accepts_both_power_operators_and_rationals():
    assert F("X0**2 - 1/2*X1*X2") == F("X0^2 - 1/2*X1*X2")
    assert F("-(X0 - X1)") == F("X1 - X0")


@pytest.mark.parametrize("text", ["X0 +", "X3", "X0^X1", "X0 / X1", "z", "(X0", "X0^1/2"])
def test_parser_errors(text):
    with pytest.raises(ExpressionError):
        F(text)


def test_series_expression_round_trip():
    cs = parse_series_expr("z^3 - 3*z + 1/2")
    assert cs == [Fraction(1, 2), -3, 0, 1]
    assert parse_series_expr(series_to_expr(cs)) == cs


# ---------------------------------------------------------------- Groebner bases


def test_reduced_basis_of_coordinate_ideal_is_itself():
    X0, X1 = Poly.var(0, 3), Poly.var(1, 3)
    assert set(groebner([X0, X1])) == {X0, X1}


def test_two_conics_leading_terms_match_sympy():
    G = groebner([Q1, Q2])
    ours = sorted(leading_monomial(g) for g in G)
    assert ours == sympy_leading([Q1, Q2])
    assert krull_dimension(ours, 3) == 1


def test_duplicate_generators_give_principal_basis():
    G = groebner([Q1, Q1, 2 * Q1])
    assert len(G) == 1 and G[0] == Q1  # monic already


def test_basis_is_deterministic_and_permutation_invariant():
    gens = [Q1, Q2, F("X0^2 - X1*X2")]
    a = groebner(gens)
    b = groebner(list(reversed(gens)))
    assert a == b


@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_reduced_basis_matches_sympy_exactly(order):
    gens = [Q1, Q3, F("X0^2 - X1^2")]
    ours = {g for g in groebner(gens, order)}
    G = sympy.groebner([to_sympy(g) for g in gens], *X, order=order)
    theirs = {Poly(3, {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in sympy.Poly(g, *X).terms()})
              for g in G.exprs}
    assert ours == theirs


def test_lex_and_grevlex_agree_on_dimension():
    for gens in ([Q1, Q2], [Q1], [Q1, Q2, Q3], [Q1, linear_form([0, 1, 0])]):
        dims = {krull_dimension([leading_monomial(g, o) for g in groebner(gens, o)], 3) for o in ("grevlex", "lex")}
        assert len(dims) == 1


def test_cofactors_reexpand_exactly():
    gens = [Q1, Q2, linear_form([1, 1, 1])]
    G, C = groebner_with_cofactors(gens)
    for g, row in zip(G, C):
        assert g == sum((c * f for c, f in zip(row, gens)), Poly.zero(3))


def test_division_identity():
    basis = groebner([Q1, Q2])
    f = F("X0^3 + X1^3 + X2^3")
    quot, rem = divide(f, basis)
    assert f == sum((q * b for q, b in zip(quot, basis)), rem)
    assert rem == normal_form(f, basis)


def test_standard_monomials_count_affine_points_of_two_conics():
    # all four intersection points have X0 != 0 and meet transversely
    aff = [Q1.substitute(0, 1), Q2.substitute(0, 1)]
    lead = [leading_monomial(g) for g in groebner(aff + [Poly.var(0, 3) - 1])]
    assert len(standard_monomials(lead, 3)) == 4
    aff_sympy = [to_sympy(p) for p in aff]
    assert len(sympy.solve(aff_sympy, X[1:], dict=True)) == 4


# ---------------------------------------------------------------- dimension


@pytest.mark.parametrize(
    "gens,expected",
    [
        (["X0", "X1", "X2"], -1),
        (["X0"], 1),
        (["X0*X1 - X2^2", "X0*X2 - X1^2"], 0),
        (["X0*X1 - X2^2"], 1),
        ([], 2),
    ],
)
def test_projective_dimension_examples(gens, expected):
    assert projective_dimension(Ideal(tuple(F(g) for g in gens), 3)) == expected


def test_groebner_basis_wraps_an_ideal():
    I = groebner_basis(Ideal((Q1, Q2, Q3), 3))
    assert projective_dimension(I) == 0
    assert I.contains(Q3)


small_forms = st.lists(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(any),
    min_size=1, max_size=3,
)


@settings(max_examples=40, deadline=None)
@given(small_forms, st.randoms(use_true_random=False))
def test_dimension_of_linear_ideals_matches_rank(vecs, rnd):
    from oracles import rank

    I = Ideal(tuple(linear_form(v) for v in vecs), 3)
    assert projective_dimension(I) == 2 - rank(vecs)
    shuffled = list(I.generators)
    rnd.shuffle(shuffled)
    extra = shuffled[0] * 2 + (shuffled[-1] if len(shuffled) > 1 else shuffled[0])
    assert projective_dimension(Ideal(tuple(shuffled) + (extra,), 3)) == projective_dimension(I)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_conic_pair_dimension_invariant_under_permutation_and_redundancy(a, b):
    mons = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    A = Poly(3, dict(zip(mons, a)))
    B = Poly(3, dict(zip(mons, b)))
    gens = tuple(g for g in (A, B) if not g.is_zero())
    if not gens:
        return
    d = projective_dimension(Ideal(gens, 3))
    assert projective_dimension(Ideal(tuple(reversed(gens)), 3)) == d
    assert projective_dimension(Ideal(gens + (gens[0] - 2 * gens[-1],), 3)) == d
    assert d == max(krull_dimension(sympy_leading(gens, "lex"), 3) - 1, -1)
