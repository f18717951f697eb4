"""Quotient-ring contexts: relations, normal forms, duality, pushforwards,
the geometric operators and the invariant-class solver.

The relation set is checked against an evaluation oracle (the defining
auxiliary expansion evaluated at random rational points), and the reduction
pipeline against hand-computed fixtures and the duality predictions for the
graded dimensions.
"""

import random
from fractions import Fraction

import pytest

from chowkit import (
    NotInSpanError,
    Polynomial,
    RING_VARS,
    boundary_zero_section,
    coefficient_table,
    d_graded_piece,
    degree_triples,
    extra_shift_invariant,
    factorial,
    format_polynomial,
    half_shift,
    invariant_basis_element,
    invariant_generators,
    involution,
    make_context,
    parse,
    q_class,
    restrict_infty,
    restrict_zero,
    shift,
)
from chowkit.linalg import determinant, rank
from test_poly import random_poly

F = Fraction


# ------------------------------------------------------------------ relations


def test_relations_genus_1():
    ctx = make_context(1)
    assert ctx.relation(1) == parse("T1")
    assert ctx.relation(0) == parse("P")
    assert ctx.relation(-1) == parse("T2")


def test_relations_genus_2():
    ctx = make_context(2)
    assert ctx.relation(2) == parse("T1^2")
    assert ctx.relation(1) == parse("2*T1*P")
    assert ctx.relation(0) == parse("P^2 + 2*T1*T2")
    assert ctx.relation(-1) == parse("2*P*T2")
    assert ctx.relation(-2) == parse("T2^2")
    assert len(ctx.relations) == 5


@pytest.mark.parametrize("g", range(1, 7))
def test_relation_count_and_homogeneity(g):
    ctx = make_context(g)
    assert len(ctx.relations) == 2 * g + 1
    for l in ctx.relation_grades:
        rel = ctx.relation(l)
        assert rel.is_homogeneous() and rel.total_degree() == g
        assert d_graded_piece(rel, l) == rel
        for other in ctx.relation_grades:
            if other != l:
                assert d_graded_piece(rel, other).is_zero()


@pytest.mark.parametrize("g", range(1, 6))
def test_relations_evaluation_oracle(g):
    # sum_l rel_l * n^(g-l) must equal (T1 + n*P + n^2*T2)^g for every n.
    ctx = make_context(g)
    rng = random.Random(400 + g)
    for _ in range(5):
        point = {
            "xi": F(0),
            "T1": F(rng.randint(-4, 4), rng.randint(1, 3)),
            "P": F(rng.randint(-4, 4), rng.randint(1, 3)),
            "T2": F(rng.randint(-4, 4), rng.randint(1, 3)),
        }
        for n in range(-3, 4):
            total = sum(ctx.relation(l).evaluate(point) * F(n) ** (g - l) for l in ctx.relation_grades)
            assert total == (point["T1"] + n * point["P"] + n * n * point["T2"]) ** g


def test_context_validation():
    with pytest.raises(ValueError):
        make_context(0)
    with pytest.raises(ValueError):
        make_context(-2)
    ctx = make_context(2)
    with pytest.raises(ValueError):
        ctx.relation(3)


# ------------------------------------------------------------------ normal form


def test_normal_form_pinned_fixture():
    assert format_polynomial(make_context(2).normal_form(parse("P^2"))) == "-2*T1*T2"


def test_normal_form_xi_folding():
    ctx = make_context(3)
    assert ctx.normal_form(parse("xi^2")) == parse("xi*P")
    assert ctx.normal_form(parse("xi^3")) == parse("xi*P^2")
    assert ctx.normal_form(parse("xi^2 - xi*P")).is_zero()
    # In genus 2 the P^2 inside xi*P^2 reduces further.
    assert make_context(2).normal_form(parse("xi^3")) == parse("-2*xi*T1*T2")


@pytest.mark.parametrize("g", range(1, 7))
def test_top_powers_vanish(g):
    ctx = make_context(g)
    assert ctx.is_zero(Polynomial.monomial(RING_VARS, (0, g, 0, 0)))
    assert not ctx.is_zero(Polynomial.monomial(RING_VARS, (0, g - 1, 0, 0)))
    assert ctx.is_zero(Polynomial.monomial(RING_VARS, (0, 0, 0, g)))


@pytest.mark.parametrize("g", range(1, 9))
def test_theta_power_times_poincare_vanishes(g):
    ctx = make_context(g)
    assert ctx.is_zero(Polynomial.monomial(RING_VARS, (0, g - 1, 1, 0)))


@pytest.mark.parametrize("g", range(1, 7))
def test_odd_poincare_powers_vanish(g):
    ctx = make_context(g)
    for p in range(g):
        monomial = Polynomial.monomial(RING_VARS, (0, g - 1 - p, 2 * p + 1, 0))
        assert ctx.is_zero(monomial)


def test_normal_form_is_linear_and_idempotent():
    ctx = make_context(3)
    rng = random.Random(52)
    for _ in range(10):
        p = random_poly(rng, max_exp=2)
        q = random_poly(rng, max_exp=2)
        assert ctx.normal_form(p + q) == ctx.normal_form(p) + ctx.normal_form(q)
        nf = ctx.normal_form(p)
        assert ctx.normal_form(nf) == nf


def test_normal_form_respects_products():
    ctx = make_context(2)
    rng = random.Random(53)
    for _ in range(10):
        p = random_poly(rng, max_exp=2, terms=3)
        q = random_poly(rng, max_exp=2, terms=3)
        assert ctx.normal_form(p * q) == ctx.normal_form(ctx.normal_form(p) * ctx.normal_form(q))


def test_normal_form_rejects_wrong_vars():
    from chowkit import INVARIANT_VARS

    ctx = make_context(2)
    with pytest.raises(ValueError):
        ctx.normal_form(Polynomial.variable(INVARIANT_VARS, "Theta"))


# ------------------------------------------------------------------ dimensions


def test_dims_fixture_genus_3():
    ctx = make_context(3)
    assert [ctx.dim_graded(k) for k in range(6)] == [1, 3, 6, 3, 1, 0]


@pytest.mark.parametrize("g", range(1, 7))
def test_dims_structure(g):
    ctx = make_context(g)
    for k in range(g):
        assert ctx.dim_graded(k) == (k + 1) * (k + 2) // 2
    for k in range(2 * g - 1):
        assert ctx.dim_graded(k) == ctx.dim_graded(2 * g - 2 - k)
    assert ctx.dim_graded(2 * g - 2) == 1
    assert ctx.dim_graded(2 * g - 1) == 0
    assert ctx.dim_graded(2 * g + 3) == 0


@pytest.mark.parametrize("g", range(1, 6))
def test_dims_d_graded_partition(g):
    ctx = make_context(g)
    for k in range(2 * g):
        total = sum(ctx.dim_graded(k, l) for l in range(-k, k + 1))
        assert total == ctx.dim_graded(k)


def test_dim_rejects_negative_degree():
    with pytest.raises(ValueError):
        make_context(2).dim_graded(-1)


@pytest.mark.parametrize("g", range(2, 7))
def test_socle_basis_monomial(g):
    ctx = make_context(g)
    assert ctx.basis(2 * g - 2) == ((0, g - 1, 0, g - 1),)


# ------------------------------------------------------------------ pushforward


def test_socle_pushforward_fixtures():
    ctx = make_context(3)
    assert ctx.socle_pushforward(parse("P^4")) == 24
    assert ctx.socle_pushforward(parse("T1^2*T2^2")) == 4
    assert ctx.socle_pushforward(parse("T1*P^2*T2")) == -4
    assert ctx.socle_pushforward(Polynomial.zero(RING_VARS)) == 0
    assert make_context(1).socle_pushforward(Polynomial.constant(RING_VARS, F(5, 2))) == F(5, 2)


@pytest.mark.parametrize("g", range(1, 7))
def test_socle_pushforward_formula(g):
    ctx = make_context(g)
    for a in range(g):
        monomial = Polynomial.monomial(RING_VARS, (0, g - 1 - a, 2 * a, g - 1 - a))
        expected = F((-1) ** a * factorial(g - 1) * factorial(2 * a) * factorial(g - 1 - a), factorial(a))
        assert ctx.socle_pushforward(monomial) == expected


def test_socle_pushforward_validation():
    ctx = make_context(3)
    with pytest.raises(ValueError):
        ctx.socle_pushforward(parse("T1"))
    with pytest.raises(ValueError):
        ctx.socle_pushforward(parse("xi*T1^3"))
    with pytest.raises(ValueError):
        ctx.socle_pushforward(parse("T1^4 + T1"))


def test_pairing_fixture_genus_2():
    ctx = make_context(2)
    assert ctx.pairing_matrix(1) == [[F(1)]]
    matrix = ctx.pairing_matrix(0)
    assert len(matrix) == 3 and determinant(matrix) != 0


@pytest.mark.parametrize("g", range(1, 6))
def test_pairing_nonsingular(g):
    ctx = make_context(g)
    for k in range(g):
        matrix = ctx.pairing_matrix(k)
        assert len(matrix) == ctx.dim_graded(g - 1 - k)
        assert len(matrix[0]) == ctx.dim_graded(g - 1 + k)
        assert determinant(matrix) != 0


@pytest.mark.parametrize("g", range(2, 6))
def test_balanced_multiplication_injective(g):
    # Multiplying the lower canonical basis by (T1*T2)^k stays independent.
    ctx = make_context(g)
    for k in range(1, g):
        lower = ctx.basis(g - 1 - k)
        upper = ctx.basis(g - 1 + k)
        index = {m: i for i, m in enumerate(upper)}
        rows = []
        for m in lower:
            image = ctx.normal_form(Polynomial.monomial(RING_VARS, (0, m[1] + k, m[2], m[3] + k)))
            row = [F(0)] * len(upper)
            for exps, coeff in image.terms.items():
                row[index[exps]] = coeff
            rows.append(row)
        assert rank(rows) == len(lower)


def test_pairing_rejects_bad_offset():
    with pytest.raises(ValueError):
        make_context(2).pairing_matrix(2)


# ------------------------------------------------------------------ operators


def test_shift_fixtures():
    assert shift(parse("T1"), 2) == parse("T1 + 2*P + 4*T2")
    assert shift(parse("P"), -1) == parse("P - 2*T2")
    assert shift(parse("T2"), 5) == parse("T2")
    p = parse("T1*P - T2^2")
    assert shift(p, 0) == p


def test_shift_is_additive():
    rng = random.Random(7)
    for _ in range(10):
        p = random_poly(rng, max_exp=2, terms=4)
        p = p.substitute({"xi": 0})
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        assert shift(shift(p, a), b) == shift(p, a + b)


def test_shift_rejects_xi_and_non_integers():
    with pytest.raises(ValueError):
        shift(parse("xi"), 1)
    with pytest.raises(ValueError):
        shift(parse("T1"), F(1, 2))


def test_half_shift_squares_to_unit_shift():
    rng = random.Random(8)
    for _ in range(10):
        p = random_poly(rng, max_exp=3, terms=4).substitute({"xi": 0})
        assert half_shift(half_shift(p)) == shift(p, 1)


def test_involution_fixtures():
    assert involution(parse("P")) == parse("-1*P")
    assert involution(parse("xi")) == parse("xi - P")
    mu = parse("xi - 1/2*P")
    assert involution(mu) == mu
    rng = random.Random(9)
    for _ in range(10):
        p = random_poly(rng, max_exp=2, terms=4)
        assert involution(involution(p)) == p


def test_restrictions():
    assert restrict_zero(parse("xi*T1")) == parse("P*T1")
    assert restrict_zero(parse("xi^2")) == parse("P^2")
    assert restrict_infty(parse("xi*T1 + T2")) == parse("T2")


# ------------------------------------------------------------------ invariants


def test_invariant_generator_literals():
    gens = invariant_generators()
    assert gens.theta == parse("xi + T1 - 1/2*P")
    assert gens.boundary == parse("-2*T2")
    assert gens.gluing == parse("-4*xi*T2 - P^2 + 2*P*T2")
    assert q_class() == parse("4*T1*T2 - P^2")
    assert extra_shift_invariant() == parse("xi*(6*P*T2 + 12*T2^2) + P^3 - 4*P*T2^2")


def test_gluing_class_factors():
    # gluing == (2*xi - P) * (-2*xi + P - 2*T2) modulo xi^2 = xi*P alone
    # (the difference has degree 2, below any genus >= 3 relation).
    ctx = make_context(5)
    product = parse("(2*xi - P) * (-1*(2*xi) + P - 2*T2)")
    assert ctx.is_zero(invariant_generators().gluing - product)


@pytest.mark.parametrize("g", range(1, 7))
def test_invariant_classes_are_invariant(g):
    ctx = make_context(g)
    gens = invariant_generators()
    for cls in (gens.theta, gens.boundary, gens.gluing, q_class()):
        assert ctx.is_shift_invariant(cls)
        assert ctx.is_j_invariant(cls)


@pytest.mark.parametrize("g", range(1, 7))
def test_zero_section_class_is_invariant(g):
    ctx = make_context(g)
    section = boundary_zero_section(ctx)
    assert ctx.is_shift_invariant(section)
    assert ctx.is_j_invariant(section)


@pytest.mark.parametrize("g", range(1, 7))
def test_extra_class_shift_invariant(g):
    assert make_context(g).is_shift_invariant(extra_shift_invariant())


def test_extra_class_involution_behaviour():
    # Involution-invariance of the extra class holds only in low genus: the
    # difference j(x) - x is nonzero of xi-free degree 3 with a degree-2
    # xi-part, and the ideal has no nonzero elements below degree g.
    x = extra_shift_invariant()
    assert make_context(1).is_j_invariant(x)
    assert make_context(2).is_j_invariant(x)
    for g in (3, 4, 5):
        assert not make_context(g).is_j_invariant(x)


def test_random_shift_invariance_detects_failures():
    ctx = make_context(3)
    assert not ctx.is_shift_invariant(parse("T1"))
    assert not ctx.is_j_invariant(parse("P"))


# ------------------------------------------------------------------ solver


def test_degree_triples_order():
    assert degree_triples(2) == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)]
    assert degree_triples(0) == [(0, 0, 0)]
    assert degree_triples(3) == [(3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0), (1, 0, 1), (0, 1, 1)]
    with pytest.raises(ValueError):
        degree_triples(-1)


def test_invariant_basis_element_fixtures():
    assert invariant_basis_element((0, 0, 1), "alpha") == parse("4*T1*T2 - P^2")
    assert invariant_basis_element((0, 0, 1), "eta") == parse("-4*xi*T2 - P^2 + 2*P*T2")
    assert invariant_basis_element((1, 0, 0), "alpha") == parse("xi + T1 - 1/2*P + 1/4*T2")
    with pytest.raises(ValueError):
        invariant_basis_element((1, 0, 0), "gamma")


def test_express_balanced_monomial_genus_2():
    ctx = make_context(2)
    coeffs, kernel = ctx.express_in_invariants(parse("T1*T2"))
    assert coeffs == {(2, 0, 0): 0, (1, 1, 0): 0, (0, 2, 0): 0, (0, 0, 1): F(1, 6)}
    assert kernel == 1


def test_express_zero_section_genus_2():
    ctx = make_context(2)
    coeffs, kernel = ctx.express_in_invariants(boundary_zero_section(ctx))
    assert coeffs[(2, 0, 0)] == F(1, 2)
    assert coeffs[(1, 1, 0)] == F(1, 8)
    assert coeffs[(0, 0, 1)] == F(1, 24)
    assert kernel == 1
    # The published alpha table lies in the same solution set: it differs from
    # the particular solution by a kernel element, so it reproduces the class.
    table = coefficient_table(2).alpha
    total = Polynomial.zero(RING_VARS)
    for triple, value in table.items():
        total = total + value * invariant_basis_element(triple, "alpha")
    assert ctx.is_zero(total - boundary_zero_section(ctx))


@pytest.mark.parametrize("basis", ["alpha", "eta"])
@pytest.mark.parametrize("g", range(1, 5))
def test_express_round_trip(g, basis):
    ctx = make_context(g)
    section = boundary_zero_section(ctx)
    coeffs, kernel = ctx.express_in_invariants(section, basis=basis)
    assert kernel >= 0
    rebuilt = Polynomial.zero(RING_VARS)
    for triple, value in coeffs.items():
        rebuilt = rebuilt + value * invariant_basis_element(triple, basis)
    assert ctx.is_zero(rebuilt - section)


def test_express_zero_class_needs_degree():
    ctx = make_context(2)
    zero = Polynomial.zero(RING_VARS)
    with pytest.raises(ValueError):
        ctx.express_in_invariants(zero)
    coeffs, kernel = ctx.express_in_invariants(zero, degree=2)
    assert all(value == 0 for value in coeffs.values())
    assert kernel == 1


def test_express_rejects_inhomogeneous():
    ctx = make_context(2)
    with pytest.raises(ValueError):
        ctx.express_in_invariants(parse("T1 + T1*T2"))


def test_express_not_in_span():
    ctx = make_context(3)
    with pytest.raises(NotInSpanError):
        ctx.express_in_invariants(parse("P"), degree=1)


# ------------------------------------------------------------------ caching


def test_disk_cache_round_trip(tmp_path):
    first = make_context(3, tmp_path)
    dims = [first.dim_graded(k) for k in range(6)]
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].suffix == ".pickle"
    second = make_context(3, tmp_path)
    assert [second.dim_graded(k) for k in range(6)] == dims
    assert second.normal_form(parse("P^2 + T1*P")) == first.normal_form(parse("P^2 + T1*P"))


def test_disk_cache_corruption_is_ignored(tmp_path):
    target = tmp_path / "chowkit-echelon-v1-g2.pickle"
    target.write_bytes(b"not a pickle at all")
    ctx = make_context(2, tmp_path)
    assert format_polynomial(ctx.normal_form(parse("P^2"))) == "-2*T1*T2"


def test_cache_isolated_between_genera(tmp_path):
    make_context(2, tmp_path).dim_graded(2)
    make_context(3, tmp_path).dim_graded(2)
    names = sorted(f.name for f in tmp_path.iterdir())
    assert names == ["chowkit-echelon-v1-g2.pickle", "chowkit-echelon-v1-g3.pickle"]
