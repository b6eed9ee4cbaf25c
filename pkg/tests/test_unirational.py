import pytest

from unirat.coeffs import QQ, PrimeField
from unirat.errors import InseparableInputError, UniratError
from unirat.fields import AmbientField, FieldPresentation, RatFunc
from unirat.poly import MultiPoly
from unirat.unirational import (
    INFINITE,
    NOT_MEMBER,
    TRANSCENDENTAL,
    algebraic_degree,
    ambient_trdeg,
    infinite_family_witness,
    is_integral,
    is_valid_separating_subset,
    jacobian_trdeg,
    membership_express,
    minimal_polynomial,
    separating_basis,
    tag_basis,
    trdeg_groebner,
    uni_multivariate_decompose,
    verify_minimal_polynomial,
)

from helpers import mkvars, rand_polys


def sweedler_presentation():
    x, y = mkvars("x", "y")
    f1 = RatFunc.from_poly(-(y**2) * x - y**4 + 2 * x + 2 * y**2 - 1)
    f2 = RatFunc.from_poly(4 * y**4 - 10 * y**2 + 5 + 3 * y**2 * x - 6 * x)
    amb = AmbientField(QQ, ("x", "y"))
    return FieldPresentation(amb, [f1, f2])


def steinwandt_presentation():
    names = ("x1", "x2", "x3")
    x1, x2, x3 = (MultiPoly.var(QQ, names, n) for n in names)
    g1 = RatFunc(
        x1**2 * x2 + x1 * x2**2 - 3 * x1 * x2 * x3 - x3 * x1 - x3 * x2 + 2 * x3**2 - x1,
        x1**2 + x1 * x2 - 2 * x3 * x1,
    )
    g2 = RatFunc(
        x1**2 * x2 + x1 * x2**2 - 2 * x1 * x2 * x3 - x3 * x1 - x3 * x2 + 2 * x3**2,
        x1 + x1 * x2 * x3,
    )
    g3 = RatFunc(
        x1**2 - x1 * x2 - 2 * x3 * x1 + 2 * x3 - 2 * x3 * x2**2 * x1 + 2 * x3**2 * x2,
        x1 * x2 - x3 + x3 * x2**2 * x1 - x3**2 * x2,
    )
    g4 = RatFunc(
        -x1 * x2 + x3 - x3 * x2**2 * x1 + x3**2 * x2,
        -(x1**2) + 2 * x3 * x1 - x3 + x3 * x2**2 * x1 - x3**2 * x2,
    )
    amb = AmbientField(QQ, names)
    return FieldPresentation(amb, [g1, g2, g3, g4])


def kalgebra_presentation():
    names = ("x", "y", "z")
    X, Y, Z = (MultiPoly.var(QQ, names, n) for n in names)
    amb = AmbientField(QQ, names, relations=[X**2 + Y**2])
    s = X + 2 * Y - Z
    return FieldPresentation(amb, [RatFunc.from_poly(s**3), RatFunc.from_poly(s**2)])


# ---------------------------------------------------------------------------
# tag bases, transcendence degree, algebraic degree
# ---------------------------------------------------------------------------


def test_trdeg_of_running_example():
    assert trdeg_groebner(tag_basis(sweedler_presentation())) == 2


def test_trdeg_trivial_and_dependent():
    amb = AmbientField(QQ, ("x1", "x2"))
    x1 = RatFunc.var(QQ, ("x1", "x2"), "x1")
    assert trdeg_groebner(tag_basis(FieldPresentation(amb, [x1]))) == 1

    ambx = AmbientField(QQ, ("x",))
    x = RatFunc.var(QQ, ("x",), "x")
    P = FieldPresentation(ambx, [x, x * x])
    assert trdeg_groebner(tag_basis(P)) == 1


def test_tag_basis_identity_generators():
    amb = AmbientField(QQ, ("x1", "x2"))
    gens = [RatFunc.var(QQ, ("x1", "x2"), v) for v in ("x1", "x2")]
    T = tag_basis(FieldPresentation(amb, gens))
    assert len(T.gb) == 2  # {t_i - x_i} reduced


def test_tag_basis_includes_relations():
    P = kalgebra_presentation()
    T = tag_basis(P)
    assert any(g.degree_in("z") == 0 and g.degree_in("x") == 2 for g in T.ideal.generators)


def test_algebraic_degree_running_example():
    assert algebraic_degree(tag_basis(sweedler_presentation())) == 4


def test_algebraic_degree_trivial_cases():
    amb = AmbientField(QQ, ("x1", "x2"))
    gens = [RatFunc.var(QQ, ("x1", "x2"), v) for v in ("x1", "x2")]
    assert algebraic_degree(tag_basis(FieldPresentation(amb, gens))) == 1

    ambx = AmbientField(QQ, ("x",))
    x = RatFunc.var(QQ, ("x",), "x")
    assert algebraic_degree(tag_basis(FieldPresentation(ambx, [x * x]))) == 2


def test_algebraic_degree_infinite():
    amb = AmbientField(QQ, ("x1", "x2"))
    x1 = RatFunc.var(QQ, ("x1", "x2"), "x1")
    assert algebraic_degree(tag_basis(FieldPresentation(amb, [x1]))) == INFINITE


# ---------------------------------------------------------------------------
# minimal polynomials, membership, integrality
# ---------------------------------------------------------------------------


def test_minimal_polynomial_of_y():
    P = sweedler_presentation()
    T = tag_basis(P)
    y = RatFunc.var(QQ, ("x", "y"), "y")
    mp = minimal_polynomial(y, T)
    t1, t2 = mkvars("t1", "t2")
    # z^4 - 4z^2 + (2 - 3t1 - t2), monic
    assert mp.degree() == 4
    assert mp.coeff(4) == RatFunc.const(QQ, ("t1", "t2"), 1)
    assert mp.coeff(2) == RatFunc.const(QQ, ("t1", "t2"), -4)
    assert mp.coeff(3).is_zero() and mp.coeff(1).is_zero()
    assert mp.coeff(0) == RatFunc.from_poly(
        MultiPoly.const(QQ, ("t1", "t2"), 2) - 3 * t1 - t2
    )
    assert verify_minimal_polynomial(mp, y, P)


def test_minimal_polynomial_of_generator_is_linear():
    P = sweedler_presentation()
    T = tag_basis(P)
    mp = minimal_polynomial(P.generators[0], T)
    assert mp.degree() == 1


def test_minimal_polynomial_of_x_has_degree_two():
    P = sweedler_presentation()
    T = tag_basis(P)
    x = RatFunc.var(QQ, ("x", "y"), "x")
    mp = minimal_polynomial(x, T)
    assert mp.degree() == 2
    assert verify_minimal_polynomial(mp, x, P)


def test_minimal_polynomial_transcendental():
    amb = AmbientField(QQ, ("x1", "x2"))
    x1 = RatFunc.var(QQ, ("x1", "x2"), "x1")
    x2 = RatFunc.var(QQ, ("x1", "x2"), "x2")
    T = tag_basis(FieldPresentation(amb, [x1]))
    assert minimal_polynomial(x2, T) == TRANSCENDENTAL


def test_membership_express_polynomial_combination():
    P = sweedler_presentation()
    T = tag_basis(P)
    c = P.generators[0] + P.generators[1] * P.generators[1]
    expr = membership_express(c, T)
    assert not isinstance(expr, str)
    t1 = RatFunc.var(QQ, ("t1", "t2"), "t1")
    t2 = RatFunc.var(QQ, ("t1", "t2"), "t2")
    assert expr == t1 + t2 * t2


def test_membership_express_rejects_nonmember():
    P = sweedler_presentation()
    T = tag_basis(P)
    x = RatFunc.var(QQ, ("x", "y"), "x")
    assert membership_express(x, T) == NOT_MEMBER


def test_membership_h1h2_equals_second_generator():
    P = steinwandt_presentation()
    T = tag_basis(P)
    names = ("x1", "x2", "x3")
    x1, x2, x3 = (MultiPoly.var(QQ, names, n) for n in names)
    h1 = RatFunc(x1 + x2 - 2 * x3, 1 + x3 * x2)
    h2 = RatFunc(x1 * x2 - x3, x1)
    expr = membership_express(h1 * h2, T)
    t2 = RatFunc.var(QQ, P.tags, "t2")
    assert expr == t2


def test_is_integral_examples():
    ambx = AmbientField(QQ, ("x",))
    X = MultiPoly.var(QQ, ("x",), "x")
    x = RatFunc.from_poly(X)
    # x^3 over K[x^2]: monic relation z^2 - (t1)^3
    assert is_integral(RatFunc.from_poly(X**3), FieldPresentation(ambx, [x * x]))
    # 1/x over K[x]: not integral
    assert not is_integral(x.inv(), FieldPresentation(ambx, [x]))
    # a generator over its own algebra
    P = sweedler_presentation()
    assert is_integral(P.generators[0], tag_basis(P))
    # x over K[x^2, x^3] is integral although its minimal polynomial is z - t2/t1
    Pnn = FieldPresentation(ambx, [x * x, x * x * x])
    assert is_integral(x, Pnn)


# ---------------------------------------------------------------------------
# Jacobian rank and separating bases
# ---------------------------------------------------------------------------


def test_jacobian_steinwandt():
    P = steinwandt_presentation()
    rep = jacobian_trdeg(P)
    assert rep.rank == 2
    assert rep.trdeg == 1
    assert rep.basis_vars == ("x3",)
    assert rep.separable_certified
    assert separating_basis(P) == ("x3",)


def test_jacobian_trivial():
    amb = AmbientField(QQ, ("x1", "x2"))
    x1 = RatFunc.var(QQ, ("x1", "x2"), "x1")
    P = FieldPresentation(amb, [x1])
    assert separating_basis(P) == ("x2",)


def test_jacobian_prime_field_inseparability():
    F = PrimeField(5)
    names = ("x", "y")
    xp = MultiPoly.var(F, names, "x")
    yp = MultiPoly.var(F, names, "y")
    amb = AmbientField(F, names)
    P = FieldPresentation(amb, [RatFunc.from_poly(xp), RatFunc.from_poly(yp**5)])
    rep = jacobian_trdeg(P)
    assert rep.rank == 1
    assert rep.separable_certified is False
    # the Groebner transcendence degree sees the truth
    assert trdeg_groebner(tag_basis(P)) == 2
    with pytest.raises(InseparableInputError):
        separating_basis(P)


def test_jacobian_kalgebra_example():
    P = kalgebra_presentation()
    rep = jacobian_trdeg(P)
    assert rep.rank == 2
    assert rep.trdeg == 1
    assert ambient_trdeg(P.ambient) == 2
    assert trdeg_groebner(tag_basis(P)) == 1
    # both x and y are accepted as valid one-element bases
    assert is_valid_separating_subset(P, ("x",))
    assert is_valid_separating_subset(P, ("y",))
    assert not is_valid_separating_subset(P, ("x", "y"))


def test_jacobian_agrees_with_groebner_on_randoms(rng):
    vars = ("x", "y")
    amb = AmbientField(QQ, vars)
    done = 0
    while done < 10:
        polys = rand_polys(rng, vars, 2, max_deg=3, n_terms=3)
        if any(p.is_constant() for p in polys):
            continue
        P = FieldPresentation(amb, [RatFunc.from_poly(p) for p in polys])
        rep = jacobian_trdeg(P)
        true_trdeg = trdeg_groebner(tag_basis(P))
        assert rep.rank == true_trdeg  # char 0: separable
        done += 1


# ---------------------------------------------------------------------------
# uni-multivariate decomposition
# ---------------------------------------------------------------------------


def test_decompose_power_pair():
    x, y = mkvars("x", "y")
    res = uni_multivariate_decompose([(x + y) ** 2, (x + y) ** 3])
    assert res is not None
    inner, qs = res
    # verify p_i == q_i(inner) exactly
    for p, q in zip([(x + y) ** 2, (x + y) ** 3], qs):
        acc = MultiPoly.zero(QQ, ("x", "y"))
        power = MultiPoly.const(QQ, ("x", "y"), 1)
        for i in range(q.degree_in("t") + 1):
            c = q.terms.get((i,), QQ.zero)
            acc = acc + power.scale(c)
            power = power * inner
        assert acc == p


def test_decompose_independent_pair_returns_none():
    x, y = mkvars("x", "y")
    assert uni_multivariate_decompose([x, y]) is None


def test_decompose_univariate_shifted():
    (x,) = mkvars("x")
    res = uni_multivariate_decompose([x**2 + 1, x**2])
    assert res is not None
    inner, qs = res
    assert inner == x**2
    assert qs[0].terms == {(0,): 1, (1,): 1}  # t + 1
    assert qs[1].terms == {(1,): 1}  # t


def test_decompose_rejects_prime_fields():
    F = PrimeField(5)
    x = MultiPoly.var(F, ("x",), "x")
    with pytest.raises(InseparableInputError):
        uni_multivariate_decompose([x**5])


# ---------------------------------------------------------------------------
# infinite families
# ---------------------------------------------------------------------------


def test_witness_for_deficient_presentation():
    amb = AmbientField(QQ, ("x1", "x2"))
    x1 = RatFunc.var(QQ, ("x1", "x2"), "x1")
    w = infinite_family_witness(FieldPresentation(amb, [x1]))
    assert w is not None and w.variable == "x2"
    assert "x2^k" in w.description


def test_witness_none_when_algebraic():
    assert infinite_family_witness(sweedler_presentation()) is None


def test_witness_single_generator_of_running_example():
    amb = AmbientField(QQ, ("x", "y"))
    P1 = FieldPresentation(amb, [sweedler_presentation().generators[0]])
    w = infinite_family_witness(P1)
    assert w is not None and w.variable in ("x", "y")


def test_degree_matches_primitive_element_minpoly():
    # cross-module check: [K(x,y):K(f1,f2)] = 4 = degree of the minimal
    # polynomial of the primitive element found by the lattice pipeline
    from unirat.subfields import rewrite_presentation

    P = sweedler_presentation()
    assert algebraic_degree(tag_basis(P)) == 4
    D = rewrite_presentation(P)
    assert D.ext.minpoly.degree() == 4
