import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from unirat.coeffs import QQ, PrimeField
from unirat.errors import InseparableInputError, UniverseMismatchError
from unirat.poly import (
    Block,
    GrevLex,
    Lex,
    MultiPoly,
    det_bareiss,
    divides,
    exact_div,
    multivar_gcd,
    poly_arith,
    resultant,
    squarefree_decomposition,
    sylvester_matrix,
    tag_order,
)

from helpers import mkvars, rand_polys


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------


def test_difference_of_squares():
    x, y = mkvars("x", "y")
    assert poly_arith(x + y, x - y, "mul") == x**2 - y**2


def test_add_zero_identity():
    x, y = mkvars("x", "y")
    p = 3 * x**2 * y - y + 7
    assert poly_arith(p, MultiPoly.zero(QQ, ("x", "y")), "add") == p


def test_square_of_linear_form():
    x, y, z = mkvars("x", "y", "z")
    s = x + 2 * y - z
    expanded = poly_arith(s, s, "mul")
    assert expanded == x**2 + 4 * y**2 + z**2 + 4 * x * y - 2 * x * z - 4 * y * z


def test_universe_mismatch_rejected():
    (x,) = mkvars("x")
    (y,) = mkvars("y")
    with pytest.raises(UniverseMismatchError):
        poly_arith(x, y, "add")


def test_field_mismatch_rejected():
    x = MultiPoly.var(QQ, ("x",), "x")
    x5 = MultiPoly.var(PrimeField(5), ("x",), "x")
    with pytest.raises(UniverseMismatchError):
        x + x5


def test_ring_axioms_on_random_triples(rng):
    vars = ("x", "y", "z")
    for _ in range(30):
        a, b, c = rand_polys(rng, vars, 3)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------


def test_partial_derivative_basic():
    x, y = mkvars("x", "y")
    assert (x**2 * y).derivative("x") == 2 * x * y


def test_derivative_kills_pth_powers():
    p = 7
    F = PrimeField(p)
    y = MultiPoly.var(F, ("x", "y"), "y")
    assert (y**p).derivative("y").is_zero()


def test_derivative_of_cubed_linear_form():
    x, y, z = mkvars("X", "Y", "Z")
    s = x + 2 * y - z
    assert (s**3).derivative("X") == 3 * s**2


def test_derivative_linear_and_product_rule(rng):
    vars = ("x", "y")
    for _ in range(25):
        a, b = rand_polys(rng, vars, 2)
        for v in vars:
            assert (a + b).derivative(v) == a.derivative(v) + b.derivative(v)
            assert (a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v)


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def test_substitute_collapses_variables():
    x, y = mkvars("x", "y")
    (t,) = mkvars("t")
    from unirat.fields import RatFunc

    r = (x**2 * y).substitute({"x": RatFunc.from_poly(t), "y": RatFunc.from_poly(t)})
    assert r == RatFunc.from_poly(t**3)


def test_substitute_identity(rng):
    from unirat.fields import RatFunc

    vars = ("x", "y")
    for p in rand_polys(rng, vars, 12):
        bound = {v: RatFunc.var(QQ, vars, v) for v in vars}
        assert p.substitute(bound) == RatFunc.from_poly(p)


def test_substitute_into_minimal_polynomial_is_zero():
    # z^4 - 4z^2 - 3t1 - t2 + 2 vanishes at (t -> f, z -> y)
    x, y = mkvars("x", "y")
    f1 = -(y**2) * x - y**4 + 2 * x + 2 * y**2 - 1
    f2 = 4 * y**4 - 10 * y**2 + 5 + 3 * y**2 * x - 6 * x
    t1, t2, z = mkvars("t1", "t2", "z")
    mp = z**4 - 4 * z**2 - 3 * t1 - t2 + 2
    from unirat.fields import RatFunc

    val = mp.substitute(
        {
            "t1": RatFunc.from_poly(f1),
            "t2": RatFunc.from_poly(f2),
            "z": RatFunc.from_poly(y),
        }
    )
    assert val.is_zero()


def test_substitute_power_image():
    x1, x2 = mkvars("x1", "x2")
    f = x1 * x2
    from unirat.fields import RatFunc

    nu = 5
    img = f.substitute({"x2": RatFunc.from_poly(x1**nu), "x1": RatFunc.from_poly(x1)})
    assert img == RatFunc.from_poly(x1 ** (nu + 1))


def test_substitute_zero_denominator_reported():
    x, y = mkvars("x", "y")
    from unirat.errors import ZeroDenominatorError
    from unirat.fields import RatFunc

    r = RatFunc(x, y)  # x / y
    with pytest.raises(ZeroDenominatorError):
        r.substitute({"y": RatFunc.zero(QQ, ("x", "y"))})


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------


def test_gcd_simple():
    x, y = mkvars("x", "y")
    assert multivar_gcd(x**2 - y**2, x + y) == x + y


def test_gcd_with_zero_normalizes():
    x, y = mkvars("x", "y")
    p = 4 * x * y - 2 * y**2
    g = multivar_gcd(p, MultiPoly.zero(QQ, ("x", "y")))
    assert g == 2 * x * y - y**2  # primitive, positive leading coefficient


def test_gcd_derived_instance():
    x, y = mkvars("x", "y")
    a = (x + y) ** 2 * (y - x)
    b = (x + y) * (x + 2 * y)
    g = multivar_gcd(a, b)
    assert g == x + y
    assert divides(g, a) and divides(g, b)


def test_gcd_divides_and_cofactors_coprime(rng):
    vars = ("x", "y")
    for _ in range(20):
        a, b = rand_polys(rng, vars, 2, max_deg=3, n_terms=3, nonzero=True)
        common, = rand_polys(rng, vars, 1, max_deg=2, n_terms=2, nonzero=True)
        a, b = a * common, b * common
        g = multivar_gcd(a, b)
        assert divides(g, a) and divides(g, b)
        cof_g = multivar_gcd(exact_div(a, g), exact_div(b, g))
        assert cof_g.is_constant()


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------


def test_resultant_linear_root_substitution():
    x, y, z = mkvars("x", "y", "z")
    assert resultant(z**2 - x, z - y, "z") == y**2 - x


def test_resultant_detects_square():
    x, y, z = mkvars("x", "y", "z")
    f = (z - 1) ** 2
    assert resultant(f, f.derivative("z"), "z").is_zero()


def test_resultant_matches_sylvester_determinant(rng):
    vars = ("x", "z")
    for _ in range(20):
        a, b = rand_polys(rng, vars, 2, max_deg=3, n_terms=3, nonzero=True)
        if a.degree_in("z") < 1 or b.degree_in("z") < 1:
            continue
        rows = sylvester_matrix(a, b, "z")
        assert resultant(a, b, "z") == det_bareiss(rows)


def test_norm_resultant_reproduces_reference_polynomial():
    # Res_w(w^4 - 4w^2 + 2 - 3t1 - t2, (w - 3v)^2 - v^2 - 4) term for term
    t1, t2, w, v = mkvars("t1", "t2", "w", "v")
    p = w**4 - 4 * w**2 + 2 - 3 * t1 - t2
    q = (w - 3 * v) ** 2 - v**2 - 4
    expected = (
        4 - 4 * t2 + 6 * t1 * t2 + t2**2 - 12 * t1 - 1568 * v**2 + 10784 * v**4
        + 9 * t1**2 - 1104 * t1 * v**2 - 816 * t1 * v**4 - 368 * t2 * v**2
        - 272 * t2 * v**4 - 13312 * v**6 + 4096 * v**8
    )
    assert resultant(p, q, "w") == expected


# ---------------------------------------------------------------------------
# square-free decomposition
# ---------------------------------------------------------------------------


def test_squarefree_basic():
    x, z = mkvars("x", "z")
    parts = squarefree_decomposition((z - 1) ** 2 * (z + 2), "z")
    assert sorted((str(f), m) for f, m in parts) == [("z + 2", 1), ("z - 1", 2)]


def test_squarefree_identity_case():
    x, z = mkvars("x", "z")
    p = z**2 + x
    assert squarefree_decomposition(p, "z") == [(p, 1)]


def test_squarefree_multivariate_with_content():
    x, z = mkvars("x", "z")
    p = (z**2 - x) ** 2 * z
    parts = squarefree_decomposition(p, "z")
    recon = MultiPoly.const(QQ, ("x", "z"), 1)
    for f, m in parts:
        recon = recon * f**m
    assert recon == p
    assert sorted(m for _f, m in parts) == [1, 2]


def test_squarefree_inseparable_rejected():
    F = PrimeField(3)
    z = MultiPoly.var(F, ("z",), "z")
    with pytest.raises(InseparableInputError):
        squarefree_decomposition(z**3 + 1, "z")  # (z+1)^3 in char 3


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------


@st.composite
def _exponents(draw, n=4, cap=6):
    return tuple(draw(st.integers(min_value=0, max_value=cap)) for _ in range(n))


@settings(max_examples=200, deadline=None)
@given(_exponents(), _exponents(), _exponents())
def test_block_order_is_multiplicative(a, b, c):
    order = Block([(0, 1), (2, 3)], [GrevLex(), Lex()])
    if order.key(a) > order.key(b):
        aa = tuple(x + y for x, y in zip(a, c))
        bb = tuple(x + y for x, y in zip(b, c))
        assert order.key(aa) > order.key(bb)


@settings(max_examples=200, deadline=None)
@given(_exponents())
def test_block_order_respects_divisibility(a):
    # m >= 1 for every monomial: well-foundedness of the order
    order = Block([(0, 1), (2, 3)], [GrevLex(), Lex()])
    unit = (0, 0, 0, 0)
    if a != unit:
        assert order.key(a) > order.key(unit)


def test_tag_order_eliminates_ambient_block():
    order = tag_order(2, 2)
    assert order.eliminates([2, 3])
    assert not order.eliminates([0, 3])
