import math
import random
from fractions import Fraction
from itertools import product

import pytest

from unirat.coeffs import QQ, PrimeField
from unirat.fields import AlgExt, EPoly, ExtPoly, RatFunc, norm_of
from unirat.factor import (
    Factorization,
    factor_multivar,
    factor_over_extension,
    factor_univar_primefield,
    factor_univar_rationals,
    find_squarefree_shift,
)
from unirat.poly import MultiPoly, divides, multivar_gcd, primitive_normalized

from helpers import mkvars, rand_polys


def _reconstruct_multipoly(fac: Factorization, vars):
    total = MultiPoly.const(QQ, vars, fac.unit)
    for f, m in fac.factors:
        total = total * f**m
    return total


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------


def test_primefield_square_over_f2():
    F = PrimeField(2)
    x = MultiPoly.var(F, ("x",), "x")
    fac = factor_univar_primefield(x**2 + 1)
    assert [(str(f), m) for f, m in fac] == [("x + 1", 2)]


def test_primefield_identity_case():
    F = PrimeField(7)
    x = MultiPoly.var(F, ("x",), "x")
    fac = factor_univar_primefield(x)
    assert [(str(f), m) for f, m in fac] == [("x", 1)]


def _f5_quadratic_oracle(target):
    """Exhaustive search over the 25 monic quadratics over F_5."""
    F = PrimeField(5)
    x = MultiPoly.var(F, ("x",), "x")
    hits = []
    for a, b in product(range(5), repeat=2):
        q1 = x**2 + a * x + b
        for c, d in product(range(5), repeat=2):
            q2 = x**2 + c * x + d
            if q1 * q2 == target:
                hits.append((q1, q2))
    return hits


def test_x4_plus_1_over_f5_splits_into_two_quadratics():
    F = PrimeField(5)
    x = MultiPoly.var(F, ("x",), "x")
    target = x**4 + 1
    fac = factor_univar_primefield(target)
    assert sorted(f.total_degree() for f, _ in fac) == [2, 2]
    assert _f5_quadratic_oracle(target)  # the oracle agrees a split exists
    recon = MultiPoly.const(F, ("x",), fac.unit)
    for f, m in fac:
        recon = recon * f**m
    assert recon == target


def test_primefield_reconstruction_random(rng):
    for p in (2, 3, 5, 13):
        F = PrimeField(p)
        x = MultiPoly.var(F, ("x",), "x")
        for _ in range(8):
            coeffs = [rng.randrange(p) for _ in range(rng.randint(2, 7))] + [1]
            target = MultiPoly.zero(F, ("x",))
            for i, c in enumerate(coeffs):
                target = target + (x**i).scale(c)
            if target.is_constant():
                continue
            fac = factor_univar_primefield(target)
            recon = MultiPoly.const(F, ("x",), fac.unit)
            for f, m in fac:
                recon = recon * f**m
            assert recon == target


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------


def _divisors_signed(n):
    n = abs(n)
    out = [d for d in range(1, n + 1) if n % d == 0]
    return [d for d in out] + [-d for d in out]


def _irreducible_bruteforce_q(f: MultiPoly) -> bool:
    """Exhaustive factor search for deg <= 4 over Q.

    Works on the primitive integer form.  Any integer factor has leading
    coefficient dividing lc(f), constant term dividing f(0), and middle
    coefficients within the Mignotte-style bound 2^deg * ceil(||f||_2); the
    search covers that whole box, so a negative answer is a proof.
    """
    var = f.variables_present()[0]
    n = f.degree_in(var)
    assert 1 <= n <= 4
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [0] * (n + 1)
    i = f.vars.index(var)
    for m, c in f.terms.items():
        ints[m[i]] = int(c * den)
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[0] == 0:
        return n == 1  # divisible by the variable itself
    bound = (2**n) * (math.isqrt(sum(c * c for c in ints)) + 1)
    x = MultiPoly.var(QQ, f.vars, var)

    def to_poly(coeffs):
        acc = MultiPoly.zero(QQ, f.vars)
        for e, c in enumerate(coeffs):
            acc = acc + (x**e).scale(c)
        return acc

    target = to_poly(ints)
    lead_divs = _divisors_signed(ints[-1])
    const_divs = _divisors_signed(ints[0])
    for d in range(1, n // 2 + 1):
        middles = product(range(-bound, bound + 1), repeat=d - 1)
        for middle in middles:
            for c0 in const_divs:
                for lead in lead_divs:
                    cand = to_poly([c0, *middle, lead])
                    if divides(cand, target):
                        return False
    return True


def test_rational_examples():
    (x,) = mkvars("x")
    fac = factor_univar_rationals(x**2 - 1)
    assert sorted(str(f) for f, _ in fac) == ["x + 1", "x - 1"]

    fac = factor_univar_rationals(x**4 + 1)
    assert len(fac.factors) == 1 and fac.factors[0][0].total_degree() == 4
    assert _irreducible_bruteforce_q(x**4 + 1)

    fac = factor_univar_rationals(6 * x**2 + 5 * x + 1)
    assert sorted(str(f) for f, _ in fac) == ["2*x + 1", "3*x + 1"]
    assert not _irreducible_bruteforce_q(6 * x**2 + 5 * x + 1)


def test_rational_rational_root_oracle():
    # roots -1/2 and -1/3 from the factorization must satisfy f
    (x,) = mkvars("x")
    f = 6 * x**2 + 5 * x + 1
    for r in (Fraction(-1, 2), Fraction(-1, 3)):
        assert f.eval_scalars({"x": r}) == 0


def test_irreducibility_agreement_small_degrees(rng):
    (x,) = mkvars("x")
    for _ in range(25):
        n = rng.randint(2, 4)
        coeffs = [rng.randint(-4, 4) for _ in range(n)] + [rng.choice([1, 2, -1])]
        f = MultiPoly.zero(QQ, ("x",))
        for e, c in enumerate(coeffs):
            f = f + (x**e).scale(c)
        if f.degree_in("x") < 2:
            continue
        fac = factor_univar_rationals(f)
        nontrivial = [g for g, m in fac.factors if g.total_degree() > 0]
        factored = len(nontrivial) > 1 or any(m > 1 for _g, m in fac.factors)
        sqf_and_prim = not factored
        assert _irreducible_bruteforce_q(f) == (
            len(nontrivial) == 1 and fac.factors[0][1] == 1
        )


def test_rational_reconstruction_random(rng):
    (x,) = mkvars("x")
    for _ in range(30):
        target = MultiPoly.const(QQ, ("x",), rng.choice([1, 2, -3]))
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(1, 3)
            coeffs = [rng.randint(-3, 3) for _ in range(d)] + [rng.choice([1, 2, -1])]
            g = MultiPoly.zero(QQ, ("x",))
            for e, c in enumerate(coeffs):
                g = g + (x**e).scale(c)
            target = target * g ** rng.randint(1, 2)
        if target.is_constant():
            continue
        fac = factor_univar_rationals(target)
        assert _reconstruct_multipoly(fac, ("x",)) == target
        for g, _m in fac.factors:
            assert g.total_degree() > 4 or _irreducible_bruteforce_q(g)


# ---------------------------------------------------------------------------
# multivariate
# ---------------------------------------------------------------------------


def test_multivar_examples():
    x, y, z = mkvars("x", "y", "z")
    fac = factor_multivar(x**2 - y**2)
    assert sorted(str(f) for f, _ in fac) == ["x + y", "x - y"]

    fac = factor_multivar(x**2 + y**2)
    assert len(fac.factors) == 1 and fac.factors[0][1] == 1

    s = x + 2 * y - z
    fac = factor_multivar(s**2 * s)
    assert len(fac.factors) == 1 and fac.factors[0][1] == 3
    assert fac.factors[0][0].total_degree() == 1


def test_multivar_reconstruction_random(rng):
    vars = ("x", "y")
    for _ in range(25):
        target = MultiPoly.const(QQ, vars, 1)
        for _ in range(rng.randint(1, 3)):
            g = rand_polys(rng, vars, 1, max_deg=2, n_terms=3, nonzero=True)[0]
            target = target * g ** rng.randint(1, 2)
        if target.is_constant():
            continue
        fac = factor_multivar(target)
        assert _reconstruct_multipoly(fac, vars) == target
        # factors pairwise non-associate
        for i, (a, _) in enumerate(fac.factors):
            for b, _ in fac.factors[i + 1 :]:
                assert not multivar_gcd(a, b) == primitive_normalized(a)


# ---------------------------------------------------------------------------
# extensions: shifts and the norm method
# ---------------------------------------------------------------------------


def _quadratic_ext():
    t = RatFunc.var(QQ, ("t",), "t")
    zero = RatFunc.zero(QQ, ("t",))
    one = RatFunc.const(QQ, ("t",), 1)
    return AlgExt(EPoly([-t, zero, one]))


def _quartic_ext():
    # z^4 - 4z^2 + 2 - 3t1 - t2
    t1 = RatFunc.var(QQ, ("t1", "t2"), "t1")
    t2 = RatFunc.var(QQ, ("t1", "t2"), "t2")
    zero = RatFunc.zero(QQ, ("t1", "t2"))
    one = RatFunc.const(QQ, ("t1", "t2"), 1)
    c0 = RatFunc.const(QQ, ("t1", "t2"), 2) - 3 * t1 - t2
    return AlgExt(EPoly([c0, zero, RatFunc.const(QQ, ("t1", "t2"), -4), zero, one]))


def test_shift_zero_when_norm_squarefree():
    ext = _quadratic_ext()
    f = ExtPoly(ext, [-ext.alpha(), ext.one()], var="x")  # x - alpha
    assert find_squarefree_shift(f) == 0


def test_shift_nonzero_for_conjugate_symmetric_input():
    ext = _quartic_ext()
    a = ext.alpha()
    g = ExtPoly(ext, [a * a - 4, ext.zero_elem(), ext.one()], var="x")
    c = find_squarefree_shift(g)
    assert c != 0


def test_factor_quadratic_splits_over_its_own_extension():
    ext = _quadratic_ext()
    f = ExtPoly.from_epoly(ext, ext.minpoly, var="x")
    fac = factor_over_extension(f)
    assert sorted(g.degree() for g, _ in fac.factors) == [1, 1]
    a = ext.alpha()
    roots = sorted(str(-(g.coeff(0))) for g, _ in fac.factors)
    assert roots == sorted([str(a), str(-a)])


def test_factor_quartic_reference_shape():
    ext = _quartic_ext()
    f = ExtPoly.from_epoly(ext, ext.minpoly, var="x")
    fac = factor_over_extension(f)
    assert sorted(g.degree() for g, _ in fac.factors) == [1, 1, 2]
    quad = [g for g, _ in fac.factors if g.degree() == 2][0]
    a = ext.alpha()
    assert quad.coeff(0) == a * a - 4
    assert quad.coeff(1).is_zero()
    # the quadratic is irreducible: its norm is irreducible over E
    from unirat.factor import _squarefree_shift_and_norm
    from unirat.poly import primitive_normalized as prim

    c, N = _squarefree_shift_and_norm(quad)
    N_mp, _den = N.to_multipoly()
    norm_fac = factor_multivar(prim(N_mp))
    positive = [g for g, m in norm_fac.factors if g.degree_in("x") > 0]
    assert len(positive) == 1


def test_extension_reconstruction_and_coprimality(rng):
    ext = _quadratic_ext()
    a = ext.alpha()
    one = ext.one()
    t = RatFunc.var(QQ, ("t",), "t")

    def rand_elem():
        return ext.elem(
            [
                RatFunc.const(QQ, ("t",), rng.randint(-2, 2))
                + t * rng.randint(0, 1),
                RatFunc.const(QQ, ("t",), rng.randint(-1, 1)),
            ]
        )

    for _ in range(6):
        coeffs = [rand_elem() for _ in range(rng.randint(1, 3))] + [one]
        f = ExtPoly(ext, coeffs, var="x")
        fac = factor_over_extension(f)
        recon = ExtPoly(ext, [fac.unit], var="x")
        for g, m in fac.factors:
            for _ in range(m):
                recon = recon * g
        assert recon == f
        # pairwise coprime outputs
        for i, (g1, _) in enumerate(fac.factors):
            for g2, _ in fac.factors[i + 1 :]:
                assert g1.gcd_monic(g2).degree() == 0
        # number of roots equals the number of linear factors
        linear = [g for g, m in fac.factors for _ in range(m) if g.degree() == 1]
        roots = {str(-(g.coeff(0) * g.coeff(1).inverse())) for g in linear}
        for r in list(roots):
            pass
        assert len(linear) <= f.degree()


def test_extension_factor_norms_are_prime_powers():
    ext = _quartic_ext()
    f = ExtPoly.from_epoly(ext, ext.minpoly, var="x")
    fac = factor_over_extension(f)
    for g, _m in fac.factors:
        N = norm_of(g)
        N_mp, _den = N.to_multipoly()
        norm_fac = factor_multivar(primitive_normalized(N_mp))
        positive = [h for h, m in norm_fac.factors if h.degree_in("x") > 0]
        assert len(positive) == 1  # a power of one irreducible
