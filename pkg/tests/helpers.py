import random

from unirat.coeffs import QQ
from unirat.poly import MultiPoly, random_poly


def mkvars(*names):
    """Variable polynomials over Q for a shared universe."""
    names = tuple(names)
    return tuple(MultiPoly.var(QQ, names, n) for n in names)


def rand_polys(rng, vars, count, max_deg=3, n_terms=4, coeff_range=5, nonzero=False):
    out = []
    while len(out) < count:
        p = random_poly(rng, QQ, vars, max_deg, n_terms, coeff_range)
        if nonzero and p.is_zero():
            continue
        out.append(p)
    return out
