"""Polynomial factorization.

Univariate over small prime fields (distinct-degree plus equal-degree
splitting), univariate over Q (squarefree split, modular factorization,
quadratic Hensel lifting, bounded-subset recombination), multivariate over Q
by Kronecker substitution, and factorization over a simple algebraic
extension E[alpha] through norms (shift, factor the norm over E, recover
factors as gcds).

Univariate F_p polynomials are little-endian int lists; numpy convolution
accelerates products when the modulus is small enough for exact int64
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coeffs import QQ, PrimeField, _is_prime
from .errors import BudgetExceededError, UniratError
from .fields import AlgExt, AlgExtElem, EPoly, ExtPoly, RatFunc, norm_of
from .poly import (
    GrevLex,
    MultiPoly,
    coeffs_in,
    divides,
    exact_div,
    multivar_gcd,
    primitive_normalized,
    resultant,
    squarefree_decomposition,
)

DEFAULT_MAX_SUBSETS = 2_000_000


@dataclass
class Factorization:
    """unit * prod(factor^mult) == input, factors irreducible and monic or

    integer-primitive depending on the domain."""

    unit: object
    factors: list  # (factor, multiplicity) pairs

    def __iter__(self):
        return iter(self.factors)

    def degree_multiset(self, degree_fn=None):
        out = []
        for f, m in self.factors:
            d = degree_fn(f) if degree_fn else f.degree()
            out.extend([d] * m)
        return sorted(out)


# ---------------------------------------------------------------------------
# F_p univariate kernel: little-endian int lists
# ---------------------------------------------------------------------------

_NUMPY_P_LIMIT = 1 << 20


def _gf_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_mul(a, b, p):
    if not a or not b:
        return []
    if p < _NUMPY_P_LIMIT and min(len(a), len(b)) > 16:
        out = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
        return _gf_trim(list((out % p).astype(object)))
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _gf_trim(out)


def _gf_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("F_p division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        _gf_trim(a)
        if not a or len(a) - 1 < db:
            break
        c = a[-1] * inv % p
        k = len(a) - 1 - db
        q[k] = c
        for i in range(db + 1):
            a[k + i] = (a[k + i] - c * b[i]) % p
        a.pop()
    return _gf_trim(q), _gf_trim(a)


def _gf_mod(a, b, p):
    return _gf_divmod(a, b, p)[1]


def _gf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _gf_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _gf_pow_mod(base, e, mod, p):
    result = [1]
    base = _gf_mod(base, mod, p)
    while e:
        if e & 1:
            result = _gf_mod(_gf_mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = _gf_mod(_gf_mul(base, base, p), mod, p)
    return result


def _gf_monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gf_deriv(a, p):
    return _gf_trim([i * c % p for i, c in enumerate(a)][1:])


def _gf_pth_root(a, p):
    # over F_p the Frobenius fixes scalars, so the root just contracts exponents
    return [a[i] for i in range(0, len(a), p)]


def _gf_squarefree(f, p):
    """Musser decomposition over F_p: list of (monic squarefree factor, mult)."""
    out = {}

    def rec(f, scale):
        f = _gf_monic(f, p)
        if len(f) <= 1:
            return
        d = _gf_deriv(f, p)
        if not d:
            rec(_gf_pth_root(f, p), scale * p)
            return
        c = _gf_gcd(f, d, p)
        w = _gf_divmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = _gf_gcd(w, c, p)
            z = _gf_divmod(w, y, p)[0]
            if len(z) > 1:
                key = tuple(z)
                out[key] = out.get(key, 0) + i * scale
            w = y
            c = _gf_divmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            rec(_gf_pth_root(c, p), scale * p)

    rec(f, 1)
    return [(list(k), m) for k, m in sorted(out.items())]


def _gf_distinct_degree(f, p):
    """[(product of irreducible factors of degree d, d)] for monic squarefree f."""
    out = []
    h = [0, 1]  # x
    x = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_pow_mod(h, p, f, p)
        g = _gf_gcd([(a - b) % p for a, b in _pad(h, x)], f, p)
        if len(g) > 1:
            out.append((g, d))
            f = _gf_divmod(f, g, p)[0]
            h = _gf_mod(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _gf_equal_degree(f, d, p):
    """Split a monic product of distinct degree-d irreducibles; deterministic

    candidate enumeration keeps runs reproducible."""
    n = len(f) - 1
    if n == d:
        return [f]
    out = []
    stack = [f]
    counter = 1
    while stack:
        g = stack.pop()
        if len(g) - 1 == d:
            out.append(g)
            continue
        split = None
        while split is None:
            counter += 1
            r = _int_to_poly(counter, p, len(g) - 1)
            if len(r) <= 1:
                continue
            if p % 2 == 1:
                s = _gf_pow_mod(r, (p**d - 1) // 2, g, p)
                s = [(c - (1 if i == 0 else 0)) % p for i, c in enumerate(s)] or [p - 1]
                cand = _gf_gcd(_gf_trim(list(s)), g, p)
            else:
                t = list(r)
                acc = list(r)
                for _ in range(d - 1):
                    t = _gf_mod(_gf_mul(t, t, p), g, p)
                    acc = _gf_trim([(a + b) % p for a, b in _pad(acc, t)])
                cand = _gf_gcd(acc, g, p)
            if 1 <= len(cand) - 1 < len(g) - 1:
                split = cand
        stack.append(split)
        stack.append(_gf_divmod(g, split, p)[0])
    return sorted(out, key=tuple)


def _int_to_poly(n, p, max_deg):
    out = []
    while n:
        out.append(n % p)
        n //= p
        if len(out) > max_deg:
            break
    return _gf_trim(out)


def _gf_factor(f, p):
    """Complete monic factorization over F_p: (unit, [(factor, mult)])."""
    if not f:
        raise UniratError("factor of zero polynomial")
    unit = f[-1] % p
    f = _gf_monic(f, p)
    if len(f) == 1:
        return unit, []
    out = []
    for sqf, mult in _gf_squarefree(f, p):
        for block, d in _gf_distinct_degree(sqf, p):
            for irr in _gf_equal_degree(block, d, p):
                out.append((irr, mult))
    out.sort(key=lambda t: (len(t[0]), tuple(t[0])))
    return unit, out


def factor_univar_primefield(f: MultiPoly) -> Factorization:
    """Complete factorization of a univariate polynomial over F_p."""
    field = f.field
    if not isinstance(field, PrimeField):
        raise UniratError("expected a prime-field polynomial")
    present = f.variables_present()
    if len(present) > 1:
        raise UniratError(f"not univariate: {present}")
    if f.is_zero():
        raise UniratError("factor of zero polynomial")
    var = present[0] if present else f.vars[0]
    coeffs = _multipoly_to_list(f, var)
    unit, factors = _gf_factor(coeffs, field.p)
    out = [
        (_list_to_multipoly(fac, f.field, f.vars, var), m) for fac, m in factors
    ]
    return Factorization(unit, out)


def _multipoly_to_list(f: MultiPoly, var):
    n = f.degree_in(var)
    out = [f.field.zero] * (n + 1)
    i = f._var_index(var)
    for m, c in f.terms.items():
        out[m[i]] = c
    return out


def _list_to_multipoly(coeffs, field, vars, var):
    i = list(vars).index(var)
    terms = {}
    for e, c in enumerate(coeffs):
        if not field.is_zero(field.coerce(c)):
            mono = tuple(e if j == i else 0 for j in range(len(vars)))
            terms[mono] = field.coerce(c)
    return MultiPoly(field, vars, terms, _clean=True)


# ---------------------------------------------------------------------------
# univariate over Z / Q: Zassenhaus
# ---------------------------------------------------------------------------


def _zz_content_primitive(f):
    g = 0
    for c in f:
        g = math.gcd(g, c)
    if g == 0:
        return 0, f
    if f[-1] < 0:
        g = -g
    return g, [c // g for c in f]


def _zz_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _zz_divmod_exact(a, b):
    """Division in Z[x] assuming lc(b) divides on each step; None if it fails."""
    a = list(a)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError
    q = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db:
        while a and a[-1] == 0:
            a.pop()
        if not a or len(a) - 1 < db:
            break
        if a[-1] % b[-1]:
            return None
        c = a[-1] // b[-1]
        k = len(a) - 1 - db
        q[k] = c
        for i in range(db + 1):
            a[k + i] -= c * b[i]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    if a:
        return None
    while q and q[-1] == 0:
        q.pop()
    return q


def _mod_sym(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _mignotte_bound(f):
    n = len(f) - 1
    norm = math.isqrt(sum(c * c for c in f)) + 1
    return (math.isqrt(n + 1) + 1) * (1 << n) * norm * abs(f[-1])


def _hensel_step(f, g, h, s, t, m, target):
    """One quadratic lift from modulus m toward `target` (h monic)."""
    M = min(m * m, target)

    def mul(a, b):
        return [c % M for c in _zz_mul(a, b)]

    def sub(a, b):
        n = max(len(a), len(b))
        return [( (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % M for i in range(n)]

    def trim(a):
        while a and a[-1] % M == 0:
            a.pop()
        return a

    e = trim(sub(f, mul(g, h)))
    q, r = _modm_divmod(mul(s, e), h, M)
    g1 = trim([c % M for c in _zz_add(_zz_add(g, _zz_mul(t, e)), _zz_mul(q, g))])
    h1 = trim([c % M for c in _zz_add(h, r)])
    b = trim(sub(_zz_add(mul(s, g1), mul(t, h1)), [1]))
    c, d = _modm_divmod(mul(s, b), h1, M)
    s1 = trim(sub(s, d))
    t1 = trim(sub(t, _zz_add(mul(t, b), mul(c, g1))))
    return g1, h1, s1, t1, M


def _zz_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _modm_divmod(a, b, m):
    """Division mod m by a polynomial with invertible (here monic) lc."""
    a = [c % m for c in a]
    while a and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    inv = pow(b[-1] % m, -1, m)
    q = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % m
        k = len(a) - 1 - db
        q[k] = c
        for i in range(db + 1):
            a[k + i] = (a[k + i] - c * b[i]) % m
        while a and a[-1] % m == 0:
            a.pop()
    return q, a


def _hensel_lift_pair(f, g, h, s, t, p, target):
    m = p
    while m < target:
        g, h, s, t, m = _hensel_step(f, g, h, s, t, m, target)
    return g, h


def _hensel_lift_list(f, factors, p, target):
    """Lift monic mod-p factors of f (lc attached internally) to mod target.

    Returns monic factors mod target congruent to the inputs mod p.
    """
    lc = f[-1] % target
    if len(factors) == 1:
        inv = pow(f[-1] % target, -1, target)
        return [[c * inv % target for c in f]]
    mid = len(factors) // 2
    left, right = factors[:mid], factors[mid:]
    g = [lc % p]
    for fac in left:
        g = [c % p for c in _zz_mul(g, fac)]
    h = [1]
    for fac in right:
        h = [c % p for c in _zz_mul(h, fac)]
    # Bezout data mod p
    s, t = _gf_bezout(g, h, p)
    G, H = _hensel_lift_pair([c % target for c in f], g, h, s, t, p, target)
    out = []
    out.extend(_hensel_lift_list(G, left, p, target))
    out.extend(_hensel_lift_list(H, right, p, target))
    return out


def _gf_bezout(g, h, p):
    """s, t with s*g + t*h = 1 mod p for coprime g, h."""
    r0, r1 = [c % p for c in g], [c % p for c in h]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while _gf_trim(list(r1)):
        q, r = _gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _gf_trim([(a - b) % p for a, b in _pad(s0, _gf_mul(q, s1, p))])
        t0, t1 = t1, _gf_trim([(a - b) % p for a, b in _pad(t0, _gf_mul(q, t1, p))])
    c = r0[-1] if r0 else 0
    if len(r0) != 1:
        raise UniratError("factors not coprime mod p")
    inv = pow(c, -1, p)
    return [x * inv % p for x in s0], [x * inv % p for x in t0]


def _good_primes(f, count=2):
    """Smallest odd primes keeping f squarefree with full degree."""
    out = []
    p = 3
    while len(out) < count and p < 10000:
        if _is_prime(p) and f[-1] % p:
            fp = [c % p for c in f]
            if len(_gf_trim(list(fp))) == len(f):
                d = _gf_deriv(fp, p)
                if d and len(_gf_gcd(fp, d, p)) == 1:
                    out.append(p)
        p += 2
    if not out:
        raise UniratError("no good prime below 10000; input may be non-squarefree")
    return out


def _zz_is_squarefree(f) -> bool:
    """Sound probabilistic-to-exact test: a squarefree modular image with

    full degree certifies squarefreeness; otherwise decide by modular gcd."""
    if len(f) <= 2:
        return True
    p = 3
    tried = 0
    while tried < 25 and p < 100000:
        if _is_prime(p) and f[-1] % p:
            tried += 1
            fp = [c % p for c in f]
            d = _gf_deriv(fp, p)
            if d and len(_gf_gcd(fp, d, p)) == 1:
                return True
        p += 2
    return len(_zz_gcd(f, _zz_deriv(f))) == 1


def _zz_deriv(f):
    out = [i * c for i, c in enumerate(f)][1:]
    while out and out[-1] == 0:
        out.pop()
    return out


def _zz_divides_q(a, b) -> bool:
    """True iff b divides a in Q[x] (dense Fraction division)."""
    if not b:
        return not a
    r = [Fraction(c) for c in a]
    db = len(b) - 1
    lc = Fraction(b[-1])
    while len(r) - 1 >= db:
        while r and r[-1] == 0:
            r.pop()
        if not r or len(r) - 1 < db:
            break
        c = r[-1] / lc
        k = len(r) - 1 - db
        for i in range(db + 1):
            r[k + i] -= c * b[i]
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return not r


def _zz_div_exact(a, b):
    """Exact quotient a/b for integer lists when b | a in Z[x]."""
    r = [Fraction(c) for c in a]
    db = len(b) - 1
    lc = Fraction(b[-1])
    q = [Fraction(0)] * max(len(r) - db, 1)
    while len(r) - 1 >= db:
        while r and r[-1] == 0:
            r.pop()
        if not r or len(r) - 1 < db:
            break
        c = r[-1] / lc
        q[len(r) - 1 - db] = c
        k = len(r) - 1 - db
        for i in range(db + 1):
            r[k + i] -= c * b[i]
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    if r or any(c.denominator != 1 for c in q):
        raise UniratError("inexact integer polynomial division")
    out = [int(c) for c in q]
    while out and out[-1] == 0:
        out.pop()
    return out


def _zz_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _zz_gcd(a, b):
    """Primitive gcd in Z[x] by modular images with CRT reconstruction."""
    a, b = list(a), list(b)
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a:
        _, pb = _zz_content_primitive(b)
        return pb
    if not b:
        _, pa = _zz_content_primitive(a)
        return pa
    _, pa = _zz_content_primitive(a)
    _, pb = _zz_content_primitive(b)
    if len(pa) == 1 or len(pb) == 1:
        return [1]
    glc = math.gcd(pa[-1], pb[-1])
    p = 99991
    m = 0
    acc = None
    deg_min = None
    while True:
        p = _next_prime(p)
        if pa[-1] % p == 0 or pb[-1] % p == 0:
            continue
        gp = _gf_gcd([c % p for c in pa], [c % p for c in pb], p)
        d = len(gp) - 1
        if d == 0:
            return [1]
        if deg_min is None or d < deg_min:
            deg_min = d
            scale = glc % p
            acc = [c * scale % p for c in gp]
            m = p
        elif d == deg_min:
            scale = glc % p
            gp = [c * scale % p for c in gp]
            acc = _crt_combine(acc, m, gp, p)
            m *= p
        else:
            continue
        cand = [_mod_sym(c, m) for c in acc]
        _, cand_prim = _zz_content_primitive(cand)
        if cand_prim and _zz_divides_q(pa, cand_prim) and _zz_divides_q(pb, cand_prim):
            return cand_prim


def _next_prime(p):
    p += 2
    while not _is_prime(p):
        p += 2
    return p


def _crt_combine(a, ma, b, mb):
    n = max(len(a), len(b))
    inv = pow(ma % mb, -1, mb)
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append((x + (y - x) * inv % mb * ma) % (ma * mb))
    return out


def _zz_squarefree(f):
    """Yun decomposition of a primitive f in Z[x]: [(primitive part, mult)].

    Quotients stay integral throughout (Gauss lemma); parts multiply back to
    f up to sign.
    """
    if len(f) - 1 <= 0:
        return []
    df = _zz_deriv(f)
    g = _zz_gcd(f, df)
    if len(g) == 1:
        return [(f, 1)]
    out = []
    c = _zz_div_exact(f, g)
    d = _zz_sub(_zz_div_exact(df, g), _zz_deriv(c))
    i = 1
    while len(c) > 1:
        a = _zz_gcd(c, d)
        if len(a) > 1:
            out.append((a, i))
        c = _zz_div_exact(c, a)
        d = _zz_sub(_zz_div_exact(d, a), _zz_deriv(c))
        i += 1
    return out


def _zz_factor_squarefree(f, max_subsets=None):
    """Irreducible factors of a primitive squarefree f in Z[x], deg >= 1."""
    budget = max_subsets if max_subsets is not None else DEFAULT_MAX_SUBSETS
    if len(f) - 1 == 1:
        return [f]
    best = None
    for p in _good_primes(f):
        unit, factors = _gf_factor([c % p for c in f], p)
        if best is None or len(factors) < len(best[1]):
            best = (p, [fac for fac, _ in factors])
        if len(best[1]) == 1:
            break
    p, modular = best
    if len(modular) == 1:
        return [f]
    bound = 2 * _mignotte_bound(f) + 1
    target = p
    while target < bound:
        target *= p
    lifted = _hensel_lift_list(f, modular, p, target)

    result = []
    remaining = list(range(len(lifted)))
    current = list(f)
    checked = 0
    size = 1
    while 2 * size <= len(remaining):
        found = False
        for subset in _subsets_of(remaining, size):
            checked += 1
            if checked > budget:
                raise BudgetExceededError(
                    f"recombination budget {budget} exceeded"
                )
            lc = current[-1]
            # quick trailing-coefficient test
            if current[0] != 0:
                d0 = lc
                for i in subset:
                    d0 = d0 * lifted[i][0] % target
                d0 = _mod_sym(d0, target)
                if d0 == 0 or (lc * current[0]) % d0 != 0:
                    continue
            cand = [lc % target]
            for i in subset:
                cand = [c % target for c in _zz_mul(cand, lifted[i])]
            cand = [_mod_sym(c, target) for c in cand]
            _, cand = _zz_content_primitive(cand)
            if not cand:
                continue
            quot = _zz_divmod_exact(list(current), cand)
            if quot is not None:
                result.append(cand)
                current = quot
                remaining = [i for i in remaining if i not in set(subset)]
                found = True
                break
        if not found:
            size += 1
    if len(current) > 1 or not result:
        _, current = _zz_content_primitive(current)
        result.append(current)
    return sorted(result, key=lambda g: (len(g), g))


def _subsets_of(items, size):
    from itertools import combinations

    return combinations(items, size)


def factor_univar_rationals(f: MultiPoly, max_subsets=None) -> Factorization:
    """Complete factorization over Q of a univariate polynomial."""
    if f.field != QQ:
        raise UniratError("expected a rational polynomial")
    present = f.variables_present()
    if len(present) > 1:
        raise UniratError(f"not univariate: {present}")
    if f.is_zero():
        raise UniratError("factor of zero polynomial")
    var = present[0] if present else f.vars[0]
    if f.is_constant():
        return Factorization(f.constant_value(), [])
    unit = Fraction(1)
    factors = []
    for part, mult in squarefree_decomposition(f, var):
        if part.is_constant():
            unit *= part.constant_value() ** mult
            continue
        ints, den = _to_int_list(part, var)
        content, prim = _zz_content_primitive(ints)
        unit *= Fraction(content, den) ** mult
        # strip a power of the variable before recombination
        low = 0
        while prim[low] == 0:
            low += 1
        if low:
            factors.append((_list_to_multipoly([0, 1], QQ, f.vars, var), low * mult))
            prim = prim[low:]
        if len(prim) > 1:
            for g in _zz_factor_squarefree(prim, max_subsets):
                factors.append((_list_to_multipoly(g, QQ, f.vars, var), mult))
        else:
            unit *= Fraction(prim[0]) ** mult
    factors.sort(key=lambda t: (t[0].total_degree(), sorted(t[0].terms)))
    return Factorization(unit, factors)


def _to_int_list(f: MultiPoly, var):
    coeffs = _multipoly_to_list(f, var)
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in coeffs], den


# ---------------------------------------------------------------------------
# multivariate over Q via Kronecker substitution
# ---------------------------------------------------------------------------

_KRONECKER_DEGREE_LIMIT = 6000


def factor_multivar(f: MultiPoly, max_subsets=None) -> Factorization:
    """Complete factorization in Q[x_1..x_n] by Kronecker substitution.

    Exponent vectors are packed into a single variable with per-variable
    bases deg_i + 1; candidate factors are decoded from subsets of the
    univariate factorization and confirmed by trial division.
    """
    if f.field != QQ:
        raise UniratError("expected a rational polynomial")
    if f.is_zero():
        raise UniratError("factor of zero polynomial")
    if f.is_constant():
        return Factorization(f.constant_value(), [])
    present = f.variables_present()
    if len(present) == 1:
        return factor_univar_rationals(f, max_subsets)

    # squarefree part: divide out gcd(f, all partial derivatives)
    g = MultiPoly.zero(f.field, f.vars)
    for v in present:
        g = multivar_gcd(g, f.derivative(v))
    g = multivar_gcd(f, g)
    sqf = exact_div(f, g) if not g.is_constant() else f
    sqf = primitive_normalized(sqf)

    irreducibles = _kronecker_factor_squarefree(sqf, present, max_subsets)
    factors = []
    remaining = f
    unit_acc = Fraction(1)
    for irr in irreducibles:
        mult = 0
        while True:
            try:
                q = exact_div(remaining, irr)
            except UniratError:
                break
            remaining = q
            mult += 1
        if mult:
            factors.append((irr, mult))
    if not remaining.is_constant():
        raise UniratError("internal: factorization incomplete")
    unit_acc *= remaining.constant_value()
    factors.sort(key=lambda t: (t[0].total_degree(), sorted(t[0].terms)))
    return Factorization(unit_acc, factors)


def _kronecker_factor_squarefree(f: MultiPoly, present, max_subsets):
    """Irreducible factors (integer-primitive) of a squarefree primitive f.

    The Kronecker image of a squarefree polynomial can itself acquire a
    power of the image variable or repeated factors, so the univariate side
    runs the full multiplicity-aware pipeline and the subset search works on
    the factor multiset.
    """
    bases = {}
    acc = 1
    for v in present:
        bases[v] = acc
        acc *= f.degree_in(v) + 1
    if acc - 1 > _KRONECKER_DEGREE_LIMIT:
        raise BudgetExceededError(
            f"Kronecker image degree {acc - 1} beyond limit {_KRONECKER_DEGREE_LIMIT}"
        )
    idx = {v: f.vars.index(v) for v in present}
    image = [0] * acc
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    for m, c in f.terms.items():
        e = sum(m[idx[v]] * bases[v] for v in present)
        image[e] = int(c * den)
    while image and image[-1] == 0:
        image.pop()

    expanded = []  # univariate irreducible factors, with repetition
    low = 0
    while image[low] == 0:
        low += 1
    if low:
        image = image[low:]
        expanded.extend([[0, 1]] * low)
    _, prim = _zz_content_primitive(image)
    if len(prim) > 1:
        if _zz_is_squarefree(prim):
            parts = [(prim, 1)]
        else:
            parts = _zz_squarefree(prim)
        for part, mult in parts:
            for irr in _zz_factor_squarefree(part, max_subsets):
                expanded.extend([irr] * mult)

    out = []
    remaining = f
    indices = list(range(len(expanded)))
    budget = max_subsets if max_subsets is not None else DEFAULT_MAX_SUBSETS
    checked = 0
    size = 1
    while indices and not remaining.is_constant() and size <= len(indices):
        found = False
        seen = set()
        for subset in _subsets_of(indices, size):
            key = tuple(sorted(tuple(expanded[i]) for i in subset))
            if key in seen:
                continue
            seen.add(key)
            checked += 1
            if checked > budget:
                raise BudgetExceededError(f"Kronecker subset budget {budget} exceeded")
            prod = [1]
            for i in subset:
                prod = _zz_mul(prod, expanded[i])
            cand = _decode_poly(prod, f, present, bases)
            if cand is None:
                continue
            cand = primitive_normalized(cand)
            if cand.is_constant():
                continue
            if divides(cand, remaining):
                out.append(cand)
                remaining = exact_div(remaining, cand)
                indices = [i for i in indices if i not in set(subset)]
                found = True
                break
        if not found:
            size += 1
    if not remaining.is_constant():
        out.append(primitive_normalized(remaining))
    return out


def _decode_poly(coeffs, f, present, bases):
    terms = {}
    for e, c in enumerate(coeffs):
        if not c:
            continue
        mono = [0] * len(f.vars)
        rem = e
        ok = True
        for v in reversed(present):
            b = bases[v]
            d = rem // b
            if d > f.degree_in(v):
                ok = False
                break
            mono[f.vars.index(v)] = d
            rem %= b
        if not ok or rem:
            return None
        terms[tuple(mono)] = Fraction(c)
    return MultiPoly(f.field, f.vars, terms)


# ---------------------------------------------------------------------------
# factorization over E[alpha]: norms and gcd recovery
# ---------------------------------------------------------------------------


def _shift_candidates():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _norm_after_shift(f: ExtPoly, c: int) -> EPoly:
    if c == 0:
        return norm_of(f)
    delta = f.ext.alpha().scale(
        RatFunc.const(f.ext.field, f.ext.universe, -c)
    )
    return norm_of(f.shift(delta))


def _is_squarefree_in(N: MultiPoly, var) -> bool:
    """Exact squarefreeness of N in `var`, accelerated by sound evaluation:

    a squarefree specialization at full degree proves squarefreeness."""
    dN = N.derivative(var)
    if dN.is_zero():
        return False
    others = [v for v in N.variables_present() if v != var]
    if others:
        F = N.field
        lead = coeffs_in(N, var)[N.degree_in(var)]
        for attempt in range(3):
            point = {v: F.from_int(11 * attempt + 2 + 5 * i) for i, v in enumerate(others)}
            if F.is_zero(lead.eval_scalars(point)):
                continue
            ua = {e: c.eval_scalars(point) for e, c in coeffs_in(N, var).items()}
            ub = {e: c.eval_scalars(point) for e, c in coeffs_in(dN, var).items()}
            from .poly import _univar_gcd_degree

            if _univar_gcd_degree(ua, ub, F) == 0:
                return True
        # inconclusive; fall through to the exact test
    g = multivar_gcd(N, dN)
    return g.degree_in(var) == 0


def find_squarefree_shift(f: ExtPoly) -> int:
    """Smallest |c| from 0, 1, -1, 2, -2, ... with N(f(x - c*alpha)) squarefree."""
    c, _ = _squarefree_shift_and_norm(f)
    return c


def _squarefree_shift_and_norm(f: ExtPoly):
    l = f.ext.degree
    m = f.degree()
    limit = l * (l - 1) * m * (m - 1) // 2 + 2
    tried = 0
    for c in _shift_candidates():
        tried += 1
        if tried > 2 * limit + 3:
            raise UniratError("no squarefree shift found within the degree bound")
        N = _norm_after_shift(f, c)
        N_mp, _den = N.to_multipoly()
        if _is_squarefree_in(N_mp, N.var):
            return c, N
    raise UniratError("unreachable")


def factor_over_extension(f: ExtPoly, max_subsets=None) -> Factorization:
    """Complete factorization of f in E[alpha][x] by the norm method.

    For every squarefree part: known roots at alpha are stripped first, the
    rest is shifted so its norm is squarefree, the norm is factored over E,
    and each factor of f is recovered as gcd(f, h_i(x + c*alpha)).
    """
    ext = f.ext
    if f.is_zero():
        raise UniratError("factor of zero polynomial")
    unit = f.lc()
    work = f.monic()
    factors = []
    for part, mult in _ext_squarefree(work):
        if part.degree() == 0:
            continue
        # roots at alpha come for free
        while part.degree() > 0 and part.eval(ext.alpha()).is_zero():
            linear = ExtPoly(ext, [-ext.alpha(), ext.one()], part.var)
            factors.append((linear, mult))
            part = part.divmod(linear)[0]
        if part.degree() == 0:
            continue
        if part.degree() == 1:
            factors.append((part.monic(), mult))
            continue
        c, N = _squarefree_shift_and_norm(part)
        N_mp, N_den = N.to_multipoly()
        N_int = _clear_to_rational_poly(N_mp)
        norm_fact = factor_multivar(N_int, max_subsets)
        shifted_back = []
        for h, hm in norm_fact.factors:
            if h.degree_in(N.var) == 0:
                continue
            h_ep = EPoly.from_multipoly(h, N.var, out_vars=ext.universe)
            h_ext = ExtPoly.from_epoly(ext, h_ep, var=part.var)
            if c:
                delta = ext.alpha().scale(RatFunc.const(ext.field, ext.universe, c))
                h_ext = h_ext.shift(delta)
            g = part.gcd_monic(h_ext)
            if g.degree() >= 1:
                shifted_back.append((g, mult))
        factors.extend(shifted_back)
    factors.sort(key=lambda t: (t[0].degree(), str(t[0])))
    return Factorization(unit, factors)


def _ext_squarefree(f: ExtPoly):
    """Yun decomposition over E[alpha] (characteristic zero)."""
    if f.degree() <= 0:
        return [(f, 1)]
    df = f.derivative()
    g = f.gcd_monic(df)
    if g.degree() == 0:
        return [(f, 1)]
    out = []
    c = f.divmod(g)[0]
    d = df.divmod(g)[0] - c.derivative()
    i = 1
    while c.degree() > 0:
        a = c.gcd_monic(d)
        if a.degree() > 0:
            out.append((a, i))
        c = c.divmod(a)[0]
        d = d.divmod(a)[0] - c.derivative()
        i += 1
    return out


def _clear_to_rational_poly(p: MultiPoly) -> MultiPoly:
    """Scale a rational-coefficient MultiPoly to integer-primitive form."""
    return primitive_normalized(p)
