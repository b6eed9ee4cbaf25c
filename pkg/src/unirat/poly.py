"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a term map {exponent tuple: nonzero coefficient} over a fixed
ordered variable universe and a coefficient domain from `coeffs`.  Everything
here is immutable in practice: operations return fresh objects and never
mutate their inputs, so values can be shared freely across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .coeffs import PrimeField
from .errors import InseparableInputError, UniratError, UniverseMismatchError

Monomial = tuple  # exponent tuple, one slot per universe variable


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial):
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a: Monomial) -> int:
    return sum(a)


class Lex:
    """Lexicographic order on the full universe."""

    name = "lex"

    def key(self, m: Monomial):
        return m

    def __repr__(self):
        return "Lex"

    def __eq__(self, other):
        return isinstance(other, Lex)

    def __hash__(self):
        return hash("lex")


class GrevLex:
    """Graded reverse lexicographic order on the full universe."""

    name = "grevlex"

    def key(self, m: Monomial):
        return (sum(m), tuple(-e for e in reversed(m)))

    def __repr__(self):
        return "GrevLex"

    def __eq__(self, other):
        return isinstance(other, GrevLex)

    def __hash__(self):
        return hash("grevlex")


class Block:
    """Block order: compare block-by-block with an inner order per block.

    `blocks` is an ordered partition of universe indices.  Earlier blocks
    dominate, so a Block([ambient, tags]) order eliminates the ambient
    variables.
    """

    name = "block"

    def __init__(self, blocks, inner=None):
        self.blocks = tuple(tuple(b) for b in blocks)
        if inner is None:
            inner = [GrevLex()] * len(self.blocks)
        self.inner = tuple(inner)
        if len(self.inner) != len(self.blocks):
            raise UniratError("one inner order per block required")
        seen = [i for b in self.blocks for i in b]
        if len(seen) != len(set(seen)):
            raise UniratError("blocks must partition distinct indices")

    def key(self, m: Monomial):
        return tuple(
            order.key(tuple(m[i] for i in block))
            for block, order in zip(self.blocks, self.inner)
        )

    def eliminates(self, keep_indices) -> bool:
        """True when the order eliminates exactly the complement of `keep`."""
        keep = set(keep_indices)
        dropped = True  # scanning from the last block upward
        for block in reversed(self.blocks):
            inside = [i in keep for i in block]
            if all(inside):
                continue
            if any(inside):
                return False
            dropped = False
        return True

    def __repr__(self):
        return f"Block({self.blocks})"

    def __eq__(self, other):
        return (
            isinstance(other, Block)
            and other.blocks == self.blocks
            and other.inner == self.inner
        )

    def __hash__(self):
        return hash(("block", self.blocks, self.inner))


def tag_order(n_ambient: int, n_tags: int, tag_inner=None):
    """The default elimination order: ambient block (grevlex) above tags (lex)."""
    return Block(
        [tuple(range(n_ambient)), tuple(range(n_ambient, n_ambient + n_tags))],
        [GrevLex(), tag_inner or Lex()],
    )


class MultiPoly:
    """Sparse multivariate polynomial over an exact coefficient domain."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field, vars, terms, _clean=False):
        self.field = field
        self.vars = tuple(vars)
        if _clean:
            self.terms = terms
        else:
            clean = {}
            n = len(self.vars)
            for mono, c in terms.items():
                if len(mono) != n:
                    raise UniverseMismatchError(
                        f"monomial {mono} has wrong arity for {self.vars}"
                    )
                c = field.coerce(c)
                if not field.is_zero(c):
                    clean[tuple(mono)] = c
            self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field, vars):
        return cls(field, vars, {}, _clean=True)

    @classmethod
    def const(cls, field, vars, c):
        c = field.coerce(c)
        if field.is_zero(c):
            return cls.zero(field, vars)
        return cls(field, vars, {(0,) * len(vars): c}, _clean=True)

    @classmethod
    def var(cls, field, vars, name, exp=1):
        i = list(vars).index(name)
        mono = tuple(exp if j == i else 0 for j in range(len(vars)))
        return cls(field, vars, {mono: field.one}, _clean=True)

    def with_universe(self, new_vars):
        """Reinterpret over a larger universe (old vars must be a subset)."""
        new_vars = tuple(new_vars)
        pos = [new_vars.index(v) for v in self.vars]
        n = len(new_vars)
        terms = {}
        for mono, c in self.terms.items():
            out = [0] * n
            for p, e in zip(pos, mono):
                out[p] = e
            terms[tuple(out)] = c
        return MultiPoly(self.field, new_vars, terms, _clean=True)

    # -- predicates / inspection --------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(mono_deg(m) == 0 for m in self.terms)

    def constant_value(self):
        if self.is_zero():
            return self.field.zero
        return self.terms[(0,) * len(self.vars)]

    def total_degree(self):
        return max((mono_deg(m) for m in self.terms), default=-1)

    def degree_in(self, var):
        i = self._var_index(var)
        return max((m[i] for m in self.terms), default=-1)

    def variables_present(self):
        used = [False] * len(self.vars)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def _var_index(self, var):
        try:
            return self.vars.index(var)
        except ValueError:
            raise UniverseMismatchError(f"unknown variable {var!r} in {self.vars}")

    def _check_compat(self, other):
        if self.vars != other.vars:
            raise UniverseMismatchError(f"universe mismatch: {self.vars} vs {other.vars}")
        if self.field != other.field:
            raise UniverseMismatchError("coefficient-field mismatch")

    # -- arithmetic ----------------------------------------------------------

    def _coerce_operand(self, other):
        if isinstance(other, MultiPoly):
            self._check_compat(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.field, self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = F.add(terms.get(m, F.zero), c)
            if F.is_zero(s):
                terms.pop(m, None)
            else:
                terms[m] = s
        return MultiPoly(F, self.vars, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MultiPoly(
            F, self.vars, {m: F.neg(c) for m, c in self.terms.items()}, _clean=True
        )

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        if not self.terms or not other.terms:
            return MultiPoly.zero(F, self.vars)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        terms = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = mono_mul(ma, mb)
                s = F.add(terms.get(m, F.zero), F.mul(ca, cb))
                if F.is_zero(s):
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return MultiPoly(F, self.vars, terms, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise UniratError("negative polynomial power")
        result = MultiPoly.const(self.field, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c):
        F = self.field
        c = F.coerce(c)
        if F.is_zero(c):
            return MultiPoly.zero(F, self.vars)
        return MultiPoly(
            F, self.vars, {m: F.mul(v, c) for m, v in self.terms.items()}, _clean=True
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.field, self.vars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.vars == other.vars
            and self.terms == other.terms
        )

    __hash__ = None

    # -- leading data --------------------------------------------------------

    def leading_monomial(self, order) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order):
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order=None, reverse=True):
        order = order or GrevLex()
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=reverse)

    # -- calculus / substitution ---------------------------------------------

    def derivative(self, var):
        i = self._var_index(var)
        F = self.field
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            coef = F.mul(c, F.from_int(e))
            if F.is_zero(coef):
                continue  # char p kills p-th powers
            mono = m[:i] + (e - 1,) + m[i + 1 :]
            prev = terms.get(mono)
            terms[mono] = F.add(prev, coef) if prev is not None else coef
        return MultiPoly(F, self.vars, {m: c for m, c in terms.items() if not F.is_zero(c)}, _clean=True)

    def eval_scalars(self, values: dict):
        """Evaluate at scalar bindings for every present variable."""
        F = self.field
        idx = {v: i for i, v in enumerate(self.vars)}
        acc = F.zero
        for m, c in self.terms.items():
            t = c
            for v, val in values.items():
                e = m[idx[v]]
                if e:
                    t = F.mul(t, F.pow(F.coerce(val), e))
            for i, e in enumerate(m):
                if e and self.vars[i] not in values:
                    raise UniratError(f"unbound variable {self.vars[i]}")
            acc = F.add(acc, t)
        return acc

    def substitute(self, bindings: dict):
        """Substitute variables with RatFunc/MultiPoly/scalar values.

        Unbound variables are identity-bound.  Returns a RatFunc over the
        target universe; raises ZeroDenominatorError when a denominator
        vanishes during composition.
        """
        from .fields import RatFunc, substitute_poly

        return substitute_poly(self, bindings)

    def subs_poly(self, bindings: dict) -> "MultiPoly":
        """Polynomial-only substitution (every value a MultiPoly or scalar)."""
        target = None
        for val in bindings.values():
            if isinstance(val, MultiPoly):
                target = val
                break
        if target is None:
            target = self
        out_vars = target.vars
        F = self.field
        cache = {}

        def as_poly(v):
            if v in bindings:
                val = bindings[v]
                if isinstance(val, MultiPoly):
                    return val
                return MultiPoly.const(F, out_vars, val)
            return MultiPoly.var(F, out_vars, v)

        acc = MultiPoly.zero(F, out_vars)
        for m, c in self.terms.items():
            t = MultiPoly.const(F, out_vars, c)
            for i, e in enumerate(m):
                if not e:
                    continue
                v = self.vars[i]
                if (v, e) not in cache:
                    cache[(v, e)] = as_poly(v) ** e
                t = t * cache[(v, e)]
            acc = acc + t
        return acc

    # -- printing --------------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            cs = str(c)
            if mono:
                if c == 1:
                    piece = mono
                elif c == -1:
                    piece = f"-{mono}"
                else:
                    piece = f"{cs}*{mono}"
            else:
                piece = cs
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Spec-surface arithmetic dispatch: op in {add, sub, mul}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise UniratError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# univariate views: treat one variable as main, MultiPoly coefficients
# ---------------------------------------------------------------------------


def coeffs_in(p: MultiPoly, var) -> dict:
    """{degree: coefficient-MultiPoly} with the main variable stripped out."""
    i = p._var_index(var)
    out = {}
    for m, c in p.terms.items():
        e = m[i]
        mono = m[:i] + (0,) + m[i + 1 :]
        d = out.setdefault(e, {})
        d[mono] = c
    return {
        e: MultiPoly(p.field, p.vars, terms, _clean=True) for e, terms in out.items()
    }


def from_coeffs_in(field, vars, var, coeffs: dict) -> MultiPoly:
    i = list(vars).index(var)
    terms = {}
    for e, poly in coeffs.items():
        for m, c in poly.terms.items():
            mono = m[:i] + (m[i] + e,) + m[i + 1 :]
            terms[mono] = c
    return MultiPoly(field, vars, terms, _clean=True)


def leading_coeff_in(p: MultiPoly, var) -> MultiPoly:
    d = p.degree_in(var)
    return coeffs_in(p, var).get(d, MultiPoly.zero(p.field, p.vars))


def pseudo_rem(a: MultiPoly, b: MultiPoly, var) -> MultiPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + rem."""
    da, db = a.degree_in(var), b.degree_in(var)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    if da < db:
        return a
    lcb = leading_coeff_in(b, var)
    x = MultiPoly.var(a.field, a.vars, var)
    r = a
    steps = da - db + 1
    while not r.is_zero() and r.degree_in(var) >= db:
        dr = r.degree_in(var)
        lcr = leading_coeff_in(r, var)
        r = r * lcb - b * lcr * x ** (dr - db)
        steps -= 1
    if steps > 0:
        r = r * lcb**steps
    return r


def exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact multivariate division; raises UniratError if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    F = a.field
    if b.is_constant():
        return a.scale(F.inv(b.constant_value()))
    order = GrevLex()
    lmb = b.leading_monomial(order)
    lcb = b.terms[lmb]
    q_terms = {}
    r = a
    while not r.is_zero():
        lmr = r.leading_monomial(order)
        m = mono_div(lmr, lmb)
        if m is None:
            raise UniratError("inexact polynomial division")
        c = F.div(r.terms[lmr], lcb)
        q_terms[m] = c
        r = r - b * MultiPoly(F, a.vars, {m: c}, _clean=True)
    return MultiPoly(F, a.vars, q_terms)


def divides(b: MultiPoly, a: MultiPoly) -> bool:
    if b.is_zero():
        return a.is_zero()
    try:
        exact_div(a, b)
        return True
    except UniratError:
        return False


# ---------------------------------------------------------------------------
# normalization, content, gcd (primitive PRS)
# ---------------------------------------------------------------------------


def monic_normalized(p: MultiPoly, order=None) -> MultiPoly:
    """Scale so the leading coefficient under `order` (default grevlex) is 1."""
    if p.is_zero():
        return p
    order = order or GrevLex()
    lc = p.leading_coefficient(order)
    return p.scale(p.field.inv(lc))


def primitive_normalized(p: MultiPoly) -> MultiPoly:
    """Canonical display form.

    Over Q: integer coefficients with content 1 and positive grevlex-leading
    coefficient.  Over F_p: monic under grevlex.
    """
    if p.is_zero():
        return p
    if isinstance(p.field, PrimeField):
        return monic_normalized(p)
    den_lcm = 1
    for c in p.terms.values():
        den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    nums = [c.numerator * (den_lcm // c.denominator) for c in p.terms.values()]
    g = 0
    for n in nums:
        g = int_gcd(g, n)
    scale = Fraction(den_lcm, g)
    q = p.scale(scale)
    if q.leading_coefficient(GrevLex()) < 0:
        q = q.scale(-1)
    return q


def content_in(p: MultiPoly, var) -> MultiPoly:
    """Content of p viewed univariately in `var` (gcd of the coefficients)."""
    cs = list(coeffs_in(p, var).values())
    g = MultiPoly.zero(p.field, p.vars)
    for c in cs:
        g = multivar_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            break
    return g


def _probe_coprime(a: MultiPoly, b: MultiPoly, var) -> bool:
    """Certify gcd degree 0 in `var` from one good evaluation of the others.

    At a point where the leading coefficient of `a` in var does not vanish,
    every divisor of `a` keeps its var-degree, so a coprime specialization
    proves coprimality.  A non-coprime or degenerate probe is inconclusive.
    """
    others = [v for v in a.vars if v != var and (a.degree_in(v) or b.degree_in(v))]
    if not others:
        return False
    F = a.field
    lca = leading_coeff_in(a, var)
    ca, cb = coeffs_in(a, var), coeffs_in(b, var)
    for attempt in range(4):
        point = {
            v: F.from_int(17 * attempt + 3 + 7 * i) for i, v in enumerate(others)
        }
        if F.is_zero(lca.eval_scalars(point)):
            continue
        ua = {e: c.eval_scalars(point) for e, c in ca.items()}
        ub = {e: c.eval_scalars(point) for e, c in cb.items()}
        if _univar_gcd_degree(ua, ub, F) == 0:
            return True
        return False
    return False


def _univar_gcd_degree(ua: dict, ub: dict, F) -> int:
    def to_list(d):
        if not d:
            return []
        n = max(d)
        out = [F.zero] * (n + 1)
        for e, c in d.items():
            out[e] = c
        while out and F.is_zero(out[-1]):
            out.pop()
        return out

    x, y = to_list(ua), to_list(ub)
    while y:
        # x mod y over the coefficient field
        while len(x) >= len(y):
            c = F.div(x[-1], y[-1])
            k = len(x) - len(y)
            for i in range(len(y)):
                x[k + i] = F.sub(x[k + i], F.mul(c, y[i]))
            while x and F.is_zero(x[-1]):
                x.pop()
            if not x:
                break
        x, y = y, x
    return len(x) - 1


def multivar_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """GCD via primitive polynomial remainder sequences with content extraction.

    A univariate evaluation probe short-circuits the common coprime case.
    Result is canonically normalized (primitive over Q / monic over F_p);
    gcd(0, 0) = 0 by convention.
    """
    if a.is_zero():
        return primitive_normalized(b)
    if b.is_zero():
        return primitive_normalized(a)
    a._check_compat(b)
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(a.field, a.vars, 1)
    # pivot on the variable with the smallest positive degree: fewer PRS steps
    var = None
    best = None
    for v in a.vars:
        da, db = a.degree_in(v), b.degree_in(v)
        if da > 0 or db > 0:
            score = min(x for x in (da, db) if x > 0) if (da > 0 and db > 0) else 0
            if da == 0 or db == 0:
                if var is None:
                    var = v
                    best = None
                continue
            if best is None or score < best:
                var, best = v, score
    if a.degree_in(var) == 0 or b.degree_in(var) == 0:
        # var appears in only one argument: gcd divides its content
        if a.degree_in(var) == 0:
            return multivar_gcd(a, content_in(b, var))
        return multivar_gcd(content_in(a, var), b)

    ca, cb = content_in(a, var), content_in(b, var)
    pa, pb = exact_div(a, ca), exact_div(b, cb)
    cont = multivar_gcd(ca, cb)

    if _probe_coprime(pa, pb, var):
        return primitive_normalized(cont)

    if pa.degree_in(var) < pb.degree_in(var):
        pa, pb = pb, pa
    while True:
        r = pseudo_rem(pa, pb, var)
        if r.is_zero():
            break
        if r.degree_in(var) == 0:
            pb = MultiPoly.const(a.field, a.vars, 1)
            break
        r = primitive_normalized(r)  # cheap numeric cleanup before content gcd
        r = exact_div(r, content_in(r, var))
        pa, pb = pb, r
    g = exact_div(pb, content_in(pb, var)) if pb.degree_in(var) > 0 else pb
    return primitive_normalized(cont * g)


# ---------------------------------------------------------------------------
# resultant (subresultant PRS)
# ---------------------------------------------------------------------------


def resultant(a: MultiPoly, b: MultiPoly, var) -> MultiPoly:
    """Res_var(a, b) by the subresultant PRS.

    Convention: for monic a, the resultant is the product of b evaluated at
    the roots of a, i.e. Res(a, b) = lc(a)^deg(b) * prod b(root).
    """
    a._check_compat(b)
    a._var_index(var)
    F = a.field
    one = MultiPoly.const(F, a.vars, 1)
    if a.is_zero() or b.is_zero():
        return MultiPoly.zero(F, a.vars)
    da, db = a.degree_in(var), b.degree_in(var)
    if da == 0 and db == 0:
        return one
    if da == 0:
        return a**db
    if db == 0:
        return b**da
    sign = -1 if (da * db) % 2 == 1 and da < db else 1
    if da < db:
        a, b, da, db = b, a, db, da
    s = 1
    g = one
    h = one
    while True:
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = pseudo_rem(a, b, var)
        if r.is_zero():
            return MultiPoly.zero(F, a.vars)
        a, b = b, exact_div(r, g * h**delta)
        g = leading_coeff_in(a, var)
        if delta > 0:
            h = exact_div(g**delta, h ** (delta - 1)) if delta > 1 else g
        da, db = a.degree_in(var), b.degree_in(var)
        if db == 0:
            break
    res = exact_div(b**da, h ** (da - 1)) if da > 1 else b
    if s < 0:
        res = -res
    return res if sign > 0 else -res


def sylvester_matrix(a: MultiPoly, b: MultiPoly, var):
    """Sylvester matrix of a, b wrt var (rows of b-coeffs first for deg(a) rows).

    Used by tests as an independent dense oracle for `resultant`.
    """
    da, db = a.degree_in(var), b.degree_in(var)
    ca, cb = coeffs_in(a, var), coeffs_in(b, var)
    zero = MultiPoly.zero(a.field, a.vars)
    n = da + db
    rows = []
    for i in range(db):
        rows.append([ca.get(da - j + i, zero) for j in range(n)])
    for i in range(da):
        rows.append([cb.get(db - j + i, zero) for j in range(n)])
    return rows


def det_bareiss(rows):
    """Fraction-free determinant of a square MultiPoly matrix."""
    m = [row[:] for row in rows]
    n = len(m)
    if n == 0:
        return None
    field = m[0][0].field
    vars = m[0][0].vars
    one = MultiPoly.const(field, vars, 1)
    prev = one
    sign = 1
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(field, vars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
            m[i][k] = MultiPoly.zero(field, vars)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


# ---------------------------------------------------------------------------
# square-free decomposition
# ---------------------------------------------------------------------------


def squarefree_decomposition(p: MultiPoly, var):
    """Yun's algorithm in `var`; list of (factor, multiplicity).

    Over F_p the input must be separable in `var` (error otherwise); the
    reconstruction is verified.  Factors are primitive-normalized, pairwise
    coprime and square-free in `var`; a leading (content/unit) part with
    multiplicity 1 carries whatever scalar and var-free content remains.
    """
    if p.is_zero():
        raise UniratError("square-free decomposition of 0")
    if p.degree_in(var) == 0:
        return [(p, 1)]
    dp = p.derivative(var)
    if dp.is_zero():
        raise InseparableInputError(f"{var}-derivative vanishes (char p divides exponents)")
    out = []
    g = multivar_gcd(p, dp)
    c = exact_div(p, g)
    d = exact_div(dp, g) - c.derivative(var)
    i = 1
    while c.degree_in(var) > 0:
        a = multivar_gcd(c, d)
        if a.degree_in(var) > 0:
            out.append((a, i))
        c_next = exact_div(c, a)
        d = exact_div(d, a) - c_next.derivative(var)
        c = c_next
        i += 1
    recon = MultiPoly.const(p.field, p.vars, 1)
    for f, m in out:
        recon = recon * f**m
    if not divides(recon, p):
        raise InseparableInputError("square-free reconstruction failed (char p input)")
    unit_part = exact_div(p, recon)
    if unit_part.degree_in(var) > 0:
        # leftover positive degree means a multiplicity divisible by char p
        raise InseparableInputError("inseparable input: multiplicity divisible by char")
    if not (unit_part.is_constant() and unit_part.constant_value() == p.field.one):
        out = [(unit_part, 1)] + out
    return out


def random_poly(rng, field, vars, max_deg=3, n_terms=4, coeff_range=5):
    """Small random polynomial, used by property tests."""
    terms = {}
    n = len(vars)
    for _ in range(n_terms):
        m = [0] * n
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            m[rng.randrange(n)] += 1
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            terms[tuple(m)] = terms.get(tuple(m), 0) + c
    return MultiPoly(field, vars, {m: field.from_int(c) for m, c in terms.items() if c})
