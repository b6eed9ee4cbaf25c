"""Rational functions, field presentations, and simple algebraic extensions.

`RatFunc` is the normalized quotient of two MultiPolys.  `EPoly` is a dense
univariate polynomial with RatFunc coefficients over a rational function
field E; `AlgExt`/`AlgExtElem` model E[z]/(p) with extended-Euclid inverses
and resultant-based norms.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import QQ, PrimeField
from .errors import (
    IntegrityError,
    UniratError,
    UniverseMismatchError,
    ZeroDenominatorError,
)
from .poly import (
    GrevLex,
    MultiPoly,
    exact_div,
    from_coeffs_in,
    coeffs_in,
    monic_normalized,
    multivar_gcd,
    resultant,
)


class RatFunc:
    """num/den over a shared universe; reduced, denominator monic, never zero."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, _normalized=False):
        if den is None:
            den = MultiPoly.const(num.field, num.vars, 1)
        if _normalized:
            self.num, self.den = num, den
            return
        num._check_compat(den)
        if den.is_zero():
            raise ZeroDenominatorError("zero denominator")
        g = multivar_gcd(num, den)
        if not g.is_constant():
            num, den = exact_div(num, g), exact_div(den, g)
        lc = den.leading_coefficient(GrevLex())
        inv = num.field.inv(lc)
        self.num = num.scale(inv)
        self.den = den.scale(inv)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly):
        return cls(p, MultiPoly.const(p.field, p.vars, 1), _normalized=True)

    @classmethod
    def const(cls, field, vars, c):
        return cls.from_poly(MultiPoly.const(field, vars, c))

    @classmethod
    def var(cls, field, vars, name):
        return cls.from_poly(MultiPoly.var(field, vars, name))

    @classmethod
    def zero(cls, field, vars):
        return cls.from_poly(MultiPoly.zero(field, vars))

    @property
    def field(self):
        return self.num.field

    @property
    def vars(self):
        return self.num.vars

    def with_universe(self, new_vars):
        return RatFunc(self.num.with_universe(new_vars), self.den.with_universe(new_vars))

    # -- predicates ------------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise UniratError(f"{self} is not polynomial")
        return self.num.scale(self.field.inv(self.den.constant_value()))

    def constant_value(self):
        return self.field.div(self.num.constant_value(), self.den.constant_value())

    # -- arithmetic --------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.vars != self.vars or other.field != self.field:
                raise UniverseMismatchError("RatFunc universe mismatch")
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.field, self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominatorError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def inv(self):
        if self.is_zero():
            raise ZeroDenominatorError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    __hash__ = None

    def substitute(self, bindings: dict) -> "RatFunc":
        num = substitute_poly(self.num, bindings)
        den = substitute_poly(self.den, bindings)
        if den.is_zero():
            raise ZeroDenominatorError(
                f"denominator {self.den} vanishes under substitution", bindings
            )
        return num / den

    def __str__(self):
        if self.is_polynomial():
            return str(self.as_poly())
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def ratfunc_normalize(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Spec surface: reduce and canonically scale num/den."""
    return RatFunc(num, den)


def substitute_poly(p: MultiPoly, bindings: dict) -> RatFunc:
    """Evaluate p at {var: RatFunc | MultiPoly | scalar}; identity-bind the rest."""
    target = None
    for val in bindings.values():
        if isinstance(val, RatFunc):
            target = (val.field, val.vars)
            break
        if isinstance(val, MultiPoly):
            target = (val.field, val.vars)
            break
    if target is None:
        target = (p.field, p.vars)
    field, out_vars = target

    def as_rf(v):
        if v in bindings:
            val = bindings[v]
            if isinstance(val, RatFunc):
                return val
            if isinstance(val, MultiPoly):
                return RatFunc.from_poly(val)
            return RatFunc.const(field, out_vars, val)
        if v not in out_vars:
            raise UniratError(f"variable {v} unbound and absent from target universe")
        return RatFunc.var(field, out_vars, v)

    cache = {}
    acc = RatFunc.zero(field, out_vars)
    for m, c in p.terms.items():
        t = RatFunc.const(field, out_vars, c)
        for i, e in enumerate(m):
            if not e:
                continue
            v = p.vars[i]
            if (v, e) not in cache:
                cache[(v, e)] = as_rf(v) ** e
            t = t * cache[(v, e)]
        acc = acc + t
    return acc


# ---------------------------------------------------------------------------
# ambient fields and presentations
# ---------------------------------------------------------------------------


class AmbientField:
    """K(x_1..x_n), or QF(K[x]/I) when relation generators are supplied.

    The relation ideal, when present, must be prime; this is a documented
    caller obligation, not checked here.
    """

    def __init__(self, field, vars, relations=()):
        self.field = field
        self.vars = tuple(vars)
        self.relations = tuple(relations)
        for r in self.relations:
            if r.vars != self.vars or r.field != field:
                raise UniverseMismatchError("relation universe mismatch")

    @property
    def is_rational(self):
        return not self.relations

    def __repr__(self):
        rel = f"/{list(map(str, self.relations))}" if self.relations else ""
        return f"AmbientField({self.field}, {self.vars}{rel})"


class FieldPresentation:
    """Generators f_1..f_m of a unirational subfield of an ambient field."""

    def __init__(self, ambient: AmbientField, generators, tag_prefix=None):
        self.ambient = ambient
        self.generators = tuple(generators)
        if not self.generators:
            raise UniratError("at least one generator required")
        for g in self.generators:
            if g.vars != ambient.vars or g.field != ambient.field:
                raise UniverseMismatchError("generator universe mismatch")
        if tag_prefix is None:
            for candidate in ("t", "s", "u", "tag"):
                names = [f"{candidate}{i+1}" for i in range(len(self.generators))]
                if not (set(names) & set(ambient.vars)):
                    tag_prefix = candidate
                    break
            else:
                raise UniratError("cannot pick tag names disjoint from ambient universe")
        self.tags = tuple(f"{tag_prefix}{i+1}" for i in range(len(self.generators)))

    @property
    def n_vars(self):
        return len(self.ambient.vars)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"FieldPresentation([{gens}] in {self.ambient!r})"


# ---------------------------------------------------------------------------
# univariate polynomials over a rational function field E = K(t_1..t_n)
# ---------------------------------------------------------------------------


class EPoly:
    """Dense univariate polynomial with RatFunc coefficients."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var="z"):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            raise UniratError("EPoly needs a field/universe context; use EPoly.zero")
        self.coeffs = tuple(coeffs)
        self.var = var

    @classmethod
    def zero(cls, field, vars, var="z"):
        obj = object.__new__(cls)
        obj.coeffs = (RatFunc.zero(field, vars),)
        obj.var = var
        return obj

    @classmethod
    def from_list(cls, coeffs, var="z"):
        nz = [c for c in coeffs if isinstance(c, RatFunc)]
        if not nz:
            raise UniratError("need at least one RatFunc coefficient")
        field, vars = nz[0].field, nz[0].vars
        out = [
            c if isinstance(c, RatFunc) else RatFunc.const(field, vars, c)
            for c in coeffs
        ]
        if all(c.is_zero() for c in out):
            return cls.zero(field, vars, var)
        return cls(out, var)

    @property
    def field(self):
        return self.coeffs[0].field

    @property
    def universe(self):
        return self.coeffs[0].vars

    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_zero()

    def degree(self):
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1]

    def coeff(self, i):
        if i < len(self.coeffs):
            return self.coeffs[i]
        return RatFunc.zero(self.field, self.universe)

    def monic(self):
        if self.is_zero():
            return self
        lead = self.lc()
        return EPoly([c / lead for c in self.coeffs], self.var)

    def _wrap(self, coeffs):
        if not coeffs or all(c.is_zero() for c in coeffs):
            return EPoly.zero(self.field, self.universe, self.var)
        return EPoly(coeffs, self.var)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return self._wrap([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return self._wrap([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return self._wrap([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return EPoly.zero(self.field, self.universe, self.var)
        out = [RatFunc.zero(self.field, self.universe)] * (
            len(self.coeffs) + len(other.coeffs) - 1
        )
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return self._wrap(out)

    def __pow__(self, n):
        result = EPoly.from_list(
            [RatFunc.const(self.field, self.universe, 1)], self.var
        )
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("EPoly division by zero")
        q = [RatFunc.zero(self.field, self.universe)] * max(
            len(self.coeffs) - len(other.coeffs) + 1, 1
        )
        r = list(self.coeffs)
        d = other.degree()
        lc = other.lc()
        while len(r) - 1 >= d and not all(c.is_zero() for c in r):
            while len(r) > 1 and r[-1].is_zero():
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            c = r[-1] / lc
            q[k] = q[k] + c
            for i in range(d + 1):
                r[k + i] = r[k + i] - c * other.coeffs[i]
            r.pop()
        return self._wrap(q), self._wrap(r)

    def __eq__(self, other):
        return (
            isinstance(other, EPoly)
            and self.degree() == other.degree()
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    __hash__ = None

    def derivative(self):
        if self.degree() <= 0:
            return EPoly.zero(self.field, self.universe, self.var)
        return self._wrap([self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def gcd_monic(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.monic()

    def eval(self, value):
        """Horner evaluation; value may be RatFunc or AlgExtElem."""
        acc = None
        for c in reversed(self.coeffs):
            if acc is None:
                acc = _like(value, c)
            else:
                acc = acc * value + _like(value, c)
        return acc

    def to_multipoly(self):
        """Clear denominators: returns (MultiPoly over universe+[var], den MultiPoly).

        The returned pair satisfies poly / den == self с the main variable
        appended last in the universe.
        """
        field = self.field
        uni = self.universe + (self.var,)
        den = MultiPoly.const(field, self.universe, 1)
        for c in self.coeffs:
            g = multivar_gcd(den, c.den)
            den = exact_div(den, g) * c.den if not g.is_constant() else den * c.den
        total = MultiPoly.zero(field, uni)
        xv = MultiPoly.var(field, uni, self.var)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            scaled = c.num * exact_div(den, c.den)
            total = total + scaled.with_universe(uni) * xv**i
        return total, den

    @classmethod
    def from_multipoly(cls, p: MultiPoly, var, den: MultiPoly = None, out_vars=None):
        """Inverse of to_multipoly: p(…, var)/den as an EPoly over out_vars.

        Coefficients are projected onto out_vars; variables of p outside
        out_vars (other than var) must not occur.
        """
        base_vars = out_vars if out_vars is not None else tuple(
            v for v in p.vars if v != var
        )
        field = p.field
        positions = []
        for v in p.vars:
            if v == var:
                positions.append(None)
            elif v in base_vars:
                positions.append(base_vars.index(v))
            else:
                positions.append(-1)  # must stay zero
        var_slot = p.vars.index(var)
        n = p.degree_in(var)
        if n < 0:
            return cls.zero(field, base_vars, var)
        buckets = [dict() for _ in range(n + 1)]
        for m, c in p.terms.items():
            mono = [0] * len(base_vars)
            for slot, e in enumerate(m):
                if slot == var_slot or not e:
                    continue
                pos = positions[slot]
                if pos == -1:
                    raise UniverseMismatchError(
                        f"variable {p.vars[slot]} not allowed in coefficients"
                    )
                mono[pos] = e
            buckets[m[var_slot]][tuple(mono)] = c
        if den is None:
            den_rf = RatFunc.const(field, base_vars, 1)
        else:
            den_rf = RatFunc.from_poly(den)
        out = []
        for terms in buckets:
            cp = MultiPoly(field, base_vars, terms, _clean=True)
            out.append(RatFunc.from_poly(cp) / den_rf)
        return cls(out, var)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coeff(i)
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*{self.var}")
            else:
                parts.append(f"({c})*{self.var}^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"EPoly({self})"


def _like(value, ratfunc_coeff):
    """Lift a RatFunc coefficient into the arithmetic domain of `value`."""
    if isinstance(value, AlgExtElem):
        return value.ext.from_base(ratfunc_coeff)
    if isinstance(value, RatFunc):
        return ratfunc_coeff
    raise UniratError(f"cannot evaluate at {value!r}")


# ---------------------------------------------------------------------------
# simple algebraic extensions E[alpha] = E[z]/(p_alpha)
# ---------------------------------------------------------------------------


class AlgExt:
    """E[z]/(p) for monic p over E = K(t_1..t_n)."""

    def __init__(self, minpoly: EPoly):
        if minpoly.degree() < 1:
            raise UniratError("minimal polynomial must have degree >= 1")
        if not minpoly.lc() == RatFunc.const(minpoly.field, minpoly.universe, 1):
            minpoly = minpoly.monic()
        self.minpoly = minpoly
        self.degree = minpoly.degree()
        self._reduction = None  # cache: alpha^k for k in [deg, 2*deg-2]

    @property
    def field(self):
        return self.minpoly.field

    @property
    def universe(self):
        return self.minpoly.universe

    def _reduction_rows(self, count):
        """Rows j = 0..count-1 expressing alpha^(d+j) in the power basis."""
        if self._reduction is None:
            self._reduction = [[-self.minpoly.coeff(i) for i in range(self.degree)]]
        rows = self._reduction
        zero = RatFunc.zero(self.field, self.universe)
        while len(rows) < count:
            prev = rows[-1]
            shifted = [zero] + prev[:-1]
            top = prev[-1]
            if not top.is_zero():
                head = rows[0]
                shifted = [shifted[i] + top * head[i] for i in range(self.degree)]
            rows.append(shifted)
        return rows

    # -- element constructors ------------------------------------------------

    def elem(self, coeffs) -> "AlgExtElem":
        zero = RatFunc.zero(self.field, self.universe)
        cs = list(coeffs)[: self.degree]
        cs += [zero] * (self.degree - len(cs))
        return AlgExtElem(self, tuple(cs))

    def from_base(self, c: RatFunc) -> "AlgExtElem":
        return self.elem([c])

    def from_const(self, c) -> "AlgExtElem":
        return self.from_base(RatFunc.const(self.field, self.universe, c))

    def alpha(self) -> "AlgExtElem":
        if self.degree == 1:
            # z - c: alpha is the base element c
            return self.from_base(-self.minpoly.coeff(0))
        one = RatFunc.const(self.field, self.universe, 1)
        return self.elem([RatFunc.zero(self.field, self.universe), one])

    def zero_elem(self):
        return self.elem([])

    def one(self):
        return self.from_const(1)

    def reduce_list(self, coeffs) -> "AlgExtElem":
        """Reduce an arbitrary coefficient list modulo the minimal polynomial."""
        d = self.degree
        zero = RatFunc.zero(self.field, self.universe)
        cs = list(coeffs) + [zero] * max(0, d - len(coeffs))
        if len(cs) <= d:
            return self.elem(cs)
        rows = self._reduction_rows(len(cs) - d)
        out = list(cs[:d])
        for k in range(d, len(cs)):
            c = cs[k]
            if c.is_zero():
                continue
            row = rows[k - d]
            for i in range(d):
                out[i] = out[i] + c * row[i]
        return self.elem(out)

    def __eq__(self, other):
        return isinstance(other, AlgExt) and self.minpoly == other.minpoly

    __hash__ = None

    def __repr__(self):
        return f"AlgExt({self.minpoly})"


class AlgExtElem:
    """Element of E[alpha] in the power basis 1, alpha, ..., alpha^(d-1)."""

    __slots__ = ("ext", "coeffs")

    def __init__(self, ext: AlgExt, coeffs):
        self.ext = ext
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != ext.degree:
            raise UniratError("coefficient vector has wrong length")

    def _check(self, other):
        if not isinstance(other, AlgExtElem) or other.ext != self.ext:
            raise UniverseMismatchError("algebraic extension mismatch")

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def is_base(self):
        return all(c.is_zero() for c in self.coeffs[1:])

    def base_value(self) -> RatFunc:
        if not self.is_base():
            raise UniratError("element is not in the base field")
        return self.coeffs[0]

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ext.from_const(other)
        self._check(other)
        return AlgExtElem(
            self.ext, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgExtElem(self.ext, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ext.from_const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: RatFunc):
        return AlgExtElem(self.ext, tuple(a * c for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(RatFunc.const(self.ext.field, self.ext.universe, other))
        if isinstance(other, RatFunc):
            return self.scale(other)
        self._check(other)
        d = self.ext.degree
        zero = RatFunc.zero(self.ext.field, self.ext.universe)
        conv = [zero] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                conv[i + j] = conv[i + j] + a * b
        return self.ext.reduce_list(conv)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ext.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "AlgExtElem":
        """Extended Euclid against the minimal polynomial.

        A non-invertible nonzero element certifies that the modulus is
        reducible; that is surfaced as an integrity failure.
        """
        if self.is_zero():
            raise ZeroDenominatorError("inverse of zero element")
        ext = self.ext
        a = ext.minpoly
        b = self.as_epoly()
        field, uni = ext.field, ext.universe
        zero_p = EPoly.zero(field, uni, a.var)
        one_p = EPoly.from_list([RatFunc.const(field, uni, 1)], a.var)
        s_prev, s_cur = zero_p, one_p  # coefficients of b
        r_prev, r_cur = a, b
        while not r_cur.is_zero() and r_cur.degree() > 0:
            q, r = r_prev.divmod(r_cur)
            r_prev, r_cur = r_cur, r
            s_prev, s_cur = s_cur, s_prev - q * s_cur
        if r_cur.is_zero():
            raise IntegrityError(
                "non-invertible element: the extension modulus is reducible"
            )
        c = r_cur.coeff(0)
        inv_poly = s_cur * c.inv()
        return ext.reduce_list(list(inv_poly.coeffs))

    def __truediv__(self, other):
        if isinstance(other, RatFunc):
            return self.scale(other.inv())
        self._check(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ext.from_const(other)
        if not isinstance(other, AlgExtElem):
            return NotImplemented
        return self.ext == other.ext and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def as_epoly(self) -> EPoly:
        return EPoly.from_list(list(self.coeffs), self.ext.minpoly.var)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*a")
            else:
                parts.append(f"({c})*a^{i}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AlgExtElem({self})"


def algext_arith(a: AlgExtElem, b: AlgExtElem, op: str) -> AlgExtElem:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise UniratError(f"unknown op {op!r}")


def algext_inverse(a: AlgExtElem) -> AlgExtElem:
    return a.inverse()


# ---------------------------------------------------------------------------
# univariate polynomials over E[alpha] and their norms
# ---------------------------------------------------------------------------


class ExtPoly:
    """Dense univariate polynomial with AlgExtElem coefficients."""

    __slots__ = ("ext", "coeffs", "var")

    def __init__(self, ext: AlgExt, coeffs, var="x"):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.ext = ext
        self.coeffs = tuple(coeffs)
        self.var = var

    @classmethod
    def from_epoly(cls, ext: AlgExt, p: EPoly, var=None):
        return cls(ext, [ext.from_base(c) for c in p.coeffs], var or p.var)

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ext.zero_elem()

    def lc(self):
        return self.coeffs[-1]

    def monic(self):
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return ExtPoly(self.ext, [c * inv for c in self.coeffs], self.var)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return ExtPoly(
            self.ext, [self.coeff(i) + other.coeff(i) for i in range(n)], self.var
        )

    def __neg__(self):
        return ExtPoly(self.ext, [-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgExtElem):
            return ExtPoly(self.ext, [c * other for c in self.coeffs], self.var)
        if self.is_zero() or other.is_zero():
            return ExtPoly(self.ext, [], self.var)
        out = [self.ext.zero_elem() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return ExtPoly(self.ext, out, self.var)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("ExtPoly division by zero")
        inv_lc = other.lc().inverse()
        q = [self.ext.zero_elem() for _ in range(max(len(self.coeffs) - len(other.coeffs) + 1, 1))]
        r = list(self.coeffs)
        d = other.degree()
        while len(r) - 1 >= d and r:
            while r and r[-1].is_zero():
                r.pop()
            if not r or len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            c = r[-1] * inv_lc
            q[k] = q[k] + c
            for i in range(d + 1):
                r[k + i] = r[k + i] - c * other.coeffs[i]
            r.pop()
        return ExtPoly(self.ext, q, self.var), ExtPoly(self.ext, r, self.var)

    def gcd_monic(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.monic()

    def derivative(self):
        if self.degree() <= 0:
            return ExtPoly(self.ext, [], self.var)
        return ExtPoly(
            self.ext,
            [self.coeffs[i] * i for i in range(1, len(self.coeffs))],
            self.var,
        )

    def eval(self, value: AlgExtElem) -> AlgExtElem:
        acc = self.ext.zero_elem()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def shift(self, delta: AlgExtElem) -> "ExtPoly":
        """Compose with var -> var + delta."""
        out = ExtPoly(self.ext, [], self.var)
        lin = ExtPoly(self.ext, [delta, self.ext.one()], self.var)
        for c in reversed(self.coeffs):
            out = out * lin + ExtPoly(self.ext, [c], self.var)
        return out

    def __pow__(self, n):
        result = ExtPoly(self.ext, [self.ext.one()], self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, ExtPoly)
            and self.ext == other.ext
            and len(self.coeffs) == len(other.coeffs)
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    __hash__ = None

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coeff(i)
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*{self.var}")
            else:
                parts.append(f"({c})*{self.var}^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExtPoly({self})"


def norm_of(f: ExtPoly, conj_var="_w") -> EPoly:
    """Norm of f over E: resultant of the minimal polynomial against f.

    N(f) = Res_w(p_alpha(w), f(w, x)) where w replaces alpha; the result has
    degree deg(p_alpha) * deg(f) for monic f and lies in E[x].
    """
    ext = f.ext
    field = ext.field
    base = ext.universe
    if f.is_zero():
        return EPoly.zero(field, base, f.var)
    uni = base + (conj_var, f.var)

    # minimal polynomial with its main variable moved onto the conj_var slot
    p_multi, p_den = ext.minpoly.to_multipoly()  # over base + (z,)
    terms = {}
    zslot = len(base)
    for m, c in p_multi.terms.items():
        terms[m[: len(base)] + (m[zslot], 0)] = c
    P = MultiPoly(field, uni, terms, _clean=True)

    # clear a common denominator over all coefficients of all AlgExtElems
    den = MultiPoly.const(field, base, 1)
    for elem in f.coeffs:
        for c in elem.coeffs:
            g = multivar_gcd(den, c.den)
            den = exact_div(den, g) * c.den if not g.is_constant() else den * c.den
    fterms = {}
    deg_w_f = 0
    for j, elem in enumerate(f.coeffs):
        for k, c in enumerate(elem.coeffs):
            if c.is_zero():
                continue
            deg_w_f = max(deg_w_f, k)
            scaled = c.num * exact_div(den, c.den)
            for m, cc in scaled.terms.items():
                mono = m + (k, j)
                fterms[mono] = field.add(fterms.get(mono, field.zero), cc)
    F = MultiPoly(field, uni, {m: c for m, c in fterms.items() if not field.is_zero(c)}, _clean=True)

    raw = resultant(P, F, conj_var)
    # undo the clearing: Res(dP*p, dF*f) = dP^deg_w(F) * dF^deg_w(P) * Res(p, f)
    adjust = (p_den ** deg_w_f) * (den ** ext.degree)
    return _epoly_div_scalar(raw, f.var, base, adjust)


def _epoly_div_scalar(p: MultiPoly, var, base_vars, scalar: MultiPoly) -> EPoly:
    """p(..., var) / scalar(base vars) as an EPoly over base_vars."""
    field = p.field
    cs = coeffs_in(p, var)
    n = p.degree_in(var)
    if n < 0:
        return EPoly.zero(field, base_vars, var)
    den_rf = RatFunc.from_poly(scalar.with_universe(base_vars))
    out = []
    for i in range(n + 1):
        c = cs.get(i)
        if c is None:
            out.append(RatFunc.zero(field, base_vars))
        else:
            # c lives over the big universe but involves only base vars
            kept = {}
            for m, coef in c.terms.items():
                kept[m[: len(base_vars)]] = coef
            cp = MultiPoly(field, base_vars, kept, _clean=True)
            out.append(RatFunc.from_poly(cp) / den_rf)
    return EPoly(out, var)
