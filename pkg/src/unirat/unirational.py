"""Diagnostics for unirational field extensions.

Tag construction: generators f_i of a subfield of K(x) (or of QF(K[x]/I))
are tagged with fresh variables t_i via t_i*(f_i)_D - (f_i)_N, denominators
are inverted through one saturation variable, and a block order ambient>tags
reveals every relation among the f_i by elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .coeffs import PrimeField
from .errors import InseparableInputError, UniratError
from .fields import AmbientField, EPoly, FieldPresentation, RatFunc
from .groebner import GroebnerBasis, Ideal, buchberger, elimination_ideal
from .poly import (
    Block,
    GrevLex,
    Lex,
    MultiPoly,
    exact_div,
    mono_deg,
    multivar_gcd,
)

TRANSCENDENTAL = "TRANSCENDENTAL"
INFINITE = "INFINITE"
NOT_MEMBER = "NOT_MEMBER"

_SAT = "_inv"


# ---------------------------------------------------------------------------
# tag ideals
# ---------------------------------------------------------------------------


def build_tag_ideal(P: FieldPresentation, extra=()):
    """Ideal whose elimination in the tags is the relations ideal of the f_i.

    `extra` is a list of (name, RatFunc) pairs tagged alongside the
    generators (used for minimal polynomials: extra = [(z, c)]).  Universe
    layout: ambient vars, one inversion variable per distinct nonconstant
    denominator (kept low-degree on purpose), then extra names, then tags.
    """
    names = [nm for nm, _ in extra]
    for nm in names:
        if nm in P.ambient.vars or nm in P.tags:
            raise UniratError(f"name collision for {nm!r}")
    tagged = list(zip(P.tags, P.generators)) + list(extra)
    dens = []
    for _, g in tagged:
        if not g.den.is_constant() and not any(g.den == d for d in dens):
            dens.append(g.den)
    sat_names = tuple(f"{_SAT}{i+1}" for i in range(len(dens)))
    uni = tuple(P.ambient.vars) + sat_names + tuple(names) + tuple(P.tags)
    F = P.ambient.field
    gens = []

    def lift(p: MultiPoly) -> MultiPoly:
        return p.with_universe(uni)

    for name, g in tagged:
        tv = MultiPoly.var(F, uni, name)
        gens.append(tv * lift(g.den) - lift(g.num))
    for sat, den in zip(sat_names, dens):
        gens.append(MultiPoly.var(F, uni, sat) * lift(den) - 1)
    for rel in P.ambient.relations:
        gens.append(lift(rel))
    return Ideal(gens), uni


def _block_order(uni, ambient_count, extra_blocks):
    """Ambient (+saturation) block above each extra name block above tags."""
    idx = 0
    blocks = []
    inner = []
    blocks.append(tuple(range(ambient_count)))
    inner.append(GrevLex())
    idx = ambient_count
    for size in extra_blocks:
        blocks.append(tuple(range(idx, idx + size)))
        inner.append(Lex())
        idx += size
    blocks.append(tuple(range(idx, len(uni))))
    inner.append(Lex())
    return Block(blocks, inner)


@dataclass
class TagBasis:
    """Cached tag Groebner basis for a presentation."""

    presentation: FieldPresentation
    universe: tuple
    ideal: Ideal
    gb: GroebnerBasis
    ambient_block: int  # number of leading universe slots to eliminate

    @property
    def tags(self):
        return self.presentation.tags


def tag_basis(P: FieldPresentation, max_pairs=None) -> TagBasis:
    ideal, uni = build_tag_ideal(P)
    n_elim = len(uni) - len(P.tags)
    order = _block_order(uni, n_elim, [])
    gb = buchberger(ideal, order, max_pairs=max_pairs)
    return TagBasis(P, uni, ideal, gb, n_elim)


# ---------------------------------------------------------------------------
# transcendence degree
# ---------------------------------------------------------------------------


def _monomial_ideal_dim(lead_monomials, nvars):
    """Krull dimension of a monomial ideal: largest variable subset meeting

    no leading monomial's support.  Callers guarantee nonconstant monomials."""
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lead_monomials]
    if not supports:
        return nvars
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            sset = set(subset)
            if all(not s <= sset for s in supports):
                return size
    return 0


def ideal_dimension(I: Ideal, max_pairs=None) -> int:
    """Krull dimension of K[vars]/I via leading terms of a grevlex basis."""
    nonzero = [g for g in I.generators if not g.is_zero()]
    if not nonzero:
        return len(I.vars)
    if any(g.is_constant() for g in nonzero):
        return -1
    order = GrevLex()
    gb = Ideal(nonzero).groebner(order, max_pairs=max_pairs)
    lms = [g.leading_monomial(order) for g in gb if not g.is_zero()]
    if any(mono_deg(m) == 0 for m in lms):
        return -1
    return _monomial_ideal_dim(lms, len(I.vars))


def _tag_only_ideal(T: TagBasis) -> Ideal:
    keep = T.universe[T.ambient_block :]
    E = elimination_ideal(T.gb, keep)
    # restate over the tag universe alone
    gens = []
    for g in E.generators:
        if g.is_zero():
            continue
        terms = {}
        for m, c in g.terms.items():
            terms[m[T.ambient_block :]] = c
        gens.append(MultiPoly(g.field, keep, terms, _clean=True))
    if not gens:
        gens = [MultiPoly.zero(T.gb.field, keep)]
    return Ideal(gens)

def trdeg_groebner(T: TagBasis) -> int:
    """Transcendence degree of K(f_1..f_m) over K."""
    rel = _tag_only_ideal(T)
    return ideal_dimension(rel)


def ambient_trdeg(A: AmbientField) -> int:
    """Transcendence degree of the ambient field over K."""
    if A.is_rational:
        return len(A.vars)
    return ideal_dimension(Ideal(list(A.relations)))


# ---------------------------------------------------------------------------
# minimal polynomials and membership
# ---------------------------------------------------------------------------

_ELEM_VAR = "_z"


def _presentation_of(T) -> FieldPresentation:
    return T.presentation if isinstance(T, TagBasis) else T


def minimal_polynomial(c: RatFunc, T, max_pairs=None):
    """Monic minimal polynomial of c over K(f_1..f_m), or TRANSCENDENTAL.

    The returned EPoly has tag-variable coefficients; by construction it
    vanishes at (z -> c, t_i -> f_i).  `T` may be a TagBasis or a bare
    FieldPresentation.
    """
    P = _presentation_of(T)
    ideal, uni = build_tag_ideal(P, extra=[(_ELEM_VAR, c)])
    n_elim = len(uni) - len(P.tags) - 1
    order = _block_order(uni, n_elim, [1])
    gb = buchberger(ideal, order, max_pairs=max_pairs)

    z_slot = n_elim
    tag_uni = uni[n_elim + 1 :]
    candidates = []
    for g in gb:
        if any(any(m[i] for i in range(n_elim)) for m in g.terms):
            continue
        zdeg = max(m[z_slot] for m in g.terms)
        if zdeg > 0:
            candidates.append((zdeg, g))
    if not candidates:
        return TRANSCENDENTAL
    zdeg, best = min(candidates, key=lambda t: (t[0], sorted(t[1].terms)))
    # coefficients of z^k as polynomials in the tags
    by_deg = {}
    for m, coef in best.terms.items():
        k = m[z_slot]
        tail = m[n_elim + 1 :]
        by_deg.setdefault(k, {})[tail] = coef
    lead = MultiPoly(best.field, tag_uni, by_deg[zdeg], _clean=True)
    lead_rf = RatFunc.from_poly(lead)
    coeffs = []
    for k in range(zdeg + 1):
        if k in by_deg:
            p = MultiPoly(best.field, tag_uni, by_deg[k], _clean=True)
            coeffs.append(RatFunc.from_poly(p) / lead_rf)
        else:
            coeffs.append(RatFunc.zero(best.field, tag_uni))
    return EPoly(coeffs, var="z")


def verify_minimal_polynomial(mp: EPoly, c: RatFunc, P: FieldPresentation) -> bool:
    """Substitute t_i -> f_i, z -> c; must give the zero rational function."""
    bindings = dict(zip(P.tags, P.generators))
    acc = RatFunc.zero(P.ambient.field, P.ambient.vars)
    power = RatFunc.const(P.ambient.field, P.ambient.vars, 1)
    for k in range(mp.degree() + 1):
        coef = mp.coeff(k).substitute(bindings)
        acc = acc + coef * power
        power = power * c
    if P.ambient.is_rational:
        return acc.is_zero()
    rel = Ideal(list(P.ambient.relations))
    from .groebner import ideal_member

    return ideal_member(acc.num, rel)


def algebraic_degree(T: TagBasis, max_pairs=None):
    """[K(x) : K(f_1..f_m)] when algebraic, else INFINITE.

    Computed as the product of the degrees of the successive minimal
    polynomials of x_1, ..., x_n over towers K(f..), K(f.., x_1), ...
    """
    P = _presentation_of(T)
    amb = P.ambient
    if isinstance(T, TagBasis):
        sub_trdeg = trdeg_groebner(T)
    else:
        sub_trdeg = trdeg_groebner(tag_basis(P, max_pairs=max_pairs))
    if sub_trdeg != ambient_trdeg(amb):
        return INFINITE
    total = 1
    gens = list(P.generators)
    for v in amb.vars:
        xi = RatFunc.var(amb.field, amb.vars, v)
        mp = minimal_polynomial(xi, FieldPresentation(amb, gens), max_pairs)
        if mp == TRANSCENDENTAL:
            return INFINITE
        total *= mp.degree()
        gens.append(xi)
    return total


def membership_express(c: RatFunc, T, max_pairs=None):
    """Expression of c as a rational function of the tags, or NOT_MEMBER.

    The returned expression back-substitutes exactly to c.
    """
    mp = minimal_polynomial(c, T, max_pairs=max_pairs)
    if mp == TRANSCENDENTAL or mp.degree() != 1:
        return NOT_MEMBER
    expr = -mp.coeff(0)
    P = _presentation_of(T)
    bindings = dict(zip(P.tags, P.generators))
    back = expr.substitute(bindings)
    amb = P.ambient
    if amb.is_rational:
        if not back == c:
            raise UniratError("membership back-substitution failed")
    else:
        from .groebner import ideal_member

        diff = back - c
        if not ideal_member(diff.num, Ideal(list(amb.relations))):
            raise UniratError("membership back-substitution failed")
    return expr


def is_integral(c: RatFunc, T, max_pairs=None) -> bool:
    """True iff c is integral over the subalgebra K[f_1..f_m].

    Witnessed by a monic-in-z element with polynomial tag coefficients in
    the relations ideal of (c, f): detectable as a reduced-basis element
    whose leading monomial is a pure power of z.
    """
    P = _presentation_of(T)
    ideal, uni = build_tag_ideal(P, extra=[(_ELEM_VAR, c)])
    n_elim = len(uni) - len(P.tags) - 1
    order = _block_order(uni, n_elim, [1])
    gb = buchberger(ideal, order, max_pairs=max_pairs)
    z_slot = n_elim
    for g in gb:
        lm = g.leading_monomial(order)
        if lm[z_slot] > 0 and all(e == 0 for i, e in enumerate(lm) if i != z_slot):
            return True
    return False


# ---------------------------------------------------------------------------
# Jacobian rank, separating bases
# ---------------------------------------------------------------------------


@dataclass
class JacobianReport:
    matrix: list  # rows of RatFunc entries, generators then relations
    rank: int
    trdeg: int  # n - rank: trdeg of ambient over K(f..) in the separable case
    basis_vars: tuple
    pivot_columns: tuple
    separable_certified: bool


def _jacobian_rows(P: FieldPresentation):
    """d/dy_j of g_l(y) - g_l(x) at y = x, i.e. the g_l partial derivatives."""
    amb = P.ambient
    rows = []
    for g in P.generators:
        row = []
        for v in amb.vars:
            dn = g.num.derivative(v)
            dd = g.den.derivative(v)
            num = dn * g.den - g.num * dd
            row.append(RatFunc(num, g.den * g.den))
        rows.append(row)
    for rel in amb.relations:
        rows.append([RatFunc.from_poly(rel.derivative(v)) for v in amb.vars])
    return rows


class _AmbientZeroTest:
    """Zero test for ambient-field elements; modulo relations when present."""

    def __init__(self, ambient: AmbientField):
        self.ambient = ambient
        self._rel = Ideal(list(ambient.relations)) if ambient.relations else None

    def is_zero_poly(self, p: MultiPoly) -> bool:
        if p.is_zero():
            return True
        if self._rel is None:
            return False
        from .groebner import ideal_member

        return ideal_member(p, self._rel)

    def is_zero(self, r: RatFunc) -> bool:
        return self.is_zero_poly(r.num)


def _rank_and_pivots(rows, zero_test):
    """Fraction-free (Bareiss) elimination with exact zero tests.

    Rows of RatFunc entries are first cleared to polynomial rows (scaling a
    row does not change rank or pivot columns); pivot columns are scanned
    left to right, so the pivot set is the lexicographically first
    independent column subset.
    """
    if not rows:
        return 0, ()
    cleared = []
    for row in rows:
        den = None
        for e in row:
            den = e.den if den is None else _lcm_poly(den, e.den)
        cleared.append([e.num * exact_div(den, e.den) for e in row])
    m = cleared
    nrows, ncols = len(m), len(m[0])
    rank = 0
    pivots = []
    prev = None
    for col in range(ncols):
        sel = None
        for i in range(rank, nrows):
            if not zero_test.is_zero_poly(m[i][col]):
                sel = i
                break
        if sel is None:
            continue
        m[rank], m[sel] = m[sel], m[rank]
        piv = m[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(ncols):
                if j == col:
                    continue
                num = m[i][j] * piv - m[i][col] * m[rank][j]
                m[i][j] = exact_div(num, prev) if prev is not None else num
            m[i][col] = MultiPoly.zero(piv.field, piv.vars)
        prev = piv
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rank, tuple(pivots)


def _lcm_poly(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    from .poly import exact_div as _ed

    g = multivar_gcd(a, b)
    return _ed(a, g) * b if not g.is_constant() else a * b


def jacobian_trdeg(P: FieldPresentation, crosscheck=None) -> JacobianReport:
    """Rank of the evaluated Jacobian; trdeg = n - rank in the separable case.

    Over a prime field the rank can undershoot; the report is cross-checked
    against the Groebner transcendence degree (always, in characteristic p)
    and `separable_certified` records whether equality held.
    """
    amb = P.ambient
    rows = _jacobian_rows(P)
    rank, pivots = _rank_and_pivots(rows, _AmbientZeroTest(amb))
    n = len(amb.vars)
    trdeg_ext = n - rank
    if crosscheck is None:
        crosscheck = isinstance(amb.field, PrimeField)
    certified = True
    if crosscheck:
        T = tag_basis(P)
        true_sub_trdeg = trdeg_groebner(T)
        true_ext_trdeg = ambient_trdeg(amb) - true_sub_trdeg
        certified = trdeg_ext == true_ext_trdeg
    elif isinstance(amb.field, PrimeField):
        certified = False
    basis = tuple(v for i, v in enumerate(amb.vars) if i not in pivots)
    return JacobianReport(rows, rank, trdeg_ext, basis, pivots, certified)


def separating_basis(P: FieldPresentation) -> tuple:
    """{x_i : i not in J} for the lexicographically first valid column set J."""
    report = jacobian_trdeg(P)
    if not report.separable_certified:
        raise InseparableInputError(
            "Jacobian rank does not certify the transcendence degree"
        )
    if len(report.basis_vars) != report.trdeg:
        raise UniratError("no nonsingular minor of the certified size")
    return report.basis_vars


def is_valid_separating_subset(P: FieldPresentation, basis_vars) -> bool:
    """Check whether the complement columns of `basis_vars` contain a

    nonsingular minor of size n - trdeg (i.e. the subset is a valid
    transcendence basis by the Jacobian criterion)."""
    amb = P.ambient
    report = jacobian_trdeg(P)
    keep = [i for i, v in enumerate(amb.vars) if v not in set(basis_vars)]
    if len(amb.vars) - len(keep) != report.trdeg:
        return False
    rows = [[row[i] for i in keep] for row in report.matrix]
    rank, _ = _rank_and_pivots(rows, _AmbientZeroTest(amb))
    return rank == len(keep)


# ---------------------------------------------------------------------------
# uni-multivariate decomposition
# ---------------------------------------------------------------------------


def uni_multivariate_decompose(polys, max_pairs=None):
    """Common inner polynomial: f with p_i = q_i(f) for all i, or None.

    Decomposability through a single inner polynomial is equivalent to the
    span of generators having transcendence degree 1, read off the Jacobian
    rank in characteristic zero.  f is recovered from the gcd over i of
    p_i(u) - p_i(x) (a polynomial of the shape f(u) - f(x)), and each q_i by
    exact linear solving; the decomposition is verified by substitution.
    """
    polys = list(polys)
    if not polys:
        raise UniratError("no polynomials given")
    field = polys[0].field
    if isinstance(field, PrimeField):
        raise InseparableInputError("characteristic p decomposition is unsupported")
    if all(p.is_constant() for p in polys):
        raise UniratError("all inputs constant")
    vars = polys[0].vars

    amb = AmbientField(field, vars)
    gens = [RatFunc.from_poly(p) for p in polys]
    P = FieldPresentation(amb, gens)
    rows = _jacobian_rows(P)
    rank, _ = _rank_and_pivots(rows, _AmbientZeroTest(amb))
    if rank != 1:
        return None

    # gcd over i of p_i(u) - p_i(x) in the doubled universe
    u_names = tuple(f"_u{i}" for i in range(len(vars)))
    big = u_names + vars
    g = MultiPoly.zero(field, big)
    for p in polys:
        if p.is_constant():
            continue
        pu = p.with_universe(big).subs_poly(
            {v: MultiPoly.var(field, big, u) for v, u in zip(vars, u_names)}
        )
        px = p.with_universe(big)
        g = multivar_gcd(g, pu - px)
    # g has the shape f(u) - f(x); x -> 0 recovers f up to an additive constant
    inner = _collapse_shift(g, u_names, vars, field)
    qs = []
    for p in polys:
        q = _solve_outer(p, inner)
        if q is None:
            return None
        qs.append(_coeffs_to_univar(q, field))
    return inner, qs


def _coeffs_to_univar(coeffs, field) -> MultiPoly:
    """Coefficient list (constant first) as a polynomial in the variable t."""
    return MultiPoly(field, ("t",), {(i,): c for i, c in enumerate(coeffs)})


def _collapse_shift(g: MultiPoly, u_names, vars, field):
    """g = f(u) - f(x): substitute x -> 0, rename u back to x."""
    idx = {v: i for i, v in enumerate(g.vars)}
    x_slots = [idx[v] for v in vars]
    u_slots = [idx[u] for u in u_names]
    terms = {}
    for m, c in g.terms.items():
        if any(m[i] for i in x_slots):
            continue
        mono = tuple(m[i] for i in u_slots)
        terms[mono] = field.add(terms.get(mono, field.zero), c)
    f = MultiPoly(field, vars, {m: c for m, c in terms.items() if not field.is_zero(c)})
    # normalize the additive constant away
    const = {m: c for m, c in f.terms.items() if mono_deg(m) == 0}
    if const:
        f = f - MultiPoly(field, vars, const, _clean=True)
    return f


def _solve_outer(p: MultiPoly, f: MultiPoly):
    """q with p = q(f), by exact linear solving on 1, f, f^2, ..."""
    if f.is_constant():
        return None
    d_f = f.total_degree()
    d_p = p.total_degree()
    if d_p % d_f and not p.is_constant():
        # degree obstruction can be spurious for non-homogeneous f; try anyway
        pass
    max_k = d_p // d_f if d_f else 0
    powers = [MultiPoly.const(p.field, p.vars, 1)]
    for _ in range(max_k):
        powers.append(powers[-1] * f)
    # solve sum c_k f^k = p coefficientwise
    monomials = set(p.terms)
    for pw in powers:
        monomials.update(pw.terms)
    monomials = sorted(monomials)
    rows = []
    rhs = []
    F = p.field
    for m in monomials:
        rows.append([pw.terms.get(m, F.zero) for pw in powers])
        rhs.append(p.terms.get(m, F.zero))
    sol = _solve_linear(rows, rhs, F)
    if sol is None:
        return None
    # verify exactly
    acc = MultiPoly.zero(p.field, p.vars)
    for c, pw in zip(sol, powers):
        acc = acc + pw.scale(c)
    if not acc == p:
        return None
    return sol  # coefficients of q, constant first


def _solve_linear(rows, rhs, F):
    """Solve an overdetermined exact linear system; None if inconsistent."""
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    ncols = len(rows[0])
    rank = 0
    pivots = []
    for col in range(ncols):
        sel = None
        for i in range(rank, len(m)):
            if not F.is_zero(m[i][col]):
                sel = i
                break
        if sel is None:
            continue
        m[rank], m[sel] = m[sel], m[rank]
        piv = m[rank][col]
        m[rank] = [F.div(v, piv) for v in m[rank]]
        for i in range(len(m)):
            if i != rank and not F.is_zero(m[i][col]):
                c = m[i][col]
                m[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(m)):
        if not F.is_zero(m[i][-1]):
            return None
    sol = [F.zero] * ncols
    for r, col in enumerate(pivots):
        sol[col] = m[r][-1]
    return sol


# ---------------------------------------------------------------------------
# infinite families of intermediate fields
# ---------------------------------------------------------------------------


@dataclass
class InfiniteFamilyWitness:
    variable: str
    description: str


def infinite_family_witness(P: FieldPresentation, max_pairs=None):
    """A variable transcendental over K(f..) and its power family, or None.

    When trdeg(K(f..)/K) < trdeg of the ambient field, the fields
    K(f_1..f_m, x_i^k) for k in N form infinitely many distinct
    intermediate fields.
    """
    T = tag_basis(P, max_pairs=max_pairs)
    if trdeg_groebner(T) == ambient_trdeg(P.ambient):
        return None
    amb = P.ambient
    for v in amb.vars:
        xi = RatFunc.var(amb.field, amb.vars, v)
        if minimal_polynomial(xi, T, max_pairs=max_pairs) == TRANSCENDENTAL:
            gens = ", ".join(f"t{i+1}" for i in range(len(P.generators)))
            return InfiniteFamilyWitness(
                v, f"K({gens}, {v}^k) for k = 1, 2, 3, ..."
            )
    raise UniratError("trdeg deficit without a transcendental coordinate")
