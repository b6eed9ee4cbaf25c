"""Intermediate fields of an algebraic separable unirational extension.

Pipeline: rewrite K(f_1..f_m) inside K(x) through a separating basis into
E = K(t_1..t_n) with E[beta] below E[alpha], factor the minimal polynomial
over E[alpha], enumerate decomposition-block candidates from the factors,
convert blocks to fields through elementary symmetric functions, decide
inclusions by linear algebra, and lift everything back to the ambient
coordinates.  Normality via monodromy (one variable) or splitting, and
transcendence-dimension reduction by power substitutions, live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations

from .coeffs import QQ, PrimeField
from .errors import (
    BudgetExceededError,
    IntegrityError,
    NotAlgebraicError,
    SolveError,
    UniratError,
)
from .factor import Factorization, factor_over_extension, factor_univar_rationals
from .fields import (
    AlgExt,
    AlgExtElem,
    AmbientField,
    EPoly,
    ExtPoly,
    FieldPresentation,
    RatFunc,
)
from .groebner import Ideal, buchberger
from .poly import Lex, MultiPoly, mono_deg
from .unirational import (
    TRANSCENDENTAL,
    _jacobian_rows,
    _rank_and_pivots,
    _AmbientZeroTest,
    algebraic_degree,
    ambient_trdeg,
    membership_express,
    minimal_polynomial,
    tag_basis,
    trdeg_groebner,
)

_COEFF_SEQUENCE = (1, -1, 2, -2, 3, -3, 4, -4, 5, -5)
_PRIMITIVE_BUDGET = 400


# ---------------------------------------------------------------------------
# linear algebra over E (RatFunc entries)
# ---------------------------------------------------------------------------


def _rf_solve(rows, rhs):
    """Solve an exact linear system over a rational function field.

    rows: list of lists of RatFunc; rhs: list of RatFunc.  Returns a
    solution list or None when inconsistent; free variables are set to 0.
    """
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    if not m:
        return []
    ncols = len(rows[0])
    rank = 0
    pivots = []
    for col in range(ncols):
        sel = None
        for i in range(rank, len(m)):
            if not m[i][col].is_zero():
                sel = i
                break
        if sel is None:
            continue
        m[rank], m[sel] = m[sel], m[rank]
        piv = m[rank][col]
        m[rank] = [e / piv for e in m[rank]]
        for i in range(len(m)):
            if i != rank and not m[i][col].is_zero():
                c = m[i][col]
                m[i] = [a - c * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(m)):
        if not m[i][-1].is_zero():
            return None
    zero = None
    for row in m:
        zero = RatFunc.zero(row[0].field, row[0].vars)
        break
    sol = [zero] * ncols
    for r, col in enumerate(pivots):
        sol[col] = m[r][-1]
    return sol


class _Span:
    """Row-reduced E-subspace of E[alpha], grown incrementally."""

    def __init__(self, ext: AlgExt):
        self.ext = ext
        self.rows = []  # reduced vectors (lists of RatFunc), pivot order

    def reduce(self, vec):
        vec = list(vec)
        for row, piv in self.rows:
            if not vec[piv].is_zero():
                c = vec[piv]
                vec = [a - c * b for a, b in zip(vec, row)]
        return vec

    def add(self, vec) -> bool:
        """Insert if independent; returns True when the span grew."""
        vec = self.reduce(vec)
        piv = None
        for i, c in enumerate(vec):
            if not c.is_zero():
                piv = i
                break
        if piv is None:
            return False
        inv = vec[piv].inv()
        vec = [c * inv for c in vec]
        self.rows.append((vec, piv))
        return True

    def contains(self, vec) -> bool:
        return all(c.is_zero() for c in self.reduce(list(vec)))

    @property
    def dim(self):
        return len(self.rows)


def minpoly_of_element(gamma: AlgExtElem) -> EPoly:
    """Monic minimal polynomial of gamma over E by linear dependency."""
    ext = gamma.ext
    span = _Span(ext)
    powers = [ext.one()]
    span.add(powers[0].coeffs)
    while True:
        nxt = powers[-1] * gamma
        if not span.add(nxt.coeffs):
            powers.append(nxt)
            break
        powers.append(nxt)
    k = len(powers) - 1  # gamma^k depends on lower powers
    rows = [[powers[j].coeffs[i] for j in range(k)] for i in range(ext.degree)]
    rhs = list(powers[k].coeffs)
    sol = _rf_solve(rows, rhs)
    if sol is None:
        raise IntegrityError("power dependency disappeared; inconsistent extension")
    one = RatFunc.const(ext.field, ext.universe, 1)
    coeffs = [-c for c in sol] + [one]
    return EPoly(coeffs, var=ext.minpoly.var)


def generated_field_dimension(elems, ext: AlgExt) -> int:
    """[E(elems) : E] via multiplicative closure of the spanned subspace."""
    span = _Span(ext)
    span.add(ext.one().coeffs)
    basis = [ext.one()]
    frontier = list(basis)
    while frontier:
        new_frontier = []
        for v in frontier:
            for g in elems:
                w = v * g
                if span.add(w.coeffs):
                    basis.append(w)
                    new_frontier.append(w)
        frontier = new_frontier
    return span.dim


def primitive_element_over_E(elems, ext: AlgExt):
    """(gamma, p_gamma) with E(gamma) = E(elems); small-integer combinations.

    Certified by degree equality against the generated field dimension.
    """
    elems = [e for e in elems if not e.is_base()] or elems[:1]
    target = generated_field_dimension(elems, ext)
    attempts = 0
    for e in elems:
        attempts += 1
        mp = minpoly_of_element(e)
        if mp.degree() == target:
            return e, mp
    # combinations e_0 + c_1 e_1 + ... with small integer coefficients
    from itertools import product

    k = len(elems)
    for coeffs in product(_COEFF_SEQUENCE, repeat=k - 1):
        attempts += 1
        if attempts > _PRIMITIVE_BUDGET:
            raise BudgetExceededError("primitive-element search budget exceeded")
        cand = elems[0]
        for c, e in zip(coeffs, elems[1:]):
            cand = cand + e.scale(RatFunc.const(ext.field, ext.universe, c))
        mp = minpoly_of_element(cand)
        if mp.degree() == target:
            return cand, mp
    raise BudgetExceededError("primitive-element search budget exceeded")


# ---------------------------------------------------------------------------
# the extension diagram
# ---------------------------------------------------------------------------


@dataclass
class ExtensionDiagram:
    presentation: FieldPresentation
    sep_basis: list  # RatFunc, the chosen separating transcendence basis
    tags: tuple  # names of E = K(t_1..t_n)
    primitive_ambient: RatFunc  # f with K(x) = K(sep_basis)(f)
    ext: AlgExt  # E[alpha] = E[z]/(p_f)
    beta: AlgExtElem  # primitive element of K(f_1..f_m) over K(sep_basis)
    beta_minpoly: EPoly
    _factorization: Factorization = dc_field(default=None, repr=False)

    @property
    def degree_top(self):
        return self.ext.degree

    @property
    def degree_bottom(self):
        return self.beta_minpoly.degree()

    def factorization(self, max_subsets=None) -> Factorization:
        if self._factorization is None:
            p_alpha = ExtPoly.from_epoly(self.ext, self.ext.minpoly, var="x")
            self._factorization = factor_over_extension(p_alpha, max_subsets)
        return self._factorization

    def basis_presentation(self) -> FieldPresentation:
        return FieldPresentation(self.presentation.ambient, self.sep_basis)

    def ambient_to_ext(self, h: RatFunc) -> AlgExtElem:
        """Express an ambient element inside E[alpha]."""
        amb = self.presentation.ambient
        gens = list(self.sep_basis) + [self.primitive_ambient]
        Q = FieldPresentation(amb, gens)
        expr = membership_express(h, Q)
        if isinstance(expr, str):
            raise IntegrityError("ambient element escaped K(basis)(f)")
        return self._tags_to_ext(expr)

    def _tags_to_ext(self, expr: RatFunc) -> AlgExtElem:
        """Evaluate a rational function of (t_1..t_n, s) at (t_i, alpha)."""
        ext = self.ext
        n = len(self.tags)

        def poly_to_elem(p: MultiPoly) -> AlgExtElem:
            acc = ext.zero_elem()
            alpha_pows = {0: ext.one()}
            for m, c in p.terms.items():
                e_basis = m[:n]
                e_alpha = m[n]
                terms = {e_basis: c}
                coeff = RatFunc.from_poly(
                    MultiPoly(p.field, ext.universe, terms, _clean=True)
                )
                if e_alpha not in alpha_pows:
                    alpha_pows[e_alpha] = ext.alpha() ** e_alpha
                acc = acc + alpha_pows[e_alpha].scale(coeff)
            return acc

        num = poly_to_elem(expr.num)
        den = poly_to_elem(expr.den)
        return num * den.inverse()

    def ext_to_ambient(self, elem: AlgExtElem) -> RatFunc:
        """Inverse substitution t_i -> basis element, alpha -> f."""
        amb = self.presentation.ambient
        bindings = dict(zip(self.tags, self.sep_basis))
        acc = RatFunc.zero(amb.field, amb.vars)
        power = RatFunc.const(amb.field, amb.vars, 1)
        for c in elem.coeffs:
            acc = acc + c.substitute(bindings) * power
            power = power * self.primitive_ambient
        return acc


def rewrite_presentation(P: FieldPresentation, max_pairs=None) -> ExtensionDiagram:
    """Rewrite K(x)/K(f_1..f_m) through a separating basis into E[alpha].

    Requires the extension algebraic (NOT_ALGEBRAIC error otherwise) and a
    rational ambient field of characteristic zero.
    """
    amb = P.ambient
    if isinstance(amb.field, PrimeField):
        raise UniratError("the subfield pipeline requires characteristic zero")
    if not amb.is_rational:
        raise UniratError("the subfield pipeline requires a rational ambient field")
    n = len(amb.vars)
    T = tag_basis(P, max_pairs=max_pairs)
    if trdeg_groebner(T) != n:
        raise NotAlgebraicError(
            "K(x) is transcendental over K(f_1..f_m); no finite subfield lattice"
        )

    # separating basis from the generators, greedily by Jacobian rank
    basis = []
    zero_test = _AmbientZeroTest(amb)
    for g in P.generators:
        cand = basis + [g]
        rows = _jacobian_rows(FieldPresentation(amb, cand))
        rank, _ = _rank_and_pivots(rows, zero_test)
        if rank == len(cand):
            basis.append(g)
        if len(basis) == n:
            break
    if len(basis) != n:
        raise NotAlgebraicError("generators do not contain a full transcendence basis")

    basis_pres = FieldPresentation(amb, basis)
    degree = algebraic_degree(tag_basis(basis_pres, max_pairs=max_pairs))
    if degree == "INFINITE":
        raise NotAlgebraicError("ambient field not algebraic over the chosen basis")

    f_primitive, p_f = _ambient_primitive_element(basis_pres, degree, max_pairs)
    tags = _fresh_tags(amb.vars, n)
    p_alpha = _retag_epoly(p_f, basis_pres.tags, tags)
    ext = AlgExt(p_alpha)

    # beta: primitive element of K(f_1..f_m) over K(basis)
    rest = [g for g in P.generators if not any(g == b for b in basis)]
    diagram = ExtensionDiagram(
        P, basis, tags, f_primitive, ext, ext.zero_elem(),
        EPoly([RatFunc.zero(ext.field, ext.universe),
               RatFunc.const(ext.field, ext.universe, 1)], var=p_alpha.var),
    )
    if rest:
        elems = [diagram.ambient_to_ext(g) for g in rest]
        beta, p_beta = primitive_element_over_E(elems, ext)
        diagram.beta = beta
        diagram.beta_minpoly = p_beta
    return diagram


def _fresh_tags(avoid, n):
    for prefix in ("t", "s", "w"):
        names = tuple(f"{prefix}{i+1}" for i in range(n))
        if not (set(names) & set(avoid)):
            return names
    raise UniratError("cannot allocate tag names")


def _retag_epoly(p: EPoly, old_tags, new_tags) -> EPoly:
    if tuple(old_tags) == tuple(new_tags):
        return p
    out = []
    for c in p.coeffs:
        num = _rename_vars(c.num, old_tags, new_tags)
        den = _rename_vars(c.den, old_tags, new_tags)
        out.append(RatFunc(num, den, _normalized=True))
    return EPoly(out, p.var)


def _rename_vars(p: MultiPoly, old, new):
    mapping = dict(zip(old, new))
    vars = tuple(mapping.get(v, v) for v in p.vars)
    return MultiPoly(p.field, vars, dict(p.terms), _clean=True)


def _ambient_primitive_element(basis_pres: FieldPresentation, degree, max_pairs):
    """A single generator of K(x) over K(basis), certified by degree."""
    amb = basis_pres.ambient
    candidates = []
    for v in amb.vars:
        candidates.append(RatFunc.var(amb.field, amb.vars, v))
    attempts = 0
    for cand in candidates:
        attempts += 1
        mp = minimal_polynomial(cand, basis_pres, max_pairs=max_pairs)
        if mp != TRANSCENDENTAL and mp.degree() == degree:
            return cand, mp
    from itertools import product

    n = len(amb.vars)
    for coeffs in product(_COEFF_SEQUENCE, repeat=n - 1):
        attempts += 1
        if attempts > _PRIMITIVE_BUDGET:
            break
        cand = candidates[0]
        for c, extra in zip(coeffs, candidates[1:]):
            cand = cand + extra * RatFunc.const(amb.field, amb.vars, c)
        mp = minimal_polynomial(cand, basis_pres, max_pairs=max_pairs)
        if mp != TRANSCENDENTAL and mp.degree() == degree:
            return cand, mp
    raise BudgetExceededError("primitive-element search budget exceeded")


# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------


@dataclass
class Block:
    """A decomposition-block candidate containing alpha.

    `roots` holds the explicitly known roots (from linear factors); parts of
    the product that do not split stay as `unresolved` factors.  The product
    polynomial is what block_to_field consumes.
    """

    product: ExtPoly
    roots: list
    unresolved: list

    @property
    def size(self):
        return self.product.degree()


def _linear_roots(F: Factorization, ext: AlgExt):
    roots = []
    for g, _m in F.factors:
        if g.degree() == 1:
            roots.append(-(g.coeff(0) * g.coeff(1).inverse()))
    return roots


def _compose_roots(r: AlgExtElem, s: AlgExtElem) -> AlgExtElem:
    """Image of s under the embedding alpha -> r."""
    return s.as_epoly().eval(r)


def linear_factor_blocks(F: Factorization, ext: AlgExt):
    """Blocks from root subsets closed under composition.

    Needs at least two linear factors; every returned block contains alpha
    and its size divides the extension degree.
    """
    roots = _linear_roots(F, ext)
    if len(roots) < 2:
        raise UniratError("need at least two roots inside the extension")
    alpha = ext.alpha()
    others = [r for r in roots if not r == alpha]
    blocks = {}
    for k in range(len(others) + 1):
        for subset in combinations(range(len(others)), k):
            closure = [alpha] + [others[i] for i in subset]
            changed = True
            while changed:
                changed = False
                for a in list(closure):
                    for b in list(closure):
                        c = _compose_roots(a, b)
                        if not any(c == e for e in closure):
                            closure.append(c)
                            changed = True
            if ext.degree % len(closure):
                continue
            key = tuple(sorted(str(e) for e in closure))
            if key not in blocks:
                product = ExtPoly(ext, [ext.one()], var="x")
                for r in closure:
                    product = product * ExtPoly(ext, [-r, ext.one()], var="x")
                blocks[key] = Block(product, closure, [])
    return [blocks[k] for k in sorted(blocks)]


def factor_combination_blocks(F: Factorization, ext: AlgExt):
    """Block candidates (z - alpha) * (subset of non-linear factors).

    Applies when the linear part is exactly (z - alpha); subsets whose total
    degree does not divide the extension degree are pruned.
    """
    alpha = ext.alpha()
    roots = _linear_roots(F, ext)
    if len(roots) != 1:
        raise UniratError("expected exactly one root inside the extension")
    nonlinear = [g for g, _m in F.factors if g.degree() > 1]
    linear = ExtPoly(ext, [-alpha, ext.one()], var="x")
    out = []
    for k in range(len(nonlinear) + 1):
        for subset in combinations(range(len(nonlinear)), k):
            deg = 1 + sum(nonlinear[i].degree() for i in subset)
            if ext.degree % deg:
                continue
            product = linear
            for i in subset:
                product = product * nonlinear[i]
            out.append(Block(product, [alpha], [nonlinear[i] for i in subset]))
    return out


def _all_block_candidates(F: Factorization, ext: AlgExt):
    """Every candidate block: (z - alpha) times a subset of other factors.

    Subsumes both special cases; block validity is certified afterwards by
    the degree equality [E(coeffs) : E] * deg(h) = deg(p_alpha).
    """
    alpha = ext.alpha()
    linear = None
    others = []
    for g, _m in F.factors:
        if g.degree() == 1 and linear is None:
            root = -(g.coeff(0) * g.coeff(1).inverse())
            if root == alpha:
                linear = g.monic()
                continue
        others.append(g)
    if linear is None:
        raise IntegrityError("alpha is not a root of its own minimal polynomial")
    out = []
    for k in range(len(others) + 1):
        for subset in combinations(range(len(others)), k):
            deg = 1 + sum(others[i].degree() for i in subset)
            if ext.degree % deg:
                continue
            product = linear
            roots = [alpha]
            unresolved = []
            for i in subset:
                product = product * others[i]
                if others[i].degree() == 1:
                    roots.append(-(others[i].coeff(0) * others[i].coeff(1).inverse()))
                else:
                    unresolved.append(others[i])
            out.append(Block(product, roots, unresolved))
    return out


# ---------------------------------------------------------------------------
# fields from blocks
# ---------------------------------------------------------------------------


@dataclass
class IntermediateField:
    gamma: AlgExtElem
    minpoly: EPoly
    degree_over_E: int
    block_size: int
    trivial: str  # "top", "base", or ""
    generators_ambient: list = dc_field(default_factory=list)
    label: str = ""

    @property
    def degree(self):
        return self.degree_over_E


def block_to_field(block: Block, ext: AlgExt) -> IntermediateField:
    """Field generated over E by the coefficients of the block product.

    Coefficients are the elementary symmetric functions of the block roots;
    the result is reduced to one primitive element over E.  Top and base
    candidates are returned flagged as trivial rather than rejected.
    """
    h = block.product
    coeffs = [h.coeff(i) for i in range(h.degree())]  # monic: drop the lead
    nontrivial = [c for c in coeffs if not c.is_base()]
    if not nontrivial:
        zero = ext.zero_elem()
        one = RatFunc.const(ext.field, ext.universe, 1)
        mp = EPoly([RatFunc.zero(ext.field, ext.universe), one], ext.minpoly.var)
        return IntermediateField(zero, mp, 1, block.size, trivial="base")
    gamma, p_gamma = primitive_element_over_E(nontrivial, ext)
    trivial = "top" if p_gamma.degree() == ext.degree else ""
    return IntermediateField(gamma, p_gamma, p_gamma.degree(), block.size, trivial)


def subfield_inclusion(beta: AlgExtElem, beta_minpoly: EPoly,
                       gamma: AlgExtElem, gamma_minpoly: EPoly):
    """Decide E(beta) <= E(gamma) inside E[alpha]; witness coefficients too.

    Solves beta = sum a_j gamma^j as deg(p_alpha) linear equations over E in
    deg(p_gamma) unknowns; the witness is verified by substitution.
    """
    ext = beta.ext
    d = gamma_minpoly.degree()
    powers = [ext.one()]
    for _ in range(d - 1):
        powers.append(powers[-1] * gamma)
    rows = [[powers[j].coeffs[i] for j in range(d)] for i in range(ext.degree)]
    rhs = list(beta.coeffs)
    sol = _rf_solve(rows, rhs)
    if sol is None:
        return False, None
    acc = ext.zero_elem()
    for a, p in zip(sol, powers):
        acc = acc + p.scale(a)
    if not acc == beta:
        raise IntegrityError("inclusion witness failed to verify")
    return True, sol


# ---------------------------------------------------------------------------
# the lattice
# ---------------------------------------------------------------------------


@dataclass
class FieldLattice:
    diagram: ExtensionDiagram
    fields: list  # IntermediateField, bottom first, top last
    hasse_edges: list  # (i, j): fields[i] strictly below fields[j], covering

    @property
    def proper_fields(self):
        return [f for f in self.fields if not f.trivial]

    def dot(self) -> str:
        lines = ["digraph lattice {"]
        for i, f in enumerate(self.fields):
            label = f.label or f"F{i} (degree {f.degree_over_E})"
            lines.append(f'  n{i} [label="{label}"];')
        for i, j in self.hasse_edges:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines)


def intermediate_fields(P: FieldPresentation, max_pairs=None, max_subsets=None) -> FieldLattice:
    """All intermediate fields of K(x)/K(f_1..f_m), with Hasse edges.

    Precondition: the extension is algebraic and separable.  Fields carry
    trdeg + 1 ambient generators after lifting.
    """
    diagram = rewrite_presentation(P, max_pairs=max_pairs)
    ext = diagram.ext
    l = ext.degree
    fac = diagram.factorization(max_subsets)
    d_beta = diagram.degree_bottom

    candidates = _all_block_candidates(fac, ext)
    found = []
    for block in candidates:
        fld = block_to_field(block, ext)
        if fld.degree_over_E * block.size != l:
            continue  # not a genuine decomposition block
        # the field must sit between E[beta] and E[alpha]
        if fld.degree_over_E % d_beta:
            continue
        if not fld.trivial:
            ok, _ = subfield_inclusion(
                diagram.beta, diagram.beta_minpoly, fld.gamma, fld.minpoly
            )
            if not ok:
                continue
        elif fld.trivial == "base" and d_beta != 1:
            continue  # E itself is below the bottom field
        if any(_same_field(fld, other) for other in found):
            continue
        found.append(fld)

    # ensure explicit bottom and top entries
    if not any(f.degree_over_E == d_beta for f in found):
        found.append(
            IntermediateField(
                diagram.beta, diagram.beta_minpoly, d_beta, l // d_beta, trivial="base"
            )
        )
    for f in found:
        if f.degree_over_E == d_beta:
            f.trivial = "base"
        elif f.degree_over_E == l:
            f.trivial = "top"
    found.sort(key=lambda f: (f.degree_over_E, str(f.gamma)))

    for i, f in enumerate(found):
        f.generators_ambient = lift_to_ambient(f, diagram)
        if f.trivial == "base":
            f.label = "K(f_1..f_m)"
        elif f.trivial == "top":
            f.label = "K(x)"
        else:
            f.label = f"F{i}"

    edges = _hasse_edges(found)
    return FieldLattice(diagram, found, edges)


def _same_field(a: IntermediateField, b: IntermediateField) -> bool:
    if a.degree_over_E != b.degree_over_E:
        return False
    ok, _ = subfield_inclusion(a.gamma, a.minpoly, b.gamma, b.minpoly)
    return ok


def _hasse_edges(fields):
    n = len(fields)
    below = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j or fields[i].degree_over_E >= fields[j].degree_over_E:
                continue
            if fields[j].degree_over_E % fields[i].degree_over_E:
                continue
            ok, _ = subfield_inclusion(
                fields[i].gamma, fields[i].minpoly, fields[j].gamma, fields[j].minpoly
            )
            below[i][j] = ok
    edges = []
    for i in range(n):
        for j in range(n):
            if not below[i][j]:
                continue
            if any(below[i][k] and below[k][j] for k in range(n)):
                continue
            edges.append((i, j))
    return edges


def lift_to_ambient(fld: IntermediateField, D: ExtensionDiagram):
    """Generators of the field in ambient coordinates: the separating basis

    plus the lifted primitive element (trdeg + 1 generators in total)."""
    lifted = D.ext_to_ambient(fld.gamma)
    gens = list(D.sep_basis) + [lifted]
    if fld.trivial != "top" and not fld.trivial:
        # fields above the bottom must contain every original generator
        amb = D.presentation.ambient
        Q = FieldPresentation(amb, gens)
        for f_j in D.presentation.generators:
            expr = membership_express(f_j, Q)
            if isinstance(expr, str):
                raise IntegrityError(
                    "lifted field lost an original generator; inconsistent lattice"
                )
    return gens


# ---------------------------------------------------------------------------
# monodromy / normality (one variable)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mobius:
    """(a*x + b) / (c*x + d) with a fixed normalization (c = 0, d = 1 or c = 1)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def as_ratfunc(self, field, vars, var) -> RatFunc:
        x = MultiPoly.var(field, vars, var)
        num = x.scale(self.a) + MultiPoly.const(field, vars, self.b)
        den = x.scale(self.c) + MultiPoly.const(field, vars, self.d)
        return RatFunc(num, den)

    def __str__(self):
        if self.c == 0:
            if self.a == 1 and self.b == 0:
                return "x"
            return f"({self.a}*x + {self.b})"
        return f"({self.a}*x + {self.b})/({self.c}*x + {self.d})"


def monodromy_fix_group(f: RatFunc, max_pairs=None):
    """All Moebius maps u with f(u(x)) = f(x), for one-variable f over Q.

    Found by clearing f(u) = f to a polynomial identity in x, eliminating
    the chart unknowns, and extracting rational roots; a positive-dimensional
    solution set raises SolveError.
    """
    if len(f.vars) != 1:
        raise UniratError("monodromy groups require a single variable")
    if isinstance(f.field, PrimeField):
        raise UniratError("monodromy computation requires characteristic zero")
    if f.is_constant():
        raise UniratError("f must be nonconstant")
    var = f.vars[0]
    deg = max(f.num.degree_in(var), f.den.degree_in(var))
    out = []

    # chart 1: u = a*x + b (c = 0, d = 1), a != 0
    sols = _solve_mobius_chart(f, var, affine=True, max_pairs=max_pairs)
    for a, b in sols:
        if a != 0:
            out.append(Mobius(a, b, Fraction(0), Fraction(1)))
    # chart 2: u = (a*x + b)/(x + d), determinant a*d - b != 0
    sols = _solve_mobius_chart(f, var, affine=False, max_pairs=max_pairs)
    for a, b, d in sols:
        if a * d - b != 0:
            out.append(Mobius(a, b, Fraction(1), d))

    verified = []
    for u in out:
        uf = u.as_ratfunc(f.field, f.vars, var)
        if _compose(f, uf, var) == f:
            verified.append(u)
    verified.sort(key=lambda u: (u.c, u.a, u.b, u.d))
    if not any(u.a == 1 and u.b == 0 and u.c == 0 and u.d == 1 for u in verified):
        raise IntegrityError("identity map missing from the fixing group")
    return verified


def _compose(f: RatFunc, u: RatFunc, var) -> RatFunc:
    return f.substitute({var: u})


def _solve_mobius_chart(f: RatFunc, var, affine, max_pairs):
    field = f.field
    unknowns = ("A", "B") if affine else ("A", "B", "D")
    uni = unknowns + (var,)

    def lift(p):
        return p.with_universe(uni)

    A = MultiPoly.var(field, uni, "A")
    B = MultiPoly.var(field, uni, "B")
    X = MultiPoly.var(field, uni, var)
    if affine:
        u_num, u_den = A * X + B, MultiPoly.const(field, uni, 1)
    else:
        D = MultiPoly.var(field, uni, "D")
        u_num, u_den = A * X + B, X + D

    deg = max(f.num.degree_in(var), f.den.degree_in(var))
    fn_u = _compose_cleared(lift(f.num), var, u_num, u_den, deg)
    fd_u = _compose_cleared(lift(f.den), var, u_num, u_den, deg)
    condition = fn_u * lift(f.den) - fd_u * lift(f.num)

    # coefficients with respect to x must all vanish
    from .poly import coeffs_in

    eqs = [c for c in coeffs_in(condition, var).values() if not c.is_zero()]
    if not eqs:
        raise SolveError("every Moebius map fixes f; the solution set is positive-dimensional")
    # restate over the unknowns only
    gens = []
    for e in eqs:
        terms = {}
        for m, c in e.terms.items():
            terms[m[: len(unknowns)]] = c
        gens.append(MultiPoly(field, unknowns, terms, _clean=True))
    return _solve_zero_dimensional(Ideal(gens), unknowns, max_pairs)


def _compose_cleared(p: MultiPoly, var, u_num, u_den, deg):
    """p with var -> u_num/u_den, multiplied through by u_den^deg."""
    uni = u_num.vars
    from .poly import coeffs_in

    cs = coeffs_in(p, var)
    acc = MultiPoly.zero(p.field, uni)
    for e, c in cs.items():
        term = c * u_num**e * u_den ** (deg - e)
        acc = acc + term
    return acc


def _solve_zero_dimensional(I: Ideal, unknowns, max_pairs=None):
    """All rational solutions of a zero-dimensional system, by lex

    triangularization and recursive rational-root extraction."""
    gb = buchberger(I, Lex(), max_pairs=max_pairs)
    if any(g.is_constant() and not g.is_zero() for g in gb):
        return []
    return _back_substitute(list(gb.basis), list(unknowns), {}, I.field)


def _back_substitute(basis, unknowns, fixed, field):
    if not unknowns:
        return [()]
    last = unknowns[-1]
    # find a univariate polynomial in the last unknown
    uni_poly = None
    for g in basis:
        present = g.variables_present()
        if present and all(v == last for v in present):
            uni_poly = g
            break
    if uni_poly is None:
        raise SolveError(
            f"solution variety is positive-dimensional in {last}; cannot enumerate"
        )
    roots = _rational_roots(uni_poly, last)
    out = []
    for r in roots:
        reduced = []
        for g in basis:
            val = g.subs_poly({last: MultiPoly.const(field, g.vars, r)})
            if not val.is_zero():
                reduced.append(val)
        if not unknowns[:-1]:
            out.append((r,))
            continue
        for partial in _back_substitute(reduced, unknowns[:-1], fixed, field):
            out.append(partial + (r,))
    return out


def _rational_roots(p: MultiPoly, var):
    fac = factor_univar_rationals(p)
    roots = []
    for g, _m in fac.factors:
        if g.total_degree() == 1:
            cs = {m[g.vars.index(var)]: c for m, c in g.terms.items()}
            a = cs.get(1, Fraction(0))
            b = cs.get(0, Fraction(0))
            roots.append(-b / a)
    return sorted(set(roots))


def is_normal_extension(arg, route="auto", max_pairs=None, max_subsets=None) -> bool:
    """Whether K(x)/K(f_1..f_m) is a normal extension.

    route "splitting": factor the minimal polynomial over E[alpha] and test
    that every factor is linear.  route "monodromy" (one variable, single
    generator): compare the fixing-group order with the extension degree.
    "auto" picks splitting, the generally applicable test.
    """
    if isinstance(arg, ExtensionDiagram):
        diagram = arg
        P = diagram.presentation
    else:
        P = arg
        diagram = None
    if route in ("monodromy",):
        if len(P.ambient.vars) != 1 or len(P.generators) != 1:
            raise UniratError("monodromy route needs one variable and one generator")
        G = monodromy_fix_group(P.generators[0], max_pairs=max_pairs)
        degree = algebraic_degree(tag_basis(P, max_pairs=max_pairs))
        return len(G) == degree
    if diagram is None:
        diagram = rewrite_presentation(P, max_pairs=max_pairs)
    fac = diagram.factorization(max_subsets)
    return all(g.degree() == 1 for g, _m in fac.factors)


# ---------------------------------------------------------------------------
# dimension reduction (power substitutions)
# ---------------------------------------------------------------------------


@dataclass
class ReductionStep:
    eliminated: str
    into: str
    power: int
    order: tuple  # variable order used at this step, algebraic vars first


@dataclass
class DimensionReduction:
    steps: list
    final_vars: tuple
    images: list  # RatFunc over final_vars
    trdeg: int

    @property
    def is_identity(self):
        return not self.steps


def reduce_dimension(P: FieldPresentation, max_pairs=None) -> DimensionReduction:
    """An injective image of K(f_1..f_m) inside a rational field on

    trdeg-many variables, built from substitutions x_last -> x_first^nu.

    Transcendence degree is re-verified after every substitution, which is
    exactly the injectivity evidence the construction provides.
    """
    amb = P.ambient
    if isinstance(amb.field, PrimeField):
        raise UniratError("dimension reduction requires an infinite base field")
    if not amb.is_rational:
        raise UniratError("dimension reduction requires a rational ambient field")
    T = tag_basis(P, max_pairs=max_pairs)
    d = trdeg_groebner(T)
    gens = list(P.generators)
    vars = tuple(amb.vars)
    steps = []
    while len(vars) > d:
        ambient = AmbientField(amb.field, vars)
        current = FieldPresentation(ambient, gens)
        fbar = _noether_generators(current, d, max_pairs)
        order = _reorder_variables(ambient, fbar, d, max_pairs)
        nu = _substitution_power(ambient, fbar, order, d, max_pairs)
        first, last = order[0], order[-1]
        new_vars = tuple(v for v in vars if v != last)
        bindings = {
            v: MultiPoly.var(amb.field, new_vars, v) for v in new_vars
        }
        bindings[last] = MultiPoly.var(amb.field, new_vars, first) ** nu
        new_gens = []
        for g in gens:
            num = g.num.subs_poly(bindings)
            den = g.den.subs_poly(bindings)
            if den.is_zero():
                raise IntegrityError("denominator collapsed under power substitution")
            new_gens.append(RatFunc(num, den))
        new_pres = FieldPresentation(AmbientField(amb.field, new_vars), new_gens)
        if trdeg_groebner(tag_basis(new_pres, max_pairs=max_pairs)) != d:
            raise IntegrityError("transcendence degree changed under substitution")
        steps.append(ReductionStep(last, first, nu, order))
        vars, gens = new_vars, new_gens
    return DimensionReduction(steps, vars, gens, d)


def _noether_generators(P: FieldPresentation, d, max_pairs):
    """Generators with the first d algebraically independent and the rest

    integral over them; small-integer changes when the given ones fail."""
    from .unirational import is_integral

    amb = P.ambient
    gens = list(P.generators)
    zero_test = _AmbientZeroTest(amb)

    def arrangement_ok(ordered):
        head = ordered[:d]
        rows = _jacobian_rows(FieldPresentation(amb, head))
        rank, _ = _rank_and_pivots(rows, zero_test)
        if rank != d:
            return False
        if len(ordered) == d:
            return True
        head_pres = FieldPresentation(amb, head)
        return all(
            is_integral(g, head_pres, max_pairs=max_pairs) for g in ordered[d:]
        )

    # try subsets of the generators as the independent head
    for head_idx in combinations(range(len(gens)), d):
        ordered = [gens[i] for i in head_idx] + [
            g for i, g in enumerate(gens) if i not in head_idx
        ]
        if arrangement_ok(ordered):
            return ordered
    # small-integer changes: g_j' = g_j + c * g_i^k for the tail generators
    attempts = 0
    for c in _COEFF_SEQUENCE:
        for power in (1, 2):
            for head_idx in combinations(range(len(gens)), d):
                attempts += 1
                if attempts > _PRIMITIVE_BUDGET:
                    raise BudgetExceededError("normalization search budget exceeded")
                head = [gens[i] for i in head_idx]
                tail = [g for i, g in enumerate(gens) if i not in head_idx]
                const = RatFunc.const(amb.field, amb.vars, c)
                new_head = [h + const * t**power for h, t in zip(head, tail)] + head[len(tail):]
                ordered = new_head + tail
                if arrangement_ok(ordered):
                    return ordered
    raise BudgetExceededError("normalization search budget exceeded")


def _reorder_variables(amb: AmbientField, fbar, d, max_pairs):
    """Order with n - d variables independent over K(fbar_1..fbar_d), last."""
    vars = amb.vars
    n = len(vars)
    head = fbar[:d]
    zero_test = _AmbientZeroTest(amb)
    for tail in combinations(range(n), n - d):
        gens = list(head) + [RatFunc.var(amb.field, vars, vars[i]) for i in tail]
        rows = _jacobian_rows(FieldPresentation(amb, gens))
        rank, _ = _rank_and_pivots(rows, zero_test)
        if rank == n:
            front = [v for i, v in enumerate(vars) if i not in tail]
            return tuple(front + [vars[i] for i in tail])
    raise IntegrityError("no variable subset completes the transcendence basis")


def _substitution_power(amb: AmbientField, fbar, order, d, max_pairs):
    """nu = max(deg of the cleared relations, deg of the common denominator,

    number of variables) + 1."""
    head = fbar[:d]
    tail_vars = list(order[d:])
    algebraic_vars = list(order[:d])
    max_deg = 0
    gens = list(head) + [
        RatFunc.var(amb.field, amb.vars, v) for v in tail_vars
    ]
    pres = FieldPresentation(amb, gens)
    for v in algebraic_vars:
        xi = RatFunc.var(amb.field, amb.vars, v)
        mp = minimal_polynomial(xi, pres, max_pairs=max_pairs)
        if mp == TRANSCENDENTAL:
            raise IntegrityError("reordered variable unexpectedly transcendental")
        cleared, _den = mp.to_multipoly()
        max_deg = max(max_deg, cleared.total_degree())
    den = MultiPoly.const(amb.field, amb.vars, 1)
    for g in head:
        from .poly import multivar_gcd, exact_div

        gcd = multivar_gcd(den, g.den)
        den = exact_div(den, gcd) * g.den if not gcd.is_constant() else den * g.den
    return max(max_deg, den.total_degree(), len(amb.vars)) + 1
