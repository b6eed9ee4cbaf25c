"""Buchberger engine: normal forms, reduced bases, elimination, membership.

Pair selection uses the normal strategy (minimal lcm degree) together with
the coprime-leading-term and chain criteria.  A configurable cap on processed
S-pairs makes pathological inputs fail loudly instead of hanging.
"""

from __future__ import annotations

import heapq
import os

from .errors import BudgetExceededError, UniratError, UniverseMismatchError
from .poly import (
    Block,
    GrevLex,
    MultiPoly,
    mono_deg,
    mono_div,
    mono_lcm,
    mono_mul,
    primitive_normalized,
)

DEFAULT_MAX_PAIRS = 10**6


def default_budget() -> int:
    env = os.environ.get("UNIRAT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UniratError(f"UNIRAT_BUDGET must be an integer, got {env!r}")
    return DEFAULT_MAX_PAIRS


class Ideal:
    """A nonempty list of generators over a shared universe."""

    def __init__(self, generators):
        gens = [g for g in generators]
        if not gens:
            raise UniratError("ideal needs at least one generator")
        first = gens[0]
        for g in gens[1:]:
            if g.vars != first.vars or g.field != first.field:
                raise UniverseMismatchError("ideal generators over mixed universes")
        self.generators = tuple(gens)
        self._gb_cache = {}

    @property
    def vars(self):
        return self.generators[0].vars

    @property
    def field(self):
        return self.generators[0].field

    def groebner(self, order, max_pairs=None) -> "GroebnerBasis":
        key = order
        if key not in self._gb_cache:
            self._gb_cache[key] = buchberger(self, order, max_pairs=max_pairs)
        return self._gb_cache[key]

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"


class GroebnerBasis:
    """A reduced Groebner basis with its order."""

    def __init__(self, basis, order, reduced=True):
        self.basis = tuple(basis)
        self.order = order
        self.reduced = reduced
        self._lms = tuple(g.leading_monomial(order) for g in self.basis)

    @property
    def vars(self):
        return self.basis[0].vars

    @property
    def field(self):
        return self.basis[0].field

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return f"GroebnerBasis({[str(g) for g in self.basis]})"


def normal_form(p: MultiPoly, G) -> MultiPoly:
    """Remainder of p under full reduction by G (a GroebnerBasis or list)."""
    return _reduce(p, G, allow_scaling=False)


def _reduce(p: MultiPoly, G, allow_scaling: bool) -> MultiPoly:
    """Top reduction to a normal form.

    With allow_scaling the intermediate polynomial is renormalized to keep
    rational coefficients small; the result then only equals the true normal
    form up to a nonzero scalar (fine for zero tests and basis building).
    """
    if isinstance(G, GroebnerBasis):
        basis, order, lms = G.basis, G.order, G._lms
    else:
        basis, order = tuple(G[0]), G[1]
        lms = tuple(g.leading_monomial(order) for g in basis)
    if p.is_zero() or not basis:
        return p
    F = p.field
    vars = p.vars
    order_key = order.key
    keycache = {}

    def key_of(m):
        k = keycache.get(m)
        if k is None:
            k = _NegKey(order_key(m))
            keycache[m] = k
        return k

    reducers = tuple((lm, g.terms[lm], g.terms) for g, lm in zip(basis, lms))
    work = dict(p.terms)
    heap = [(key_of(m), m) for m in work]
    heapq.heapify(heap)
    rem = {}
    steps = 0
    while heap:
        _, lm = heapq.heappop(heap)
        if lm not in work:
            continue  # stale entry
        lc = work.pop(lm)
        for glm, glc, gterms in reducers:
            q = mono_div(lm, glm)
            if q is not None:
                c = F.div(lc, glc)
                for gm, gc in gterms.items():
                    if gm == glm:
                        continue
                    m = mono_mul(gm, q)
                    old = work.get(m)
                    s = F.sub(old, F.mul(c, gc)) if old is not None else F.neg(F.mul(c, gc))
                    if F.is_zero(s):
                        work.pop(m, None)
                    else:
                        if old is None:
                            heapq.heappush(heap, (key_of(m), m))
                        work[m] = s
                break
        else:
            rem[lm] = lc
        steps += 1
        if allow_scaling and steps % 64 == 0 and work and F.char == 0:
            scale = _shrink_scale(work, rem)
            if scale is not None:
                for m in work:
                    work[m] = work[m] * scale
                for m in rem:
                    rem[m] = rem[m] * scale
    return MultiPoly(F, vars, rem, _clean=True)


class _NegKey:
    """Wrap an order key so the min-heap pops the largest monomial first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _shrink_scale(work, rem):
    """A rational scalar that makes the coefficients integer and primitive."""
    from math import gcd as _gcd
    from fractions import Fraction

    den_lcm = 1
    num_gcd = 0
    for d in (work, rem):
        for c in d.values():
            den_lcm = den_lcm * c.denominator // _gcd(den_lcm, c.denominator)
            num_gcd = _gcd(num_gcd, c.numerator)
    if num_gcd == 0:
        return None
    scale = Fraction(den_lcm, num_gcd)
    return None if scale == 1 else scale


def s_poly(f: MultiPoly, g: MultiPoly, order) -> MultiPoly:
    F = f.field
    lmf, lmg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = mono_lcm(lmf, lmg)
    mf = mono_div(lcm, lmf)
    mg = mono_div(lcm, lmg)
    tf = MultiPoly(F, f.vars, {mf: F.inv(f.terms[lmf])}, _clean=True)
    tg = MultiPoly(F, f.vars, {mg: F.inv(g.terms[lmg])}, _clean=True)
    return f * tf - g * tg


def _prepare(p: MultiPoly) -> MultiPoly:
    # primitive integer form keeps Fraction arithmetic cheap mid-run
    return primitive_normalized(p)


def buchberger(I: Ideal, order, max_pairs=None) -> GroebnerBasis:
    """Reduced Groebner basis of I under `order`.

    Deterministic for a fixed input: generators and S-pairs are processed in
    a canonical sortable order.  Raises BudgetExceededError after the
    configured number of S-pairs.
    """
    budget = max_pairs if max_pairs is not None else default_budget()
    gens = [g for g in I.generators if not g.is_zero()]
    if not gens:
        return GroebnerBasis([MultiPoly.zero(I.field, I.vars)], order, reduced=True)
    gens = [_prepare(g) for g in gens]
    gens.sort(key=lambda g: (order.key(g.leading_monomial(order)), sorted(g.terms)))

    basis = []
    lms = []
    treated = set()  # pairs processed (or coprime-skipped): safe chain witnesses

    def lcm_key(i, j):
        l = mono_lcm(lms[i], lms[j])
        return (mono_deg(l), order.key(l), i, j)

    pairs = []

    def add_poly(p):
        basis.append(p)
        lms.append(p.leading_monomial(order))
        k = len(basis) - 1
        for i in range(k):
            heapq.heappush(pairs, (lcm_key(i, k), i, k))

    for g in gens:
        red = _reduce(g, (basis, order), allow_scaling=True) if basis else g
        if not red.is_zero():
            add_poly(_prepare(red))

    processed = 0
    while pairs:
        _, i, j = heapq.heappop(pairs)
        processed += 1
        if processed > budget:
            raise BudgetExceededError(
                f"S-pair budget of {budget} exceeded; raise UNIRAT_BUDGET or max_pairs"
            )
        lmi, lmj = lms[i], lms[j]
        lcm = mono_lcm(lmi, lmj)
        if lcm == mono_mul(lmi, lmj):  # coprime criterion
            treated.add((i, j))
            continue
        # chain criterion: some k with lm_k | lcm and both sibling pairs treated
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_div(lcm, lms[k]) is not None:
                sib1 = (min(i, k), max(i, k))
                sib2 = (min(j, k), max(j, k))
                if sib1 in treated and sib2 in treated:
                    skip = True
                    break
        treated.add((i, j))
        if skip:
            continue
        sp = s_poly(basis[i], basis[j], order)
        red = _reduce(sp, (basis, order), allow_scaling=True)
        if not red.is_zero():
            add_poly(_prepare(red))

    # interreduce to the unique reduced basis
    reduced = _interreduce(basis, order)
    return GroebnerBasis(reduced, order, reduced=True)


def _interreduce(basis, order):
    basis = [p for p in basis if not p.is_zero()]
    # drop elements whose leading term is divisible by another's
    basis.sort(key=lambda g: order.key(g.leading_monomial(order)))
    kept = []
    for g in basis:
        lm = g.leading_monomial(order)
        if any(mono_div(lm, h.leading_monomial(order)) is not None for h in kept):
            continue
        kept.append(g)
    # fully reduce each element against the others, to fixpoint
    changed = True
    while changed:
        changed = False
        for i in range(len(kept)):
            others = kept[:i] + kept[i + 1 :]
            if not others:
                continue
            red = _reduce(kept[i], (others, order), allow_scaling=True)
            if red.is_zero():
                kept.pop(i)
                changed = True
                break
            red = _prepare(red)
            if not red == _prepare(kept[i]):
                kept[i] = red
                changed = True
    field = kept[0].field if kept else None
    out = []
    for g in kept:
        lc = g.leading_coefficient(order)
        out.append(g.scale(field.inv(lc)))
    out.sort(key=lambda g: order.key(g.leading_monomial(order)))
    return out


def elimination_ideal(G: GroebnerBasis, keep_vars) -> Ideal:
    """Basis elements involving only `keep_vars`; generates the elimination ideal."""
    keep = set(keep_vars)
    vars = G.vars
    keep_idx = [i for i, v in enumerate(vars) if v in keep]
    if not isinstance(G.order, Block) or not G.order.eliminates(keep_idx):
        raise UniratError(
            f"order {G.order!r} does not eliminate the complement of {sorted(keep)}"
        )
    drop_idx = [i for i, v in enumerate(vars) if v not in keep]
    out = []
    for g in G.basis:
        if all(all(m[i] == 0 for i in drop_idx) for m in g.terms):
            out.append(g)
    if not out:
        out = [MultiPoly.zero(G.field, vars)]
    return Ideal(out)


def ideal_member(p: MultiPoly, I: Ideal, order=None, max_pairs=None) -> bool:
    """True iff p reduces to zero modulo a Groebner basis of I."""
    nonzero = [g for g in I.generators if not g.is_zero()]
    if not nonzero:
        return p.is_zero()
    J = Ideal(nonzero)
    G = J.groebner(order or GrevLex(), max_pairs=max_pairs)
    return normal_form(p, G).is_zero()
