"""Buchberger-based Groebner engine over exact scalars.

Supports the four monomial orders from the algebra layer, Gebauer-Moeller
pair elimination with normal (smallest-lcm) selection, reduced-basis
normalization, ideal and radical membership, shape-lemma extraction and the
homogenization split for weighted-homogeneous ideals.  A hard pair budget
makes hopeless runs fail loudly instead of hanging.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.poly import (MonomialOrder, ParamPoly, exp_decode,
                           exp_divides, exp_encode, exp_guard)
from .algebra.scalars import scalar_is_zero


class BudgetExceededError(RuntimeError):
    """Raised when the pair queue outgrows the configured budget."""


DEFAULT_PAIR_BUDGET = 20000


@dataclass(frozen=True)
class Ideal:
    generators: tuple[ParamPoly, ...]
    order: MonomialOrder

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero)
        object.__setattr__(self, "generators", gens)

    @property
    def vars(self) -> tuple[str, ...]:
        if not self.generators:
            raise ValueError("empty ideal has no registry")
        return self.generators[0].vars


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple[ParamPoly, ...]
    order: MonomialOrder

    @property
    def is_trivial(self) -> bool:
        """True when the basis is {1} (empty variety)."""
        return (len(self.elements) == 1 and self.elements[0].is_constant()
                and not self.elements[0].is_zero)


def _exp_lcm(a: int, b: int, n: int) -> int:
    ea, eb = exp_decode(a, n), exp_decode(b, n)
    return exp_encode(tuple(max(x, y) for x, y in zip(ea, eb)))


def _exp_coprime(a: int, b: int, n: int) -> bool:
    ea, eb = exp_decode(a, n), exp_decode(b, n)
    return all(x == 0 or y == 0 for x, y in zip(ea, eb))


def _mono_mul(p: ParamPoly, exp: int, c) -> ParamPoly:
    return ParamPoly(p.vars, {e + exp: v * c for e, v in p.terms.items()})


def normal_form(p: ParamPoly, basis, order: MonomialOrder) -> ParamPoly:
    """Full remainder of p under multivariate division by basis.

    No term of the result is divisible by any basis leading monomial, and
    p - result lies in the ideal generated by basis.  Deterministic: always
    reduces the current greatest term by the first matching divisor.
    """
    divisors = [(g.leading_term(order), g) for g in basis if not g.is_zero]
    if not divisors or p.is_zero:
        return p
    n = len(p.vars)
    guard = exp_guard(n)
    rem: dict = {}
    work = dict(p.terms)
    key = order.key_fn(n)
    while work:
        exp = max(work, key=key)
        c = work.pop(exp)
        hit = None
        for (lexp, lc), g in divisors:
            if exp_divides(lexp, exp, guard):
                hit = (lexp, lc, g)
                break
        if hit is None:
            rem[exp] = c
            continue
        lexp, lc, g = hit
        factor = c / lc if not hasattr(lc, "inverse") else c * lc.inverse()
        shift = exp - lexp
        for e, v in g.terms.items():
            if e == lexp:
                continue
            t = e + shift
            w = work.get(t)
            nv = v * factor
            if w is None:
                work[t] = -nv
            else:
                w = w - nv
                if scalar_is_zero(w):
                    del work[t]
                else:
                    work[t] = w
    return ParamPoly(p.vars, rem)


def _s_polynomial(f: ParamPoly, g: ParamPoly, order: MonomialOrder) -> ParamPoly:
    (ef, cf) = f.leading_term(order)
    (eg, cg) = g.leading_term(order)
    lcm = _exp_lcm(ef, eg, len(f.vars))
    inv_cf = 1 / cf if not hasattr(cf, "inverse") else cf.inverse()
    inv_cg = 1 / cg if not hasattr(cg, "inverse") else cg.inverse()
    a = _mono_mul(f, lcm - ef, inv_cf)
    b = _mono_mul(g, lcm - eg, inv_cg)
    return a - b


def buchberger(ideal: Ideal, pair_budget: int = DEFAULT_PAIR_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal under its monomial order.

    Gebauer-Moeller pair pruning with normal selection.  Deterministic for
    a fixed order and idempotent.  Raises BudgetExceededError rather than
    returning a wrong basis when the pair budget is exhausted.
    """
    order = ideal.order
    gens = [g for g in ideal.generators if not g.is_zero]
    if not gens:
        return GroebnerBasis((), order)
    vars = gens[0].vars
    nv = len(vars)
    guard = exp_guard(nv)
    key = order.key_fn(nv)
    one = ParamPoly.constant(vars, 1)
    # quick exit: a nonzero constant generator collapses everything
    for g in gens:
        if g.is_constant():
            return GroebnerBasis((one,), order)

    G: list[ParamPoly] = []
    lms: list[int] = []
    pairs: list[tuple[int, int, int]] = []  # (packed lcm, i, j)

    def update(h: ParamPoly):
        """Gebauer-Moeller update of basis and pair set with new element h."""
        nonlocal pairs
        lm_h = h.leading_term(order)[0]
        t = len(G)
        cand = [(_exp_lcm(lms[i], lm_h, nv), i) for i in range(t)]
        kept: list[tuple[int, int]] = []
        for idx, (lcm_i, i) in enumerate(cand):
            if _exp_coprime(lms[i], lm_h, nv):
                continue
            redundant = False
            for jdx, (lcm_j, j) in enumerate(cand):
                if jdx == idx:
                    continue
                if exp_divides(lcm_j, lcm_i, guard) and lcm_j != lcm_i:
                    redundant = True
                    break
                if (lcm_j == lcm_i and jdx < idx
                        and not _exp_coprime(lms[j], lm_h, nv)):
                    redundant = True
                    break
            if not redundant:
                kept.append((lcm_i, i))
        new_pairs = []
        for lcm_ij, i, j in pairs:
            if (exp_divides(lm_h, lcm_ij, guard)
                    and _exp_lcm(lms[i], lm_h, nv) != lcm_ij
                    and _exp_lcm(lms[j], lm_h, nv) != lcm_ij):
                continue
            new_pairs.append((lcm_ij, i, j))
        for lcm_i, i in kept:
            new_pairs.append((lcm_i, i, t))
        pairs = new_pairs
        G.append(h)
        lms.append(lm_h)

    for g in sorted(gens, key=lambda p: key(p.leading_term(order)[0])):
        update(g.monic(order))

    processed = 0
    while pairs:
        processed += 1
        if processed > pair_budget:
            raise BudgetExceededError(
                f"pair budget {pair_budget} exceeded; basis not computed")
        best = min(range(len(pairs)), key=lambda k: key(pairs[k][0]))
        _, i, j = pairs.pop(best)
        s = _s_polynomial(G[i], G[j], order)
        nf = normal_form(s, G, order)
        if nf.is_zero:
            continue
        if nf.is_constant():
            return GroebnerBasis((one,), order)
        update(nf.monic(order))

    return GroebnerBasis(tuple(_reduce_basis(G, order)), order)


def _reduce_basis(G: list[ParamPoly], order: MonomialOrder) -> list[ParamPoly]:
    """Minimalize and inter-reduce; monic elements sorted by leading term."""
    if not G:
        return []
    nv = len(G[0].vars)
    guard = exp_guard(nv)
    key = order.key_fn(nv)
    lms = [g.leading_term(order)[0] for g in G]
    keep = []
    for i, lm in enumerate(lms):
        if any(j != i and exp_divides(lms[j], lm, guard)
               and (lms[j] != lm or j < i) for j in range(len(G))):
            continue
        keep.append(i)
    minimal = [G[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = [h for j, h in enumerate(minimal) if j != i]
        r = normal_form(g, others, order)
        if not r.is_zero:
            reduced.append(r.monic(order))
    reduced.sort(key=lambda p: key(p.leading_term(order)[0]), reverse=True)
    return reduced


def ideal_membership(p: ParamPoly, gb: GroebnerBasis) -> bool:
    return normal_form(p, gb.elements, gb.order).is_zero


def with_fresh_variable(polys, fresh: str):
    """Extend every polynomial's registry by one trailing fresh variable."""
    if not polys:
        raise ValueError("need at least one polynomial")
    vars = polys[0].vars
    if fresh in vars:
        raise ValueError(f"variable {fresh!r} already in registry")
    big = vars + (fresh,)
    return [p.extend(big) for p in polys], big


def radical_membership(f: ParamPoly, ideal: Ideal,
                       pair_budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """True iff f vanishes on the variety of the ideal (Rabinowitsch trick):
    the basis of generators + {1 - t*f} is {1} for a fresh variable t."""
    fresh = "_t"
    vars = f.vars
    while fresh in vars:
        fresh += "_"
    lifted, big = with_fresh_variable(list(ideal.generators) + [f], fresh)
    f_l = lifted[-1]
    t = ParamPoly.variable(big, fresh)
    one = ParamPoly.constant(big, 1)
    gens = lifted[:-1] + [one - t * f_l]
    gb = buchberger(Ideal(tuple(gens), MonomialOrder("grevlex")), pair_budget)
    return gb.is_trivial


def saturation_generators(ideal: Ideal, f: ParamPoly, fresh: str = "_s"):
    """Generators + {f*t - 1}: forces f != 0 on the solution set.

    Strategy for which polynomials to invert away is left to callers; this
    helper only builds the extended generator list and registry.
    """
    vars = f.vars
    while fresh in vars:
        fresh += "_"
    lifted, big = with_fresh_variable(list(ideal.generators) + [f], fresh)
    f_l = lifted[-1]
    t = ParamPoly.variable(big, fresh)
    one = ParamPoly.constant(big, 1)
    return lifted[:-1] + [f_l * t - one], big


@dataclass(frozen=True)
class ShapeSolution:
    """Lex basis in shape position: x_i = g_i(x_n) plus g_n(x_n) = 0."""

    linear_images: tuple[list, ...]  # univariate coefficient lists for x_1..x_{n-1}
    univariate: list                 # coefficients of g_n
    empty: bool = False


def shape_extract(gb: GroebnerBasis) -> ShapeSolution | None:
    """Triangular data when the lex basis matches the shape lemma pattern.

    Returns None when the basis is not in shape position; a degenerate
    marker when the basis is {1} (no solutions).
    """
    if gb.order.kind != "lex":
        raise ValueError("shape extraction needs a lex basis")
    if gb.is_trivial:
        return ShapeSolution((), [], empty=True)
    if not gb.elements:
        return None
    vars = gb.elements[0].vars
    n = len(vars)
    if len(gb.elements) != n:
        return None
    last = n - 1

    def univariate_in_last(p: ParamPoly):
        coeffs: dict[int, object] = {}
        for exp, c in p.iter_terms():
            if any(exp[k] for k in range(last)):
                return None
            coeffs[exp[last]] = c
        deg = max(coeffs) if coeffs else 0
        return [coeffs.get(k, 0) for k in range(deg + 1)]

    images: list = [None] * (n - 1)
    univ = None
    for p in gb.elements:
        packed_lexp, _ = p.leading_term(gb.order)
        lexp = exp_decode(packed_lexp, n)
        head = [k for k in range(n) if lexp[k]]
        if head and head[0] < last:
            i = head[0]
            if lexp[i] != 1 or any(lexp[k] for k in range(n) if k != i):
                return None
            tail = ParamPoly(vars, {e: -c for e, c in p.terms.items()
                                    if e != packed_lexp})
            u = univariate_in_last(tail) if not tail.is_zero else []
            if u is None or images[i] is not None:
                return None
            images[i] = u
        else:
            u = univariate_in_last(p)
            if u is None or univ is not None:
                return None
            univ = u
    if univ is None or any(im is None for im in images):
        return None
    return ShapeSolution(tuple(images), univ)


def homogenization_split(ideal: Ideal, pivot: str,
                         weights: tuple[int, ...] | None = None):
    """Split into the pivot=0 and pivot=1 branches.

    Every generator must be weighted-homogeneous under the given weights
    (default: the order's weights).  Solutions of the original ideal are
    recovered from the branches by the scaling var <- t^weight * var.
    """
    if not ideal.generators:
        raise ValueError("cannot split an empty ideal")
    vars = ideal.vars
    if pivot not in vars:
        raise ValueError(f"pivot {pivot!r} not in registry")
    w = weights if weights is not None else ideal.order.weights
    if w is None:
        raise ValueError("homogenization split needs weights")
    for g in ideal.generators:
        if g.weighted_degree(w) is None:
            raise ValueError("generator is not weighted-homogeneous")
    kept = tuple(v for v in vars if v != pivot)
    sub_w = tuple(wi for v, wi in zip(vars, w) if v != pivot)
    def restrict(value):
        gens = []
        for g in ideal.generators:
            h = g.substitute({pivot: value})
            if not h.is_zero:
                gens.append(h)
        kind = ideal.order.kind
        order = (MonomialOrder(kind, sub_w) if kind.startswith("weighted")
                 else ideal.order)
        return Ideal(tuple(gens), order)
    return restrict(0), restrict(1)
