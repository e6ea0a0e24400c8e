"""Necessary isochronicity conditions and Urabe-function machinery.

The condition generator works order by order on exact series: from the
Lienard pair it builds phi = int e^F and the action-like variable xi with
xi^2/2 = int g e^{2F}, inverts xi(x), transports phi to psi(xi) = phi(x(xi))
and reads h = psi' - 1.  The center is isochronous only if every even
xi-coefficient of h vanishes; the odd part is the candidate Urabe function.
All coefficients stay in the ground field: no radical ever enters.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra.poly import ParamPoly, auto_weights, weighted_grevlex
from .algebra.series import XSeries
from .lienard import LienardPair


class TruncationError(ValueError):
    """Requested condition count needs a deeper series than provided."""


def _require_unit_g(lp: LienardPair):
    if not lp.has_unit_g():
        raise ValueError("Lienard pair must have g(0) = 0 and g'(0) = 1")


def xi_series(lp: LienardPair, order: int) -> XSeries:
    """xi(x) = x * sqrt(2 W(x) / x^2), odd-signed with x; xi = x + O(x^2)."""
    _require_unit_g(lp)
    w2 = lp.W_series(order + 1).scalar_mul(mpq(2))
    unit = w2.shift_down(2)  # 2W/x^2, constant term 1
    root = unit.sqrt_unit()
    xi = root.shift_up(1).truncate(order)
    return xi


def x_of_xi(lp: LienardPair, order: int) -> XSeries:
    return xi_series(lp, order).reverse()


@dataclass(frozen=True)
class ConditionSet:
    """Even xi-coefficients of h: c_k = [xi^{2k}] h for k = 1..K.

    Conditions are content-normalized with the sign fixed by the leading
    term under weighted grevlex, so regression output is byte-stable.
    """

    conditions: tuple[ParamPoly, ...]
    k: int
    order: int

    def all_zero(self) -> bool:
        return all(c.is_zero for c in self.conditions)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.conditions):
            if not c.is_zero:
                return i + 1
        return None


@dataclass(frozen=True)
class UrabeSeries:
    """Candidate Urabe data: the full series h(xi) with h(0) = 0."""

    h: XSeries

    def odd_part(self) -> XSeries:
        cs = [c if k % 2 == 1 else ParamPoly.zero(self.h.vars)
              for k, c in enumerate(self.h.coeffs)]
        return XSeries(self.h.vars, cs)

    def even_part(self) -> XSeries:
        cs = [c if k % 2 == 0 else ParamPoly.zero(self.h.vars)
              for k, c in enumerate(self.h.coeffs)]
        return XSeries(self.h.vars, cs)

    def is_odd(self) -> bool:
        return self.even_part().is_zero

    def is_zero(self) -> bool:
        return self.h.is_zero


def normalize_condition(c: ParamPoly) -> ParamPoly:
    if c.is_zero or not c.vars:
        return c
    order = weighted_grevlex(auto_weights(c.vars))
    return c.primitive_signed(order)


def urabe_series(lp: LienardPair, order: int) -> UrabeSeries:
    """Full h series to the given xi-order.

    h = psi' - 1 where psi(xi) = phi(x(xi)).  The even part regenerates the
    condition set; the odd part is the candidate Urabe function.
    """
    _require_unit_g(lp)
    n = order + 1  # psi to n so that h = psi' - 1 is exact to order
    xi = xi_series(lp, n)
    x_back = xi.reverse()
    phi = lp.phi_series(n)
    psi = phi.compose(x_back)
    one = XSeries.constant(lp.vars, 1, order)
    h = psi.differentiate() - one
    return UrabeSeries(h.truncate(order))


def c_algorithm(lp: LienardPair, k: int, order: int | None = None) -> ConditionSet:
    """First k necessary isochronicity conditions c_1..c_k.

    The origin being an isochronous center forces every c_k to vanish at
    the parameter values.  Series are truncated at `order` (default 2k+4;
    anything lower than that raises TruncationError).
    """
    if k < 1:
        raise ValueError("need at least one condition")
    n = 2 * k + 4 if order is None else order
    if n < 2 * k + 4:
        raise TruncationError(
            f"series order {n} cannot support {k} conditions (need >= {2 * k + 4})")
    us = urabe_series(lp, n - 2)
    conds = tuple(normalize_condition(us.h.coeff(2 * m)) for m in range(1, k + 1))
    return ConditionSet(conds, k, n)


def verify_urabe(lp: LienardPair, h: XSeries, order: int):
    """Check xi(x) = (1 + h(xi(x))) g(x) e^{F(x)} as a series identity in x.

    h must vanish at 0 and be odd through the checked order.  Returns
    (ok, first_failing_order).
    """
    if not h.coeffs[0].is_zero:
        raise ValueError("Urabe candidate must vanish at 0")
    for k in range(0, min(order, h.order) + 1, 2):
        if not h.coeffs[k].is_zero:
            raise ValueError(f"Urabe candidate has an even term at order {k}")
    _require_unit_g(lp)
    xi = xi_series(lp, order)
    h_of_xi = h.truncate(order).compose(xi)
    one = XSeries.constant(lp.vars, 1, order)
    rhs = (one + h_of_xi) * lp.g_series(order) * lp.expF_series(order)
    diff = xi - rhs
    for k in range(order + 1):
        if not diff.coeff(k).is_zero:
            return False, k
    return True, None


def zero_urabe_check(lp: LienardPair) -> bool:
    """Exact rational identity  g' + f g = 1  (zero Urabe function)."""
    fn, fd = lp.f.num, lp.f.den
    gn, gd = lp.g.num, lp.g.den
    # g' = (gn' gd - gn gd') / gd^2 ; common denominator fd gd^2
    lhs = (gn.derivative() * gd - gn * gd.derivative()) * fd + fn * gn * gd
    rhs = fd * gd * gd
    return (lhs - rhs).is_zero


def center_check(lp: LienardPair) -> bool:
    """g(0) = 0 with g'(0) = 1 forces x g(x) > 0 near 0: a center."""
    return lp.has_unit_g()
