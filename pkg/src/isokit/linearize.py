"""Linearizing coordinates and the potential of the associated Hamiltonian.

For a reduced pair (f, g) the chart is p = xdot e^{F(x)}, q = int_0^x e^{F},
in which the first integral becomes H = p^2/2 + U(q).  The center is
isochronous with vanishing Urabe function exactly when U(q) = q^2/2, i.e.
when g e^F equals int e^F; that identity is checked at series level.  The
chart is delivered as exact series plus quadrature-backed numeric
evaluators (no closed-form antiderivatives are attempted).
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq
from scipy.integrate import quad

from .algebra.series import XSeries
from .lienard import CherkasSystem, LienardPair

QUAD_TOL = 1e-12
SERIES_RADIUS = 0.3  # |q| guard for series evaluation of U


@dataclass(frozen=True)
class LinearizingChart:
    """q(x) as a series, e^{F(x)} as a series, and numeric evaluators.

    p(x, y) factors as z(x, y) * e^{F(x)} with z = p0 + p1*y from the
    reducing change of variable, so the chart applies to the original
    planar coordinates.
    """

    q_of_x: XSeries
    expF: XSeries
    pair: LienardPair

    def q_float(self, x: float, values: dict[str, float] | None = None) -> float:
        """q(x) = int_0^x e^{F(s)} ds by adaptive quadrature."""
        return _quad_expF(self.pair, x, values)

    def expF_float(self, x: float, values: dict[str, float] | None = None) -> float:
        return _expF(self.pair, x, values)

    def p_float(self, z: float, x: float,
                values: dict[str, float] | None = None) -> float:
        return z * _expF(self.pair, x, values)


@dataclass(frozen=True)
class PotentialSeries:
    """U(q) with U(0) = 0, U'(0) = 0, U''(0) = 1."""

    u: XSeries

    def deviation_from_harmonic(self) -> XSeries:
        """U(q) - q^2/2; identically zero iff the Urabe function vanishes."""
        half = XSeries.from_scalars(self.u.vars, [0, 0, mpq(1, 2)], self.u.order)
        return self.u - half

    def is_harmonic(self) -> bool:
        return self.deviation_from_harmonic().is_zero


def _float_rat(rf, x: float, values) -> float:
    return rf.eval_float(x, values)


def _F(lp: LienardPair, x: float, values) -> float:
    if x == 0.0:
        return 0.0
    val, _ = quad(lambda s: _float_rat(lp.f, s, values), 0.0, x,
                  epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return val


def _expF(lp: LienardPair, x: float, values) -> float:
    from math import exp
    return exp(_F(lp, x, values))


def _quad_expF(lp: LienardPair, x: float, values) -> float:
    if x == 0.0:
        return 0.0
    val, _ = quad(lambda s: _expF(lp, s, values), 0.0, x,
                  epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return val


def linearizing_chart(lp: LienardPair, order: int) -> LinearizingChart:
    """q series = int e^F; the chart Jacobian is -e^{2F}, nonzero at 0."""
    q = lp.phi_series(order)
    return LinearizingChart(q, lp.expF_series(order), lp)


def potential_series(lp: LienardPair, order: int) -> PotentialSeries:
    """U(q) = W(x(q)) with x(q) the reversion of q(x) = int e^F."""
    q = lp.phi_series(order)
    x_of_q = q.reverse()
    u = lp.W_series(order).compose(x_of_q)
    return PotentialSeries(u)


def harmonic_identity_check(lp: LienardPair, order: int):
    """Check g e^F = int e^F as series through the given order.

    Equivalent to qdot = p, pdot = -q along the flow, and to the vanishing
    of the Urabe function.  Returns (ok, first_failing_order).
    """
    lhs = lp.g_series(order) * lp.expF_series(order)
    rhs = lp.phi_series(order)
    diff = lhs - rhs
    for k in range(order + 1):
        if not diff.coeff(k).is_zero:
            return False, k
    return True, None


def numeric_hamiltonian(cs: CherkasSystem, u_series: XSeries,
                        x: float, y: float,
                        values: dict[str, float] | None = None) -> float:
    """H = p^2/2 + U(q) at an original-coordinates point, U via series.

    The series evaluation of U is only trusted for |q| <= SERIES_RADIUS.
    """
    lp = cs.to_lienard()
    z = cs.p0.eval_float(x, values) + cs.p1.eval_float(x, values) * y
    p = z * _expF(lp, x, values)
    q = _quad_expF(lp, x, values)
    if abs(q) > SERIES_RADIUS:
        raise ValueError(f"|q|={abs(q):.3f} outside series validity radius")
    return 0.5 * p * p + u_series.eval_float(q)
