"""Cherkas-form systems and their reduction to Lienard type.

A planar system polynomial in x and quadratic in y,

    xdot = p0(x) + p1(x) y,   ydot = q0(x) + q1(x) y + q2(x) y^2,

reduces to  xddot + f(x) xdot^2 + g(x) = 0  through the change of variable
z = p0 + p1 y whenever a residual polynomial vanishes identically.  This
module holds the univariate-over-ParamPoly polynomial and rational-function
types, the residual test, the reduction itself and the series data (F, e^F,
phi, W) the isochrony layer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra.poly import ParamPoly, auto_weights, weighted_grevlex
from .algebra.scalars import scalar_is_zero
from .algebra.series import XSeries


class NotReducibleError(ValueError):
    """The residual of the Cherkas system is not identically zero."""


class XPoly:
    """Dense univariate polynomial in x with ParamPoly coefficients."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: tuple[str, ...], coeffs: list[ParamPoly]):
        while len(coeffs) > 1 and coeffs[-1].is_zero:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = [ParamPoly.zero(vars)]
        self.vars = vars
        self.coeffs = coeffs

    @classmethod
    def zero(cls, vars) -> "XPoly":
        vars = tuple(vars)
        return cls(vars, [ParamPoly.zero(vars)])

    @classmethod
    def from_scalars(cls, vars, scalars) -> "XPoly":
        vars = tuple(vars)
        return cls(vars, [ParamPoly.constant(vars, c) for c in scalars])

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0].is_zero

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> ParamPoly:
        return self.coeffs[k] if k < len(self.coeffs) else ParamPoly.zero(self.vars)

    def __add__(self, other: "XPoly") -> "XPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly(self.vars, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other: "XPoly") -> "XPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly(self.vars, [self.coeff(k) - other.coeff(k) for k in range(n)])

    def __neg__(self) -> "XPoly":
        return XPoly(self.vars, [-c for c in self.coeffs])

    def __mul__(self, other: "XPoly") -> "XPoly":
        if self.is_zero or other.is_zero:
            return XPoly.zero(self.vars)
        out = [ParamPoly.zero(self.vars)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                out[i + j] = out[i + j] + a * b
        return XPoly(self.vars, out)

    def poly_scale(self, p: ParamPoly) -> "XPoly":
        return XPoly(self.vars, [c * p for c in self.coeffs])

    def scalar_scale(self, c) -> "XPoly":
        return XPoly(self.vars, [q.scalar_mul(c) for q in self.coeffs])

    def derivative(self) -> "XPoly":
        if self.degree() == 0:
            return XPoly.zero(self.vars)
        return XPoly(self.vars, [self.coeffs[k].scalar_mul(mpq(k))
                                 for k in range(1, len(self.coeffs))])

    def __eq__(self, other):
        if not isinstance(other, XPoly):
            return NotImplemented
        return (self - other).is_zero

    def to_series(self, order: int) -> XSeries:
        cs = list(self.coeffs[:order + 1])
        z = ParamPoly.zero(self.vars)
        while len(cs) < order + 1:
            cs.append(z)
        return XSeries(self.vars, cs)

    def substitute_params(self, values: dict) -> "XPoly":
        keep = tuple(v for v in self.vars if v not in values)
        return XPoly(keep, [c.substitute(values) for c in self.coeffs])

    def eval_float(self, x: float, values: dict[str, float] | None = None) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c.float_evaluate(values or {}) if not c.is_zero else 0.0)
        return acc

    def __repr__(self):
        return f"XPoly({self.coeffs!r})"


class XRatFunc:
    """Ratio of x-polynomials; the denominator's constant term is a nonzero
    scalar (normalized to 1).  Kept unreduced: no gcd cancellation."""

    __slots__ = ("num", "den")

    def __init__(self, num: XPoly, den: XPoly):
        c0 = den.coeff(0)
        if not c0.is_constant() or c0.is_zero:
            raise ValueError("denominator constant term must be a nonzero scalar")
        v = c0.constant_value()
        if v != 1:
            inv = 1 / v if not hasattr(v, "inverse") else v.inverse()
            num = num.scalar_scale(inv)
            den = den.scalar_scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: XPoly) -> "XRatFunc":
        one = XPoly.from_scalars(p.vars, [1])
        return cls(p, one)

    @property
    def vars(self):
        return self.num.vars

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def __add__(self, other: "XRatFunc") -> "XRatFunc":
        return XRatFunc(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    def __sub__(self, other: "XRatFunc") -> "XRatFunc":
        return XRatFunc(self.num * other.den - other.num * self.den,
                        self.den * other.den)

    def __neg__(self) -> "XRatFunc":
        return XRatFunc(-self.num, self.den)

    def __mul__(self, other: "XRatFunc") -> "XRatFunc":
        return XRatFunc(self.num * other.num, self.den * other.den)

    def derivative(self) -> "XRatFunc":
        n = self.num.derivative() * self.den - self.num * self.den.derivative()
        return XRatFunc(n, self.den * self.den)

    def equals(self, other: "XRatFunc") -> bool:
        return (self.num * other.den - other.num * self.den).is_zero

    def to_series(self, order: int) -> XSeries:
        return self.num.to_series(order) * self.den.to_series(order).inverse()

    def substitute_params(self, values: dict) -> "XRatFunc":
        return XRatFunc(self.num.substitute_params(values),
                        self.den.substitute_params(values))

    def eval_float(self, x: float, values: dict[str, float] | None = None) -> float:
        d = self.den.eval_float(x, values)
        if d == 0.0:
            raise ZeroDivisionError(f"denominator vanishes at x={x}")
        return self.num.eval_float(x, values) / d

    def __repr__(self):
        return f"XRatFunc({self.num!r} / {self.den!r})"


@dataclass(frozen=True)
class CherkasSystem:
    """The quintuple (p0, p1, q0, q1, q2); origin singular, p1(0) != 0."""

    p0: XPoly
    p1: XPoly
    q0: XPoly
    q1: XPoly
    q2: XPoly

    def __post_init__(self):
        if not self.p0.coeff(0).is_zero or not self.q0.coeff(0).is_zero:
            raise ValueError("origin must be singular: p0(0) = q0(0) = 0")
        c = self.p1.coeff(0)
        if not c.is_constant() or c.is_zero:
            raise ValueError("p1(0) must be a nonzero scalar")

    @property
    def vars(self):
        return self.p1.vars

    @classmethod
    def from_planar(cls, xdot: dict, ydot: dict, vars) -> "CherkasSystem":
        """Pattern-match (xdot, ydot) monomial tables into Cherkas shape.

        Tables map (i, j) exponents of x^i y^j to ParamPoly coefficients.
        Rejects y-degree > 1 in xdot and y-degree > 2 in ydot.
        """
        vars = tuple(vars)

        def split(table, max_j, who):
            rows = [{} for _ in range(max_j + 1)]
            for (i, j), c in table.items():
                if c.is_zero:
                    continue
                if j > max_j:
                    raise ValueError(
                        f"{who} has y-degree {j}: outside the quadratic-in-y shape")
                rows[j][i] = c
            out = []
            for row in rows:
                deg = max(row) if row else 0
                out.append(XPoly(vars, [row.get(k, ParamPoly.zero(vars))
                                        for k in range(deg + 1)]))
            return out

        p0, p1 = split(xdot, 1, "xdot")
        q0, q1, q2 = split(ydot, 2, "ydot")
        return cls(p0, p1, q0, q1, q2)

    def residual(self) -> XPoly:
        """Numerator (after clearing p1) of the reducibility residual
        -p1' p0 / p1 + q1 + p0' - 2 q2 p0 / p1."""
        return (self.p1 * (self.q1 + self.p0.derivative())
                - self.p1.derivative() * self.p0
                - self.q2.scalar_scale(mpq(2)) * self.p0)

    def residual_conditions(self) -> list[ParamPoly]:
        """Coefficients of the residual, content-normalized and sign-fixed
        under the weighted grevlex order (byte-stable fixtures)."""
        r = self.residual()
        if r.is_zero:
            return []
        order = weighted_grevlex(auto_weights(self.vars)) if self.vars else None
        out = []
        for c in r.coeffs:
            if c.is_zero:
                continue
            out.append(c.primitive_signed(order) if order else c)
        return out

    def is_reducible(self) -> bool:
        return self.residual().is_zero

    def to_lienard(self) -> "LienardPair":
        """Choudhury-Guha reduction:  f = -(q2 + p1')/p1,
        g = -q2 p0^2/p1 + q1 p0 - p1 q0.  Requires a vanishing residual."""
        if not self.is_reducible():
            raise NotReducibleError(
                "system is not of Lienard type: residual is nonzero")
        p0, p1, q0, q1, q2 = self.p0, self.p1, self.q0, self.q1, self.q2
        f = XRatFunc(-(q2 + p1.derivative()), p1)
        g_num = -(q2 * p0 * p0) + (q1 * p0 - p1 * q0) * p1
        g = XRatFunc(g_num, p1)
        if not g.num.coeff(0).is_zero:
            raise ValueError("reduction produced g(0) != 0")
        return LienardPair(f, g)

    def cg_forward(self, x, y):
        """(x, y) -> (x, z) with z = p0(x) + p1(x) y, on numbers."""
        p1x = self.p1.eval_float(x)
        if p1x == 0.0:
            raise ZeroDivisionError(f"p1 vanishes at x={x}")
        return x, self.p0.eval_float(x) + p1x * y

    def cg_inverse(self, x, z):
        p1x = self.p1.eval_float(x)
        if p1x == 0.0:
            raise ZeroDivisionError(f"p1 vanishes at x={x}")
        return x, (z - self.p0.eval_float(x)) / p1x

    def z_poly(self) -> tuple[XPoly, XPoly]:
        """The change of variable z = p0 + p1*y as the pair (p0, p1)."""
        return self.p0, self.p1

    def substitute_params(self, values: dict) -> "CherkasSystem":
        return CherkasSystem(*(p.substitute_params(values)
                               for p in (self.p0, self.p1, self.q0,
                                         self.q1, self.q2)))

    def planar_tables(self) -> tuple[dict, dict]:
        """Monomial tables of (xdot, ydot) rebuilt from the quintuple."""
        xdot: dict = {}
        ydot: dict = {}
        for j, poly in ((0, self.p0), (1, self.p1)):
            for i, c in enumerate(poly.coeffs):
                if not c.is_zero:
                    xdot[(i, j)] = c
        for j, poly in ((0, self.q0), (1, self.q1), (2, self.q2)):
            for i, c in enumerate(poly.coeffs):
                if not c.is_zero:
                    ydot[(i, j)] = c
        return xdot, ydot


class LienardPair:
    """f, g of a Lienard type equation, with cached series data.

    Series caches are per truncation order and derived lazily:
    F = int f, Eexp = e^F, phi = int e^F, W = int g e^{2F}.
    """

    def __init__(self, f: XRatFunc, g: XRatFunc):
        self.f = f
        self.g = g
        self._cache: dict = {}

    @property
    def vars(self):
        return self.f.vars

    def g_prime_at_0(self):
        """g'(0) as a ParamPoly (den is normalized to 1 at x=0)."""
        return self.g.num.coeff(1)

    def has_unit_g(self) -> bool:
        """g(0) = 0 and g'(0) = 1, the normalization every series step needs."""
        if not self.g.num.coeff(0).is_zero:
            return False
        c = self.g_prime_at_0()
        return c.is_constant() and not c.is_zero and c.constant_value() == 1

    def _get(self, key, order, build):
        hit = self._cache.get(key)
        if hit is not None and hit.order >= order:
            return hit.truncate(order)
        val = build()
        self._cache[key] = val
        return val

    def f_series(self, order: int) -> XSeries:
        return self._get("f", order, lambda: self.f.to_series(order))

    def g_series(self, order: int) -> XSeries:
        return self._get("g", order, lambda: self.g.to_series(order))

    def F_series(self, order: int) -> XSeries:
        """F(x) = int_0^x f, exact to the requested order."""
        return self._get("F", order,
                         lambda: self.f_series(order - 1).integrate())

    def expF_series(self, order: int) -> XSeries:
        return self._get("expF", order, lambda: self.F_series(order).exp())

    def phi_series(self, order: int) -> XSeries:
        """phi(x) = int_0^x e^{F}."""
        return self._get("phi", order,
                         lambda: self.expF_series(order - 1).integrate())

    def W_series(self, order: int) -> XSeries:
        """W(x) = int_0^x g e^{2F}; the potential part of the first integral."""
        def build():
            e2f = self.F_series(order - 1).scalar_mul(mpq(2)).exp()
            return (self.g_series(order - 1) * e2f).integrate()
        return self._get("W", order, build)

    def first_integral_potential(self, order: int) -> XSeries:
        """Alias for W in I(x, v) = (v e^F)^2 / 2 + W(x)."""
        return self.W_series(order)

    def substitute_params(self, values: dict) -> "LienardPair":
        return LienardPair(self.f.substitute_params(values),
                           self.g.substitute_params(values))

    def __repr__(self):
        return f"LienardPair(f={self.f!r}, g={self.g!r})"


def linear_center(vars=()) -> LienardPair:
    """f = 0, g = x: the harmonic oscillator."""
    vars = tuple(vars)
    f = XRatFunc.from_poly(XPoly.zero(vars))
    g = XRatFunc.from_poly(XPoly.from_scalars(vars, [0, 1]))
    return LienardPair(f, g)
