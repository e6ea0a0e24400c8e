"""Floating-point verification of the original planar systems.

Orbit integration (adaptive embedded Runge-Kutta with dense output and
event localization via scipy's DOP853), return-period measurement on the
section {y = 0, x > 0}, batch isochronicity probes, first-integral drift
along orbits, and the exact time-reversibility parity tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq
from scipy.integrate import quad, solve_ivp

from .algebra.poly import ParamPoly
from .algebra.scalars import QuadNum, scalar_is_zero
from .lienard import CherkasSystem

ESCAPE_RADIUS = 2.0
TIME_CAP = 100.0
MAX_DEGREE = 4


class OrbitEscapeError(RuntimeError):
    """Trajectory left the |(x, y)| <= escape-radius guard."""


class NoReturnError(RuntimeError):
    """No section return within the time cap."""


class IntegrationError(RuntimeError):
    """Integrator failure (step-size underflow or solver error)."""


@dataclass(frozen=True)
class NumericSystem:
    """Dense monomial tables for xdot, ydot: coefficient of x^i y^j at [i][j].

    The linear part must be exactly (-y, x).  Evaluation is Horner-ordered
    deterministically (inner Horner over i, outer over j, both descending).
    """

    fx: tuple[tuple[float, ...], ...]
    fy: tuple[tuple[float, ...], ...]
    provenance: str = "exact-evaluated"

    def __post_init__(self):
        for name, tab in (("xdot", self.fx), ("ydot", self.fy)):
            if len(tab) != MAX_DEGREE + 1 or any(len(r) != MAX_DEGREE + 1 for r in tab):
                raise ValueError(f"{name} table must be 5x5")
        if self.fx[0][1] != -1.0 or self.fy[1][0] != 1.0:
            raise ValueError("linear part must be exactly (-y, x)")
        if (self.fx[0][0] != 0.0 or self.fy[0][0] != 0.0
                or self.fx[1][0] != 0.0 or self.fy[0][1] != 0.0):
            raise ValueError("linear part must be exactly (-y, x)")

    @classmethod
    def from_tables(cls, xdot: dict, ydot: dict,
                    values: dict[str, float] | None = None,
                    provenance: str = "exact-evaluated") -> "NumericSystem":
        """Build from {(i, j): ParamPoly-or-float} monomial tables."""
        def build(table):
            m = [[0.0] * (MAX_DEGREE + 1) for _ in range(MAX_DEGREE + 1)]
            for (i, j), c in table.items():
                if i + j > MAX_DEGREE:
                    raise ValueError(f"monomial x^{i} y^{j} beyond degree {MAX_DEGREE}")
                if isinstance(c, ParamPoly):
                    m[i][j] = c.float_evaluate(values or {})
                else:
                    m[i][j] = float(c)
            return tuple(tuple(r) for r in m)
        return cls(build(xdot), build(ydot), provenance)

    def rhs(self, _t, state):
        x, y = state
        out = []
        for tab in (self.fx, self.fy):
            total = 0.0
            for j in range(MAX_DEGREE, -1, -1):
                inner = 0.0
                for i in range(MAX_DEGREE, -1, -1):
                    inner = inner * x + tab[i][j]
                total = total * y + inner
            out.append(total)
        return out


@dataclass(frozen=True)
class PeriodReport:
    amplitudes: tuple[float, ...]
    periods: tuple[float, ...]
    max_deviation: float
    tol: float
    threshold: float
    rhs_evaluations: int
    passed: bool

    def lines(self):
        out = []
        for a, t in zip(self.amplitudes, self.periods):
            out.append(f"T({a:.6f}) = {t:.12f}  |T-2pi| = {abs(t - 2 * math.pi):.3e}")
        out.append(f"max deviation = {self.max_deviation:.3e} "
                   f"({'PASS' if self.passed else 'FAIL'} at {self.threshold:.1e})")
        return out


def _solve(sys: NumericSystem, state, t_max, tol, events, dense=False):
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-14, 1e-6]")
    sol = solve_ivp(sys.rhs, (0.0, t_max), state, method="DOP853",
                    rtol=tol, atol=tol, events=events, dense_output=dense)
    if sol.status == -1:
        raise IntegrationError(sol.message)
    return sol


def _escape_event(_t, s):
    return s[0] * s[0] + s[1] * s[1] - ESCAPE_RADIUS * ESCAPE_RADIUS


_escape_event.terminal = True


def integrate_orbit(sys: NumericSystem, x0: float, tol: float,
                    t_max: float = TIME_CAP):
    """Dense trajectory from (x0, 0); raises on escape or step underflow."""
    if not 0.0 < x0 <= 0.5:
        raise ValueError("amplitude x0 must lie in (0, 0.5]")
    sol = _solve(sys, [x0, 0.0], t_max, tol, [_escape_event], dense=True)
    if sol.status == 1:
        raise OrbitEscapeError(f"orbit escaped |.| <= {ESCAPE_RADIUS} guard")
    return sol


def measure_period(sys: NumericSystem, x0: float, tol: float,
                   t_cap: float = TIME_CAP) -> tuple[float, int]:
    """First return to the half-line {y = 0, x > 0} with ydot > 0.

    Integrates in two legs split at the falling y-crossing so that starting
    exactly on the section never registers a spurious event.  Returns
    (period, rhs evaluation count).
    """
    if not 0.0 < x0 <= 0.5:
        raise ValueError("amplitude x0 must lie in (0, 0.5]")

    def y_fall(_t, s):
        return s[1]
    y_fall.terminal = True
    y_fall.direction = -1

    def y_rise(_t, s):
        return s[1]
    y_rise.terminal = True
    y_rise.direction = 1

    sol1 = _solve(sys, [x0, 0.0], t_cap, tol, [y_fall, _escape_event])
    if sol1.status == 1 and sol1.t_events[1].size:
        raise OrbitEscapeError("orbit escaped during first half-turn")
    if not sol1.t_events[0].size:
        raise NoReturnError(f"no section return within t <= {t_cap}")
    t_half = sol1.t_events[0][0]
    state = sol1.y_events[0][0]

    sol2 = _solve(sys, list(state), t_cap - t_half, tol, [y_rise, _escape_event])
    if sol2.status == 1 and sol2.t_events[1].size:
        raise OrbitEscapeError("orbit escaped during second half-turn")
    if not sol2.t_events[0].size:
        raise NoReturnError(f"no section return within t <= {t_cap}")
    xr = sol2.y_events[0][0][0]
    if xr <= 0.0:
        raise NoReturnError("rising crossing occurred at x <= 0")
    return t_half + sol2.t_events[0][0], sol1.nfev + sol2.nfev


def isochronicity_probe(sys: NumericSystem, amplitudes, tol: float,
                        threshold: float | None = None) -> PeriodReport:
    """Measure periods over amplitudes; PASS when max |T - 2pi| <= threshold
    (default 10*tol)."""
    threshold = 10.0 * tol if threshold is None else threshold
    periods = []
    nfev = 0
    for a in amplitudes:
        t, n = measure_period(sys, a, tol)
        periods.append(t)
        nfev += n
    dev = max(abs(t - 2.0 * math.pi) for t in periods)
    return PeriodReport(tuple(amplitudes), tuple(periods), dev, tol,
                        threshold, nfev, dev <= threshold)


def first_integral_drift(cs: CherkasSystem, x0: float, tol: float,
                         samples: int = 60,
                         values: dict[str, float] | None = None) -> float:
    """Max relative drift of I = (z e^F)^2/2 + W(x) along one integrated orbit.

    The orbit is integrated on the original planar system; F and W are
    evaluated by adaptive quadrature on the reduced pair.
    """
    lp = cs.to_lienard()
    xdot, ydot = cs.planar_tables()
    nsys = NumericSystem.from_tables(xdot, ydot, values)
    period, _ = measure_period(nsys, x0, tol)
    sol = integrate_orbit(nsys, x0, tol, t_max=period)

    def F(x):
        if x == 0.0:
            return 0.0
        v, _ = quad(lambda s: lp.f.eval_float(s, values), 0.0, x,
                    epsabs=1e-13, epsrel=1e-13, limit=200)
        return v

    def W(x):
        if x == 0.0:
            return 0.0
        v, _ = quad(lambda s: lp.g.eval_float(s, values) * math.exp(2.0 * F(s)),
                    0.0, x, epsabs=1e-13, epsrel=1e-13, limit=200)
        return v

    def I(x, y):
        z = (cs.p0.eval_float(x, values)
             + cs.p1.eval_float(x, values) * y)
        return 0.5 * (z * math.exp(F(x))) ** 2 + W(x)

    i0 = I(x0, 0.0)
    if i0 == 0.0:
        raise ValueError("first integral vanishes at the initial point")
    worst = 0.0
    for k in range(samples + 1):
        t = period * k / samples
        x, y = sol.sol(t)
        worst = max(worst, abs(I(x, y) - i0) / abs(i0))
    return worst


# -- time reversibility -------------------------------------------------------


def reversible_x_axis(xdot: dict, ydot: dict) -> bool:
    """Exact parity test: y odd in every xdot monomial, even in every ydot one."""
    for (_i, j), c in xdot.items():
        if not _coeff_zero(c) and j % 2 == 0:
            return False
    for (_i, j), c in ydot.items():
        if not _coeff_zero(c) and j % 2 == 1:
            return False
    return True


def _coeff_zero(c) -> bool:
    if isinstance(c, ParamPoly):
        return c.is_zero
    return c == 0


def _scalar_of(c):
    if isinstance(c, ParamPoly):
        return c.constant_value()
    return mpq(c) if isinstance(c, int) else c


def reversible_any_axis(xdot: dict, ydot: dict) -> bool:
    """Existence of a symmetry axis through the origin, decided exactly.

    Rotating by angle a with (c, s) = (cos a, sin a) turns the x-axis
    parity conditions of the rotated system into polynomials in (c, s).
    The circle is rationally parametrized by t = tan(a/2) (the a = pi case
    names the same axis as a = 0); common real roots of the resulting
    univariate conditions are counted by an exact Sturm chain.
    Coefficients must be instantiated (no free parameters).
    """
    vars = ("c", "s")
    c_var = ParamPoly.variable(vars, "c")
    s_var = ParamPoly.variable(vars, "s")

    # Rotated field: P_a(u, v) = c*X - s*Y and Q_a(u, v) = s*X + c*Y,
    # both evaluated at (x, y) = (c*u + s*v, -s*u + c*v).
    P: dict = {}
    Q: dict = {}
    for table, p_weight, q_weight in ((xdot, c_var, s_var),
                                      (ydot, -s_var, c_var)):
        for (i, j), coeff in table.items():
            val = _scalar_of(coeff)
            if scalar_is_zero(val):
                continue
            for (iu, iv), mono in _circle_power(i, j, c_var, s_var).items():
                contrib = mono.scalar_mul(val)
                _tab_add(P, (iu, iv), contrib * p_weight)
                _tab_add(Q, (iu, iv), contrib * q_weight)

    # x-axis parity in (u, v): v even in P forbidden, v odd in Q forbidden.
    conditions = []
    for (_iu, iv), poly in P.items():
        if iv % 2 == 0 and not poly.is_zero:
            conditions.append(poly)
    for (_iu, iv), poly in Q.items():
        if iv % 2 == 1 and not poly.is_zero:
            conditions.append(poly)
    if not conditions:
        return True

    g = None
    for p in conditions:
        u = _tan_half_substitution(p, vars)
        if all(scalar_is_zero(v) for v in u):
            continue  # vanishes identically on the circle: no constraint
        g = u if g is None else _upoly_gcd(g, u)
        if len(g) == 1:  # constant gcd: no common root
            return False
    if g is None:
        return True
    return _count_real_roots(g) > 0


def _tab_add(tab: dict, key, val: ParamPoly):
    cur = tab.get(key)
    tab[key] = val if cur is None else cur + val


_circle_cache: dict = {}


def _circle_power(i: int, j: int, c_var: ParamPoly, s_var: ParamPoly) -> dict:
    """Monomial table of (c u + s v)^i (-s u + c v)^j keyed by (iu, iv)."""
    key = (i, j)
    hit = _circle_cache.get(key)
    if hit is not None:
        return hit
    vars = c_var.vars
    one = ParamPoly.constant(vars, 1)
    table = {(0, 0): one}
    for _ in range(i):
        table = _mul_linear(table, {(1, 0): c_var, (0, 1): s_var})
    for _ in range(j):
        table = _mul_linear(table, {(1, 0): -s_var, (0, 1): c_var})
    _circle_cache[key] = table
    return table


def _mul_linear(table: dict, lin: dict) -> dict:
    out: dict = {}
    for (iu, iv), p in table.items():
        for (du, dv), q in lin.items():
            _tab_add(out, (iu + du, iv + dv), p * q)
    return out


def _tan_half_substitution(p: ParamPoly, vars) -> list:
    """c = (1-t^2)/(1+t^2), s = 2t/(1+t^2); clear (1+t^2)^deg."""
    terms = list(p.iter_terms())
    deg = max(ec + es for (ec, es), _c in terms)
    # numerators as coefficient lists in t
    c_num = [mpq(1), mpq(0), mpq(-1)]
    s_num = [mpq(0), mpq(2)]
    unit = [mpq(1), mpq(0), mpq(1)]
    out = [mpq(0)] * (2 * deg + 1)
    for (ec, es), coeff in terms:
        term = [coeff]
        for _ in range(ec):
            term = _upoly_mul(term, c_num)
        for _ in range(es):
            term = _upoly_mul(term, s_num)
        for _ in range(deg - ec - es):
            term = _upoly_mul(term, unit)
        for k, v in enumerate(term):
            out[k] = out[k] + v
    while len(out) > 1 and scalar_is_zero(out[-1]):
        out.pop()
    return out


# -- exact univariate helpers (Sturm) ----------------------------------------


def _upoly_mul(a: list, b: list) -> list:
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if scalar_is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _upoly_trim(a: list) -> list:
    while len(a) > 1 and scalar_is_zero(a[-1]):
        a = a[:-1]
    return a


def _upoly_rem(a: list, b: list) -> list:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = (1 / lb) if not isinstance(lb, QuadNum) else lb.inverse()
    while len(a) - 1 >= db and not all(scalar_is_zero(v) for v in a):
        a = _upoly_trim(a)
        if len(a) - 1 < db:
            break
        factor = a[-1] * inv
        shift = len(a) - 1 - db
        for k in range(len(b)):
            a[shift + k] = a[shift + k] - factor * b[k]
        a = a[:-1]
        if not a:
            a = [mpq(0)]
    return _upoly_trim(a)


def _upoly_gcd(a: list, b: list) -> list:
    a, b = _upoly_trim(list(a)), _upoly_trim(list(b))
    while not (len(b) == 1 and scalar_is_zero(b[0])):
        a, b = b, _upoly_rem(a, b)
    lead = a[-1]
    inv = (1 / lead) if not isinstance(lead, QuadNum) else lead.inverse()
    return [v * inv for v in a]


def _upoly_deriv(a: list) -> list:
    if len(a) == 1:
        return [mpq(0)]
    return [a[k] * k for k in range(1, len(a))]


def _sign(v) -> int:
    if isinstance(v, QuadNum):
        return v.sign()
    return -1 if v < 0 else (1 if v > 0 else 0)


def _count_real_roots(p: list) -> int:
    """Number of distinct real roots via a Sturm chain over the exact field."""
    p = _upoly_trim(list(p))
    if len(p) == 1:
        return 0
    # squarefree part
    sq = _upoly_gcd(p, _upoly_deriv(p))
    if len(sq) > 1:
        p = _upoly_quotient(p, sq)
    chain = [p, _upoly_deriv(p)]
    while len(chain[-1]) > 1 or not scalar_is_zero(chain[-1][0]):
        r = _upoly_rem(chain[-2], chain[-1])
        r = [-v for v in r]
        if len(r) == 1 and scalar_is_zero(r[0]):
            break
        chain.append(r)

    def variations(at_inf: int) -> int:
        signs = []
        for q in chain:
            s = _sign(q[-1])
            if at_inf < 0 and (len(q) - 1) % 2 == 1:
                s = -s
            if s:
                signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(-1) - variations(+1)


def _upoly_quotient(a: list, b: list) -> list:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = (1 / lb) if not isinstance(lb, QuadNum) else lb.inverse()
    out = [mpq(0)] * (len(a) - db)
    while len(a) - 1 >= db:
        a = _upoly_trim(a)
        if len(a) - 1 < db:
            break
        factor = a[-1] * inv
        shift = len(a) - 1 - db
        out[shift] = factor
        for k in range(len(b)):
            a[shift + k] = a[shift + k] - factor * b[k]
        a = a[:-1]
        if not a:
            break
    return _upoly_trim(out)
