"""Truncated power series in one formal variable over ParamPoly coefficients.

A series of order N carries exact coefficients c_0..c_N and makes no claim
beyond x^N.  Arithmetic propagates the minimum truncation order of its
operands; integration raises the order by one, differentiation lowers it.
Reversion uses quadratically convergent Newton refinement; its contract is
the two-sided compose identity, which the test suite re-checks.
"""

from __future__ import annotations

import math

from gmpy2 import mpq

from .poly import ParamPoly
from .scalars import scalar_is_zero

DEFAULT_ORDER = 44


class XSeries:
    """Dense truncated series; coefficients are ParamPoly over one registry."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: tuple[str, ...], coeffs: list[ParamPoly]):
        self.vars = vars
        self.coeffs = coeffs

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_scalars(cls, vars, scalars, order: int | None = None) -> "XSeries":
        vars = tuple(vars)
        cs = [ParamPoly.constant(vars, c) for c in scalars]
        if order is not None:
            cs = _pad(vars, cs, order)
        return cls(vars, cs)

    @classmethod
    def zero(cls, vars, order: int) -> "XSeries":
        vars = tuple(vars)
        z = ParamPoly.zero(vars)
        return cls(vars, [z] * (order + 1))

    @classmethod
    def constant(cls, vars, c, order: int) -> "XSeries":
        vars = tuple(vars)
        cs = [ParamPoly.constant(vars, c)]
        return cls(vars, _pad(vars, cs, order))

    @classmethod
    def identity(cls, vars, order: int) -> "XSeries":
        """The series x."""
        vars = tuple(vars)
        cs = [ParamPoly.zero(vars), ParamPoly.constant(vars, 1)]
        return cls(vars, _pad(vars, cs, order))

    # -- queries ----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> ParamPoly:
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation {self.order}")
        return self.coeffs[k]

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def first_nonzero(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if not c.is_zero:
                return k
        return None

    def truncate(self, order: int) -> "XSeries":
        if order >= self.order:
            return XSeries(self.vars, _pad(self.vars, list(self.coeffs), order))
        return XSeries(self.vars, self.coeffs[:order + 1])

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all((self.coeffs[k] - other.coeffs[k]).is_zero
                   for k in range(n + 1))

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "XSeries"):
        if self.vars != other.vars:
            raise ValueError("series registries differ")

    def __add__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        self._check(other)
        n = min(self.order, other.order)
        return XSeries(self.vars, [self.coeffs[k] + other.coeffs[k]
                                   for k in range(n + 1)])

    def __sub__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        self._check(other)
        n = min(self.order, other.order)
        return XSeries(self.vars, [self.coeffs[k] - other.coeffs[k]
                                   for k in range(n + 1)])

    def __neg__(self):
        return XSeries(self.vars, [-c for c in self.coeffs])

    def scalar_mul(self, c) -> "XSeries":
        return XSeries(self.vars, [p.scalar_mul(c) for p in self.coeffs])

    def poly_mul(self, p: ParamPoly) -> "XSeries":
        return XSeries(self.vars, [q * p for q in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        self._check(other)
        n = min(self.order, other.order)
        A, B = self.coeffs, other.coeffs
        vars = self.vars
        out = []
        for m in range(n + 1):
            acc: dict = {}
            for i in range(m + 1):
                a = A[i]
                if not a.terms:
                    continue
                b = B[m - i]
                if b.terms:
                    _acc_product(acc, a.terms, b.terms)
            out.append(ParamPoly(vars, acc))
        return XSeries(vars, out)

    def shift_up(self, k: int = 1) -> "XSeries":
        """Multiply by x^k (order bookkeeping grows by k)."""
        z = ParamPoly.zero(self.vars)
        return XSeries(self.vars, [z] * k + list(self.coeffs))

    def shift_down(self, k: int = 1) -> "XSeries":
        """Divide by x^k; requires the first k coefficients to vanish."""
        if any(not c.is_zero for c in self.coeffs[:k]):
            raise ValueError(f"series is not divisible by x^{k}")
        return XSeries(self.vars, self.coeffs[k:])

    # -- calculus -------------------------------------------------------------

    def differentiate(self) -> "XSeries":
        if self.order == 0:
            return XSeries.zero(self.vars, 0)
        return XSeries(self.vars, [self.coeffs[k].scalar_mul(mpq(k))
                                   for k in range(1, self.order + 1)])

    def integrate(self) -> "XSeries":
        """Term-wise antiderivative vanishing at 0; order grows by one."""
        out = [ParamPoly.zero(self.vars)]
        for k, c in enumerate(self.coeffs):
            out.append(c.scalar_div(mpq(k + 1)) if not c.is_zero else c)
        return XSeries(self.vars, out)

    # -- analytic operations ----------------------------------------------------

    def inverse(self) -> "XSeries":
        """Reciprocal 1/s for a unit series (invertible scalar constant term)."""
        c0 = self.coeffs[0]
        if not c0.is_constant() or c0.is_zero:
            raise ValueError("series is not a unit: constant term must be "
                             "a nonzero scalar")
        u0 = c0.constant_value()
        inv0 = 1 / u0 if not hasattr(u0, "inverse") else u0.inverse()
        n = self.order
        out = [ParamPoly.constant(self.vars, inv0)]
        for m in range(1, n + 1):
            acc: dict = {}
            for k in range(1, m + 1):
                a = self.coeffs[k]
                if not a.terms:
                    continue
                b = out[m - k]
                if b.terms:
                    _acc_product(acc, a.terms, b.terms)
            out.append(ParamPoly(self.vars, acc).scalar_mul(-inv0))
        return XSeries(self.vars, out)

    def exp(self) -> "XSeries":
        """exp(s) for s with zero constant term, by the exact recurrence
        (n+1) e_{n+1} = sum_k (k+1) s_{k+1} e_{n-k}."""
        if not self.coeffs[0].is_zero:
            raise ValueError("exp needs a zero constant term")
        n = self.order
        out = [ParamPoly.constant(self.vars, 1)]
        for m in range(1, n + 1):
            acc: dict = {}
            for k in range(1, m + 1):
                a = self.coeffs[k]
                if not a.terms:
                    continue
                b = out[m - k]
                if b.terms:
                    _acc_product(acc, a.terms, b.terms, mpq(k))
            out.append(ParamPoly(self.vars, acc).scalar_mul(mpq(1, m)))
        return XSeries(self.vars, out)

    def log(self) -> "XSeries":
        """log(s) for a unit series with constant term exactly 1."""
        c0 = self.coeffs[0]
        if not (c0.is_constant() and not c0.is_zero
                and c0.constant_value() == 1):
            raise ValueError("log needs constant term 1")
        # n u_0 L_n = n u_n - sum_{k<n} k L_k u_{n-k}
        n = self.order
        out = [ParamPoly.zero(self.vars)]
        for m in range(1, n + 1):
            acc = dict(self.coeffs[m].scalar_mul(mpq(m)).terms)
            for k in range(1, m):
                a = out[k]
                if not a.terms:
                    continue
                b = self.coeffs[m - k]
                if b.terms:
                    _acc_product(acc, a.terms, b.terms, mpq(-k))
            out.append(ParamPoly(self.vars, acc).scalar_mul(mpq(1, m)))
        return XSeries(self.vars, out)

    def sqrt_unit(self) -> "XSeries":
        """Square root with value 1 at 0; requires constant term exactly 1.

        Coefficients stay in the scalar field: this is the binomial expansion
        computed by the recurrence s_n = 2 t_n + sum_{0<k<n} t_k t_{n-k}.
        """
        c0 = self.coeffs[0]
        if not (c0.is_constant() and not c0.is_zero
                and c0.constant_value() == 1):
            raise ValueError("sqrt_unit needs constant term 1")
        n = self.order
        half = mpq(1, 2)
        out = [ParamPoly.constant(self.vars, 1)]
        for m in range(1, n + 1):
            acc = dict(self.coeffs[m].terms)
            minus_one = mpq(-1)
            for k in range(1, m):
                a = out[k]
                if not a.terms:
                    continue
                b = out[m - k]
                if b.terms:
                    _acc_product(acc, a.terms, b.terms, minus_one)
            out.append(ParamPoly(self.vars, acc).scalar_mul(half))
        return XSeries(self.vars, out)

    def compose(self, inner: "XSeries") -> "XSeries":
        """self(inner); inner must have zero constant term.

        Brent-Kung block evaluation: split the outer coefficients into
        blocks of size ~sqrt(N) so only ~2 sqrt(N) full series products are
        needed instead of N.
        """
        self._check(inner)
        if not inner.coeffs[0].is_zero:
            raise ValueError("compose needs inner constant term 0")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        if n == 0:
            return XSeries(self.vars, [self.coeffs[0]])
        b = max(1, math.isqrt(n) + 1)
        pows = [XSeries.constant(self.vars, 1, n), inner]
        for _ in range(2, b + 1):
            pows.append(pows[-1] * inner)
        big = pows[b]
        blocks = (n + b) // b  # ceil((n+1)/b)
        res = XSeries.zero(self.vars, n)
        for g in range(blocks - 1, -1, -1):
            if not res.is_zero:
                res = res * big
            for r in range(b):
                k = g * b + r
                if k <= n and not self.coeffs[k].is_zero:
                    res = res + pows[r].poly_mul(self.coeffs[k])
        return res

    def reverse(self) -> "XSeries":
        """Compositional inverse r with self(r(w)) = w; needs s(0)=0, s'(0)=1.

        Newton refinement r <- r - (s(r) - w)/s'(r) with doubling working
        order, finished with exact compose verification.
        """
        if not self.coeffs[0].is_zero:
            raise ValueError("reversion needs zero constant term")
        c1 = self.coeffs[1]
        if not (c1.is_constant() and c1.constant_value() == 1):
            raise ValueError("reversion needs unit linear coefficient")
        n = self.order
        ds = self.differentiate()
        r = XSeries.identity(self.vars, 1)
        m = 1
        while m < n:
            m = min(2 * m, n)
            r = r.truncate(m)
            err = self.truncate(m).compose(r) - XSeries.identity(self.vars, m)
            if err.is_zero:
                continue
            corr = err * ds.truncate(m).compose(r).inverse()
            r = r - corr
        return r

    # -- numerics ----------------------------------------------------------------

    def substitute_params(self, values: dict) -> "XSeries":
        keep = tuple(v for v in self.vars if v not in values)
        return XSeries(keep, [c.substitute(values) for c in self.coeffs])

    def float_coeffs(self) -> list[float]:
        out = []
        for c in self.coeffs:
            if not c.is_constant():
                raise ValueError("series still has free parameters")
            out.append(float(c.constant_value()))
        return out

    def eval_float(self, x: float) -> float:
        cs = self.float_coeffs()
        acc = 0.0
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        bits = [f"({c!r})*x^{k}" for k, c in enumerate(self.coeffs)
                if not c.is_zero]
        body = " + ".join(bits[:8]) if bits else "0"
        return f"XSeries[N={self.order}]({body} + ...)"


def _pad(vars, coeffs: list[ParamPoly], order: int) -> list[ParamPoly]:
    z = ParamPoly.zero(vars)
    while len(coeffs) < order + 1:
        coeffs.append(z)
    return coeffs[:order + 1]


def _acc_product(acc: dict, ta: dict, tb: dict, scale=None):
    """Merge the term-product ta*tb (optionally scaled) into accumulator acc.

    Shared hot path of convolution-style recurrences: avoids building
    intermediate ParamPoly values.  Exponents are packed ints, so monomial
    products are integer adds.  The accumulator never stores zeros.
    """
    get = acc.get
    for ea, ca in ta.items():
        if scale is not None:
            ca = ca * scale
        for eb, cb in tb.items():
            e = ea + eb
            v = get(e)
            if v is None:
                acc[e] = ca * cb
            else:
                v = v + ca * cb
                if v == 0:
                    del acc[e]
                else:
                    acc[e] = v
