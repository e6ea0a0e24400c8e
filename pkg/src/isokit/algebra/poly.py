"""Sparse multivariate polynomials in parameter symbols, and monomial orders.

A ParamPoly is a map from exponent vectors to exact scalars (Rat or QuadNum)
over a fixed, ordered variable registry.  All arithmetic is exact; zero
coefficients are never stored.  Monomial orders cover lex / grevlex and
their weighted variants, the weights being positive integers per variable.

Exponent vectors are packed into a single int, 16 bits per variable with
the first variable most significant, so a monomial product is an integer
addition and packed ints compare exactly like lex on the tuples.  The
helpers exp_encode/exp_decode translate; iter_terms yields decoded tuples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from gmpy2 import mpq, mpz

from .scalars import QuadNum, RAT_ONE, scalar_is_zero, scalar_sign

_COEFF_VAR = re.compile(r"^[ab](\d)(\d)$")

FIELD_BITS = 16
_FIELD_MASK = (1 << FIELD_BITS) - 1
_EXP_LIMIT = 1 << (FIELD_BITS - 1)  # keep the top bit free for carry tricks


def exp_encode(exp) -> int:
    packed = 0
    for e in exp:
        if not 0 <= e < _EXP_LIMIT:
            raise ValueError(f"exponent {e} out of range")
        packed = (packed << FIELD_BITS) | e
    return packed


def exp_decode(packed: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = packed & _FIELD_MASK
        packed >>= FIELD_BITS
    return tuple(out)


def exp_guard(n: int) -> int:
    """Int with the top bit of each of the n fields set (divisibility test)."""
    g = 0
    for _ in range(n):
        g = (g << FIELD_BITS) | (_FIELD_MASK + 1) >> 1
    return g


def exp_divides(a: int, b: int, guard: int) -> bool:
    """Field-wise a_i <= b_i.  Exponents stay below 2^15, so each field's
    borrow is absorbed by its own guard bit and never crosses fields."""
    return ((b | guard) - a) & guard == guard


def auto_weight(name: str) -> int:
    """Weight i+j-1 for coefficient symbols a<i><j>/b<i><j>, else 1."""
    m = _COEFF_VAR.match(name)
    if m:
        i, j = int(m.group(1)), int(m.group(2))
        return max(i + j - 1, 1)
    return 1


def auto_weights(vars: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(auto_weight(v) for v in vars)


@dataclass(frozen=True)
class MonomialOrder:
    """Total monomial order: lex, grevlex, or their weighted forms."""

    kind: str  # "lex" | "grevlex" | "weighted-lex" | "weighted-grevlex"
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "weighted-lex", "weighted-grevlex"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind.startswith("weighted"):
            if not self.weights or any(w <= 0 for w in self.weights):
                raise ValueError("weighted orders need positive weights")

    def key_fn(self, nvars: int):
        """Key on packed exponents: greater key = greater monomial."""
        if self.kind == "lex":
            return lambda p: p  # big-endian packing compares like lex
        if self.kind == "grevlex":
            def key(p, n=nvars):
                exp = exp_decode(p, n)
                return (sum(exp), tuple(-e for e in reversed(exp)))
            return key
        weights = self.weights
        if len(weights) != nvars:
            raise ValueError("weight count does not match variable count")
        if self.kind == "weighted-lex":
            def key(p, n=nvars, w=weights):
                exp = exp_decode(p, n)
                return (sum(wi * e for wi, e in zip(w, exp)), exp)
            return key

        def key(p, n=nvars, w=weights):
            exp = exp_decode(p, n)
            return (sum(wi * e for wi, e in zip(w, exp)),
                    tuple(-e for e in reversed(exp)))
        return key

    def key_tuple(self, exp: tuple[int, ...]):
        return self.key_fn(len(exp))(exp_encode(exp))


def lex_order() -> MonomialOrder:
    return MonomialOrder("lex")


def grevlex_order() -> MonomialOrder:
    return MonomialOrder("grevlex")


def weighted_grevlex(weights) -> MonomialOrder:
    return MonomialOrder("weighted-grevlex", tuple(weights))


def weighted_lex(weights) -> MonomialOrder:
    return MonomialOrder("weighted-lex", tuple(weights))


class ParamPoly:
    """Exact sparse polynomial over a fixed variable registry.

    Treated as immutable after construction.  `terms` maps packed exponents
    to nonzero scalars; the raw constructor trusts its input.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: dict):
        self.vars = vars
        self.terms = terms

    # -- constructors -------------------------------------------------

    @classmethod
    def make(cls, vars, terms) -> "ParamPoly":
        """Normalizing constructor from {exponent tuple: scalar}."""
        vars = tuple(vars)
        nv = len(vars)
        out: dict = {}
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != nv:
                raise ValueError("exponent length does not match registry")
            if isinstance(c, int):
                c = mpq(c)
            if scalar_is_zero(c):
                continue
            key = exp_encode(exp)
            if key in out:
                v = out[key] + c
                if scalar_is_zero(v):
                    del out[key]
                else:
                    out[key] = v
            else:
                out[key] = c
        return cls(vars, out)

    @classmethod
    def zero(cls, vars) -> "ParamPoly":
        return cls(tuple(vars), {})

    @classmethod
    def constant(cls, vars, c) -> "ParamPoly":
        vars = tuple(vars)
        if isinstance(c, int):
            c = mpq(c)
        if scalar_is_zero(c):
            return cls(vars, {})
        return cls(vars, {0: c})

    @classmethod
    def variable(cls, vars, name) -> "ParamPoly":
        vars = tuple(vars)
        i = vars.index(name)
        return cls(vars, {1 << (FIELD_BITS * (len(vars) - 1 - i)): RAT_ONE})

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """Scalar value of a constant polynomial."""
        if not self.terms:
            return mpq(0)
        if len(self.terms) == 1 and 0 in self.terms:
            return self.terms[0]
        raise ValueError("polynomial is not constant")

    def iter_terms(self):
        """Yield (exponent tuple, coefficient) pairs, decoded."""
        n = len(self.vars)
        for packed, c in self.terms.items():
            yield exp_decode(packed, n), c

    def _check(self, other: "ParamPoly"):
        if self.vars is not other.vars and self.vars != other.vars:
            raise ValueError(
                f"variable registries differ: {self.vars} vs {other.vars}")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp)
            if v is None:
                out[exp] = c
            else:
                v = v + c
                if scalar_is_zero(v):
                    del out[exp]
                else:
                    out[exp] = v
        return ParamPoly(self.vars, out)

    def __sub__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp)
            if v is None:
                out[exp] = -c
            else:
                v = v - c
                if scalar_is_zero(v):
                    del out[exp]
                else:
                    out[exp] = v
        return ParamPoly(self.vars, out)

    def __neg__(self):
        return ParamPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check(other)
        ta, tb = self.terms, other.terms
        if not ta or not tb:
            return ParamPoly(self.vars, {})
        if len(ta) == 1 and 0 in ta:
            return other.scalar_mul(ta[0])
        if len(tb) == 1 and 0 in tb:
            return self.scalar_mul(tb[0])
        out: dict = {}
        for ea, ca in ta.items():
            for eb, cb in tb.items():
                e = ea + eb
                v = out.get(e)
                if v is None:
                    out[e] = ca * cb
                else:
                    v = v + ca * cb
                    if scalar_is_zero(v):
                        del out[e]
                    else:
                        out[e] = v
        return ParamPoly(self.vars, out)

    def scalar_mul(self, c):
        if scalar_is_zero(c):
            return ParamPoly(self.vars, {})
        if c == 1:
            return self
        return ParamPoly(self.vars, {e: v * c for e, v in self.terms.items()})

    def scalar_div(self, c):
        """Exact division by a nonzero scalar."""
        if scalar_is_zero(c):
            raise ZeroDivisionError("division by zero scalar")
        if isinstance(c, QuadNum):
            return self.scalar_mul(c.inverse())
        return ParamPoly(self.vars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = ParamPoly.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    # -- degrees and orders ---------------------------------------------

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        n = len(self.vars)
        return max(sum(exp_decode(e, n)) for e in self.terms)

    def weighted_degree(self, weights) -> int | None:
        """Common weighted degree of all terms, or None if inhomogeneous.

        Raises ValueError on the zero polynomial (no degree to report).
        """
        weights = tuple(weights)
        if len(weights) != len(self.vars) or any(w <= 0 for w in weights):
            raise ValueError("weights must be positive, one per variable")
        if not self.terms:
            raise ValueError("zero polynomial has no weighted degree")
        n = len(self.vars)
        deg = None
        for packed in self.terms:
            exp = exp_decode(packed, n)
            d = sum(w * e for w, e in zip(weights, exp))
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg

    def leading_term(self, order: MonomialOrder):
        """(packed exponent, coefficient) of the greatest monomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=order.key_fn(len(self.vars)))
        return exp, self.terms[exp]

    def sorted_terms(self, order: MonomialOrder, reverse: bool = True):
        """Decoded (exponent tuple, coefficient) pairs, greatest first."""
        key = order.key_fn(len(self.vars))
        packed = sorted(self.terms, key=key, reverse=reverse)
        n = len(self.vars)
        return [(exp_decode(e, n), self.terms[e]) for e in packed]

    # -- substitution ----------------------------------------------------

    def substitute(self, values: dict) -> "ParamPoly":
        """Substitute scalars for some variables; result drops those variables."""
        for name in values:
            if name not in self.vars:
                raise ValueError(f"unknown variable {name!r}")
        keep = tuple(v for v in self.vars if v not in values)
        idx_keep = [i for i, v in enumerate(self.vars) if v not in values]
        idx_sub = [(i, values[v]) for i, v in enumerate(self.vars)
                   if v in values]
        n = len(self.vars)
        out: dict = {}
        for packed, c in self.terms.items():
            exp = exp_decode(packed, n)
            for i, val in idx_sub:
                if exp[i]:
                    if isinstance(val, int):
                        val = mpq(val)
                    c = c * val ** exp[i]
            if scalar_is_zero(c):
                continue
            e = exp_encode(tuple(exp[i] for i in idx_keep))
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if scalar_is_zero(v):
                    del out[e]
                else:
                    out[e] = v
        return ParamPoly(keep, out)

    def evaluate(self, values: dict):
        """Evaluate with scalars for every variable."""
        return self.substitute(values).constant_value()

    def extend(self, new_vars) -> "ParamPoly":
        """Re-embed into a larger registry containing the current variables."""
        new_vars = tuple(new_vars)
        pos = [new_vars.index(v) for v in self.vars]
        n_old, n_new = len(self.vars), len(new_vars)
        out = {}
        for packed, c in self.terms.items():
            exp = exp_decode(packed, n_old)
            e = [0] * n_new
            for p, k in zip(pos, exp):
                e[p] = k
            out[exp_encode(e)] = c
        return ParamPoly(new_vars, out)

    def float_evaluate(self, values: dict[str, float]) -> float:
        total = 0.0
        for exp, c in self.iter_terms():
            t = float(c)
            for name, e in zip(self.vars, exp):
                if e:
                    t *= values[name] ** e
            total += t
        return total

    # -- normal forms -----------------------------------------------------

    def monic(self, order: MonomialOrder) -> "ParamPoly":
        if not self.terms:
            return self
        _, lc = self.leading_term(order)
        return self.scalar_div(lc)

    def primitive_signed(self, order: MonomialOrder) -> "ParamPoly":
        """Content-free, sign-normalized copy (leading coefficient positive).

        Over Q the content (gcd of coefficients) is divided out; when any
        coefficient is irrational the polynomial is made monic instead.
        """
        if not self.terms:
            return self
        if any(isinstance(c, QuadNum) for c in self.terms.values()):
            return self.monic(order)
        den_lcm = 1
        for c in self.terms.values():
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, int(c.denominator))
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, int(c.numerator * den_lcm // c.denominator))
        scale = mpq(den_lcm, num_gcd)
        _, lc = self.leading_term(order)
        if scalar_sign(lc) < 0:
            scale = -scale
        return self.scalar_mul(scale)

    def __repr__(self):
        if not self.terms:
            return "ParamPoly(0)"
        bits = []
        for exp, c in sorted(self.iter_terms()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(self.vars, exp) if e)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "ParamPoly(" + " + ".join(bits) + ")"


def radical_tag(p: ParamPoly) -> int | None:
    """The d of any QuadNum coefficient, or None for a purely rational poly."""
    for c in p.terms.values():
        if isinstance(c, QuadNum):
            return c.d
    return None
