"""Exact scalar arithmetic: rationals and a single quadratic extension.

The coefficient field is either Q or Q(sqrt(d)) for one fixed square-free
d > 1 per computation.  Rationals are gmpy2.mpq (arbitrary precision,
always stored reduced with positive denominator).  Quadratic numbers are
a + b*sqrt(d); arithmetic that cancels the radical part demotes the result
back to a plain rational, so a value is a QuadNum only when it is genuinely
irrational.
"""

from __future__ import annotations

from gmpy2 import is_square, isqrt, mpq, mpz

Rat = mpq

RAT_ZERO = mpq(0)
RAT_ONE = mpq(1)


class MixedRadicalError(ValueError):
    """Arithmetic between Q(sqrt(d)) values with different d."""


def _square_free(n: int) -> bool:
    if n <= 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class QuadNum:
    """a + b*sqrt(d) with rational a, b and square-free integer d > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if not _square_free(int(d)):
            raise ValueError(f"d must be square-free and > 1, got {d}")
        self.a = mpq(a)
        self.b = mpq(b)
        self.d = int(d)

    @staticmethod
    def make(a, b, d: int):
        """Build a + b*sqrt(d), demoting to Rat when b == 0."""
        if b == 0:
            return mpq(a)
        return QuadNum(a, b, d)

    def _coerce(self, other):
        if isinstance(other, QuadNum):
            if other.d != self.d:
                raise MixedRadicalError(
                    f"cannot mix sqrt({self.d}) and sqrt({other.d})"
                )
            return other.a, other.b
        if isinstance(other, (int, mpz, mpq)):
            return mpq(other), RAT_ZERO
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return QuadNum.make(self.a + co[0], self.b + co[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return QuadNum.make(self.a - co[0], self.b - co[1], self.d)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return QuadNum.make(co[0] - self.a, co[1] - self.b, self.d)

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.d)

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b = co
        return QuadNum.make(self.a * a + self.b * b * self.d,
                            self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("quadratic number has zero norm")
        return QuadNum.make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadNum):
            return self * other.inverse()
        if isinstance(other, (int, mpz, mpq)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadNum.make(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        inv = self.inverse()
        return inv * other if isinstance(inv, QuadNum) else other * inv

    def __pow__(self, n: int):
        if n < 0:
            base = self.inverse()
            n = -n
        else:
            base = self
        out = RAT_ONE
        for _ in range(n):
            out = base * out
        return out

    def __eq__(self, other):
        if isinstance(other, QuadNum):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, mpz, mpq)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (1 if a > 0 else 0)
        if a == 0:
            return 1 if b > 0 else -1
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        # opposite signs: compare a^2 against b^2*d
        cmp = a * a - b * b * self.d
        # cmp == 0 impossible: sqrt(d) irrational
        return sa if cmp > 0 else sb

    def __lt__(self, other):
        diff = self - other
        return (diff.sign() if isinstance(diff, QuadNum) else
                (-1 if diff < 0 else (1 if diff > 0 else 0))) < 0

    def __float__(self):
        from math import sqrt
        return float(self.a) + float(self.b) * sqrt(self.d)

    def __repr__(self):
        return f"QuadNum({self.a}, {self.b}, {self.d})"


def scalar_is_zero(v) -> bool:
    if isinstance(v, QuadNum):
        return False  # QuadNum always has b != 0
    return v == 0


def scalar_neg(v):
    return -v


def scalar_float(v) -> float:
    return float(v)


def scalar_sign(v) -> int:
    if isinstance(v, QuadNum):
        return v.sign()
    return -1 if v < 0 else (1 if v > 0 else 0)


def scalar_sqrt(v, d: int | None = None):
    """Exact square root of a nonnegative rational, in Q or Q(sqrt(d)).

    Returns a Rat when v is a perfect rational square, b*sqrt(d) when v/d
    is one and d is given.  Raises ValueError otherwise.
    """
    v = mpq(v)
    if v < 0:
        raise ValueError("square root of negative rational")
    if v == 0:
        return RAT_ZERO
    num, den = v.numerator, v.denominator
    if is_square(num) and is_square(den):
        return mpq(isqrt(num), isqrt(den))
    if d is not None:
        w = v / d
        num, den = w.numerator, w.denominator
        if is_square(num) and is_square(den):
            return QuadNum(0, mpq(isqrt(num), isqrt(den)), d)
    raise ValueError(f"{v} has no exact square root in the scalar field")


def scalar_str(v) -> str:
    """Render a scalar in the expression grammar (e.g. -3/2, 2*sqrt2, 1+sqrt3)."""
    if isinstance(v, QuadNum):
        rad = f"sqrt{v.d}" if abs(v.b) == 1 else (
            f"{v.b}*sqrt{v.d}" if v.b > 0 else f"{-v.b}*sqrt{v.d}")
        rad = ("-" + rad) if v.b < 0 else rad
        if v.a == 0:
            return rad
        if v.b < 0:
            return f"({v.a}-{rad[1:]})"
        return f"({v.a}+{rad})"
    return str(v)
