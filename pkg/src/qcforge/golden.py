"""Exact arithmetic over the golden field Q(t), t = (1 + sqrt(5))/2.

A value is stored as a + b*t with rational a, b. Multiplication closes via
the defining relation t*t = t + 1; division rationalizes against the Galois
conjugate (t -> 1 - t, i.e. sqrt(5) -> -sqrt(5)). Sign, ordering, floor and
the float view are exact decision procedures: no floating-point threshold
ever decides anything.

Handy identities used throughout the package, all consequences of t*t = t+1
with s := t - 1 = 1/t:

    s*t = 1        s = (sqrt(5) - 1)/2       sqrt(5) = 2t - 1
    s*s = 2 - t    t + s = sqrt(5)           t - s = 1
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

Rational = Union[int, Fraction]
GoldenLike = Union["GoldenNum", int, Fraction]

_LITERAL = _re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*t\s*$")


class GoldenNum:
    """Immutable element a + b*t of the golden field.

    Supports +, -, *, / (exact), integer powers, total ordering, exact
    floor/ceil, hashing, and a correctly rounded float view.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)

    # -- ring structure -------------------------------------------------

    def __add__(self, other: GoldenLike) -> "GoldenNum":
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return GoldenNum(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: GoldenLike) -> "GoldenNum":
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return GoldenNum(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: GoldenLike) -> "GoldenNum":
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return GoldenNum(o.a - self.a, o.b - self.b)

    def __mul__(self, other: GoldenLike) -> "GoldenNum":
        o = as_golden(other)
        if o is None:
            return NotImplemented
        # (a1 + b1 t)(a2 + b2 t), then t^2 = t + 1
        bb = self.b * o.b
        return GoldenNum(self.a * o.a + bb, self.a * o.b + self.b * o.a + bb)

    __rmul__ = __mul__

    def __truediv__(self, other: GoldenLike) -> "GoldenNum":
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: GoldenLike) -> "GoldenNum":
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "GoldenNum":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = ONE
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self) -> "GoldenNum":
        return GoldenNum(-self.a, -self.b)

    def __pos__(self) -> "GoldenNum":
        return self

    def __abs__(self) -> "GoldenNum":
        return -self if self.sign() < 0 else self

    # -- field structure -------------------------------------------------

    def conjugate(self) -> "GoldenNum":
        """Galois conjugate: t -> 1 - t (equivalently sqrt(5) -> -sqrt(5))."""
        return GoldenNum(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        """Field norm x * conj(x) = a^2 + a b - b^2, a rational."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inverse(self) -> "GoldenNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero golden number")
        c = self.conjugate()
        return GoldenNum(c.a / n, c.b / n)

    # -- order structure ---------------------------------------------------

    def sign(self) -> int:
        """Exact sign of the real value a + b*t, in {-1, 0, 1}.

        Writes the value as (u + v*sqrt(5))/2 with u = 2a + b, v = b. Mixed
        signs of (u, v) are resolved by comparing u^2 with 5 v^2; ties are
        impossible because sqrt(5) is irrational.
        """
        u = 2 * self.a + self.b
        v = self.b
        if u == 0 and v == 0:
            return 0
        if u >= 0 and v >= 0:
            return 1
        if u <= 0 and v <= 0:
            return -1
        if u > 0:  # v < 0
            return 1 if u * u > 5 * v * v else -1
        return -1 if u * u > 5 * v * v else 1

    def __eq__(self, other: object) -> bool:
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __ne__(self, other: object) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other: GoldenLike) -> bool:
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other: GoldenLike) -> bool:
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other: GoldenLike) -> bool:
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other: GoldenLike) -> bool:
        o = as_golden(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __hash__(self) -> int:
        # rational values must hash like their Fraction/int counterparts
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    # -- integer rounding --------------------------------------------------

    def __floor__(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        # bracket |x| <= |a| + 2|b|, then binary search on exact comparisons
        m = int(abs(self.a) + 2 * abs(self.b)) + 1
        lo, hi = -m, m
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if (self - mid).sign() >= 0:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def floor(self) -> int:
        return self.__floor__()

    # -- float view ----------------------------------------------------------

    def __float__(self) -> float:
        """Correctly rounded double of the exact value.

        Brackets sqrt(5) between isqrt-derived dyadic rationals and widens
        the working precision until both interval ends round to the same
        double.
        """
        u = 2 * self.a + self.b
        v = self.b
        if v == 0:
            return float(u / 2)
        lo = hi = Fraction(0)
        for k in (64, 128, 256, 512, 1024, 2048, 4096):
            s = math.isqrt(5 << (2 * k))  # floor(sqrt(5) * 2^k)
            r5_lo = Fraction(s, 1 << k)
            r5_hi = Fraction(s + 1, 1 << k)
            if v > 0:
                lo, hi = (u + v * r5_lo) / 2, (u + v * r5_hi) / 2
            else:
                lo, hi = (u + v * r5_hi) / 2, (u + v * r5_lo) / 2
            flo, fhi = float(lo), float(hi)
            if flo == fhi:
                return flo
        return float((lo + hi) / 2)  # pragma: no cover - never reached

    # -- text ------------------------------------------------------------------

    def __str__(self) -> str:
        if self.b >= 0:
            return f"{self.a} + {self.b} t"
        return f"{self.a} - {-self.b} t"

    def __repr__(self) -> str:
        return f"GoldenNum({self.a}, {self.b})"

    @staticmethod
    def parse(text: str) -> "GoldenNum":
        """Inverse of str(): accepts the canonical 'a +/- b t' form."""
        m = _LITERAL.match(text)
        if not m:
            raise ValueError(f"not a golden number literal: {text!r}")
        b = Fraction(m.group(3))
        return GoldenNum(Fraction(m.group(1)), -b if m.group(2) == "-" else b)


def as_golden(v: object) -> Optional[GoldenNum]:
    """Coerce int/Fraction to GoldenNum; None when the type is foreign."""
    if isinstance(v, GoldenNum):
        return v
    if isinstance(v, (int, Fraction)):
        return GoldenNum(v)
    return None


def golden(a: Rational = 0, b: Rational = 0) -> GoldenNum:
    """Shorthand constructor, golden(a, b) = a + b*t."""
    return GoldenNum(a, b)


ZERO = GoldenNum(0, 0)
ONE = GoldenNum(1, 0)
TAU = GoldenNum(0, 1)
SIGMA = GoldenNum(-1, 1)  # 1/t = t - 1
SQRT5 = GoldenNum(-1, 2)  # 2t - 1
HALF = GoldenNum(Fraction(1, 2), 0)


# -- operations ----------------------------------------------------------------


def golden_mul(x: GoldenLike, y: GoldenLike) -> GoldenNum:
    """Exact product in the golden field."""
    gx, gy = as_golden(x), as_golden(y)
    if gx is None or gy is None:
        raise TypeError("golden_mul expects golden numbers or rationals")
    return gx * gy


def golden_conjugate(x: GoldenLike) -> GoldenNum:
    """Galois conjugate t -> 1 - t."""
    gx = as_golden(x)
    if gx is None:
        raise TypeError("golden_conjugate expects a golden number or rational")
    return gx.conjugate()


def golden_sign(x: GoldenLike) -> int:
    """Exact sign in {-1, 0, 1}, computed without floating point."""
    gx = as_golden(x)
    if gx is None:
        raise TypeError("golden_sign expects a golden number or rational")
    return gx.sign()


def euclidean_part(x: GoldenLike) -> Fraction:
    """The map a + b*t -> a + b.

    Writing x = A + B*sqrt(5) (A = a + b/2, B = b/2), this is A + B. It is
    additive and rational-linear; applied to quaternionic norms it yields
    the Euclidean norm used for the root-lattice embedding.
    """
    gx = as_golden(x)
    if gx is None:
        raise TypeError("euclidean_part expects a golden number or rational")
    return gx.a + gx.b


@dataclass(frozen=True)
class DirichletFlag:
    """Result of the integrality test for a + b*t with integer a, b."""

    is_dirichlet: bool
    witness: Optional[Tuple[int, int]] = None


def dirichlet_flag(x: GoldenLike) -> DirichletFlag:
    """Test membership in Z[t]; the witness reproduces the value exactly."""
    gx = as_golden(x)
    if gx is None:
        raise TypeError("dirichlet_flag expects a golden number or rational")
    if gx.a.denominator == 1 and gx.b.denominator == 1:
        return DirichletFlag(True, (gx.a.numerator, gx.b.numerator))
    return DirichletFlag(False, None)
