"""Exact arithmetic in the ring Z[1/p] + Z[1/p]sqrt(d).

Elements are stored as integer triples ``(j, k, e)`` meaning
``(j + k*sqrt(d)) / p**e``.  The canonical form has ``e >= 0`` and, when
``e > 0``, ``p`` does not divide both ``j`` and ``k``; equality is then plain
field equality.  Nothing in this module touches floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from math import isqrt

from .exceptions import InvalidParams, NotAUnit, PerfectSquare
from .ntheory import is_prime, is_square, valuation


@dataclass(frozen=True)
class RingParams:
    """Radicand ``d`` and inverted prime ``p``."""

    d: int
    p: int

    def __post_init__(self):
        if self.d < 2:
            raise InvalidParams(f"radicand must be >= 2, got {self.d}")
        if is_square(self.d):
            raise PerfectSquare(f"{self.d} is a perfect square")
        if not is_prime(self.p):
            raise InvalidParams(f"{self.p} is not prime")
        if self.d % self.p == 0:
            raise InvalidParams(f"p={self.p} divides d={self.d}")

    def __call__(self, j: int = 0, k: int = 0, e: int = 0) -> QuadRat:
        return canonicalize(self, j, k, e)

    @property
    def one(self) -> QuadRat:
        return QuadRat(self, 1, 0, 0)

    @property
    def zero(self) -> QuadRat:
        return QuadRat(self, 0, 0, 0)

    @property
    def sqrt(self) -> QuadRat:
        return QuadRat(self, 0, 1, 0)


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def canonicalize(ring: RingParams, j: int, k: int, e: int) -> QuadRat:
    """Return the canonical representative of ``(j + k*sqrt(d)) / p**e``."""
    p = ring.p
    if e < 0:
        scale = p**-e
        j, k, e = j * scale, k * scale, 0
    if j == 0 and k == 0:
        return QuadRat(ring, 0, 0, 0)
    while e > 0 and j % p == 0 and k % p == 0:
        j, k, e = j // p, k // p, e - 1
    return QuadRat(ring, j, k, e)


@dataclass(frozen=True)
class QuadRat:
    """An element ``(j + k*sqrt(d)) / p**e``; build it via ``canonicalize``."""

    ring: RingParams
    j: int
    k: int
    e: int = 0

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> QuadRat:
        if isinstance(other, QuadRat):
            if other.ring != self.ring:
                raise ValueError("operands live in different rings")
            return other
        if isinstance(other, int):
            return canonicalize(self.ring, other, 0, 0)
        return NotImplemented

    def __add__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        e = max(self.e, y.e)
        p = self.ring.p
        sx, sy = p ** (e - self.e), p ** (e - y.e)
        return canonicalize(self.ring, self.j * sx + y.j * sy, self.k * sx + y.k * sy, e)

    __radd__ = __add__

    def __neg__(self) -> QuadRat:
        return QuadRat(self.ring, -self.j, -self.k, self.e)

    def __sub__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return self + (-y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        d = self.ring.d
        return canonicalize(
            self.ring,
            self.j * y.j + d * self.k * y.k,
            self.j * y.k + self.k * y.j,
            self.e + y.e,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return self * y.invert()

    def __pow__(self, n: int) -> QuadRat:
        if n < 0:
            return self.invert() ** -n
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> QuadRat:
        return QuadRat(self.ring, self.j, -self.k, self.e)

    def norm(self) -> QuadRat:
        """``x * conjugate(x)``, an element with zero sqrt(d) part."""
        return canonicalize(self.ring, self.j**2 - self.ring.d * self.k**2, 0, 2 * self.e)

    def is_unit(self) -> bool:
        """True when the norm is plus or minus a power of p."""
        n = self.norm()
        if n.j == 0:
            return False
        m = abs(n.j)
        return m == self.ring.p ** valuation(m, self.ring.p)

    def invert(self) -> QuadRat:
        if self.j == 0 and self.k == 0:
            raise ZeroDivisionError("zero has no inverse")
        if not self.is_unit():
            raise NotAUnit(f"{self} has norm {self.norm().to_string()}, not +-{self.ring.p}^m")
        # x^-1 = conj(x) / N(x) with N(x) = +-p^m / p^(2e)
        n = self.j**2 - self.ring.d * self.k**2
        sgn = 1 if n > 0 else -1
        m = valuation(abs(n), self.ring.p)
        return canonicalize(self.ring, sgn * self.j, -sgn * self.k, m - self.e)

    # -- ordering -----------------------------------------------------------

    def sign(self) -> Sign:
        """Exact sign of the real number; integer comparisons only."""
        j, k = self.j, self.k
        if k == 0:
            return Sign((j > 0) - (j < 0))
        if j == 0:
            return Sign(1 if k > 0 else -1)
        if (j > 0) == (k > 0):
            return Sign(1 if j > 0 else -1)
        # opposite signs: the term of larger magnitude wins; j^2 != d k^2 since d is not a square
        if j * j > self.ring.d * k * k:
            return Sign(1 if j > 0 else -1)
        return Sign(1 if k > 0 else -1)

    def __bool__(self) -> bool:
        return self.j != 0 or self.k != 0

    def __lt__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return (self - y).sign() < 0

    def __le__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return (self - y).sign() <= 0

    def __gt__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return (self - y).sign() > 0

    def __ge__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return (self - y).sign() >= 0

    def floor(self) -> int:
        """Largest integer not exceeding the element."""
        k = self.k
        root = isqrt(self.ring.d * k * k)
        num_floor = self.j + (root if k >= 0 else -root - (1 if k else 0))
        return num_floor // self.ring.p**self.e

    def height(self) -> tuple:
        """Ordering key: |j|+|k|, then |j|, |k|, nonnegative coefficients first."""
        return (abs(self.j) + abs(self.k), abs(self.j), abs(self.k), self.j < 0, self.k < 0)

    # -- text ---------------------------------------------------------------

    def to_string(self) -> str:
        """Canonical serialization ``(j+k*sqrt(d))/p^e``."""
        op = "-" if self.k < 0 else "+"
        return f"({self.j}{op}{abs(self.k)}*sqrt({self.ring.d}))/{self.ring.p}^{self.e}"

    def pretty(self) -> str:
        """Short human form such as ``2+sqrt(3)`` or ``(1-2*sqrt(3))/5``."""
        d = self.ring.d
        parts = []
        if self.j or not self.k:
            parts.append(str(self.j))
        if self.k:
            coeff = {1: "", -1: "-"}.get(self.k, f"{self.k}*")
            term = f"{coeff}sqrt({d})"
            parts.append(term if not parts or term.startswith("-") else "+" + term)
        num = "".join(parts)
        if self.e == 0:
            return num
        den = str(self.ring.p) if self.e == 1 else f"{self.ring.p}^{self.e}"
        return f"({num})/{den}" if len(parts) > 1 else f"{num}/{den}"

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"QuadRat({self.to_string()})"

    @classmethod
    def parse(cls, text: str, ring: RingParams) -> QuadRat:
        return parse_quad(text, ring)


def sign(x: QuadRat) -> Sign:
    return x.sign()


def mul(x: QuadRat, y: QuadRat) -> QuadRat:
    return x * y


def add(x: QuadRat, y: QuadRat) -> QuadRat:
    return x + y


def sub(x: QuadRat, y: QuadRat) -> QuadRat:
    return x - y


def neg(x: QuadRat) -> QuadRat:
    return -x


def conjugate(x: QuadRat) -> QuadRat:
    return x.conjugate()


def norm(x: QuadRat) -> QuadRat:
    return x.norm()


def invert(x: QuadRat) -> QuadRat:
    return x.invert()


_CANONICAL = re.compile(r"\((-?\d+)([+-])(\d+)\*sqrt\((\d+)\)\)/(\d+)\^(\d+)")
_SQRT = re.compile(r"sqrt\(?(\d+)\)?")


def parse_quad(text: str, ring: RingParams) -> QuadRat:
    """Parse the canonical grammar, or a short form like ``2+sqrt3`` or ``(1+2*sqrt(3))/5^2``.

    The radicand written in the text must match ``ring.d`` and any
    denominator must be a power of ``ring.p``.
    """
    s = text.strip().replace(" ", "").replace("√", "sqrt")
    m = _CANONICAL.fullmatch(s)
    if m:
        j, op, k, d, p, e = m.groups()
        if int(d) != ring.d or int(p) != ring.p:
            raise ValueError(f"{text!r} does not belong to Z[1/{ring.p}][sqrt({ring.d})]")
        return canonicalize(ring, int(j), -int(k) if op == "-" else int(k), int(e))

    e = 0
    num, slash, den = s.partition("/")
    if slash:
        base, caret, exp = den.partition("^")
        if not base.isdigit() or (caret and not exp.isdigit()):
            raise ValueError(f"cannot parse denominator in {text!r}")
        b = int(base)
        if caret:
            if b != ring.p:
                raise ValueError(f"denominator base must be {ring.p}")
            e = int(exp)
        else:
            if b < 1 or b != ring.p ** valuation(b, ring.p):
                raise ValueError(f"denominator {b} is not a power of {ring.p}")
            e = valuation(b, ring.p)
    if num.startswith("(") and num.endswith(")"):
        num = num[1:-1]
    for rad in _SQRT.findall(num):
        if int(rad) != ring.d:
            raise ValueError(f"radicand {rad} does not match d={ring.d}")
    num = _SQRT.sub("s", num)
    if not num:
        raise ValueError(f"empty numerator in {text!r}")
    j = k = 0
    for term in re.findall(r"[+-]?[^+-]+", num):
        if term.endswith("s"):
            coeff = term[:-1].rstrip("*")
            if coeff in ("", "+", "-"):
                k += -1 if coeff == "-" else 1
            else:
                k += int(coeff)
        else:
            j += int(term)
    if re.sub(r"[+-]?[^+-]+", "", num):
        raise ValueError(f"cannot parse {text!r}")
    return canonicalize(ring, j, k, e)
