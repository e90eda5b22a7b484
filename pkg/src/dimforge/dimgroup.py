"""The congruence-coupled dimension group E inside R x Z^2.

    E = { ((j + k sqrt(d)) / p^(s*i), (x, y)) : x = j mod m1, y = k mod m2 }

with positive cone E+ = {r > 0} u {0} and order unit u = (1, (1, 0)).  The
congruences only make sense when rescaling the numerator by p^s preserves
them, which is the condition p^s = 1 (mod m1) and (mod m2).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .exceptions import BadModulus, CongruenceViolation, InvalidParams
from .quad import QuadRat, RingParams


@dataclass(frozen=True)
class DimGroupParams:
    ring: RingParams
    s: int
    m1: int
    m2: int

    @property
    def step(self) -> int:
        """p^s, the factor between consecutive denominator levels."""
        return self.ring.p**self.s

    def describe(self) -> str:
        r = self.ring
        return f"E[{r.d},{r.p},{self.s},{self.m1},{self.m2}]"


REFERENCE_PARAMS = DimGroupParams(RingParams(3, 5), 6, 9, 3)


def validate_params(params: DimGroupParams) -> None:
    """Raise unless the congruence coupling is independent of the representative."""
    p = params.ring.p
    if params.s < 1 or params.m1 < 1 or params.m2 < 1:
        raise InvalidParams("s, m1 and m2 must be positive")
    for name, m in (("m1", params.m1), ("m2", params.m2)):
        if gcd(p, m) != 1:
            raise BadModulus(f"gcd(p, {name}) = gcd({p}, {m}) != 1")
        if pow(p, params.s, m) != 1 % m:
            raise BadModulus(
                f"{p}^{params.s} = {pow(p, params.s, m)} mod {m}, not 1 ({name})"
            )


@dataclass(frozen=True)
class DimElem:
    """((j + k sqrt(d)) / p^(s*i), (x, y)) in canonical form; build with make_elem."""

    params: DimGroupParams
    i: int
    j: int
    k: int
    x: int
    y: int

    def __add__(self, other: DimElem) -> DimElem:
        if other.params != self.params:
            raise ValueError("elements of different groups")
        i = max(self.i, other.i)
        step = self.params.step
        sa, sb = step ** (i - self.i), step ** (i - other.i)
        return make_elem(
            self.params, i,
            self.j * sa + other.j * sb, self.k * sa + other.k * sb,
            self.x + other.x, self.y + other.y,
        )

    def __neg__(self) -> DimElem:
        return DimElem(self.params, self.i, -self.j, -self.k, -self.x, -self.y)

    def __sub__(self, other: DimElem) -> DimElem:
        return self + (-other)

    def __rmul__(self, n: int) -> DimElem:
        if not isinstance(n, int):
            return NotImplemented
        return make_elem(self.params, self.i, n * self.j, n * self.k, n * self.x, n * self.y)

    @property
    def vector(self) -> tuple[int, int]:
        return (self.x, self.y)

    def is_zero(self) -> bool:
        return self.j == 0 and self.k == 0 and self.x == 0 and self.y == 0

    def to_string(self) -> str:
        r = self.params.ring
        op = "-" if self.k < 0 else "+"
        return (
            f"{self.params.describe()}: (({self.j}{op}{abs(self.k)}*sqrt({r.d}))"
            f"/{r.p}^({self.params.s}*{self.i}), [{self.x}, {self.y}])"
        )

    __str__ = to_string


def congruence_failure(params: DimGroupParams, j: int, k: int, x: int, y: int) -> str | None:
    """Human-readable reason the tuple is outside E, or None."""
    if (x - j) % params.m1:
        return f"x≢j mod {params.m1}"
    if (y - k) % params.m2:
        return f"y≢k mod {params.m2}"
    return None


def make_elem(params: DimGroupParams, i: int, j: int, k: int, x: int, y: int) -> DimElem:
    reason = congruence_failure(params, j, k, x, y)
    if reason:
        raise CongruenceViolation(reason)
    step = params.step
    if i < 0:
        j, k, i = j * step**-i, k * step**-i, 0
    if j == 0 and k == 0:
        i = 0
    while i > 0 and j % step == 0 and k % step == 0:
        j, k, i = j // step, k // step, i - 1
    return DimElem(params, i, j, k, x, y)


def from_quad(params: DimGroupParams, r: QuadRat, x: int, y: int) -> DimElem:
    """Element with real coordinate r; r's denominator is raised to a multiple of s."""
    if r.ring != params.ring:
        raise ValueError("ring mismatch")
    level = -(-r.e // params.s)
    scale = params.ring.p ** (params.s * level - r.e)
    return make_elem(params, level, r.j * scale, r.k * scale, x, y)


def zero(params: DimGroupParams) -> DimElem:
    return DimElem(params, 0, 0, 0, 0, 0)


def order_unit(params: DimGroupParams) -> DimElem:
    return make_elem(params, 0, 1, 0, 1, 0)


def add(a: DimElem, b: DimElem) -> DimElem:
    return a + b


def neg(a: DimElem) -> DimElem:
    return -a


def trace_state(a: DimElem) -> QuadRat:
    r = a.params.ring
    return r(a.j, a.k, a.params.s * a.i)


def is_positive(a: DimElem) -> bool:
    """Membership in E+: positive real coordinate, or the zero element itself."""
    return a.is_zero() or trace_state(a).sign() > 0


def leq(a: DimElem, b: DimElem) -> bool:
    return is_positive(b - a)


def dominating_multiple(a: DimElem) -> int:
    """Smallest n >= 0 with n*u - a in E+."""
    u = order_unit(a.params)
    n = max(trace_state(a).floor() + 1, 0)
    while n > 0 and is_positive((n - 1) * u - a):
        n -= 1
    return n
