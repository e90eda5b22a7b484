"""Norm equations x^2 - d*y^2 = n over the integers.

Solvability is decided by a bounded search whose bound comes from the
classical reduction by a norm-one unit (every solution class under
multiplication by the unit has a member with ``y <= B``).  Unsolvable
equations carry a certificate: a modulus for which the congruence already
has no solution, or failing that the exhausted search bound together with
the unit that justifies it.  Both kinds replay without the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from .exceptions import InvalidParams, PerfectSquare
from .ntheory import is_square

DEFAULT_SIEVE_CAP = 360

IMPOSSIBLE = "impossible"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CfExpansion:
    """sqrt(d) = [a0; period, period, ...]."""

    a0: int
    period: tuple[int, ...]

    def __str__(self):
        return f"[{self.a0}; {','.join(map(str, self.period))}]"


def _check_radicand(d: int) -> None:
    if d < 2:
        raise InvalidParams(f"d must be >= 2, got {d}")
    if is_square(d):
        raise PerfectSquare(f"{d} is a perfect square")


def cf_expand(d: int) -> CfExpansion:
    _check_radicand(d)
    a0 = isqrt(d)
    m, q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period.append(a)
    return CfExpansion(a0, tuple(period))


def convergents(cf: CfExpansion, count: int):
    """Yield the first ``count`` convergents (p_i, q_i) of the expansion."""
    p_prev, p = 1, cf.a0
    q_prev, q = 0, 1
    yield p, q
    for i in range(count - 1):
        a = cf.period[i % len(cf.period)]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def fundamental_unit(d: int) -> tuple[int, int, int]:
    """Smallest x + y*sqrt(d) > 1 of norm +-1, as ``(x, y, norm_sign)``."""
    cf = cf_expand(d)
    *_, (x, y) = convergents(cf, len(cf.period))
    sign = x * x - d * y * y
    assert sign in (1, -1)
    return x, y, sign


def norm_one_unit(d: int) -> tuple[int, int]:
    """Fundamental solution of x^2 - d*y^2 = 1."""
    x, y, sign = fundamental_unit(d)
    if sign == -1:
        x, y = x * x + d * y * y, 2 * x * y
    return x, y


def search_bound(d: int, n: int, unit: tuple[int, int]) -> int:
    """Largest y that must be searched: y^2 <= |n| (x1 + 1) / d.

    Nagell's bounds give y^2 <= |n|(x1-1)/(2d) for n > 0 and
    y^2 <= |n|(x1+1)/(2d) for n < 0, where x1 + y1*sqrt(d) is a norm-one
    unit; the bound used here dominates both.
    """
    x1, _ = unit
    return isqrt(abs(n) * (x1 + 1) // d)


def residue_sieve(d: int, n: int, m: int) -> str:
    """``impossible`` iff x^2 - d*y^2 = n has no solution modulo m."""
    if m < 2:
        raise ValueError("sieve modulus must be >= 2")
    squares = {x * x % m for x in range(m)}
    for t in squares:
        if (n + d * t) % m in squares:
            return INCONCLUSIVE
    return IMPOSSIBLE


@dataclass(frozen=True)
class Certificate:
    """Replayable evidence that x^2 - d*y^2 = n has no integer solution."""

    kind: str  # "modular-sieve" or "exhausted-bound"
    d: int
    n: int
    modulus: int | None = None
    bound: int | None = None
    unit: tuple[int, int] | None = None

    def to_record(self) -> str:
        fields = [f"kind={self.kind}", f"d={self.d}", f"n={self.n}"]
        if self.modulus is not None:
            fields.append(f"modulus={self.modulus}")
        if self.bound is not None:
            fields.append(f"bound={self.bound}")
        if self.unit is not None:
            fields.append(f"unit={self.unit[0]}+{self.unit[1]}*sqrt({self.d})")
        return " ".join(fields)

    @classmethod
    def from_record(cls, text: str) -> Certificate:
        kv = dict(item.split("=", 1) for item in text.split())
        unit = None
        if "unit" in kv:
            x, rest = kv["unit"].split("+", 1)
            unit = (int(x), int(rest.split("*", 1)[0]))
        return cls(
            kind=kv["kind"],
            d=int(kv["d"]),
            n=int(kv["n"]),
            modulus=int(kv["modulus"]) if "modulus" in kv else None,
            bound=int(kv["bound"]) if "bound" in kv else None,
            unit=unit,
        )

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "d": self.d, "n": self.n}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        if self.bound is not None:
            out["bound"] = self.bound
        if self.unit is not None:
            out["unit"] = list(self.unit)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        unit = data.get("unit")
        return cls(data["kind"], data["d"], data["n"], data.get("modulus"), data.get("bound"),
                   tuple(unit) if unit is not None else None)


def replay_certificate(cert: Certificate) -> bool:
    """Re-check a certificate from scratch, without consulting the solver."""
    d, n = cert.d, cert.n
    if cert.kind == "modular-sieve":
        m = cert.modulus
        if m is None or m < 2:
            return False
        return all((x * x - d * y * y - n) % m for x in range(m) for y in range(m))
    if cert.kind == "exhausted-bound":
        if cert.unit is None or cert.bound is None:
            return False
        x1, y1 = cert.unit
        if x1 <= 1 or y1 <= 0 or x1 * x1 - d * y1 * y1 != 1:
            return False
        if cert.bound < isqrt(abs(n) * (x1 + 1) // d):
            return False
        return not any(is_square(n + d * y * y) for y in range(cert.bound + 1))
    return False


@dataclass(frozen=True)
class NormEqVerdict:
    d: int
    n: int
    solvable: bool
    solutions: tuple[tuple[int, int], ...] = ()
    certificate: Certificate | None = None
    bound: int = 0
    unit: tuple[int, int] = field(default=(0, 0))

    @property
    def status(self) -> str:
        return "solvable" if self.solvable else "unsolvable"


def find_sieve_modulus(d: int, n: int, cap: int = DEFAULT_SIEVE_CAP) -> int | None:
    for m in range(2, cap + 1):
        if residue_sieve(d, n, m) == IMPOSSIBLE:
            return m
    return None


def solve_norm_equation(d: int, n: int, sieve_cap: int = DEFAULT_SIEVE_CAP) -> NormEqVerdict:
    """Decide x^2 - d*y^2 = n.

    Solutions are reported as all pairs with x >= 0 and 0 <= y <= B, B the
    reduction bound; every solution is a unit multiple of one of them, up to
    sign and conjugation.
    """
    _check_radicand(d)
    if n == 0:
        raise ValueError("n must be nonzero")
    unit = norm_one_unit(d)
    bound = search_bound(d, n, unit)
    solutions = []
    for y in range(bound + 1):
        v = n + d * y * y
        if is_square(v):
            solutions.append((isqrt(v), y))
    if solutions:
        return NormEqVerdict(d, n, True, tuple(solutions), None, bound, unit)
    m = find_sieve_modulus(d, n, sieve_cap)
    if m is not None:
        cert = Certificate("modular-sieve", d, n, modulus=m)
    else:
        cert = Certificate("exhausted-bound", d, n, bound=bound, unit=unit)
    return NormEqVerdict(d, n, False, (), cert, bound, unit)
