"""Positive units of Z[1/p] + Z[1/p]sqrt(d).

A unit is an element whose norm is plus or minus a power of p.  Modulo
sign, the unit group is free of rank 1 + (number of primes above p): the
valuations at the primes over p account for all but one generator, and the
kernel of the valuation map is generated by a fundamental unit.

Everything here is exact.  Valuations at split primes use a p-adic square
root of d; membership is decided by solving the valuation system over the
integers and then dividing out powers of the fundamental unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt

from .exceptions import DimforgeError
from .ntheory import is_square, padic_sqrt, valuation
from .pell import Certificate, fundamental_unit, norm_one_unit, search_bound, solve_norm_equation
from .quad import QuadRat, RingParams, canonicalize

INERT = "inert"
SPLIT = "split"
RAMIFIED = "ramified"

# Largest norm-equation search tolerated while hunting for a principal power of a prime over p.
MAX_SEARCH = 10**6
MAX_CLASS_ORDER = 48


@dataclass(frozen=True)
class SplittingType:
    kind: str
    witness: QuadRat | None = None
    certificates: tuple[Certificate, ...] = ()
    # smallest h > 0 with the h-th power of a prime over p principal
    class_order: int = 1

    def __str__(self):
        extra = f" witness={self.witness.pretty()}" if self.witness is not None else ""
        return f"{self.kind}{extra}"


def _kind(ring: RingParams) -> str:
    d, p = ring.d, ring.p
    if p == 2:
        if d % 4 == 3:
            return RAMIFIED
        return SPLIT if d % 8 == 1 else INERT
    return SPLIT if pow(d, (p - 1) // 2, p) == 1 else INERT


def _halves(ring: RingParams) -> bool:
    # Z[1/2][sqrt(d)] contains (1+sqrt(d))/2 when d = 1 mod 4
    return ring.p == 2 and ring.d % 4 == 1


def valuations(ring: RingParams, x: QuadRat, kind: str | None = None) -> tuple[int, ...]:
    """Valuations of a nonzero element at the primes lying over p."""
    kind = kind or _kind(ring)
    d, p = ring.d, ring.p
    n = x.j * x.j - d * x.k * x.k
    if n == 0:
        raise ValueError("zero has no valuation")
    vn = valuation(n, p)
    if kind == INERT:
        return (vn // 2 - x.e,)
    if kind == RAMIFIED:
        return (vn - 2 * x.e,)
    prec = vn + 2
    s = padic_sqrt(d, p, prec)
    mod = p**prec
    out = []
    for root in (s, -s):
        t = (x.j + x.k * root) % mod
        if t == 0:
            raise AssertionError("p-adic precision exhausted")
        out.append(valuation(t, p) - x.e)
    return tuple(out)


def _norm_candidates(ring: RingParams, n: int) -> list[QuadRat]:
    """Positive elements of norm n found by the reduction-bounded search."""
    d = ring.d
    scale, e = (2, 1) if _halves(ring) else (1, 0)
    target = n * scale * scale
    if search_bound(d, target, norm_one_unit(d)) > MAX_SEARCH:
        raise DimforgeError(f"norm search for {n} in Z[sqrt({d})] is too large")
    out = []
    for x, y in solve_norm_equation(d, target).solutions:
        for yy in {y, -y}:
            q = canonicalize(ring, x, yy, e)
            if q.sign() < 0:
                q = -q
            out.append(q)
    return out


def _cube_root_unit(ring: RingParams, x: int, y: int) -> QuadRat | None:
    """Cube root of x + y*sqrt(d) of the form (X + Y*sqrt(d))/2, if one exists."""
    d = ring.d
    eps = ring(x, y)
    sgn = x * x - d * y * y
    with localcontext() as ctx:
        ctx.prec = 2 * len(str(x)) + 40
        val = Decimal(x) + Decimal(y) * Decimal(d).sqrt()
        eta = val ** (Decimal(1) / Decimal(3))
        trace = int((eta + Decimal(sgn) / eta).to_integral_value())
    for X in (trace - 1, trace, trace + 1):
        y2, rem = divmod(X * X - 4 * sgn, d)
        if rem or not is_square(y2):
            continue
        cand = canonicalize(ring, X, isqrt(y2), 1)
        if cand**3 == eps:
            return cand
    return None


def kernel_unit(ring: RingParams) -> QuadRat:
    """Fundamental unit (> 1) of the p-integral part of the ring."""
    x, y, _ = fundamental_unit(ring.d)
    if ring.p == 2 and ring.d % 8 == 5:
        eta = _cube_root_unit(ring, x, y)
        if eta is not None:
            return eta
    return ring(x, y)


def _min_height(cands: list[QuadRat]) -> QuadRat:
    return min(cands, key=lambda q: (q.e,) + q.height())


def splitting_type(ring: RingParams) -> SplittingType:
    kind = _kind(ring)
    p = ring.p
    if kind == INERT:
        certs = tuple(solve_norm_equation(ring.d, n).certificate for n in (p, -p))
        return SplittingType(INERT, None, certs, 1)
    cands = _norm_candidates(ring, p) + _norm_candidates(ring, -p)
    if cands:
        return SplittingType(kind, _min_height(cands), (), 1)
    certs = tuple(
        c for c in (solve_norm_equation(ring.d, n).certificate for n in (p, -p)) if c is not None
    )
    if kind == RAMIFIED:
        return SplittingType(kind, None, certs, 2)
    for h in range(2, MAX_CLASS_ORDER + 1):
        target = {(h, 0), (0, h)}
        found = [
            q
            for n in (p**h, -(p**h))
            for q in _norm_candidates(ring, n)
            if valuations(ring, q, kind) in target
        ]
        if found:
            return SplittingType(kind, _min_height(found), certs, h)
    raise DimforgeError(f"no principal power of a prime over {p} up to {MAX_CLASS_ORDER}")


@dataclass(frozen=True)
class PositiveUnitGroup:
    """Generators of the positive units; the last generator is the fundamental unit."""

    ring: RingParams
    generators: tuple[QuadRat, ...]
    splitting: SplittingType

    @property
    def rank(self) -> int:
        return len(self.generators)

    def to_record(self) -> str:
        gens = ", ".join(g.to_string() for g in self.generators)
        return f"generators=[{gens}] rank={self.rank}"

    def element(self, exponents) -> QuadRat:
        out = self.ring.one
        for g, n in zip(self.generators, exponents):
            out = out * g**n
        return out

    def exponents(self, u: QuadRat) -> tuple[int, ...] | None:
        """Exponent vector of u in the generators, or None when u is outside the group."""
        if u.ring != self.ring or u.sign() <= 0 or not u.is_unit():
            return None
        kind = self.splitting.kind
        *val_gens, eta = self.generators
        target = valuations(self.ring, u, kind)
        rows = [valuations(self.ring, g, kind) for g in val_gens]
        coeffs = _solve_integer(rows, target)
        if coeffs is None:
            return None
        w = u
        for g, n in zip(val_gens, coeffs):
            w = w * g**-n
        # w has trivial valuations, so it is +-eta^c; descend by eta
        c = 0
        while w >= eta:
            w = w / eta
            c += 1
        while w < 1:
            w = w * eta
            c -= 1
        if w != self.ring.one:
            return None
        return tuple(coeffs) + (c,)

    def __contains__(self, u: QuadRat) -> bool:
        return self.exponents(u) is not None


def _solve_integer(rows: list[tuple[int, ...]], target: tuple[int, ...]) -> list[int] | None:
    """Solve sum_i c_i * rows[i] = target for integers c_i (square, nonsingular system)."""
    n = len(rows)
    if n == 1:
        (a,), (t,) = rows[0], target
        return [t // a] if t % a == 0 else None
    if n == 2:
        (a, c), (b, d) = rows  # columns of the matrix are the generator vectors
        det = a * d - b * c
        x = Fraction(target[0] * d - b * target[1], det)
        y = Fraction(a * target[1] - c * target[0], det)
        if x.denominator != 1 or y.denominator != 1:
            return None
        return [int(x), int(y)]
    raise ValueError("at most two primes lie over p")


def positive_unit_generators(ring: RingParams) -> PositiveUnitGroup:
    st = splitting_type(ring)
    eta = kernel_unit(ring)
    p = ring(ring.p)
    if st.kind == INERT:
        gens = (p, eta)
    elif st.kind == RAMIFIED:
        gens = (st.witness if st.witness is not None else p, eta)
    else:
        gens = (p, st.witness, eta)
    return PositiveUnitGroup(ring, gens, st)
