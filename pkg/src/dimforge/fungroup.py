"""Fundamental group of the AF algebra with K0 data (E, E+, u).

The trace values of the group are contained in the positive units of the
value ring.  A positive unit lambda is realised once some matrix M makes
(lambda, M) an order automorphism of E: the image of u is then a
projection class with trace lambda whose corner has the same ordered K0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dimgroup import DimGroupParams, DimElem, order_unit, trace_state, validate_params
from .orderauto import IntMat2, OrderAuto, find_witness, is_well_defined
from .quad import QuadRat
from .sunits import PositiveUnitGroup, positive_unit_generators

ESTABLISHED = "established"
OPEN = "open"


@dataclass(frozen=True)
class WitnessCheck:
    verified: bool
    reason: str = ""
    image_of_unit: DimElem | None = None

    def __bool__(self):
        return self.verified


def verify_witness(params: DimGroupParams, lam: QuadRat, M: IntMat2) -> WitnessCheck:
    wd = is_well_defined(params, lam, M)
    if not wd:
        return WitnessCheck(False, wd.reason)
    image = OrderAuto(lam, M).apply(params, order_unit(params))
    if trace_state(image) != lam:
        return WitnessCheck(False, f"trace of phi(u) is {trace_state(image).pretty()}", image)
    return WitnessCheck(True, "", image)


@dataclass(frozen=True)
class FundamentalGroupReport:
    upper_bound: PositiveUnitGroup
    witnessed: tuple[tuple[QuadRat, OrderAuto], ...]
    search_bound: int

    @property
    def equality(self) -> str:
        lams = {lam for lam, _ in self.witnessed}
        return ESTABLISHED if all(g in lams for g in self.upper_bound.generators) else OPEN

    @property
    def missing(self) -> tuple[QuadRat, ...]:
        lams = {lam for lam, _ in self.witnessed}
        return tuple(g for g in self.upper_bound.generators if g not in lams)


def fundamental_group(params: DimGroupParams, search_bound: int = 50) -> FundamentalGroupReport:
    """Witness each positive-unit generator by an order automorphism, if one is small enough.

    A missing witness leaves equality open; it is never read as nonexistence.
    """
    validate_params(params)
    upper = positive_unit_generators(params.ring)
    witnessed = []
    for lam in upper.generators:
        M = find_witness(params, lam, search_bound)
        if M is not None and verify_witness(params, lam, M):
            witnessed.append((lam, OrderAuto(lam, M)))
    return FundamentalGroupReport(upper, tuple(witnessed), search_bound)


def parse_supernatural(text: str) -> dict[int, float]:
    """Parse ``2:inf,3:inf,5:2`` into {prime: exponent}, with math.inf for infinity."""
    out: dict[int, float] = {}
    text = text.strip()
    if not text:
        return out
    for item in text.split(","):
        prime, _, exp = item.partition(":")
        p = int(prime)
        if exp.strip().lower() in ("inf", "infinity", "∞"):
            out[p] = math.inf
        else:
            n = int(exp)
            if n < 1:
                raise ValueError(f"exponent of {p} must be positive or inf")
            out[p] = n
    return out


def uhf_fundamental_group(n: dict[int, float]) -> list[int]:
    """Free generators of the fundamental group of the UHF algebra M_n: primes with infinite exponent."""
    return sorted(p for p, e in n.items() if e == math.inf)
