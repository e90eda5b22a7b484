"""Order automorphisms phi(r, v) = (lambda*r, M v) of (E, E+).

Every order automorphism of E has this shape with det M = +-1 and lambda a
positive unit.  An additive map of this shape sends E into E exactly when it
sends the four elements

    (1, (1, 0)),  (sqrt(d), (0, 1)),  (0, (m1, 0)),  (0, (0, m2))

into E; images of the same elements at deeper denominator levels carry the
same congruence classes because p^s = 1 modulo m1 and m2.  It is an
automorphism when the inverse pair (1/lambda, M^-1) passes the same test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from .dimgroup import DimElem, DimGroupParams, from_quad, trace_state
from .exceptions import CongruenceViolation
from .quad import QuadRat


@dataclass(frozen=True)
class IntMat2:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> IntMat2:
        return cls(1, 0, 0, 1)

    @classmethod
    def parse(cls, text: str) -> IntMat2:
        """Accept ``a,b,c,d`` or ``[[a,b],[c,d]]``."""
        cleaned = text.replace("[", " ").replace("]", " ").replace(",", " ").split()
        if len(cleaned) != 4:
            raise ValueError(f"expected four matrix entries in {text!r}")
        return cls(*map(int, cleaned))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: IntMat2) -> IntMat2:
        return IntMat2(
            self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d,
        )

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def inverse(self) -> IntMat2:
        det = self.det
        if det not in (1, -1):
            raise ValueError(f"det = {det}, matrix not invertible over Z")
        return IntMat2(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def max_abs(self) -> int:
        return max(map(abs, self.entries))

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


@dataclass(frozen=True)
class OrderAuto:
    lam: QuadRat
    M: IntMat2

    def apply(self, params: DimGroupParams, e: DimElem) -> DimElem:
        x, y = self.M.apply(e.x, e.y)
        return from_quad(params, self.lam * trace_state(e), x, y)

    def inverse(self) -> OrderAuto:
        return OrderAuto(self.lam.invert(), self.M.inverse())

    def __str__(self):
        return f"(lambda={self.lam.pretty()}, M={self.M})"


def compose(f: OrderAuto, g: OrderAuto) -> OrderAuto:
    """f after g."""
    return OrderAuto(f.lam * g.lam, f.M @ g.M)


def inverse(f: OrderAuto) -> OrderAuto:
    return f.inverse()


def identity(params: DimGroupParams) -> OrderAuto:
    return OrderAuto(params.ring.one, IntMat2.identity())


@dataclass(frozen=True)
class WellDefined:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _images_in_e(params: DimGroupParams, lam: QuadRat, M: IntMat2) -> str | None:
    ring = params.ring
    images = (
        ("(1,(1,0))", lam, M.apply(1, 0)),
        (f"(sqrt({ring.d}),(0,1))", lam * ring.sqrt, M.apply(0, 1)),
        (f"(0,({params.m1},0))", ring.zero, M.apply(params.m1, 0)),
        (f"(0,(0,{params.m2}))", ring.zero, M.apply(0, params.m2)),
    )
    for name, r, (x, y) in images:
        try:
            from_quad(params, r, x, y)
        except CongruenceViolation as exc:
            return f"image of {name} not in E: {exc}"
    return None


def is_well_defined(params: DimGroupParams, lam: QuadRat, M: IntMat2) -> WellDefined:
    if M.det not in (1, -1):
        return WellDefined(False, f"det={M.det}")
    if lam.ring != params.ring:
        return WellDefined(False, "lambda lives in a different ring")
    if lam.sign() <= 0:
        return WellDefined(False, "lambda is not positive")
    if not lam.is_unit():
        return WellDefined(False, f"lambda is not a unit (norm {lam.norm().pretty()})")
    reason = _images_in_e(params, lam, M)
    if reason:
        return WellDefined(False, reason)
    reason = _images_in_e(params, lam.invert(), M.inverse())
    if reason:
        return WellDefined(False, "inverse: " + reason)
    return WellDefined(True)


def apply(params: DimGroupParams, f: OrderAuto, e: DimElem) -> DimElem:
    return f.apply(params, e)


# -- residue classification --------------------------------------------------


@dataclass(frozen=True, order=True)
class ResidueClass:
    modulus: int
    det_sign: int
    a: int
    b: int
    c: int
    d: int

    @property
    def matrix(self) -> IntMat2:
        return IntMat2(self.a, self.b, self.c, self.d)

    def __str__(self):
        sign = "+1" if self.det_sign > 0 else "-1"
        return f"{self.matrix} mod {self.modulus} det={sign}"

    @classmethod
    def parse(cls, text: str) -> ResidueClass:
        mat, _, rest = text.partition(" mod ")
        mod, _, det = rest.partition(" det=")
        m = IntMat2.parse(mat)
        return cls(int(mod), int(det), *m.entries)


def _level_numerator(params: DimGroupParams, lam: QuadRat) -> tuple[int, int]:
    """Numerator (J, K) of lam written over a power of p^s."""
    level = -(-lam.e // params.s)
    scale = params.ring.p ** (params.s * level - lam.e)
    return lam.j * scale, lam.k * scale


def _entry_constraints(params: DimGroupParams, lam: QuadRat):
    """Per-entry congruences on (a, b, c, d) forced by the four generator images.

    Returns four predicates on integer entries of M.  Generator images give
    a = J (m1), c = K (m2), b = dK (m1), d = J (m2), and the torsion-like
    generators give c*m1 = 0 (m2), b*m2 = 0 (m1).
    """
    J, K = _level_numerator(params, lam)
    m1, m2, rad = params.m1, params.m2, params.ring.d
    return (
        lambda a: (a - J) % m1 == 0,
        lambda b: (b - rad * K) % m1 == 0 and (b * m2) % m1 == 0,
        lambda c: (c - K) % m2 == 0 and (c * m1) % m2 == 0,
        lambda d: (d - J) % m2 == 0,
    )


def classify_residues(
    params: DimGroupParams, lam: QuadRat, modulus: int | None = None, det_sign: int | None = None
) -> list[ResidueClass]:
    """All residue classes mod ``modulus`` of matrices M making (lam, M) an automorphism.

    A class survives when its entries meet the generator-image congruences
    for (lam, M), the same congruences for (1/lam, det_sign * adj M), and
    det M = det_sign modulo ``modulus``.  Sorted output.
    """
    if modulus is None:
        modulus = lcm(params.m1, params.m2)
    if modulus % lcm(params.m1, params.m2):
        raise ValueError(f"modulus {modulus} is not a multiple of lcm(m1, m2)")
    lam_inv = lam.invert()
    fwd = _entry_constraints(params, lam)
    back = _entry_constraints(params, lam_inv)
    signs = (1, -1) if det_sign is None else (det_sign,)
    out = []
    for sgn in signs:
        # the inverse matrix is sgn * [[d, -b], [-c, a]]: its a-entry is sgn*d, and so on
        cand = [
            [a for a in range(modulus) if fwd[0](a) and back[3](sgn * a)],
            [b for b in range(modulus) if fwd[1](b) and back[1](-sgn * b)],
            [c for c in range(modulus) if fwd[2](c) and back[2](-sgn * c)],
            [d for d in range(modulus) if fwd[3](d) and back[0](sgn * d)],
        ]
        for a, b, c, d in itertools.product(*cand):
            if (a * d - b * c - sgn) % modulus == 0:
                out.append(ResidueClass(modulus, sgn, a, b, c, d))
    return sorted(out)


def reduce_matrix(M: IntMat2, modulus: int) -> ResidueClass:
    return ResidueClass(modulus, M.det, *(x % modulus for x in M.entries))


# -- commutation obstruction -------------------------------------------------


def _mat_mod(M: IntMat2, m: int) -> IntMat2:
    return IntMat2(*(x % m for x in M.entries))


POSITIONS = ((0, 0), (0, 1), (1, 0), (1, 1))


def first_mismatch(P: IntMat2, Q: IntMat2) -> tuple[int, int] | None:
    for pos, x, y in zip(POSITIONS, P.entries, Q.entries):
        if x != y:
            return pos
    return None


@dataclass(frozen=True)
class ObstructionRow:
    c1: ResidueClass
    c2: ResidueClass
    p12: IntMat2
    p21: IntMat2
    mismatch: tuple[int, int] | None

    def to_record(self) -> str:
        pos = "none" if self.mismatch is None else f"({self.mismatch[0]},{self.mismatch[1]})"
        return f"{self.c1} | {self.c2} | {self.p12} | {self.p21} | {pos}"

    @classmethod
    def parse(cls, text: str) -> ObstructionRow:
        c1, c2, p12, p21, pos = (part.strip() for part in text.split("|"))
        mismatch = None if pos == "none" else tuple(int(v) for v in pos.strip("()").split(","))
        return cls(ResidueClass.parse(c1), ResidueClass.parse(c2),
                   IntMat2.parse(p12), IntMat2.parse(p21), mismatch)


@dataclass(frozen=True)
class Obstruction:
    """Outcome of the residue-level commutation test for a pair of scalings."""

    modulus: int
    possible: bool
    witness: tuple[ResidueClass, ResidueClass] | None
    table: tuple[ObstructionRow, ...]

    @property
    def verdict(self) -> str:
        return "possible" if self.possible else "impossible"


def commutation_obstruction(
    params: DimGroupParams, lam1: QuadRat, lam2: QuadRat, modulus: int | None = None
) -> Obstruction:
    """Search residue classes for a commuting pair of automorphisms scaling by lam1 and lam2.

    ``impossible`` means no integer matrices in the admissible classes can
    commute, so no commuting automorphism pair with these scalings exists.
    ``possible`` only reports a commuting residue pair.
    """
    if modulus is None:
        modulus = lcm(params.m1, params.m2)
    classes1 = classify_residues(params, lam1, modulus)
    classes2 = classify_residues(params, lam2, modulus)
    rows = []
    witness = None
    for c1, c2 in itertools.product(classes1, classes2):
        p12 = _mat_mod(c1.matrix @ c2.matrix, modulus)
        p21 = _mat_mod(c2.matrix @ c1.matrix, modulus)
        pos = first_mismatch(p12, p21)
        rows.append(ObstructionRow(c1, c2, p12, p21, pos))
        if pos is None and witness is None:
            witness = (c1, c2)
    return Obstruction(modulus, witness is not None, witness, tuple(rows))


def replay_obstruction(
    obs: Obstruction, classes1: list[ResidueClass] | None = None,
    classes2: list[ResidueClass] | None = None,
) -> bool:
    """Re-multiply every listed pair; optionally confirm the table covers all class pairs."""
    m = obs.modulus
    for row in obs.table:
        p12 = _mat_mod(row.c1.matrix @ row.c2.matrix, m)
        p21 = _mat_mod(row.c2.matrix @ row.c1.matrix, m)
        if p12 != row.p12 or p21 != row.p21 or first_mismatch(p12, p21) != row.mismatch:
            return False
    if classes1 is not None and classes2 is not None:
        listed = {(r.c1, r.c2) for r in obs.table}
        if listed != set(itertools.product(classes1, classes2)):
            return False
    commuting = [r for r in obs.table if r.mismatch is None]
    return obs.possible == bool(commuting)


# -- witness search ----------------------------------------------------------


def _lifts(value: int, modulus: int, bound: int) -> range:
    return range(-bound + (value + bound) % modulus, bound + 1, modulus)


def find_witness(
    params: DimGroupParams, lam: QuadRat, bound: int = 50, modulus: int | None = None
) -> IntMat2 | None:
    """Smallest integer matrix (max |entry|, then lexicographic) making (lam, M) an automorphism.

    Entries range over [-bound, bound]; candidates come from lifting the
    admissible residue classes, with d solved from the determinant.
    """
    best = None
    for cls in classify_residues(params, lam, modulus):
        m = cls.modulus
        for a, b, c in itertools.product(
            _lifts(cls.a, m, bound), _lifts(cls.b, m, bound), _lifts(cls.c, m, bound)
        ):
            if a == 0:
                if b * c != -cls.det_sign:
                    continue
                ds = _lifts(cls.d, m, bound)
            else:
                num = cls.det_sign + b * c
                if num % a:
                    continue
                d = num // a
                if abs(d) > bound or (d - cls.d) % m:
                    continue
                ds = (d,)
            for d in ds:
                M = IntMat2(a, b, c, d)
                key = (M.max_abs(), M.entries)
                if best is None or key < best[0]:
                    best = (key, M)
    if best is None:
        return None
    M = best[1]
    if not is_well_defined(params, lam, M):
        raise AssertionError(f"lifted class {M} failed the well-definedness check")
    return M


@lru_cache(maxsize=8)
def unimodular_matrices(bound: int) -> tuple[IntMat2, ...]:
    """All integer matrices with det +-1 and entries in [-bound, bound]."""
    rng = range(-bound, bound + 1)
    out = []
    for a, b, c in itertools.product(rng, rng, rng):
        for sgn in (1, -1):
            if a == 0:
                if b * c == -sgn:
                    out.extend(IntMat2(a, b, c, d) for d in rng)
                continue
            d, rem = divmod(sgn + b * c, a)
            if not rem and abs(d) <= bound:
                out.append(IntMat2(a, b, c, d))
    return tuple(out)


def bounded_automorphisms(params: DimGroupParams, lam: QuadRat, bound: int) -> list[IntMat2]:
    """Every matrix with entries in [-bound, bound] making (lam, M) an automorphism.

    Brute force through is_well_defined; independent of the residue
    classification.
    """
    return [M for M in unimodular_matrices(bound) if is_well_defined(params, lam, M)]
