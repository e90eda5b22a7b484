import itertools
from fractions import Fraction

import pytest

from dimforge.dimgroup import REFERENCE_PARAMS, DimGroupParams, trace_state
from dimforge.fungroup import (
    ESTABLISHED, OPEN, fundamental_group, parse_supernatural, uhf_fundamental_group, verify_witness,
)
from dimforge.orderauto import IntMat2, is_well_defined

from .conftest import R35
from .test_sunits import brute_units

P = REFERENCE_PARAMS
FIVE, EPS = R35(5), R35(2, 1)


def test_verify_witness_examples():
    for lam, M in ((FIVE, IntMat2(5, 9, 6, 11)), (EPS, IntMat2(2, 3, 1, 2))):
        check = verify_witness(P, lam, M)
        assert check.verified
        assert trace_state(check.image_of_unit) == lam
        assert check.image_of_unit.vector == (M.a, M.c)


def test_verify_witness_rejects_wrong_pair():
    check = verify_witness(P, FIVE, IntMat2(2, 3, 1, 2))
    assert not check.verified and "not in E" in check.reason
    assert not verify_witness(P, FIVE, IntMat2(5, 0, 0, 2))


def test_fundamental_group_reference():
    rep = fundamental_group(P)
    assert set(rep.upper_bound.generators) == {FIVE, EPS}
    assert rep.equality == ESTABLISHED and rep.missing == ()
    for lam, f in rep.witnessed:
        assert f.lam == lam
        assert max(abs(v) for v in f.M.entries) <= 50
        assert is_well_defined(P, lam, f.M)


def test_fundamental_group_trivial_coupling():
    rep = fundamental_group(DimGroupParams(R35, 6, 1, 1))
    assert rep.equality == ESTABLISHED
    assert {f.M for _, f in rep.witnessed} == {IntMat2(-1, -1, -1, 0)}


def test_small_search_bound_leaves_equality_open():
    rep = fundamental_group(P, search_bound=2)
    assert rep.equality == OPEN
    assert set(rep.missing) == {FIVE, EPS}
    assert rep.upper_bound.rank == 2


def test_upper_bound_matches_unit_box():
    """Positive units with small coefficients are exactly the 5^a (2+sqrt3)^b in that box."""
    group = fundamental_group(P).upper_bound
    products = {FIVE**a * EPS**b for a, b in itertools.product(range(-4, 5), repeat=2)}
    limit, max_e = 60, 4
    in_box = {u for u in products if abs(u.j) <= limit and abs(u.k) <= limit and u.e <= max_e}
    assert brute_units(R35, limit, max_e) == in_box
    for u in products:
        assert u in group
    assert group.exponents(R35(1, 1)) is None


def test_parse_supernatural():
    inf = float("inf")
    assert parse_supernatural("2:inf,3:inf") == {2: inf, 3: inf}
    assert parse_supernatural(" 5:2, 7:∞ ") == {5: 2, 7: inf}
    assert parse_supernatural("") == {}
    with pytest.raises(ValueError):
        parse_supernatural("2:0")


def test_uhf_examples():
    assert uhf_fundamental_group(parse_supernatural("2:inf,3:inf")) == [2, 3]
    assert uhf_fundamental_group(parse_supernatural("2:inf")) == [2]
    assert uhf_fundamental_group({}) == []
    assert uhf_fundamental_group(parse_supernatural("2:inf,3:4")) == [2]


def test_uhf_cantor_units_oracle():
    # positive units of Z[1/2] with numerator and denominator <= 2^10 are exactly powers of 2
    units = set()
    for n in range(1, 1025):
        for e in range(11):
            q = Fraction(n, 2**e)
            inv = 1 / q
            if (inv * 2**20).denominator == 1:
                units.add(q)
    assert units == {Fraction(2) ** a for a in range(-10, 11)}
    assert uhf_fundamental_group({2: float("inf")}) == [2]
