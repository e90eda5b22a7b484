from decimal import Decimal, localcontext

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimforge.exceptions import InvalidParams, NotAUnit, PerfectSquare
from dimforge.quad import QuadRat, RingParams, Sign, canonicalize, parse_quad

from .conftest import R35, quads


def numeric(x: QuadRat) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 80
        return (Decimal(x.j) + Decimal(x.k) * Decimal(x.ring.d).sqrt()) / Decimal(x.ring.p) ** x.e


@pytest.mark.parametrize(
    "raw, expected",
    [((10, 5, 1), (2, 1, 0)), ((5, 1, 1), (5, 1, 1)), ((1, 1, -1), (5, 5, 0)), ((0, 0, 7), (0, 0, 0))],
)
def test_canonicalize_examples(raw, expected):
    q = canonicalize(R35, *raw)
    assert (q.j, q.k, q.e) == expected


def test_ring_params_rejections():
    with pytest.raises(PerfectSquare):
        RingParams(4, 5)
    with pytest.raises(InvalidParams):
        RingParams(3, 6)
    with pytest.raises(InvalidParams):
        RingParams(15, 5)
    with pytest.raises(InvalidParams):
        RingParams(1, 5)


def test_mul_examples(ring):
    assert ring(2, 1) * ring(2, -1) == ring.one
    assert ring(1, 1) * ring(1, 1) == ring(4, 2)


def test_conjugate_examples(ring):
    assert ring(2, 1).conjugate() == ring(2, -1)
    assert ring(5).conjugate() == ring(5)


def test_norm_examples(ring):
    assert ring(2, 1).norm() == ring.one
    assert ring(5).norm() == ring(25)
    q = ring(2, 1, 1).norm()
    assert (q.j, q.k, q.e) == (1, 0, 2)
    # direct expansion of (2+sqrt3)/5 times its conjugate
    assert q == ring(2, 1, 1) * ring(2, -1, 1)


def test_invert_examples(ring):
    assert ring(2, 1).invert() == ring(2, -1)
    assert ring(2, 1) * ring(2, -1) == ring.one
    inv5 = ring(5).invert()
    assert (inv5.j, inv5.k, inv5.e) == (1, 0, 1)
    with pytest.raises(NotAUnit):
        ring(1, 1).invert()
    with pytest.raises(ZeroDivisionError):
        ring.zero.invert()


def test_sign_examples(ring):
    assert ring(2, -1).sign() == Sign.POSITIVE
    assert ring(1, -1).sign() == Sign.NEGATIVE
    assert ring.zero.sign() == Sign.ZERO


def test_serialization(ring):
    assert ring(2, 1).to_string() == "(2+1*sqrt(3))/5^0"
    assert ring(2, -1, 3).to_string() == "(2-1*sqrt(3))/5^3"
    assert ring(-7, 0).to_string() == "(-7+0*sqrt(3))/5^0"


@pytest.mark.parametrize(
    "text, triple",
    [
        ("(2+1*sqrt(3))/5^0", (2, 1, 0)),
        ("(-4-7*sqrt(3))/5^2", (-4, -7, 2)),
        ("5", (5, 0, 0)),
        ("2+sqrt3", (2, 1, 0)),
        ("2+sqrt(3)", (2, 1, 0)),
        ("2 - √3", (2, -1, 0)),
        ("-sqrt3", (0, -1, 0)),
        ("3*sqrt(3)-1", (-1, 3, 0)),
        ("1/5", (1, 0, 1)),
        ("(1+2*sqrt(3))/25", (1, 2, 2)),
        ("(1+2*sqrt(3))/5^2", (1, 2, 2)),
    ],
)
def test_parse(text, triple):
    q = parse_quad(text, R35)
    assert (q.j, q.k, q.e) == triple


@pytest.mark.parametrize("bad", ["2+sqrt(5)", "1/3", "", "2+*", "(1+1*sqrt(3))/7^1", "abc"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_quad(bad, R35)


@given(quads())
def test_parse_roundtrip(x):
    assert QuadRat.parse(x.to_string(), x.ring) == x


@given(quads(), quads(), quads())
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == x.ring.zero
    assert x * 1 == x


@given(quads(), quads())
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.norm().k == 0
    assert x.norm() == x * x.conjugate()


@given(quads(), quads())
def test_canonical_idempotent(x, y):
    for z in (x * y, x + y, x - y, x.norm(), x.conjugate()):
        assert canonicalize(z.ring, z.j, z.k, z.e) == z
        if z.e > 0:
            assert z.j % 5 or z.k % 5


@given(quads())
def test_conjugate_involution(x):
    assert x.conjugate().conjugate() == x


@given(quads(), quads())
def test_sign_multiplicative_and_numeric(x, y):
    assert (x * y).sign() == x.sign() * y.sign()
    val = numeric(x)
    assert x.sign() == (val > 0) - (val < 0)


@given(quads())
def test_floor(x):
    n = x.floor()
    assert x.ring(n) <= x < x.ring(n + 1)


@given(st.integers(-200, 200), st.integers(-200, 200), st.integers(0, 3))
def test_invert_iff_norm_is_power_of_p(j, k, e):
    x = canonicalize(R35, j, k, e)
    if not x:
        return
    n = abs(j * j - 3 * k * k)
    while n % 5 == 0:
        n //= 5
    if n == 1:
        assert x * x.invert() == R35.one
    else:
        with pytest.raises(NotAUnit):
            x.invert()


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(-6, 6))
def test_powers_of_fundamental_unit(a, b):
    eps = R35(2, 1)
    assert eps**a * eps**-a == R35.one
    assert (eps**b).norm() == R35.one
