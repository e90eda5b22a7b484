import pytest
from hypothesis import strategies as st

from dimforge.dimgroup import REFERENCE_PARAMS, make_elem
from dimforge.quad import RingParams, canonicalize

R35 = RingParams(3, 5)

ints = st.integers(min_value=-10**6, max_value=10**6)


@st.composite
def quads(draw, ring=R35, max_e=4):
    return canonicalize(ring, draw(ints), draw(ints), draw(st.integers(0, max_e)))


@st.composite
def elems(draw, params=REFERENCE_PARAMS, max_i=2):
    j, k = draw(ints), draw(ints)
    x = j + params.m1 * draw(st.integers(-1000, 1000))
    y = k + params.m2 * draw(st.integers(-1000, 1000))
    return make_elem(params, draw(st.integers(0, max_i)), j, k, x, y)


@pytest.fixture
def ring():
    return R35


@pytest.fixture
def params():
    return REFERENCE_PARAMS
