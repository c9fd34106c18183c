"""Hypothesis strategies shared across test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from bottcher.scalars import CyclotomicScalar
from bottcher.series import Poly

small_q = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero_q = small_q.filter(lambda q: q != 0)
conductors = st.sampled_from([1, 3, 4, 5, 6, 8, 12])


@st.composite
def cyclo(draw, n=None):
    n = draw(conductors) if n is None else n
    width = max(1, n)
    coords = draw(st.lists(small_q, min_size=width, max_size=width))
    return CyclotomicScalar.from_coeffs(n, [Fraction(c) for c in coords])


@st.composite
def monic_poly(draw, degrees=(2, 3), coeff=st.integers(-4, 4)):
    d = draw(st.sampled_from(list(degrees)))
    low = draw(st.lists(coeff, min_size=d, max_size=d))
    return Poly(list(low) + [1])


@st.composite
def monic_rational_poly(draw, degrees=(2, 3)):
    return draw(monic_poly(degrees, small_q))
