"""Hypothesis strategies for parameter polynomials, rational functions and forms."""

from hypothesis import strategies as st

from singinv.arith import ParamPoly, RatFunc
from singinv.forms import HomogeneousForm, all_monomials

small_int = st.integers(min_value=-6, max_value=6)


@st.composite
def param_polys(draw, names=("t",), max_degree=3, max_terms=4):
    n = len(names)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_degree)) for _ in range(n))
        terms[exps] = draw(small_int)
    return ParamPoly.from_terms(terms, names)


@st.composite
def ratfuncs(draw, names=("t",), nonzero=False):
    num = draw(param_polys(names))
    den = draw(param_polys(names).filter(bool))
    if nonzero and not num:
        num = ParamPoly(1, names)
    return RatFunc.from_params(num, den)


@st.composite
def integer_forms(draw, n, degree, bound=5):
    names = ("X", "Y", "Z")[:n]
    coeffs = {e: draw(st.integers(-bound, bound)) for e in all_monomials(n, degree)}
    return HomogeneousForm(names, degree, coeffs)


def int_matrices(n, bound=3, upper=False):
    from singinv.verify import _det

    entry = st.integers(-bound, bound)
    rows = st.tuples(*[
        st.tuples(*[st.just(0) if upper and j < i else entry for j in range(n)]) for i in range(n)
    ])
    return rows.map(lambda m: [list(r) for r in m]).filter(lambda m: _det(m) != 0)
