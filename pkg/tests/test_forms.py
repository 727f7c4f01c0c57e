from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from singinv.arith import ParamPoly, RatFunc
from singinv.errors import NonHomogeneousError, ShapeError
from singinv.forms import (
    HomogeneousForm,
    SymmetricTensor,
    all_monomials,
    form_to_tensor,
    linear_substitute,
    multinomial,
    normalize_scale,
    parse_form,
    parse_ratfunc,
    proportional,
    tensor_to_form,
)

from strategies import int_matrices, integer_forms, ratfuncs

XYZ = ("x", "y", "z")
T = ("t",)


def rf(text, params=T):
    return parse_ratfunc(text, params)


def test_parse_esix_form():
    p = parse_form("x^3+y^3+z^3+t*x*y*z", XYZ, T)
    assert p.shape == (3, 3)
    assert p.coeffs == {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1, (1, 1, 1): rf("t")}


def test_parse_six_term_cubic():
    p = parse_form("x^3+x^2*y-4*z^3+x*y*z-x*z^2+x*y^2", XYZ)
    assert len(p.coeffs) == 6
    assert p.coeffs[(0, 0, 3)] == -4 and p.coeffs[(1, 0, 2)] == -1


def test_non_homogeneous_rejected():
    with pytest.raises(NonHomogeneousError):
        parse_form("x^3 + y^2", XYZ)


def test_form_shape_validation():
    with pytest.raises(ShapeError):
        HomogeneousForm((), 3)
    with pytest.raises(NonHomogeneousError):
        HomogeneousForm(("X", "Y"), 2, {(2, 1): 1})


def test_esix_tensor_entries():
    a = form_to_tensor(parse_form("x^3+y^3+z^3+t*x*y*z", XYZ, T))
    assert a[0, 0, 0] == a[1, 1, 1] == a[2, 2, 2] == RatFunc(1)
    for idx in product(range(3), repeat=3):
        if sorted(idx) == [0, 1, 2]:
            assert a[idx] == rf("t/6")
    assert len(a.entries) == 4


def test_single_power_tensor():
    a = form_to_tensor(parse_form("y^5", ("x", "y")))
    assert a.entries == {(1, 1, 1, 1, 1): RatFunc(1)}


def test_quartic_tensor_by_expansion():
    p = parse_form("x^4+t*x^2*y^2+y^4", ("x", "y"), T)
    a = form_to_tensor(p)
    assert a[0, 0, 1, 1] == a[1, 0, 1, 0] == rf("t/6")
    assert expand(a) == p.coeffs


def test_tensor_to_form_examples():
    a = SymmetricTensor(3, 3, {(0, 0, 0): 1, (1, 1, 1): 1, (2, 2, 2): 1, (0, 1, 2): rf("t/6")})
    assert tensor_to_form(a, XYZ) == parse_form("x^3+y^3+z^3+t*x*y*z", XYZ, T)
    zero = tensor_to_form(SymmetricTensor(2, 4))
    assert zero.coeffs == {} and zero.shape == (2, 4)


def test_symmetric_tensor_rejects_bad_index():
    with pytest.raises(ShapeError):
        SymmetricTensor(2, 2, {(0, 2): 1})


def test_multinomial():
    assert multinomial((2, 2)) == 6
    assert multinomial((1, 1, 1)) == 6
    assert multinomial((3, 0, 0)) == 1


def expand(a: SymmetricTensor) -> dict:
    """sum over every index tuple a[i..k] X^i..X^k, collected by monomial."""
    out = {}
    for idx in product(range(a.n), repeat=a.valence):
        e = [0] * a.n
        for i in idx:
            e[i] += 1
        out[tuple(e)] = out.get(tuple(e), RatFunc(0)) + a[idx]
    return {e: c for e, c in out.items() if c}


@st.composite
def symmetric_tensors(draw, n, valence):
    keys = sorted({tuple(sorted(k)) for k in product(range(n), repeat=valence)})
    entries = {k: draw(ratfuncs(T)) for k in keys if draw(st.booleans())}
    return SymmetricTensor(n, valence, entries)


SHAPES = [(2, 3), (2, 4), (2, 6), (3, 3)]


@pytest.mark.parametrize("n, degree", SHAPES)
@given(data=st.data())
def test_round_trip_from_forms(n, degree, data):
    names = ("X", "Y", "Z")[:n]
    coeffs = {e: data.draw(ratfuncs(T)) for e in all_monomials(n, degree) if data.draw(st.booleans())}
    p = HomogeneousForm(names, degree, coeffs)
    assert tensor_to_form(form_to_tensor(p), names) == p


@pytest.mark.parametrize("n, degree", SHAPES)
@given(data=st.data())
def test_round_trip_from_tensors(n, degree, data):
    a = data.draw(symmetric_tensors(n, degree))
    assert form_to_tensor(tensor_to_form(a)) == a


@given(symmetric_tensors(2, 4))
def test_tensor_to_form_matches_expansion_oracle(a):
    assert tensor_to_form(a).coeffs == expand(a)


def test_identity_substitution():
    p = parse_form("x^4+t*x^2*y^2+y^4", ("x", "y"), T)
    assert linear_substitute(p, [[1, 0], [0, 1]]) == p


def test_substitution_requires_square_matrix():
    p = parse_form("x^2", ("x", "y"))
    with pytest.raises(ShapeError):
        linear_substitute(p, [[1, 0, 0], [0, 1, 0]])


def _reduce_omega(c: RatFunc) -> RatFunc:
    # omega is a primitive cube root of unity: reduce modulo w^2+w+1
    rule = ParamPoly.from_terms({(0, 2): 1, (0, 1): 1, (0, 0): 1}, ("t", "w"))
    assert c.denominator.degree() == 0
    _, r = c.numerator.divmod(rule)
    return RatFunc.from_params(r, c.denominator)


def test_omega_rotation_multiplies_parameter():
    p = parse_form("x^3+y^3+z^3+t*x*y*z", XYZ, ("t", "w"))
    w = rf("w", ("w",))
    q = linear_substitute(p, [[w, 0, 0], [0, 1, 0], [0, 0, 1]])
    reduced = HomogeneousForm(XYZ, 3, {e: _reduce_omega(c) for e, c in q.coeffs.items()})
    assert reduced == parse_form("x^3+y^3+z^3+w*t*x*y*z", XYZ, ("t", "w"))


def test_eseven_parameter_change():
    p = parse_form("x^4+t*x^2*y^2+y^4", ("x", "y"), T)
    q = linear_substitute(p, [[1, 1], [1, -1]])
    assert q == parse_form("(2+t)*x^4+(12-2*t)*x^2*y^2+(2+t)*y^4", ("x", "y"), T)
    scaled = q.scale(1 / q.coeffs[(4, 0)])
    assert scaled.coeffs[(2, 2)] == rf("2*(6-t)/(2+t)")
    assert scaled.coeffs[(0, 4)] == 1


@given(integer_forms(2, 4), int_matrices(2), int_matrices(2))
def test_composition_law(p, m1, m2):
    # X -> M X: substituting M1 then M2 is substituting M1*M2
    prod_ = [[sum(m1[i][k] * m2[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert linear_substitute(p, prod_) == linear_substitute(linear_substitute(p, m1), m2)


@given(integer_forms(3, 3, 3), int_matrices(3, 2), int_matrices(3, 2))
def test_composition_law_ternary(p, m1, m2):
    prod_ = [[sum(m1[i][k] * m2[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert linear_substitute(p, prod_) == linear_substitute(linear_substitute(p, m1), m2)


def test_substitution_is_evaluation_at_mx():
    p = parse_form("x^3-2*x*y^2+5*y^3", ("x", "y"))
    m = [[2, 1], [-1, 3]]
    q = linear_substitute(p, m)
    for x, y in [(1, 0), (2, -3), (Fraction(1, 2), 5)]:
        mx = (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
        assert value(q, (x, y)) == value(p, mx)


def value(p: HomogeneousForm, point):
    total = Fraction(0)
    for e, c in p.coeffs.items():
        term = c.to_fraction()
        for v, k in zip(point, e):
            term *= Fraction(v) ** k
        total += term
    return total


def test_normalize_scale_clears_denominators_and_content():
    p = parse_form("(t/3)*x^3 + (2*t^2/9)*y^3", ("x", "y"), T)
    q = normalize_scale(p)
    assert q == parse_form("3*x^3+2*t*y^3", ("x", "y"), T)
    assert normalize_scale(p.scale(rf("-(t+1)/5"))) == q


@given(integer_forms(2, 6), ratfuncs(T, nonzero=True))
def test_proportional_up_to_scale(p, c):
    assert proportional(p, p.scale(c))
    assert normalize_scale(p) == normalize_scale(p.scale(c))


def test_not_proportional():
    a = parse_form("x^2+y^2", ("x", "y"))
    b = parse_form("x^2-y^2", ("x", "y"))
    assert not proportional(a, b)
