from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from singinv.arith import RatFunc
from singinv.catalog import default_catalog
from singinv.errors import ShapeError, UnboundNameError, VarianceError
from singinv.forms import form_to_tensor, parse_form, parse_ratfunc
from singinv.tensor import (
    ContractionSpec,
    Tensor,
    brute_force_contract,
    contract,
    covector,
    dense_contract,
    inline,
    levi_civita,
    parse_spec,
)

from strategies import integer_forms

XYZ = ("x", "y", "z")


def rf(text):
    return parse_ratfunc(text, ("t",))


def test_levi_civita_two():
    e = levi_civita(2)
    assert e[0, 1] == 1 and e[1, 0] == -1 and e[0, 0] == 0 and e[1, 1] == 0
    assert e.slots == ("u", "u")
    assert sum((e[i, j] * e[i, j] for i, j in product(range(2), repeat=2)), RatFunc(0)) == 2


def test_levi_civita_three():
    e = levi_civita(3)
    assert len(e.entries) == 6
    assert {v.to_fraction() for v in e.entries.values()} == {1, -1}
    assert e[0, 1, 2] == 1 and e[2, 1, 0] == -1 and e[1, 2, 0] == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_levi_civita_antisymmetric(n):
    e = levi_civita(n)
    for idx in product(range(n), repeat=n):
        for k in range(n - 1):
            swapped = list(idx)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            assert e[tuple(swapped)] == -e[idx]


def test_levi_civita_needs_two_dimensions():
    with pytest.raises(ShapeError):
        levi_civita(1)


def test_covector():
    e = covector(2)
    assert e.slots == ("u",) and e.entries == {(0,): 1}


def test_tensor_rejects_out_of_range_index():
    with pytest.raises(ShapeError):
        Tensor(2, ("l",), {(2,): 1})


def test_spec_label_discipline():
    with pytest.raises(ShapeError):
        parse_spec("J = a[ii] b[i]")
    with pytest.raises(ShapeError):
        parse_spec("J = a[ij]")


def test_variance_violation():
    eps = levi_civita(2)
    spec = parse_spec("J = eps[ij] eps[ij]")
    with pytest.raises(VarianceError):
        contract(spec, {"eps": eps})


def test_declared_variance_must_match_binding():
    a = Tensor(2, ("l", "l"), {(0, 0): 1})
    with pytest.raises(VarianceError):
        contract(parse_spec("J = a[^ij] eps[ij]"), {"a": a, "eps": levi_civita(2)})


def test_unbound_name():
    with pytest.raises(UnboundNameError):
        contract(parse_spec("J = a[ij] eps[ij]"), {"a": Tensor(2, ("l", "l"))})


def test_dimension_mismatch():
    a = Tensor(3, ("l", "l"), {(0, 0): 1})
    with pytest.raises(ShapeError):
        contract(parse_spec("J = a[ij] eps[ij]"), {"a": a, "eps": levi_civita(2)})


def test_contraction_with_zero_tensor():
    zero = Tensor(3, ("l", "l", "l"))
    spec = parse_spec("b[k^r] = a[pqk] eps[^pqr]")
    out = contract(spec, {"a": zero, "eps": levi_civita(3)})
    assert out.entries == {} and out.slots == ("l", "u")
    J = parse_spec("J = a[pqk] v[^p] v[^q] v[^k]")
    assert contract(J, {"a": zero, "v": covector(3)}).value() == 0


def test_free_label_order():
    m = Tensor(2, ("l", "u"), {(0, 1): 5, (1, 0): 7})
    spec = parse_spec("b[j^i] = m[j^i]")
    assert contract(spec, {"m": m}).entries == m.entries
    # free labels of both variances, in a different order from the factors
    flip = parse_spec("c[i^j] = m[p^q] eps[^pj] w[qi]")
    w = Tensor(2, ("l", "l"), {(0, 0): 1, (1, 1): 1})
    out = contract(flip, {"m": m, "eps": levi_civita(2), "w": w})
    assert out == brute_force_contract(flip, {"m": m, "eps": levi_civita(2), "w": w})


def test_self_trace():
    m = Tensor(3, ("l", "u"), {(i, j): i + 3 * j + 1 for i in range(3) for j in range(3)})
    tr = contract(parse_spec("T = m[i^i]"), {"m": m}).value()
    assert tr == 1 + 5 + 9


ESIX = parse_form("x^3+y^3+z^3+t*x*y*z", XYZ, ("t",))


def test_ternary_cubic_j_from_written_specs():
    a = form_to_tensor(ESIX).to_tensor()
    eps = levi_civita(3)
    b = contract(parse_spec("b[ij^kl] = a[pqi] a[rsj] eps[^prk] eps[^qsl]"), {"a": a, "eps": eps})
    assert b.slots == ("l", "l", "u", "u")
    J = contract(parse_spec("J = b[ij^kl] b[kl^ij]"), {"b": b}).value()
    assert J == rf("t*(t^3-216)/54")


def test_ternary_cubic_k_against_full_summation():
    cat = default_catalog()
    J = cat.evaluate_invariant("ternary_cubic.J", ESIX)
    K = cat.evaluate_invariant("ternary_cubic.K", ESIX)
    bindings = {"a": form_to_tensor(ESIX).to_tensor(), "eps": levi_civita(3)}
    flat = cat.entry("ternary_cubic.K").flattened()
    assert dense_contract(flat, bindings).value() == K
    assert K.numerator.degree() == 6
    ratio = J**3 / (J**3 - 6 * K**2)
    assert ratio == rf("-t^3*(t^3-216)^3/(1728*(t^3+27)^3)")


def test_inline_flattens_covariants():
    b = parse_spec("b[ij^kl] = a[pqi] a[rsj] eps[^prk] eps[^qsl]")
    J = parse_spec("J = b[ij^kl] b[kl^ij]")
    flat = inline(J, {"b": b})
    assert [f[0] for f in flat.factors] == ["a", "a", "eps", "eps"] * 2
    a = form_to_tensor(ESIX).to_tensor()
    assert brute_force_contract(flat, {"a": a, "eps": levi_civita(3)}).value() == rf("t*(t^3-216)/54")


# -- random networks: scheduler against both oracles ------------------------------

@st.composite
def networks(draw):
    n = draw(st.integers(2, 3))
    nfactors = draw(st.integers(1, 4))
    tensors, slots = {}, []
    for k in range(nfactors):
        valence = draw(st.integers(1, 3))
        var = tuple(draw(st.sampled_from("ul")) for _ in range(valence))
        idx = list(product(range(n), repeat=valence))
        entries = {i: draw(st.integers(-3, 3)) for i in idx if draw(st.booleans())}
        name = f"T{k}"
        tensors[name] = Tensor(n, var, entries)
        slots += [(name, s, v) for s, v in enumerate(var)]
    order = draw(st.permutations(range(len(slots))))
    uppers = [i for i in order if slots[i][2] == "u"]
    lowers = [i for i in order if slots[i][2] == "l"]
    npairs = draw(st.integers(0, min(len(uppers), len(lowers))))
    label = {}
    letters = iter("abcdefghijklmnopqrstuvwxyz")
    for u, l in zip(uppers[:npairs], lowers[:npairs]):
        label[u] = label[l] = next(letters)
    free, free_var = [], []
    for i in range(len(slots)):
        if i not in label:
            label[i] = next(letters)
            free.append(label[i])
            free_var.append(slots[i][2])
    factors = []
    pos = 0
    for name, t in tensors.items():
        labs = tuple(label[pos + s] for s in range(t.valence))
        factors.append((name, labs, None))
        pos += t.valence
    perm = draw(st.permutations(range(len(free))))
    spec = ContractionSpec(
        tuple(factors), tuple(free[i] for i in perm), tuple(free_var[i] for i in perm), "R"
    )
    return spec, tensors


@given(networks())
def test_scheduler_matches_oracles(net):
    spec, tensors = net
    staged = contract(spec, tensors)
    assert brute_force_contract(spec, tensors) == staged
    assert dense_contract(spec, tensors) == staged


@given(integer_forms(2, 4, 3), st.integers(-3, 3))
def test_rational_entries_take_the_general_path(p, k):
    a = form_to_tensor(p.scale(rf("t") + k)).to_tensor()
    eps = levi_civita(2)
    spec = parse_spec("J = a[ijkl] a[mnpq] eps[^im] eps[^jn] eps[^kp] eps[^lq]")
    staged = contract(spec, {"a": a, "eps": eps}).value()
    assert staged == brute_force_contract(spec, {"a": a, "eps": eps}).value()
    assert staged == dense_contract(spec, {"a": a, "eps": eps}).value()


def test_permuted_epsilon_entries_are_signs():
    for n in (2, 3):
        e = levi_civita(n)
        for p in permutations(range(n)):
            assert abs(e[p].to_fraction()) == 1
