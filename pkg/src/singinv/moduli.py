"""Moduli algebras k[z]/(f, df) and their canonical multiplication tensors.

The coefficient field is k = Q(parameters).  Buchberger's algorithm runs over
that field, so it tacitly assumes the parameters avoid the zeros of every
leading coefficient it divides by; those polynomials are collected as the
*genericity locus* of the computation.

Only the polynomial quotient is computed.  For quasi-homogeneous f it agrees
with the analytic local algebra; otherwise a warning is attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional

from .arith import ParamPoly, RatFunc, param_factors
from .catalog import Catalog, default_catalog
from .errors import (
    ConstructionInapplicable,
    InconsistencyError,
    InputError,
    NonIsolatedError,
    NotAnIdealError,
)
from .forms import HomogeneousForm, Polynomial, multinomial, normalize_scale, parse_polynomial

__all__ = [
    "IdealPresentation",
    "Reducer",
    "QuotientAlgebra",
    "Subspace",
    "FiltrationReport",
    "NilpotencyIdeal",
    "Recipe",
    "RECIPES",
    "ModuliReport",
    "jacobian_ideal",
    "groebner",
    "quotient_algebra",
    "filtration",
    "multiplication_tensor",
    "nilpotency_ideal",
    "flag_multiplication_tensor",
    "ideal_from_generators",
    "absolute_invariants_of_singularity",
    "analyze",
    "build_algebra",
    "socle_ratio",
    "quasi_homogeneous_weights",
    "load_recipe",
]

NOT_QH_WARNING = "polynomial-quotient semantics; analytic agreement not guaranteed"


def _order_key(e):
    return (sum(e), e)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_str(variables, e) -> str:
    s = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k)
    return s or "1"


# -- ideals and Groebner bases ---------------------------------------------

@dataclass(frozen=True)
class IdealPresentation:
    variables: tuple
    generators: tuple  # Polynomials

    def __post_init__(self):
        if not self.generators:
            raise InputError("an ideal presentation needs at least one generator")
        for g in self.generators:
            if g.constant_term():
                raise InputError(f"generator {g} has a nonzero constant term")


def jacobian_ideal(f: Polynomial) -> IdealPresentation:
    """The ideal (f, df/dz_1, ..., df/dz_n)."""
    if f.constant_term():
        raise InputError("f must vanish at the origin")
    if any(sum(e) == 1 for e in f.terms):
        raise InputError("f is nonsingular at the origin (nonzero linear part)")
    if not f:
        raise InputError("f is the zero polynomial")
    gens = [f] + [f.diff(i) for i in range(len(f.variables))]
    return IdealPresentation(f.variables, tuple(gens))


class _Locus:
    """Irreducible parameter polynomials assumed nonzero."""

    def __init__(self):
        self.items: list[ParamPoly] = []

    def add(self, p: ParamPoly):
        for q in param_factors(p):
            if q not in self.items:
                self.items.append(q)

    def sorted(self) -> list:
        return sorted(self.items, key=lambda p: (p.degree(), str(p)))


class Reducer:
    """A reduced Groebner basis (graded lex, declared variable order) over Q(params)."""

    def __init__(self, variables, basis, locus):
        self.variables = tuple(variables)
        self.basis = basis  # list of term dicts, monic
        self.leading = [max(g, key=_order_key) for g in basis]
        self.locus = locus

    def normal_form_terms(self, terms: dict) -> dict:
        p = dict(terms)
        out = {}
        while p:
            lm = max(p, key=_order_key)
            c = p.pop(lm)
            for g, glm in zip(self.basis, self.leading):
                if _divides(glm, lm):
                    shift = tuple(a - b for a, b in zip(lm, glm))
                    for e, gc in g.items():
                        if e == glm:
                            continue
                        e2 = tuple(a + b for a, b in zip(e, shift))
                        v = p.get(e2)
                        v = -c * gc if v is None else v - c * gc
                        if v:
                            p[e2] = v
                        else:
                            p.pop(e2, None)
                    break
            else:
                out[lm] = c
        return out

    def normal_form(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.variables, self.normal_form_terms(f.terms))

    def rules(self) -> list:
        """Rewriting rules ``leading monomial -> -(tail)`` as Polynomials."""
        out = []
        for g, lm in zip(self.basis, self.leading):
            tail = {e: -c for e, c in g.items() if e != lm}
            out.append((lm, Polynomial(self.variables, tail)))
        return out

    def is_finite(self) -> bool:
        n = len(self.variables)
        for i in range(n):
            if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in self.leading):
                return False
        return True

    def standard_monomials(self) -> list:
        if not self.is_finite():
            raise NonIsolatedError(
                "the quotient is infinite-dimensional: non-isolated singularity (at generic parameter)"
            )
        n = len(self.variables)
        seen = {(0,) * n}
        frontier = [(0,) * n]
        while frontier:
            nxt = []
            for e in frontier:
                for i in range(n):
                    e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
                    if e2 not in seen and not any(_divides(lm, e2) for lm in self.leading):
                        seen.add(e2)
                        nxt.append(e2)
            frontier = nxt
        return sorted(seen, key=_order_key)


def _monic(terms: dict, locus: _Locus) -> dict:
    lm = max(terms, key=_order_key)
    lc = terms[lm]
    if lc.is_one():
        return terms
    locus.add(lc.numerator)
    inv = 1 / lc
    return {e: c * inv for e, c in terms.items()}


def groebner(ideal: IdealPresentation) -> Reducer:
    """Buchberger's algorithm, normal selection strategy (smallest lcm first)."""
    variables = ideal.variables
    locus = _Locus()
    G: list[dict] = []
    scratch = Reducer(variables, [], locus)
    for g in ideal.generators:
        scratch.basis, scratch.leading = G, [max(h, key=_order_key) for h in G]
        r = scratch.normal_form_terms(g.terms)
        if r:
            G.append(_monic(r, locus))
    pairs = {(i, j) for j in range(len(G)) for i in range(j)}
    lms = [max(g, key=_order_key) for g in G]
    while pairs:
        i, j = min(pairs, key=lambda ij: (_order_key(_lcm(lms[ij[0]], lms[ij[1]])), ij))
        pairs.discard((i, j))
        lcm = _lcm(lms[i], lms[j])
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            continue
        if any(
            k not in (i, j)
            and _divides(lms[k], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue
        s = {}
        for g, lm in ((G[i], lms[i]), (G[j], lms[j])):
            shift = tuple(a - b for a, b in zip(lcm, lm))
            sign = 1 if g is G[i] else -1
            for e, c in g.items():
                e2 = tuple(a + b for a, b in zip(e, shift))
                v = s.get(e2)
                v = c * sign if v is None else v + c * sign
                if v:
                    s[e2] = v
                else:
                    s.pop(e2, None)
        scratch.basis, scratch.leading = G, lms
        r = scratch.normal_form_terms(s)
        if r:
            G.append(_monic(r, locus))
            lms.append(max(G[-1], key=_order_key))
            k = len(G) - 1
            pairs |= {(m, k) for m in range(k)}
    # minimal, then reduced
    keep = [
        i
        for i, lm in enumerate(lms)
        if not any(
            _divides(lms[j], lm) and (lms[j] != lm or j < i) for j in range(len(G)) if j != i
        )
    ]
    G = [G[i] for i in keep]
    reduced = []
    for i, g in enumerate(G):
        others = Reducer(variables, G[:i] + G[i + 1:], locus)
        lm = max(g, key=_order_key)
        tail = others.normal_form_terms({e: c for e, c in g.items() if e != lm})
        reduced.append({lm: g[lm], **tail})
    reduced.sort(key=lambda g: _order_key(max(g, key=_order_key)))
    return Reducer(variables, reduced, locus)


# -- linear algebra over Q(params) ----------------------------------------

class Subspace:
    """Span of sparse vectors (``index -> RatFunc``) kept in reduced echelon form."""

    def __init__(self, vectors=()):
        self.rows: list[tuple[int, dict]] = []  # (pivot, row with row[pivot] == 1)
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> list:
        return [row for _, row in self.rows]

    def reduce(self, v: dict) -> dict:
        v = {k: c for k, c in v.items() if c}
        for piv, row in self.rows:
            c = v.get(piv)
            if c:
                for k, rc in row.items():
                    x = v.get(k)
                    x = -c * rc if x is None else x - c * rc
                    if x:
                        v[k] = x
                    else:
                        v.pop(k, None)
        return v

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        piv = min(v)
        inv = 1 / v[piv]
        v = {k: c * inv for k, c in v.items()}
        new_rows = []
        for p, row in self.rows:
            c = row.get(piv)
            if c:
                row = dict(row)
                for k, vc in v.items():
                    x = row.get(k)
                    x = -c * vc if x is None else x - c * vc
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
            new_rows.append((p, row))
        new_rows.append((piv, v))
        new_rows.sort(key=lambda pr: pr[0])
        self.rows = new_rows
        return True

    def copy(self) -> "Subspace":
        s = Subspace()
        s.rows = list(self.rows)
        return s

    def __add__(self, other: "Subspace") -> "Subspace":
        s = self.copy()
        for v in other.basis:
            s.add(v)
        return s


# -- quotient algebra ------------------------------------------------------

class QuotientAlgebra:
    """Finite-dimensional quotient with a standard-monomial basis."""

    def __init__(self, reducer: Reducer):
        self.reducer = reducer
        self.variables = reducer.variables
        self.basis = reducer.standard_monomials()
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.table: dict = {}
        for i, a in enumerate(self.basis):
            for j in range(i, len(self.basis)):
                b = self.basis[j]
                prod = tuple(x + y for x, y in zip(a, b))
                self.table[i, j] = self._vector(prod)

    def _vector(self, exps) -> dict:
        if exps in self.index:
            return {self.index[exps]: RatFunc(1)}
        nf = self.reducer.normal_form_terms({exps: RatFunc(1)})
        return {self.index[e]: c for e, c in nf.items()}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def genericity_locus(self) -> list:
        return self.reducer.locus.sorted()

    def monomial_name(self, i: int) -> str:
        return _mono_str(self.variables, self.basis[i])

    def element(self, f: Polynomial) -> dict:
        nf = self.reducer.normal_form_terms(f.terms)
        return {self.index[e]: c for e, c in nf.items()}

    def monomial(self, exps) -> dict:
        return self._vector(tuple(exps))

    def variable(self, i: int) -> dict:
        e = [0] * len(self.variables)
        e[i] = 1
        return self._vector(tuple(e))

    def mul(self, u: dict, v: dict) -> dict:
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                ab = a * b
                for k, c in self.table[(i, j) if i <= j else (j, i)].items():
                    x = out.get(k)
                    x = ab * c if x is None else x + ab * c
                    if x:
                        out[k] = x
                    else:
                        out.pop(k, None)
        return out

    def power(self, v: dict, k: int) -> dict:
        out = v
        for _ in range(k - 1):
            if not out:
                break
            out = self.mul(out, v)
        return out

    def unit_index(self) -> int:
        return self.index[(0,) * len(self.variables)]

    def maximal_ideal(self) -> Subspace:
        one = self.unit_index()
        return Subspace({i: RatFunc(1)} for i in range(self.dim) if i != one)

    def check_associative(self) -> bool:
        """Exhaustive check over sorted basis triples (commutativity is structural)."""
        unit = lambda i: {i: RatFunc(1)}  # noqa: E731
        for i, j, k in combinations_with_replacement(range(self.dim), 3):
            a = self.mul(self.table[i, j], unit(k))
            b = self.mul(unit(i), self.table[min(j, k), max(j, k)])
            c = self.mul(self.table[min(i, k), max(i, k)], unit(j))
            if a != b or a != c:
                return False
        return True

    def check_normal_forms(self) -> bool:
        """Every stored product is already reduced."""
        for vec in self.table.values():
            terms = {self.basis[k]: c for k, c in vec.items()}
            if self.reducer.normal_form_terms(terms) != terms:
                return False
        return True


def quotient_algebra(reducer: Reducer) -> QuotientAlgebra:
    return QuotientAlgebra(reducer)


@dataclass
class FiltrationReport:
    dims: list  # dim m^k for k = 1, 2, ...
    socle_degree: int
    embedding_dim: int
    powers: list  # Subspace for m^1 .. m^N
    cotangent: list  # basis indices representing m/m^2
    socle: dict  # spanning vector of m^N


def _powers(A: QuotientAlgebra, first: Subspace, multipliers) -> list:
    powers = [first]
    while True:
        nxt = Subspace()
        for v in powers[-1].basis:
            for g in multipliers:
                nxt.add(A.mul(g, v))
        if nxt.dim == 0:
            return powers
        if nxt.dim >= powers[-1].dim:
            raise ConstructionInapplicable("powers of the ideal do not shrink: the algebra is not local")
        powers.append(nxt)


def filtration(A: QuotientAlgebra) -> FiltrationReport:
    m = A.maximal_ideal()
    if m.dim == 0:
        raise ConstructionInapplicable("the maximal ideal is zero (Morse point): construction inapplicable")
    gens = [A.variable(i) for i in range(len(A.variables))]
    powers = _powers(A, m, gens)
    dims = [p.dim for p in powers] + [0]
    N = len(powers)
    if dims[N - 1] != 1:
        raise ConstructionInapplicable(
            f"socle not one-dimensional (dim m^{N} = {dims[N - 1]}): construction inapplicable"
        )
    if N < 2:
        raise ConstructionInapplicable("socle degree is 1: construction inapplicable")
    m2 = powers[1] if N >= 2 else Subspace()
    cotangent = _choose_reps(A, m2, _candidates(A, m))
    if len(cotangent) != m.dim - m2.dim:
        raise InconsistencyError("could not find monomial representatives of m/m^2")
    return FiltrationReport(dims, N, len(cotangent), powers, cotangent, powers[-1].basis[0])


def _candidates(A: QuotientAlgebra, space: Subspace) -> list:
    """Basis monomials lying in ``space``: degree one in declared order first."""
    idx = [i for i in range(A.dim) if space.contains({i: RatFunc(1)})]

    def key(i):
        e = A.basis[i]
        if sum(e) == 1:
            return (0, e.index(1))
        return (1, _order_key(e))

    return sorted(idx, key=key)


def _choose_reps(A, modulo: Subspace, candidates) -> list:
    span = modulo.copy()
    chosen = []
    for i in candidates:
        if span.add({i: RatFunc(1)}):
            chosen.append(i)
    return chosen


def _coordinate(v: dict, s: dict) -> RatFunc:
    if not v:
        return RatFunc(0)
    piv = min(s)
    return v.get(piv, RatFunc(0)) / s[piv]


def _dual_name(A: QuotientAlgebra, i: int) -> str:
    return A.monomial_name(i).upper().replace("^", "").replace("*", "")


def _form_from_products(A, reps, degree, top) -> HomogeneousForm:
    n = len(reps)
    vecs = [{i: RatFunc(1)} for i in reps]
    coeffs = {}
    for combo in combinations_with_replacement(range(n), degree):
        prod = vecs[combo[0]]
        for c in combo[1:]:
            prod = A.mul(prod, vecs[c])
        lam = _coordinate(prod, top)
        if lam:
            e = [0] * n
            for c in combo:
                e[c] += 1
            coeffs[tuple(e)] = lam * multinomial(e)
    names = tuple(_dual_name(A, i) for i in reps)
    return HomogeneousForm(names, degree, coeffs)


def multiplication_tensor(A: QuotientAlgebra, report: FiltrationReport, normalize: bool = True) -> HomogeneousForm:
    """The degree-N form of the map Sym^N(m/m^2) -> m^N in the dual basis."""
    form = _form_from_products(A, report.cotangent, report.socle_degree, report.socle)
    return normalize_scale(form) if normalize else form


@dataclass
class NilpotencyIdeal:
    space: Subspace
    members: list  # basis indices spanning the ideal
    k: int
    nilpotent_verified: bool
    ideal_verified: bool


def nilpotency_ideal(A: QuotientAlgebra, k: int, strict: bool = True) -> NilpotencyIdeal:
    """Span of the basis monomials of m whose k-th power vanishes, verified as an ideal."""
    if k < 2:
        raise ValueError("k must be at least 2")
    one = A.unit_index()
    members = [i for i in range(A.dim) if i != one and not A.power({i: RatFunc(1)}, k)]
    space = Subspace({i: RatFunc(1)} for i in members)
    nilpotent = True
    for combo in combinations_with_replacement(members, k):
        prod = {combo[0]: RatFunc(1)}
        for c in combo[1:]:
            prod = A.mul(prod, {c: RatFunc(1)})
            if not prod:
                break
        if prod:
            nilpotent = False
            break
    gens = [A.variable(i) for i in range(len(A.variables))]
    ideal = all(space.contains(A.mul(g, v)) for g in gens for v in space.basis)
    if strict and not (nilpotent and ideal):
        raise NotAnIdealError("nilpotency set is not a verified ideal; give its generators with an 'ideal' recipe line")
    return NilpotencyIdeal(space, members, k, nilpotent, ideal)


def ideal_from_generators(A: QuotientAlgebra, generators) -> Subspace:
    """The ideal of A generated by the given polynomials, as a subspace."""
    space = Subspace()
    todo = [A.element(g) for g in generators]
    gens = [A.variable(i) for i in range(len(A.variables))]
    while todo:
        v = todo.pop()
        if v and space.add(v):
            todo.extend(A.mul(g, v) for g in gens)
    if space.contains({A.unit_index(): RatFunc(1)}):
        raise ConstructionInapplicable("the supplied generators give the whole algebra")
    return space


def flag_multiplication_tensor(A: QuotientAlgebra, nil, normalize: bool = True):
    """Form of Sym^r(n/mn) -> n^r, plus the index of the canonical direction.

    ``nil`` is a NilpotencyIdeal or a Subspace.  Representatives of n/mn come
    from basis monomials; those of the canonical subspace (m^2 ∩ n)/mn are
    placed last.  The returned index is that of the canonical direction when
    it is a line, else None.
    """
    space = nil.space if isinstance(nil, NilpotencyIdeal) else nil
    gens = [A.variable(i) for i in range(len(A.variables))]
    mn = Subspace()
    for g in gens:
        for v in space.basis:
            mn.add(A.mul(g, v))
    powers = _powers(A, space, space.basis)
    top = powers[-1]
    if top.dim != 1:
        raise ConstructionInapplicable(
            f"top power of the ideal has dimension {top.dim}, not 1: construction inapplicable"
        )
    if any(A.mul(g, top.basis[0]) for g in gens):
        raise ConstructionInapplicable("m * n^r is not zero: multiplication map is not well defined")
    m = A.maximal_ideal()
    m_powers = _powers(A, m, gens)
    m2 = m_powers[1] if len(m_powers) > 1 else Subspace()
    in_space = _candidates(A, space)
    canonical = _choose_reps(A, mn, [i for i in in_space if m2.contains({i: RatFunc(1)})])
    rest = _choose_reps(A, mn + Subspace({i: RatFunc(1)} for i in canonical), in_space)
    reps = rest + canonical
    form = _form_from_products(A, reps, len(powers), top.basis[0])
    if normalize:
        form = normalize_scale(form)
    e_index = len(reps) - 1 if len(canonical) == 1 else None
    return form, e_index


# -- pipeline ------------------------------------------------------------

@dataclass(frozen=True)
class Recipe:
    name: str
    variation: str  # "standard" or "flag"
    absolutes: tuple
    power: int = 0  # nilpotency exponent for the flag variation
    catalog: Optional[Catalog] = None
    ideal: tuple = ()  # explicit generators of n, as polynomial text


RECIPES = {
    "e6": Recipe("e6", "standard", ("j_ternary_reciprocal",)),
    "e7": Recipe("e7", "standard", ("j_quartic_moduli",)),
    "e8": Recipe("e8", "flag", ("eeight",), power=4),
    "sextic": Recipe("sextic", "standard", ("sextic_1",)),
    "two-param": Recipe("two-param", "standard", ("two_param_1", "two_param_2")),
}


def load_recipe(path) -> Recipe:
    """Read a custom recipe file.

    Lines: ``variation standard`` or ``variation flag <k>``; ``ideal <g>, <g>``
    to give the flag ideal by generators instead of searching for it;
    ``absolute <name>`` to use a catalog ratio; ``absolute <name> = <expr>``
    to define one inline using qualified entry names (``binary_quartic.J``).
    """
    from pathlib import Path

    variation, power, names, extra, ideal = "standard", 0, [], [], []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "variation":
            parts = rest.split()
            variation = parts[0]
            if variation == "flag":
                power = int(parts[1]) if len(parts) > 1 else 2
            elif variation != "standard":
                raise InputError(f"unknown variation {variation!r}")
        elif key == "ideal":
            ideal.extend(g.strip() for g in rest.split(",") if g.strip())
        elif key == "absolute":
            if "=" in rest:
                extra.append(line)
                rest = rest.split("=", 1)[0].strip()
            names.append(rest)
        else:
            raise InputError(f"unknown recipe keyword {key!r}")
    if not names:
        raise InputError("recipe names no absolute invariants")
    catalog = Catalog.parse("\n".join(extra), base=default_catalog()) if extra else None
    if ideal and variation != "flag":
        raise InputError("an ideal line needs 'variation flag'")
    return Recipe(str(path), variation, tuple(names), power, catalog, tuple(ideal))


def quasi_homogeneous_weights(f: Polynomial):
    """Positive weights making every monomial of f weighted-degree 1, if unique; else None."""
    n = len(f.variables)
    rows = [[Fraction(x) for x in e] + [Fraction(1)] for e in f.terms]
    pivots, r = [], 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                fac = rows[i][c]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]) or len(pivots) < n:
        return None
    w = [rows[i][-1] for i in range(n)]
    return tuple(w) if all(x > 0 for x in w) else None


@dataclass
class ModuliReport:
    variables: tuple
    basis: list
    dimension: int
    filtration: Optional[FiltrationReport] = None
    form: Optional[HomogeneousForm] = None
    e_index: Optional[int] = None
    genericity: list = field(default_factory=list)
    invariants: list = field(default_factory=list)  # (name, RatFunc)
    warnings: list = field(default_factory=list)
    algebra: Optional[QuotientAlgebra] = None
    weights: Optional[tuple] = None

    @property
    def socle_degree(self):
        return self.filtration.socle_degree if self.filtration else None


def build_algebra(f: Polynomial) -> QuotientAlgebra:
    return quotient_algebra(groebner(jacobian_ideal(f)))


def analyze(f, variables=None, params=(), recipe=None, check: bool = False) -> ModuliReport:
    """Run the whole pipeline; ``recipe`` may be a Recipe or a builtin name."""
    if isinstance(f, str):
        f = parse_polynomial(f, variables, params)
    A = build_algebra(f)
    if check and not (A.check_associative() and A.check_normal_forms()):
        raise InconsistencyError("multiplication table failed the associativity/normal-form check")
    weights = quasi_homogeneous_weights(f)
    report = ModuliReport(
        f.variables,
        [A.monomial_name(i) for i in range(A.dim)],
        A.dim,
        genericity=A.genericity_locus,
        algebra=A,
        weights=weights,
    )
    if weights is None:
        report.warnings.append(NOT_QH_WARNING)
    if isinstance(recipe, str):
        recipe = RECIPES[recipe]
    if recipe is not None and recipe.variation == "flag":
        if recipe.ideal:
            names = set(params)
            for c in f.terms.values():
                names.update(c.params)
            gens = [parse_polynomial(g, f.variables, sorted(names)) for g in recipe.ideal]
            nil = ideal_from_generators(A, gens)
        else:
            nil = nilpotency_ideal(A, recipe.power)
        report.form, report.e_index = flag_multiplication_tensor(A, nil)
        try:
            report.filtration = filtration(A)
        except ConstructionInapplicable:
            pass
    else:
        report.filtration = filtration(A)
        report.form = multiplication_tensor(A, report.filtration)
    if recipe is not None:
        catalog = recipe.catalog or default_catalog()
        e_index = report.e_index if report.e_index is not None else 0
        for name in recipe.absolutes:
            report.invariants.append((name, catalog.evaluate_absolute(name, report.form, e_index)))
    return report


def absolute_invariants_of_singularity(f, recipe, variables=None, params=()) -> list:
    return [v for _, v in analyze(f, variables, params, recipe).invariants]


def socle_ratio(A: QuotientAlgebra, a, b) -> RatFunc:
    """``c`` with ``z^a = c z^b`` in the one-dimensional top power of m."""
    va, vb = A.monomial(a), A.monomial(b)
    if not vb:
        raise ValueError("reference monomial vanishes in the algebra")
    c = _coordinate(va, vb)
    if any(va.get(k, RatFunc(0)) != c * vb.get(k, RatFunc(0)) for k in set(va) | set(vb)):
        raise ValueError("monomials are not proportional")
    return c
