"""Polynomials over RatFunc, homogeneous forms and symmetric tensors."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from functools import reduce
from math import factorial, gcd, lcm
from numbers import Rational

from .arith import ParamPoly, RatFunc, as_ratfunc, param_gcd
from .errors import InputError, NonHomogeneousError, ShapeError
from .parser import evaluate, parse_expression

__all__ = [
    "Polynomial",
    "HomogeneousForm",
    "SymmetricTensor",
    "parse_polynomial",
    "parse_form",
    "parse_ratfunc",
    "form_to_tensor",
    "tensor_to_form",
    "linear_substitute",
    "normalize_scale",
    "proportional",
    "multinomial",
]

ZERO = RatFunc(0)
ONE = RatFunc(1)


def multinomial(exps) -> int:
    out = factorial(sum(exps))
    for e in exps:
        out //= factorial(e)
    return out


class Polynomial:
    """Sparse polynomial in named variables with RatFunc coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        self.terms = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(self.variables):
                raise ValueError("exponent vector does not match the variable list")
            c = as_ratfunc(c)
            if c:
                self.terms[tuple(exps)] = c

    @classmethod
    def _from_clean(cls, variables, terms):
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, variables, value) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables, name: str) -> "Polynomial":
        i = list(variables).index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): ONE})

    def _scalar(self, other):
        if isinstance(other, (RatFunc, Rational)):
            return as_ratfunc(other)
        return None

    def _check(self, other):
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def __add__(self, other):
        s = self._scalar(other)
        if s is not None:
            other = Polynomial.constant(self.variables, s)
        elif not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._from_clean(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_clean(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Polynomial, RatFunc, Rational)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s = self._scalar(other)
        if s is not None:
            if not s:
                return Polynomial._from_clean(self.variables, {})
            return Polynomial._from_clean(self.variables, {e: c * s for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._from_clean(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = self._scalar(other)
        if s is None and isinstance(other, Polynomial) and other.is_constant():
            s = other.constant_term()
        if s is None:
            raise TypeError("division by a non-constant polynomial")
        return self * (ONE / s)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Polynomial.constant(self.variables, ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (RatFunc, Rational)):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> RatFunc:
        return self.terms.get((0,) * len(self.variables), ZERO)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def diff(self, var) -> "Polynomial":
        i = self.variables.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Polynomial._from_clean(self.variables, out)

    def compose(self, images) -> "Polynomial":
        """Substitute ``images[i]`` (Polynomials in a common ring) for variable i."""
        images = list(images)
        if len(images) != len(self.variables):
            raise ShapeError("need one image per variable")
        target = images[0].variables
        powers = [{0: Polynomial.constant(target, ONE)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        out = Polynomial(target)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial(self.variables, {e: fn(c) for e, c in self.terms.items()})

    def subs_params(self, assignment: dict) -> "Polynomial":
        return self.map_coefficients(lambda c: c.subs(assignment))

    @property
    def params(self) -> tuple:
        out = set()
        for c in self.terms.values():
            out.update(c.params)
        return tuple(sorted(out))

    def sorted_terms(self):
        """Terms in descending graded-lex order of the declared variables."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def __str__(self):
        return _format_terms(self.variables, self.sorted_terms())

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def _format_terms(variables, terms) -> str:
    if not terms:
        return "0"
    out = ""
    for e, c in terms:
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k
        )
        text = str(c)
        if c.is_constant():
            val = c.to_fraction()
            sign = "-" if val < 0 else "+"
            mag = abs(val)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
        elif len(c.num) == 1 and c.den.is_ground:
            sign = "-" if text.startswith("-") else "+"
            body = text.lstrip("-").replace("(", "").replace(")", "")
            body = f"{body}*{mono}" if mono else body
        else:
            sign = "+"
            body = f"({text})*{mono}" if mono else f"({text})"
        out += sign + body
    return out[1:] if out.startswith("+") else out


def _resolver(variables, params):
    variables = tuple(variables)
    clash = set(variables) & set(params)
    if clash:
        raise InputError(f"names declared both as variables and parameters: {sorted(clash)}")
    lookup = {v: Polynomial.var(variables, v) for v in variables}
    lookup.update({p: Polynomial.constant(variables, RatFunc.param(p)) for p in params})
    return lookup.get


def parse_polynomial(text: str, variables, params=()) -> Polynomial:
    variables = tuple(variables)
    node = parse_expression(text)
    value = evaluate(node, _resolver(variables, params), text)
    if not isinstance(value, Polynomial):
        value = Polynomial.constant(variables, value)
    return value


def parse_ratfunc(text: str, params=()) -> RatFunc:
    """Parse a rational function of the declared parameters (``/`` unrestricted)."""
    lookup = {p: RatFunc.param(p) for p in params}
    value = evaluate(parse_expression(text), lookup.get, text)
    return as_ratfunc(value)


class HomogeneousForm:
    """Homogeneous polynomial of degree N in n form-variables."""

    __slots__ = ("variables", "degree", "coeffs")

    def __init__(self, variables, degree: int, coeffs=None):
        self.variables = tuple(variables)
        self.degree = int(degree)
        if not self.variables or self.degree < 1:
            raise ShapeError("a form needs n >= 1 variables and degree N >= 1")
        self.coeffs = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != len(self.variables):
                raise ShapeError("exponent vector does not match the variable list")
            if sum(e) != self.degree:
                raise NonHomogeneousError(f"monomial {e} does not have degree {self.degree}")
            c = as_ratfunc(c)
            if c:
                self.coeffs[e] = c

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def shape(self) -> tuple:
        return (self.n, self.degree)

    @classmethod
    def from_polynomial(cls, p: Polynomial, degree: int | None = None) -> "HomogeneousForm":
        degs = {sum(e) for e in p.terms}
        if len(degs) > 1:
            raise NonHomogeneousError(f"polynomial has terms of degrees {sorted(degs)}")
        if degree is None:
            if not degs:
                raise NonHomogeneousError("the zero polynomial has no degree")
            degree = degs.pop()
        return cls(p.variables, degree, p.terms)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.variables, self.coeffs)

    def scale(self, c) -> "HomogeneousForm":
        c = as_ratfunc(c)
        return HomogeneousForm(self.variables, self.degree, {e: v * c for e, v in self.coeffs.items()})

    def subs_params(self, assignment: dict) -> "HomogeneousForm":
        return HomogeneousForm(
            self.variables, self.degree, {e: c.subs(assignment) for e, c in self.coeffs.items()}
        )

    def rename(self, variables) -> "HomogeneousForm":
        return HomogeneousForm(variables, self.degree, self.coeffs)

    @property
    def params(self) -> tuple:
        out = set()
        for c in self.coeffs.values():
            out.update(c.params)
        return tuple(sorted(out))

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __str__(self):
        items = sorted(self.coeffs.items(), key=lambda ec: ec[0], reverse=True)
        return _format_terms(self.variables, items)

    def __repr__(self):
        return f"HomogeneousForm({str(self)!r}, degree={self.degree})"


def parse_form(text: str, variables, params=()) -> HomogeneousForm:
    p = parse_polynomial(text, variables, params)
    try:
        return HomogeneousForm.from_polynomial(p)
    except NonHomogeneousError as exc:
        raise NonHomogeneousError(f"{exc}: {text!r} is not homogeneous") from None


class SymmetricTensor:
    """Fully symmetric valence-N tensor over n indices, keyed by sorted index tuples.

    Indices are 0-based.
    """

    __slots__ = ("n", "valence", "entries")

    def __init__(self, n: int, valence: int, entries=None):
        self.n = n
        self.valence = valence
        self.entries = {}
        for idx, v in (entries or {}).items():
            key = tuple(sorted(idx))
            if len(key) != valence or any(not 0 <= i < n for i in key):
                raise ShapeError(f"bad index {idx} for n={n}, valence={valence}")
            v = as_ratfunc(v)
            if v:
                self.entries[key] = v

    def __getitem__(self, idx) -> RatFunc:
        return self.entries.get(tuple(sorted(idx)), ZERO)

    def to_tensor(self):
        """Expand to a general all-lower Tensor with every index ordering."""
        from .tensor import Tensor

        full = {}
        for key, v in self.entries.items():
            for perm in set(permutations(key)):
                full[perm] = v
        return Tensor(self.n, ("l",) * self.valence, full)

    def __eq__(self, other):
        if not isinstance(other, SymmetricTensor):
            return NotImplemented
        return (self.n, self.valence, self.entries) == (other.n, other.valence, other.entries)

    __hash__ = None

    def __repr__(self):
        return f"SymmetricTensor(n={self.n}, valence={self.valence}, entries={self.entries!r})"


def _exps_of(key, n):
    e = [0] * n
    for i in key:
        e[i] += 1
    return tuple(e)


def _key_of(exps):
    return tuple(i for i, k in enumerate(exps) for _ in range(k))


def form_to_tensor(p: HomogeneousForm) -> SymmetricTensor:
    return SymmetricTensor(
        p.n, p.degree, {_key_of(e): c / multinomial(e) for e, c in p.coeffs.items()}
    )


_DEFAULT_NAMES = {1: ("X",), 2: ("X", "Y"), 3: ("X", "Y", "Z")}


def tensor_to_form(a: SymmetricTensor, variables=None) -> HomogeneousForm:
    if variables is None:
        variables = _DEFAULT_NAMES.get(a.n) or tuple(f"X{i + 1}" for i in range(a.n))
    return HomogeneousForm(
        variables,
        a.valence,
        {_exps_of(k, a.n): v * multinomial(_exps_of(k, a.n)) for k, v in a.entries.items()},
    )


def linear_substitute(p, matrix):
    """Replace variable i by ``sum_j matrix[i][j] * X_j``; works on forms and polynomials."""
    poly = p.as_polynomial() if isinstance(p, HomogeneousForm) else p
    n = len(poly.variables)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ShapeError(f"need an {n}x{n} matrix")
    images = []
    for row in matrix:
        img = Polynomial(poly.variables)
        for j, m in enumerate(row):
            img = img + Polynomial.var(poly.variables, poly.variables[j]) * as_ratfunc(m)
        images.append(img)
    out = poly.compose(images)
    if isinstance(p, HomogeneousForm):
        return HomogeneousForm(p.variables, p.degree, out.terms)
    return out


def _poly_lcm(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    g = param_gcd(a, b)
    q, r = (a * b).divmod(g)
    assert not r
    return q


def normalize_scale(p: HomogeneousForm) -> HomogeneousForm:
    """Deterministic representative of the line through ``p``.

    Clears denominators, divides out the polynomial content of the
    coefficients, and makes the leading coefficient of the lexicographically
    first monomial positive.
    """
    if not p.coeffs:
        return p
    den = ParamPoly(1)
    for c in p.coeffs.values():
        den = _poly_lcm(den, c.denominator)
    scaled = {e: c * RatFunc.from_params(den) for e, c in p.coeffs.items()}
    content = ParamPoly(0)
    for c in scaled.values():
        content = param_gcd(content, c.numerator)
    scaled = {e: c / RatFunc.from_params(content) for e, c in scaled.items()}
    fracs = [
        x / c.denominator.terms[next(iter(c.denominator.terms))]
        for c in scaled.values()
        for x in c.numerator.terms.values()
    ]
    num_gcd = reduce(gcd, (f.numerator for f in fracs))
    den_lcm = reduce(lcm, (f.denominator for f in fracs))
    lc = _leading_coefficient(scaled[max(scaled)].numerator)
    factor = Fraction(num_gcd, den_lcm) * (1 if lc > 0 else -1)
    return HomogeneousForm(p.variables, p.degree, {e: c / factor for e, c in scaled.items()})


def _leading_coefficient(p: ParamPoly) -> Fraction:
    terms = p.terms
    top = max(terms, key=lambda e: (sum(e), e))
    return terms[top]


def proportional(p: HomogeneousForm, q: HomogeneousForm) -> bool:
    """Equality up to a nonzero rational-function scale factor."""
    if p.shape != q.shape:
        return False
    if not p.coeffs or not q.coeffs:
        return not p.coeffs and not q.coeffs
    a, b = normalize_scale(p), normalize_scale(q)
    return a.coeffs == b.coeffs


def all_monomials(n: int, degree: int):
    """Exponent vectors of the given degree in lexicographically descending order."""
    out = [_exps_of(k, n) for k in combinations_with_replacement(range(n), degree)]
    return sorted(out, reverse=True)
