"""Named classical invariants and absolute-invariant ratios.

The catalog is read from a plain-text file (``data/catalog.txt`` by default)
so that new entries need no code change.  Each invariant is a contraction
program: a chain of covariant definitions ending in a complete contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .arith import ParamPoly, RatFunc, param_gcd
from .errors import CatalogError, ParseError, ShapeError, UndefinedInvariant, VarianceError
from .forms import HomogeneousForm, Polynomial, SymmetricTensor, form_to_tensor
from .parser import BinOp, parse_expression
from .tensor import ContractionSpec, LOWER, UPPER, contract, covector, factor_counts, inline, levi_civita, parse_spec

__all__ = [
    "Catalog",
    "CatalogEntry",
    "AbsoluteInvariant",
    "default_catalog",
    "evaluate_invariant",
    "evaluate_absolute",
    "weight_of",
    "check_syzygy",
]

FORM, EPS, VEC = "a", "eps", "e"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    shape: tuple
    a_degree: int
    eps_degree: int
    e_degree: int
    program: tuple  # ((covariant name, spec), ...) then ("", invariant spec)

    @property
    def parabolic(self) -> bool:
        return self.e_degree > 0

    @property
    def weight(self) -> int:
        """Power of det(M) picked up under ``X -> M X``: dN/n for SL entries."""
        n, N = self.shape
        if not self.parabolic:
            return self.a_degree * N // n
        return self.eps_degree

    @property
    def degrees(self) -> tuple:
        return (self.a_degree, self.eps_degree, self.e_degree)

    @property
    def spec(self) -> ContractionSpec:
        return self.program[-1][1]

    def flattened(self) -> ContractionSpec:
        """The whole program as one network in ``a``, ``eps`` and ``e`` only."""
        return inline(self.spec, dict(self.program[:-1]))


@dataclass(frozen=True)
class AbsoluteInvariant:
    name: str
    shape: tuple
    numerator: Polynomial  # in qualified entry names
    denominator: Polynomial
    text: str

    @property
    def entries(self) -> tuple:
        return self.numerator.variables


def _monomial_degrees(poly: Polynomial, entries: dict) -> set:
    out = set()
    for exps in poly.terms:
        tot = [0, 0, 0]
        for name, k in zip(poly.variables, exps):
            for i, d in enumerate(entries[name].degrees):
                tot[i] += k * d
        out.add(tuple(tot))
    return out


class Catalog:
    def __init__(self, entries: dict, absolutes: dict):
        self.entries = dict(entries)
        self.absolutes = dict(absolutes)

    @classmethod
    def parse(cls, text: str, base: "Catalog | None" = None) -> "Catalog":
        entries = dict(base.entries) if base else {}
        absolutes = dict(base.absolutes) if base else {}
        group, shape, covariants = None, None, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                if line.startswith("[") and line.endswith("]"):
                    group, shape, covariants = line[1:-1].strip(), None, {}
                    continue
                keyword, _, rest = line.partition(" ")
                rest = rest.strip()
                if keyword == "shape":
                    n, N = (int(x) for x in rest.split())
                    shape = (n, N)
                elif keyword in ("covariant", "invariant"):
                    if group is None or shape is None:
                        raise CatalogError("entry outside a section with a shape")
                    spec = parse_spec(rest)
                    _check_variance(spec, shape, covariants)
                    if keyword == "covariant":
                        if not spec.free:
                            raise CatalogError(f"covariant {spec.name} has no free labels")
                        covariants[spec.name] = spec
                    else:
                        if spec.free:
                            raise CatalogError(f"invariant {spec.name} is not a complete contraction")
                        name = f"{group}.{spec.name}"
                        if name in entries:
                            raise CatalogError(f"duplicate entry {name}")
                        entries[name] = _make_entry(name, shape, spec, covariants)
                elif keyword == "absolute":
                    name, _, expr = rest.partition("=")
                    name = name.strip()
                    if name in absolutes:
                        raise CatalogError(f"duplicate absolute invariant {name}")
                    absolutes[name] = _make_absolute(name, expr.strip(), group, entries)
                else:
                    raise CatalogError(f"unknown keyword {keyword!r}")
            except (CatalogError, ParseError, ShapeError, VarianceError, KeyError) as exc:
                raise CatalogError(f"catalog line {lineno}: {exc}") from None
        return cls(entries, absolutes)

    def entry(self, name: str) -> CatalogEntry:
        try:
            return self.entries[name]
        except KeyError:
            raise CatalogError(f"no catalog entry {name!r}") from None

    def absolute(self, name: str) -> AbsoluteInvariant:
        try:
            return self.absolutes[name]
        except KeyError:
            raise CatalogError(f"no absolute invariant {name!r}") from None

    def weight_of(self, name: str) -> int:
        return self.entry(name).weight

    def evaluate_many(self, names, p: HomogeneousForm, e_index: int = 0) -> dict:
        """Evaluate several entries on ``p`` sharing intermediate covariants."""
        entries = [self.entry(n) for n in names]
        for ent in entries:
            if ent.shape != p.shape:
                raise ShapeError(f"{ent.name} expects (n, N) = {ent.shape}, got {p.shape}")
        a = form_to_tensor(p)
        scale = _common_denominator(a)
        if scale != 1:
            a = SymmetricTensor(a.n, a.valence, {k: v * scale for k, v in a.entries.items()})
        n = p.n
        bindings = {FORM: a.to_tensor(), EPS: levi_civita(n), VEC: covector(n, e_index)}
        memo = {}
        out = {}
        for ent in entries:
            defs = dict(ent.program[:-1])

            def materialize(spec):
                for fname, _, _ in spec.factors:
                    if fname in defs and fname not in memo_local:
                        memo_local[fname] = materialize(defs[fname])
                        bindings_local[fname] = memo_local[fname]
                return contract(spec, bindings_local)

            key = ent.name.rsplit(".", 1)[0]
            memo_local = memo.setdefault(key, {})
            bindings_local = dict(bindings, **memo_local)
            value = materialize(ent.spec).value()
            out[ent.name] = value / scale**ent.a_degree if scale != 1 else value
        return out

    def evaluate_invariant(self, name: str, p: HomogeneousForm, e_index: int = 0) -> RatFunc:
        return self.evaluate_many([name], p, e_index)[name]

    def evaluate_absolute(self, name: str, p: HomogeneousForm, e_index: int = 0) -> RatFunc:
        ab = self.absolute(name)
        if p.shape != ab.shape:
            raise ShapeError(f"{name} expects (n, N) = {ab.shape}, got {p.shape}")
        values = self.evaluate_many(ab.entries, p, e_index)
        num = _eval_formal(ab.numerator, values)
        den = _eval_formal(ab.denominator, values)
        if not den:
            raise UndefinedInvariant(f"{name} is undefined: its denominator vanishes (degenerate form)")
        return num / den


def _common_denominator(a: SymmetricTensor) -> RatFunc:
    den = ParamPoly(1)
    for v in a.entries.values():
        d = v.denominator
        g = param_gcd(den, d)
        den = (den * d).divmod(g)[0]
    return RatFunc.from_params(den)


def _eval_formal(poly: Polynomial, values: dict) -> RatFunc:
    total = RatFunc(0)
    for exps, c in poly.terms.items():
        term = c
        for name, k in zip(poly.variables, exps):
            if k:
                term = term * values[name] ** k
        total = total + term
    return total


def _check_variance(spec: ContractionSpec, shape, covariants: dict) -> None:
    n, N = shape
    variances = {FORM: (LOWER,) * N, EPS: (UPPER,) * n, VEC: (UPPER,)}
    variances.update({k: v.free_variance for k, v in covariants.items()})
    spec.validate(variances)


def _make_entry(name, shape, spec, covariants) -> CatalogEntry:
    needed, stack = [], [spec]
    while stack:
        for fname, _, _ in stack.pop().factors:
            if fname in covariants and fname not in needed:
                needed.append(fname)
                stack.append(covariants[fname])
    program = tuple((k, covariants[k]) for k in covariants if k in needed) + (("", spec),)
    flat = inline(spec, dict(program[:-1]))
    counts = factor_counts(flat)
    unknown = set(counts) - {FORM, EPS, VEC}
    if unknown:
        raise CatalogError(f"{name} uses undefined tensors {sorted(unknown)}")
    d, eps, e = counts.get(FORM, 0), counts.get(EPS, 0), counts.get(VEC, 0)
    n, N = shape
    if d * N != eps * n + e:
        raise CatalogError(f"{name}: slot count mismatch ({d}*{N} lower vs {eps}*{n}+{e} upper)")
    if e == 0 and (d * N) % n:
        raise CatalogError(f"{name}: n={n} does not divide dN={d * N}")
    return CatalogEntry(name, shape, d, eps, e, program)


def _make_absolute(name, expr, group, entries) -> AbsoluteInvariant:
    node = parse_expression(expr)
    if not (isinstance(node, BinOp) and node.op == "/"):
        raise CatalogError(f"absolute invariant {name} must have the form numerator/denominator")

    def qualify(ident):
        if ident in entries:
            return ident
        if group and f"{group}.{ident}" in entries:
            return f"{group}.{ident}"
        raise CatalogError(f"{name}: unknown invariant {ident!r}")

    names = []
    for ident in _identifiers(node):
        q = qualify(ident)
        if q not in names:
            names.append(q)
    local = {ident: qualify(ident) for ident in _identifiers(node)}
    shapes = {entries[q].shape for q in names}
    if len(shapes) != 1:
        raise CatalogError(f"{name} mixes invariants of different shapes {sorted(shapes)}")
    text = expr
    num = _formal(node.left, names, local, expr)
    den = _formal(node.right, names, local, expr)
    degs = _monomial_degrees(num, entries) | _monomial_degrees(den, entries)
    if len(degs) != 1:
        raise CatalogError(
            f"{name} is not a ratio of equal (a, eps, e)-degrees: found {sorted(degs)}"
        )
    return AbsoluteInvariant(name, shapes.pop(), num, den, text)


def _identifiers(node):
    from .parser import Name, Neg, Pow

    if isinstance(node, Name):
        yield node.id
    elif isinstance(node, Neg):
        yield from _identifiers(node.arg)
    elif isinstance(node, Pow):
        yield from _identifiers(node.base)
    elif isinstance(node, BinOp):
        yield from _identifiers(node.left)
        yield from _identifiers(node.right)


def _formal(node, names, local, text) -> Polynomial:
    from .parser import evaluate

    lookup = {ident: Polynomial.var(names, q) for ident, q in local.items()}
    value = evaluate(node, lookup.get, text)
    if not isinstance(value, Polynomial):
        value = Polynomial.constant(names, value)
    return value


@lru_cache(maxsize=None)
def default_catalog() -> Catalog:
    text = resources.files("singinv").joinpath("data/catalog.txt").read_text()
    return Catalog.parse(text)


def evaluate_invariant(name: str, p: HomogeneousForm, e_index: int = 0) -> RatFunc:
    return default_catalog().evaluate_invariant(name, p, e_index)


def evaluate_absolute(name: str, p: HomogeneousForm, e_index: int = 0) -> RatFunc:
    return default_catalog().evaluate_absolute(name, p, e_index)


def weight_of(name: str) -> int:
    return default_catalog().weight_of(name)


def check_syzygy(p: HomogeneousForm) -> bool:
    """Whether J^3 + 3JK - 10L vanishes identically on a binary sextic."""
    v = default_catalog().evaluate_many(
        ["binary_sextic.J", "binary_sextic.K", "binary_sextic.L"], p
    )
    J, K, L = v["binary_sextic.J"], v["binary_sextic.K"], v["binary_sextic.L"]
    return not (J**3 + 3 * J * K - 10 * L)


SEXTIC_DEGREES = {"J": 2, "K": 4, "L": 6, "M": 10}


def sextic_relation_monomials(degree: int = 30):
    """Exponent tuples (J, K, L, M) of total a-degree ``degree``."""
    out = []
    for m in range(degree // 10 + 1):
        for l in range((degree - 10 * m) // 6 + 1):
            for k in range((degree - 10 * m - 6 * l) // 4 + 1):
                rest = degree - 10 * m - 6 * l - 4 * k
                if rest % 2 == 0:
                    out.append((rest // 2, k, l, m))
    return out


def sextic_relation_values(p: HomogeneousForm) -> tuple:
    """``(N^2, {(j, k, l, m): J^j K^k L^l M^m})`` on a binary sextic.

    The degree-30 relation between N^2 and the other generators has elided
    middle terms; these values let its coefficients be recovered by linear
    algebra over enough sample forms.
    """
    names = [f"binary_sextic.{x}" for x in "JKLMN"]
    v = default_catalog().evaluate_many(names, p)
    J, K, L, M, N = (v[n] for n in names)
    mons = {}
    for e in sextic_relation_monomials():
        mons[e] = J ** e[0] * K ** e[1] * L ** e[2] * M ** e[3]
    return N**2, mons


def rediscover_sextic_relation(forms) -> dict:
    """Solve for c with ``N^2 + sum c_e J^j K^k L^l M^m = 0`` over sample forms.

    Returns the coefficients keyed by exponent tuple; raises if the samples do
    not pin them down uniquely.
    """
    exps = sextic_relation_monomials()
    rows = []
    for p in forms:
        n2, mons = sextic_relation_values(p)
        rows.append([mons[e].to_fraction() for e in exps] + [-n2.to_fraction()])
    sol = _solve_exact(rows, len(exps))
    return dict(zip(exps, sol))


def _solve_exact(rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / Fraction(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < ncols:
        raise ValueError("samples do not determine the relation uniquely")
    if any(row[-1] for row in rows[r:]):
        raise ValueError("no relation of this form fits the samples")
    return [rows[i][-1] for i in range(ncols)]
