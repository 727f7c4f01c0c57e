"""Exact scalars: polynomials and rational functions in named parameters.

Both types are thin immutable wrappers around sympy's sparse ``PolyElement``
with the ring variables sorted by name under graded-lex order.  Values built
over different parameter sets are lifted to the union ring on demand, so
``RatFunc.param("t") + RatFunc.param("s")`` just works.

A ``RatFunc`` is always stored in canonical form: numerator and denominator
are coprime integer polynomials with joint content 1 and the denominator's
leading coefficient is positive.  Equality is therefore structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from sympy.polys.domains import QQ, ZZ
from sympy.polys.euclidtools import dmp_inner_gcd
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import PoleError

__all__ = [
    "ParamPoly",
    "RatFunc",
    "param_gcd",
    "param_factors",
    "format_ratfunc",
    "format_poly",
    "ratfunc_arith",
    "ratfunc_eval",
    "cross_equal",
    "as_ratfunc",
]


@lru_cache(maxsize=None)
def _ring(names: tuple, domain=ZZ) -> PolyRing:
    return PolyRing(names, domain, grlex)


def _names(ring: PolyRing) -> tuple:
    return tuple(str(s) for s in ring.symbols)


def _lift(*polys: PolyElement) -> list[PolyElement]:
    rings = {p.ring for p in polys}
    if len(rings) == 1:
        return list(polys)
    names = tuple(sorted(set().union(*(_names(r) for r in rings))))
    out = []
    for p in polys:
        target = _ring(names, p.ring.domain)
        out.append(p if p.ring == target else p.set_ring(target))
    return out


def _to_zz(p: PolyElement) -> tuple[Fraction, PolyElement]:
    """Write a QQ polynomial as ``scale * q`` with ``q`` primitive over ZZ."""
    if p.ring.domain == ZZ:
        return Fraction(1), p
    den, q = p.clear_denoms()
    q = q.set_ring(_ring(_names(p.ring), ZZ))
    return Fraction(1, int(den)), q


def _to_qq(p: PolyElement) -> PolyElement:
    if p.ring.domain == QQ:
        return p
    return p.set_ring(_ring(_names(p.ring), QQ))


def _monomial_str(names, exps) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _coeff_str(c) -> str:
    c = Fraction(int(c.numerator), int(c.denominator)) if not isinstance(c, int) else c
    return str(c)


def format_poly(p: PolyElement) -> str:
    """Expanded form, terms in descending graded-lex order."""
    if not p:
        return "0"
    names = _names(p.ring)
    out = []
    for exps, c in p.terms():
        c = Fraction(int(c.numerator), int(c.denominator)) if p.ring.domain == QQ else Fraction(int(c))
        mono = _monomial_str(names, exps)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        out.append((sign, body))
    text = "".join(f"{s}{b}" for s, b in out)
    return text[1:] if text.startswith("+") else text


class ParamPoly:
    """Polynomial in named parameters with rational coefficients."""

    __slots__ = ("_p",)

    def __init__(self, value=0, variables=()):
        if isinstance(value, PolyElement):
            self._p = _to_qq(value)
        elif isinstance(value, ParamPoly):
            self._p = value._p
        else:
            ring = _ring(tuple(sorted(variables)), QQ)
            self._p = ring(QQ.convert(Fraction(value)) if isinstance(value, Rational) else value)

    @classmethod
    def from_terms(cls, terms: dict, variables) -> "ParamPoly":
        variables = tuple(variables)
        order = sorted(range(len(variables)), key=lambda i: variables[i])
        ring = _ring(tuple(variables[i] for i in order), QQ)
        p = ring.from_dict(
            {tuple(e[i] for i in order): QQ.convert(Fraction(c)) for e, c in terms.items() if c}
        )
        return cls(p)

    @classmethod
    def var(cls, name: str) -> "ParamPoly":
        ring = _ring((name,), QQ)
        return cls(ring.gens[0])

    @property
    def variables(self) -> tuple:
        return _names(self._p.ring)

    @property
    def terms(self) -> dict:
        return {e: Fraction(int(c.numerator), int(c.denominator)) for e, c in self._p.items()}

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            return _lift(self._p, other._p)
        if isinstance(other, Rational):
            return self._p, self._p.ring(QQ.convert(Fraction(other)))
        return NotImplemented

    def __add__(self, other):
        ab = self._coerce(other)
        return NotImplemented if ab is NotImplemented else ParamPoly(ab[0] + ab[1])

    __radd__ = __add__

    def __sub__(self, other):
        ab = self._coerce(other)
        return NotImplemented if ab is NotImplemented else ParamPoly(ab[0] - ab[1])

    def __rsub__(self, other):
        ab = self._coerce(other)
        return NotImplemented if ab is NotImplemented else ParamPoly(ab[1] - ab[0])

    def __mul__(self, other):
        ab = self._coerce(other)
        return NotImplemented if ab is NotImplemented else ParamPoly(ab[0] * ab[1])

    __rmul__ = __mul__

    def __neg__(self):
        return ParamPoly(-self._p)

    def __pow__(self, k: int):
        return ParamPoly(self._p**k)

    def __eq__(self, other):
        ab = self._coerce(other)
        if ab is NotImplemented:
            return NotImplemented
        return ab[0] == ab[1]

    def __hash__(self):
        return hash(frozenset(_named_terms(self._p)))

    def __bool__(self):
        return bool(self._p)

    def divmod(self, other: "ParamPoly"):
        """Multivariate division (graded-lex) returning ``(quotient, remainder)``."""
        a, b = _lift(self._p, other._p)
        q, r = a.div(b)
        return ParamPoly(q), ParamPoly(r)

    def degree(self) -> int:
        return max((sum(e) for e in self._p.keys()), default=-1)

    def __repr__(self):
        return f"ParamPoly({format_poly(self._p)!r})"

    def __str__(self):
        return format_poly(self._p)


def _named_terms(p: PolyElement):
    names = _names(p.ring)
    for exps, c in p.items():
        yield tuple((n, e) for n, e in zip(names, exps) if e), c


def _normalize_gcd(g: PolyElement) -> PolyElement:
    if not g:
        return g
    g = g.primitive()[1]
    return -g if g.LC < 0 else g


def param_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """GCD normalised to integer coefficients, content 1, positive leading coefficient."""
    pa, pb = _lift(a._p, b._p)
    _, za = _to_zz(pa)
    _, zb = _to_zz(pb)
    if not za:
        return ParamPoly(_normalize_gcd(zb))
    if not zb:
        return ParamPoly(_normalize_gcd(za))
    return ParamPoly(_normalize_gcd(za.gcd(zb)))


def param_factors(p: ParamPoly) -> list:
    """Distinct nonconstant irreducible factors over Z, each normalised as in ``param_gcd``."""
    _, z = _to_zz(p._p)
    if not z or z.is_ground:
        return []
    _, factors = z.factor_list()
    return [ParamPoly(_normalize_gcd(f)) for f, _ in factors if not f.is_ground]


def _canon(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    if not den:
        raise ZeroDivisionError("division by the zero rational function")
    if not num:
        return num.ring.zero, num.ring.one
    if den.is_one:
        return num, den
    if den.is_ground:
        d = int(den.LC)
        g = gcd(int(num.content()), d)
        if d < 0:
            g = -g
        if g != 1:
            num = num.quo_ground(g)
            den = den.quo_ground(g)
        return num, den
    return _cancel_dense(num, den)


def _cancel_dense(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    # dense gcd avoids the sparse ring's repeated leading-term searches
    ring = num.ring
    u = ring.ngens - 1
    _, p, q = dmp_inner_gcd(num.to_dense(), den.to_dense(), u, ZZ)
    num, den = ring.from_dense(p), ring.from_dense(q)
    if den.LC < 0:
        num, den = -num, -den
    return num, den


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class RatFunc:
    """Exact rational function in named parameters over the rationals."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if isinstance(num, RatFunc) and den == 1:
            self.num, self.den = num.num, num.den
            return
        n = _scalar_ratfunc(num)
        d = _scalar_ratfunc(den)
        if d.den.is_one and n.den.is_one and d.num.is_one:
            self.num, self.den = n.num, n.den
            return
        a, b, c, e = _lift(n.num, n.den, d.num, d.den)
        self.num, self.den = _canon(a * e, b * c)

    @classmethod
    def _raw(cls, num: PolyElement, den: PolyElement) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def _make(cls, num: PolyElement, den: PolyElement) -> "RatFunc":
        return cls._raw(*_canon(num, den))

    @classmethod
    def param(cls, name: str) -> "RatFunc":
        ring = _ring((name,))
        return cls._raw(ring.gens[0], ring.one)

    @classmethod
    def from_params(cls, num: ParamPoly, den: ParamPoly | None = None) -> "RatFunc":
        sn, zn = _to_zz(num._p)
        if den is None:
            return _from_fraction(sn) * cls._raw(zn, zn.ring.one)
        sd, zd = _to_zz(den._p)
        zn, zd = _lift(zn, zd)
        return _from_fraction(sn / sd) * cls._make(zn, zd)

    @property
    def params(self) -> tuple:
        """Parameters that actually occur, sorted."""
        used = set()
        for p in (self.num, self.den):
            for exps in p.keys():
                used.update(n for n, e in zip(_names(p.ring), exps) if e)
        return tuple(sorted(used))

    @property
    def numerator(self) -> ParamPoly:
        return ParamPoly(self.num)

    @property
    def denominator(self) -> ParamPoly:
        return ParamPoly(self.den)

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return Fraction(int(self.num.LC) if self.num else 0, int(self.den.LC))

    def __bool__(self):
        return bool(self.num)

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            if not isinstance(other, Rational):
                return NotImplemented
            other = _from_fraction(Fraction(other))
        if not other.num:
            return self
        if not self.num:
            return other
        a, b, c, d = _lift(self.num, self.den, other.num, other.den)
        if b.is_one and d.is_one:
            return RatFunc._raw(a + c, b)
        if b == d:
            return RatFunc._make(a + c, b)
        return RatFunc._make(a * d + c * b, b * d)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (RatFunc, Rational)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            if not isinstance(other, Rational):
                return NotImplemented
            other = _from_fraction(Fraction(other))
        if other.is_one():
            return self
        if self.is_one():
            return other
        if not self.num or not other.num:
            a, _ = _lift(self.num, other.num)
            return RatFunc._raw(a.ring.zero, a.ring.one)
        a, b, c, d = _lift(self.num, self.den, other.num, other.den)
        if b.is_one and d.is_one:
            return RatFunc._raw(a * c, b)
        return RatFunc._make(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            if not isinstance(other, Rational):
                return NotImplemented
            other = _from_fraction(Fraction(other))
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        a, b, c, d = _lift(self.num, self.den, other.num, other.den)
        return RatFunc._make(a * d, b * c)

    def __rtruediv__(self, other):
        if not isinstance(other, Rational):
            return NotImplemented
        return _from_fraction(Fraction(other)) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.num:
                raise ZeroDivisionError("0 raised to a negative power")
            return RatFunc._make(self.den ** (-k), self.num ** (-k))
        return RatFunc._raw(self.num**k, self.den**k)

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = _from_fraction(Fraction(other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        a, b, c, d = _lift(self.num, self.den, other.num, other.den)
        return a == c and b == d

    def __hash__(self):
        if self.is_constant():
            return hash(self.to_fraction())
        return hash((frozenset(_named_terms(self.num)), frozenset(_named_terms(self.den))))

    def subs(self, assignment: dict) -> "RatFunc":
        """Substitute rational values for some (or all) parameters."""
        names = _names(self.num.ring)
        assignment = {k: Fraction(v) for k, v in assignment.items() if k in names}
        if not assignment:
            return self
        keep = tuple(n for n in names if n not in assignment)
        ring = _ring(keep, QQ)

        def sub(p):
            out = ring.zero
            for exps, c in p.items():
                val = Fraction(int(c))
                kept = []
                for n, e in zip(names, exps):
                    if n in assignment:
                        val *= assignment[n] ** e
                    else:
                        kept.append(e)
                out += ring({tuple(kept): QQ.convert(val)}) if val else ring.zero
            return out

        num, den = sub(self.num), sub(self.den)
        if not den:
            raise PoleError(f"{self} has a pole at {assignment}")
        return RatFunc.from_params(ParamPoly(num), ParamPoly(den))

    def compose(self, mapping: dict) -> "RatFunc":
        """Substitute rational functions (or numbers) for parameters."""
        images = {k: as_ratfunc(v) for k, v in mapping.items()}

        def sub(p):
            out = RatFunc(0)
            for exps, c in p.items():
                term = RatFunc(int(c))
                for name, e in zip(_names(p.ring), exps):
                    if e:
                        term = term * images.get(name, RatFunc.param(name)) ** e
                out = out + term
            return out

        den = sub(self.den)
        if not den:
            raise PoleError(f"{self} has a pole under {mapping}")
        return sub(self.num) / den

    def evaluate(self, assignment: dict) -> Fraction:
        return ratfunc_eval(self, assignment)

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r})"

    def __str__(self):
        return format_ratfunc(self)


def _from_fraction(f: Fraction) -> RatFunc:
    ring = _ring(())
    return RatFunc._raw(ring(f.numerator), ring(f.denominator))


def _scalar_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, ParamPoly):
        return RatFunc.from_params(x)
    if isinstance(x, Rational):
        return _from_fraction(Fraction(x))
    if isinstance(x, str):
        return RatFunc.param(x)
    raise TypeError(f"cannot build a RatFunc from {type(x).__name__}")


def as_ratfunc(x) -> RatFunc:
    return _scalar_ratfunc(x)


def cross_equal(a: RatFunc, b: RatFunc) -> bool:
    """Equality by cross-multiplication, without relying on canonical form."""
    p, q, r, s = _lift(a.num, a.den, b.num, b.den)
    return p * s == r * q


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def ratfunc_eval(r: RatFunc, assignment: dict) -> Fraction:
    missing = [p for p in r.params if p not in assignment]
    if missing:
        raise ValueError(f"no value given for parameter(s) {', '.join(missing)}")
    names = _names(r.num.ring)

    def ev(p):
        total = Fraction(0)
        for exps, c in p.items():
            term = Fraction(int(c))
            for n, e in zip(names, exps):
                if e:
                    term *= Fraction(assignment[n]) ** e
            total += term
        return total

    den = ev(r.den)
    if den == 0:
        raise PoleError(f"{r} has a pole at {dict(assignment)}")
    return ev(r.num) / den


# -- display ---------------------------------------------------------------

def _split_factors(p: PolyElement):
    """``p = sign * const * monomial * prod(f**k)`` using only gcd-based splitting."""
    names = _names(p.ring)
    sign = -1 if p.LC < 0 else 1
    if sign < 0:
        p = -p
    mono = [min(e[i] for e in p.keys()) for i in range(len(names))]
    if any(mono):
        p = p.ring.from_dict({tuple(a - b for a, b in zip(e, mono)): c for e, c in p.items()})
    if p.is_ground:
        const, factors = int(p.LC), []
    else:
        const, factors = p.sqf_list()
        const = int(const)
    fixed = []
    for f, k in factors:
        if f.LC < 0:
            f = -f
            if k % 2:
                const = -const
        fixed.append((f, k))
    if const < 0:
        sign, const = -sign, -const
    fixed.sort(key=lambda fk: (fk[0].degree() if fk[0].ring.ngens else 0, fk[1], format_poly(fk[0])))
    return sign, const, _monomial_str(names, mono), fixed


def _product_str(const: int, mono: str, factors) -> tuple[str, int]:
    """Returns the text and the number of multiplicative pieces."""
    pieces = []
    if const != 1 or (not mono and not factors):
        pieces.append(str(const))
    if mono:
        pieces.extend(mono.split("*"))
    bare_sum = None
    for f, k in factors:
        body = format_poly(f)
        if k > 1:
            pieces.append(f"({body})^{k}")
        else:
            pieces.append(f"({body})")
            bare_sum = body
    if len(pieces) == 1 and bare_sum is not None:
        return bare_sum, 0
    return "*".join(pieces), len(pieces)


def format_ratfunc(r: RatFunc, factored: bool = True) -> str:
    """Textual form: ``^`` for powers, explicit ``*``, parenthesised denominators."""
    if not factored:
        num = format_poly(r.num)
        if r.den.is_one:
            return num
        return f"({num})/({format_poly(r.den)})"
    if not r.num:
        return "0"
    sign, c, mono, factors = _split_factors(r.num)
    num, npieces = _product_str(c, mono, factors)
    if r.den.is_one:
        if npieces == 0:
            return num if sign > 0 else f"-({num})"
        return num if sign > 0 else f"-{num}" if npieces == 1 else f"-({num})"
    _, dc, dmono, dfactors = _split_factors(r.den)
    den, dpieces = _product_str(dc, dmono, dfactors)
    if dpieces != 1:
        den = f"({den})"
    if npieces == 0:
        num = f"({num})"
    if sign < 0:
        num = f"-{num}" if npieces in (0, 1) else f"-({num})"
    return f"{num}/{den}"
