"""Tensors with upper/lower slots and evaluation of contraction networks.

Indices are 0-based: ``levi_civita(3)[(0, 1, 2)] == 1`` is the classical
``eps^{123} = 1``.  Storage is sparse everywhere (``index tuple -> RatFunc``,
zeros omitted); the networks in scope have n <= 3 and valence <= 6.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, permutations
from fractions import Fraction
from math import lcm, prod

import numpy as np

from .arith import RatFunc, as_ratfunc
from .errors import ShapeError, UnboundNameError, VarianceError
from .parser import parse_contraction_line

__all__ = [
    "Tensor",
    "ContractionSpec",
    "levi_civita",
    "covector",
    "contract",
    "brute_force_contract",
    "dense_contract",
    "parse_spec",
]

UPPER, LOWER = "u", "l"


class Tensor:
    __slots__ = ("n", "slots", "entries")

    def __init__(self, n: int, slots, entries=None):
        self.n = n
        self.slots = tuple(slots)
        if any(s not in (UPPER, LOWER) for s in self.slots):
            raise ValueError("slot variance must be 'u' or 'l'")
        self.entries = {}
        for idx, v in (entries or {}).items():
            idx = tuple(idx)
            if len(idx) != len(self.slots) or any(not 0 <= i < n for i in idx):
                raise ShapeError(f"index {idx} out of range for n={n}, valence={len(self.slots)}")
            v = as_ratfunc(v)
            if v:
                self.entries[idx] = v

    @classmethod
    def _from_clean(cls, n, slots, entries):
        obj = object.__new__(cls)
        obj.n, obj.slots, obj.entries = n, tuple(slots), entries
        return obj

    @classmethod
    def scalar(cls, value) -> "Tensor":
        return cls(1, (), {(): value})

    @property
    def valence(self) -> int:
        return len(self.slots)

    def __getitem__(self, idx) -> RatFunc:
        return self.entries.get(tuple(idx), RatFunc(0))

    def value(self) -> RatFunc:
        """The scalar held by a valence-0 tensor."""
        if self.slots:
            raise ShapeError("not a scalar")
        return self.entries.get((), RatFunc(0))

    def map(self, fn) -> "Tensor":
        return Tensor(self.n, self.slots, {k: fn(v) for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.n, self.slots, self.entries) == (other.n, other.slots, other.entries)

    __hash__ = None

    def __repr__(self):
        return f"Tensor(n={self.n}, slots={''.join(self.slots)!r}, nnz={len(self.entries)})"


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def levi_civita(n: int) -> Tensor:
    """Totally antisymmetric all-upper tensor with ``eps[0, 1, ..., n-1] = 1``."""
    if n < 2:
        raise ShapeError("Levi-Civita symbol needs n >= 2")
    one, minus = RatFunc(1), RatFunc(-1)
    return Tensor._from_clean(
        n, (UPPER,) * n, {p: one if _perm_sign(p) > 0 else minus for p in permutations(range(n))}
    )


def covector(n: int, index: int = 0) -> Tensor:
    """The distinguished upper vector ``e`` with a single 1 at ``index``."""
    return Tensor(n, (UPPER,), {(index,): 1})


@dataclass(frozen=True)
class ContractionSpec:
    """A network of named factors; repeated labels are summed over.

    ``factors`` holds ``(tensor name, labels, variances-or-None)``.  Variance
    ``None`` means "whatever the bound tensor declares".
    """

    factors: tuple
    free: tuple = ()
    free_variance: tuple = ()
    name: str = ""
    text: str = field(default="", compare=False)

    def __post_init__(self):
        counts = {}
        for _, labels, _ in self.factors:
            for lab in labels:
                counts[lab] = counts.get(lab, 0) + 1
        for lab, c in counts.items():
            if c > 2:
                raise ShapeError(f"label {lab!r} occurs {c} times in {self.text or self.name}")
            if c == 1 and lab not in self.free:
                raise ShapeError(f"label {lab!r} is neither paired nor declared free")
            if c == 2 and lab in self.free:
                raise ShapeError(f"label {lab!r} is both paired and free")
        missing = [lab for lab in self.free if lab not in counts]
        if missing:
            raise ShapeError(f"free labels {missing} do not occur on the right-hand side")
        if len(self.free_variance) != len(self.free):
            raise ShapeError("free labels and variances differ in length")

    @property
    def pairings(self) -> list:
        where = {}
        for fi, (_, labels, _) in enumerate(self.factors):
            for si, lab in enumerate(labels):
                where.setdefault(lab, []).append((fi, si))
        return [tuple(v) for lab, v in where.items() if len(v) == 2]

    @property
    def names(self) -> tuple:
        return tuple(dict.fromkeys(f[0] for f in self.factors))

    def slot_variances(self, variances: dict) -> list:
        """Resolve each factor's slot variances against ``variances[name]``."""
        out = []
        for fname, labels, declared in self.factors:
            if fname not in variances:
                raise UnboundNameError(f"unbound tensor {fname!r}")
            actual = tuple(variances[fname])
            if len(actual) != len(labels):
                raise ShapeError(
                    f"{fname} has valence {len(actual)} but is used with {len(labels)} labels"
                )
            if declared is not None and tuple(declared) != actual:
                raise VarianceError(f"{fname}[{''.join(labels)}] disagrees with its declared variance")
            out.append(actual)
        return out

    def validate(self, variances: dict) -> None:
        """Check the strict discipline: every pairing joins one upper and one lower slot."""
        slot_var = self.slot_variances(variances)
        for (f1, s1), (f2, s2) in self.pairings:
            if slot_var[f1][s1] == slot_var[f2][s2]:
                lab = self.factors[f1][1][s1]
                kind = "upper" if slot_var[f1][s1] == UPPER else "lower"
                raise VarianceError(f"label {lab!r} pairs two {kind} slots in {self.text or self.name}")
        for fi, (_, labels, _) in enumerate(self.factors):
            for si, lab in enumerate(labels):
                if lab in self.free:
                    want = self.free_variance[self.free.index(lab)]
                    if slot_var[fi][si] != want:
                        raise VarianceError(f"free label {lab!r} has the wrong variance")

    def __str__(self):
        def group(labels, var):
            if var is None:
                return "".join(labels)
            low = "".join(l for l, v in zip(labels, var) if v == LOWER)
            up = "".join(l for l, v in zip(labels, var) if v == UPPER)
            return f"{low}^{up}" if up else low

        lhs = self.name + (f"[{group(self.free, self.free_variance)}]" if self.free else "")
        rhs = " ".join(f"{n}[{group(l, v)}]" for n, l, v in self.factors)
        return f"{lhs} = {rhs}"


def parse_spec(text: str) -> ContractionSpec:
    """Parse e.g. ``b[ij^kl] = a[pqi] a[rsj] eps[prk] eps[qsl]``."""
    name, free, free_var, factors = parse_contraction_line(text)
    return ContractionSpec(tuple(factors), tuple(free), tuple(free_var), name, text)


# -- staged evaluation -----------------------------------------------------

def _plain(v: RatFunc):
    f = v.to_fraction()
    return f.numerator if f.denominator == 1 else f


def _entry_tables(spec: ContractionSpec, bindings: dict) -> tuple:
    """Entry dicts per factor name, as ints/Fractions when no parameter occurs.

    Numbers are far cheaper to multiply than rational functions, and random
    integer forms are the common case in the property checks.
    """
    names = spec.names
    if all(v.is_constant() for name in names for v in bindings[name].entries.values()):
        return {name: {k: _plain(v) for k, v in bindings[name].entries.items()} for name in names}, True
    return {name: bindings[name].entries for name in names}, False


def _wrap(entries: dict, plain: bool) -> dict:
    return {k: as_ratfunc(v) for k, v in entries.items()} if plain else entries


def _trace_factor(entries: dict, labels: tuple):
    """Apply repeated labels inside one factor (e.g. ``c[ij^ij]``)."""
    if len(set(labels)) == len(labels):
        return entries, labels
    keep = [i for i, lab in enumerate(labels) if labels.index(lab) == i and labels.count(lab) == 1]
    twins = [(labels.index(lab), i) for i, lab in enumerate(labels) if labels.index(lab) != i]
    out = {}
    for idx, v in entries.items():
        if all(idx[a] == idx[b] for a, b in twins):
            key = tuple(idx[i] for i in keep)
            out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}, tuple(labels[i] for i in keep)


def _pair(a_entries, a_labels, b_entries, b_labels):
    shared = [lab for lab in a_labels if lab in b_labels]
    ia = [a_labels.index(lab) for lab in shared]
    ib = [b_labels.index(lab) for lab in shared]
    rest_a = [i for i, lab in enumerate(a_labels) if lab not in shared]
    rest_b = [i for i, lab in enumerate(b_labels) if lab not in shared]
    groups = {}
    for idx, v in b_entries.items():
        groups.setdefault(tuple(idx[i] for i in ib), []).append((tuple(idx[i] for i in rest_b), v))
    acc = {}
    for idx, va in a_entries.items():
        matches = groups.get(tuple(idx[i] for i in ia))
        if not matches:
            continue
        head = tuple(idx[i] for i in rest_a)
        for tail, vb in matches:
            key = head + tail
            term = va * vb
            prev = acc.get(key)
            acc[key] = term if prev is None else prev + term
    labels = tuple(a_labels[i] for i in rest_a) + tuple(b_labels[i] for i in rest_b)
    return {k: v for k, v in acc.items() if v}, labels


def _bind(spec: ContractionSpec, bindings: dict):
    missing = [n for n in spec.names if n not in bindings]
    if missing:
        raise UnboundNameError(f"unbound tensor(s): {', '.join(missing)}")
    dims = {bindings[n].n for n in spec.names if bindings[n].slots}
    if len(dims) > 1:
        raise ShapeError(f"dimension mismatch among bound tensors: {sorted(dims)}")
    spec.validate({n: bindings[n].slots for n in spec.names})
    return dims.pop() if dims else 1


def contract(spec: ContractionSpec, bindings: dict) -> Tensor:
    """Evaluate ``spec`` by pairwise contraction.

    Factors are folded left to right, except that the leftmost factor sharing
    a label with the running result is preferred over a disconnected one, so
    intermediates stay small.
    """
    n = _bind(spec, bindings)
    tables, plain = _entry_tables(spec, bindings)
    pending = []
    for fname, labels, _ in spec.factors:
        entries, labels = _trace_factor(tables[fname], tuple(labels))
        pending.append((entries, labels))
    acc_entries, acc_labels = pending.pop(0)
    while pending:
        pick = next((i for i, (_, labs) in enumerate(pending) if set(labs) & set(acc_labels)), 0)
        entries, labels = pending.pop(pick)
        acc_entries, acc_labels = _pair(acc_entries, acc_labels, entries, labels)
        if not acc_entries:
            break
    return _finish(n, spec, _wrap(acc_entries, plain), acc_labels)


def _finish(n, spec, entries, labels) -> Tensor:
    if not entries:
        return Tensor._from_clean(n, spec.free_variance, {})
    order = [labels.index(lab) for lab in spec.free]
    out = {tuple(idx[i] for i in order): v for idx, v in entries.items()}
    return Tensor._from_clean(n, spec.free_variance, out)


# -- oracles ---------------------------------------------------------------

def enumeration_size(spec: ContractionSpec, bindings: dict) -> float:
    """Rough count of nonzero terms a full-index enumeration would visit."""
    labels = {lab for _, labels, _ in spec.factors for lab in labels}
    n = max((bindings[f[0]].n for f in spec.factors), default=1)
    density = prod(
        len(bindings[f[0]].entries) / n ** len(f[1]) for f in spec.factors if f[1]
    )
    return n ** len(labels) * density


def brute_force_contract(spec: ContractionSpec, bindings: dict) -> Tensor:
    """Full-index summation: enumerate every label assignment with all factors nonzero.

    Independent of :func:`contract`; factors are visited in an order that
    binds as many labels as possible early, purely to prune the search.
    """
    n = _bind(spec, bindings)
    tables, plain = _entry_tables(spec, bindings)
    scale = 1
    if plain:
        # integer entries make the inner loop cheap; undo the scaling at the end
        for f, _, _ in spec.factors:
            d = lcm(*(getattr(v, "denominator", 1) for v in tables[f].values()))
            scale *= d
        tables = {
            f: {k: int(v * d) for k, v in ents.items()}
            for f, ents in tables.items()
            for d in [lcm(*(getattr(v, "denominator", 1) for v in ents.values()))]
        }
    factors = [(tables[f], tuple(labels)) for f, labels, _ in spec.factors]
    order, bound = [], set()
    remaining = list(range(len(factors)))
    while remaining:
        best = max(remaining, key=lambda i: (len(set(factors[i][1]) & bound), -len(factors[i][0]), -i))
        remaining.remove(best)
        order.append(factors[best])
        bound |= set(factors[best][1])
    # each factor's entries grouped by the labels already fixed by earlier factors
    slot = {}
    plan = []
    for entries, labels in order:
        fixed = [(i, slot[lab]) for i, lab in enumerate(labels) if lab in slot]
        fresh = []
        for i, lab in enumerate(labels):
            if lab not in slot:
                slot[lab] = len(slot)
                fresh.append((i, slot[lab]))
        groups = {}
        for idx, v in entries.items():
            if all(idx[i] == idx[j] for i, j in _repeats(labels)):
                groups.setdefault(tuple(idx[i] for i, _ in fixed), []).append((idx, v))
        plan.append(([j for _, j in fixed], fresh, groups))
    free_slots = [slot[lab] for lab in spec.free]
    assign = [0] * len(slot)
    result = {}
    # the last factor only needs its group sums unless it fixes a free label
    last_fixed, last_fresh, last_groups = plan[-1]
    collapse = not any(j in free_slots for _, j in last_fresh)
    if collapse:
        sums = {}
        for key, items in last_groups.items():
            total = 0
            for _, v in items:
                total = total + v
            sums[key] = total
        plan = plan[:-1]

    def visit(k, value):
        if k == len(plan):
            if collapse:
                total = sums.get(tuple(assign[j] for j in last_fixed))
                if total is None:
                    return
                value = total if value is None else value * total
            key = tuple(assign[j] for j in free_slots)
            prev = result.get(key)
            result[key] = value if prev is None else prev + value
            return
        fixed, fresh, groups = plan[k]
        for idx, v in groups.get(tuple(assign[j] for j in fixed), ()):
            for i, j in fresh:
                assign[j] = idx[i]
            visit(k + 1, v if value is None else value * v)

    visit(0, None)
    if scale != 1:
        result = {k: Fraction(v, scale) for k, v in result.items()}
    return Tensor(n, spec.free_variance, result)


def _repeats(labels) -> list:
    return [(labels.index(lab), i) for i, lab in enumerate(labels) if labels.index(lab) != i]


def dense_contract(spec: ContractionSpec, bindings: dict) -> Tensor:
    """Full-index summation by eliminating labels on dense numpy object arrays.

    Used as the oracle where term enumeration is infeasible: repeatedly
    ``tensordot`` the pair of factors whose result is smallest.  Shares no
    code with :func:`contract`.
    """
    n = _bind(spec, bindings)
    tables, plain = _entry_tables(spec, bindings)
    zero = 0 if plain else RatFunc(0)
    arrays = []
    for fname, labels, _ in spec.factors:
        arr = np.full((n,) * len(labels), zero, dtype=object)
        for idx, v in tables[fname].items():
            arr[idx] = v
        labels = list(labels)
        while len(set(labels)) < len(labels):
            lab = next(l for l in labels if labels.count(l) == 2)
            a = labels.index(lab)
            b = labels.index(lab, a + 1)
            arr = np.diagonal(arr, axis1=a, axis2=b).sum(axis=-1) if arr.ndim > 2 else np.trace(arr)
            labels = [l for i, l in enumerate(labels) if i not in (a, b)]
            if not isinstance(arr, np.ndarray):
                arr = np.array(arr, dtype=object)
        arrays.append((arr, labels))
    while len(arrays) > 1:
        best = None
        for i in range(len(arrays)):
            for j in range(i + 1, len(arrays)):
                li, lj = arrays[i][1], arrays[j][1]
                shared = set(li) & set(lj)
                size = len(li) + len(lj) - 2 * len(shared)
                key = (not shared, size)
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, i, j = best
        (ai, li), (aj, lj) = arrays[i], arrays[j]
        shared = [lab for lab in li if lab in lj]
        res = np.tensordot(ai, aj, axes=([li.index(s) for s in shared], [lj.index(s) for s in shared]))
        labels = [lab for lab in li if lab not in shared] + [lab for lab in lj if lab not in shared]
        if not isinstance(res, np.ndarray):
            res = np.array(res, dtype=object)
        arrays = [arrays[k] for k in range(len(arrays)) if k not in (i, j)] + [(res, labels)]
    arr, labels = arrays[0]
    order = [labels.index(lab) for lab in spec.free]
    arr = np.transpose(arr, order) if order else arr
    entries = {}
    for idx in np.ndindex(arr.shape):
        entries[idx] = as_ratfunc(arr[idx])
    return Tensor(n, spec.free_variance, entries)


def inline(spec: ContractionSpec, definitions: dict, _fresh=None) -> ContractionSpec:
    """Flatten ``spec`` by substituting the networks of intermediate covariants.

    ``definitions`` maps covariant names to their ContractionSpecs; summed
    labels inside each substituted network are renamed apart.
    """
    _fresh = count() if _fresh is None else _fresh
    factors = []
    for fname, labels, var in spec.factors:
        if fname not in definitions:
            factors.append((fname, tuple(labels), var))
            continue
        sub = inline(definitions[fname], definitions, _fresh)
        rename = dict(zip(sub.free, labels))
        for sname, slabels, svar in sub.factors:
            for lab in slabels:
                if lab not in rename:
                    rename[lab] = f"_{next(_fresh)}"
            factors.append((sname, tuple(rename[lab] for lab in slabels), svar))
    return ContractionSpec(tuple(factors), spec.free, spec.free_variance, spec.name, spec.text)


def factor_counts(spec: ContractionSpec) -> dict:
    out = {}
    for fname, _, _ in spec.factors:
        out[fname] = out.get(fname, 0) + 1
    return out
