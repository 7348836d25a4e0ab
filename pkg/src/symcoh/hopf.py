"""Hopf-ring structure maps on Fox-Neuwirth cochains, mod 2.

Three structure maps live at the cochain level: the intersection (cup)
product is the entrywise sum of cells on one component; the coproduct
splits a cell at each zero entry (with virtual zeros at both ends); the
transfer product shuffles the zero-block decompositions of two cells,
counted with multiplicity.  Together with the generators built from runs
of ones these generate the whole mod-2 cohomology of the symmetric groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fncomplex import (
    MOD2,
    INFINITE,
    Composition,
    Cochain,
    ComponentMismatchError,
    EMPTY_UNIT,
    delta_cochain,
    symm,
    zero_segments,
)


def unit_cell(n: int) -> Composition:
    """The unit cell of component n: all entries zero (n = 0 allowed)."""
    if n == 0:
        return EMPTY_UNIT
    return Composition((0,) * (n - 1))


# ---------------------------------------------------------------------------
# intersection (cup) product


def cup_cells(a: Composition, b: Composition) -> Composition:
    """Entrywise sum of two cells of one component."""
    if a.n != b.n:
        raise ComponentMismatchError(
            f"cup product needs equal components, got {a.n} and {b.n}")
    return Composition(tuple(x + y for x, y in zip(a.entries, b.entries)), a.n)


def cup(x: Cochain, y: Cochain) -> Cochain:
    """Bilinear extension of the intersection product (mod 2)."""
    if x.n != y.n:
        raise ComponentMismatchError(
            f"cup product needs equal components, got {x.n} and {y.n}")
    acc = {}
    for a, u in x.items():
        for b, v in y.items():
            cell = cup_cells(a, b)
            acc[cell] = acc.get(cell, 0) + u * v
    return Cochain(MOD2, x.n, acc)


# ---------------------------------------------------------------------------
# coproduct


@dataclass
class TensorSum:
    """A formal mod-2 sum of cochain tensor pairs split by components."""

    n: int
    terms: dict[tuple[Composition, Composition], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (l, r), v in self.terms.items():
            if l.n + r.n != self.n:
                raise ComponentMismatchError(
                    f"tensor term components {l.n}+{r.n} != {self.n}")
            v = int(v) % 2
            if v:
                clean[(l, r)] = v
        self.terms = clean

    def items(self):
        return sorted(self.terms.items())

    def component_part(self, i: int, j: int) -> list[tuple[Composition, Composition]]:
        return [(l, r) for (l, r) in sorted(self.terms) if l.n == i and r.n == j]

    def __add__(self, other):
        if other.n != self.n:
            raise ComponentMismatchError("tensor sums on different components")
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return TensorSum(self.n, acc)

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self.n == other.n and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{l} (x) {r}" for (l, r) in sorted(self.terms))


def coproduct_cell(a: Composition) -> list[tuple[Composition, Composition]]:
    """Splittings of a cell at its zero entries, including both unit splits."""
    out = [(EMPTY_UNIT, a), (a, EMPTY_UNIT)]
    for i, e in enumerate(a.entries, start=1):
        if e == 0:
            left = Composition(a.entries[:i - 1])
            right = Composition(a.entries[i:])
            out.append((left, right))
    if a.n == 0:
        return [(EMPTY_UNIT, EMPTY_UNIT)]
    return out


def coproduct(x: Cochain) -> TensorSum:
    acc = {}
    for a, u in x.items():
        for pair in coproduct_cell(a):
            acc[pair] = acc.get(pair, 0) + u
    return TensorSum(x.n, acc)


# ---------------------------------------------------------------------------
# transfer product


def transfer_cells(a: Composition, b: Composition) -> Cochain:
    """Sum over interleavings of the zero-block sequences, with multiplicity.

    Each interleaving rejoins the blocks with single zero separators; equal
    outcomes accumulate, so coefficients are interleaving counts mod 2.
    """
    sa, sb = zero_segments(a), zero_segments(b)
    p, q = len(sa), len(sb)
    acc = {}
    for positions in itertools.combinations(range(p + q), p):
        posset = set(positions)
        ia = iter(sa)
        ib = iter(sb)
        merged = []
        for slot in range(p + q):
            seg = next(ia) if slot in posset else next(ib)
            if slot:
                merged.append(0)
            merged.extend(seg)
        cell = Composition(tuple(merged), a.n + b.n)
        acc[cell] = acc.get(cell, 0) + 1
    if not acc:  # both factors are the empty unit
        acc[EMPTY_UNIT] = 1
    return Cochain(MOD2, a.n + b.n, acc)


def transfer(x: Cochain, y: Cochain) -> Cochain:
    acc = Cochain.zero(MOD2, x.n + y.n)
    for a, u in x.items():
        for b, v in y.items():
            acc = acc + transfer_cells(a, b).scaled(u * v)
    return acc


# ---------------------------------------------------------------------------
# generators


def gamma_cochain(level: int, n: int) -> Composition:
    """The generator cell: n runs of 2^level - 1 ones, joined by single zeros.

    Lives on component n * 2^level in degree n * (2^level - 1); n = 0 gives
    the empty unit.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return EMPTY_UNIT
    run = [1] * ((1 << level) - 1)
    entries = []
    for i in range(n):
        if i:
            entries.append(0)
        entries.extend(run)
    return Composition(tuple(entries))


def gamma_symmetrized(level: int, n: int) -> Cochain:
    """The symmetrized cocycle representative of the generator."""
    cell = gamma_cochain(level, n)
    if cell.n == 0:
        return Cochain.single(cell)
    return symm(cell)


# ---------------------------------------------------------------------------
# graded cochains


class GradedCochain:
    """A finite family of mod-2 cochains indexed by component."""

    def __init__(self, parts=()):
        data = {}
        items = parts.items() if hasattr(parts, "items") else parts
        for n, coch in items:
            if coch.n != n:
                raise ComponentMismatchError(f"component tag {n} != cochain {coch.n}")
            if not coch.is_zero:
                data[n] = coch
        self._parts = data

    @classmethod
    def of(cls, *cochains):
        acc = {}
        for c in cochains:
            acc[c.n] = acc.get(c.n, Cochain.zero(MOD2, c.n)) + c
        return cls(acc)

    def components(self):
        return sorted(self._parts)

    def part(self, n: int) -> Cochain:
        return self._parts.get(n, Cochain.zero(MOD2, n))

    def __add__(self, other):
        acc = dict(self._parts)
        for n, c in other._parts.items():
            acc[n] = acc.get(n, Cochain.zero(MOD2, n)) + c
        return GradedCochain(acc)

    def cup(self, other) -> "GradedCochain":
        """Componentwise cup; cross-component products vanish."""
        acc = {}
        for n in self._parts:
            if n in other._parts:
                acc[n] = cup(self._parts[n], other._parts[n])
        return GradedCochain(acc)

    def transfer(self, other) -> "GradedCochain":
        acc = {}
        for i, ci in self._parts.items():
            for j, cj in other._parts.items():
                t = transfer(ci, cj)
                key = i + j
                acc[key] = acc.get(key, Cochain.zero(MOD2, key)) + t
        return GradedCochain(acc)

    def __eq__(self, other):
        return isinstance(other, GradedCochain) and self._parts == other._parts

    def __str__(self):
        if not self._parts:
            return "0"
        return " ; ".join(f"n={n}: {c}" for n, c in sorted(self._parts.items()))


# ---------------------------------------------------------------------------
# chain-level verification


def _tensor_delta(t: TensorSum, m=INFINITE) -> TensorSum:
    acc = {}
    for (l, r), v in t.terms.items():
        for cell, coef in delta_cochain(Cochain.single(l), m).items():
            key = (cell, r)
            acc[key] = acc.get(key, 0) + v * coef
        for cell, coef in delta_cochain(Cochain.single(r), m).items():
            key = (l, cell)
            acc[key] = acc.get(key, 0) + v * coef
    return TensorSum(t.n, acc)


def _tensor_cup(t1: TensorSum, t2: TensorSum) -> TensorSum:
    acc = {}
    for (l1, r1), v1 in t1.terms.items():
        for (l2, r2), v2 in t2.terms.items():
            if l1.n == l2.n and r1.n == r2.n:
                key = (cup_cells(l1, l2), cup_cells(r1, r2))
                acc[key] = acc.get(key, 0) + v1 * v2
    return TensorSum(t1.n, acc)


def _tensor_transfer(t1: TensorSum, t2: TensorSum) -> TensorSum:
    acc = {}
    for (l1, r1), v1 in t1.terms.items():
        for (l2, r2), v2 in t2.terms.items():
            for cl, ul in transfer_cells(l1, l2).items():
                for cr, ur in transfer_cells(r1, r2).items():
                    key = (cl, cr)
                    acc[key] = acc.get(key, 0) + v1 * v2 * ul * ur
    return TensorSum(t1.n + t2.n, acc)


def verify_chain_level(op: str, inputs, m=INFINITE) -> dict:
    """Check differential and coproduct compatibility of the structure maps.

    op: ``cocycle`` (each input has zero coboundary); ``transfer-leibniz``
    and ``coproduct-leibniz`` (chain-map identities, valid on all
    cochains); ``cup-coproduct`` and ``transfer-coproduct`` (bialgebra
    identities, valid on symmetrized cochains).  The entrywise cup is not
    a chain map on arbitrary cochains, so no cup Leibniz check exists.
    """
    inputs = list(inputs)
    failures = []
    if op == "cocycle":
        for c in inputs:
            d = delta_cochain(c.mod2(), m)
            if not d.is_zero:
                failures.append({"input": str(c), "delta": str(d)})
    elif op == "transfer-leibniz":
        for x, y in inputs:
            lhs = delta_cochain(transfer(x, y), m)
            rhs = transfer(delta_cochain(x, m), y) + transfer(x, delta_cochain(y, m))
            if lhs != rhs:
                failures.append({"input": (str(x), str(y)),
                                 "lhs": str(lhs), "rhs": str(rhs)})
    elif op == "coproduct-leibniz":
        for x in inputs:
            lhs = coproduct(delta_cochain(x, m))
            rhs = _tensor_delta(coproduct(x), m)
            if lhs != rhs:
                failures.append({"input": str(x), "lhs": str(lhs), "rhs": str(rhs)})
    elif op == "cup-coproduct":
        for x, y in inputs:
            lhs = coproduct(cup(x, y))
            rhs = _tensor_cup(coproduct(x), coproduct(y))
            if lhs != rhs:
                failures.append({"input": (str(x), str(y)),
                                 "lhs": str(lhs), "rhs": str(rhs)})
    elif op == "transfer-coproduct":
        for x, y in inputs:
            lhs = coproduct(transfer(x, y))
            rhs = _tensor_transfer(coproduct(x), coproduct(y))
            if lhs != rhs:
                failures.append({"input": (str(x), str(y)),
                                 "lhs": str(lhs), "rhs": str(rhs)})
    else:
        raise ValueError(f"unknown chain-level check {op!r}")
    return {"op": op, "checked": len(inputs), "ok": not failures,
            "failures": failures}
