"""Residuated partially ordered semigroups and monoids."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .algebra import FiniteAlgebra, Signature
from .errors import (MissingUnit, NonSquareTable, NotAssociative, NotResiduated,
                     SemanticError)
from .poset import FinitePoset
from .report import PropertyReport, fails, holds

MUL, LD, RD, ONE, ZERO = "*", "\\", "/", "1", "0"

Op = tuple[tuple[int, ...], ...]


def _freeze_op(table, n: int, what: str) -> Op:
    rows = tuple(tuple(int(v) for v in row) for row in table)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise NonSquareTable(f"{what} table is not {n}x{n}")
    for row in rows:
        for v in row:
            if not 0 <= v < n:
                raise SemanticError(f"{what} table entry {v} out of range")
    return rows


def associativity_witness(mul: Op) -> tuple[int, int, int] | None:
    n = len(mul)
    for x in range(n):
        mx = mul[x]
        for y in range(n):
            xy = mul[mx[y]]
            my = mul[y]
            for z in range(n):
                if xy[z] != mx[my[z]]:
                    return (x, y, z)
    return None


@dataclass(frozen=True, eq=False)
class ResiduatedStructure:
    """A poset with a multiplication and both residuals, all as index tables.

    ``rd[x][y]`` is ``x/y`` and ``ld[x][y]`` is ``x\\y``. ``unit`` and ``zero``
    are optional distinguished elements. Construction only checks shapes; use
    :func:`check_residuation` or :func:`derive_residuals` for the law itself.
    """

    poset: FinitePoset
    mul: Op
    ld: Op
    rd: Op
    unit: int | None = None
    zero: int | None = None
    name: str | None = None

    def __post_init__(self):
        n = self.poset.size
        object.__setattr__(self, "mul", _freeze_op(self.mul, n, "mul"))
        object.__setattr__(self, "ld", _freeze_op(self.ld, n, "ld"))
        object.__setattr__(self, "rd", _freeze_op(self.rd, n, "rd"))
        for c in (self.unit, self.zero):
            if c is not None and not 0 <= c < n:
                raise SemanticError(f"constant {c} out of range")
        if self.unit is not None:
            u = self.unit
            for a in range(n):
                if self.mul[u][a] != a or self.mul[a][u] != a:
                    raise SemanticError(f"declared unit {self.label(u)} is not a global identity",
                                        witness=a)

    @classmethod
    def build(cls, poset: FinitePoset, mul, unit: int | None = None, zero: int | None = None,
              name: str | None = None) -> "ResiduatedStructure":
        """Derive both residuals from order and multiplication."""
        ld, rd = residual_tables(poset, mul)
        return cls(poset, mul, ld, rd, unit, zero, name)

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def leq(self):
        return self.poset.leq

    @property
    def labels(self) -> tuple[str, ...]:
        return self.poset.labels or tuple(str(i) for i in range(self.size))

    def label(self, x: int) -> str:
        return self.poset.label(x)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def idx(self, *labels: str) -> tuple[int, ...]:
        return tuple(self.index(l) for l in labels)

    def one_r(self, x: int) -> int:
        """``1_x = x/x``"""
        return self.rd[x][x]

    def one_l(self, x: int) -> int:
        """``1'_x = x\\x``"""
        return self.ld[x][x]

    @cached_property
    def signature(self) -> Signature:
        syms = [(MUL, 2), (LD, 2), (RD, 2)]
        if self.unit is not None:
            syms.append((ONE, 0))
        if self.zero is not None:
            syms.append((ZERO, 0))
        return Signature(tuple(syms))

    def arity(self, symbol: str) -> int:
        return self.signature.arity(symbol)

    @cached_property
    def _algebra(self) -> FiniteAlgebra:
        tables = {MUL: self.mul, LD: self.ld, RD: self.rd}
        if self.unit is not None:
            tables[ONE] = self.unit
        if self.zero is not None:
            tables[ZERO] = self.zero
        return FiniteAlgebra(self.size, self.signature, tables, self.poset, self.poset.labels)

    def as_algebra(self) -> FiniteAlgebra:
        return self._algebra

    def apply(self, symbol: str, *args: int) -> int:
        return self._algebra.apply(symbol, *args)

    def with_unit(self, unit: int | None) -> "ResiduatedStructure":
        return ResiduatedStructure(self.poset, self.mul, self.ld, self.rd, unit, self.zero, self.name)

    def with_zero(self, zero: int | None) -> "ResiduatedStructure":
        return ResiduatedStructure(self.poset, self.mul, self.ld, self.rd, self.unit, zero, self.name)

    def with_labels(self, labels: Sequence[str] | None) -> "ResiduatedStructure":
        return ResiduatedStructure(self.poset.with_labels(labels), self.mul, self.ld, self.rd,
                                   self.unit, self.zero, self.name)

    def with_name(self, name: str | None) -> "ResiduatedStructure":
        return ResiduatedStructure(self.poset, self.mul, self.ld, self.rd, self.unit, self.zero, name)

    def require_unit(self) -> int:
        if self.unit is None:
            raise MissingUnit(f"{self.name or 'structure'} has no declared unit")
        return self.unit

    def tables_equal(self, other: "ResiduatedStructure") -> bool:
        return (self.poset.leq == other.poset.leq and self.mul == other.mul
                and self.ld == other.ld and self.rd == other.rd
                and self.unit == other.unit and self.zero == other.zero)

    def __repr__(self):
        return f"ResiduatedStructure(name={self.name!r}, size={self.size})"


def _principal_max(poset: FinitePoset, members: list[int]) -> int | None:
    """The greatest member, provided the members form exactly its downset."""
    top = poset.greatest(members)
    if top is None or len(poset.downset(top)) != len(members):
        return None
    return top


def residual_tables(poset: FinitePoset, mul) -> tuple[Op, Op]:
    n = poset.size
    mul = _freeze_op(mul, n, "mul")
    w = associativity_witness(mul)
    if w is not None:
        raise NotAssociative("multiplication is not associative at x,y,z = %s" % (w,), witness=w)
    leq = poset.leq
    rd = [[0] * n for _ in range(n)]
    for z in range(n):
        for y in range(n):
            members = [x for x in range(n) if leq[mul[x][y]][z]]
            m = _principal_max(poset, members)
            if m is None:
                raise NotResiduated(f"no largest x with x*{poset.label(y)} <= {poset.label(z)}",
                                    witness=(("z", z), ("y", y)))
            rd[z][y] = m
    ld = [[0] * n for _ in range(n)]
    for x in range(n):
        for z in range(n):
            members = [y for y in range(n) if leq[mul[x][y]][z]]
            m = _principal_max(poset, members)
            if m is None:
                raise NotResiduated(f"no largest y with {poset.label(x)}*y <= {poset.label(z)}",
                                    witness=(("x", x), ("z", z)))
            ld[x][z] = m
    return tuple(map(tuple, ld)), tuple(map(tuple, rd))


def derive_residuals(poset: FinitePoset, mul, unit: int | None = None, zero: int | None = None,
                     name: str | None = None) -> ResiduatedStructure:
    """Compute ``z/y = max{x : xy <= z}`` and ``x\\z = max{y : xy <= z}``.

    Associativity is checked first. A bound set counts as having a maximum only
    when it is the principal downset of that maximum, which is exactly what the
    residuation law needs.
    """
    return ResiduatedStructure.build(poset, mul, unit, zero, name)


def check_residuation(A: ResiduatedStructure) -> PropertyReport:
    n, leq, mul, ld, rd = A.size, A.leq, A.mul, A.ld, A.rd
    for x in range(n):
        for y in range(n):
            xy = mul[x][y]
            for z in range(n):
                a = leq[xy][z]
                if a != leq[x][rd[z][y]] or a != leq[y][ld[x][z]]:
                    return fails("residuation", [("x", x), ("y", y), ("z", z)])
    return holds("residuation")


def check_associativity(A: ResiduatedStructure) -> PropertyReport:
    w = associativity_witness(A.mul)
    if w is None:
        return holds("associative")
    return fails("associative", zip("xyz", w))


def find_global_identity(A: ResiduatedStructure) -> int | None:
    n, mul = A.size, A.mul
    for u in range(n):
        if all(mul[u][a] == a and mul[a][u] == a for a in range(n)):
            return u
    return None


def is_closed(A: ResiduatedStructure, elements) -> bool:
    s = set(elements)
    return all(A.mul[a][b] in s and A.ld[a][b] in s and A.rd[a][b] in s
               for a in s for b in s)


def substructure(A: ResiduatedStructure, elements: Sequence[int], unit: int | None = None,
                 zero: int | None = None, name: str | None = None) -> ResiduatedStructure:
    """Restrict ``A`` to a subset closed under the three operations.

    Element ``k`` of the result is ``elements[k]``; ``unit``/``zero`` are given
    as elements of ``A``.
    """
    pos = {e: k for k, e in enumerate(elements)}
    if len(pos) != len(elements):
        raise SemanticError("duplicate elements in substructure")
    try:
        def restrict(op):
            return tuple(tuple(pos[op[a][b]] for b in elements) for a in elements)
        mul, ld, rd = restrict(A.mul), restrict(A.ld), restrict(A.rd)
    except KeyError as e:
        raise SemanticError(f"subset is not closed under the operations ({A.label(e.args[0])})",
                            witness=e.args[0])
    return ResiduatedStructure(A.poset.restrict(elements), mul, ld, rd,
                               None if unit is None else pos[unit],
                               None if zero is None else pos[zero], name)


def permute(A: ResiduatedStructure, perm: Sequence[int]) -> ResiduatedStructure:
    """Relabel: old element ``x`` becomes new element ``perm[x]``."""
    n = A.size
    inv = [0] * n
    for x, y in enumerate(perm):
        inv[y] = x

    def tab(op):
        return tuple(tuple(perm[op[inv[a]][inv[b]]] for b in range(n)) for a in range(n))

    leq = tuple(tuple(A.leq[inv[a]][inv[b]] for b in range(n)) for a in range(n))
    labels = None if A.poset.labels is None else tuple(A.poset.labels[inv[a]] for a in range(n))
    return ResiduatedStructure(FinitePoset(n, leq, labels), tab(A.mul), tab(A.ld), tab(A.rd),
                               None if A.unit is None else perm[A.unit],
                               None if A.zero is None else perm[A.zero], A.name)
