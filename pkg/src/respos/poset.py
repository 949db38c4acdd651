"""Finite partial orders on dense integer universes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CycleDetected, NonSquareTable, SemanticError
from .report import PropertyReport, fails, holds

Table = tuple[tuple[bool, ...], ...]


def _square(table: Sequence[Sequence], what: str = "table") -> int:
    n = len(table)
    for i, row in enumerate(table):
        if len(row) != n:
            raise NonSquareTable(f"{what}: row {i} has {len(row)} entries, expected {n}",
                                 witness=(i, len(row)))
    return n


def validate_poset(leq: Sequence[Sequence[bool]]) -> PropertyReport:
    """Check reflexivity, antisymmetry and transitivity of a relation table."""
    n = _square(leq, "order")
    for x in range(n):
        if not leq[x][x]:
            return fails("poset", [("axiom", "reflexive"), ("x", x)])
    for x in range(n):
        for y in range(x + 1, n):
            if leq[x][y] and leq[y][x]:
                return fails("poset", [("axiom", "antisymmetric"), ("x", x), ("y", y)])
    for x in range(n):
        for y in range(n):
            if not leq[x][y]:
                continue
            for z in range(n):
                if leq[y][z] and not leq[x][z]:
                    return fails("poset", [("axiom", "transitive"), ("x", x), ("y", y), ("z", z)])
    return holds("poset")


@dataclass(frozen=True, eq=False)
class FinitePoset:
    size: int
    leq: Table
    labels: tuple[str, ...] | None = None
    _ups: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)
    _downs: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        leq = tuple(tuple(bool(v) for v in row) for row in self.leq)
        if len(leq) != self.size:
            raise NonSquareTable(f"order has {len(leq)} rows for size {self.size}")
        _square(leq, "order")
        object.__setattr__(self, "leq", leq)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.size or len(set(labels)) != self.size:
                raise SemanticError(f"labels must be {self.size} distinct names")
            object.__setattr__(self, "labels", labels)
        n = self.size
        object.__setattr__(self, "_ups", tuple(
            frozenset(y for y in range(n) if leq[x][y]) for x in range(n)))
        object.__setattr__(self, "_downs", tuple(
            frozenset(y for y in range(n) if leq[y][x]) for x in range(n)))

    # construction helpers

    @classmethod
    def from_relation(cls, size: int, pairs: Iterable[tuple[int, int]],
                      labels: Sequence[str] | None = None) -> "FinitePoset":
        leq = [[x == y for y in range(size)] for x in range(size)]
        for x, y in pairs:
            leq[x][y] = True
        return cls(size, tuple(map(tuple, leq)), tuple(labels) if labels else None)

    @classmethod
    def antichain(cls, size: int, labels: Sequence[str] | None = None) -> "FinitePoset":
        return cls.from_relation(size, [], labels)

    @classmethod
    def chain(cls, size: int, labels: Sequence[str] | None = None) -> "FinitePoset":
        return cls.from_relation(size, [(x, y) for x in range(size) for y in range(x, size)], labels)

    def with_labels(self, labels: Sequence[str] | None) -> "FinitePoset":
        return FinitePoset(self.size, self.leq, tuple(labels) if labels else None)

    def validate(self) -> PropertyReport:
        return validate_poset(self.leq)

    # queries

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq[x][y]

    def upset(self, x: int) -> frozenset:
        return self._ups[x]

    def downset(self, x: int) -> frozenset:
        return self._downs[x]

    def upper_bounds(self, xs: Iterable[int]) -> frozenset:
        out = frozenset(range(self.size))
        for x in xs:
            out &= self._ups[x]
        return out

    def lower_bounds(self, xs: Iterable[int]) -> frozenset:
        out = frozenset(range(self.size))
        for x in xs:
            out &= self._downs[x]
        return out

    def least(self, xs: Iterable[int]) -> int | None:
        xs = list(xs)
        for c in xs:
            if all(self.leq[c][y] for y in xs):
                return c
        return None

    def greatest(self, xs: Iterable[int]) -> int | None:
        xs = list(xs)
        for c in xs:
            if all(self.leq[y][c] for y in xs):
                return c
        return None

    def maximal(self, xs: Iterable[int]) -> list[int]:
        xs = list(xs)
        return [c for c in xs if not any(self.lt(c, y) for y in xs)]

    def join(self, x: int, y: int) -> int | None:
        return self.least(sorted(self._ups[x] & self._ups[y]))

    def meet(self, x: int, y: int) -> int | None:
        return self.greatest(sorted(self._downs[x] & self._downs[y]))

    def top(self) -> int | None:
        return self.greatest(range(self.size))

    def bottom(self) -> int | None:
        return self.least(range(self.size))

    def is_lattice(self) -> bool:
        return all(self.join(x, y) is not None and self.meet(x, y) is not None
                   for x in range(self.size) for y in range(self.size))

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for x in range(self.size):
            for y in range(self.size):
                if self.lt(x, y) and not any(self.lt(x, z) and self.lt(z, y) for z in range(self.size)):
                    out.append((x, y))
        return out

    def restrict(self, elements: Sequence[int]) -> "FinitePoset":
        """Induced subposet; element k of the result is ``elements[k]``."""
        labels = None if self.labels is None else [self.labels[e] for e in elements]
        return FinitePoset(len(elements), tuple(
            tuple(self.leq[a][b] for b in elements) for a in elements), labels)

    def is_monotone(self, f: Sequence[int], target: "FinitePoset | None" = None) -> bool:
        target = target or self
        return all(target.leq[f[x]][f[y]] for x in range(self.size)
                   for y in self._ups[x])

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.leq == other.leq

    def __hash__(self):
        return hash(self.leq)


def close_covers(size: int, covers: Iterable[tuple[int, int]],
                 labels: Sequence[str] | None = None) -> FinitePoset:
    """Reflexive-transitive closure of a cover relation (Warshall)."""
    reach = [[x == y for y in range(size)] for x in range(size)]
    for x, y in covers:
        if not (0 <= x < size and 0 <= y < size):
            raise SemanticError(f"cover ({x},{y}) out of range for size {size}")
        reach[x][y] = True
    for k in range(size):
        for i in range(size):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(size):
                    if row_k[j]:
                        row_i[j] = True
    for x in range(size):
        for y in range(x + 1, size):
            if reach[x][y] and reach[y][x]:
                cycle = sorted(z for z in range(size) if reach[x][z] and reach[z][x])
                raise CycleDetected(f"order relation has a cycle through {cycle}", witness=cycle)
    return FinitePoset(size, tuple(map(tuple, reach)), tuple(labels) if labels else None)


@dataclass(frozen=True)
class JoinSemilattice:
    """A finite join-semilattice on abstract indices 0..k-1.

    ``elements`` carries the names of the indices (for index semilattices taken
    from inside a structure these are the structure's element ids).
    """

    elements: tuple
    table: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def join(self, i: int, j: int) -> int:
        return self.table[i][j]

    def leq(self, i: int, j: int) -> bool:
        return self.table[i][j] == j

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.table[i][j] == j

    def join_all(self, idx: Iterable[int]) -> int:
        idx = list(idx)
        out = idx[0]
        for i in idx[1:]:
            out = self.table[out][i]
        return out

    def least(self) -> int | None:
        for i in range(self.size):
            if all(self.leq(i, j) for j in range(self.size)):
                return i
        return None

    def comparable_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in range(self.size) if self.leq(i, j)]

    def poset(self) -> FinitePoset:
        return FinitePoset(self.size, tuple(tuple(self.leq(i, j) for j in range(self.size))
                                            for i in range(self.size)))

    def validate(self) -> PropertyReport:
        k = self.size
        t = self.table
        if len(t) != k or any(len(r) != k for r in t):
            return fails("semilattice", [("axiom", "shape")])
        for i in range(k):
            if t[i][i] != i:
                return fails("semilattice", [("axiom", "idempotent"), ("p", i)])
            for j in range(k):
                if t[i][j] != t[j][i]:
                    return fails("semilattice", [("axiom", "commutative"), ("p", i), ("q", j)])
                for m in range(k):
                    if t[t[i][j]][m] != t[i][t[j][m]]:
                        return fails("semilattice", [("axiom", "associative"),
                                                     ("p", i), ("q", j), ("r", m)])
        return holds("semilattice")

    @classmethod
    def chain(cls, k: int, elements: Sequence | None = None) -> "JoinSemilattice":
        return cls(tuple(elements if elements is not None else range(k)),
                   tuple(tuple(max(i, j) for j in range(k)) for i in range(k)))

    @classmethod
    def from_poset(cls, poset: FinitePoset, elements: Sequence | None = None) -> "JoinSemilattice":
        rows = []
        for i in range(poset.size):
            row = []
            for j in range(poset.size):
                s = poset.join(i, j)
                if s is None:
                    raise SemanticError(f"no join for indices {i},{j}")
                row.append(s)
            rows.append(tuple(row))
        return cls(tuple(elements if elements is not None else range(poset.size)), tuple(rows))
