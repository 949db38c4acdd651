"""Exhaustive enumeration of small residuated semigroups up to isomorphism."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .errors import SemanticError, SizeCapExceeded
from .idempotents import (check_balanced, check_commutative, check_condition_H, check_idempotent,
                          check_square_decreasing, check_steady, self_residual_conditions)
from .poset import FinitePoset, validate_poset
from .residuated import ResiduatedStructure, associativity_witness, find_global_identity

DEFAULT_SIZE_CAP = 5


def size_cap() -> int:
    raw = os.environ.get("RESPOS_SIZE_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_SIZE_CAP
    try:
        return int(raw)
    except ValueError:
        raise SemanticError(f"RESPOS_SIZE_CAP must be an integer, got {raw!r}")


def _check_cap(n: int):
    cap = size_cap()
    if n > cap:
        raise SizeCapExceeded(f"size {n} exceeds the enumeration cap {cap} (set RESPOS_SIZE_CAP)",
                              witness=n)


# posets


def _permute_rel(leq, perm) -> tuple:
    """Relation table after renaming x to perm[x], flattened row-major."""
    n = len(perm)
    inv = [0] * n
    for x, y in enumerate(perm):
        inv[y] = x
    return tuple(leq[inv[a]][inv[b]] for a in range(n) for b in range(n))


@lru_cache(maxsize=None)
def all_posets(n: int) -> tuple[FinitePoset, ...]:
    """One poset per isomorphism class, each in its canonical labeling.

    Every finite poset has a labeling in which x < y forces x < y as integers,
    so it suffices to close upper-triangular relations and canonicalize.
    """
    _check_cap(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    for bits in range(1 << len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                leq[i][j] = True
        if not validate_poset(leq):
            continue
        seen.add(min(_permute_rel(leq, p) for p in perms))
    out = []
    for flat in sorted(seen, reverse=True):
        out.append(FinitePoset(n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))))
    return tuple(out)


def automorphisms(P: FinitePoset) -> list[tuple[int, ...]]:
    n = P.size
    leq = P.leq
    return [p for p in itertools.permutations(range(n))
            if all(leq[x][y] == leq[p[x]][p[y]] for x in range(n) for y in range(n))]


def residuated_maps(P: FinitePoset) -> list[tuple[int, ...]]:
    """Unary maps with an upper adjoint: every preimage of a downset is principal."""
    n = P.size
    leq = P.leq
    out = []
    for f in itertools.product(range(n), repeat=n):
        ok = True
        for z in range(n):
            members = [x for x in range(n) if leq[f[x]][z]]
            top = P.greatest(members)
            if top is None or len(P.downset(top)) != len(members):
                ok = False
                break
        if ok:
            out.append(f)
    return out


# predicates usable as enumeration constraints


def _with_found_unit(A: ResiduatedStructure) -> ResiduatedStructure:
    return A if A.unit is not None else A.with_unit(find_global_identity(A))


def _integrally_closed(A):
    u = A.unit if A.unit is not None else find_global_identity(A)
    return u is not None and all(A.one_l(x) == u for x in range(A.size))


def _integral(A):
    u = A.unit if A.unit is not None else find_global_identity(A)
    return u is not None and all(A.leq[x][u] for x in range(A.size))


PREDICATES: dict[str, Callable[[ResiduatedStructure], bool]] = {
    "balanced": lambda A: bool(check_balanced(A)),
    "self-residuals-positive": lambda A: self_residual_conditions(A)["1"],
    "H": lambda A: all(check_condition_H(A).values()),
    "steady": lambda A: bool(check_steady(A)),
    "idempotent": lambda A: bool(check_idempotent(A)),
    "commutative": lambda A: bool(check_commutative(A)),
    "square-decreasing": lambda A: bool(check_square_decreasing(A)),
    "monoid": lambda A: find_global_identity(A) is not None,
    "integrally-closed": _integrally_closed,
    "integral": _integral,
    "lattice": lambda A: A.poset.is_lattice(),
}


@dataclass(frozen=True)
class EnumerationSpec:
    size: int
    poset: FinitePoset | None = None
    constraints: tuple[str, ...] = ()
    mode: str = "stream"
    canonical: bool = True

    def __post_init__(self):
        if self.mode not in ("stream", "count", "first"):
            raise SemanticError(f"unknown mode {self.mode!r}")
        unknown = [c for c in self.constraints if c not in PREDICATES]
        if unknown:
            raise SemanticError(f"unknown constraint(s) {unknown}; known: {sorted(PREDICATES)}")
        if self.poset is not None and self.poset.size != self.size:
            raise SemanticError("poset size differs from the requested size")


def _residual_tables(P: FinitePoset, mul):
    n = P.size
    leq = P.leq

    def largest(members):
        return P.greatest(members)

    rd = tuple(tuple(largest([x for x in range(n) if leq[mul[x][y]][z]]) for y in range(n))
               for z in range(n))
    ld = tuple(tuple(largest([y for y in range(n) if leq[mul[x][y]][z]]) for z in range(n))
               for x in range(n))
    return ld, rd


def multiplications(P: FinitePoset) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All associative tables whose rows and columns are residuated maps of ``P``.

    Rows are chosen one at a time; every column keeps the residuated maps that
    agree with the rows chosen so far, and associativity is checked on each
    triple as soon as the rows it reads are present.
    """
    n = P.size
    R = residuated_maps(P)
    if not R:
        return
    rows: list[tuple[int, ...]] = [()] * n

    def assoc_ok(a: int) -> bool:
        for x in range(a + 1):
            rx = rows[x]
            for y in range(a + 1):
                xy = rx[y]
                if xy > a or (x != a and y != a and xy != a):
                    continue
                rxy, ry = rows[xy], rows[y]
                for z in range(n):
                    if rxy[z] != rx[ry[z]]:
                        return False
        return True

    def extend(a: int, columns: list[list[tuple[int, ...]]]):
        if a == n:
            yield tuple(rows)
            return
        for row in R:
            new_cols = []
            for b in range(n):
                keep = [c for c in columns[b] if c[a] == row[b]]
                if not keep:
                    break
                new_cols.append(keep)
            else:
                rows[a] = row
                if assoc_ok(a):
                    yield from extend(a + 1, new_cols)
        rows[a] = ()

    yield from extend(0, [list(R) for _ in range(n)])


def _permute_mul(mul, perm) -> tuple:
    n = len(perm)
    inv = [0] * n
    for x, y in enumerate(perm):
        inv[y] = x
    return tuple(perm[mul[inv[a]][inv[b]]] for a in range(n) for b in range(n))


def structures_on(P: FinitePoset, canonical: bool = True) -> Iterator[ResiduatedStructure]:
    """Residuated semigroups on ``P``, one per orbit of its automorphism group."""
    autos = automorphisms(P) if canonical else [tuple(range(P.size))]
    for mul in multiplications(P):
        if canonical and len(autos) > 1:
            flat = tuple(v for row in mul for v in row)
            if any(_permute_mul(mul, p) < flat for p in autos):
                continue
        ld, rd = _residual_tables(P, mul)
        yield ResiduatedStructure(P, mul, ld, rd)


def enumerate_structures(spec: EnumerationSpec) -> Iterator[ResiduatedStructure]:
    _check_cap(spec.size)
    posets = [spec.poset] if spec.poset is not None else all_posets(spec.size)
    preds = [PREDICATES[c] for c in spec.constraints]
    for P in posets:
        for A in structures_on(P, spec.canonical):
            if all(p(A) for p in preds):
                yield A
                if spec.mode == "first":
                    return


def count_structures(spec: EnumerationSpec) -> int:
    return sum(1 for _ in enumerate_structures(spec))


@lru_cache(maxsize=None)
def pool(max_size: int) -> tuple[ResiduatedStructure, ...]:
    """Every residuated semigroup of size 1..max_size, up to isomorphism."""
    out = []
    for n in range(1, max_size + 1):
        out.extend(enumerate_structures(EnumerationSpec(n)))
    return tuple(out)


# independent oracle


def canonical_form(leq, mul) -> tuple:
    """Least (order, multiplication) encoding over all relabelings."""
    n = len(mul)
    return min((_permute_rel(leq, p), _permute_mul(mul, p))
               for p in itertools.permutations(range(n)))


def naive_enumerate(n: int) -> set[tuple]:
    """Canonical forms of all residuated semigroups of size n, by generate and test.

    Every relation table is tried as an order and every table as a
    multiplication; residuation is tested directly from its definition.
    """
    _check_cap(n)
    out = set()
    for bits in itertools.product((False, True), repeat=n * n):
        leq = [list(bits[i * n:(i + 1) * n]) for i in range(n)]
        if not validate_poset(leq):
            continue
        for flat in itertools.product(range(n), repeat=n * n):
            mul = [flat[i * n:(i + 1) * n] for i in range(n)]
            if associativity_witness(mul) is not None:
                continue
            if _naive_residuated(leq, mul, n):
                out.add(canonical_form(leq, mul))
    return out


def _naive_residuated(leq, mul, n: int) -> bool:
    for y in range(n):
        for z in range(n):
            xs = [x for x in range(n) if leq[mul[x][y]][z]]
            if not any(all(leq[x][m] for x in xs) and all(leq[mul[x][y]][z] for x in range(n) if leq[x][m])
                       for m in xs):
                return False
            ys = [x for x in range(n) if leq[mul[y][x]][z]]
            if not any(all(leq[x][m] for x in ys) and all(leq[mul[y][x]][z] for x in range(n) if leq[x][m])
                       for m in ys):
                return False
    return True
