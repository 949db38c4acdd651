"""Decomposition of steady residuated structures into systems of residuated
monoids, recomposition, and the round trip between them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bands import LeftNormalBand, check_partition_system, is_left_normal_band, residuated_assignment
from .errors import (InconsistencyError, InvalidSystem, NoCentralPositiveIdempotent,
                     NotBalancedOverI, NotSteadyOverI, PreconditionError)
from .idempotents import (Fibration, IndexSemilattice, check_balanced, check_integral,
                          check_integrally_closed, check_involutive, check_square_decreasing,
                          central_positive_idempotents, compute_u, index_semilattice,
                          positive_idempotents, steady_reports)
from .plonka import (ResiduatedSystem, SumResult, check_S1_S2, residuated_sum,
                     validate_system)
from .report import PropertyReport, fails, holds
from .residuated import ResiduatedStructure, check_residuation, substructure


@dataclass(frozen=True)
class Decomposition:
    source: ResiduatedStructure
    index: IndexSemilattice
    fibration: Fibration
    system: ResiduatedSystem
    members: tuple[tuple[int, ...], ...]

    @property
    def fiber_monoids(self) -> dict[int, ResiduatedStructure]:
        return {p: f for p, f in zip(self.index.elements, self.system.fibers)}

    def fiber_labels(self) -> list[list[str]]:
        return [[self.source.label(a) for a in m] for m in self.members]

    def phi(self, p: int, q: int) -> dict[int, int]:
        """φ_pq as a map between elements of the source."""
        return self._map(self.system.phi, p, q)

    def psi(self, p: int, q: int) -> dict[int, int]:
        return self._map(self.system.psi, p, q)

    def _map(self, family, p, q):
        i, j = self.index.position(p), self.index.position(q)
        return {self.members[i][k]: self.members[j][v] for k, v in enumerate(family[(i, j)])}


def _require_steady(A: ResiduatedStructure, I: IndexSemilattice) -> Fibration:
    fib = compute_u(A, I)
    for name, r in steady_reports(A, fib.u).items():
        if not r:
            raise NotSteadyOverI(f"{name} fails: {r.describe(A.labels)}", witness=r.witness)
    return fib


def decompose(A: ResiduatedStructure, I: IndexSemilattice) -> Decomposition:
    """Fibers ``A_p = {a : u_a = p}`` with unit ``p``; ``φ_pq(a) = aq``, ``ψ_pq(a) = a/q``."""
    fib = _require_steady(A, I)
    members = tuple(fib.fibers[p] for p in I.elements)
    pos = {a: k for m in members for k, a in enumerate(m)}
    least = I.least()
    zero_ok = A.zero is not None and least is not None and fib.u[A.zero] == I.elements[least]
    fibers = []
    for p, m in zip(I.elements, members):
        zero = A.mul[p][A.zero] if zero_ok else None
        fibers.append(substructure(A, m, unit=p, zero=zero,
                                   name=f"{A.name or 'A'}[{A.label(p)}]"))
    phi, psi = {}, {}
    for i, j in I.comparable_pairs():
        q = I.elements[j]
        phi[(i, j)] = tuple(pos[A.mul[a][q]] for a in members[i])
        psi[(i, j)] = tuple(pos[A.rd[a][q]] for a in members[i])
    system = ResiduatedSystem(I, tuple(fibers), phi, psi, A.name)
    meta = system.to_metamorphism_system()
    for r in [validate_system(meta), *check_S1_S2(meta).values()]:
        if not r:
            raise InconsistencyError(f"decomposition output fails {r.describe()}")
    # over ZIdp the fibers are integrally closed only when every positive
    # idempotent is central; a noncommutative 4-chain shows the clause fails otherwise
    zidp = central_positive_idempotents(A)
    if set(I.elements) == zidp == positive_idempotents(A):
        for f in fibers:
            if not check_integrally_closed(f):
                raise InconsistencyError(f"fiber {f.name} is not integrally closed")
        if check_square_decreasing(A):
            for f in fibers:
                if not check_integral(f):
                    raise InconsistencyError(f"fiber {f.name} is not integral")
    return Decomposition(A, I, fib, system, members)


def compose_with_embedding(S: ResiduatedSystem) -> tuple[ResiduatedStructure, SumResult]:
    meta = S.to_metamorphism_system()
    v = validate_system(meta)
    if not v:
        raise InvalidSystem(f"system does not validate: {v.describe()}", witness=v.witness)
    for r in check_S1_S2(meta).values():
        if not r:
            raise InvalidSystem(f"{r.describe()}", witness=r.witness)
    for f in S.fibers:
        if f.unit is None:
            raise PreconditionError(f"fiber {f.name} is not a monoid")
    A, result = residuated_sum(S, drop_constants=True)
    _assert_composition(S, A, result)
    return A, result


def compose(S: ResiduatedSystem) -> ResiduatedStructure:
    """Sum of a residuated system, with the composition theorem's claims checked."""
    return compose_with_embedding(S)[0]


def _assert_composition(S: ResiduatedSystem, A: ResiduatedStructure, result: SumResult):
    if not result.diagnostics["residuation"]:
        raise InconsistencyError("sum is not residuated")
    gid = {pk: g for g, pk in enumerate(result.embedding)}
    units = [gid[(p, f.unit)] for p, f in enumerate(S.fibers)]
    zidp = central_positive_idempotents(A)
    if not set(units) <= zidp:
        raise InconsistencyError("fiber units are not central positive idempotents of the sum")
    for i, j in itertools.product(range(len(units)), repeat=2):
        if A.mul[units[i]][units[j]] != units[S.index.join(i, j)]:
            raise InconsistencyError("fiber units do not multiply like the index")
    image = index_semilattice(A, units)
    fib = compute_u(A, image)
    for g, (p, _) in enumerate(result.embedding):
        if fib.u[g] != units[p]:
            raise InconsistencyError("u of an element is not its fiber unit", witness=g)
    if not all(steady_reports(A, fib.u).values()):
        raise InconsistencyError("sum is not steady over the fiber units")
    if all(check_balanced(f) for f in S.fibers) and not check_balanced(A):
        raise InconsistencyError("balanced fibers but unbalanced sum")
    if all(check_integrally_closed(f) for f in S.fibers) and set(units) != zidp:
        raise InconsistencyError("integrally closed fibers but extra central positive idempotents")
    if all(check_integral(f) for f in S.fibers) and not check_square_decreasing(A):
        raise InconsistencyError("integral fibers but the sum is not square-decreasing")
    if A.zero is not None and all(f.zero is not None for f in S.fibers):
        if all(check_involutive(f) for f in S.fibers) and not check_involutive(A):
            raise InconsistencyError("involutive fibers but the sum is not involutive")


def roundtrip(A: ResiduatedStructure, I: IndexSemilattice) -> PropertyReport:
    """Decompose, compose, pull the result back along the fiber membership and
    compare with ``A`` table for table."""
    d = decompose(A, I)
    B, result = compose_with_embedding(d.system)
    back = [d.members[p][k] for p, k in result.embedding]
    n = A.size
    name = "roundtrip"
    for g in range(n):
        for h in range(n):
            x, y = back[g], back[h]
            if B.leq[g][h] != A.leq[x][y]:
                return fails(name, [("table", "order"), ("x", x), ("y", y)])
            for tab, a_tab, b_tab in (("mul", A.mul, B.mul), ("ld", A.ld, B.ld), ("rd", A.rd, B.rd)):
                if back[b_tab[g][h]] != a_tab[x][y]:
                    return fails(name, [("table", tab), ("x", x), ("y", y)])
    if A.unit is not None and (B.unit is None or back[B.unit] != A.unit):
        return fails(name, [("table", "unit")])
    if A.zero is not None and (B.zero is None or back[B.zero] != A.zero):
        return fails(name, [("table", "zero")])
    return holds(name)


def subsemilattices(A: ResiduatedStructure, carrier) -> list[tuple[int, ...]]:
    """Nonempty subsets of ``carrier`` closed under multiplication."""
    elems = sorted(carrier)
    out = []
    for k in range(1, len(elems) + 1):
        for sub in itertools.combinations(elems, k):
            s = set(sub)
            if all(A.mul[p][q] in s for p in sub for q in sub):
                out.append(sub)
    return out


def steady_candidates(A: ResiduatedStructure) -> list[tuple[int, ...]]:
    """Subsemilattices of the central positive idempotents over which ``A`` is steady."""
    out = []
    for sub in subsemilattices(A, central_positive_idempotents(A)):
        I = index_semilattice(A, sub, check=False)
        try:
            fib = compute_u(A, I)
        except NotBalancedOverI:
            continue
        if all(steady_reports(A, fib.u).values()):
            out.append(sub)
    return out


def steadiest_index(A: ResiduatedStructure) -> IndexSemilattice:
    """Largest steady index; ties go to the lexicographically least carrier.

    Falls back to the least central positive idempotent as a singleton when no
    candidate qualifies.
    """
    zidp = central_positive_idempotents(A)
    if not zidp:
        raise NoCentralPositiveIdempotent(f"{A.name or 'structure'} has no central positive idempotent")
    cands = steady_candidates(A)
    if not cands:
        return index_semilattice(A, [min(zidp)], check=False)
    best = max(len(c) for c in cands)
    return index_semilattice(A, min(c for c in cands if len(c) == best), check=False)


@dataclass
class DecompositionTree:
    structure: ResiduatedStructure
    index: IndexSemilattice
    decomposition: Decomposition | None = None
    children: list["DecompositionTree"] = field(default_factory=list)
    members: tuple[int, ...] = ()

    def leaves(self) -> list["DecompositionTree"]:
        if not self.children:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def levels(self) -> list[list["DecompositionTree"]]:
        out, layer = [], [self]
        while layer:
            out.append(layer)
            layer = [c for node in layer for c in node.children]
        return out


def iterated_decompose(A: ResiduatedStructure, members: tuple[int, ...] | None = None,
                       depth: int | None = None) -> DecompositionTree:
    """Split along the steadiest index and recurse into each fiber.

    ``members`` records, for every node, which elements of the original
    structure it contains.
    """
    members = tuple(range(A.size)) if members is None else members
    if depth is None:
        depth = len(central_positive_idempotents(A)) + 1
    I = steadiest_index(A)
    node = DecompositionTree(A, I, members=members)
    if I.size == 1 or depth <= 0:
        return node
    d = decompose(A, I)
    node.decomposition = d
    for fiber, m in zip(d.system.fibers, d.members):
        node.children.append(iterated_decompose(fiber, tuple(members[a] for a in m), depth - 1))
    return node


# fibrancy


def fibrant_bands(A: ResiduatedStructure, u) -> tuple[LeftNormalBand, LeftNormalBand]:
    n = A.size
    odot = LeftNormalBand(n, tuple(tuple(A.mul[a][u[b]] for b in range(n)) for a in range(n)))
    otimes = LeftNormalBand(n, tuple(tuple(A.rd[a][u[b]] for b in range(n)) for a in range(n)))
    return odot, otimes


def fibrant_report(A: ResiduatedStructure, I: IndexSemilattice) -> PropertyReport:
    """Whether ``a·u_b`` and ``a/u_b`` form a partition system with the
    residuated wiring."""
    fib = compute_u(A, I)
    odot, otimes = fibrant_bands(A, fib.u)
    if not is_left_normal_band(odot):
        return fails("fibrant", None, "a*u_b is not a left normal band")
    if not is_left_normal_band(otimes):
        return fails("fibrant", None, "a/u_b is not a left normal band")
    for key, r in check_partition_system(A, residuated_assignment(odot, otimes)).items():
        if not r:
            return fails("fibrant", r.witness, f"{key} fails")
    return holds("fibrant")


def check_fibrant_implies_steady(A: ResiduatedStructure, I: IndexSemilattice) -> PropertyReport:
    fib = compute_u(A, I)
    fibrant = bool(fibrant_report(A, I))
    steady = all(steady_reports(A, fib.u).values())
    detail = f"fibrant={fibrant}, steady={steady}"
    if fibrant and not steady:
        return fails("fibrant-implies-steady", None, detail)
    return holds("fibrant-implies-steady", detail)
