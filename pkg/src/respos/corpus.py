"""Builtin example structures and generic constructions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import (InconsistencyError, NotAMonoid, PreconditionError, UnknownExample,
                     ZeroNotBelowUnit)
from .plonka import ResiduatedSystem, check_S1_S2, validate_system
from .poset import FinitePoset, JoinSemilattice, close_covers
from .report import fails, holds
from .residuated import (ResiduatedStructure, associativity_witness, check_residuation,
                         derive_residuals, substructure)


def _covers(labels: Sequence[str], pairs: Sequence[tuple[str, str]]) -> FinitePoset:
    ix = {l: i for i, l in enumerate(labels)}
    return close_covers(len(labels), [(ix[a], ix[b]) for a, b in pairs], labels)


def _table(labels: Sequence[str], rows: dict[str, Sequence[str]]):
    ix = {l: i for i, l in enumerate(labels)}
    return [[ix[c] for c in rows[x]] for x in labels]


def fig1() -> ResiduatedStructure:
    """Positive idempotents p, q, r with pq = a and qp = r."""
    L = ["⊥", "p", "q", "a", "r"]
    P = _covers(L, [("⊥", "p"), ("⊥", "q"), ("p", "a"), ("q", "a"), ("a", "r")])
    mul = _table(L, {
        "⊥": ["⊥", "⊥", "⊥", "⊥", "⊥"],
        "p": ["⊥", "p", "a", "a", "r"],
        "q": ["⊥", "r", "q", "r", "r"],
        "a": ["⊥", "r", "a", "r", "r"],
        "r": ["⊥", "r", "r", "r", "r"],
    })
    return derive_residuals(P, mul, name="fig1")


def fig2() -> ResiduatedStructure:
    """Commutative idempotent monoid whose product is the meet of a second order."""
    L = ["⊥", "1", "p", "q", "a", "b"]
    P = _covers(L, [("⊥", "a"), ("a", "1"), ("a", "b"), ("1", "p"), ("b", "p"), ("p", "q")])
    Q = _covers(L, [("⊥", "b"), ("b", "a"), ("b", "q"), ("q", "p"), ("p", "1"), ("a", "1")])
    mul = [[Q.meet(x, y) for y in range(6)] for x in range(6)]
    return derive_residuals(P, mul, unit=L.index("1"), name="fig2")


def chain4() -> ResiduatedStructure:
    """Chain ⊥ < 1 < p < q; ⊥ absorbing, 1 neutral, otherwise the maximum."""
    L = ["⊥", "1", "p", "q"]
    P = FinitePoset.chain(4, L)

    def m(x, y):
        if 0 in (x, y):
            return 0
        if x == 1:
            return y
        if y == 1:
            return x
        return max(x, y)

    return derive_residuals(P, [[m(x, y) for y in range(4)] for x in range(4)], unit=1, name="chain4")


def z2() -> ResiduatedStructure:
    A = group_antichain(cyclic_group(2), labels=["1", "0"])
    return A.with_name("z2")


def bool2() -> ResiduatedStructure:
    P = FinitePoset.chain(2, ["⊥", "⊤"])
    return derive_residuals(P, [[0, 0], [0, 1]], unit=1, name="bool2")


def pz2() -> ResiduatedStructure:
    """Subsets of the two-element group: ⊥ = ∅, 1 = {e}, 0 = {g}, ⊤ = both."""
    L = ["⊥", "1", "0", "⊤"]
    P = _covers(L, [("⊥", "1"), ("⊥", "0"), ("1", "⊤"), ("0", "⊤")])
    mul = _table(L, {
        "⊥": ["⊥", "⊥", "⊥", "⊥"],
        "1": ["⊥", "1", "0", "⊤"],
        "0": ["⊥", "0", "1", "⊤"],
        "⊤": ["⊥", "⊤", "⊤", "⊤"],
    })
    return derive_residuals(P, mul, unit=1, zero=2, name="pz2")


# systems


def _chain_index(names: Sequence[str]) -> JoinSemilattice:
    return JoinSemilattice.chain(len(names), names)


def _local(fiber: ResiduatedStructure, mapping: dict[str, str], target: ResiduatedStructure):
    return tuple(target.index(mapping[l]) for l in fiber.labels)


def fig3_system() -> ResiduatedSystem:
    """fig2 split over {1, p}: fibers {1, a} and {⊥, p, q, b}."""
    A = fig2()
    f1 = substructure(A, A.idx("1", "a"), unit=A.index("1"), name="fig2[1]")
    fp = substructure(A, A.idx("⊥", "p", "q", "b"), unit=A.index("p"), name="fig2[p]")
    phi = _local(f1, {"1": "p", "a": "b"}, fp)
    psi = _local(f1, {"1": "⊥", "a": "⊥"}, fp)
    return ResiduatedSystem(_chain_index(["1", "p"]), (f1, fp), {(0, 1): phi}, {(0, 1): psi},
                            "fig3-system")


def fig4_system() -> ResiduatedSystem:
    """The two-element group below the two-element Boolean chain."""
    g = z2().with_zero(1).with_name("z2")
    b = bool2().with_zero(1).with_name("bool2")
    phi = _local(g, {"1": "⊤", "0": "⊤"}, b)
    psi = _local(g, {"1": "⊥", "0": "⊥"}, b)
    return ResiduatedSystem(_chain_index(["1", "⊤"]), (g, b), {(0, 1): phi}, {(0, 1): psi},
                            "fig4-system")


def fig5_system() -> ResiduatedSystem:
    """chain4 split over {1, p}: fibers {1} and {⊥, p, q}."""
    A = chain4()
    f1 = substructure(A, A.idx("1"), unit=A.index("1"), name="chain4[1]")
    fp = substructure(A, A.idx("⊥", "p", "q"), unit=A.index("p"), name="chain4[p]")
    phi = _local(f1, {"1": "p"}, fp)
    psi = _local(f1, {"1": "⊥"}, fp)
    return ResiduatedSystem(_chain_index(["1", "p"]), (f1, fp), {(0, 1): phi}, {(0, 1): psi},
                            "fig5-system")


def brouwerian_chain(n: int, labels: Sequence[str] | None = None, name: str | None = None) -> ResiduatedStructure:
    """n-element chain with meet as product and the top as unit."""
    P = FinitePoset.chain(n, labels)
    return derive_residuals(P, [[min(x, y) for y in range(n)] for x in range(n)], unit=n - 1, name=name)


def two_component_template() -> ResiduatedSystem:
    A1 = brouwerian_chain(2, ["⊥₁", "1₁"], "A1")
    A2 = brouwerian_chain(2, ["⊥₂", "1₂"], "A2")
    S = two_component_sum(A1, A2, A2.index("⊥₂"))
    return ResiduatedSystem(S.index, S.fibers, S.phi, S.psi, "two-component-template")


STRUCTURES = {"fig1": fig1, "fig2": fig2, "chain4": chain4, "z2": z2, "bool2": bool2, "pz2": pz2}
SYSTEMS = {"fig3-system": fig3_system, "fig4-system": fig4_system, "fig5-system": fig5_system,
           "two-component-template": two_component_template}
BUILTIN_NAMES = tuple(STRUCTURES) + tuple(SYSTEMS)


def builtin(name: str):
    if name in STRUCTURES:
        return STRUCTURES[name]()
    if name in SYSTEMS:
        return SYSTEMS[name]()
    raise UnknownExample(f"unknown example {name!r}; known: {', '.join(BUILTIN_NAMES)}", witness=name)


# generic constructions


def cyclic_group(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple((x + y) % n for y in range(n)) for x in range(n))


def symmetric_group_3() -> tuple[tuple[int, ...], ...]:
    perms = list(itertools.permutations(range(3)))
    ix = {p: i for i, p in enumerate(perms)}
    return tuple(tuple(ix[tuple(p[q[k]] for k in range(3))] for q in perms) for p in perms)


def _check_monoid(M, e: int):
    w = associativity_witness(tuple(map(tuple, M)))
    if w is not None:
        raise NotAMonoid(f"table is not associative at {w}", witness=w)
    for x in range(len(M)):
        if M[e][x] != x or M[x][e] != x:
            raise NotAMonoid(f"{e} is not an identity", witness=x)


def complex_algebra(M, e: int = 0, labels: Sequence[str] | None = None,
                    zero_mask: int | None = None) -> ResiduatedStructure:
    """Powerset of a finite monoid: subsets as bit masks, bit ``i`` for element ``i``."""
    _check_monoid(M, e)
    m = len(M)
    n = 1 << m
    elems = [[i for i in range(m) if mask >> i & 1] for mask in range(n)]

    def mask(xs):
        out = 0
        for x in xs:
            out |= 1 << x
        return out

    mul = [[mask(M[x][y] for x in elems[X] for y in elems[Y]) for Y in range(n)] for X in range(n)]
    ld = [[mask(z for z in range(m) if mul[X][1 << z] | Y == Y) for Y in range(n)] for X in range(n)]
    rd = [[mask(z for z in range(m) if mul[1 << z][Y] | X == X) for Y in range(n)] for X in range(n)]
    if labels is None:
        labels = ["{" + ",".join(map(str, xs)) + "}" if xs else "∅" for xs in elems]
    P = FinitePoset.from_relation(n, [(X, Y) for X in range(n) for Y in range(n) if X | Y == Y], labels)
    A = ResiduatedStructure(P, mul, ld, rd, 1 << e, zero_mask, "complex algebra")
    r = check_residuation(A)
    if not r:
        raise InconsistencyError(f"set residuals fail residuation: {r.describe()}")
    return A


def _inverse(G, e: int) -> list[int]:
    inv = []
    for x in range(len(G)):
        ys = [y for y in range(len(G)) if G[x][y] == e and G[y][x] == e]
        if not ys:
            raise PreconditionError(f"element {x} has no inverse", witness=x)
        inv.append(ys[0])
    return inv


def group_antichain(G, e: int = 0, labels: Sequence[str] | None = None) -> ResiduatedStructure:
    """A group ordered by equality; ``x\\y = x⁻¹y`` and ``x/y = xy⁻¹``."""
    _check_monoid(G, e)
    inv = _inverse(G, e)
    n = len(G)
    ld = [[G[inv[x]][y] for y in range(n)] for x in range(n)]
    rd = [[G[x][inv[y]] for y in range(n)] for x in range(n)]
    A = ResiduatedStructure(FinitePoset.antichain(n, labels), G, ld, rd, e, None, "group")
    if any(ld[x][x] != rd[x][x] for x in range(n)):
        raise InconsistencyError("x\\x differs from x/x in a group")
    r = check_residuation(A)
    if not r:
        raise InconsistencyError(f"group residuals fail residuation: {r.describe()}")
    return A


def two_component_sum(A1: ResiduatedStructure, A2: ResiduatedStructure, zero: int) -> ResiduatedSystem:
    """Index 1 < 2, ``φ₁₂ ≡ 1^{A2}`` and ``ψ₁₂ ≡ zero``."""
    one = A2.require_unit()
    A1.require_unit()
    if not A2.poset.lt(zero, one):
        raise ZeroNotBelowUnit(f"{A2.label(zero)} is not strictly below {A2.label(one)}", witness=zero)
    S = ResiduatedSystem(_chain_index(["1", "2"]), (A1, A2),
                         {(0, 1): tuple(one for _ in range(A1.size))},
                         {(0, 1): tuple(zero for _ in range(A1.size))})
    meta = S.to_metamorphism_system()
    for r in [validate_system(meta), *check_S1_S2(meta).values()]:
        if not r:
            raise InconsistencyError(f"two-component system fails {r.describe()}")
    return S


@dataclass(frozen=True)
class LatticeSum:
    structure: ResiduatedStructure
    join: tuple[tuple[int, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    system: ResiduatedSystem


def chopped_lattice_sum(A: ResiduatedStructure, B: ResiduatedStructure, zero: int) -> LatticeSum:
    """Two-component sum of a doubly chopped lattice below a residuated lattice,
    with join and meet given by the case formulas."""
    from .structure import compose_with_embedding

    PA, PB = A.poset, B.poset
    for x in range(A.size):
        for y in range(A.size):
            if PA.upper_bounds([x, y]) and PA.join(x, y) is None:
                raise PreconditionError("bounded pair without a join", witness=(x, y))
            if PA.lower_bounds([x, y]) and PA.meet(x, y) is None:
                raise PreconditionError("bounded pair without a meet", witness=(x, y))
    if not PB.is_lattice():
        raise PreconditionError("second component is not a lattice")
    S = two_component_sum(A, B, zero)
    sumA, result = compose_with_embedding(S)
    one = B.unit
    emb = result.embedding

    def join(g, h):
        (p, x), (q, y) = emb[g], emb[h]
        if p == 0 and q == 0:
            j = PA.join(x, y)
            return (1, one) if j is None else (0, j)
        if p == 1 and q == 1:
            return (1, PB.join(x, y))
        if p == 1:
            (p, x), (q, y) = (q, y), (p, x)
        if PB.leq[y][zero]:
            return (0, x)
        return (1, PB.join(y, one))

    def meet(g, h):
        (p, x), (q, y) = emb[g], emb[h]
        if p == 0 and q == 0:
            m = PA.meet(x, y)
            return (1, zero) if m is None else (0, m)
        if p == 1 and q == 1:
            return (1, PB.meet(x, y))
        if p == 1:
            (p, x), (q, y) = (q, y), (p, x)
        if PB.leq[one][y]:
            return (0, x)
        return (1, PB.meet(y, zero))

    gid = {pk: g for g, pk in enumerate(emb)}
    n = len(emb)
    J = tuple(tuple(gid[join(g, h)] for h in range(n)) for g in range(n))
    M = tuple(tuple(gid[meet(g, h)] for h in range(n)) for g in range(n))
    P = sumA.poset
    for g in range(n):
        for h in range(n):
            if P.join(g, h) != J[g][h] or P.meet(g, h) != M[g][h]:
                raise InconsistencyError("case formulas disagree with the sum order", witness=(g, h))
            if J[g][M[g][h]] != g or M[g][J[g][h]] != g:
                raise InconsistencyError("absorption fails", witness=(g, h))
    return LatticeSum(sumA, J, M, S)
