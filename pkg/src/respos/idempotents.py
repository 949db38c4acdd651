"""Positive idempotents and the classification predicates built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (InconsistencyError, MissingUnit, NotBalancedOverI, NotPositiveIdempotent,
                     PreconditionError, SemanticError)
from .poset import JoinSemilattice
from .report import PropertyReport, fails, holds
from .residuated import ResiduatedStructure


def is_positive(A: ResiduatedStructure, p: int) -> bool:
    leq, mul = A.leq, A.mul
    return all(leq[a][mul[p][a]] and leq[a][mul[a][p]] for a in range(A.size))


def is_central(A: ResiduatedStructure, p: int) -> bool:
    mul = A.mul
    return all(mul[p][a] == mul[a][p] for a in range(A.size))


def positives(A: ResiduatedStructure) -> frozenset:
    return frozenset(p for p in range(A.size) if is_positive(A, p))


def positive_idempotents(A: ResiduatedStructure) -> frozenset:
    return frozenset(p for p in positives(A) if A.mul[p][p] == p)


def central_positive_idempotents(A: ResiduatedStructure) -> frozenset:
    return frozenset(p for p in positive_idempotents(A) if is_central(A, p))


class IndexSemilattice(JoinSemilattice):
    """A join-semilattice whose elements are elements of a structure.

    ``elements[i]`` is the structure element with index position ``i``;
    ``table`` is the restricted multiplication expressed in positions.
    """

    def position(self, element: int) -> int:
        return self.elements.index(element)

    def element_join(self, p: int, q: int) -> int:
        e = self.elements
        return e[self.table[e.index(p)][e.index(q)]]


def index_semilattice(A: ResiduatedStructure, carrier: Iterable[int],
                      check: bool = True) -> IndexSemilattice:
    """The subsemilattice of central positive idempotents on ``carrier``."""
    elems = tuple(sorted(set(carrier)))
    if not elems:
        raise PreconditionError("index semilattice must be nonempty")
    if check:
        for p in elems:
            if not (A.mul[p][p] == p and is_positive(A, p) and is_central(A, p)):
                raise NotPositiveIdempotent(
                    f"{A.label(p)} is not a central positive idempotent", witness=p)
    pos = {p: i for i, p in enumerate(elems)}
    try:
        table = tuple(tuple(pos[A.mul[p][q]] for q in elems) for p in elems)
    except KeyError as e:
        raise PreconditionError(f"carrier not closed under multiplication ({A.label(e.args[0])})",
                                witness=e.args[0])
    return IndexSemilattice(elems, table)


@dataclass(frozen=True)
class IdempotentProfile:
    positives: frozenset
    idp: frozenset
    zidp: frozenset
    zidp_join: IndexSemilattice | None
    self_ld: tuple[int, ...]
    self_rd: tuple[int, ...]


def profile(A: ResiduatedStructure) -> IdempotentProfile:
    pos = positives(A)
    idp = frozenset(p for p in pos if A.mul[p][p] == p)
    zidp = frozenset(p for p in idp if is_central(A, p))
    join = index_semilattice(A, zidp, check=False) if zidp else None
    return IdempotentProfile(pos, idp, zidp, join,
                             tuple(A.one_l(a) for a in range(A.size)),
                             tuple(A.one_r(a) for a in range(A.size)))


def _require_idp(A: ResiduatedStructure, p: int):
    if not (A.mul[p][p] == p and is_positive(A, p)):
        raise NotPositiveIdempotent(f"{A.label(p)} is not a positive idempotent", witness=p)


@dataclass(frozen=True)
class SetsOfP:
    A_rd_p: frozenset   # A/p
    A_p_mul: frozenset  # Ap
    p_mul_A: frozenset  # pA
    p_ld_A: frozenset   # p\A
    A_sub: frozenset    # A_p = {a : a\a = p}
    sub_A: frozenset    # pA (left-subscript) = {a : a/a = p}


def sets_of_p(A: ResiduatedStructure, p: int) -> SetsOfP:
    _require_idp(A, p)
    n, mul, ld, rd, leq = A.size, A.mul, A.ld, A.rd, A.leq
    A_rd_p = frozenset(rd[a][p] for a in range(n))
    Ap = frozenset(mul[a][p] for a in range(n))
    pA = frozenset(mul[p][a] for a in range(n))
    p_ld_A = frozenset(ld[p][a] for a in range(n))
    right = [
        A_rd_p,
        frozenset(a for a in range(n) if a == rd[a][p]),
        frozenset(a for a in range(n) if leq[a][rd[a][p]]),
        frozenset(a for a in range(n) if leq[mul[a][p]][a]),
        frozenset(a for a in range(n) if mul[a][p] == a),
        Ap,
    ]
    left = [
        p_ld_A,
        frozenset(a for a in range(n) if a == ld[p][a]),
        frozenset(a for a in range(n) if leq[a][ld[p][a]]),
        frozenset(a for a in range(n) if leq[mul[p][a]][a]),
        frozenset(a for a in range(n) if mul[p][a] == a),
        pA,
    ]
    if len(set(right)) != 1 or len(set(left)) != 1:
        raise InconsistencyError(f"descriptions of A/p and p\\A disagree at p={A.label(p)}",
                                 witness=p)
    return SetsOfP(A_rd_p, Ap, pA, p_ld_A,
                   frozenset(a for a in range(n) if ld[a][a] == p),
                   frozenset(a for a in range(n) if rd[a][a] == p))


# self-residuals and balance


def self_residual_conditions(A: ResiduatedStructure) -> dict[str, bool]:
    """The four equivalent forms of 'all self-residuals are positive'."""
    n, mul, leq = A.size, A.mul, A.leq
    c1 = all(leq[y][mul[A.one_r(x)][y]] and leq[y][mul[y][A.one_l(x)]]
             for x in range(n) for y in range(n))
    pos = positives(A)
    c2 = all(A.one_r(x) in pos and A.one_l(x) in pos for x in range(n))
    idp = positive_idempotents(A)
    c3 = idp == {A.one_r(a) for a in range(n)} == {A.one_l(a) for a in range(n)}
    # A_p and pA families are disjoint by definition; partition means covering
    c4 = all(A.one_l(a) in idp and A.one_r(a) in idp for a in range(n))
    return {"1": c1, "2": c2, "3": c3, "4": c4}


def _self_residual_witness(A: ResiduatedStructure) -> PropertyReport | None:
    n, mul, leq = A.size, A.mul, A.leq
    for x in range(n):
        for y in range(n):
            if not leq[y][mul[A.one_r(x)][y]]:
                return fails("self-residuals-positive", [("x", x), ("y", y)], "y <= (x/x)y fails")
            if not leq[y][mul[y][A.one_l(x)]]:
                return fails("self-residuals-positive", [("x", x), ("y", y)], "y <= y(x\\x) fails")
    return None


def check_self_residuals_positive(A: ResiduatedStructure) -> PropertyReport:
    verdict = _self_residual_witness(A)
    if verdict is None:
        verdict = holds("self-residuals-positive")
    forms = self_residual_conditions(A)
    if len(set(forms.values())) != 1:
        raise InconsistencyError(f"equivalent forms of self-residual positivity disagree: {forms}")
    return verdict


def balanced_conditions(A: ResiduatedStructure) -> dict[str, bool]:
    n, mul, leq = A.size, A.mul, A.leq
    same = all(A.one_l(x) == A.one_r(x) for x in range(n))
    up_r = all(leq[y][mul[A.one_r(x)][y]] for x in range(n) for y in range(n))
    up_l = all(leq[y][mul[y][A.one_l(x)]] for x in range(n) for y in range(n))
    c1 = same and self_residual_conditions(A)["2"]
    c2 = same and up_r and up_l
    c3 = up_l and all(mul[A.one_l(x)][y] == mul[y][A.one_l(x)] for x in range(n) for y in range(n))
    c4 = up_r and all(mul[A.one_r(x)][y] == mul[y][A.one_r(x)] for x in range(n) for y in range(n))
    return {"1": c1, "2": c2, "3": c3, "4": c4}


def check_balanced(A: ResiduatedStructure) -> PropertyReport:
    verdict = None
    for x in range(A.size):
        if A.one_l(x) != A.one_r(x):
            verdict = fails("balanced", [("x", x)], "x\\x != x/x")
            break
    if verdict is None:
        pos = check_self_residuals_positive(A)
        verdict = holds("balanced") if pos else fails("balanced", pos.witness, pos.detail)
    forms = balanced_conditions(A)
    if len(set(forms.values())) != 1 or forms["1"] != verdict.holds:
        raise InconsistencyError(f"equivalent forms of balance disagree: {forms}")
    return verdict


def check_condition_H(A: ResiduatedStructure) -> dict[str, PropertyReport]:
    n = A.size
    one = [A.one_r(x) for x in range(n)]
    out = {}
    for name, op in (("H1", A.mul), ("H2", A.rd), ("H3", A.ld)):
        verdict = holds(name)
        for x in range(n):
            for y in range(n):
                if one[x] == one[y] and one[op[x][y]] != one[x]:
                    verdict = fails(name, [("x", x), ("y", y)])
                    break
            if not verdict:
                break
        out[name] = verdict
    return out


# balanced and steady over an index semilattice


@dataclass(frozen=True)
class Fibration:
    index: IndexSemilattice
    u: tuple[int, ...]
    fibers: dict

    def fiber(self, p: int) -> tuple[int, ...]:
        return self.fibers[p]


def compute_u(A: ResiduatedStructure, I: IndexSemilattice) -> Fibration:
    """``u_a`` is the largest ``p`` in ``I`` with ``pa = a``."""
    mul = A.mul
    u = []
    for a in range(A.size):
        cands = [p for p in I.elements if mul[p][a] == a]
        top = A.poset.greatest(cands)
        if top is None:
            maximal = A.poset.maximal(cands)
            raise NotBalancedOverI(
                f"no largest p in I with p*{A.label(a)} = {A.label(a)}"
                f" (maximal candidates {[A.label(c) for c in maximal]})",
                witness=(("a", a), ("candidates", tuple(maximal))))
        u.append(top)
    fibers = {p: tuple(a for a in range(A.size) if u[a] == p) for p in I.elements}
    return Fibration(I, tuple(u), fibers)


def is_balanced_over(A: ResiduatedStructure, I: IndexSemilattice) -> bool:
    try:
        compute_u(A, I)
    except NotBalancedOverI:
        return False
    return True


def steady_reports(A: ResiduatedStructure, u: Sequence[int]) -> dict[str, PropertyReport]:
    n, mul, ld, rd = A.size, A.mul, A.ld, A.rd
    out = {}
    for name, value in (("St1", lambda a, b: mul[a][b]),
                        ("St2", lambda a, b: rd[a][b]),
                        ("St3", lambda a, b: ld[b][a])):
        verdict = holds(name)
        for a in range(n):
            for b in range(n):
                if u[value(a, b)] != mul[u[a]][u[b]]:
                    verdict = fails(name, [("a", a), ("b", b)])
                    break
            if not verdict:
                break
        out[name] = verdict
    return out


def check_steady_over(A: ResiduatedStructure, I: IndexSemilattice) -> dict[str, PropertyReport]:
    """Verdicts for St1-St3; raises NotBalancedOverI when ``u`` is undefined."""
    return steady_reports(A, compute_u(A, I).u)


def check_steady(A: ResiduatedStructure) -> PropertyReport:
    prof = profile(A)
    if prof.idp != prof.zidp:
        p = min(prof.idp - prof.zidp)
        return fails("steady", [("p", p)], "positive idempotent is not central")
    if not prof.zidp:
        return fails("steady", None, "no central positive idempotent")
    try:
        reports = check_steady_over(A, prof.zidp_join)
    except NotBalancedOverI as e:
        return fails("steady", e.witness, "not balanced")
    for r in reports.values():
        if not r:
            return fails("steady", r.witness, f"{r.property} fails")
    return holds("steady")


def is_steady_over(A: ResiduatedStructure, I: IndexSemilattice) -> bool:
    try:
        return all(check_steady_over(A, I).values())
    except NotBalancedOverI:
        return False


# equational classes


def _unit(A: ResiduatedStructure) -> int:
    if A.unit is None:
        raise MissingUnit(f"{A.name or 'structure'} has no declared unit")
    return A.unit


def check_integrally_closed(A: ResiduatedStructure) -> PropertyReport:
    one = _unit(A)
    left = next((x for x in range(A.size) if A.one_l(x) != one), None)
    right = next((x for x in range(A.size) if A.one_r(x) != one), None)
    if (left is None) != (right is None):
        raise InconsistencyError("x\\x = 1 and x/x = 1 disagree", witness=left if left is not None else right)
    if left is None:
        return holds("integrally-closed")
    return fails("integrally-closed", [("x", left)])


def check_integral(A: ResiduatedStructure) -> PropertyReport:
    one = _unit(A)
    for x in range(A.size):
        if not A.leq[x][one]:
            return fails("integral", [("x", x)])
    return holds("integral")


def check_square_decreasing(A: ResiduatedStructure) -> PropertyReport:
    for x in range(A.size):
        if not A.leq[A.mul[x][x]][x]:
            return fails("square-decreasing", [("x", x)])
    return holds("square-decreasing")


def check_idempotent(A: ResiduatedStructure) -> PropertyReport:
    for x in range(A.size):
        if A.mul[x][x] != x:
            return fails("idempotent", [("x", x)])
    return holds("idempotent")


def check_commutative(A: ResiduatedStructure) -> PropertyReport:
    for x in range(A.size):
        for y in range(A.size):
            if A.mul[x][y] != A.mul[y][x]:
                return fails("commutative", [("x", x), ("y", y)])
    return holds("commutative")


def check_involutive(A: ResiduatedStructure, strict: bool = False) -> PropertyReport:
    """``0/(x\\0) = (0/x)\\0`` for all x; with ``strict`` both sides must equal x."""
    if A.zero is None:
        raise PreconditionError(f"{A.name or 'structure'} has no zero constant")
    z = A.zero
    for x in range(A.size):
        lhs = A.rd[z][A.ld[x][z]]
        rhs = A.ld[A.rd[z][x]][z]
        if lhs != rhs or (strict and lhs != x):
            return fails("involutive", [("x", x)])
    return holds("involutive")


def idemcomm_conditions(A: ResiduatedStructure) -> dict[str, bool]:
    n, mul = A.size, A.mul
    return {
        "central": all(mul[A.one_r(x)][y] == mul[y][A.one_r(x)] for x in range(n) for y in range(n)),
        "balanced-identity": all(A.one_l(x) == A.one_r(x) for x in range(n)),
        "commutative": bool(check_commutative(A)),
    }


def check_idempotent_commutative_equivalence(A: ResiduatedStructure) -> PropertyReport:
    """For idempotent structures: 1_x central, x\\x = x/x and commutativity agree,
    and when they hold so does condition (H)."""
    idem = check_idempotent(A)
    if not idem:
        raise PreconditionError("structure is not idempotent", witness=idem.witness)
    conds = idemcomm_conditions(A)
    h = all(check_condition_H(A).values())
    detail = ", ".join(f"{k}={v}" for k, v in conds.items()) + f", H={h}"
    agree = len(set(conds.values())) == 1
    if agree and (not conds["commutative"] or h):
        return holds("idemcomm", detail)
    return fails("idemcomm", [("verdicts", tuple(sorted(conds.items())))], detail)


def check_brouwerian(A: ResiduatedStructure) -> PropertyReport:
    """Idempotent with all self-residuals equal: multiplication is the order
    meet and the common self-residual is identity and top."""
    n, mul = A.size, A.mul
    if not check_idempotent(A):
        raise PreconditionError("structure is not idempotent")
    e = A.one_l(0)
    if any(A.one_l(x) != e or A.one_r(x) != e for x in range(n)):
        raise PreconditionError("self-residuals are not all equal")
    for x in range(n):
        for y in range(n):
            if A.poset.meet(x, y) != mul[x][y]:
                return fails("brouwerian", [("x", x), ("y", y)], "product is not the meet")
    if A.poset.top() != e:
        return fails("brouwerian", [("x", e)], "self-residual is not the top")
    if any(mul[e][x] != x for x in range(n)):
        return fails("brouwerian", [("x", e)], "self-residual is not the identity")
    if A.unit is not None and A.unit != e:
        return fails("brouwerian", [("x", A.unit)], "declared unit is not the top")
    return holds("brouwerian")


def check_idp_closed(A: ResiduatedStructure) -> PropertyReport:
    """Whether products of positive idempotents are positive idempotents."""
    idp = sorted(positive_idempotents(A))
    for p in idp:
        for q in idp:
            if A.mul[p][q] not in idp:
                return fails("idp-closed", [("p", p), ("q", q), ("pq", A.mul[p][q])])
    return holds("idp-closed")
