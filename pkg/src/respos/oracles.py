"""Brute-force checks of the structure theory over the enumerated pool.

Each suite maps a structure to a list of counterexample strings, or to None
when the statement's hypotheses do not apply to that structure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .errors import InconsistencyError, NotBalancedOverI, SemanticError
from .enumeration import pool
from .idempotents import (central_positive_idempotents, check_balanced, check_brouwerian,
                          check_condition_H, check_idempotent, check_idempotent_commutative_equivalence,
                          check_self_residuals_positive, compute_u, index_semilattice,
                          positive_idempotents, sets_of_p, steady_reports)
from .residuated import ResiduatedStructure, find_global_identity
from .structure import fibrant_report, subsemilattices


def _name(A: ResiduatedStructure) -> str:
    rows = ";".join("".join(str(v) for v in row) for row in A.mul)
    order = ";".join("".join("1" if v else "0" for v in row) for row in A.leq)
    return f"size {A.size} order [{order}] mul [{rows}]"


def _indexes(A: ResiduatedStructure):
    """Subsemilattices of the central positive idempotents over which u is defined."""
    for sub in subsemilattices(A, central_positive_idempotents(A)):
        I = index_semilattice(A, sub, check=False)
        try:
            fib = compute_u(A, I)
        except NotBalancedOverI:
            continue
        yield sub, I, fib


def _central_ones(A: ResiduatedStructure) -> bool:
    n, mul = A.size, A.mul
    return all(mul[A.one_r(x)][y] == mul[y][A.one_r(x)] for x in range(n) for y in range(n))


# suites


def suite_sets_of_p(A):
    out = []
    for p in sorted(positive_idempotents(A)):
        try:
            sets_of_p(A, p)
        except InconsistencyError as e:
            out.append(str(e))
    return out


def suite_interdefinability(A):
    n, mul, ld, rd, leq = A.size, A.mul, A.ld, A.rd, A.leq
    idp = sorted(positive_idempotents(A))
    sub = {q: {a for a in range(n) if ld[a][a] == q} for q in idp}
    lsub = {q: {a for a in range(n) if rd[a][a] == q} for q in idp}
    out = []
    for p in idp:
        A_rd_p = {rd[a][p] for a in range(n)}
        p_ld_A = {ld[p][a] for a in range(n)}
        up = [q for q in idp if leq[p][q]]
        strict = [q for q in up if q != p]
        checks = [
            (A_rd_p == set().union(*(sub[q] for q in up)), "A/p is the union of A_q over q >= p"),
            (sub[p] == A_rd_p - set().union(*(sub[q] for q in strict)), "A_p is A/p minus the A_q above p"),
            (p_ld_A == set().union(*(lsub[q] for q in up)), "p\\A is the union of qA over q >= p"),
            (lsub[p] == p_ld_A - set().union(*(lsub[q] for q in strict)), "pA is p\\A minus the qA above p"),
        ]
        out.extend(f"p={A.label(p)}: {msg}" for ok, msg in checks if not ok)
    return out


def central_conditions(A, p) -> dict[str, bool]:
    n, mul, ld, rd = A.size, A.mul, A.ld, A.rd
    return {
        "1": all(mul[p][a] == mul[a][p] for a in range(n)),
        "2": all((mul[p][a] == a) == (mul[a][p] == a) for a in range(n)),
        "3": all((ld[p][a] == a) == (rd[a][p] == a) for a in range(n)),
        "4": all(ld[p][a] == rd[a][p] for a in range(n)),
        "5": {ld[p][a] for a in range(n)} == {rd[a][p] for a in range(n)},
    }


def suite_central_idempotents(A):
    out = []
    n = A.size
    idp = sorted(positive_idempotents(A))
    for p in idp:
        conds = central_conditions(A, p)
        if len(set(conds.values())) != 1:
            out.append(f"p={A.label(p)}: centrality conditions disagree {conds}")
    # the corollary pairing all-central with equality of the left and right classes
    all_central = positive_idempotents(A) == central_positive_idempotents(A)
    classes_agree = all({a for a in range(n) if A.rd[a][a] == p} == {a for a in range(n) if A.ld[a][a] == p}
                        for p in idp)
    if all_central != classes_agree:
        out.append(f"Idp = ZIdp is {all_central} but class equality is {classes_agree}")
    return out


def suite_self_residuals(A):
    try:
        check_self_residuals_positive(A)
    except InconsistencyError as e:
        return [str(e)]
    return []


def suite_balanced(A):
    try:
        check_balanced(A)
    except InconsistencyError as e:
        return [str(e)]
    return []


def suite_central_inequalities(A):
    if not _central_ones(A):
        return None
    n, mul, ld, rd, leq = A.size, A.mul, A.ld, A.rd, A.leq
    one = A.one_r
    out = []
    for x in range(n):
        for y in range(n):
            ox, oy = one(x), one(y)
            both = mul[ox][oy]
            for target, tname in ((mul[x][y], "xy"), (rd[x][y], "x/y"), (ld[y][x], "y\\x")):
                ot = one(target)
                for lhs, lname in ((ox, "1_x"), (oy, "1_y"), (both, "1_x 1_y")):
                    if not leq[lhs][ot]:
                        out.append(f"x={A.label(x)}, y={A.label(y)}: {lname} <= 1_{tname} fails")
    return out


def suite_H_dependencies(A):
    if not _central_ones(A):
        return None
    H = {k: bool(v) for k, v in check_condition_H(A).items()}
    same = all(A.one_l(x) == A.one_r(x) for x in range(A.size))
    out = []
    if H["H2"] != H["H3"]:
        out.append(f"H2={H['H2']} but H3={H['H3']}")
    if (H["H2"] or H["H3"]) and not same:
        out.append("H2 or H3 holds but x\\x = x/x fails")
    if H["H2"] and not H["H1"]:
        out.append("H2 holds but H1 fails")
    return out


def suite_steadiness_implications(A):
    out = []
    seen = False
    for sub, I, fib in _indexes(A):
        seen = True
        st = {k: bool(v) for k, v in steady_reports(A, fib.u).items()}
        if (st["St2"] or st["St3"]) and not st["St1"]:
            out.append(f"I={[A.label(p) for p in sub]}: {st}")
    return out if seen else None


def suite_u_properties(A):
    n, mul, ld, rd, leq = A.size, A.mul, A.ld, A.rd, A.leq
    out = []
    unit = find_global_identity(A)
    seen = False
    for sub, I, fib in _indexes(A):
        seen = True
        u = fib.u
        tag = f"I={[A.label(p) for p in sub]}"
        for a in range(n):
            if ld[u[a]][a] != a or rd[a][u[a]] != a:
                out.append(f"{tag}: u_a\\a = a = a/u_a fails at a={A.label(a)}")
            for b in range(n):
                for t in (mul[a][b], rd[a][b], ld[b][a]):
                    if not (leq[u[a]][u[t]] and leq[u[b]][u[t]]):
                        out.append(f"{tag}: u monotonicity fails at a={A.label(a)}, b={A.label(b)}")
        for p in sub:
            if u[p] != p:
                out.append(f"{tag}: u_p != p at p={A.label(p)}")
        if unit is not None and (unit not in sub or I.least() != I.position(unit)):
            out.append(f"{tag}: identity is not the least index")
    return out if seen else None


def suite_residual_bands_trivial(A):
    n, rd = A.size, A.rd
    out = []
    seen = False
    for sub, I, fib in _indexes(A):
        seen = True
        u = fib.u
        eq = all(rd[rd[u[a]][u[a]]][u[b]] == rd[rd[u[a]][u[b]]][rd[u[a]][u[b]]]
                 for a in range(n) for b in range(n))
        if eq != (len(sub) == 1):
            out.append(f"I={[A.label(p) for p in sub]}: equation {eq} with |I|={len(sub)}")
    return out if seen else None


def suite_fibrant_steady(A):
    out = []
    seen = False
    for sub, I, fib in _indexes(A):
        seen = True
        fibrant = bool(fibrant_report(A, I))
        steady = all(steady_reports(A, fib.u).values())
        if fibrant != steady:
            out.append(f"I={[A.label(p) for p in sub]}: fibrant={fibrant}, steady={steady}")
    return out if seen else None


def suite_idemcomm(A):
    if not check_idempotent(A):
        return None
    r = check_idempotent_commutative_equivalence(A)
    return [] if r else [r.detail]


def suite_identity_top(A):
    if not check_idempotent(A):
        return None
    n, mul, rd, leq = A.size, A.mul, A.rd, A.leq
    out = [f"x = (x/x)x fails at x={A.label(x)}" for x in range(n) if mul[rd[x][x]][x] != x]
    if len({rd[x][x] for x in range(n)}) == 1:
        e = rd[0][0]
        out += [f"y = (x/x)y or y <= x/x fails at y={A.label(y)}"
                for y in range(n) if mul[e][y] != y or not leq[y][e]]
    return out


def suite_brouwerian(A):
    if not check_idempotent(A):
        return None
    if len({A.one_l(x) for x in range(A.size)} | {A.one_r(x) for x in range(A.size)}) != 1:
        return None
    r = check_brouwerian(A)
    return [] if r else [r.describe(A.labels)]


def suite_meet_preservation(A):
    if not (A.poset.is_lattice() and check_idempotent(A) and all(
            A.mul[x][y] == A.mul[y][x] for x in range(A.size) for y in range(A.size))):
        return None
    n, mul, leq, meet = A.size, A.mul, A.leq, A.poset.meet
    one = A.one_r
    out = []
    for x in range(n):
        for y in range(n):
            if one(x) != one(y):
                continue
            for z in range(n):
                oz = one(z)
                if leq[one(x)][oz] and mul[meet(x, y)][oz] != meet(mul[x][oz], mul[y][oz]):
                    out.append(f"x={A.label(x)}, y={A.label(y)}, z={A.label(z)}")
    return out


SUITES: dict[str, Callable[[ResiduatedStructure], list[str] | None]] = {
    "sets-of-p": suite_sets_of_p,
    "interdefinability": suite_interdefinability,
    "central-idempotents": suite_central_idempotents,
    "self-residuals": suite_self_residuals,
    "balanced": suite_balanced,
    "central-inequalities": suite_central_inequalities,
    "H-dependencies": suite_H_dependencies,
    "steadiness-implications": suite_steadiness_implications,
    "u-properties": suite_u_properties,
    "residual-bands-trivial": suite_residual_bands_trivial,
    "fibrant-steady": suite_fibrant_steady,
    "idemcomm": suite_idemcomm,
    "identity-top": suite_identity_top,
    "brouwerian": suite_brouwerian,
    "meet-preservation": suite_meet_preservation,
}


@dataclass
class OracleResult:
    suite: str
    size: int
    checked: int = 0
    relevant: int = 0
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"suite": self.suite, "size": self.size, "checked": self.checked,
                "relevant": self.relevant, "counterexamples": self.counterexamples,
                "seconds": round(self.seconds, 3)}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str, size: int, structures=None) -> list[OracleResult]:
    """Run one suite (or ``all``) over every structure of size up to ``size``."""
    names = suite_names() if name == "all" else [name]
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise SemanticError(f"unknown suite {unknown[0]!r}; known: {suite_names()} or 'all'")
    members = pool(size) if structures is None else structures
    results = []
    for s in names:
        start = time.perf_counter()
        res = OracleResult(s, size)
        for A in members:
            res.checked += 1
            found = SUITES[s](A)
            if found is None:
                continue
            res.relevant += 1
            for msg in found:
                res.counterexamples.append(f"{_name(A)}: {msg}")
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
