"""Directed systems of metamorphisms and their generalized Płonka sums."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .algebra import FiniteAlgebra, Signature, _lookup
from .bands import (LeftNormalBand, MapSystem, PartitionSystemAssignment, check_partition_system,
                    replica)
from .errors import (InconsistencyError, InvalidSystem, MissingEdge, NoLeastIndex, SemanticError)
from .poset import FinitePoset, JoinSemilattice, validate_poset
from .report import PropertyReport, combine, fails, holds
from .residuated import LD, MUL, ONE, RD, ZERO, ResiduatedStructure, check_residuation

LocalMap = tuple[int, ...]


def _identity(n: int) -> LocalMap:
    return tuple(range(n))


@dataclass(frozen=True)
class Metamorphism:
    """Per symbol an ``arity+1`` tuple of maps; ``order`` is the pair (ψ, φ)."""

    maps: Mapping[str, tuple[LocalMap, ...]]
    order: tuple[LocalMap, LocalMap] | None = None

    @classmethod
    def identity(cls, A) -> "Metamorphism":
        alg = A.as_algebra()
        ident = _identity(alg.size)
        maps = {s: tuple(ident for _ in range(k + 1)) for s, k in alg.signature.symbols}
        return cls(maps, (ident, ident) if alg.poset is not None else None)

    def is_identity(self, n: int) -> bool:
        ident = _identity(n)
        comps = [m for ms in self.maps.values() for m in ms]
        if self.order is not None:
            comps += list(self.order)
        return all(tuple(m) == ident for m in comps)


def _compose(f: LocalMap, g: LocalMap) -> LocalMap:
    """``g ∘ f``"""
    return tuple(g[x] for x in f)


@dataclass(frozen=True, eq=False)
class DirectedMetamorphismSystem:
    index: JoinSemilattice
    fibers: tuple
    edges: Mapping[tuple[int, int], Metamorphism]

    def __post_init__(self):
        idx = self.index
        if len(self.fibers) != idx.size:
            raise SemanticError(f"{len(self.fibers)} fibers for {idx.size} indices")
        edges = dict(self.edges)
        for (p, q) in edges:
            if not (0 <= p < idx.size and 0 <= q < idx.size) or not idx.leq(p, q):
                raise SemanticError(f"edge {p}->{q} joins incomparable indices", witness=(p, q))
        for p in range(idx.size):
            edges.setdefault((p, p), Metamorphism.identity(self.fibers[p]))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "fibers", tuple(self.fibers))

    @property
    def signature(self) -> Signature:
        return self.fibers[0].as_algebra().signature

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for f in self.fibers:
            out.append(acc)
            acc += f.as_algebra().size
        return out

    def embedding(self) -> tuple[tuple[int, int], ...]:
        return tuple((p, k) for p, f in enumerate(self.fibers) for k in range(f.as_algebra().size))

    def edge(self, p: int, q: int) -> Metamorphism:
        try:
            return self.edges[(p, q)]
        except KeyError:
            raise MissingEdge(f"no metamorphism for {p} <= {q}", witness=(p, q))


def validate_system(S: DirectedMetamorphismSystem) -> PropertyReport:
    """Functor laws, metamorphism equations and monotonicity of the order maps.

    Raises MissingEdge when a comparable pair has no metamorphism.
    """
    idx = S.index
    algs = [f.as_algebra() for f in S.fibers]
    sig = algs[0].signature
    for p, alg in enumerate(algs):
        if alg.signature != sig:
            return fails("system", [("p", p)], "fibers have different signatures")
    for p, q in idx.comparable_pairs():
        S.edge(p, q)
    for p in range(idx.size):
        if not S.edges[(p, p)].is_identity(algs[p].size):
            return fails("system", [("p", p), ("q", p)], "self edge is not the identity")
    # shapes
    for (p, q), xi in S.edges.items():
        for s, k in sig.symbols:
            comps = xi.maps.get(s)
            if comps is None or len(comps) != k + 1:
                return fails("system", [("p", p), ("q", q), ("symbol", s)], "wrong number of maps")
            for m in comps:
                if len(m) != algs[p].size or any(not 0 <= v < algs[q].size for v in m):
                    return fails("system", [("p", p), ("q", q), ("symbol", s)], "map is not total")
        if algs[p].poset is not None:
            if xi.order is None:
                return fails("system", [("p", p), ("q", q), ("symbol", "<=")], "order maps missing")
            for m in xi.order:
                if len(m) != algs[p].size or any(not 0 <= v < algs[q].size for v in m):
                    return fails("system", [("p", p), ("q", q), ("symbol", "<=")], "map is not total")
    # composition
    for p, q in idx.comparable_pairs():
        for r in range(idx.size):
            if not idx.leq(q, r):
                continue
            a, b, c = S.edges[(p, q)], S.edges[(q, r)], S.edges[(p, r)]
            pairs = [(s, i, a.maps[s][i], b.maps[s][i], c.maps[s][i])
                     for s, k in sig.symbols for i in range(k + 1)]
            if a.order is not None:
                pairs += [("<=", i, a.order[i], b.order[i], c.order[i]) for i in range(2)]
            for s, i, f, g, h in pairs:
                if _compose(f, g) != tuple(h):
                    x = next(x for x in range(len(f)) if g[f[x]] != h[x])
                    return fails("system", [("p", p), ("q", q), ("r", r), ("symbol", s),
                                            ("component", i), ("a", x)], "composition law fails")
    # metamorphism equations and monotonicity
    for (p, q), xi in sorted(S.edges.items()):
        if p == q:
            continue
        src, tgt = algs[p], algs[q]
        for s, k in sig.symbols:
            comps = xi.maps[s]
            if k == 0:
                if comps[0][src.tables[s]] != tgt.tables[s]:
                    return fails("system", [("p", p), ("q", q), ("symbol", s)], "constant not preserved")
                continue
            for args in itertools.product(range(src.size), repeat=k):
                lhs = comps[0][_lookup(src.tables[s], args)]
                rhs = _lookup(tgt.tables[s], [comps[i + 1][x] for i, x in enumerate(args)])
                if lhs != rhs:
                    return fails("system", [("p", p), ("q", q), ("symbol", s)]
                                 + [(f"a{i + 1}", x) for i, x in enumerate(args)],
                                 "metamorphism equation fails")
        if xi.order is not None:
            for i, m in enumerate(xi.order):
                if not src.poset.is_monotone(m, tgt.poset):
                    return fails("system", [("p", p), ("q", q), ("symbol", "<="), ("component", i)],
                                 "order map is not monotone")
    return holds("system")


def _order_maps(S: DirectedMetamorphismSystem):
    psi = {e: xi.order[0] for e, xi in S.edges.items()}
    phi = {e: xi.order[1] for e, xi in S.edges.items()}
    return psi, phi


def check_S1_S2(S: DirectedMetamorphismSystem) -> dict[str, PropertyReport]:
    idx = S.index
    posets = [f.as_algebra().poset for f in S.fibers]
    psi, phi = _order_maps(S)
    out = {"S1": holds("S1"), "S2": holds("S2")}
    k = idx.size
    for p in range(k):
        for q in range(k):
            if not idx.lt(p, q):
                continue
            for r in range(k):
                if not idx.lt(p, r):
                    continue
                t = idx.join(q, r)
                for a in range(posets[p].size):
                    lhs = phi[(q, t)][psi[(p, q)][a]]
                    rhs = psi[(r, t)][phi[(p, r)][a]]
                    if not posets[t].leq[lhs][rhs]:
                        out["S1"] = fails("S1", [("p", p), ("q", q), ("r", r), ("a", a)])
                        break
                if not out["S1"]:
                    break
            if not out["S1"]:
                break
        if not out["S1"]:
            break
    for p, q in idx.comparable_pairs():
        if p == q:
            continue
        P, Q = posets[p], posets[q]
        f, g = phi[(p, q)], psi[(p, q)]
        for a in range(P.size):
            for b in range(P.size):
                if Q.leq[f[a]][g[b]] and not P.lt(a, b):
                    out["S2"] = fails("S2", [("p", p), ("q", q), ("a", a), ("b", b)])
                    break
            if not out["S2"]:
                break
        if not out["S2"]:
            break
    return out


def check_S3_S5(S: DirectedMetamorphismSystem) -> dict[str, PropertyReport]:
    """The consequences of S1 and S2 that the order-sum argument actually uses."""
    idx = S.index
    posets = [f.as_algebra().poset for f in S.fibers]
    psi, phi = _order_maps(S)
    out = {"S3": holds("S3"), "S4": holds("S4"), "S5": holds("S5")}
    k = idx.size
    for p, q in idx.comparable_pairs():
        for r in range(k):
            if not idx.leq(p, r):
                continue
            t = idx.join(q, r)
            for a in range(posets[p].size):
                if out["S3"] and not posets[t].leq[phi[(q, t)][psi[(p, q)][a]]][psi[(r, t)][phi[(p, r)][a]]]:
                    out["S3"] = fails("S3", [("p", p), ("q", q), ("r", r), ("a", a)])
    for p, q in idx.comparable_pairs():
        for a in range(posets[p].size):
            x, y = psi[(p, q)][a], phi[(p, q)][a]
            if out["S4"] and not posets[q].leq[x][y]:
                out["S4"] = fails("S4", [("p", p), ("q", q), ("a", a)])
            if out["S5"] and p != q and not posets[q].lt(x, y):
                out["S5"] = fails("S5", [("p", p), ("q", q), ("a", a)])
    return out


@dataclass(frozen=True)
class OrderSum:
    leq: tuple[tuple[bool, ...], ...]
    report: PropertyReport
    poset: FinitePoset | None


def sum_order(S: DirectedMetamorphismSystem, labels: Sequence[str] | None = None) -> OrderSum:
    """``a <= b`` iff ``φ_ps(a) <=_s ψ_qs(b)`` with ``s = p∨q``.

    The relation is materialized even when it is not a partial order, so that
    the failing axiom can be reported.
    """
    idx = S.index
    posets = [f.as_algebra().poset for f in S.fibers]
    psi, phi = _order_maps(S)
    emb = S.embedding()
    n = len(emb)
    leq = []
    for (p, a) in emb:
        row = []
        for (q, b) in emb:
            s = idx.join(p, q)
            row.append(posets[s].leq[phi[(p, s)][a]][psi[(q, s)][b]])
        leq.append(tuple(row))
    leq = tuple(leq)
    report = validate_poset(leq)
    if report:
        for i, (p, a) in enumerate(emb):
            for j, (q, b) in enumerate(emb):
                if p == q and leq[i][j] != posets[p].leq[a][b]:
                    report = fails("poset", [("axiom", "extends fibers"), ("x", i), ("y", j)])
                    break
            if not report:
                break
    poset = FinitePoset(n, leq, tuple(labels) if labels else None) if report else None
    return OrderSum(leq, report, poset)


@dataclass(frozen=True)
class SumResult:
    algebra: Any
    embedding: tuple[tuple[int, int], ...]
    diagnostics: Mapping[str, PropertyReport]

    def global_index(self, p: int, k: int) -> int:
        return self.embedding.index((p, k))


def _sum_tables(S: DirectedMetamorphismSystem, drop_constants: bool):
    idx = S.index
    algs = [f.as_algebra() for f in S.fibers]
    sig = algs[0].signature
    emb = S.embedding()
    offs = S.offsets()
    n = len(emb)
    tables = {}
    symbols = []
    least = idx.least()
    for s, k in sig.symbols:
        if k == 0:
            if least is None:
                if drop_constants:
                    continue
                raise NoLeastIndex(f"constant {s!r} needs a least index")
            tables[s] = offs[least] + algs[least].tables[s]
            symbols.append((s, 0))
            continue
        symbols.append((s, k))

        def value(args, s=s, k=k):
            ps = [emb[g][0] for g in args]
            q = idx.join_all(ps)
            local = [S.edges[(ps[i], q)].maps[s][i + 1][emb[g][1]] for i, g in enumerate(args)]
            return offs[q] + _lookup(algs[q].tables[s], local)

        if k == 1:
            tables[s] = tuple(value((a,)) for a in range(n))
        elif k == 2:
            tables[s] = tuple(tuple(value((a, b)) for b in range(n)) for a in range(n))
        else:
            def build(prefix):
                if len(prefix) == k:
                    return value(prefix)
                return tuple(build(prefix + (a,)) for a in range(n))
            tables[s] = build(())
    return Signature(tuple(symbols)), tables


def plonka_sum(S: DirectedMetamorphismSystem, drop_constants: bool = False,
               labels: Sequence[str] | None = None) -> SumResult:
    """The sum algebra on the index-major disjoint union of the fibers.

    Constants need a least index; without one ``NoLeastIndex`` is raised unless
    ``drop_constants`` asks for the constant-free reduct.
    """
    v = validate_system(S)
    if not v:
        raise InvalidSystem(f"system does not validate: {v.describe()}", witness=v.witness)
    sig, tables = _sum_tables(S, drop_constants)
    diagnostics: dict[str, PropertyReport] = {"system": v}
    poset = None
    if S.fibers[0].as_algebra().poset is not None:
        diagnostics.update(check_S1_S2(S))
        order = sum_order(S, labels)
        diagnostics["order"] = order.report
        poset = order.poset
    alg = FiniteAlgebra(len(S.embedding()), sig, tables, poset, tuple(labels) if labels else None)
    return SumResult(alg, S.embedding(), diagnostics)


def sum_of_homomorphism_system(maps: Mapping[tuple[int, int], LocalMap], fibers: Sequence,
                               index: JoinSemilattice, drop_constants: bool = False) -> SumResult:
    """Classical Płonka sum: every component of every metamorphism is the same map."""
    sig = fibers[0].as_algebra().signature
    edges = {}
    for (p, q), m in maps.items():
        m = tuple(m)
        ordered = fibers[p].as_algebra().poset is not None
        edges[(p, q)] = Metamorphism({s: tuple(m for _ in range(k + 1)) for s, k in sig.symbols},
                                     (m, m) if ordered else None)
    S = DirectedMetamorphismSystem(index, tuple(fibers), edges)
    v = validate_system(S)
    if not v:
        raise InvalidSystem(f"lifted system does not validate: {v.describe()}", witness=v.witness)
    return plonka_sum(S, drop_constants)


# partition systems <-> directed systems


def partition_system_of(S: DirectedMetamorphismSystem, drop_constants: bool = False):
    """Bands ``a ⊙^σ_i b := ξ^{σi}_ps(a)`` on the sum, pooled without duplicates.

    Returns ``(sum_result, assignment)``.
    """
    result = plonka_sum(S, drop_constants)
    idx = S.index
    emb = result.embedding
    offs = S.offsets()
    n = len(emb)

    def band_of(get_map) -> LeftNormalBand:
        op = []
        for (p, a) in emb:
            row = []
            for (q, _) in emb:
                s = idx.join(p, q)
                row.append(offs[s] + get_map(S.edges[(p, s)])[a])
            op.append(tuple(row))
        return LeftNormalBand(n, tuple(op))

    pool: list[LeftNormalBand] = []

    def intern(band: LeftNormalBand) -> int:
        for i, b in enumerate(pool):
            if b.op == band.op:
                return i
        pool.append(band)
        return len(pool) - 1

    wiring = {}
    for s, k in result.algebra.signature.symbols:
        wiring[s] = tuple(intern(band_of(lambda xi, s=s, i=i: xi.maps[s][i])) for i in range(k + 1))
    order = None
    if result.algebra.poset is not None:
        order = (intern(band_of(lambda xi: xi.order[0])), intern(band_of(lambda xi: xi.order[1])))
    if not pool:
        raise SemanticError("a system without operations induces no bands")
    return result, PartitionSystemAssignment(tuple(pool), wiring, order)


def system_of_partition_system(A, assignment: PartitionSystemAssignment) -> tuple[DirectedMetamorphismSystem, tuple[tuple[int, ...], ...]]:
    """Blocks of the (homotactic) bands become fibers, ``ξ^{σi}_pq(a) := a ⊙^σ_i q``.

    Returns the system and the block membership (``members[p][k]`` is the
    element of ``A`` acting as local element ``k`` of fiber ``p``).
    """
    report = check_partition_system(A, assignment)
    bad = [r for r in report.values() if not r]
    if bad:
        raise InvalidSystem(f"not a partition system: {bad[0].describe()}", witness=bad[0].witness)
    alg = A.as_algebra()
    rep = replica(assignment.bands[0])
    members = rep.classes
    reps = rep.representatives
    pos = {g: k for cls in members for k, g in enumerate(cls)}
    fibers = []
    least = rep.join.least()
    for p, cls in enumerate(members):
        tables = {}
        for s, k in alg.signature.symbols:
            if k == 0:
                # constants live in the least block and are moved along ⊙^ω
                band = assignment.bands[assignment.wiring[s][0]]
                tables[s] = pos[band.op[alg.tables[s]][reps[p]]]
                continue

            def build(prefix, s=s, k=k):
                if len(prefix) == k:
                    return pos[_lookup(alg.tables[s], [cls[i] for i in prefix])]
                return tuple(build(prefix + (a,)) for a in range(len(cls)))
            tables[s] = build(())
        poset = alg.poset.restrict(cls) if alg.poset is not None else None
        fibers.append(FiniteAlgebra(len(cls), alg.signature, tables, poset))
    edges = {}
    for p, q in rep.join.comparable_pairs():
        maps = {}
        for s, k in alg.signature.symbols:
            maps[s] = tuple(tuple(pos[assignment.bands[b].op[a][reps[q]]] for a in members[p])
                            for b in assignment.wiring[s])
        order = None
        if assignment.order is not None:
            order = tuple(tuple(pos[assignment.bands[b].op[a][reps[q]]] for a in members[p])
                          for b in assignment.order)
        edges[(p, q)] = Metamorphism(maps, order)
    return DirectedMetamorphismSystem(rep.join, tuple(fibers), edges), members


# the residuated specialization


RESIDUATED_COMPONENTS = {MUL: ("phi", "phi", "phi"), LD: ("psi", "phi", "psi"),
                         RD: ("psi", "psi", "phi"), ONE: ("phi",), ZERO: ("phi",)}


@dataclass(frozen=True, eq=False)
class ResiduatedSystem:
    """Fibers are residuated monoids; each edge carries two maps φ and ψ.

    ``index.elements`` names the indices (labels or element ids);
    ``phi``/``psi`` are keyed by index positions. Identity edges are filled in.
    """

    index: JoinSemilattice
    fibers: tuple[ResiduatedStructure, ...]
    phi: Mapping[tuple[int, int], LocalMap]
    psi: Mapping[tuple[int, int], LocalMap]
    name: str | None = None

    def __post_init__(self):
        phi, psi = dict(self.phi), dict(self.psi)
        for p, f in enumerate(self.fibers):
            phi.setdefault((p, p), _identity(f.size))
            psi.setdefault((p, p), _identity(f.size))
        for (p, q) in list(phi) + list(psi):
            if not self.index.leq(p, q):
                raise SemanticError(f"edge {p}->{q} joins incomparable indices", witness=(p, q))
        object.__setattr__(self, "phi", {k: tuple(v) for k, v in phi.items()})
        object.__setattr__(self, "psi", {k: tuple(v) for k, v in psi.items()})
        object.__setattr__(self, "fibers", tuple(self.fibers))

    def to_metamorphism_system(self) -> DirectedMetamorphismSystem:
        sig = self.fibers[0].signature
        edges = {}
        for (p, q) in self.phi:
            if (p, q) not in self.psi:
                raise MissingEdge(f"ψ missing for {p}->{q}", witness=(p, q))
            fam = {"phi": self.phi[(p, q)], "psi": self.psi[(p, q)]}
            maps = {s: tuple(fam[c] for c in RESIDUATED_COMPONENTS[s]) for s, _ in sig.symbols}
            edges[(p, q)] = Metamorphism(maps, (fam["psi"], fam["phi"]))
        for (p, q) in self.psi:
            if (p, q) not in self.phi:
                raise MissingEdge(f"φ missing for {p}->{q}", witness=(p, q))
        return DirectedMetamorphismSystem(self.index, self.fibers, edges)

    def sum_labels(self) -> tuple[str, ...]:
        """Fiber labels when globally unique, else ``index:label``."""
        raw = [l for f in self.fibers for l in f.labels]
        if len(set(raw)) == len(raw):
            return tuple(raw)
        names = [str(e) for e in self.index.elements]
        return tuple(f"{names[p]}:{l}" for p, f in enumerate(self.fibers) for l in f.labels)


def residuated_sum(S: ResiduatedSystem, drop_constants: bool = False) -> tuple[ResiduatedStructure, SumResult]:
    """Sum of a residuated system as a residuated structure (with its diagnostics)."""
    meta = S.to_metamorphism_system()
    labels = S.sum_labels()
    result = plonka_sum(meta, drop_constants, labels)
    alg = result.algebra
    diagnostics = dict(result.diagnostics)
    if alg.poset is None:
        raise InvalidSystem(f"sum order is not a partial order: {diagnostics['order'].describe()}",
                            witness=diagnostics["order"].witness)
    A = ResiduatedStructure(alg.poset, alg.tables[MUL], alg.tables[LD], alg.tables[RD],
                            alg.tables.get(ONE), alg.tables.get(ZERO), S.name)
    diagnostics["residuation"] = check_residuation(A)
    return A, SumResult(A, result.embedding, diagnostics)
