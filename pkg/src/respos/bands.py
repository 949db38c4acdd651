"""Left normal bands, their semilattice replicas, and partition functions,
systems and pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import FiniteAlgebra, _lookup
from .errors import InconsistencyError, SemanticError
from .poset import FinitePoset, JoinSemilattice
from .report import PropertyReport, combine, fails, holds

Op = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LeftNormalBand:
    size: int
    op: Op

    def __post_init__(self):
        op = tuple(tuple(int(v) for v in row) for row in self.op)
        if len(op) != self.size or any(len(r) != self.size for r in op):
            raise SemanticError("band table has the wrong shape")
        object.__setattr__(self, "op", op)

    @classmethod
    def of(cls, op) -> "LeftNormalBand":
        return cls(len(op), op)

    @classmethod
    def left_projection(cls, n: int) -> "LeftNormalBand":
        return cls(n, tuple(tuple(a for _ in range(n)) for a in range(n)))

    def __call__(self, a: int, b: int) -> int:
        return self.op[a][b]

    def below(self, a: int, b: int) -> bool:
        """``a ⊑ b`` iff ``b⊙a = b``"""
        return self.op[b][a] == b

    def relation(self) -> tuple[tuple[bool, ...], ...]:
        n = self.size
        return tuple(tuple(self.op[b][a] == b for b in range(n)) for a in range(n))


def check_left_normal_band(op) -> dict[str, PropertyReport]:
    op = op.op if isinstance(op, LeftNormalBand) else op
    n = len(op)
    out = {"PF1": holds("PF1"), "PF2": holds("PF2"), "PF3": holds("PF3")}
    for a in range(n):
        if op[a][a] != a:
            out["PF1"] = fails("PF1", [("a", a)])
            break
    for a, b, c in itertools.product(range(n), repeat=3):
        if out["PF2"] and op[a][op[b][c]] != op[op[a][b]][c]:
            out["PF2"] = fails("PF2", [("a", a), ("b", b), ("c", c)])
        if out["PF3"] and op[a][op[b][c]] != op[a][op[c][b]]:
            out["PF3"] = fails("PF3", [("a", a), ("b", b), ("c", c)])
        if not out["PF2"] and not out["PF3"]:
            break
    return out


def is_left_normal_band(op) -> bool:
    return all(check_left_normal_band(op).values())


@dataclass(frozen=True)
class SemilatticeReplica:
    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    join: JoinSemilattice
    block_of: tuple[int, ...]
    preorder: tuple[tuple[bool, ...], ...]

    def block_leq(self, i: int, j: int) -> bool:
        return self.join.leq(i, j)


def replica(band: LeftNormalBand) -> SemilatticeReplica:
    """Quotient of a left normal band by mutual ⊑; blocks are listed by their
    least element, which is also the representative."""
    if not is_left_normal_band(band):
        raise SemanticError("not a left normal band")
    n = band.size
    rel = band.relation()
    block_of = [-1] * n
    classes: list[list[int]] = []
    for a in range(n):
        if block_of[a] >= 0:
            continue
        cls = [b for b in range(n) if rel[a][b] and rel[b][a]]
        for b in cls:
            block_of[b] = len(classes)
        classes.append(cls)
    reps = tuple(c[0] for c in classes)
    k = len(classes)
    join = JoinSemilattice(reps, tuple(tuple(block_of[band.op[reps[i]][reps[j]]] for j in range(k))
                                       for i in range(k)))
    # the quotient claims: preorder, congruence, join-semilattice matching ⊑
    for a, b, c in itertools.product(range(n), repeat=3):
        if rel[a][b] and rel[b][c] and not rel[a][c]:
            raise InconsistencyError("⊑ is not transitive", witness=(a, b, c))
    for a, a2, b, b2 in itertools.product(range(n), repeat=4):
        if block_of[a] == block_of[a2] and block_of[b] == block_of[b2] \
                and block_of[band.op[a][b]] != block_of[band.op[a2][b2]]:
            raise InconsistencyError("≡ is not a congruence", witness=(a, a2, b, b2))
    if not join.validate():
        raise InconsistencyError("replica is not a join-semilattice")
    for a in range(n):
        for b in range(n):
            if rel[a][b] != join.leq(block_of[a], block_of[b]):
                raise InconsistencyError("block order disagrees with ⊑", witness=(a, b))
    return SemilatticeReplica(tuple(map(tuple, classes)), reps, join, tuple(block_of), rel)


def homotactic(b1: LeftNormalBand, b2: LeftNormalBand) -> PropertyReport:
    if b1.size != b2.size:
        return fails("homotactic", None, "different universes")
    for a in range(b1.size):
        for b in range(b1.size):
            if b1.below(a, b) != b2.below(a, b):
                return fails("homotactic", [("a", a), ("b", b)])
    return holds("homotactic")


def _apply(A: FiniteAlgebra, symbol: str, args) -> int:
    return _lookup(A.tables[symbol], args)


def _fold(band: LeftNormalBand, b: int, args) -> int:
    for a in args:
        b = band.op[b][a]
    return b


def _pf4(A: FiniteAlgebra, symbol: str, arity: int, out_band, arg_bands, name: str) -> PropertyReport:
    n = A.size
    for args in itertools.product(range(n), repeat=arity):
        v = _apply(A, symbol, args)
        for b in range(n):
            moved = [arg_bands[i].op[args[i]][b] for i in range(arity)]
            if out_band.op[v][b] != _apply(A, symbol, moved):
                return fails(name, [(f"a{i + 1}", x) for i, x in enumerate(args)] + [("b", b)])
    return holds(name)


def _pf5(A: FiniteAlgebra, symbol: str, arity: int, band, name: str) -> PropertyReport:
    n = A.size
    if arity == 0:
        w = A.tables[symbol]
        for b in range(n):
            if band.op[b][w] != b:
                return fails(name, [("b", b)])
        return holds(name)
    for args in itertools.product(range(n), repeat=arity):
        v = _apply(A, symbol, args)
        for b in range(n):
            if band.op[b][v] != _fold(band, b, args):
                return fails(name, [(f"a{i + 1}", x) for i, x in enumerate(args)] + [("b", b)])
    return holds(name)


def check_partition_function(A, band: LeftNormalBand) -> dict[str, PropertyReport]:
    """PF1-PF3 for the band, then PF4/PF5 per operation and PF6 per constant."""
    alg = A.as_algebra()
    out = dict(check_left_normal_band(band))
    for symbol, arity in alg.signature.symbols:
        if arity == 0:
            out[f"PF6[{symbol}]"] = _pf5(alg, symbol, 0, band, f"PF6[{symbol}]")
        else:
            out[f"PF4[{symbol}]"] = _pf4(alg, symbol, arity, band, [band] * arity, f"PF4[{symbol}]")
            out[f"PF5[{symbol}]"] = _pf5(alg, symbol, arity, band, f"PF5[{symbol}]")
    return out


@dataclass(frozen=True)
class PartitionSystemAssignment:
    """Bands referenced by position; ``wiring[σ]`` lists ``arity+1`` band
    positions, ``order`` is the pair (⊗, ⊙) used for the order, if any."""

    bands: tuple[LeftNormalBand, ...]
    wiring: Mapping[str, tuple[int, ...]]
    order: tuple[int, int] | None = None


RESIDUATED_WIRING = {"*": (0, 0, 0), "\\": (1, 0, 1), "/": (1, 1, 0), "1": (0,), "0": (0,)}


def residuated_assignment(odot: LeftNormalBand, otimes: LeftNormalBand) -> PartitionSystemAssignment:
    """The fixed wiring · ↦ ⟨⊙,⊙,⊙⟩, \\ ↦ ⟨⊗,⊙,⊗⟩, / ↦ ⟨⊗,⊗,⊙⟩, constants ↦ ⟨⊙⟩, ≤ ↦ ⟨⊗,⊙⟩."""
    return PartitionSystemAssignment((odot, otimes), RESIDUATED_WIRING, (1, 0))


def check_partition_system(A, assignment: PartitionSystemAssignment) -> dict[str, PropertyReport]:
    alg = A.as_algebra()
    bands = assignment.bands
    out: dict[str, PropertyReport] = {}
    for i, band in enumerate(bands):
        lnb = check_left_normal_band(band)
        out[f"band[{i}]"] = combine(f"band[{i}]", lnb)
    out["homotactic"] = combine("homotactic", [homotactic(bands[0], b) for b in bands[1:]])
    for symbol, arity in alg.signature.symbols:
        if symbol not in assignment.wiring:
            out[f"wiring[{symbol}]"] = fails(f"wiring[{symbol}]", None, "symbol not wired")
            continue
        wires = [bands[i] for i in assignment.wiring[symbol]]
        if len(wires) != arity + 1:
            out[f"wiring[{symbol}]"] = fails(f"wiring[{symbol}]", None, "wrong wiring length")
            continue
        if arity == 0:
            out[f"PF5w[{symbol}]"] = _pf5(alg, symbol, 0, wires[0], f"PF5w[{symbol}]")
        else:
            out[f"PF4s[{symbol}]"] = _pf4(alg, symbol, arity, wires[0], wires[1:], f"PF4s[{symbol}]")
            out[f"PF5s[{symbol}]"] = _pf5(alg, symbol, arity, wires[0], f"PF5s[{symbol}]")
    if assignment.order is not None:
        if alg.poset is None:
            out["order"] = fails("order", None, "order wired on an unordered algebra")
        else:
            t, o = assignment.order
            pair = check_partition_pair(alg.poset, bands[t], bands[o])
            out["PS1"] = pair["PS1"]
            out["PS2"] = pair["PS2"]
    return out


def check_partition_pair(P: FinitePoset, otimes: LeftNormalBand, odot: LeftNormalBand) -> dict[str, PropertyReport]:
    n = P.size
    leq = P.leq
    out = {"homotactic": homotactic(otimes, odot), "PS1": holds("PS1"), "PS2": holds("PS2")}
    for a in range(n):
        for b in P.upset(a):
            for c in range(n):
                if not (leq[otimes.op[a][c]][otimes.op[b][c]] and leq[odot.op[a][c]][odot.op[b][c]]):
                    out["PS1"] = fails("PS1", [("a", a), ("b", b), ("c", c)])
                    break
            if not out["PS1"]:
                break
        if not out["PS1"]:
            break
    for a in range(n):
        for b in range(n):
            if leq[odot.op[a][b]][otimes.op[b][a]] and not leq[a][b]:
                out["PS2"] = fails("PS2", [("a", a), ("b", b)])
                break
        if not out["PS2"]:
            break
    return out


# directed systems of plain maps


@dataclass(frozen=True)
class MapSystem:
    """Maps ``maps[(p, q)]`` (local tuples) between blocks over ``index``.

    ``members[p][k]`` is the element of the ambient universe playing the role
    of local element ``k`` of block ``p``.
    """

    index: JoinSemilattice
    members: tuple[tuple[int, ...], ...]
    maps: Mapping[tuple[int, int], tuple[int, ...]]

    @property
    def universe_size(self) -> int:
        return sum(len(m) for m in self.members)

    def locate(self) -> dict[int, tuple[int, int]]:
        return {g: (p, k) for p, ms in enumerate(self.members) for k, g in enumerate(ms)}

    def validate(self) -> PropertyReport:
        idx = self.index
        for p, q in idx.comparable_pairs():
            if (p, q) not in self.maps:
                return fails("directed-system", [("p", p), ("q", q)], "missing map")
            if len(self.maps[(p, q)]) != len(self.members[p]):
                return fails("directed-system", [("p", p), ("q", q)], "map is not total")
        for p in range(idx.size):
            if self.maps[(p, p)] != tuple(range(len(self.members[p]))):
                return fails("directed-system", [("p", p)], "identity map expected")
        for p, q in idx.comparable_pairs():
            for r in range(idx.size):
                if idx.leq(q, r):
                    f, g, h = self.maps[(p, q)], self.maps[(q, r)], self.maps[(p, r)]
                    for a in range(len(f)):
                        if g[f[a]] != h[a]:
                            return fails("directed-system", [("p", p), ("q", q), ("r", r), ("a", a)],
                                         "composition law fails")
        return holds("directed-system")


def band_from_system(S: MapSystem) -> LeftNormalBand:
    """``a⊙b := φ_ps(a)`` with ``a`` in block ``p``, ``b`` in block ``q``, ``s = p∨q``."""
    where = S.locate()
    n = S.universe_size
    if sorted(where) != list(range(n)):
        raise SemanticError("blocks do not partition 0..n-1")
    op = [[0] * n for _ in range(n)]
    for a in range(n):
        p, k = where[a]
        for b in range(n):
            q, _ = where[b]
            s = S.index.join(p, q)
            op[a][b] = S.members[s][S.maps[(p, s)][k]]
    band = LeftNormalBand(n, tuple(map(tuple, op)))
    rep = replica(band)
    blocks = sorted(tuple(sorted(m)) for m in S.members)
    if sorted(rep.classes) != blocks:
        raise InconsistencyError("band blocks differ from the system's blocks")
    for p in range(S.index.size):
        for q in range(S.index.size):
            bp = rep.block_of[S.members[p][0]]
            bq = rep.block_of[S.members[q][0]]
            if S.index.leq(p, q) != rep.join.leq(bp, bq):
                raise InconsistencyError("replica order differs from the index order")
    return band


def system_from_band(band: LeftNormalBand, representatives: Sequence[int] | None = None) -> MapSystem:
    """``φ_pq(a) := a⊙q`` on the blocks of the band, indexed by its replica."""
    rep = replica(band)
    reps = tuple(representatives) if representatives is not None else rep.representatives
    if len(reps) != len(rep.classes) or sorted(rep.block_of[r] for r in reps) != list(range(len(reps))):
        raise SemanticError("need exactly one representative per block")
    # reorder representatives to follow block order
    reps = tuple(sorted(reps, key=lambda r: rep.block_of[r]))
    members = rep.classes
    pos = {g: k for cls in members for k, g in enumerate(cls)}
    maps = {}
    for p, q in rep.join.comparable_pairs():
        maps[(p, q)] = tuple(pos[band.op[a][reps[q]]] for a in members[p])
        if any(rep.block_of[band.op[a][reps[q]]] != q for a in members[p]):
            raise InconsistencyError("a⊙q left the block of q")
    S = MapSystem(rep.join, members, maps)
    v = S.validate()
    if not v:
        raise InconsistencyError(f"induced system is not directed: {v.describe()}")
    return S
