"""Generic finite algebras, terms and a brute-force quasi-equation checker."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import ArityMismatch, NonSquareTable, SemanticError, UnknownSymbol
from .poset import FinitePoset
from .report import PropertyReport, fails, holds


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise SemanticError(f"duplicate operation symbols in {names}")

    def arity(self, name: str) -> int:
        for s, k in self.symbols:
            if s == name:
                return k
        raise UnknownSymbol(f"unknown symbol {name!r}", witness=name)

    def names(self) -> list[str]:
        return [s for s, _ in self.symbols]

    def constants(self) -> list[str]:
        return [s for s, k in self.symbols if k == 0]

    def without_constants(self) -> "Signature":
        return Signature(tuple((s, k) for s, k in self.symbols if k > 0))

    def __contains__(self, name: str) -> bool:
        return any(s == name for s, _ in self.symbols)


def _lookup(table, args: Sequence[int]) -> int:
    for a in args:
        table = table[a]
    return table


def _check_table(table, arity: int, n: int, symbol: str):
    if arity == 0:
        if not isinstance(table, int) or not 0 <= table < n:
            raise SemanticError(f"constant {symbol!r} must be an element index")
        return
    if len(table) != n:
        raise NonSquareTable(f"table for {symbol!r} has {len(table)} rows, expected {n}")
    for row in table:
        _check_table(row, arity - 1, n, symbol)


def _freeze(table):
    if isinstance(table, int):
        return table
    return tuple(_freeze(r) for r in table)


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """An algebra on 0..size-1 with one nested-tuple table per symbol.

    An ``n``-ary table is indexed as ``table[a1][a2]...[an]``; a constant is a
    bare element index. ``poset`` is optional and only used by ``Leq`` formulas.
    """

    size: int
    signature: Signature
    tables: Mapping[str, Any]
    poset: FinitePoset | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        frozen = {}
        for name, arity in self.signature.symbols:
            if name not in self.tables:
                raise UnknownSymbol(f"no table for symbol {name!r}", witness=name)
            t = _freeze(self.tables[name])
            _check_table(t, arity, self.size, name)
            frozen[name] = t
        object.__setattr__(self, "tables", frozen)

    def arity(self, symbol: str) -> int:
        return self.signature.arity(symbol)

    def apply(self, symbol: str, *args: int) -> int:
        k = self.signature.arity(symbol)
        if len(args) != k:
            raise ArityMismatch(f"{symbol!r} takes {k} arguments, got {len(args)}")
        return _lookup(self.tables[symbol], args)

    def leq(self, x: int, y: int) -> bool:
        if self.poset is None:
            raise UnknownSymbol("algebra has no order", witness="<=")
        return self.poset.leq[x][y]

    def reduct(self, symbols: Iterable[str]) -> "FiniteAlgebra":
        keep = set(symbols)
        sig = Signature(tuple((s, k) for s, k in self.signature.symbols if s in keep))
        return FiniteAlgebra(self.size, sig, {s: self.tables[s] for s in sig.names()},
                             self.poset, self.labels)

    def as_algebra(self) -> "FiniteAlgebra":
        return self


# terms


class Term:
    def __mul__(self, other: "Term") -> "Term":
        return App("*", (self, other))

    def __truediv__(self, other: "Term") -> "Term":
        return App("/", (self, other))

    def ld(self, other: "Term") -> "Term":
        """``self \\ other``"""
        return App("\\", (self, other))

    def one(self) -> "Term":
        """``x/x``"""
        return App("/", (self, self))

    def one_l(self) -> "Term":
        """``x\\x``"""
        return App("\\", (self, self))

    def variables(self) -> list[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Term):
    name: str

    def variables(self) -> list[str]:
        return [self.name]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App(Term):
    symbol: str
    args: tuple[Term, ...] = ()

    def variables(self) -> list[str]:
        out: list[str] = []
        for a in self.args:
            for v in a.variables():
                if v not in out:
                    out.append(v)
        return out

    def __str__(self):
        if not self.args:
            return self.symbol
        if len(self.args) == 2:
            return f"({self.args[0]}{self.symbol}{self.args[1]})"
        return f"{self.symbol}({', '.join(map(str, self.args))})"


def const(symbol: str) -> App:
    return App(symbol, ())


def variables(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n) for n in names)


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    def variables(self) -> list[str]:
        out = self.lhs.variables()
        return out + [v for v in self.rhs.variables() if v not in out]

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Leq:
    lhs: Term
    rhs: Term

    def variables(self) -> list[str]:
        out = self.lhs.variables()
        return out + [v for v in self.rhs.variables() if v not in out]

    def __str__(self):
        return f"{self.lhs} <= {self.rhs}"


Formula = Eq | Leq


def compile_term(A, term: Term, slots: Mapping[str, int]) -> Callable[[Sequence[int]], int]:
    """Turn a term into a closure over an assignment vector."""
    if isinstance(term, Var):
        if term.name not in slots:
            raise SemanticError(f"unbound variable {term.name}")
        i = slots[term.name]
        return lambda env: env[i]
    assert isinstance(term, App)
    arity = A.arity(term.symbol)
    if arity != len(term.args):
        raise ArityMismatch(f"{term.symbol!r} takes {arity} arguments, got {len(term.args)}",
                            witness=term.symbol)
    table = A.as_algebra().tables[term.symbol]
    if arity == 0:
        return lambda env: table
    subs = [compile_term(A, t, slots) for t in term.args]
    if arity == 1:
        f = subs[0]
        return lambda env: table[f(env)]
    if arity == 2:
        f, g = subs
        return lambda env: table[f(env)][g(env)]
    return lambda env: _lookup(table, [s(env) for s in subs])


def compile_formula(A, formula: Formula, slots: Mapping[str, int]) -> Callable[[Sequence[int]], bool]:
    lhs = compile_term(A, formula.lhs, slots)
    rhs = compile_term(A, formula.rhs, slots)
    if isinstance(formula, Eq):
        return lambda env: lhs(env) == rhs(env)
    if A.poset is None:
        raise UnknownSymbol("order symbol used on an unordered algebra", witness="<=")
    leq = A.poset.leq
    return lambda env: leq[lhs(env)][rhs(env)]


def check_quasiequation(A, premises: Sequence[Formula], conclusion: Formula,
                        name: str = "quasiequation") -> PropertyReport:
    """Check a universally quantified Horn formula by exhausting all assignments.

    Variables are ordered by first occurrence (premises first, then the
    conclusion) and assignments are scanned lexicographically, so the reported
    witness is the lexicographically least falsifying assignment.
    """
    names: list[str] = []
    for f in list(premises) + [conclusion]:
        for v in f.variables():
            if v not in names:
                names.append(v)
    slots = {v: i for i, v in enumerate(names)}
    prem = [compile_formula(A, p, slots) for p in premises]
    concl = compile_formula(A, conclusion, slots)
    for env in itertools.product(range(A.size), repeat=len(names)):
        if all(p(env) for p in prem) and not concl(env):
            return fails(name, list(zip(names, env)))
    return holds(name)


def check_equation(A, lhs: Term, rhs: Term, name: str = "equation") -> PropertyReport:
    return check_quasiequation(A, [], Eq(lhs, rhs), name)


def generated_subalgebra(A, X: Iterable[int]) -> frozenset:
    """Least subset containing ``X`` and the constants, closed under every operation."""
    alg = A.as_algebra()
    current = set(X)
    for name, arity in alg.signature.symbols:
        if arity == 0:
            current.add(alg.tables[name])
    ops = [(name, arity) for name, arity in alg.signature.symbols if arity > 0]
    while True:
        new = set()
        elems = sorted(current)
        for name, arity in ops:
            table = alg.tables[name]
            for args in itertools.product(elems, repeat=arity):
                v = _lookup(table, args)
                if v not in current:
                    new.add(v)
        if not new:
            return frozenset(current)
        current |= new
