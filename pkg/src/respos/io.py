"""JSON documents for structures and residuated systems.

Files carry labels, never indices. ``dumps`` fixes the layout (key order,
2-space indentation, innermost lists on one line) so saved files are
byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

from .errors import CycleDetected, ResposError, SchemaError, SemanticError
from .plonka import ResiduatedSystem
from .poset import FinitePoset, JoinSemilattice, close_covers, validate_poset
from .residuated import ResiduatedStructure, residual_tables

ALGEBRA_KEYS = ("name", "elements", "order_mode", "order", "mul", "ld", "rd", "unit", "zero")
SYSTEM_KEYS = ("name", "index", "fibers", "phi", "psi")


# layout


def _is_flat(value) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (list, dict)) for v in value)


def _render(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_render(v, indent + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if _is_flat(value):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in value) + "]"
        return "[\n" + ",\n".join(inner + _render(v, indent + 1) for v in value) + "\n" + pad + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(doc: dict) -> str:
    return _render(doc, 0) + "\n"


# structures


def algebra_document(A: ResiduatedStructure, name: str | None = None) -> dict:
    labels = list(A.labels)

    def mat(op):
        return [[labels[v] for v in row] for row in op]

    return {
        "name": name if name is not None else (A.name or ""),
        "elements": labels,
        "order_mode": "covers",
        "order": [[labels[x], labels[y]] for x, y in A.poset.covers()],
        "mul": mat(A.mul),
        "ld": mat(A.ld),
        "rd": mat(A.rd),
        "unit": None if A.unit is None else labels[A.unit],
        "zero": None if A.zero is None else labels[A.zero],
    }


def _require(cond: bool, msg: str, path: str):
    if not cond:
        raise SchemaError(msg, path)


def _labels(value, path: str) -> list[str]:
    _require(isinstance(value, list) and value, "expected a nonempty list of labels", path)
    for i, v in enumerate(value):
        _require(isinstance(v, str) and v != "", "labels must be nonempty strings", f"{path}[{i}]")
    seen = set()
    for i, v in enumerate(value):
        if v in seen:
            raise SchemaError(f"duplicate label {v!r}", f"{path}[{i}]")
        seen.add(v)
    return list(value)


def _label_of(value, pos: dict, path: str) -> int:
    _require(isinstance(value, str), "expected a label", path)
    if value not in pos:
        raise SchemaError(f"unknown label {value!r}", path)
    return pos[value]


def _matrix(value, pos: dict, path: str) -> list[list[int]]:
    n = len(pos)
    _require(isinstance(value, list) and len(value) == n, f"expected {n} rows", path)
    out = []
    for i, row in enumerate(value):
        _require(isinstance(row, list) and len(row) == n, f"expected {n} entries", f"{path}[{i}]")
        out.append([_label_of(v, pos, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return out


def _poset(doc: dict, path: str) -> FinitePoset:
    labels = _labels(doc["elements"], f"{path}.elements")
    pos = {l: i for i, l in enumerate(labels)}
    n = len(labels)
    mode = doc.get("order_mode", "covers")
    _require(mode in ("full", "covers"), "order_mode must be 'full' or 'covers'", f"{path}.order_mode")
    pairs = []
    _require(isinstance(doc["order"], list), "expected a list of pairs", f"{path}.order")
    for i, pair in enumerate(doc["order"]):
        p = f"{path}.order[{i}]"
        _require(isinstance(pair, list) and len(pair) == 2, "expected a [lower, upper] pair", p)
        pairs.append((_label_of(pair[0], pos, p + "[0]"), _label_of(pair[1], pos, p + "[1]")))
    if mode == "covers":
        try:
            poset = close_covers(n, pairs, labels)
        except CycleDetected as e:
            raise SemanticError(f"{path}.order: {e}", e.witness)
    else:
        poset = FinitePoset.from_relation(n, pairs, labels)
    report = validate_poset(poset.leq)
    if not report:
        raise SemanticError(f"{path}.order is not a partial order: {report.describe(labels)}",
                            report.witness)
    return poset


def poset_from_document(doc: Any, path: str = "$") -> FinitePoset:
    """The order part of an algebra document (other keys are ignored)."""
    _require(isinstance(doc, dict), "expected an object", path)
    for key in ("elements", "order"):
        _require(key in doc, f"missing key {key!r}", f"{path}.{key}")
    return _poset(doc, path)


def algebra_from_document(doc: Any, path: str = "$") -> ResiduatedStructure:
    _require(isinstance(doc, dict), "expected an object", path)
    unknown = [k for k in doc if k not in ALGEBRA_KEYS]
    if unknown:
        raise SchemaError(f"unknown key {unknown[0]!r}", f"{path}.{unknown[0]}")
    for key in ("elements", "order", "mul"):
        _require(key in doc, f"missing key {key!r}", f"{path}.{key}")
    name = doc.get("name")
    _require(name is None or isinstance(name, str), "expected a string", f"{path}.name")
    poset = _poset(doc, path)
    labels = list(poset.labels)
    pos = {l: i for i, l in enumerate(labels)}
    n = len(labels)
    mul = _matrix(doc["mul"], pos, f"{path}.mul")
    unit = doc.get("unit")
    zero = doc.get("zero")
    unit = None if unit is None else _label_of(unit, pos, f"{path}.unit")
    zero = None if zero is None else _label_of(zero, pos, f"{path}.zero")
    try:
        ld, rd = residual_tables(poset, mul)
    except ResposError as e:
        raise SemanticError(f"{path}.mul: {e}", e.witness) from e
    for key, derived in (("ld", ld), ("rd", rd)):
        if doc.get(key) is None:
            continue
        declared = _matrix(doc[key], pos, f"{path}.{key}")
        for i in range(n):
            for j in range(n):
                if declared[i][j] != derived[i][j]:
                    raise SemanticError(
                        f"{path}.{key}[{i}][{j}] ({labels[i]}, {labels[j]}) is {labels[declared[i][j]]}"
                        f" but the residual is {labels[derived[i][j]]}", ((key, (i, j)),))
    try:
        return ResiduatedStructure(poset, mul, ld, rd, unit, zero, name or None)
    except ResposError as e:
        raise SemanticError(f"{path}: {e}", e.witness)


# systems


def _index_names(S: ResiduatedSystem, names: Sequence[str] | None) -> list[str]:
    if names is not None:
        return list(names)
    return [str(e) for e in S.index.elements]


def system_document(S: ResiduatedSystem, index_names: Sequence[str] | None = None,
                    name: str | None = None) -> dict:
    """Edges are listed for strictly comparable index pairs; identities are implicit."""
    names = _index_names(S, index_names)
    I = S.index
    fibers = {names[p]: algebra_document(f) for p, f in enumerate(S.fibers)}
    phi, psi = {}, {}
    for p in range(I.size):
        for q in range(I.size):
            if not I.lt(p, q):
                continue
            key = f"{names[p]}->{names[q]}"
            src, tgt = S.fibers[p].labels, S.fibers[q].labels
            phi[key] = [[src[a], tgt[b]] for a, b in enumerate(S.phi[(p, q)])]
            psi[key] = [[src[a], tgt[b]] for a, b in enumerate(S.psi[(p, q)])]
    return {
        "name": name if name is not None else (S.name or ""),
        "index": {"elements": names,
                  "join": [[names[v] for v in row] for row in I.table]},
        "fibers": fibers,
        "phi": phi,
        "psi": psi,
    }


def _edge_maps(value, names, pos, fibers, path):
    _require(isinstance(value, dict), "expected an object of edges", path)
    out = {}
    for key, pairs in value.items():
        p_key = f"{path}.{key}"
        parts = key.split("->")
        _require(len(parts) == 2, "edge keys look like 'p->q'", p_key)
        p = _label_of(parts[0], pos, p_key)
        q = _label_of(parts[1], pos, p_key)
        src, tgt = fibers[p], fibers[q]
        spos = {l: i for i, l in enumerate(src.labels)}
        tpos = {l: i for i, l in enumerate(tgt.labels)}
        _require(isinstance(pairs, list), "expected a list of [source, target] pairs", p_key)
        image: dict[int, int] = {}
        for i, pair in enumerate(pairs):
            pp = f"{p_key}[{i}]"
            _require(isinstance(pair, list) and len(pair) == 2, "expected a [source, target] pair", pp)
            a = _label_of(pair[0], spos, pp + "[0]")
            b = _label_of(pair[1], tpos, pp + "[1]")
            if a in image:
                raise SchemaError(f"{pair[0]!r} is mapped twice", pp)
            image[a] = b
        missing = [src.labels[a] for a in range(src.size) if a not in image]
        if missing:
            raise SemanticError(f"{p_key} is not total: {missing[0]!r} has no image", ((key, missing[0]),))
        out[(p, q)] = tuple(image[a] for a in range(src.size))
    return out


def system_from_document(doc: Any, path: str = "$") -> tuple[ResiduatedSystem, list[str]]:
    """Returns the system and its index names."""
    _require(isinstance(doc, dict), "expected an object", path)
    unknown = [k for k in doc if k not in SYSTEM_KEYS]
    if unknown:
        raise SchemaError(f"unknown key {unknown[0]!r}", f"{path}.{unknown[0]}")
    for key in ("index", "fibers", "phi", "psi"):
        _require(key in doc, f"missing key {key!r}", f"{path}.{key}")
    index = doc["index"]
    _require(isinstance(index, dict) and set(index) == {"elements", "join"},
             "index needs exactly 'elements' and 'join'", f"{path}.index")
    names = _labels(index["elements"], f"{path}.index.elements")
    pos = {l: i for i, l in enumerate(names)}
    table = _matrix(index["join"], pos, f"{path}.index.join")
    I = JoinSemilattice(tuple(names), tuple(map(tuple, table)))
    report = I.validate()
    if not report:
        raise SemanticError(f"{path}.index.join is not a semilattice: {report.describe(names)}",
                            report.witness)
    fdocs = doc["fibers"]
    _require(isinstance(fdocs, dict), "expected an object keyed by index", f"{path}.fibers")
    if set(fdocs) != set(names):
        raise SchemaError("fibers must be keyed by exactly the index elements", f"{path}.fibers")
    fibers = [algebra_from_document(fdocs[n], f"{path}.fibers.{n}") for n in names]
    phi = _edge_maps(doc["phi"], names, pos, fibers, f"{path}.phi")
    psi = _edge_maps(doc["psi"], names, pos, fibers, f"{path}.psi")
    for family, key in ((phi, "phi"), (psi, "psi")):
        for (p, q), f in family.items():
            if p == q and f != tuple(range(fibers[p].size)):
                raise SemanticError(f"{path}.{key}.{names[p]}->{names[p]} is not the identity",
                                    ((key, names[p]),))
            if not I.leq(p, q):
                raise SemanticError(f"{path}.{key}: edge {names[p]}->{names[q]} joins incomparable indices",
                                    ((key, (names[p], names[q])),))
        for p in range(I.size):
            for q in range(I.size):
                if I.lt(p, q) and (p, q) not in family:
                    raise SemanticError(f"{path}.{key}: missing edge {names[p]}->{names[q]}",
                                        ((key, (names[p], names[q])),))
    name = doc.get("name")
    _require(name is None or isinstance(name, str), "expected a string", f"{path}.name")
    return ResiduatedSystem(I, tuple(fibers), phi, psi, name or None), names


# files


def parse_json(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source}: invalid JSON ({e.msg} at line {e.lineno})", "$")


def is_system_document(doc: Any) -> bool:
    return isinstance(doc, dict) and "fibers" in doc


def load_structure(path) -> ResiduatedStructure:
    return algebra_from_document(parse_json(Path(path).read_text(encoding="utf-8"), str(path)))


def load_system(path) -> tuple[ResiduatedSystem, list[str]]:
    return system_from_document(parse_json(Path(path).read_text(encoding="utf-8"), str(path)))


def load_poset(path) -> FinitePoset:
    return poset_from_document(parse_json(Path(path).read_text(encoding="utf-8"), str(path)))


def load(path):
    """A structure or a (system, index names) pair, depending on the document."""
    doc = parse_json(Path(path).read_text(encoding="utf-8"), str(path))
    if is_system_document(doc):
        return system_from_document(doc)
    return algebra_from_document(doc)


def save_structure(A: ResiduatedStructure, path) -> None:
    Path(path).write_text(dumps(algebra_document(A)), encoding="utf-8")


def save_system(S: ResiduatedSystem, path, index_names: Sequence[str] | None = None) -> None:
    Path(path).write_text(dumps(system_document(S, index_names)), encoding="utf-8")


def document_of(obj, index_names: Sequence[str] | None = None) -> dict:
    if isinstance(obj, ResiduatedSystem):
        return system_document(obj, index_names)
    return algebra_document(obj)
