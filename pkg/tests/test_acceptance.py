"""Acceptance criteria. Each test prints one PASS/FAIL line with its timing.

Run directly (python tests/test_acceptance.py) for the summary lines alone.
"""

import io
import json
import random
import sys
import tempfile
import time
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bootstrap_counts import TARGET as COUNTS_FILE  # noqa: E402
import system_gen  # noqa: E402
from respos.cli import main as cli  # noqa: E402
from respos.corpus import BUILTIN_NAMES, builtin, complex_algebra, cyclic_group  # noqa: E402
from respos.enumeration import EnumerationSpec, count_structures, pool  # noqa: E402
from respos.idempotents import (central_positive_idempotents, check_balanced,  # noqa: E402
                                check_condition_H, check_involutive, check_steady,
                                check_steady_over, index_semilattice, positive_idempotents)
from respos.io import document_of, dumps, load  # noqa: E402
from respos.oracles import run_suite  # noqa: E402
from respos.structure import (decompose, iterated_decompose, roundtrip,  # noqa: E402
                              steadiest_index, steady_candidates)

GOLDEN = Path(__file__).parent / "golden"


class Checks:
    """Collects failed expectations instead of stopping at the first one."""

    def __init__(self):
        self.failed = []
        self.notes = []

    def expect(self, cond, what):
        if not cond:
            self.failed.append(what)
        return cond

    def note(self, text):
        self.notes.append(text)


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli(list(argv))
    return code, out.getvalue(), err.getvalue()


def labels(A, xs):
    return {A.label(x) for x in xs}


def fiber_sets(d):
    return sorted(sorted(f) for f in d.fiber_labels())


def labelled_map(A, m):
    return {A.label(k): A.label(v) for k, v in m.items()}


def child_sets(node, root):
    return sorted(sorted(root.label(x) for x in c.members) for c in node.children)


# criteria


def c1(ck):
    A = builtin("fig1")
    p, q, a, r = A.idx("p", "q", "a", "r")
    ck.expect(labels(A, positive_idempotents(A)) == {"p", "q", "r"}, "Idp = {p,q,r}")
    ck.expect(A.mul[p][q] == a, "pq = a")
    ck.expect(A.mul[q][p] == r, "qp = r")
    ck.expect(A.mul[a][a] == r, "aa = r")
    with tempfile.TemporaryDirectory() as tmp:
        f = str(Path(tmp) / "fig1.json")
        run_cli("example", "fig1", "--emit", f)
        code, out, _ = run_cli("check", f, "--props", "idp-closed")
    ck.expect(code == 1 and "pq=a" in out, "check reports Idp not closed (pq=a)")
    ck.note(out.strip())


def c2(ck):
    A = builtin("fig2")
    ck.expect(all(check_condition_H(A).values()), "H1-H3 hold")
    ck.expect(bool(check_balanced(A)), "balanced")
    st = check_steady(A)
    w = st.witness or ()
    ck.expect(not st and "St1" in (st.detail or "")
              and [A.label(v) for _, v in w[:2]] == ["p", "a"], "steady fails with St1 witness (p,a)")
    I = steadiest_index(A)
    ck.expect(labels(A, I.elements) == {"1", "p"}, "steadiest index = {1,p}")
    d = decompose(A, I)
    ck.expect(fiber_sets(d) == [["1", "a"], ["b", "p", "q", "⊥"]], "fibers {1,a} and {⊥,p,q,b}")
    one, p = A.idx("1", "p")
    ck.expect(labelled_map(A, d.phi(one, p)) == {"1": "p", "a": "b"}, "φ: 1↦p, a↦b")
    ck.expect(labelled_map(A, d.psi(one, p)) == {"1": "⊥", "a": "⊥"}, "ψ: 1↦⊥, a↦⊥")
    code, out, _ = run_cli("roundtrip", str(GOLDEN / "fig2.json"))
    ck.expect(code == 0, "roundtrip exits 0")
    tree = iterated_decompose(A)
    big = [c for c in tree.children if len(c.members) == 4]
    ck.expect(len(big) == 1 and child_sets(big[0], A) == [["b", "q", "⊥"], ["p"]],
              "second level {p} and {⊥,b,q}")


def c3(ck):
    A = builtin("chain4")
    rep = check_steady_over(A, index_semilattice(A, positive_idempotents(A)))
    ck.expect(bool(rep["St1"]), "St1 holds over Idp")
    one, p = A.idx("1", "p")
    w = rep["St2"]
    ck.expect(not w and (w.binding("a"), w.binding("b")) == (one, p), "St2 fails at (1,p)")
    ck.expect(A.label(A.one_r(A.rd[one][p])) == "q", "1_{1/p} = q")
    I = index_semilattice(A, [one, p])
    ck.expect(all(check_steady_over(A, I).values()), "steady over {1,p}")
    d = decompose(A, I)
    ck.expect(fiber_sets(d) == [["1"], ["p", "q", "⊥"]], "fibers {1} and {⊥,p,q}")
    ck.expect(labelled_map(A, d.phi(one, p)) == {"1": "p"}, "φ(1) = p")
    ck.expect(labelled_map(A, d.psi(one, p)) == {"1": "⊥"}, "ψ(1) = ⊥")
    tree = iterated_decompose(A)
    big = [c for c in tree.children if len(c.members) == 3]
    ck.expect(len(big) == 1 and child_sets(big[0], A) == [["p"], ["q", "⊥"]],
              "second level {p} and {⊥,q}")
    code, _, _ = run_cli("roundtrip", str(GOLDEN / "chain4.json"), "--index", "1,p")
    ck.expect(code == 0, "roundtrip exits 0")


def c4(ck):
    A = builtin("pz2")
    C = complex_algebra(cyclic_group(2), zero_mask=0b10)
    ck.expect(C.tables_equal(A), "complex algebra of Z2 equals pz2 table for table")
    ck.expect(bool(check_balanced(A)), "balanced")
    ck.expect(bool(check_steady(A)), "steady")
    ck.expect(bool(check_involutive(A)), "involutive with 0")
    Z = central_positive_idempotents(A)
    ck.expect(labels(A, Z) == {"1", "⊤"}, "ZIdp = {1,⊤}")
    d = decompose(A, index_semilattice(A, Z))
    ck.expect(fiber_sets(d) == [["0", "1"], ["⊤", "⊥"]], "fibers {1,0} and {⊥,⊤}")
    group, boolean = d.system.fibers
    ck.expect(not any(group.poset.lt(x, y) for x in range(2) for y in range(2)),
              "first fiber is an antichain")
    ck.expect(group.mul[group.index("0")][group.index("0")] == group.index("1"), "0·0 = 1 in Z2")
    ck.expect(boolean.poset.lt(boolean.index("⊥"), boolean.index("⊤"))
              and boolean.unit == boolean.index("⊤")
              and boolean.mul[boolean.index("⊥")][boolean.index("⊤")] == boolean.index("⊥"),
              "second fiber is the Boolean chain with unit ⊤")
    one, top = A.idx("1", "⊤")
    ck.expect(set(d.phi(one, top).values()) == {top}, "φ ≡ ⊤")
    ck.expect(set(d.psi(one, top).values()) == {A.index("⊥")}, "ψ ≡ ⊥")
    code, _, _ = run_cli("roundtrip", str(GOLDEN / "pz2.json"), "--index", "zidp")
    ck.expect(code == 0, "roundtrip exits 0")


def c5(ck):
    total = steady = tried = 0
    failures = []
    for A in pool(4):
        total += 1
        if not central_positive_idempotents(A) or not steady_candidates(A):
            continue
        tried += 1
        steady += bool(check_steady(A))
        if not roundtrip(A, steadiest_index(A)):
            failures.append(A.mul)
    ck.expect(not failures, f"{len(failures)} round-trip failures")
    ck.expect(steady > 0, "some steady structure exists")
    ck.note(f"{total} structures, {tried} steady over some index ({steady} steady over Idp), "
            f"{len(failures)} failures")


def c6(ck, bases=1000, quota=20, seed=20240611):
    rng = random.Random(seed)
    kinds = {}
    mismatches = 0
    mutants = {"S1 only": 0, "S2 only": 0, "both": 0, "neither": 0}

    def judge(shape, posets, psi, phi):
        nonlocal mismatches
        s1, s2, ok = system_gen.verdicts(system_gen.build(shape, posets, psi, phi))
        mismatches += ok != (s1 and s2)
        return s1, s2

    good = []
    for _ in range(bases):
        sysdata = system_gen.random_system(rng)
        v = judge(*sysdata)
        kinds[v] = kinds.get(v, 0) + 1
        if all(v):
            good.append(sysdata)
    attempts = 0
    while (mutants["S1 only"] < quota or mutants["S2 only"] < quota) and attempts < 50000:
        attempts += 1
        shape, posets, psi, phi = rng.choice(good)
        m = system_gen.mutate(rng, shape, posets, psi, phi)
        if m is None:
            continue
        s1, s2 = judge(shape, posets, *m)
        key = "neither" if s1 and s2 else "both" if not (s1 or s2) else "S1 only" if not s1 else "S2 only"
        mutants[key] += 1
    n = bases + sum(mutants.values())
    ck.expect(n >= 1000, "at least 1000 systems")
    ck.expect(mutants["S1 only"] >= quota and mutants["S2 only"] >= quota,
              "mutants violating exactly S1 and exactly S2")
    ck.expect(mismatches == 0, f"{mismatches} mismatches")
    ck.note(f"{n} systems; base verdicts (S1,S2) {dict(sorted(kinds.items()))}; mutants {mutants}; "
            f"{mismatches} mismatches")


def c7(ck):
    results = run_suite("all", 4)
    for r in results:
        ck.expect(r.ok, f"{r.suite}: {len(r.counterexamples)} counterexamples")
        ck.expect(r.relevant > 0, f"{r.suite}: no structure in scope")
    ck.note(", ".join(f"{r.suite} {r.relevant}/{r.checked}" for r in results))


def c8(ck):
    golden = json.loads(COUNTS_FILE.read_text(encoding="utf-8"))["sizes"]
    for n in (2, 3):
        got = count_structures(EnumerationSpec(n, mode="count"))
        want = golden[str(n)]["total"]
        ck.expect(got == want, f"size {n}: {got} vs golden {want}")
        ck.note(f"N{n} = {got}")


def c9(ck):
    with tempfile.TemporaryDirectory() as tmp:
        for name in BUILTIN_NAMES:
            gold = (GOLDEN / f"{name}.json").read_text(encoding="utf-8")
            ck.expect(dumps(document_of(builtin(name))) == gold, f"{name} differs from golden")
            obj = load(GOLDEN / f"{name}.json")
            names = None
            if isinstance(obj, tuple):
                obj, names = obj
            text = dumps(document_of(obj, names))
            ck.expect(text == gold, f"{name} load/save not byte-stable")
            again = Path(tmp) / f"{name}.json"
            again.write_text(text, encoding="utf-8")
            obj2 = load(again)
            obj2, names2 = obj2 if isinstance(obj2, tuple) else (obj2, None)
            ck.expect(dumps(document_of(obj2, names2)) == gold, f"{name} second pass differs")
        enumerated = 0
        for A in pool(3):
            text = dumps(document_of(A))
            f = Path(tmp) / "s.json"
            f.write_text(text, encoding="utf-8")
            B = load(f)
            ck.expect(B.tables_equal(A) and dumps(document_of(B)) == text, "enumerated round trip")
            enumerated += 1
    ck.note(f"{len(BUILTIN_NAMES)} builtins, {enumerated} enumerated structures")


CRITERIA = [
    (1, "fig1 idempotents and Idp not closed", c1, 1),
    (2, "fig2 / fig3 pipeline", c2, 1),
    (3, "chain4 / fig5 pipeline", c3, 1),
    (4, "power set of Z2", c4, 1),
    (5, "round trip of every steady structure up to size 4", c5, 600),
    (6, "sum order is a partial order iff S1 and S2", c6, 60),
    (7, "oracle suites at size 4", c7, 1800),
    (8, "enumerator counts against the naive oracle", c8, 60),
    (9, "serialization round trips and golden files", c9, 60),
]


def evaluate(number):
    _, title, fn, budget = CRITERIA[number - 1]
    ck = Checks()
    start = time.perf_counter()
    try:
        fn(ck)
    except Exception as e:  # an unexpected error is a failed criterion, reported as such
        ck.failed.append(f"{type(e).__name__}: {e}")
    seconds = time.perf_counter() - start
    ck.expect(seconds < budget, f"took {seconds:.2f}s, budget {budget}s")
    status = "PASS" if not ck.failed else "FAIL"
    line = f"{status} criterion {number}: {title} ({seconds:.2f}s)"
    if ck.failed:
        line += " -- " + "; ".join(ck.failed)
    elif ck.notes:
        line += " -- " + "; ".join(ck.notes)
    return not ck.failed, line


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number, capsys):
    ok, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(n) for n, *_ in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
