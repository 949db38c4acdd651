import json

import pytest

from bootstrap_counts import SIZES, TARGET, counts, order_key
from respos.enumeration import (EnumerationSpec, all_posets, canonical_form, count_structures,
                                enumerate_structures, naive_enumerate, pool, size_cap)
from respos.errors import SemanticError, SizeCapExceeded
from respos.idempotents import check_commutative
from respos.poset import FinitePoset, validate_poset
from respos.residuated import check_associativity, check_residuation

GOLDEN = json.loads(TARGET.read_text(encoding="utf-8"))["sizes"]


def poset_key(P: FinitePoset) -> str:
    zero = [[0] * P.size for _ in range(P.size)]
    return order_key(canonical_form(P.leq, zero)[0])


@pytest.mark.parametrize("n", SIZES)
def test_fast_counts_match_naive_golden(n):
    assert count_structures(EnumerationSpec(n, mode="count")) == GOLDEN[str(n)]["total"]


@pytest.mark.parametrize("n", SIZES)
def test_per_order_counts_match_naive_golden(n):
    got = {}
    for P in all_posets(n):
        c = count_structures(EnumerationSpec(n, P, mode="count"))
        if c:
            got[poset_key(P)] = c
    assert got == GOLDEN[str(n)]["by_order"]


def test_two_chain_count():
    assert GOLDEN["2"]["by_order"]["1<0"] == count_structures(
        EnumerationSpec(2, FinitePoset.chain(2), mode="count"))


def test_golden_file_is_reproducible():
    for n in (1, 2):
        assert counts(n) == GOLDEN[str(n)]


def test_fast_and_naive_agree_on_forms():
    forms = {canonical_form(A.leq, A.mul) for A in enumerate_structures(EnumerationSpec(3))}
    assert forms == naive_enumerate(3)


def test_poset_counts():
    assert [len(all_posets(n)) for n in range(1, 5)] == [1, 2, 5, 16]
    for P in all_posets(4):
        assert validate_poset(P.leq)


def test_enumerated_structures_are_sound():
    for A in pool(4):
        assert check_residuation(A) and check_associativity(A)


def test_no_duplicates_at_size_4():
    seen = [canonical_form(A.leq, A.mul) for A in enumerate_structures(EnumerationSpec(4))]
    assert len(seen) == len(set(seen))


def test_constraints_filter():
    spec = EnumerationSpec(3, constraints=("commutative",))
    got = list(enumerate_structures(spec))
    assert got and all(check_commutative(A) for A in got)
    assert len(got) <= count_structures(EnumerationSpec(3, mode="count"))


def test_first_mode():
    assert len(list(enumerate_structures(EnumerationSpec(3, mode="first")))) == 1


def test_bad_enumeration_spec():
    with pytest.raises(SemanticError):
        EnumerationSpec(3, mode="all")
    with pytest.raises(SemanticError):
        EnumerationSpec(3, constraints=("nope",))


def test_size_cap(monkeypatch):
    assert size_cap() == 5
    with pytest.raises(SizeCapExceeded):
        count_structures(EnumerationSpec(6, mode="count"))
    monkeypatch.setenv("RESPOS_SIZE_CAP", "2")
    with pytest.raises(SizeCapExceeded):
        count_structures(EnumerationSpec(3, mode="count"))
