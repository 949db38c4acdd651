import pytest

from conftest import by_labels
from respos.algebra import Eq, check_equation, check_quasiequation, generated_subalgebra, variables
from respos.corpus import builtin, complex_algebra, cyclic_group
from respos.errors import NotAssociative, NotResiduated, SemanticError
from respos.poset import FinitePoset
from respos.residuated import (ResiduatedStructure, check_associativity, check_residuation,
                               derive_residuals, find_global_identity, permute, substructure)


def test_every_builtin_is_residuated(builtin_structure):
    assert check_residuation(builtin_structure)
    assert check_associativity(builtin_structure)


def test_pz2_residual_of_generator():
    A = builtin("pz2")
    zero, one = by_labels(A, "0", "1")
    assert A.ld[zero][zero] == one


def test_singleton_self_residuals():
    A = derive_residuals(FinitePoset.chain(1), [[0]])
    assert A.ld[0][0] == A.rd[0][0] == 0


def test_fig2_product_p_a():
    A = builtin("fig2")
    p, a, b = by_labels(A, "p", "a", "b")
    assert A.mul[p][a] == b


def test_corrupted_residual_is_caught_with_witness():
    A = builtin("pz2")
    rd = [list(r) for r in A.rd]
    rd[2][1] = (rd[2][1] + 1) % 4
    B = ResiduatedStructure(A.poset, A.mul, A.ld, rd)
    r = check_residuation(B)
    assert not r
    # the reported triple really violates residuation
    x, y, z = r.binding("x"), r.binding("y"), r.binding("z")
    lhs = B.leq[B.mul[x][y]][z]
    assert lhs != B.leq[x][B.rd[z][y]] or lhs != B.leq[y][B.ld[x][z]]


def test_global_identity():
    assert builtin("pz2").label(find_global_identity(builtin("pz2"))) == "1"
    assert find_global_identity(builtin("fig1")) is None
    assert find_global_identity(derive_residuals(FinitePoset.chain(1), [[0]])) == 0


def test_not_associative():
    with pytest.raises(NotAssociative):
        derive_residuals(FinitePoset.antichain(2), [[1, 0], [0, 0]])


def test_not_residuated_when_no_largest_element():
    # on a two-element antichain, x*y = 0 everywhere has no largest x with x*y <= 1
    with pytest.raises(NotResiduated):
        derive_residuals(FinitePoset.antichain(2), [[0, 0], [0, 0]])


def test_declared_unit_must_be_identity():
    A = builtin("chain4")
    with pytest.raises(SemanticError):
        A.with_unit(A.index("p"))


def test_generated_subalgebras():
    A = builtin("pz2")
    zero, one = by_labels(A, "0", "1")
    assert generated_subalgebra(A, [zero]) == {zero, one}
    assert generated_subalgebra(A, range(4)) == set(range(4))
    assert A.unit in generated_subalgebra(A.as_algebra(), [])


def test_equations():
    x, y = variables("x", "y")
    assert check_equation(builtin("bool2"), x * x, x)
    r = check_equation(builtin("fig1"), x * y, y * x)
    A = builtin("fig1")
    assert not r and (A.label(r.binding("x")), A.label(r.binding("y"))) == ("p", "q")


def test_H2_as_quasiequation_on_fig2():
    x, y = variables("x", "y")
    A = builtin("fig2")
    assert check_quasiequation(A, [Eq(x.one(), y.one())], Eq((x / y).one(), x.one()), "H2")


def test_substructure_and_permute():
    A = builtin("chain4")
    sub = substructure(A, by_labels(A, "⊥", "p", "q"), unit=A.index("p"))
    assert sub.labels == ("⊥", "p", "q") and check_residuation(sub)
    with pytest.raises(SemanticError):
        substructure(A, by_labels(A, "1", "q"))
    B = permute(A, [3, 2, 1, 0])
    assert check_residuation(B) and B.label(3) == A.label(0)


def test_complex_algebra_of_z2_matches_pz2_tables():
    A = builtin("pz2")
    C = complex_algebra(cyclic_group(2), 0, ["⊥", "1", "0", "⊤"], zero_mask=0b10)
    assert A.tables_equal(C)
