import random

import pytest

import system_gen
from conftest import same_by_labels
from respos.algebra import FiniteAlgebra, Signature
from respos.bands import check_partition_system
from respos.corpus import brouwerian_chain, builtin, two_component_sum
from respos.errors import InvalidSystem, MissingEdge, SemanticError, ZeroNotBelowUnit
from respos.plonka import (DirectedMetamorphismSystem, Metamorphism, ResiduatedSystem,
                           check_S1_S2, check_S3_S5, partition_system_of, residuated_sum,
                           sum_of_homomorphism_system, sum_order, system_of_partition_system,
                           validate_system)
from respos.poset import JoinSemilattice
from respos.structure import compose


def with_psi(S, psi):
    return ResiduatedSystem(S.index, S.fibers, S.phi, {(0, 1): psi})


def test_fig3_sum_is_fig2():
    assert same_by_labels(compose(builtin("fig3-system")), builtin("fig2"))


def test_fig5_sum_is_chain4():
    assert same_by_labels(compose(builtin("fig5-system")), builtin("chain4"))


def test_fig4_sum_is_pz2():
    A = compose(builtin("fig4-system"))
    B = builtin("pz2")
    assert A.size == 4
    assert same_by_labels(A.with_labels(["1", "0", "⊥", "⊤"]), B)


def test_fig3_system_satisfies_s1_s2():
    meta = builtin("fig3-system").to_metamorphism_system()
    assert validate_system(meta)
    assert all(check_S1_S2(meta).values())


def test_fig3_psi_equal_to_phi_breaks_s2():
    S = builtin("fig3-system")
    bad = with_psi(S, S.phi[(0, 1)])
    r = check_S1_S2(bad.to_metamorphism_system())
    assert not r["S2"]
    with pytest.raises(InvalidSystem):
        compose(bad)


def test_fig3_non_homomorphic_psi_is_rejected():
    S = builtin("fig3-system")
    fp = S.fibers[1]
    bad = with_psi(S, (fp.index("p"), fp.index("⊥")))
    assert not validate_system(bad.to_metamorphism_system())
    with pytest.raises(InvalidSystem):
        compose(bad)


def test_missing_psi_edge():
    S = builtin("fig3-system")
    bad = ResiduatedSystem(S.index, S.fibers, S.phi, {})
    with pytest.raises(MissingEdge):
        bad.to_metamorphism_system()


def test_incomparable_edge_rejected():
    S = builtin("fig3-system")
    with pytest.raises(SemanticError):
        ResiduatedSystem(S.index, S.fibers, {(1, 0): (0,)}, {(1, 0): (0,)})


def test_two_component_zero_must_be_below_unit():
    A1, A2 = brouwerian_chain(2), brouwerian_chain(2)
    with pytest.raises(ZeroNotBelowUnit):
        two_component_sum(A1, A2, A2.unit)
    S = two_component_sum(A1, A2, 0)
    A, res = residuated_sum(S)
    assert A.size == 4 and res.diagnostics["residuation"]


def test_sum_order_is_chain_for_fig5():
    meta = builtin("fig5-system").to_metamorphism_system()
    order = sum_order(meta)
    assert order.report
    assert order.poset.is_lattice()


def test_homomorphism_system_of_semilattices():
    # classical sum of two one-element semigroups is the two-element semilattice
    sig = Signature((("*", 2),))
    one = FiniteAlgebra(1, sig, {"*": ((0,),)})
    res = sum_of_homomorphism_system({(0, 1): (0,)}, [one, one], JoinSemilattice.chain(2))
    assert res.algebra.tables["*"] == ((0, 1), (1, 1))


def test_partition_system_roundtrip_fig3():
    meta = builtin("fig3-system").to_metamorphism_system()
    result, assignment = partition_system_of(meta)
    A = result.algebra
    assert all(check_partition_system(A, assignment).values())
    back, members = system_of_partition_system(A, assignment)
    assert [len(m) for m in members] == [2, 4]
    for e, m in meta.edges.items():
        assert back.edges[e].maps == m.maps


def test_metamorphism_edges_must_be_comparable():
    sig = Signature(())
    P = builtin("pz2").poset
    f = FiniteAlgebra(1, sig, {}, P.restrict([0]))
    V = JoinSemilattice((0, 1, 2), ((0, 2, 2), (2, 1, 2), (2, 2, 2)))
    with pytest.raises(SemanticError):
        DirectedMetamorphismSystem(V, (f, f, f), {(0, 1): Metamorphism({}, ((0,), (0,)))})


def test_fig3_psi_a_to_b_breaks_a_metamorphism_equation():
    S = builtin("fig3-system")
    fp = S.fibers[1]
    bad = with_psi(S, (fp.index("⊥"), fp.index("b")))
    r = validate_system(bad.to_metamorphism_system())
    assert not r and r.witness


def test_s1_s2_imply_s3_to_s5():
    rng = random.Random(7)
    seen = 0
    for _ in range(400):
        shape, posets, psi, phi = system_gen.random_system(rng)
        S = system_gen.build(shape, posets, psi, phi)
        if all(check_S1_S2(S).values()):
            seen += 1
            assert all(check_S3_S5(S).values())
    assert seen > 20
