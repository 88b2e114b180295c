import pytest

from invsemi.connectivity import is_tightly_connected
from invsemi.errors import CapExceeded, InputError
from invsemi.isomorphism import are_isomorphic
from invsemi.munn import (
    Semilattice, chain, enumerate_semilattices, from_hasse, from_inverse_semigroup,
    ideal_isomorphisms, load_semilattice, munn_representation, munn_semigroup, principal_ideal,
)
from invsemi.semigroup import FiniteInverseSemigroup

from conftest import semilattice_semigroup
from oracles import munn_count


def leq_lists(E):
    return E.leq_matrix.tolist()


def test_chain_munn_semigroup_is_the_chain():
    E = chain(2)
    T = munn_semigroup(E)
    assert T.order == 2
    assert are_isomorphic(T, semilattice_semigroup(E))
    assert munn_semigroup(chain(1)).order == 1


def test_figure1_semilattice(figure1):
    assert figure1.labels == ["0", "f0", "f1", "f2", "e0", "e1"]
    assert figure1.bottom() == 0
    e0, f0, f1 = (figure1.index(s) for s in ("e0", "f0", "f1"))
    assert figure1.meet[e0, figure1.index("e1")] == f1
    assert principal_ideal(figure1, e0) == (0, f0, f1, e0)
    assert len(ideal_isomorphisms(figure1, e0, figure1.index("e1"))) == 2


def test_figure1_munn_structure(figure1, figure1_munn):
    T = figure1_munn
    assert T.order == munn_count(leq_lists(figure1)) == 18
    D = T.green("D")
    assert D.sizes() == [1, 8, 9]
    # three D-classes forming a chain
    reps = [min(b) for b in D.blocks]
    assert all(D.leq(a, b) or D.leq(b, a) for a in reps for b in reps)
    f0 = T.idempotent_of(figure1.index("f0"))
    zero = T.idempotent_of(0)
    lower = sorted({zero} | D.block(f0))
    assert len(lower) == 10
    sub, _ = T.restrict(lower)
    assert FiniteInverseSemigroup(sub).is_combinatorial()
    e0 = T.idempotent_of(figure1.index("e0"))
    H = T.green("H")
    h_classes = {H.block(x) for x in D.block(e0)}
    assert sorted(len(h) for h in h_classes) == [2, 2, 2, 2]
    preds = T.structural_predicates()
    assert is_tightly_connected(T)
    assert preds.is_fundamental and not preds.is_combinatorial
    assert not preds.has_nontrivial_isolated_subgroup


def test_munn_labels(figure1_munn):
    labels = figure1_munn.labels
    assert "1_e0" in labels and "1_0" in labels
    assert "e0>e1/0" in labels and "e0>e1/1" in labels
    assert len(set(labels)) == 18


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 5), (5, 15), (6, 53)])
def test_semilattice_counts(n, count):
    assert len(enumerate_semilattices(n)) == count


def test_munn_semigroups_of_small_semilattices():
    for n in range(1, 6):
        for E in enumerate_semilattices(n):
            T = munn_semigroup(E)
            assert T.order == munn_count(leq_lists(E))
            assert len(T.idempotents) == E.order
            ET = from_inverse_semigroup(T)
            assert are_isomorphic(semilattice_semigroup(ET), semilattice_semigroup(E))
            assert T.is_fundamental()


def test_munn_representation(catalog):
    for S in catalog:
        T, images = munn_representation(S)
        injective = len(set(images)) == S.order
        assert injective == S.is_fundamental()
        if injective:
            # full: every idempotent of T_E is hit
            assert set(T.idempotents) <= set(images)


def test_munn_cap(figure1):
    with pytest.raises(CapExceeded):
        munn_semigroup(figure1, cap=5)


def test_semilattice_validation():
    with pytest.raises(InputError):
        Semilattice([[0, 1], [0, 1]])
    with pytest.raises(InputError):
        Semilattice([[1, 0], [0, 1]])
    with pytest.raises(InputError):
        from_hasse(2, [(0, 1), (1, 0)])
    with pytest.raises(InputError) as err:
        from_hasse(2, [])
    assert err.value.witness == (0, 1)
    with pytest.raises(InputError):
        from_hasse(2, [(0, 5)])
    with pytest.raises(InputError):
        Semilattice([[0]], labels=["a", "b"])


def test_load_semilattice_forms():
    a = load_semilattice({"meet": [[0, 0], [0, 1]]})
    b = load_semilattice({"order": 2, "hasse": [(0, 1)], "labels": ["lo", "hi"]})
    assert (a.meet == b.meet).all() and b.labels == ["lo", "hi"]
    with pytest.raises(InputError):
        load_semilattice({})


def test_semilattices_are_tightly_connected():
    for n in range(1, 6):
        for E in enumerate_semilattices(n):
            assert is_tightly_connected(semilattice_semigroup(E))
