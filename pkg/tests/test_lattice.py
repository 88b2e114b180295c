import pytest

from invsemi.errors import CapExceeded, InputError
from invsemi.isomorphism import automorphisms, isomorphisms
from invsemi.lattice import (
    ALL, INVERSE, base_bijection, base_partial_bijection, classify_e_bijection,
    conjugation_transfer, default_r_choice, determinability_hypotheses, e_bijection,
    enumerate_subsemigroups, examine_lattice_isomorphism, green_preservation_violations,
    induced_node_map, is_induced_by, is_lattice_isomorphism, lattice_isomorphisms,
    tight_cover_violations, verify_lattice_determinability,
)
from invsemi.munn import chain
from invsemi.semigroup import FiniteInverseSemigroup, Semigroup

from conftest import semilattice_semigroup
from oracles import lattice_isomorphism_count, subsemigroups, tl

# the diamond 0 < 1, 2 < 3 and the "Y" 0 < 1 < 2, 3 are not isomorphic but
# have isomorphic lattices of subsemigroups
DIAMOND = FiniteInverseSemigroup([[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]])
WYE = FiniteInverseSemigroup([[0, 0, 0, 0], [0, 1, 1, 1], [0, 1, 2, 1], [0, 1, 1, 3]])


def test_chain_lattice_has_four_nodes(chain2):
    L = enumerate_subsemigroups(chain2)
    assert len(L) == 4
    assert [sorted(L.elements(i)) for i in range(4)] == [[], [0], [1], [0, 1]]
    assert L.atoms == {1, 2} and L.heights == [0, 1, 1, 2]
    assert L.join(1, 2) == 3


def test_node_counts_match_brute_force(catalog):
    for S in catalog:
        raw = tl(S)
        assert len(enumerate_subsemigroups(S, INVERSE)) == len(subsemigroups(raw, S.inv.tolist()))
        assert len(enumerate_subsemigroups(S, ALL)) == len(subsemigroups(raw))


def test_all_mode_accepts_plain_semigroups():
    left_zero = Semigroup([[0, 0], [1, 1]])
    assert len(enumerate_subsemigroups(left_zero, ALL)) == 4
    with pytest.raises(InputError):
        enumerate_subsemigroups(left_zero, INVERSE)
    with pytest.raises(InputError):
        enumerate_subsemigroups(left_zero, "some")


def test_lattice_cap(brandt5):
    with pytest.raises(CapExceeded):
        enumerate_subsemigroups(brandt5, cap=3)


def test_lattice_isomorphism_counts_match_brute_force(catalog):
    small = [S for S in catalog if len(enumerate_subsemigroups(S)) <= 7]
    for S in small:
        LS = enumerate_subsemigroups(S)
        for T in small:
            LT = enumerate_subsemigroups(T)
            got = list(lattice_isomorphisms(LS, LT))
            assert all(is_lattice_isomorphism(LS, LT, P.node_map) for P in got)
            want = lattice_isomorphism_count(tl(S), S.inv.tolist(), tl(T), T.inv.tolist())
            assert len(got) == want


def test_automorphisms_induce_lattice_automorphisms(catalog):
    for S in catalog:
        L = enumerate_subsemigroups(S)
        for f in automorphisms(S):
            node_map = induced_node_map(L, L, f)
            assert node_map is not None and is_lattice_isomorphism(L, L, node_map)


def test_brandt_base_maps(brandt5):
    L = enumerate_subsemigroups(brandt5)
    psis = list(lattice_isomorphisms(L, L))
    auts = list(isomorphisms(brandt5, brandt5))
    for Psi in psis:
        psi_e = e_bijection(Psi)
        assert classify_e_bijection(brandt5, brandt5, psi_e) in ("isomorphism", "dual", "weak")
        rec = examine_lattice_isomorphism(Psi, auts)
        if rec.psi_E_kind == "isomorphism":
            assert rec.verdict == "isomorphism"
            assert rec.psi_hat in auts and rec.induced and rec.unique
            psi = base_partial_bijection(Psi)
            assert set(psi) == brandt5.nongroup_or_idempotent
            assert not green_preservation_violations(brandt5, brandt5, psi)
            assert not tight_cover_violations(brandt5, brandt5, psi)


def test_identity_lattice_map_gives_identity(catalog, qualifying):
    for S in qualifying:
        L = enumerate_subsemigroups(S)
        Psi = next(P for P in lattice_isomorphisms(L, L) if P.node_map == tuple(range(len(L))))
        assert base_bijection(Psi) == tuple(range(S.order))
        assert is_induced_by(Psi, tuple(range(S.order)))


def test_weak_e_bijection_between_semilattices():
    LD, LY = enumerate_subsemigroups(DIAMOND), enumerate_subsemigroups(WYE)
    psis = list(lattice_isomorphisms(LD, LY))
    assert psis
    assert {classify_e_bijection(DIAMOND, WYE, e_bijection(P)) for P in psis} == {"weak"}
    rep = verify_lattice_determinability(DIAMOND, WYE)
    assert rep["status"] == "verified" and rep["lattice_isomorphic"] and not rep["isomorphic"]
    assert {r["verdict"] for r in rep["records"]} == {"skipped"}


def test_three_chain_has_weak_self_map():
    C3 = semilattice_semigroup(chain(3))
    L = enumerate_subsemigroups(C3)
    kinds = {classify_e_bijection(C3, C3, e_bijection(P)) for P in lattice_isomorphisms(L, L)}
    assert "weak" in kinds and "isomorphism" in kinds


def test_chain_lattice_has_dual_map(chain2):
    L = enumerate_subsemigroups(chain2)
    kinds = sorted(
        classify_e_bijection(chain2, chain2, e_bijection(P)) for P in lattice_isomorphisms(L, L)
    )
    assert kinds == ["dual", "isomorphism"]


def test_base_bijection_rejects_isolated_subgroups(z2):
    L = enumerate_subsemigroups(z2)
    Psi = next(lattice_isomorphisms(L, L))
    with pytest.raises(InputError):
        base_bijection(Psi)


def test_default_r_choice(brandt5, figure1_munn):
    assert default_r_choice(brandt5) == {3: 1, 4: 2}
    choice = default_r_choice(figure1_munn)
    R = figure1_munn.green("R")
    for e, r in choice.items():
        assert r in figure1_munn.nongroup and R.related(e, r)


def test_conjugation_transfer_on_automorphisms(catalog):
    for S in catalog:
        for f in automorphisms(S):
            hyp, bad = conjugation_transfer(S, S, f)
            assert hyp and not bad


def test_hypotheses(brandt5, z2, figure1_munn):
    assert all(determinability_hypotheses(brandt5).values())
    assert all(determinability_hypotheses(figure1_munn).values())
    assert determinability_hypotheses(z2) == {
        "tightly_connected": True, "fundamental": False, "no_ntis": False,
    }


def test_harness_on_brandt_and_out_of_scope(brandt5, z2, chain2):
    rep = verify_lattice_determinability(brandt5, brandt5)
    assert rep["status"] == "verified" and rep["isomorphic"] and rep["lattice_isomorphic"]
    assert rep["schema"] == 1 and rep["mode"] == "lattice"
    assert all(r["verdict"] in ("isomorphism", "skipped") for r in rep["records"])
    assert verify_lattice_determinability(z2, z2)["status"] == "out-of-scope"
    neg = verify_lattice_determinability(chain2, z2)
    assert neg["status"] == "verified" and not neg["isomorphic"] and not neg["lattice_isomorphic"]
    capped = verify_lattice_determinability(brandt5, brandt5, lattice_cap=2)
    assert capped["status"] == "inconclusive"


def test_harness_on_figure1_munn(figure1_munn):
    L = enumerate_subsemigroups(figure1_munn)
    assert len(L) == 91 and len(list(lattice_isomorphisms(L, L))) == 2
    rep = verify_lattice_determinability(figure1_munn, figure1_munn, max_isomorphisms=1)
    assert rep["status"] == "verified" and rep["truncated"]
    iso = [r for r in rep["records"] if r["psi_E_kind"] == "isomorphism"]
    assert iso and all(r["verdict"] == "isomorphism" and r["unique"] for r in iso)
