"""Partial automorphism monoids and the harnesses built on them.

``PA(S)`` holds every isomorphism between inverse subsemigroups of ``S``;
``PSA(S)`` every isomorphism between arbitrary subsemigroups (``∅``
included in both).  Elements are partial bijections on ``S``'s index set,
so each monoid is re-validated as an abstract inverse semigroup and all
of :mod:`invsemi.semigroup` applies to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import pbij
from .errors import CapExceeded, InputError, InvariantFailure, TheoryViolation
from .isomorphism import (
    DEFAULT_MAX_STEPS, are_isomorphic, automorphisms, canonical_key,
    find_isomorphism, isomorphisms,
)
from .lattice import (
    ALL, INVERSE, LatticeIsomorphism, determinability_hypotheses, e_bijection,
    classify_e_bijection, enumerate_subsemigroups, examine_lattice_isomorphism,
    is_lattice_isomorphism,
)
from .semigroup import FiniteInverseSemigroup, Semigroup, from_partial_bijections, is_homomorphism

PA = "PA"
PSA = "PSA"


@dataclass(frozen=True, order=True)
class PartialAutomorphism:
    domain_node: int
    target_node: int
    map: pbij.PartialBijection


class PartialAutomorphismMonoid:
    """``PA(S)`` or ``PSA(S)`` with element labels and the monoid table."""

    def __init__(self, parent, mode, lattice, elements):
        self.parent = parent
        self.mode = mode
        self.lattice = lattice
        self.elements = list(elements)
        self.monoid = from_partial_bijections([a.map for a in self.elements])
        self.index = {a.map: i for i, a in enumerate(self.elements)}
        n = parent.order
        self.identity = self.index[pbij.PartialBijection.identity(n)]
        self.empty = self.index[pbij.PartialBijection.empty(n)]
        self.idempotent_of_node = [
            self.index[pbij.PartialBijection.identity(n, lattice.elements(i))]
            for i in range(len(lattice))
        ]
        self.node_of_idempotent = {e: i for i, e in enumerate(self.idempotent_of_node)}
        if sorted(self.monoid.idempotents) != sorted(self.idempotent_of_node):
            raise InvariantFailure("idempotents are not exactly the identities 1_H")

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    @cached_property
    def units(self):
        whole = len(self.lattice) - 1
        return [i for i, a in enumerate(self.elements)
                if a.domain_node == whole and a.target_node == whole]

    def summary(self):
        return {
            "order": self.order,
            "idempotent_count": len(self.monoid.idempotents),
            "unit_group_order": len(self.units),
        }

    def contains(self, f):
        return f in self.index


def _node_semigroup(S, members):
    sub, elems = S.restrict(members)
    return Semigroup(sub, check=False), elems


def build_pa(S, mode=PA, cap=5_000, lattice_cap=20_000, search_limit=DEFAULT_MAX_STEPS):
    """Build ``PA(S)`` (isomorphisms between inverse subsemigroups) or ``PSA(S)``."""
    if mode not in (PA, PSA):
        raise InputError(f"unknown mode {mode!r}")
    if mode == PA and not isinstance(S, FiniteInverseSemigroup):
        raise InputError("PA needs an inverse semigroup")
    L = enumerate_subsemigroups(S, INVERSE if mode == PA else ALL, lattice_cap)
    n = S.order
    subs = []
    buckets = {}
    for i in range(len(L)):
        sub, elems = _node_semigroup(S, sorted(L.elements(i)))
        subs.append((sub, elems))
        buckets.setdefault(canonical_key(sub, inverse=False), []).append(i)
    # classes: list of (rep node, aut group of rep, {node: iso rep -> node})
    classes = []
    for nodes in buckets.values():
        pending = list(nodes)
        while pending:
            rep = pending.pop(0)
            rsub = subs[rep][0]
            members = {rep: tuple(range(rsub.order))}
            rest = []
            for j in pending:
                iso = find_isomorphism(rsub, subs[j][0], max_steps=search_limit)
                if iso is None:
                    rest.append(j)
                else:
                    members[j] = iso
            pending = rest
            auts = automorphisms(rsub, max_steps=search_limit)
            classes.append((rep, auts, members))
    total = sum(len(auts) * len(members) ** 2 for _, auts, members in classes)
    if total > cap:
        raise CapExceeded(f"{mode}(S) would have {total} elements, cap {cap}")
    elements = []
    for rep, auts, members in classes:
        for h, iso_h in members.items():
            h_elems = subs[h][1]
            # element of H sitting at position iso_h[k] corresponds to rep position k
            back = {iso_h[k]: k for k in range(len(iso_h))}
            for k_node, iso_k in members.items():
                k_elems = subs[k_node][1]
                for a in auts:
                    pairs = [(h_elems[p], k_elems[iso_k[a[back[p]]]]) for p in range(len(h_elems))]
                    elements.append(PartialAutomorphism(
                        h, k_node, pbij.PartialBijection.from_pairs(n, pairs)))
    elements.sort()
    if len(set(a.map for a in elements)) != len(elements):
        raise InvariantFailure("duplicate partial automorphisms")
    return PartialAutomorphismMonoid(S, mode, L, elements)


def idempotent_lattice_matches(M):
    """The map ``1_H -> H`` is an order isomorphism onto the subsemigroup lattice."""
    L = M.lattice
    E = M.monoid
    idem = M.idempotent_of_node
    return all(
        L.leq(i, j) == E.leq(idem[i], idem[j])
        for i in range(len(L)) for j in range(len(L))
    )


def unit_group_is_automorphism_group(M):
    auts = {tuple(a) for a in automorphisms(M.parent)}
    units = {tuple(M.elements[u].map.images) for u in M.units}
    return auts == units


# -- PA-isomorphisms ------------------------------------------------------------


@dataclass(frozen=True)
class PAIsomorphism:
    source: PartialAutomorphismMonoid
    target: PartialAutomorphismMonoid
    element_map: tuple

    def __call__(self, i):
        return self.element_map[i]

    @cached_property
    def lattice_map(self):
        return induced_lattice_isomorphism(self)


def pa_isomorphisms(MS, MT, limit=DEFAULT_MAX_STEPS):
    """Yield monoid isomorphisms ``PA(S) -> PA(T)`` (identity pinned to identity)."""
    if MS.order != MT.order:
        return
    for phi in isomorphisms(MS.monoid, MT.monoid, fixed={MS.identity: MT.identity},
                            max_steps=limit):
        if phi[MS.empty] != MT.empty:
            raise InvariantFailure("monoid isomorphism does not fix the empty map")
        yield PAIsomorphism(MS, MT, phi)


def induced_lattice_isomorphism(Phi):
    """Node map ``H -> K`` with ``1_H Phi = 1_K``, validated as a lattice isomorphism."""
    MS, MT = Phi.source, Phi.target
    node_map = []
    for i, e in enumerate(MS.idempotent_of_node):
        img = Phi(e)
        if img not in MT.node_of_idempotent:
            raise InvariantFailure(f"image of 1_H for node {i} is not an identity map")
        node_map.append(MT.node_of_idempotent[img])
    node_map = tuple(node_map)
    if not is_lattice_isomorphism(MS.lattice, MT.lattice, node_map):
        raise InvariantFailure("induced node map is not a lattice isomorphism")
    return LatticeIsomorphism(MS.lattice, MT.lattice, node_map)


def is_induced_pa(Phi, f):
    """Whether ``Phi`` is conjugation by the bijection ``f: S -> T``."""
    MS, MT = Phi.source, Phi.target
    n = MS.parent.order
    if len(f) != n or sorted(f) != list(range(MT.parent.order)):
        return False
    for i, a in enumerate(MS.elements):
        conj = pbij.PartialBijection.from_pairs(n, [(f[x], f[y]) for x, y in a.map.pairs()])
        if conj != MT.elements[Phi(i)].map:
            return False
    return True


def check_restriction_psa_to_pa(Phi_psa, PA_S=None, PA_T=None):
    """Restrict a PSA-isomorphism of inverse semigroups to their PA monoids."""
    MS, MT = Phi_psa.source, Phi_psa.target
    S, T = MS.parent, MT.parent
    if not isinstance(S, FiniteInverseSemigroup) or not isinstance(T, FiniteInverseSemigroup):
        raise InputError("both semigroups must be inverse")
    PA_S = PA_S or build_pa(S, PA)
    PA_T = PA_T or build_pa(T, PA)
    phi = []
    for a in PA_S.elements:
        img = MT.elements[Phi_psa(MS.index[a.map])].map
        if img not in PA_T.index:
            raise TheoryViolation("restriction leaves PA(T)", witness=str(a.map))
        phi.append(PA_T.index[img])
    if sorted(phi) != list(range(PA_T.order)):
        raise TheoryViolation("restriction is not onto PA(T)")
    if not is_homomorphism(PA_S.monoid, PA_T.monoid, phi):
        raise TheoryViolation("restriction is not multiplicative")
    return PAIsomorphism(PA_S, PA_T, tuple(phi))


# -- harnesses ------------------------------------------------------------------


def _monoid(S, mode, cap, cache):
    """``build_pa`` memoised in ``cache`` (keyed by object identity and mode)."""
    if cache is None:
        return build_pa(S, mode, cap)
    key = (id(S), mode)
    if key not in cache:
        try:
            cache[key] = (S, build_pa(S, mode, cap))
        except CapExceeded as exc:
            cache[key] = (S, exc)
    got = cache[key][1]
    if isinstance(got, CapExceeded):
        raise got
    return got


def _dual_chains(S, T):
    """Whether ``(S, <=)`` and ``(T, <=)`` are dually isomorphic chains."""
    if not isinstance(T, FiniteInverseSemigroup) or S.order != T.order:
        return False
    return S.is_chain() and T.is_chain()


def _dual_chain_map(S, T):
    """The order-reversing bijection between two chains of the same length."""
    s_sorted = sorted(range(S.order), key=lambda x: int(S.leq_matrix[:, x].sum()))
    t_sorted = sorted(range(T.order), key=lambda y: -int(T.leq_matrix[:, y].sum()))
    f = [0] * S.order
    for x, y in zip(s_sorted, t_sorted):
        f[x] = y
    return tuple(f)


def _examine_pa_isomorphism(Phi, isos_st):
    """Record for one PA-isomorphism: dual-chain branch or base-bijection branch."""
    MS, MT = Phi.source, Phi.target
    S, T = MS.parent, MT.parent
    Psi = Phi.lattice_map
    try:
        psi_e = e_bijection(Psi)
        kind = classify_e_bijection(S, T, psi_e)
    except TheoryViolation as exc:
        return {"psi_E_kind": "invalid", "verdict": "violation", "witness": str(exc)}
    rec = {"psi_E_kind": kind}
    if kind == "dual":
        if not (_dual_chains(S, T) and S.is_semilattice()):
            rec["verdict"] = "violation"
            rec["witness"] = "dual E-bijection outside the dual-chain case"
            return rec
        f = tuple(psi_e[x] for x in range(S.order))
        ok = f == _dual_chain_map(S, T) and is_induced_pa(Phi, f)
        rec["verdict"] = "dual-chain" if ok else "violation"
        rec["induced"] = ok
        return rec
    if kind != "isomorphism":
        rec["verdict"] = "violation"
        rec["witness"] = "E-bijection is neither an isomorphism nor a dual isomorphism"
        return rec
    lat = examine_lattice_isomorphism(Psi, isos_st)
    rec.update(lat.to_json())
    if lat.verdict != "isomorphism":
        return rec
    psi_hat = lat.psi_hat
    rec["induced_pa"] = is_induced_pa(Phi, psi_hat)
    rec["unique_pa"] = [f for f in isos_st if is_induced_pa(Phi, f)] == [psi_hat]
    if not (rec["induced_pa"] and rec["unique_pa"]):
        rec["verdict"] = "violation"
        rec["witness"] = "base bijection is not the unique isomorphism inducing Phi"
    return rec


def _finish(report):
    bad = report["lhs"] != report["rhs"] or any(
        r["verdict"] == "violation" for r in report["records"]
    )
    report["status"] = "violation" if bad else "verified"
    return report


def verify_pa_determinability(S, T, cap=5_000, search_limit=DEFAULT_MAX_STEPS, cache=None,
                              max_records=None):
    """``PA(S) ≅ PA(T)`` iff ``S ≅ T`` or dually isomorphic chains, plus the per-Phi dichotomy."""
    hyp = determinability_hypotheses(S)
    report = {"schema": 1, "mode": "pa", "hypotheses": hyp, "records": []}
    if not isinstance(T, FiniteInverseSemigroup):
        raise InputError("T must be an inverse semigroup in PA mode")
    if not all(hyp.values()):
        report["status"] = "out-of-scope"
        return report
    try:
        MS, MT = _monoid(S, PA, cap, cache), _monoid(T, PA, cap, cache)
        isos_st = list(isomorphisms(S, T, max_steps=search_limit))
        report["rhs"] = bool(isos_st) or _dual_chains(S, T)
        report["monoids"] = [MS.summary(), MT.summary()]
        report["lhs"] = False
        for k, Phi in enumerate(pa_isomorphisms(MS, MT, search_limit)):
            report["lhs"] = True
            report["records"].append(_examine_pa_isomorphism(Phi, isos_st))
            if max_records is not None and k + 1 >= max_records:
                report["truncated"] = True
                break
    except CapExceeded as exc:
        report["status"] = "inconclusive"
        report["reason"] = str(exc)
        return report
    return _finish(report)


def verify_semilattice_pa_criterion(S, T, cap=5_000, search_limit=DEFAULT_MAX_STEPS,
                                    cache=None):
    """For a semilattice ``S``: ``PA(S) ≅ PA(T)`` iff ``S ≅ T`` or ``S`` is a chain and ``T ≅ S^d``.

    Also checks that every PA-isomorphism is induced by its E-bijection,
    which is an isomorphism or (for chains) a dual isomorphism.
    """
    if not S.is_semilattice():
        raise InputError("S must be a semilattice")
    report = {"schema": 1, "mode": "pa-semilattice", "records": []}
    try:
        MS, MT = _monoid(S, PA, cap, cache), _monoid(T, PA, cap, cache)
        report["rhs"] = are_isomorphic(S, T) or (
            S.is_chain() and T.is_semilattice() and T.is_chain() and S.order == T.order
        )
        report["lhs"] = False
        for Phi in pa_isomorphisms(MS, MT, search_limit):
            report["lhs"] = True
            try:
                psi_e = e_bijection(Phi.lattice_map)
                kind = classify_e_bijection(S, T, psi_e)
            except TheoryViolation as exc:
                report["records"].append({"psi_E_kind": "invalid", "verdict": "violation",
                                          "witness": str(exc)})
                continue
            f = tuple(psi_e[x] for x in range(S.order))
            induced = is_induced_pa(Phi, f)
            ok = induced and (kind == "isomorphism" or (kind == "dual" and S.is_chain()))
            report["records"].append({
                "psi_E_kind": kind, "induced": induced,
                "verdict": "ok" if ok else "violation",
            })
    except CapExceeded as exc:
        report["status"] = "inconclusive"
        report["reason"] = str(exc)
        return report
    return _finish(report)


def verify_psa_determinability(S, T, cap=5_000, search_limit=DEFAULT_MAX_STEPS, cache=None,
                               max_records=None):
    """``PSA(S) ≅ PSA(T)`` iff ``S ≅ T`` or dually isomorphic chains, for any semigroup ``T``."""
    hyp = determinability_hypotheses(S)
    report = {"schema": 1, "mode": "psa", "hypotheses": hyp, "records": []}
    if not all(hyp.values()):
        report["status"] = "out-of-scope"
        return report
    t_inverse = isinstance(T, FiniteInverseSemigroup)
    try:
        MS, MT = _monoid(S, PSA, cap, cache), _monoid(T, PSA, cap, cache)
        report["monoids"] = [MS.summary(), MT.summary()]
        report["rhs"] = t_inverse and (are_isomorphic(S, T) or _dual_chains(S, T))
        report["lhs"] = False
        PA_S = PA_T = None
        for k, Phi in enumerate(pa_isomorphisms(MS, MT, search_limit)):
            report["lhs"] = True
            rec = {"t_inverse": t_inverse}
            if not t_inverse:
                rec["verdict"] = "violation"
                rec["witness"] = "PSA-isomorphic to a non-inverse semigroup"
            else:
                rec["t_no_ntis"] = not T.has_nontrivial_isolated_subgroup()
                if PA_S is None:
                    PA_S, PA_T = _monoid(S, PA, cap, cache), _monoid(T, PA, cap, cache)
                try:
                    check_restriction_psa_to_pa(Phi, PA_S, PA_T)
                    rec["restriction"] = True
                    rec["verdict"] = "ok" if rec["t_no_ntis"] else "violation"
                except TheoryViolation as exc:
                    rec["restriction"] = False
                    rec["verdict"] = "violation"
                    rec["witness"] = str(exc)
            report["records"].append(rec)
            if max_records is not None and k + 1 >= max_records:
                report["truncated"] = True
                break
    except CapExceeded as exc:
        report["status"] = "inconclusive"
        report["reason"] = str(exc)
        return report
    return _finish(report)
