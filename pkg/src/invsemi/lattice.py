"""Subsemigroup lattices and the maps read off lattice isomorphisms.

Nodes are stored as Python ``int`` bitsets over element indices, so
intersection is ``&`` and inclusion is ``a & ~b == 0``.  From a lattice
isomorphism ``Psi: L(S) -> L(T)`` we extract

* the E-bijection on idempotents (atoms are the singletons ``{e}``),
* the base partial bijection on nongroup elements and idempotents,
  matching ``<x>`` to the unique ``<y>`` in the image node with the
  right R- and L-classes,
* the base bijection on all of ``S``, which for group elements writes
  ``a = r q^-1`` with ``r`` a fixed nongroup element R-related to ``aa^-1``
  and ``q`` in the H-class of ``r``, and sends ``a`` to
  ``(r psi)(q psi)^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .connectivity import is_tightly_connected, tightly_covers
from .errors import CapExceeded, InputError, InvariantFailure, TheoryViolation
from .isomorphism import isomorphisms
from .semigroup import FiniteInverseSemigroup, is_homomorphism

INVERSE = "inverse"
ALL = "all"


def _bits(elements):
    out = 0
    for x in elements:
        out |= 1 << x
    return out


def _members(bits):
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def _closure(tl, inv, members, seed):
    """Close ``members ∪ seed`` (``members`` already closed) under products and ``inv``."""
    inside = set(members)
    mlist = list(members)
    queue = []

    def add(v):
        if v not in inside:
            inside.add(v)
            mlist.append(v)
            queue.append(v)

    for s in seed:
        add(s)
    while queue:
        u = queue.pop()
        if inv is not None:
            add(inv[u])
        row = tl[u]
        for v in list(mlist):
            add(row[v])
            add(tl[v][u])
    return inside


class SubsemigroupLattice:
    """All subsemigroups (``mode="all"``) or inverse subsemigroups of ``S``, with ∅."""

    def __init__(self, parent, mode, nodes):
        self.parent = parent
        self.mode = mode
        self.nodes = sorted(nodes, key=lambda b: (bin(b).count("1"), b))
        self.index = {b: i for i, b in enumerate(self.nodes)}

    def __len__(self):
        return len(self.nodes)

    def elements(self, i):
        return frozenset(_members(self.nodes[i]))

    def node_of(self, elements):
        return self.index[_bits(elements)]

    def leq(self, i, j):
        return self.nodes[i] & ~self.nodes[j] == 0

    @cached_property
    def bottom(self):
        return 0

    @cached_property
    def down_sets(self):
        return [
            frozenset(j for j, bj in enumerate(self.nodes) if bj & ~bi == 0)
            for bi in self.nodes
        ]

    @cached_property
    def up_sets(self):
        return [
            frozenset(j for j, bj in enumerate(self.nodes) if bi & ~bj == 0)
            for bi in self.nodes
        ]

    @cached_property
    def lower_covers(self):
        out = []
        for i in range(len(self.nodes)):
            below = self.down_sets[i] - {i}
            out.append(frozenset(j for j in below if not any(
                k != j and j in self.down_sets[k] for k in below
            )))
        return out

    @cached_property
    def atoms(self):
        return frozenset(i for i, lc in enumerate(self.lower_covers) if lc == {self.bottom})

    @cached_property
    def heights(self):
        h = [0] * len(self.nodes)
        for i in range(len(self.nodes)):
            h[i] = max((h[j] + 1 for j in self.lower_covers[i]), default=0)
        return h

    def node_invariant(self, i):
        return (
            self.heights[i], len(self.down_sets[i]), len(self.up_sets[i]),
            len(self.lower_covers[i]), len(self.atoms & self.down_sets[i]),
        )

    def join(self, i, j):
        """Least node containing both."""
        S = self.parent
        inv = S.inv.tolist() if self.mode == INVERSE else None
        got = _closure(S.table.tolist(), inv, _members(self.nodes[i]), _members(self.nodes[j]))
        return self.index[_bits(got)]


def enumerate_subsemigroups(S, mode=INVERSE, cap=20_000):
    """Lattice of (inverse) subsemigroups of ``S``, grown from ∅ by single-element closures."""
    if mode not in (INVERSE, ALL):
        raise InputError(f"unknown mode {mode!r}")
    if mode == INVERSE and not isinstance(S, FiniteInverseSemigroup):
        raise InputError("inverse mode needs an inverse semigroup")
    tl = S.table.tolist()
    inv = S.inv.tolist() if mode == INVERSE else None
    n = S.order
    found = {0}
    queue = [0]
    while queue:
        b = queue.pop()
        members = _members(b)
        for s in range(n):
            if b >> s & 1:
                continue
            nb = _bits(_closure(tl, inv, members, [s]))
            if nb not in found:
                found.add(nb)
                queue.append(nb)
                if len(found) > cap:
                    raise CapExceeded(f"subsemigroup lattice exceeds cap {cap}")
    return SubsemigroupLattice(S, mode, found)


# -- lattice isomorphisms -------------------------------------------------------


@dataclass(frozen=True)
class LatticeIsomorphism:
    source: SubsemigroupLattice
    target: SubsemigroupLattice
    node_map: tuple

    def __call__(self, i):
        return self.node_map[i]

    def image_set(self, elements):
        return self.target.elements(self.node_map[self.source.node_of(elements)])

    @cached_property
    def inverse_map(self):
        out = [0] * len(self.node_map)
        for i, j in enumerate(self.node_map):
            out[j] = i
        return tuple(out)


def is_lattice_isomorphism(LS, LT, node_map):
    n = len(LS)
    if len(LT) != n or sorted(node_map) != list(range(n)):
        return False
    return all(
        LS.leq(i, j) == LT.leq(node_map[i], node_map[j]) for i in range(n) for j in range(n)
    )


def lattice_isomorphisms(LS, LT, limit=10_000_000):
    """Yield every inclusion-preserving bijection ``L(S) -> L(T)`` (both ways)."""
    n = len(LS)
    if n != len(LT):
        return
    inv_s = [LS.node_invariant(i) for i in range(n)]
    inv_t = [LT.node_invariant(j) for j in range(n)]
    if sorted(inv_s) != sorted(inv_t):
        return
    buckets = {}
    for j, s in enumerate(inv_t):
        buckets.setdefault(s, []).append(j)
    order = sorted(range(n), key=lambda i: (LS.heights[i], len(buckets[inv_s[i]]), i))
    phi = [-1] * n
    used = [False] * n
    steps = 0

    def search(k):
        nonlocal steps
        if k == n:
            yield LatticeIsomorphism(LS, LT, tuple(phi))
            return
        i = order[k]
        for j in buckets[inv_s[i]]:
            if used[j]:
                continue
            steps += 1
            if steps > limit:
                raise CapExceeded(f"lattice isomorphism search exceeded {limit} steps")
            if all(
                LS.leq(m, i) == LT.leq(phi[m], j) and LS.leq(i, m) == LT.leq(j, phi[m])
                for m in order[:k]
            ):
                phi[i] = j
                used[j] = True
                yield from search(k + 1)
                used[j] = False
                phi[i] = -1

    yield from search(0)


def induced_node_map(LS, LT, f):
    """Node map ``H -> f(H)``; ``None`` if some image is not a node."""
    out = []
    for i in range(len(LS)):
        img = frozenset(f[x] for x in LS.elements(i))
        j = LT.index.get(_bits(img))
        if j is None:
            return None
        out.append(j)
    return tuple(out)


def is_induced_by(Psi, f):
    """Whether ``H Psi = {f(h) : h in H}`` for every node ``H``."""
    return all(
        frozenset(f[x] for x in Psi.source.elements(i)) == Psi.target.elements(Psi(i))
        for i in range(len(Psi.source))
    )


# -- maps on elements -----------------------------------------------------------


def e_bijection(Psi):
    """``{e: e'}`` with ``{e} Psi = {e'}``."""
    S = Psi.source.parent
    out = {}
    for e in S.idempotents:
        img = Psi.target.elements(Psi(Psi.source.node_of([e])))
        if len(img) != 1:
            raise TheoryViolation(f"atom {{{e}}} maps to non-singleton {sorted(img)}", witness=(e,))
        (out[e],) = img
    return out


def classify_e_bijection(S, T, psi_e):
    """``"isomorphism"``, ``"dual"`` or ``"weak"`` (checking the weak-isomorphism law)."""
    es = list(S.idempotents)
    for e in es:
        for f in es:
            comparable = S.leq(e, f) or S.leq(f, e)
            comparable_img = T.leq(psi_e[e], psi_e[f]) or T.leq(psi_e[f], psi_e[e])
            if comparable != comparable_img:
                raise TheoryViolation("E-bijection does not preserve comparability", witness=(e, f))
            if not comparable and psi_e[S.mul(e, f)] != T.mul(psi_e[e], psi_e[f]):
                raise TheoryViolation("E-bijection breaks products of incomparable idempotents",
                                      witness=(e, f))
    if all(S.leq(e, f) == T.leq(psi_e[e], psi_e[f]) for e in es for f in es):
        return "isomorphism"
    if all(S.leq(e, f) == T.leq(psi_e[f], psi_e[e]) for e in es for f in es):
        return "dual"
    return "weak"


def _monogenic_nodes(L):
    S = L.parent
    return {x: L.node_of(S.inverse_closure([x])) for x in range(S.order)}


def base_partial_bijection(Psi, psi_e=None):
    """Map ``N_S ∪ E_S -> N_T ∪ E_T`` with ``<x> Psi = <x psi>`` and matching R/L-classes."""
    LS, LT = Psi.source, Psi.target
    S, T = LS.parent, LT.parent
    psi_e = e_bijection(Psi) if psi_e is None else psi_e
    nodes_t = _monogenic_nodes(LT)
    by_node = {}
    for y, node in nodes_t.items():
        by_node.setdefault(node, []).append(y)
    psi = dict(psi_e)
    for x in sorted(S.nongroup):
        target = Psi(LS.node_of(S.inverse_closure([x])))
        cands = [
            y for y in by_node.get(target, [])
            if T.d(y) == psi_e[S.d(x)] and T.r(y) == psi_e[S.r(x)]
        ]
        if len(cands) != 1:
            raise TheoryViolation(
                f"{len(cands)} candidates for the image of nongroup element {x}",
                witness={"x": x, "candidates": cands},
            )
        psi[x] = cands[0]
    for x in S.nongroup:
        if psi[S.inverse(x)] != T.inverse(psi[x]):
            raise TheoryViolation(f"psi does not commute with inversion at {x}", witness=(x,))
    if len(set(psi.values())) != len(psi) or set(psi.values()) != set(T.nongroup_or_idempotent):
        raise TheoryViolation("base partial bijection is not a bijection onto N_T ∪ E_T")
    return psi


def default_r_choice(S):
    """Least nongroup element R-related to each nonisolated idempotent."""
    R = S.green("R")
    isolated = S.isolated_idempotents()
    return {
        e: min(x for x in R.block(e) if x in S.nongroup)
        for e in S.idempotents
        if e not in isolated
    }


def base_bijection(Psi, r_choice=None, psi=None):
    """Extend the base partial bijection to all of ``S`` (tuple indexed by element)."""
    S, T = Psi.source.parent, Psi.target.parent
    if S.has_nontrivial_isolated_subgroup():
        raise InputError("precondition: S has a nontrivial isolated subgroup")
    if T.has_nontrivial_isolated_subgroup():
        raise TheoryViolation("T has a nontrivial isolated subgroup although S has none")
    psi = base_partial_bijection(Psi) if psi is None else psi
    choice = default_r_choice(S)
    if r_choice:
        choice.update(r_choice)
    H, R = S.green("H"), S.green("R")
    out = [-1] * S.order
    for x, y in psi.items():
        out[x] = y
    for e, r in choice.items():
        if r not in S.nongroup or not R.related(r, e):
            raise InputError(f"r_choice[{e}] = {r} is not a nongroup element of R_e")
        rpsi = psi[r]
        for a in H.block(e):
            qs = [q for q in H.block(r) if S.mul(r, S.inverse(q)) == a]
            if len(qs) != 1:
                raise InvariantFailure(f"{len(qs)} elements q with a = r q^-1 for a={a}")
            img = T.mul(rpsi, T.inverse(psi[qs[0]]))
            if a in psi and psi[a] != img:
                raise TheoryViolation(f"base bijection disagrees with psi at idempotent {a}")
            out[a] = img
    if -1 in out or sorted(out) != list(range(T.order)):
        raise TheoryViolation("base bijection is not a bijection S -> T", witness=out)
    for s in range(S.order):
        if out[S.d(s)] != T.d(out[s]) or out[S.r(s)] != T.r(out[s]):
            raise TheoryViolation(f"base bijection does not preserve R/L at {s}", witness=(s,))
    return tuple(out)


# -- structural property checks ---------------------------------------------------


def green_preservation_violations(S, T, psi):
    """Pairs in ``dom(psi)`` where R or L is not preserved in both directions."""
    dom = sorted(psi)
    bad = []
    for x in dom:
        for y in dom:
            for rel_s, rel_t in ((S.d, T.d), (S.r, T.r)):
                if (rel_s(x) == rel_s(y)) != (rel_t(psi[x]) == rel_t(psi[y])):
                    bad.append((x, y))
    return bad


def tight_cover_violations(S, T, psi):
    """``(e, x)`` with ``e`` tightly x-covered but ``(ex) psi != (e psi)(x psi)``."""
    bad = []
    for x in sorted(S.nongroup_or_idempotent):
        for e in S.idempotents:
            if tightly_covers(S, e, x) and psi[S.mul(e, x)] != T.mul(psi[e], psi[x]):
                bad.append((e, x))
    return bad


def conjugation_transfer(S, T, phi):
    """Check the idempotent-conjugation transfer property of a bijection ``phi``.

    Returns ``(hypotheses_hold, violations)``.  The hypotheses are: ``phi``
    preserves L-classes, restricts to an isomorphism of idempotents, and
    ``(fx) phi = (f phi)(x phi)`` for nongroup ``x`` and ``f <= xx^-1``.
    Violations list ``(e, x)`` where ``(x^-1 e x) phi`` differs from
    ``(x phi)^-1 (e phi) (x phi)``.
    """
    es = S.idempotents
    hyp = all(
        (S.r(x) == S.r(y)) == (T.r(phi[x]) == T.r(phi[y]))
        for x in range(S.order) for y in range(S.order)
    )
    hyp = hyp and all(phi[S.mul(e, f)] == T.mul(phi[e], phi[f]) for e in es for f in es)
    hyp = hyp and all(
        phi[S.mul(f, x)] == T.mul(phi[f], phi[x])
        for x in S.nongroup for f in es if S.leq(f, S.d(x))
    )
    if not hyp:
        return False, []
    bad = [
        (e, x)
        for x in sorted(S.nongroup) for e in es
        if phi[S.mul(S.inverse(x), e, x)] != T.mul(T.inverse(phi[x]), phi[e], phi[x])
    ]
    return True, bad


# -- determinability harness ------------------------------------------------------


def determinability_hypotheses(S):
    preds = S.structural_predicates()
    return {
        "tightly_connected": is_tightly_connected(S),
        "fundamental": preds.is_fundamental,
        "no_ntis": not preds.has_nontrivial_isolated_subgroup,
    }


@dataclass
class BaseMapRecord:
    node_map: tuple
    psi_E_kind: str
    verdict: str
    psi: dict = field(default=None, repr=False)
    psi_hat: tuple = None
    induced: bool = None
    unique: bool = None
    witness: object = None
    lemma_checks: dict = field(default_factory=dict)

    def to_json(self):
        out = {"psi_E_kind": self.psi_E_kind, "verdict": self.verdict}
        if self.psi_hat is not None:
            out["psi_hat"] = list(self.psi_hat)
        for key in ("induced", "unique", "witness"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.lemma_checks:
            out["checks"] = self.lemma_checks
        return out


def examine_lattice_isomorphism(Psi, isos_st=None, r_choice=None):
    """Extract and test the base maps of one lattice isomorphism.

    ``isos_st`` (all isomorphisms ``S -> T``) enables the inducement
    uniqueness check.
    """
    S, T = Psi.source.parent, Psi.target.parent
    try:
        psi_e = e_bijection(Psi)
        kind = classify_e_bijection(S, T, psi_e)
    except TheoryViolation as exc:
        return BaseMapRecord(Psi.node_map, "invalid", "violation", witness=str(exc))
    if kind != "isomorphism":
        return BaseMapRecord(Psi.node_map, kind, "skipped")
    try:
        psi = base_partial_bijection(Psi, psi_e)
        psi_hat = base_bijection(Psi, r_choice=r_choice, psi=psi)
    except TheoryViolation as exc:
        return BaseMapRecord(Psi.node_map, kind, "violation", witness=str(exc))
    rec = BaseMapRecord(Psi.node_map, kind, "isomorphism", psi=psi, psi_hat=psi_hat)
    checks = rec.lemma_checks
    checks["green_preserved"] = not green_preservation_violations(S, T, psi)
    checks["tight_cover_multiplicative"] = not tight_cover_violations(S, T, psi)
    hyp, bad = conjugation_transfer(S, T, psi_hat)
    checks["conjugation_transfer_hypotheses"] = hyp
    checks["conjugation_transfer"] = not bad
    if not is_homomorphism(S, T, psi_hat):
        rec.verdict = "violation"
        rec.witness = "base bijection is not a homomorphism"
        return rec
    rec.induced = is_induced_by(Psi, psi_hat)
    if isos_st is not None:
        inducing = [f for f in isos_st if is_induced_by(Psi, f)]
        rec.unique = inducing == [psi_hat]
    if not all(v for k, v in checks.items() if k != "conjugation_transfer_hypotheses"):
        rec.verdict = "violation"
        rec.witness = {k: v for k, v in checks.items() if not v}
    elif rec.induced is False or rec.unique is False:
        rec.verdict = "violation"
        rec.witness = "base bijection is not the unique isomorphism inducing the lattice map"
    return rec


def verify_lattice_determinability(S, T, lattice_cap=20_000, search_limit=10_000_000,
                                   max_isomorphisms=None):
    """Check that every lattice isomorphism with isomorphic E-bijection yields an isomorphism.

    Hypotheses on ``S`` are tested, not assumed; out-of-scope inputs get no
    verdict.  Returns a JSON-ready dict.
    """
    hyp = determinability_hypotheses(S)
    report = {"schema": 1, "mode": "lattice", "hypotheses": hyp, "records": []}
    if not all(hyp.values()):
        report["status"] = "out-of-scope"
        return report
    try:
        LS = enumerate_subsemigroups(S, INVERSE, lattice_cap)
        LT = enumerate_subsemigroups(T, INVERSE, lattice_cap)
        isos_st = list(isomorphisms(S, T, max_steps=search_limit))
        report["isomorphic"] = bool(isos_st)
        count = 0
        for Psi in lattice_isomorphisms(LS, LT, search_limit):
            rec = examine_lattice_isomorphism(Psi, isos_st)
            report["records"].append(rec.to_json())
            count += 1
            if max_isomorphisms is not None and count >= max_isomorphisms:
                report["truncated"] = True
                break
    except CapExceeded as exc:
        report["status"] = "inconclusive"
        report["reason"] = str(exc)
        return report
    report["lattice_isomorphic"] = bool(report["records"])
    if report["lattice_isomorphic"]:
        report["t_no_ntis"] = not T.has_nontrivial_isolated_subgroup()
    violated = any(r["verdict"] == "violation" for r in report["records"]) or (
        report.get("t_no_ntis") is False
    )
    report["status"] = "violation" if violated else "verified"
    return report
