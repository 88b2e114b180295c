"""Finite semigroups given by Cayley tables, with inverse-semigroup structure.

Elements are the indices ``0..n-1`` and ``table[x, y]`` is the product
``x y``.  :class:`Semigroup` only certifies associativity;
:class:`FiniteInverseSemigroup` additionally certifies the inverse axioms
(regular with commuting idempotents) and caches idempotents, the natural
partial order, nongroup elements and Green's relations at load time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import pbij
from .errors import CapExceeded, InputError, InvariantFailure

GREEN_TAGS = ("H", "L", "R", "D", "J")

# Finite semigroups never contain a bicyclic subsemigroup.
COMPLETELY_SEMISIMPLE = True


def _as_table(table):
    arr = np.array(table, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 0), dtype=np.int64)
    n = len(arr)
    if arr.shape != (n, n):
        raise InputError(f"table must be square, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() >= n:
        bad = tuple(int(v) for v in np.argwhere((arr < 0) | (arr >= n))[0])
        raise InputError(f"table entry at {bad} out of range", witness=bad)
    return arr


def closure_mask(table, seed, mask=None):
    """Boolean mask of the subsemigroup generated by ``seed``.

    ``mask``, if given, must already be closed; the result is the closure
    of its union with ``seed``.
    """
    n = len(table)
    inside = np.zeros(n, dtype=bool) if mask is None else mask.copy()
    members = [int(i) for i in np.flatnonzero(inside)]
    queue = []
    for s in seed:
        if not inside[s]:
            inside[s] = True
            members.append(int(s))
            queue.append(int(s))
    while queue:
        u = queue.pop()
        idx = np.array(members, dtype=np.int64)
        for prods in (table[u, idx], table[idx, u]):
            for v in np.unique(prods[~inside[prods]]).tolist():
                inside[v] = True
                members.append(v)
                queue.append(v)
    return inside


def generating_set(table, order=None):
    """Greedy generating set, scanning elements in ``order`` (index order by default)."""
    n = len(table)
    order = range(n) if order is None else order
    inside = np.zeros(n, dtype=bool)
    gens = []
    for x in order:
        if not inside[x]:
            gens.append(int(x))
            inside = closure_mask(table, [x], inside)
    return gens


def associativity_witness(table):
    """Return ``(x, y, z)`` with ``(xy)z != x(yz)`` or ``None``.

    Uses Light's test: it suffices to check middle factors from a
    generating set, since the middle-associative elements form a
    submagma.
    """
    n = len(table)
    if n == 0:
        return None
    for g in generating_set(table):
        left = table[table[:, g], :]
        right = table[:, table[g, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            x, z = map(int, bad[0])
            return (x, g, z)
    return None


class Semigroup:
    """An associative Cayley table (no inverse structure assumed)."""

    def __init__(self, table, labels=None, check=True):
        self.table = _as_table(table)
        self.table.setflags(write=False)
        self.order = len(self.table)
        if labels is not None and len(labels) != self.order:
            raise InputError("labels must match the table size")
        self.labels = list(labels) if labels is not None else None
        if check:
            w = associativity_witness(self.table)
            if w is not None:
                raise InputError(f"table is not associative at {w}", witness=w)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order})"

    def mul(self, *xs):
        acc = xs[0]
        for x in xs[1:]:
            acc = int(self.table[acc, x])
        return acc

    def label(self, x):
        return self.labels[x] if self.labels else str(x)

    @cached_property
    def is_idempotent(self):
        ar = np.arange(self.order)
        return self.table[ar, ar] == ar

    @cached_property
    def idempotents(self):
        return tuple(int(e) for e in np.flatnonzero(self.is_idempotent))

    def subsemigroup_closure(self, seed):
        return frozenset(int(i) for i in np.flatnonzero(closure_mask(self.table, seed)))

    def restrict(self, elements):
        """Subtable on the sorted ``elements`` (which must be closed)."""
        elems = sorted(elements)
        pos = {x: i for i, x in enumerate(elems)}
        sub = [[pos[int(self.table[x, y])] for y in elems] for x in elems]
        return sub, elems


def find_inverses(table):
    """Compute the unique inverse of each element or raise :class:`InputError`."""
    n = len(table)
    ar = np.arange(n)
    inv = np.empty(n, dtype=np.int64)
    for x in range(n):
        xyx = table[table[x, :], x] == x
        yxy = table[table[:, x], ar] == ar
        cands = np.flatnonzero(xyx & yxy)
        if len(cands) == 0:
            raise InputError(f"element {x} has no inverse (not regular)", witness=(x,))
        if len(cands) > 1:
            y, z = map(int, cands[:2])
            raise InputError(f"element {x} has several inverses {y}, {z}", witness=(x, y, z))
        inv[x] = cands[0]
    return inv


class GreenPartition:
    """Blocks of one Green relation plus the induced order on blocks."""

    def __init__(self, tag, block_of, blocks, block_leq):
        self.tag = tag
        self.block_of = block_of
        self.blocks = blocks
        self._block_leq = block_leq

    def block(self, x):
        return self.blocks[self.block_of[x]]

    def related(self, x, y):
        return self.block_of[x] == self.block_of[y]

    @cached_property
    def order(self):
        """Pairs ``(i, j)`` of block indices with block ``i`` <= block ``j``."""
        reps = [min(b) for b in self.blocks]
        return frozenset(
            (i, j)
            for i, ri in enumerate(reps)
            for j, rj in enumerate(reps)
            if self._block_leq(ri, rj)
        )

    def leq(self, x, y):
        return (self.block_of[x], self.block_of[y]) in self.order

    def sizes(self):
        return sorted(len(b) for b in self.blocks)

    def same_partition(self, other):
        return self.block_of == other.block_of


def _partition_from_keys(tag, keys, block_leq):
    first = {}
    block_of = []
    for k in keys:
        block_of.append(first.setdefault(k, len(first)))
    members = [[] for _ in first]
    for x, b in enumerate(block_of):
        members[b].append(x)
    blocks = tuple(frozenset(m) for m in members)
    return GreenPartition(tag, tuple(block_of), blocks, block_leq)


class FiniteInverseSemigroup(Semigroup):
    """A validated finite inverse semigroup.

    ``concrete_rep`` optionally lists a faithful representation by partial
    bijections, ``concrete_rep[x]`` representing element ``x``.
    """

    def __init__(self, table, inv=None, concrete_rep=None, labels=None, check=True):
        super().__init__(table, labels=labels, check=check)
        n = self.order
        t = self.table
        ar = np.arange(n)
        if inv is None:
            inv = find_inverses(t)
        else:
            inv = np.array(inv, dtype=np.int64).reshape(-1)
            if len(inv) != n or (n and (inv.min() < 0 or inv.max() >= n)):
                raise InputError("inverse map has wrong length or range")
            if check and n:
                bad = np.flatnonzero(t[t[ar, inv], ar] != ar)
                if len(bad):
                    x = int(bad[0])
                    raise InputError(f"x inv(x) x != x at x={x}", witness=(x, int(inv[x])))
                bad = np.flatnonzero(inv[inv] != ar)
                if len(bad):
                    x = int(bad[0])
                    raise InputError(f"inv(inv(x)) != x at x={x}", witness=(x,))
                bad = np.flatnonzero(t[t[inv, ar], inv] != inv)
                if len(bad):
                    x = int(bad[0])
                    raise InputError(f"inv(x) x inv(x) != inv(x) at x={x}", witness=(x,))
        self.inv = inv
        self.inv.setflags(write=False)
        if check and n:
            es = np.array(self.idempotents, dtype=np.int64)
            sub = t[np.ix_(es, es)]
            bad = np.argwhere(sub != sub.T)
            if len(bad):
                e, f = (int(es[i]) for i in bad[0])
                raise InputError(f"idempotents {e} and {f} do not commute", witness=(e, f))
        self.concrete_rep = list(concrete_rep) if concrete_rep is not None else None
        if check and self.concrete_rep is not None:
            self._check_rep()
        # eager caches; instances are read-only afterwards
        self.dom_idem = t[ar, inv] if n else np.zeros(0, dtype=np.int64)
        self.ran_idem = t[inv, ar] if n else np.zeros(0, dtype=np.int64)
        self.nongroup = frozenset(int(x) for x in np.flatnonzero(self.dom_idem != self.ran_idem))
        self._green = {tag: self._green_inverse(tag) for tag in GREEN_TAGS}

    def _check_rep(self):
        rep = self.concrete_rep
        if len(rep) != self.order or len(set(rep)) != self.order:
            raise InvariantFailure("concrete representation is not faithful")
        arr = pbij.to_array(rep)
        for y in range(self.order):
            prods = pbij.compose_rows(arr, arr[y])
            if not np.array_equal(prods, arr[self.table[:, y]]):
                x = int(np.flatnonzero((prods != arr[self.table[:, y]]).any(axis=1))[0])
                raise InvariantFailure(f"representation not multiplicative at ({x}, {y})")

    # -- basic structure ----------------------------------------------------

    @property
    def E(self):
        return self.idempotents

    def inverse(self, x):
        return int(self.inv[x])

    def d(self, x):
        """``x x^-1``."""
        return int(self.dom_idem[x])

    def r(self, x):
        """``x^-1 x``."""
        return int(self.ran_idem[x])

    @cached_property
    def leq_matrix(self):
        n = self.order
        if n == 0:
            return np.zeros((0, 0), dtype=bool)
        # x <= y iff x = (x x^-1) y
        m = self.table[self.dom_idem[:, None], np.arange(n)[None, :]] == np.arange(n)[:, None]
        m.setflags(write=False)
        return m

    def leq(self, x, y):
        return bool(self.leq_matrix[x, y])

    def lt(self, x, y):
        return x != y and bool(self.leq_matrix[x, y])

    def is_nongroup(self, x):
        return x in self.nongroup

    @cached_property
    def nongroup_or_idempotent(self):
        return frozenset(self.nongroup) | frozenset(self.idempotents)

    def inverse_closure(self, seed):
        """Inverse subsemigroup generated by ``seed``."""
        seed = list(seed)
        seed += [self.inverse(s) for s in seed]
        return self.subsemigroup_closure(seed)

    def is_semilattice(self):
        return len(self.idempotents) == self.order

    def is_group(self):
        return len(self.idempotents) == 1

    def is_chain(self):
        """Whether the natural order is total."""
        m = self.leq_matrix
        return bool((m | m.T).all())

    # -- Green's relations ----------------------------------------------------

    def green(self, tag, method="inverse"):
        """Green's relation ``tag`` computed by ``method``.

        ``"inverse"`` uses ``x x^-1`` / ``x^-1 x`` (cached), ``"ideals"``
        compares principal ideals directly, ``"rep"`` reads domains and
        images of the concrete representation.
        """
        if tag not in GREEN_TAGS:
            raise InputError(f"unknown Green relation {tag!r}")
        if method == "inverse":
            return self._green[tag]
        if method == "ideals":
            return self._green_ideals(tag)
        if method == "rep":
            return self._green_rep(tag)
        raise InputError(f"unknown method {method!r}")

    @cached_property
    def _idempotent_d_root(self):
        parent = {e: e for e in self.idempotents}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        for x in range(self.order):
            a, b = find(self.d(x)), find(self.r(x))
            if a != b:
                parent[max(a, b)] = min(a, b)
        return {e: find(e) for e in self.idempotents}

    def _idem_j_leq(self, e, f):
        # e <=_J f iff e lies below some idempotent D-related to f
        root = self._idempotent_d_root
        rf = root[f]
        return any(root[g] == rf and self.leq(e, g) for g in self.idempotents)

    def _green_inverse(self, tag):
        d, r = self.dom_idem.tolist(), self.ran_idem.tolist()
        if tag == "R":
            return _partition_from_keys("R", d, lambda x, y: self.leq(d[x], d[y]))
        if tag == "L":
            return _partition_from_keys("L", r, lambda x, y: self.leq(r[x], r[y]))
        if tag == "H":
            return _partition_from_keys(
                "H", list(zip(d, r)),
                lambda x, y: self.leq(d[x], d[y]) and self.leq(r[x], r[y]),
            )
        root = self._idempotent_d_root
        keys = [root[e] for e in d]
        return _partition_from_keys(tag, keys, lambda x, y: self._idem_j_leq(d[x], d[y]))

    def _principal_ideals(self):
        n = self.order
        t = self.table
        right = [frozenset([x]) | frozenset(t[x, :].tolist()) for x in range(n)]
        left = [frozenset([x]) | frozenset(t[:, x].tolist()) for x in range(n)]
        two = []
        for x in range(n):
            s = set(left[x])
            for y in left[x]:
                s.update(t[y, :].tolist())
            two.append(frozenset(s))
        return right, left, two

    def _green_ideals(self, tag):
        right, left, two = self._principal_ideals()
        if tag == "R":
            return _partition_from_keys("R", right, lambda x, y: right[x] <= right[y])
        if tag == "L":
            return _partition_from_keys("L", left, lambda x, y: left[x] <= left[y])
        if tag == "H":
            return _partition_from_keys(
                "H", list(zip(right, left)),
                lambda x, y: right[x] <= right[y] and left[x] <= left[y],
            )
        if tag == "J":
            return _partition_from_keys("J", two, lambda x, y: two[x] <= two[y])
        # D = L o R, read off as connected components
        return self._compose_lr("D", right, left, two)

    def _compose_lr(self, tag, rkeys, lkeys, jkeys):
        n = self.order
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_r, by_l = {}, {}
        for x in range(n):
            for groups, key in ((by_r, rkeys[x]), (by_l, lkeys[x])):
                if key in groups:
                    a, b = find(x), find(groups[key])
                    parent[max(a, b)] = min(a, b)
                else:
                    groups[key] = x
        keys = [find(x) for x in range(n)]
        return _partition_from_keys(tag, keys, lambda x, y: jkeys[x] <= jkeys[y])

    def _green_rep(self, tag):
        if self.concrete_rep is None:
            raise InputError("no concrete representation available")
        doms = [a.domain() for a in self.concrete_rep]
        imgs = [a.image() for a in self.concrete_rep]
        if tag == "R":
            return _partition_from_keys("R", doms, lambda x, y: doms[x] <= doms[y])
        if tag == "L":
            return _partition_from_keys("L", imgs, lambda x, y: imgs[x] <= imgs[y])
        if tag == "H":
            return _partition_from_keys(
                "H", list(zip(doms, imgs)),
                lambda x, y: doms[x] <= doms[y] and imgs[x] <= imgs[y],
            )
        # finite: D = J, ordered through the idempotent domains
        d = self.dom_idem.tolist()
        return self._compose_lr(
            tag, doms, imgs, [frozenset(
                e for e in self.idempotents if self._idem_j_leq(e, d[x])
            ) for x in range(self.order)],
        )

    # -- predicates -----------------------------------------------------------

    def is_combinatorial(self):
        return all(len(b) == 1 for b in self._green["H"].blocks)

    def conjugation_signature(self, x):
        """The tuple ``(x^-1 e x for e in E)``; it separates elements iff fundamental."""
        t = self.table
        xi = self.inv[x]
        return tuple(int(t[t[xi, e], x]) for e in self.idempotents)

    def is_fundamental(self):
        sigs = [self.conjugation_signature(x) for x in range(self.order)]
        return len(set(sigs)) == len(sigs)

    def isolated_idempotents(self):
        H, D = self._green["H"], self._green["D"]
        return frozenset(e for e in self.idempotents if H.block(e) == D.block(e))

    def has_nontrivial_isolated_subgroup(self):
        H = self._green["H"]
        return any(len(H.block(e)) > 1 for e in self.isolated_idempotents())

    def structural_predicates(self):
        return StructureReport(
            is_combinatorial=self.is_combinatorial(),
            is_fundamental=self.is_fundamental(),
            isolated_idempotents=tuple(sorted(self.isolated_idempotents())),
            has_nontrivial_isolated_subgroup=self.has_nontrivial_isolated_subgroup(),
            completely_semisimple=COMPLETELY_SEMISIMPLE,
        )

    def power(self, x, m):
        """``x^m`` with ``x^-k = (x^-1)^k``; ``m`` must be nonzero."""
        if m == 0:
            raise InputError("x^0 is undefined in a semigroup")
        base = x if m > 0 else self.inverse(x)
        acc = base
        for _ in range(abs(m) - 1):
            acc = int(self.table[acc, base])
        return acc


@dataclass(frozen=True)
class StructureReport:
    is_combinatorial: bool
    is_fundamental: bool
    isolated_idempotents: tuple
    has_nontrivial_isolated_subgroup: bool
    completely_semisimple: bool = COMPLETELY_SEMISIMPLE


def load_semigroup(order, table, inv=None, labels=None):
    """Validate a Cayley table as a finite inverse semigroup."""
    if order == 0:
        return FiniteInverseSemigroup(np.zeros((0, 0), dtype=np.int64), inv=[], labels=labels)
    arr = _as_table(table)
    if len(arr) != order:
        raise InputError(f"declared order {order} but table has {len(arr)} rows")
    return FiniteInverseSemigroup(arr, inv=inv, labels=labels)


def is_inverse_table(table):
    """Whether an associative table is an inverse semigroup."""
    try:
        FiniteInverseSemigroup(table)
    except InputError:
        return False
    return True


def generate_closure(universe_size, generators, cap=100_000, universe_cap=None):
    """Inverse subsemigroup of the symmetric inverse monoid generated by ``generators``.

    Elements are returned in sorted order of their image tuples.
    """
    pbij.check_universe(universe_size, universe_cap)
    gens = list(generators)
    for g in gens:
        if g.universe_size != universe_size:
            raise InputError("generator universe size mismatch")
    seen = set()
    queue = []
    for g in gens + [pbij.invert(g) for g in gens]:
        if g not in seen:
            seen.add(g)
            queue.append(g)
    base = list(seen)
    while queue:
        u = queue.pop()
        for g in base:
            for p in (pbij.compose(u, g), pbij.compose(g, u)):
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeds cap {cap}")
    elems = sorted(seen)
    table = pbij.product_table(elems)
    inv = pbij.inverse_indices(elems)
    return FiniteInverseSemigroup(table, inv=inv, concrete_rep=elems)


def from_partial_bijections(elements, labels=None):
    """Wrap a list of partial bijections closed under product and inverse."""
    elems = list(elements)
    return FiniteInverseSemigroup(
        pbij.product_table(elems), inv=pbij.inverse_indices(elems),
        concrete_rep=elems, labels=labels,
    )


def wagner_preston(S):
    """Faithful representation ``x -> (s -> s x)`` on ``S (x x^-1)``."""
    n = S.order
    t = S.table
    rep = []
    for x in range(n):
        e = S.d(x)
        images = [int(t[s, x]) if t[s, e] == s else pbij.UNDEFINED for s in range(n)]
        rep.append(pbij.PartialBijection(images))
    if len(set(rep)) != n:
        raise InvariantFailure("Wagner-Preston map is not injective")
    out = FiniteInverseSemigroup(t, inv=S.inv, concrete_rep=rep, labels=S.labels, check=False)
    out._check_rep()
    return out


# -- monogenic inverse subsemigroups -------------------------------------------


@dataclass(frozen=True)
class MonogenicReport:
    generator: int
    elements: frozenset
    case: str
    d_class: frozenset
    kernel: frozenset
    kernel_kind: str


def monogenic(S, x):
    """Classify ``<x>``: a cyclic group, or ``x x^-1 || x^-1 x`` with a group kernel."""
    U = S.inverse_closure([x])
    e, f = S.d(x), S.r(x)
    if e == f:
        case = "group"
    elif not S.leq(e, f) and not S.leq(f, e):
        case = "incomparable"
    else:
        raise InvariantFailure(
            f"x x^-1 and x^-1 x comparable for x={x}: impossible in a finite semigroup"
        )
    members = sorted(U)
    d_class = frozenset(
        y for y in members
        if any(S.d(z) == S.d(x) and S.r(z) == S.d(y) for z in members)
    )
    t = S.table
    ideals = {}
    for k in members:
        ideal = {k}
        ideal.update(int(t[a, k]) for a in members)
        ideal.update(int(t[k, b]) for b in members)
        ideal.update(int(t[t[a, k], b]) for a in members for b in members)
        ideals[k] = frozenset(ideal)
    kernel = min(ideals.values(), key=lambda s: (len(s), sorted(s)))
    if case == "incomparable" and d_class != {x, S.inverse(x), e, f}:
        raise InvariantFailure(f"top D-class of <{x}> is not {{x, x^-1, xx^-1, x^-1x}}")
    kd = {S.d(k) for k in kernel}
    if len(kd) != 1 or {S.r(k) for k in kernel} != kd:
        raise InvariantFailure(f"kernel of <{x}> is not a group")
    return MonogenicReport(x, frozenset(U), case, d_class, kernel, "cyclic-group")


# -- conjugation criterion -----------------------------------------------------


def is_homomorphism(S, T, phi):
    phi = np.asarray(phi, dtype=np.int64)
    return bool(np.array_equal(phi[S.table], T.table[np.ix_(phi, phi)]))


def check_conjugation_criterion(S, T, phi):
    """Decide whether the bijection ``phi`` is an isomorphism via idempotent conjugates.

    ``phi`` must restrict to an isomorphism of idempotent semilattices and
    ``S`` must be fundamental.  The criterion is compared against a direct
    homomorphism check and a disagreement raises :class:`InvariantFailure`.
    """
    phi = [int(v) for v in phi]
    if S.order != T.order or sorted(phi) != list(range(T.order)):
        raise InputError("phi is not a bijection S -> T")
    if not S.is_fundamental():
        raise InputError("precondition: S is not fundamental")
    ES = S.idempotents
    if sorted(phi[e] for e in ES) != list(T.idempotents) or any(
        phi[S.mul(e, f)] != T.mul(phi[e], phi[f]) for e in ES for f in ES
    ):
        raise InputError("precondition: phi does not restrict to an isomorphism E_S -> E_T")
    criterion = all(
        phi[S.mul(S.inverse(s), e, s)] == T.mul(T.inverse(phi[s]), phi[e], phi[s])
        for s in range(S.order)
        for e in ES
    )
    direct = is_homomorphism(S, T, phi)
    if criterion != direct:
        raise InvariantFailure("conjugation criterion disagrees with direct check")
    return criterion
