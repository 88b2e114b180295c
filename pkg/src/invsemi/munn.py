"""Finite meet-semilattices and their Munn semigroups.

The Munn semigroup ``T_E`` consists of all order isomorphisms between
principal ideals ``Ee`` of ``E``, multiplied as partial maps.  Each
``e`` is identified with the identity map on ``Ee``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import pbij
from .errors import CapExceeded, InputError, InvariantFailure
from .semigroup import FiniteInverseSemigroup


class Semilattice:
    """A finite meet-semilattice on ``0..n-1`` given by its meet table."""

    def __init__(self, meet, labels=None):
        self.meet = np.array(meet, dtype=np.int64).reshape(len(meet), len(meet))
        n = self.order = len(self.meet)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise InputError("labels must match the semilattice size")
        m = self.meet
        if n and (m.min() < 0 or m.max() >= n):
            raise InputError("meet entry out of range")
        ar = np.arange(n)
        if (m[ar, ar] != ar).any():
            e = int(np.flatnonzero(m[ar, ar] != ar)[0])
            raise InputError(f"meet is not idempotent at {e}", witness=(e,))
        if (m != m.T).any():
            e, f = map(int, np.argwhere(m != m.T)[0])
            raise InputError(f"meet is not commutative at ({e}, {f})", witness=(e, f))
        for g in range(n):
            bad = np.argwhere(m[m[:, g], :] != m[:, m[g, :]])
            if len(bad):
                e, f = map(int, bad[0])
                raise InputError(f"meet is not associative at ({e}, {g}, {f})", witness=(e, g, f))
        self.leq_matrix = m == ar[:, None]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"Semilattice(order={self.order})"

    def leq(self, e, f):
        return bool(self.leq_matrix[e, f])

    def covers(self):
        """Hasse diagram as ``(lower, upper)`` pairs."""
        n = self.order
        out = []
        for a in range(n):
            for b in range(n):
                if a != b and self.leq(a, b) and not any(
                    c not in (a, b) and self.leq(a, c) and self.leq(c, b) for c in range(n)
                ):
                    out.append((a, b))
        return out

    def bottom(self):
        for e in range(self.order):
            if self.leq_matrix[e].all():
                return e
        return None

    def index(self, label):
        return self.labels.index(label)


def from_hasse(n, covers, labels=None):
    """Complete cover pairs ``(lower, upper)`` to a poset and build its meet table."""
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        if not (0 <= a < n and 0 <= b < n):
            raise InputError(f"cover ({a}, {b}) out of range")
        leq[a, b] = True
    for k in range(n):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    cyc = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))
    if len(cyc):
        a, b = map(int, cyc[0])
        raise InputError(f"covers contain a cycle through {a} and {b}", witness=(a, b))
    meet = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            lower = np.flatnonzero(leq[:, a] & leq[:, b])
            greatest = [g for g in lower if leq[lower, g].all()]
            if len(greatest) != 1:
                raise InputError(f"elements {a} and {b} have no meet", witness=(a, b))
            meet[a, b] = greatest[0]
    return Semilattice(meet, labels)


def load_semilattice(desc):
    """Build a :class:`Semilattice` from ``{"meet": table}`` or ``{"order": n, "hasse": covers}``."""
    labels = desc.get("labels")
    if "meet" in desc:
        return Semilattice(desc["meet"], labels)
    if "hasse" in desc:
        return from_hasse(desc["order"], desc["hasse"], labels)
    raise InputError("semilattice description needs 'meet' or 'hasse'")


def from_inverse_semigroup(S):
    """The semilattice ``E_S`` (indexed by position in ``S.idempotents``)."""
    es = list(S.idempotents)
    pos = {e: i for i, e in enumerate(es)}
    meet = [[pos[S.mul(e, f)] for f in es] for e in es]
    return Semilattice(meet, [S.label(e) for e in es])


def chain(n):
    return Semilattice([[min(i, j) for j in range(n)] for i in range(n)])


def principal_ideal(E, e):
    """Sorted elements of ``Ee``."""
    return tuple(int(x) for x in np.flatnonzero(E.leq_matrix[:, e]))


@dataclass(frozen=True, order=True)
class MunnElement:
    source: int
    target: int
    map: pbij.PartialBijection

    def is_idempotent(self):
        return self.source == self.target and pbij.is_idempotent(self.map)


def ideal_isomorphisms(E, e, f):
    """All order isomorphisms ``Ee -> Ef``, sorted by image tuple."""
    dom, cod = principal_ideal(E, e), principal_ideal(E, f)
    if len(dom) != len(cod):
        return []
    leq = E.leq_matrix
    # heights within the ideal make a cheap necessary condition
    h_dom = {x: int(leq[dom, x].sum()) for x in dom}
    h_cod = {y: int(leq[cod, y].sum()) for y in cod}
    found = []
    image = {}

    def extend(i):
        if i == len(dom):
            found.append(dict(image))
            return
        x = dom[i]
        for y in cod:
            if y in image.values() or h_dom[x] != h_cod[y]:
                continue
            if all(leq[x, z] == leq[y, image[z]] and leq[z, x] == leq[image[z], y] for z in dom[:i]):
                image[x] = y
                extend(i + 1)
                del image[x]

    extend(0)
    out = [MunnElement(e, f, pbij.PartialBijection.from_pairs(E.order, m.items())) for m in found]
    return sorted(out)


class MunnSemigroup(FiniteInverseSemigroup):
    """``T_E`` with its elements labelled by :class:`MunnElement`."""

    def __init__(self, E, elements):
        self.semilattice = E
        self.elements = list(elements)
        maps = [m.map for m in self.elements]
        labels = []
        for m in self.elements:
            s, t = E.labels[m.source], E.labels[m.target]
            if m.is_idempotent():
                labels.append(f"1_{s}")
            else:
                k = sum(1 for o in self.elements if (o.source, o.target) == (m.source, m.target) and o < m)
                labels.append(f"{s}>{t}/{k}")
        super().__init__(
            pbij.product_table(maps), inv=pbij.inverse_indices(maps),
            concrete_rep=maps, labels=labels,
        )
        pos = {(m.source, m.target, m.map): i for i, m in enumerate(self.elements)}
        self._idem = {
            e: pos[(e, e, pbij.PartialBijection.identity(E.order, principal_ideal(E, e)))]
            for e in range(E.order)
        }

    def idempotent_of(self, e):
        """Index of ``1_{Ee}``."""
        return self._idem[e]


def munn_semigroup(E, cap=10_000):
    elements = []
    for e in range(E.order):
        for f in range(E.order):
            elements.extend(ideal_isomorphisms(E, e, f))
            if len(elements) > cap:
                raise CapExceeded(f"Munn semigroup exceeds cap {cap}")
    elements.sort()
    T = MunnSemigroup(E, elements)
    if sorted(T.idempotents) != sorted(T._idem.values()):
        raise InvariantFailure("idempotents of T_E are not the identities on principal ideals")
    return T


def munn_representation(S, T=None):
    """Map each ``x`` to ``e -> x^-1 e x`` from ``E(xx^-1)`` onto ``E(x^-1x)`` inside ``T_{E_S}``.

    Returns ``(T, images)``; the map is a homomorphism always and is
    injective exactly when ``S`` is fundamental.
    """
    E = from_inverse_semigroup(S)
    es = list(S.idempotents)
    pos = {e: i for i, e in enumerate(es)}
    if T is None:
        T = munn_semigroup(E)
    index = {m.map: i for i, m in enumerate(T.elements)}
    images = []
    for x in range(S.order):
        xi = S.inverse(x)
        pairs = [(pos[e], pos[S.mul(xi, e, x)]) for e in es if S.leq(e, S.d(x))]
        images.append(index[pbij.PartialBijection.from_pairs(E.order, pairs)])
    phi = np.array(images, dtype=np.int64)
    if S.order and not np.array_equal(phi[S.table], T.table[np.ix_(phi, phi)]):
        raise InvariantFailure("Munn representation is not multiplicative")
    return T, images


# -- enumeration of small semilattices ----------------------------------------


def _canonical_meet(meet):
    n = len(meet)
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        key = tuple(inv[meet[perm[i]][perm[j]]] for i in range(n) for j in range(n))
        if best is None or key < best:
            best = key
    return best


def enumerate_semilattices(n):
    """All semilattices of order ``n`` up to isomorphism, as :class:`Semilattice` objects.

    Tables are searched under a linear-extension labelling: ``0`` is the
    bottom and ``meet(i, j) <= min(i, j)`` as integers, which every
    isomorphism class admits.
    """
    if n == 0:
        return []
    meet = [[-1] * n for _ in range(n)]
    for i in range(n):
        meet[i][i] = i
        meet[0][i] = meet[i][0] = 0
    cells = [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    seen = set()
    out = []

    def consistent():
        # associativity on fully defined triples
        for a in range(n):
            for b in range(n):
                ab = meet[a][b]
                if ab < 0:
                    continue
                for c in range(n):
                    bc = meet[b][c]
                    if bc < 0:
                        continue
                    left, right = meet[ab][c], meet[a][bc]
                    if left >= 0 and right >= 0 and left != right:
                        return False
        return True

    def fill(k):
        if k == len(cells):
            key = _canonical_meet(meet)
            if key not in seen:
                seen.add(key)
                out.append(Semilattice([row[:] for row in meet]))
            return
        i, j = cells[k]
        for v in range(i + 1):
            meet[i][j] = meet[j][i] = v
            if consistent():
                fill(k + 1)
        meet[i][j] = meet[j][i] = -1

    fill(0)
    return out
