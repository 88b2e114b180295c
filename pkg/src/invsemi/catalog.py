"""Catalogs of small semigroups up to isomorphism.

Inverse semigroups of order at most ``n`` are found as inverse
subsemigroups of the symmetric inverse monoid ``I_n`` (every inverse
semigroup of order ``k`` embeds in ``I_k`` by the Wagner-Preston
representation).  Subsemigroups are grown one generator at a time and
pruned up to conjugation by permutations of the ground set, then each
abstract table is reduced to a canonical relabelling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import permutations

from . import pbij
from .errors import CapExceeded
from .semigroup import FiniteInverseSemigroup, Semigroup

CATALOG_SCHEMA = 1


def canonical_table(table):
    """Lexicographically least relabelling of a Cayley table, with the relabelling.

    Returns ``(canon, perm)`` where ``canon[i][j] = perm[table[p_i][p_j]]``
    for ``p`` the inverse of ``perm``; ``canon`` is a complete
    isomorphism invariant.
    """
    tl = [list(map(int, row)) for row in table]
    n = len(tl)
    if n == 0:
        return (), ()
    # only relabel within classes of a cheap invariant
    sig = [(tl[x][x] == x, sum(1 for y in range(n) if tl[x][y] == tl[y][x]),
            len(set(tl[x])), len({tl[y][x] for y in range(n)})) for x in range(n)]
    classes = sorted(set(sig))
    groups = [[x for x in range(n) if sig[x] == c] for c in classes]
    best, best_perm = None, None

    def orders(k):
        if k == len(groups):
            yield []
            return
        for head in permutations(groups[k]):
            for tail in orders(k + 1):
                yield list(head) + tail

    for order in orders(0):
        pos = [0] * n
        for i, x in enumerate(order):
            pos[x] = i
        key = tuple(pos[tl[order[i]][order[j]]] for i in range(n) for j in range(n))
        if best is None or key < best:
            best, best_perm = key, tuple(pos)
    return tuple(tuple(best[i * n:(i + 1) * n]) for i in range(n)), best_perm


@dataclass
class Catalog:
    max_order: int
    members: list
    provenance: str = "inverse subsemigroups of I_n, canonical relabelling"

    def to_json(self):
        return json.dumps({
            "schema": CATALOG_SCHEMA,
            "max_order": self.max_order,
            "provenance": self.provenance,
            "members": [
                {"order": S.order, "table": S.table.tolist(), "inv": S.inv.tolist()}
                for S in self.members
            ],
        }, indent=None, separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        members = [FiniteInverseSemigroup(m["table"], inv=m["inv"]) for m in data["members"]]
        return cls(data["max_order"], members, data.get("provenance", ""))

    def up_to(self, order):
        return [S for S in self.members if S.order <= order]

    def semilattices(self, order=None):
        return [S for S in self.members if S.is_semilattice() and (order is None or S.order <= order)]


def _conjugation_tables(elems, n):
    index = {e: i for i, e in enumerate(elems)}
    out = []
    for p in permutations(range(n)):
        pinv = [0] * n
        for i, v in enumerate(p):
            pinv[v] = i
        row = []
        for e in elems:
            img = [pbij.UNDEFINED] * n
            for i, j in e.pairs():
                img[p[i]] = p[j]
            row.append(index[pbij.PartialBijection(img)])
        out.append(row)
    return out


def inverse_subsemigroups_of_sym(n, max_size):
    """Inverse subsemigroups of ``I_n`` with at most ``max_size`` elements, one per conjugacy class.

    Each is returned as a sorted tuple of indices into
    :func:`pbij.symmetric_inverse_monoid` order, together with that list.
    """
    elems = pbij.symmetric_inverse_monoid(n)
    tl = pbij.product_table(elems).tolist()
    inv = pbij.inverse_indices(elems).tolist()
    conj = _conjugation_tables(elems, n)

    def canon(members):
        return min(tuple(sorted(c[x] for x in members)) for c in conj)

    def close(members, g):
        inside = set(members)
        mlist = list(members)
        queue = [g]
        inside.add(g)
        mlist.append(g)
        while queue:
            u = queue.pop()
            cand = [inv[u]]
            row = tl[u]
            for v in mlist:
                cand.append(row[v])
                cand.append(tl[v][u])
            for w in cand:
                if w not in inside:
                    inside.add(w)
                    mlist.append(w)
                    queue.append(w)
                    if len(inside) > max_size:
                        return None
        return inside

    found = set()
    frontier = []
    for g in range(len(elems)):
        got = close((), g)
        if got is not None:
            key = canon(got)
            if key not in found:
                found.add(key)
                frontier.append(key)
    while frontier:
        nxt = []
        for members in frontier:
            if len(members) >= max_size:
                continue
            mset = set(members)
            for g in range(len(elems)):
                if g in mset:
                    continue
                got = close(members, g)
                if got is None:
                    continue
                key = canon(got)
                if key not in found:
                    found.add(key)
                    nxt.append(key)
        frontier = nxt
    return sorted(found, key=lambda m: (len(m), m)), elems


def build_catalog(max_order, bound=6):
    """Pairwise non-isomorphic inverse semigroups of orders ``1..max_order``."""
    if max_order > bound:
        raise CapExceeded(f"catalog order {max_order} exceeds bound {bound}")
    if max_order < 1:
        return Catalog(max_order, [])
    subs, elems = inverse_subsemigroups_of_sym(max_order, max_order)
    tables = set()
    for members in subs:
        maps = [elems[i] for i in members]
        table = pbij.product_table(maps)
        canon, _ = canonical_table(table)
        tables.add(canon)
    ordered = sorted(tables, key=lambda t: (len(t), t))
    members = [FiniteInverseSemigroup([list(r) for r in t]) for t in ordered]
    return Catalog(max_order, members)


def bundled_catalog():
    """The catalog of inverse semigroups of order <= 5 shipped with the package."""
    text = resources.files("invsemi.data").joinpath("catalog5.json").read_text(encoding="utf-8")
    return Catalog.from_json(text)


# -- all semigroups of small order ----------------------------------------------


def enumerate_semigroups(n):
    """All semigroups of order ``n`` up to isomorphism (canonical tables)."""
    if n == 0:
        return []
    table = [[-1] * n for _ in range(n)]
    cells = [(a, b) for a in range(n) for b in range(n)]
    found = set()

    def ok():
        t = table
        for x in range(n):
            for y in range(n):
                xy = t[x][y]
                if xy < 0:
                    continue
                for z in range(n):
                    yz = t[y][z]
                    if yz < 0:
                        continue
                    left, right = t[xy][z], t[x][yz]
                    if left >= 0 and right >= 0 and left != right:
                        return False
        return True

    def fill(k):
        if k == len(cells):
            found.add(canonical_table(table)[0])
            return
        a, b = cells[k]
        for v in range(n):
            table[a][b] = v
            if ok():
                fill(k + 1)
        table[a][b] = -1

    fill(0)
    return [Semigroup([list(r) for r in t]) for t in sorted(found)]
