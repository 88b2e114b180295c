"""Brute-force reference implementations used only by the tests.

Everything here works on plain lists and dicts and shares no code with
the package, so agreement is evidence rather than tautology.
"""

from itertools import combinations, permutations


def tl(S):
    return [list(map(int, row)) for row in S.table]


def all_partial_maps(n):
    """Every injective partial map on ``range(n)`` as a dict."""
    out = []
    for k in range(n + 1):
        for dom in combinations(range(n), k):
            for img in permutations(range(n), k):
                out.append(dict(zip(dom, img)))
    return out


def compose_dicts(a, b):
    """``a`` then ``b``."""
    return {i: b[a[i]] for i in a if a[i] in b}


def inverse_dict(a):
    return {v: k for k, v in a.items()}


def closure_dicts(gens):
    """Inverse semigroup of partial maps generated by ``gens``."""
    key = lambda d: tuple(sorted(d.items()))
    elems = {key(g): g for g in gens}
    elems.update({key(inverse_dict(g)): inverse_dict(g) for g in gens})
    while True:
        new = {}
        for a in elems.values():
            for b in elems.values():
                c = compose_dicts(a, b)
                if key(c) not in elems:
                    new[key(c)] = c
        if not new:
            return list(elems.values())
        elems.update(new)


def principal_ideals(t):
    """``(xS^1, S^1x, S^1xS^1)`` for each ``x`` of the table ``t``."""
    n = len(t)
    out = []
    for x in range(n):
        right = {x} | {t[x][s] for s in range(n)}
        left = {x} | {t[s][x] for s in range(n)}
        two = left | right | {t[t[s][x]][u] for s in range(n) for u in range(n)}
        out.append((frozenset(right), frozenset(left), frozenset(two)))
    return out


def green_blocks(t, tag):
    """Green's relation ``tag`` as a set of frozenset blocks, from principal ideals."""
    ideals = principal_ideals(t)
    n = len(t)
    if tag == "R":
        key = [ideals[x][0] for x in range(n)]
    elif tag == "L":
        key = [ideals[x][1] for x in range(n)]
    elif tag == "H":
        key = [(ideals[x][0], ideals[x][1]) for x in range(n)]
    else:
        key = [ideals[x][2] for x in range(n)]
    return {frozenset(y for y in range(n) if key[y] == key[x]) for x in range(n)}


def is_iso(t1, t2, phi):
    n = len(t1)
    return all(phi[t1[a][b]] == t2[phi[a]][phi[b]] for a in range(n) for b in range(n))


def isomorphic(t1, t2):
    if len(t1) != len(t2):
        return False
    return any(is_iso(t1, t2, p) for p in permutations(range(len(t1))))


def subsemigroups(t, inv=None):
    """All subsets closed under product (and under ``inv`` if given), including the empty set."""
    n = len(t)
    out = []
    for k in range(n + 1):
        for sub in combinations(range(n), k):
            s = set(sub)
            if all(t[a][b] in s for a in s for b in s) and (
                inv is None or all(inv[a] in s for a in s)
            ):
                out.append(frozenset(s))
    return out


def partial_automorphism_count(t, inv=None):
    """Number of isomorphisms between (inverse) subsemigroups."""
    subs = subsemigroups(t, inv)
    count = 0
    for h in subs:
        hs = sorted(h)
        for k in subs:
            if len(k) != len(h):
                continue
            for img in permutations(sorted(k)):
                f = dict(zip(hs, img))
                if all(f[t[a][b]] == t[f[a]][f[b]] for a in hs for b in hs):
                    count += 1
    return count


def munn_count(leq):
    """Order isomorphisms between principal ideals of a poset given by ``leq[a][b]``."""
    n = len(leq)
    ideals = [[a for a in range(n) if leq[a][e]] for e in range(n)]
    count = 0
    for d in ideals:
        for c in ideals:
            if len(c) != len(d):
                continue
            for img in permutations(c):
                f = dict(zip(d, img))
                if all(leq[a][b] == leq[f[a]][f[b]] for a in d for b in d):
                    count += 1
    return count


def lattice_isomorphism_count(t1, inv1, t2, inv2):
    """Inclusion-preserving bijections between inverse-subsemigroup lattices."""
    a, b = subsemigroups(t1, inv1), subsemigroups(t2, inv2)
    if len(a) != len(b):
        return 0
    count = 0
    for img in permutations(b):
        if all((x <= y) == (img[i] <= img[j]) for i, x in enumerate(a) for j, y in enumerate(a)):
            count += 1
    return count
