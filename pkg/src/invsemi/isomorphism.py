"""Isomorphism search between finite semigroups.

An isomorphism is fixed by the images of a generating set, so the search
assigns generator images one at a time and propagates along the right
Cayley graph: every known pair ``x -> y`` and generator ``g`` forces
``xg -> y phi(g)``.  Any clash, or a forced image whose invariant
signature differs, prunes the branch.  Generators are drawn from the
rarest invariant classes first, which keeps candidate lists short.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .errors import CapExceeded
from .semigroup import FiniteInverseSemigroup, generating_set

DEFAULT_MAX_STEPS = 10_000_000


def _table(S):
    return S.table if hasattr(S, "table") else np.asarray(S, dtype=np.int64)


def _index_period(row_pow, x):
    seen = {}
    k, p = 1, x
    while p not in seen:
        seen[p] = k
        p = row_pow(p, x)
        k += 1
    return seen[p], k - seen[p]


def element_invariants(S, inverse=None):
    """Per-element signature preserved by every isomorphism.

    Inverse-semigroup data (Green class sizes, order ideal sizes) is added
    when ``inverse`` is true, which defaults to whether ``S`` is a
    :class:`FiniteInverseSemigroup`.
    """
    if inverse is None:
        inverse = isinstance(S, FiniteInverseSemigroup)
    t = _table(S)
    n = len(t)
    if n == 0:
        return []
    ar = np.arange(n)
    srow = np.sort(t, axis=1)
    scol = np.sort(t, axis=0)
    right_size = 1 + (np.diff(srow, axis=1) != 0).sum(axis=1)
    left_size = 1 + (np.diff(scol, axis=0) != 0).sum(axis=0)
    central = (t == t.T).sum(axis=1)
    squares = np.bincount(t[ar, ar], minlength=n)
    tl = t.tolist()
    ip = [_index_period(lambda a, b: tl[a][b], x) for x in range(n)]
    sig = [
        (bool(tl[x][x] == x), ip[x], int(right_size[x]), int(left_size[x]),
         int(central[x]), int(squares[x]))
        for x in range(n)
    ]
    if inverse:
        R, L, D = S.green("R"), S.green("L"), S.green("D")
        d = S.dom_idem
        below = np.zeros(n, dtype=np.int64)
        for y in range(n):
            below[y] = int((t[d, y] == ar).sum())
        sig = [
            s + (len(R.block(x)), len(L.block(x)), len(D.block(x)), int(below[x]),
                 x in S.nongroup)
            for x, s in enumerate(sig)
        ]
    return sig


def isomorphisms(S, T, fixed=None, max_steps=DEFAULT_MAX_STEPS):
    """Yield every isomorphism ``S -> T`` as a tuple ``phi`` with ``phi[x]`` in ``T``.

    ``fixed`` pins pairs ``{x: y}`` (for example identity to identity).
    Results come in lexicographic order of generator images.  Raises
    :class:`CapExceeded` after ``max_steps`` candidate trials.
    """
    A, B = _table(S), _table(T)
    n = len(A)
    if n != len(B):
        return
    if n == 0:
        yield ()
        return
    inverse = isinstance(S, FiniteInverseSemigroup) and isinstance(T, FiniteInverseSemigroup)
    sig_a = element_invariants(S, inverse)
    sig_b = element_invariants(T, inverse)
    if Counter(sig_a) != Counter(sig_b):
        return
    fixed = dict(fixed or {})
    for x, y in fixed.items():
        if sig_a[x] != sig_b[y]:
            return
    buckets = {}
    for y, s in enumerate(sig_b):
        buckets.setdefault(s, []).append(y)
    order = sorted(range(n), key=lambda x: (x not in fixed, len(buckets[sig_a[x]]), x))
    gens = generating_set(A, order)
    At, Bt = A.tolist(), B.tolist()
    phi = [-1] * n
    psi = [-1] * n
    mapped = []
    steps = 0

    def extend(k, g, c):
        phi[g] = c
        psi[c] = g
        old = len(mapped)
        mapped.append(g)
        pending = []

        def edge(a, h):
            p = At[a][h]
            q = Bt[phi[a]][phi[h]]
            if phi[p] == -1:
                if psi[q] != -1 or sig_a[p] != sig_b[q]:
                    return False
                phi[p] = q
                psi[q] = p
                mapped.append(p)
                pending.append(p)
                return True
            return phi[p] == q

        for a in mapped[:old]:
            if not edge(a, g):
                return False
        pending.append(g)
        while pending:
            a = pending.pop()
            for h in gens[: k + 1]:
                if not edge(a, h):
                    return False
        return True

    def undo(mark):
        while len(mapped) > mark:
            p = mapped.pop()
            psi[phi[p]] = -1
            phi[p] = -1

    def search(k):
        nonlocal steps
        if k == len(gens):
            yield tuple(phi)
            return
        g = gens[k]
        cands = [fixed[g]] if g in fixed else buckets[sig_a[g]]
        for c in cands:
            if psi[c] != -1:
                continue
            steps += 1
            if steps > max_steps:
                raise CapExceeded(f"isomorphism search exceeded {max_steps} steps")
            mark = len(mapped)
            if extend(k, g, c):
                yield from search(k + 1)
            undo(mark)

    for phi_out in search(0):
        if -1 in phi_out or any(phi_out[x] != y for x, y in fixed.items()):
            continue
        arr = np.array(phi_out)
        if not np.array_equal(arr[A], B[np.ix_(arr, arr)]):
            continue
        yield phi_out


def find_isomorphism(S, T, fixed=None, max_steps=DEFAULT_MAX_STEPS):
    return next(isomorphisms(S, T, fixed=fixed, max_steps=max_steps), None)


def are_isomorphic(S, T, max_steps=DEFAULT_MAX_STEPS):
    return find_isomorphism(S, T, max_steps=max_steps) is not None


def automorphisms(S, max_steps=DEFAULT_MAX_STEPS):
    return list(isomorphisms(S, S, max_steps=max_steps))


def isomorphism_search(S, T, limit=DEFAULT_MAX_STEPS):
    """Return ``(first, enumerator)``: the first isomorphism or ``None``, and a fresh iterator over all."""
    return find_isomorphism(S, T, max_steps=limit), isomorphisms(S, T, max_steps=limit)


def canonical_key(S, inverse=None):
    """Cheap isomorphism-invariant fingerprint used to bucket candidates."""
    return (len(_table(S)), tuple(sorted(Counter(element_invariants(S, inverse)).items())))
