"""Covering by monogenic idempotents, short and tight bypasses.

For ``e < xx^-1``, ``e`` is *x-covered* when no idempotent of ``<x>``
lies strictly between them.  A bypass is an idempotent chain
``e = e_0 < ... < e_n = xx^-1`` where every step ``e_{k-1} < e_k`` is
covered with respect to ``x_k = e_k x``; a tight bypass also needs each
``e_{k-1} x_k`` to be nongroup or equal to ``e_{k-1}``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass

from .errors import InputError, InvariantFailure


def monogenic_idempotents(S, x):
    cache = S.__dict__.setdefault("_mono_idem_cache", {})
    if x not in cache:
        U = S.inverse_closure([x])
        cache[x] = frozenset(u for u in U if S.is_idempotent[u])
    return cache[x]


def x_covers(S, e, x):
    """Whether ``e`` is x-covered by ``xx^-1``."""
    top = S.d(x)
    if not S.lt(e, top):
        return False
    return not any(S.lt(e, f) and S.lt(f, top) for f in monogenic_idempotents(S, x))


def _tight_step(S, e, x):
    ex = S.mul(e, x)
    return ex in S.nongroup or ex == e


def tightly_covers(S, e, x):
    if x not in S.nongroup_or_idempotent:
        raise InputError(f"element {x} is a nonidempotent group element")
    return x_covers(S, e, x) and _tight_step(S, e, x)


@dataclass(frozen=True)
class Bypass:
    x: int
    chain: tuple
    stages: tuple
    tight: bool

    def to_json(self):
        return json.dumps(asdict(self) | {"chain": list(self.chain), "stages": list(self.stages)})


def validate_bypass(S, bp):
    """Re-check every defining property of ``bp`` from scratch."""
    chain, x = bp.chain, bp.x
    if chain[-1] != S.d(x) or len(chain) < 2:
        return False
    for k in range(1, len(chain)):
        lo, hi = chain[k - 1], chain[k]
        xk = S.mul(hi, x)
        if bp.stages[k] != xk or S.d(xk) != hi or not S.lt(lo, hi):
            return False
        U = S.inverse_closure([xk])
        if any(S.is_idempotent[f] and S.lt(lo, f) and S.lt(f, hi) for f in U):
            return False
        if bp.tight and not _tight_step(S, lo, xk):
            return False
    return True


def _step_ok(S, lo, hi, x, tight):
    xk = S.mul(hi, x)
    if not x_covers(S, lo, xk):
        return False
    return not tight or _tight_step(S, lo, xk)


def _distances(S, x, tight):
    """Chain length from each idempotent of the interval up to ``xx^-1``."""
    top = S.d(x)
    interval = [f for f in S.idempotents if S.leq(f, top)]
    dist = {top: 0}
    queue = deque([top])
    while queue:
        hi = queue.popleft()
        for lo in interval:
            if lo not in dist and S.lt(lo, hi) and _step_ok(S, lo, hi, x, tight):
                dist[lo] = dist[hi] + 1
                queue.append(lo)
    return dist


def _find_bypass(S, e, x, tight):
    top = S.d(x)
    if not S.is_idempotent[e] or not S.lt(e, top):
        raise InputError(f"precondition: {e} is not an idempotent strictly below xx^-1")
    if tight and x not in S.nongroup_or_idempotent:
        raise InputError(f"element {x} is a nonidempotent group element")
    dist = _distances(S, x, tight)
    if e not in dist:
        return None
    chain = [e]
    while chain[-1] != top:
        lo = chain[-1]
        nxt = min(
            hi for hi, d in dist.items()
            if d == dist[lo] - 1 and S.lt(lo, hi) and _step_ok(S, lo, hi, x, tight)
        )
        chain.append(nxt)
    stages = tuple(S.mul(f, x) for f in chain)
    bp = Bypass(x, tuple(chain), stages, tight)
    if not validate_bypass(S, bp):
        raise InvariantFailure(f"constructed bypass fails validation: {bp}")
    return bp


def find_short_bypass(S, e, x):
    """Shortest, then lexicographically least, short bypass from ``e`` to ``xx^-1``."""
    return _find_bypass(S, e, x, tight=False)


def find_tight_bypass(S, e, x):
    return _find_bypass(S, e, x, tight=True)


def _connected(S, elements, tight):
    for x in elements:
        top = S.d(x)
        below = [f for f in S.idempotents if S.lt(f, top)]
        if not below:
            continue
        dist = _distances(S, x, tight)
        if any(f not in dist for f in below):
            return False
    return True


def is_shortly_connected(S):
    return _connected(S, range(S.order), tight=False)


def is_tightly_connected(S):
    return _connected(S, sorted(S.nongroup_or_idempotent), tight=True)


def order_ideal_check(S):
    """Whether ``N_S ∪ E_S`` is an order ideal of the natural order."""
    ne = S.nongroup_or_idempotent
    return all(
        y in ne
        for x in ne
        for y in range(S.order)
        if S.leq(y, x)
    )


def connectivity_witness(S, tight):
    """First ``(x, e)`` with no bypass, or ``None``."""
    elements = sorted(S.nongroup_or_idempotent) if tight else range(S.order)
    for x in elements:
        dist = _distances(S, x, tight)
        for f in S.idempotents:
            if S.lt(f, S.d(x)) and f not in dist:
                return (x, f)
    return None
