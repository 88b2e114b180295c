"""Partial bijections on ``{0, ..., n-1}``.

Maps act on the right and compose left to right: ``compose(a, b)`` sends
``i`` to ``(i a) b``.  This matches postfix notation ``x.a.b``; note that
many texts compose the other way.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import comb, factorial

import numpy as np

from .config import DEFAULT_LIMITS
from .errors import CapExceeded, InputError

UNDEFINED = -1


class PartialBijection:
    """An injective partial map on ``range(universe_size)``.

    ``images[i]`` is the image of ``i`` or :data:`UNDEFINED`.  Instances are
    immutable and hashable; equality is entry-wise.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        images = tuple(int(j) for j in images)
        n = len(images)
        seen = set()
        for j in images:
            if j == UNDEFINED:
                continue
            if not 0 <= j < n:
                raise InputError(f"image {j} outside universe of size {n}")
            if j in seen:
                raise InputError(f"image {j} hit twice; map is not injective")
            seen.add(j)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash(images))

    def __setattr__(self, name, value):
        raise AttributeError("PartialBijection is immutable")

    @classmethod
    def from_pairs(cls, n, pairs):
        images = [UNDEFINED] * n
        for i, j in dict(pairs).items():
            images[i] = j
        return cls(images)

    @classmethod
    def identity(cls, n, subset=None):
        """Partial identity on ``subset`` (all of the universe by default)."""
        if subset is None:
            return cls(range(n))
        images = [UNDEFINED] * n
        for i in subset:
            images[i] = i
        return cls(images)

    @classmethod
    def empty(cls, n):
        return cls([UNDEFINED] * n)

    @property
    def universe_size(self):
        return len(self.images)

    def __call__(self, i):
        j = self.images[i]
        return None if j == UNDEFINED else j

    def pairs(self):
        return [(i, j) for i, j in enumerate(self.images) if j != UNDEFINED]

    def domain(self):
        return frozenset(i for i, j in enumerate(self.images) if j != UNDEFINED)

    def image(self):
        return frozenset(j for j in self.images if j != UNDEFINED)

    def rank(self):
        return sum(1 for j in self.images if j != UNDEFINED)

    def __eq__(self, other):
        if not isinstance(other, PartialBijection):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"PartialBijection({list(self.images)})"

    def __str__(self):
        body = ", ".join(f"{i}↦{j}" for i, j in self.pairs())
        return f"[{body}]/n={self.universe_size}"


def _check_sizes(a, b):
    if a.universe_size != b.universe_size:
        raise InputError(
            f"universe sizes differ: {a.universe_size} vs {b.universe_size}"
        )


def compose(a, b):
    """Left-to-right product: ``i`` maps to ``(i a) b`` where both are defined."""
    _check_sizes(a, b)
    bi = b.images
    return PartialBijection(UNDEFINED if j == UNDEFINED else bi[j] for j in a.images)


def invert(a):
    images = [UNDEFINED] * a.universe_size
    for i, j in a.pairs():
        images[j] = i
    return PartialBijection(images)


def is_idempotent(a):
    return all(j == UNDEFINED or j == i for i, j in enumerate(a.images))


def natural_leq(a, b):
    """``a <= b`` iff ``a`` is a restriction of ``b``."""
    _check_sizes(a, b)
    return all(j == UNDEFINED or j == k for j, k in zip(a.images, b.images))


def check_universe(n, cap=None):
    """Refuse universes above ``cap`` (default ``Limits.universe_cap``)."""
    cap = DEFAULT_LIMITS.universe_cap if cap is None else cap
    if n > cap:
        raise CapExceeded(f"universe size {n} exceeds cap {cap}")


def symmetric_inverse_monoid(n, universe_cap=None):
    """All partial bijections on ``n`` points, in sorted order."""
    check_universe(n, universe_cap)
    out = []
    for k in range(n + 1):
        for dom in combinations(range(n), k):
            for img in combinations(range(n), k):
                for perm in permutations(img):
                    out.append(PartialBijection.from_pairs(n, zip(dom, perm)))
    out.sort()
    return out


def symmetric_inverse_monoid_order(n):
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


# -- vectorised helpers -------------------------------------------------------


def to_array(maps):
    """Stack maps into an ``(m, n)`` int array with ``UNDEFINED`` entries."""
    maps = list(maps)
    if not maps:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([m.images for m in maps], dtype=np.int64)


def _row_keys(arr):
    """Injective key per row; int64 when it fits, otherwise bytes."""
    m, n = arr.shape
    if n == 0:
        return np.zeros(m, dtype=np.int64)
    if (n + 1) ** n < 2**62:
        weights = (n + 1) ** np.arange(n, dtype=np.int64)
        return (arr + 1) @ weights
    return np.array([row.tobytes() for row in np.ascontiguousarray(arr)], dtype=object)


def compose_rows(a_rows, b):
    """Compose each row of ``a_rows`` with the single map array ``b``."""
    out = np.full_like(a_rows, UNDEFINED)
    mask = a_rows != UNDEFINED
    out[mask] = b[a_rows[mask]]
    return out


def product_table(maps, strict=True):
    """Cayley table of ``maps`` under :func:`compose`.

    Returns an ``(m, m)`` int array of indices into ``maps``.  With
    ``strict`` a product falling outside the list raises
    :class:`InputError`; otherwise such entries are ``-1``.
    """
    arr = to_array(maps)
    m = len(arr)
    table = np.empty((m, m), dtype=np.int64)
    if m == 0:
        return table
    keys = _row_keys(arr)
    if keys.dtype == object:
        index = {k: i for i, k in enumerate(keys)}
        for b in range(m):
            prod_keys = _row_keys(compose_rows(arr, arr[b]))
            table[:, b] = [index.get(k, -1) for k in prod_keys]
    else:
        order = np.argsort(keys)
        sorted_keys = keys[order]
        for b in range(m):
            pk = _row_keys(compose_rows(arr, arr[b]))
            pos = np.searchsorted(sorted_keys, pk)
            pos = np.minimum(pos, m - 1)
            hit = sorted_keys[pos] == pk
            table[:, b] = np.where(hit, order[pos], -1)
    if strict and (table < 0).any():
        a, b = map(int, np.argwhere(table < 0)[0])
        raise InputError(
            f"product {maps[a]} * {maps[b]} is not in the list", witness=(a, b)
        )
    return table


def inverse_indices(maps):
    """Index of each map's inverse within ``maps`` (or -1 if absent)."""
    index = {m: i for i, m in enumerate(maps)}
    return np.array([index.get(invert(m), -1) for m in maps], dtype=np.int64)
