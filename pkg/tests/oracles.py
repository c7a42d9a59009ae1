"""Independent brute-force references used by the tests.

Nothing here imports the enumeration or scoring code under test: relations
are found by filtering every boolean matrix, closures by repeated squaring
and choices by explicit double loops.
"""

from __future__ import annotations

import itertools

import numpy as np


def all_matrices(n: int) -> np.ndarray:
    """Every ``n x n`` boolean matrix, ``(2**(n*n), n, n)``."""
    k = n * n
    codes = np.arange(1 << k, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(k)[None, :]) & 1
    return bits.astype(bool).reshape(-1, n, n)


def _transitive(ms: np.ndarray) -> np.ndarray:
    a = ms.astype(np.int32)
    two = np.einsum("kij,kjl->kil", a, a) > 0
    return ~(two & ~ms).any(axis=(1, 2))


def filter_class(n: int, name: str) -> np.ndarray:
    """Relations of a named class among all boolean matrices."""
    ms = all_matrices(n)
    eye = np.eye(n, dtype=bool)
    off = ~eye
    refl = ms[:, eye].all(axis=1)
    irrefl = ~ms[:, eye].any(axis=1)
    trans = _transitive(ms)
    asym = ~(ms & ms.transpose(0, 2, 1)).any(axis=(1, 2))
    total = ((ms | ms.transpose(0, 2, 1)) | eye).all(axis=(1, 2))
    if name == "preorder":
        keep = refl & trans
    elif name == "weak_order":
        keep = refl & trans & total
    elif name == "incomplete_preorder":
        keep = refl & trans & ~total
    elif name == "strict_partial_order":
        keep = irrefl & trans & asym
    elif name == "linear_order":
        keep = irrefl & trans & asym & ((ms | ms.transpose(0, 2, 1)) | ~off).all(axis=(1, 2))
    else:
        raise KeyError(name)
    return ms[keep]


def closure(m: np.ndarray) -> np.ndarray:
    """Transitive closure by squaring until nothing changes."""
    cur = np.array(m, dtype=bool)
    while True:
        a = cur.astype(np.int64)
        nxt = cur | ((a @ a) > 0)
        if (nxt == cur).all():
            return cur
        cur = nxt


def greatest(m: np.ndarray, menu) -> frozenset:
    return frozenset(x for x in menu if all(m[x, y] for y in menu))


def maximal(m: np.ndarray, menu) -> frozenset:
    return frozenset(x for x in menu if not any(m[y, x] for y in menu))


def predict(kind: str, m: np.ndarray, menu) -> frozenset:
    if kind == "uc":
        return maximal(m, menu)
    return greatest(m, menu)


MODEL_CLASS = {"rc": "weak_order", "uc": "strict_partial_order", "dc": "preorder"}


def admissible(kind: str, n: int, permissive: bool = False) -> np.ndarray:
    rels = filter_class(n, MODEL_CLASS[kind])
    if permissive or kind == "rc":
        return rels
    off = ~np.eye(n, dtype=bool)
    complete = ((rels | rels.transpose(0, 2, 1)) | ~off).all(axis=(1, 2))
    return rels[~complete]


def brute_distance(kind: str, n: int, observations, permissive: bool = False):
    """(score, sorted list of optimal relation byte strings) by direct counting.

    ``observations`` is a list of ``(menu_items, chosen_set)``.
    """
    best, arg = None, []
    for m in admissible(kind, n, permissive):
        miss = sum(predict(kind, m, menu) != frozenset(ch) for menu, ch in observations)
        if best is None or miss < best:
            best, arg = miss, [m.tobytes()]
        elif miss == best:
            arg.append(m.tobytes())
    return best, sorted(arg)


class CachedOracle:
    """``brute_distance`` with per-relation predictions looked up, not recomputed."""

    def __init__(self, kind: str, n: int, permissive: bool = False):
        self.kind = kind
        self.rels = admissible(kind, n, permissive)
        self._pred: dict[tuple[int, ...], list[frozenset]] = {}

    def predictions(self, menu) -> list[frozenset]:
        key = tuple(sorted(menu))
        if key not in self._pred:
            self._pred[key] = [predict(self.kind, m, key) for m in self.rels]
        return self._pred[key]

    def distance(self, observations):
        miss = np.zeros(len(self.rels), dtype=np.int64)
        for menu, ch in observations:
            ch = frozenset(ch)
            miss += np.fromiter((p != ch for p in self.predictions(menu)), dtype=bool, count=len(self.rels))
        best = int(miss.min())
        return best, sorted(self.rels[i].tobytes() for i in np.flatnonzero(miss == best))


def all_menus(n: int, sizes) -> list[tuple[int, ...]]:
    return [c for s in sizes for c in itertools.combinations(range(n), s)]
