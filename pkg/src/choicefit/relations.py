"""Binary relations over a finite set of alternatives.

Relations are stored as ``n x n`` boolean matrices where entry ``(x, y)``
means "x R y".  Alternatives are integers ``0..n-1`` and are displayed as
the letters ``A, B, C, ...``.

The module also enumerates the relation classes used by the choice models:
weak orders, strict partial orders, preorders (complete or not) and linear
orders.  Enumeration is exact and returns relations in a canonical order
(lexicographic on the row-major matrix bits, read from entry ``(0, 0)``).
"""

from __future__ import annotations

import enum
import functools
import itertools
from collections.abc import Iterable, Iterator

import numpy as np

MAX_ENUMERATION_N = 7


def label(x: int) -> str:
    """Letter label of alternative ``x`` (``0 -> 'A'``)."""
    if not 0 <= x < 26:
        raise ValueError(f"no letter label for alternative {x}")
    return chr(ord("A") + x)


def index_of(name: str) -> int:
    """Inverse of :func:`label`."""
    name = name.strip()
    if len(name) != 1 or not "A" <= name <= "Z":
        raise ValueError(f"bad alternative label {name!r}")
    return ord(name) - ord("A")


class BinaryRelation:
    """Immutable boolean-matrix relation on ``n`` alternatives."""

    __slots__ = ("_m",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=bool, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"relation matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        self._m = m

    @classmethod
    def _wrap(cls, m: np.ndarray) -> BinaryRelation:
        # no copy; caller guarantees a read-only square bool array
        obj = cls.__new__(cls)
        obj._m = m
        return obj

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> BinaryRelation:
        m = np.zeros((n, n), dtype=bool)
        for x, y in pairs:
            m[x, y] = True
        return cls(m)

    @classmethod
    def identity(cls, n: int) -> BinaryRelation:
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> BinaryRelation:
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> BinaryRelation:
        return cls(np.zeros((n, n), dtype=bool))

    @property
    def n(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def __contains__(self, pair: tuple[int, int]) -> bool:
        x, y = pair
        return bool(self._m[x, y])

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in zip(*np.nonzero(self._m))]

    def key(self) -> int:
        """Canonical sort key: row-major bits, entry (0, 0) most significant."""
        bits = self._m.ravel()
        out = 0
        for b in bits:
            out = (out << 1) | int(b)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return self._m.shape == other._m.shape and bool((self._m == other._m).all())

    def __hash__(self) -> int:
        return hash((self.n, self._m.tobytes()))

    def __le__(self, other: BinaryRelation) -> bool:
        return bool((self._m <= other._m).all())

    def __or__(self, other: BinaryRelation) -> BinaryRelation:
        return BinaryRelation(self._m | other._m)

    def __and__(self, other: BinaryRelation) -> BinaryRelation:
        return BinaryRelation(self._m & other._m)

    def transpose(self) -> BinaryRelation:
        return BinaryRelation(self._m.T)

    def with_diagonal(self) -> BinaryRelation:
        m = self._m.copy()
        np.fill_diagonal(m, True)
        return BinaryRelation(m)

    def __repr__(self) -> str:
        body = ", ".join(f"{label(x)}{label(y)}" for x, y in self.pairs())
        return f"BinaryRelation(n={self.n}, {{{body}}})"


class RelationClass(enum.Enum):
    WEAK_ORDER = "weak_order"
    STRICT_PARTIAL_ORDER = "strict_partial_order"
    INCOMPLETE_PREORDER = "incomplete_preorder"
    PREORDER = "preorder"
    LINEAR_ORDER = "linear_order"


# ---------------------------------------------------------------------------
# properties


def _is_transitive(m: np.ndarray) -> bool:
    comp = (m.astype(np.uint8) @ m.astype(np.uint8)) > 0
    return bool((comp <= m).all())


def _strict_part(m: np.ndarray) -> np.ndarray:
    return m & ~m.T


def _has_cycle(m: np.ndarray) -> bool:
    return bool(np.diag(_closure(m)).any())


def _closure(m: np.ndarray) -> np.ndarray:
    c = m.copy()
    for k in range(c.shape[0]):
        c |= c[:, k, None] & c[None, k, :]
    return c


def classify(r: BinaryRelation) -> frozenset[str]:
    """Set of order-theoretic properties that ``r`` satisfies.

    ``acyclic`` refers to the asymmetric part of ``r``; ``complete`` means
    ``x R y or y R x`` for every ``x, y`` (the diagonal included).
    """
    m = r.matrix
    diag = np.diag(m)
    props = set()
    if diag.all():
        props.add("reflexive")
    if not diag.any():
        props.add("irreflexive")
    if _is_transitive(m):
        props.add("transitive")
    if (m | m.T).all():
        props.add("complete")
    if not (m & m.T).any():
        props.add("asymmetric")
    off = ~np.eye(r.n, dtype=bool)
    if not (m & m.T & off).any():
        props.add("antisymmetric")
    if not _has_cycle(_strict_part(m)):
        props.add("acyclic")
    return frozenset(props)


def is_preorder(r: BinaryRelation) -> bool:
    return bool(np.diag(r.matrix).all()) and _is_transitive(r.matrix)


def is_weak_order(r: BinaryRelation) -> bool:
    return is_preorder(r) and bool((r.matrix | r.matrix.T).all())


def is_strict_partial_order(r: BinaryRelation) -> bool:
    m = r.matrix
    return not (m & m.T).any() and _is_transitive(m)


def is_linear_order(r: BinaryRelation) -> bool:
    m = r.matrix
    off = ~np.eye(r.n, dtype=bool)
    return is_strict_partial_order(r) and bool(((m | m.T) | ~off).all())


def belongs_to(r: BinaryRelation, cls: RelationClass) -> bool:
    if cls is RelationClass.WEAK_ORDER:
        return is_weak_order(r)
    if cls is RelationClass.PREORDER:
        return is_preorder(r)
    if cls is RelationClass.INCOMPLETE_PREORDER:
        return is_preorder(r) and not is_weak_order(r)
    if cls is RelationClass.STRICT_PARTIAL_ORDER:
        return is_strict_partial_order(r)
    if cls is RelationClass.LINEAR_ORDER:
        return is_linear_order(r)
    raise ValueError(cls)


# ---------------------------------------------------------------------------
# algebra


def transitive_closure(r: BinaryRelation) -> BinaryRelation:
    """Smallest transitive relation containing ``r`` (Warshall)."""
    return BinaryRelation(_closure(r.matrix))


def transitive_reduction(r_strict: BinaryRelation) -> BinaryRelation:
    """Covering pairs of a strict partial order."""
    m = r_strict.matrix
    if not is_strict_partial_order(r_strict):
        raise ValueError("transitive reduction needs a strict partial order")
    two_step = (m.astype(np.uint8) @ m.astype(np.uint8)) > 0
    return BinaryRelation(m & ~two_step)


def strict_part(r: BinaryRelation) -> BinaryRelation:
    return BinaryRelation(_strict_part(r.matrix))


def parts(r: BinaryRelation) -> tuple[BinaryRelation, BinaryRelation, BinaryRelation]:
    """Split a reflexive relation into (strict, indifference, incomparability).

    Together with the diagonal the three parts partition all ordered pairs.
    """
    m = r.matrix
    if not np.diag(m).all():
        raise ValueError("parts() needs a reflexive relation")
    off = ~np.eye(r.n, dtype=bool)
    strict = m & ~m.T
    indiff = m & m.T & off
    incomp = ~m & ~m.T & off
    return BinaryRelation(strict), BinaryRelation(indiff), BinaryRelation(incomp)


def is_regular(r: BinaryRelation) -> bool:
    """Regularity of a preorder in the sense used for undominated choice.

    Every incomparable pair ``(x, y)`` needs a third alternative ``z`` that is
    incomparable to one of them and strictly ranked against the other.
    """
    if not is_preorder(r):
        raise ValueError("is_regular() needs a preorder")
    strict, _, incomp = (p.matrix for p in parts(r))
    ranked = strict | strict.T
    n = r.n
    for x in range(n):
        for y in range(x + 1, n):
            if not incomp[x, y]:
                continue
            ok = False
            for z in range(n):
                if z in (x, y):
                    continue
                if (incomp[x, z] and ranked[y, z]) or (incomp[y, z] and ranked[x, z]):
                    ok = True
                    break
            if not ok:
                return False
    return True


def greatest_elements(r: BinaryRelation, menu: Iterable[int]) -> frozenset[int]:
    """``{x in menu : x R y for all y in menu}``; may be empty."""
    items = sorted(set(menu))
    if not items:
        raise ValueError("empty menu")
    sub = r.matrix[np.ix_(items, items)]
    return frozenset(items[i] for i in np.nonzero(sub.all(axis=1))[0])


def maximal_elements(r_strict: BinaryRelation, menu: Iterable[int]) -> frozenset[int]:
    """``{x in menu : no y in menu with y R x}``."""
    items = sorted(set(menu))
    if not items:
        raise ValueError("empty menu")
    sub = r_strict.matrix[np.ix_(items, items)]
    return frozenset(items[i] for i in np.nonzero(~sub.any(axis=0))[0])


# ---------------------------------------------------------------------------
# text form


def to_text(r: BinaryRelation) -> str:
    """Line-oriented text form.

    Reflexive relations print their strict part as ``A>B`` and their
    indifference part as ``A~B`` (once per unordered pair); other relations
    print every pair as ``A>B``.  A header line records ``n`` and whether the
    relation is reflexive.
    """
    m = r.matrix
    reflexive = bool(np.diag(m).all())
    lines = [f"# n={r.n} {'reflexive' if reflexive else 'strict'}"]
    for x in range(r.n):
        for y in range(r.n):
            if x == y or not m[x, y]:
                continue
            if reflexive and m[y, x]:
                if x < y:
                    lines.append(f"{label(x)}~{label(y)}")
            else:
                lines.append(f"{label(x)}>{label(y)}")
    return "\n".join(lines) + "\n"


def from_text(text: str, n: int | None = None) -> BinaryRelation:
    """Parse the output of :func:`to_text`."""
    reflexive = None
    pairs: list[tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("n="):
                    n = int(tok[2:]) if n is None else n
                elif tok in ("reflexive", "strict"):
                    reflexive = tok == "reflexive"
            continue
        if ">" in line:
            a, b = line.split(">")
            pairs.append((index_of(a), index_of(b)))
        elif "~" in line:
            a, b = line.split("~")
            x, y = index_of(a), index_of(b)
            pairs += [(x, y), (y, x)]
        else:
            raise ValueError(f"cannot parse relation line {raw!r}")
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=-1)
    m = np.zeros((n, n), dtype=bool)
    for x, y in pairs:
        m[x, y] = True
    if reflexive is None:
        reflexive = any(x == y for x, y in pairs) or any(m[y, x] for x, y in pairs)
    if reflexive:
        np.fill_diagonal(m, True)
    return BinaryRelation(m)


# ---------------------------------------------------------------------------
# enumeration


def _posets_downsets(m: int) -> list[tuple[int, ...]]:
    """All strict partial orders on ``m`` labelled points as ``below`` bitmasks.

    ``below[i]`` is the set of points strictly below ``i``.  Points are added
    one at a time; the new point receives a down-set ``D`` and an up-set ``U``
    with every element of ``D`` below every element of ``U``, which keeps the
    relation transitive without ever generating a non-transitive candidate.
    """
    posets: list[tuple[int, ...]] = [()]
    for k in range(m):
        nxt: list[tuple[int, ...]] = []
        full = (1 << k) - 1
        for below in posets:
            above = [0] * k
            for i in range(k):
                b = below[i]
                j = 0
                while b:
                    if b & 1:
                        above[j] |= 1 << i
                    b >>= 1
                    j += 1
            downsets = _downsets(below, k)
            for d in downsets:
                # points that dominate every member of d
                w = 0
                for u in range(k):
                    if not (d >> u) & 1 and (below[u] & d) == d:
                        w |= 1 << u
                for d2 in downsets:
                    u_set = full & ~d2
                    if u_set & ~w:
                        continue
                    new_below = list(below)
                    for u in range(k):
                        if (u_set >> u) & 1:
                            new_below[u] |= 1 << k
                    new_below.append(d)
                    nxt.append(tuple(new_below))
        posets = nxt
    return posets


def _downsets(below: tuple[int, ...], k: int) -> list[int]:
    out = []
    for s in range(1 << k):
        ok = True
        t = s
        i = 0
        while t:
            if t & 1 and (below[i] & ~s):
                ok = False
                break
            t >>= 1
            i += 1
        if ok:
            out.append(s)
    return out


def _set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings: block index of each element."""
    def rec(i: int, blocks: list[int], nblocks: int):
        if i == n:
            yield list(blocks)
            return
        for b in range(nblocks + 1):
            blocks.append(b)
            yield from rec(i + 1, blocks, max(nblocks, b + 1))
            blocks.pop()
    yield from rec(0, [], 0)


def _canonical_sort(arr: np.ndarray) -> np.ndarray:
    k, n, _ = arr.shape
    flat = arr.reshape(k, n * n).astype(np.uint64)
    weights = np.uint64(1) << np.arange(n * n - 1, -1, -1, dtype=np.uint64)
    keys = (flat * weights).sum(axis=1, dtype=np.uint64)
    order = np.argsort(keys, kind="stable")
    return arr[order]


@functools.lru_cache(maxsize=None)
def _strict_partial_orders(n: int) -> np.ndarray:
    posets = _posets_downsets(n)
    arr = np.zeros((len(posets), n, n), dtype=bool)
    for idx, below in enumerate(posets):
        for x, b in enumerate(below):
            for y in range(n):
                if (b >> y) & 1:
                    arr[idx, x, y] = True
    return _canonical_sort(arr)


@functools.lru_cache(maxsize=None)
def _preorders(n: int) -> np.ndarray:
    chunks = []
    for blocks in _set_partitions(n):
        nb = max(blocks) + 1
        orders = _strict_partial_orders(nb)
        onehot = np.zeros((n, nb), dtype=bool)
        onehot[np.arange(n), blocks] = True
        same = onehot @ onehot.T
        # x >= y iff same block or block(x) strictly above block(y)
        lifted = orders[:, blocks][:, :, blocks]
        chunks.append(lifted | same[None])
    return _canonical_sort(np.concatenate(chunks, axis=0))


@functools.lru_cache(maxsize=None)
def _weak_orders(n: int) -> np.ndarray:
    rows = []
    # ordered set partitions: rank of each alternative, ranks surjective onto 0..k-1
    for k in range(1, n + 1):
        for ranks in itertools.product(range(k), repeat=n):
            if len(set(ranks)) != k:
                continue
            r = np.array(ranks)
            rows.append(r[:, None] <= r[None, :])
    return _canonical_sort(np.array(rows, dtype=bool).reshape(-1, n, n))


@functools.lru_cache(maxsize=None)
def relation_array(cls: RelationClass, n: int) -> np.ndarray:
    """All relations of ``cls`` on ``n`` points as a read-only ``(k, n, n)`` array."""
    if not 1 <= n <= MAX_ENUMERATION_N:
        raise ValueError(f"enumeration supports 1 <= n <= {MAX_ENUMERATION_N}, got {n}")
    if cls is RelationClass.WEAK_ORDER:
        arr = _weak_orders(n)
    elif cls is RelationClass.PREORDER:
        arr = _preorders(n)
    elif cls is RelationClass.INCOMPLETE_PREORDER:
        pre = _preorders(n)
        arr = pre[~(pre | pre.transpose(0, 2, 1)).all(axis=(1, 2))]
    elif cls is RelationClass.STRICT_PARTIAL_ORDER:
        arr = _strict_partial_orders(n)
    elif cls is RelationClass.LINEAR_ORDER:
        spo = _strict_partial_orders(n)
        off = ~np.eye(n, dtype=bool)
        arr = spo[((spo | spo.transpose(0, 2, 1)) | ~off).all(axis=(1, 2))]
    else:
        raise ValueError(cls)
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def enumerate_relations(cls: RelationClass, n: int) -> list[BinaryRelation]:
    """Every relation of ``cls`` on ``n`` alternatives, in canonical order."""
    arr = relation_array(cls, n)
    return [BinaryRelation._wrap(arr[i]) for i in range(arr.shape[0])]


def count_relations(cls: RelationClass, n: int) -> int:
    return int(relation_array(cls, n).shape[0])
