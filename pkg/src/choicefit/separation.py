"""Telling revealed indifference apart from revealed indecisiveness.

Two criteria are implemented.

Dominant choice: x and y are indifferent iff, whenever both are feasible,
they are chosen or rejected together (and at least once chosen together);
they are indecisive iff neither is ever chosen when both are feasible.

Undominated choice (Eliaz-Ok): starting from a recovered strict partial
order, incomparable alternatives with identical strict upper and lower sets
that are jointly chosen are read as indifferent.  Indifference requires that
the pair is never separated by the data; indecisiveness requires a choice
reversal (x chosen and y rejected at one menu, y chosen with x feasible at
another).  Both are necessary conditions only, and the reading separates the
two notions only when the induced preorder is regular.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .relations import BinaryRelation, is_regular, label, maximal_elements, parts


class PairStatus(enum.Enum):
    STRICT_PREFERRED = "strict_preferred"  # x over y
    STRICT_DISPREFERRED = "strict_dispreferred"  # y over x
    INDIFFERENT = "indifferent"
    INDECISIVE = "indecisive"
    UNOBSERVED = "unobserved"
    INCONSISTENT = "inconsistent"

    def flipped(self) -> PairStatus:
        if self is PairStatus.STRICT_PREFERRED:
            return PairStatus.STRICT_DISPREFERRED
        if self is PairStatus.STRICT_DISPREFERRED:
            return PairStatus.STRICT_PREFERRED
        return self


class Criterion(enum.Enum):
    ELIAZ_OK = "eliaz_ok"
    DOMINANT_CHOICE = "dominant_choice"
    FROM_RELATION = "from_relation"


@dataclass(frozen=True)
class PairClassification:
    x: int
    y: int
    status: PairStatus
    criterion: Criterion
    supported: bool = True

    def flipped(self) -> PairClassification:
        return PairClassification(self.y, self.x, self.status.flipped(), self.criterion, self.supported)

    @property
    def pair_label(self) -> str:
        return f"{label(self.x)}{label(self.y)}"


def _patterns(d: Dataset, x: int, y: int, observations=None) -> set[str]:
    """Joint patterns of x, y over menus holding both: J both chosen, N neither,
    X only x, Y only y."""
    out = set()
    for o in d.observations if observations is None else observations:
        if x in o.menu and y in o.menu:
            cx, cy = x in o.choice, y in o.choice
            out.add("J" if cx and cy else "X" if cx else "Y" if cy else "N")
    return out


def _dominant_status(pat: set[str]) -> PairStatus:
    if not pat:
        return PairStatus.UNOBSERVED
    if pat == {"N"}:
        return PairStatus.INDECISIVE
    if pat <= {"J", "N"}:
        return PairStatus.INDIFFERENT
    if pat <= {"X", "N"}:
        return PairStatus.STRICT_PREFERRED
    if pat <= {"Y", "N"}:
        return PairStatus.STRICT_DISPREFERRED
    return PairStatus.INCONSISTENT


def classify_from_relation(r: BinaryRelation) -> list[PairClassification]:
    """Strict / indifferent / incomparable reading of a preorder, one row per x < y."""
    strict, indiff, incomp = (p.matrix for p in parts(r))
    out = []
    for x in range(r.n):
        for y in range(x + 1, r.n):
            if strict[x, y]:
                status = PairStatus.STRICT_PREFERRED
            elif strict[y, x]:
                status = PairStatus.STRICT_DISPREFERRED
            elif indiff[x, y]:
                status = PairStatus.INDIFFERENT
            else:
                status = PairStatus.INDECISIVE
            out.append(PairClassification(x, y, status, Criterion.FROM_RELATION))
    return out


def separate_dominant(d: Dataset, relation: BinaryRelation | None = None) -> list[PairClassification]:
    """Dominant-choice separation on the raw data.

    Pairs whose co-occurrence pattern fits no category are INCONSISTENT;
    when a recovered preorder is supplied they are classified from it
    instead, with ``supported=False``.
    """
    alts = sorted(d.universe)
    fallback = {}
    if relation is not None:
        fallback = {(c.x, c.y): c for c in classify_from_relation(relation)}
    out = []
    for i, x in enumerate(alts):
        for y in alts[i + 1:]:
            status = _dominant_status(_patterns(d, x, y))
            if status is PairStatus.INCONSISTENT and (x, y) in fallback:
                out.append(PairClassification(x, y, fallback[(x, y)].status, Criterion.FROM_RELATION, False))
            else:
                out.append(PairClassification(x, y, status, Criterion.DOMINANT_CHOICE))
    return out


@dataclass(frozen=True)
class EliazOkSeparation:
    pairs: tuple[PairClassification, ...]
    preorder: BinaryRelation
    regular: bool
    unexplained: tuple[int, ...]

    @property
    def separating(self) -> bool:
        return self.regular


def weak_interpretation(d: Dataset, r_strict: BinaryRelation, observations=None) -> BinaryRelation:
    """Preorder whose strict part is ``r_strict`` and whose indifferences are
    the incomparable pairs with identical strict neighbourhoods that the data
    never separate and choose together at least once."""
    n = r_strict.n
    s = r_strict.matrix
    obs = d.observations if observations is None else observations
    ind = np.eye(n, dtype=bool)
    for x in range(n):
        for y in range(x + 1, n):
            if s[x, y] or s[y, x]:
                continue
            if not ((s[x] == s[y]).all() and (s[:, x] == s[:, y]).all()):
                continue
            pat = _patterns(d, x, y, obs)
            if "J" in pat and pat <= {"J", "N"}:
                ind[x, y] = ind[y, x] = True
    # pairs sharing neighbourhoods form an equivalence; close it
    for k in range(n):
        ind |= ind[:, k, None] & ind[None, k, :]
    return BinaryRelation(s | ind)


def _has_reversal(x: int, y: int, observations) -> bool:
    over = [o for o in observations if x in o.choice and y in o.menu and y not in o.choice]
    under = [o for o in observations if y in o.choice and x in o.menu]
    return any(a.menu != b.menu for a in over for b in under)


def separate_eliaz_ok(d: Dataset, r_strict: BinaryRelation) -> EliazOkSeparation:
    """Eliaz-Ok reading of an optimal undominated-choice relation.

    Conditions are checked on the observations that ``r_strict`` explains;
    the indices of the other observations are returned as ``unexplained``.
    """
    explained = []
    unexplained = []
    for i, o in enumerate(d.observations):
        if maximal_elements(r_strict, o.menu.members) == o.choice:
            explained.append(o)
        else:
            unexplained.append(i)
    pre = weak_interpretation(d, r_strict, explained)
    out = []
    for c in classify_from_relation(pre):
        if c.status is PairStatus.INDIFFERENT:
            pat = _patterns(d, c.x, c.y, explained)
            supported = bool(pat) and pat <= {"J", "N"}
        elif c.status is PairStatus.INDECISIVE:
            supported = _has_reversal(c.x, c.y, explained) or _has_reversal(c.y, c.x, explained)
        else:
            supported = True
        out.append(PairClassification(c.x, c.y, c.status, Criterion.ELIAZ_OK, supported))
    return EliazOkSeparation(tuple(out), pre, is_regular(pre), tuple(unexplained))


def summarize(pairs: Iterable[PairClassification]) -> dict[str, int]:
    counts = {s.value: 0 for s in PairStatus}
    for p in pairs:
        counts[p.status.value] += 1
    return counts


def has_nontrivial_indifference(r: BinaryRelation) -> bool:
    """True when some two distinct alternatives are indifferent under ``r``."""
    m = r.matrix
    off = ~np.eye(r.n, dtype=bool)
    return bool((m & m.T & off).any())
