"""Revealed preference relations, axioms and constructive rationalizations.

Relations computed from a dataset (``x`` and ``y`` range over the
alternatives that appear in some menu):

``r_weak``      x is chosen at some menu where y is feasible
``r_strict``    x is chosen at some menu where y is feasible and rejected
``r_weak_hat``  transitive closure of ``r_weak``
``r_star``      ``r_strict`` pairs (x, y) such that y is never weakly
                revealed over x
``r_star_hat``  transitive closure of ``r_star``

The rationalization routines return the relation used in the constructive
argument and re-check it against every observation; a failed re-check means
a bug here, not bad data, and raises :class:`InternalConsistencyError`.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .relations import BinaryRelation, greatest_elements, label, maximal_elements, transitive_closure

AXIOMS = (
    "BehaviouralDecisiveness",
    "GeneralizedCongruence",
    "UpwardConsistency",
    "Congruence",
    "Expansion",
    "Desirability",
    "PropertyAlpha",
)

WITNESS_CAP = 100


class InternalConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class RevealedBundle:
    universe: frozenset[int]
    r_weak: BinaryRelation
    r_strict: BinaryRelation
    r_weak_hat: BinaryRelation
    r_star: BinaryRelation
    r_star_hat: BinaryRelation


def compute_revealed(d: Dataset) -> RevealedBundle:
    n = d.n
    weak = np.zeros((n, n), dtype=bool)
    strict = np.zeros((n, n), dtype=bool)
    for o in d.observations:
        menu = list(o.menu.members)
        rejected = [y for y in menu if y not in o.choice]
        for x in o.choice:
            weak[x, menu] = True
            strict[x, rejected] = True
    star = strict & ~weak.T
    r_weak = BinaryRelation(weak)
    r_star = BinaryRelation(star)
    return RevealedBundle(
        d.universe,
        r_weak,
        BinaryRelation(strict),
        transitive_closure(r_weak),
        r_star,
        transitive_closure(r_star),
    )


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    holds: bool
    witnesses: tuple = ()
    truncated: bool = False

    def describe_witnesses(self) -> list[str]:
        return [_fmt(w) for w in self.witnesses]


def _fmt(w) -> str:
    kind, *rest = w
    if kind == "obs":
        return "obs " + ",".join(str(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in rest)
    if kind == "pair":
        x, y = rest
        return f"{label(x)},{label(y)}"
    if kind == "item":
        i, x = rest
        return f"obs {i}:{label(x)}"
    if kind == "alpha":
        i, j, x = rest
        return f"obs {i}>obs {j}:{label(x)}"
    return str(w)


def _pairs(m: np.ndarray) -> list[tuple[int, int]]:
    return [(int(x), int(y)) for x, y in zip(*np.nonzero(m))]


def _witnesses_for(d: Dataset, axiom: str, bundle: RevealedBundle) -> list[tuple]:
    obs = d.observations
    if axiom == "BehaviouralDecisiveness":
        return [("obs", i) for i, o in enumerate(obs) if o.deferred]
    if axiom == "Desirability":
        return [("obs", i) for i, o in enumerate(obs) if len(o.menu) == 1 and o.choice != o.menu.members]
    if axiom == "GeneralizedCongruence":
        # x >^ y forbids y >=R x
        bad = bundle.r_star_hat.matrix & bundle.r_weak.matrix.T
        return [("pair", x, y) for x, y in _pairs(bad)]
    if axiom == "Congruence":
        # x >=^ y forbids y >R x
        bad = bundle.r_weak_hat.matrix & bundle.r_strict.matrix.T
        return [("pair", x, y) for x, y in _pairs(bad)]
    if axiom == "UpwardConsistency":
        star_hat = bundle.r_star_hat.matrix
        out = []
        for i, o in enumerate(obs):
            items = list(o.menu.members)
            for x in items:
                if x not in o.choice and not star_hat[items, x].any():
                    out.append(("item", i, x))
        return out
    if axiom == "Expansion":
        hat = bundle.r_weak_hat.matrix
        out = []
        for i, o in enumerate(obs):
            items = list(o.menu.members)
            for x in items:
                if x not in o.choice and hat[x, items].all():
                    out.append(("item", i, x))
        return out
    if axiom == "PropertyAlpha":
        out = []
        for i, big in enumerate(obs):
            for j, small in enumerate(obs):
                if i == j or not small.menu.members <= big.menu.members:
                    continue
                for x in sorted((big.choice & small.menu.members) - small.choice):
                    out.append(("alpha", i, j, x))
        return out
    raise ValueError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}")


def check_axiom(d: Dataset, axiom: str, cap: int | None = WITNESS_CAP, bundle: RevealedBundle | None = None) -> AxiomReport:
    """Exhaustive check of one axiom; ``cap=None`` keeps every witness."""
    if axiom not in AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}")
    bundle = compute_revealed(d) if bundle is None else bundle
    wit = _witnesses_for(d, axiom, bundle)
    truncated = cap is not None and len(wit) > cap
    if truncated:
        wit = wit[:cap]
    return AxiomReport(axiom, not wit, tuple(wit), truncated)


def check_axioms(d: Dataset, axioms: Iterable[str] = AXIOMS, cap: int | None = WITNESS_CAP) -> dict[str, AxiomReport]:
    bundle = compute_revealed(d)
    return {a: check_axiom(d, a, cap, bundle) for a in axioms}


@dataclass(frozen=True)
class Rationalization:
    """Outcome of a rationalizability test.

    ``relation`` is None when an axiom fails; ``failures`` then lists the
    reports of the failing axioms.
    """

    relation: BinaryRelation | None
    failures: tuple[AxiomReport, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.relation is not None


def _failing(d: Dataset, names: Iterable[str]) -> tuple[RevealedBundle, tuple[AxiomReport, ...]]:
    bundle = compute_revealed(d)
    reports = tuple(check_axiom(d, a, bundle=bundle) for a in names)
    return bundle, tuple(r for r in reports if not r.holds)


def rationalize_undominated(d: Dataset) -> Rationalization:
    """Sufficient test for undominated choice with a strict partial order.

    When Behavioural Decisiveness, Generalized Congruence and Upward
    Consistency hold, ``r_star_hat`` rationalizes the data.  Data can be
    rationalizable without passing this test.
    """
    bundle, failed = _failing(d, ("BehaviouralDecisiveness", "GeneralizedCongruence", "UpwardConsistency"))
    if failed:
        return Rationalization(None, failed)
    rel = bundle.r_star_hat
    m = rel.matrix
    if (m & m.T).any():
        raise InternalConsistencyError("r_star_hat is not asymmetric although Generalized Congruence holds")
    for i, o in enumerate(d.observations):
        if maximal_elements(rel, o.menu.members) != o.choice:
            raise InternalConsistencyError(f"r_star_hat does not reproduce observation {i}")
    return Rationalization(rel)


def rationalize_dominant(d: Dataset) -> Rationalization:
    """Exact test for dominant choice with a preorder.

    Congruence, Desirability and Expansion together are necessary and
    sufficient; the rationalizing preorder is ``r_weak_hat`` plus the
    diagonal.
    """
    bundle, failed = _failing(d, ("Congruence", "Desirability", "Expansion"))
    if failed:
        return Rationalization(None, failed)
    rel = bundle.r_weak_hat.with_diagonal()
    for i, o in enumerate(d.observations):
        if greatest_elements(rel, o.menu.members) != o.choice:
            raise InternalConsistencyError(f"preorder does not reproduce observation {i}")
    return Rationalization(rel)


def _complete_extension(pre: np.ndarray) -> np.ndarray:
    """Weak order containing the preorder ``pre`` and its strict part.

    Indifference classes of ``pre`` are peeled off one at a time, always the
    undominated class with the smallest alternative first.
    """
    n = pre.shape[0]
    strict = pre & ~pre.T
    remaining = set(range(n))
    rank = np.zeros(n, dtype=int)
    level = 0
    while remaining:
        tops = [x for x in sorted(remaining) if not any(strict[y, x] for y in remaining)]
        x = tops[0]
        cls = [y for y in sorted(remaining) if pre[x, y] and pre[y, x]]
        for y in cls:
            rank[y] = level
            remaining.discard(y)
        level += 1
    return rank[:, None] <= rank[None, :]


def richter_rationalize(d: Dataset) -> Rationalization:
    """Rational choice test: Behavioural Decisiveness plus Congruence.

    Returns a weak order extending the indirect revealed preference.
    """
    bundle, failed = _failing(d, ("BehaviouralDecisiveness", "Congruence"))
    if failed:
        return Rationalization(None, failed)
    pre = bundle.r_weak_hat.with_diagonal().matrix
    rel = BinaryRelation(_complete_extension(pre))
    for i, o in enumerate(d.observations):
        if greatest_elements(rel, o.menu.members) != o.choice:
            raise InternalConsistencyError(f"weak order does not reproduce observation {i}")
    return Rationalization(rel)
