"""Deterministic choice models, distance scores and preference recovery.

Three models are supported:

* rational choice: choose the greatest elements of a weak order;
* undominated choice: choose the elements that no feasible alternative
  strictly beats under a strict partial order;
* dominant choice: choose the greatest elements of a preorder, defer when
  there are none.

A model's distance score for a dataset is the smallest number of
observations that disagree with the model's prediction, minimised over every
admissible relation.  The minimum is exact: all admissible relations are
enumerated and every minimiser is reported.
"""

from __future__ import annotations

import enum
import functools
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, Menu, MenuCollection, Observation, active_subdataset
from .relations import (
    BinaryRelation,
    RelationClass,
    greatest_elements,
    is_linear_order,
    is_preorder,
    is_strict_partial_order,
    is_weak_order,
    maximal_elements,
    relation_array,
)


class ModelKind(enum.Enum):
    RATIONAL = "rc"
    UNDOMINATED = "uc"
    DOMINANT = "dc"

    @property
    def title(self) -> str:
        return {
            "rc": "Rational Choice",
            "uc": "Undominated Choice",
            "dc": "Dominant Choice",
        }[self.value]

    @classmethod
    def parse(cls, text: str) -> ModelKind:
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown model {text!r}; expected one of rc, uc, dc") from None


ALL_MODELS = (ModelKind.RATIONAL, ModelKind.UNDOMINATED, ModelKind.DOMINANT)


def admissible_array(kind: ModelKind, n: int, permissive: bool = False) -> np.ndarray:
    """Admissible relations of a model as a ``(k, n, n)`` array in canonical order.

    By default undominated choice uses strict partial orders with at least one
    incomparable pair and dominant choice uses incomplete preorders, so that
    complete relations belong to rational choice only.  ``permissive`` admits
    the complete ones as well.
    """
    if kind is ModelKind.RATIONAL:
        return relation_array(RelationClass.WEAK_ORDER, n)
    if kind is ModelKind.DOMINANT:
        cls = RelationClass.PREORDER if permissive else RelationClass.INCOMPLETE_PREORDER
        return relation_array(cls, n)
    if permissive:
        return relation_array(RelationClass.STRICT_PARTIAL_ORDER, n)
    return _incomplete_strict_orders(n)


@functools.lru_cache(maxsize=None)
def _incomplete_strict_orders(n: int) -> np.ndarray:
    spo = relation_array(RelationClass.STRICT_PARTIAL_ORDER, n)
    off = ~np.eye(n, dtype=bool)
    linear = ((spo | spo.transpose(0, 2, 1)) | ~off).all(axis=(1, 2))
    arr = np.ascontiguousarray(spo[~linear])
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ModelInstance:
    """A model bound to one admissible relation."""

    kind: ModelKind
    relation: BinaryRelation
    permissive: bool = False

    def __post_init__(self):
        r = self.relation
        if self.kind is ModelKind.RATIONAL:
            ok = is_weak_order(r)
        elif self.kind is ModelKind.UNDOMINATED:
            ok = is_strict_partial_order(r) and (self.permissive or not is_linear_order(r))
        else:
            ok = is_preorder(r) and (self.permissive or not is_weak_order(r))
        if not ok:
            raise ValueError(f"relation is not admissible for {self.kind.title}")


def predict(instance: ModelInstance, menu: Menu | Iterable[int]) -> frozenset[int]:
    members = menu.members if isinstance(menu, Menu) else frozenset(menu)
    if instance.kind is ModelKind.UNDOMINATED:
        return maximal_elements(instance.relation, members)
    chosen = greatest_elements(instance.relation, members)
    if not chosen and instance.kind is ModelKind.RATIONAL:
        raise RuntimeError("rational-choice instance produced an empty choice")
    return chosen


def instance_distance(instance: ModelInstance, d: Dataset) -> int:
    """Number of observations whose choice differs from the prediction."""
    return sum(predict(instance, o.menu) != o.choice for o in d.observations)


def generate_dataset(
    instance: ModelInstance, mc: MenuCollection | Iterable[Menu], subject_id: str = "generated"
) -> Dataset:
    menus = mc.menus if isinstance(mc, MenuCollection) else tuple(mc)
    n = mc.n if isinstance(mc, MenuCollection) else instance.relation.n
    obs = tuple(Observation(m, predict(instance, m)) for m in menus)
    return Dataset(subject_id, obs, forced=instance.kind is not ModelKind.DOMINANT, n=max(n, instance.relation.n))


# ---------------------------------------------------------------------------
# prediction tables


def _member_lists(menu_masks: Sequence[int], n: int) -> list[list[int]]:
    return [[x for x in range(n) if (m >> x) & 1] for m in menu_masks]


@functools.lru_cache(maxsize=16)
def prediction_table(kind: ModelKind, n: int, menu_masks: tuple[int, ...], permissive: bool = False) -> np.ndarray:
    """``(k, M)`` array of predicted choice bitmasks, one row per admissible relation."""
    rel = admissible_array(kind, n, permissive)
    k = rel.shape[0]
    out = np.zeros((k, len(menu_masks)), dtype=np.uint8 if n <= 8 else np.uint16)
    for j, items in enumerate(_member_lists(menu_masks, n)):
        sub = rel[:, items][:, :, items]
        if kind is ModelKind.UNDOMINATED:
            chosen = ~sub.any(axis=1)
        else:
            chosen = sub.all(axis=2)
        weights = np.array([1 << x for x in items], dtype=np.int64)
        out[:, j] = (chosen.astype(np.int64) @ weights).astype(out.dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class _OneHotLayout:
    """Column layout mapping (menu, outcome) to one slot of a 0/1 vector."""

    offsets: np.ndarray
    lut: np.ndarray
    width: int

    @classmethod
    def build(cls, menu_masks: Sequence[int], n: int) -> _OneHotLayout:
        lut = np.full((len(menu_masks), 1 << n), -1, dtype=np.int32)
        offsets = np.zeros(len(menu_masks), dtype=np.int64)
        pos = 0
        for j, items in enumerate(_member_lists(menu_masks, n)):
            offsets[j] = pos
            for code in range(1 << len(items)):
                mask = 0
                for b, x in enumerate(items):
                    if (code >> b) & 1:
                        mask |= 1 << x
                lut[j, mask] = code
            pos += 1 << len(items)
        return cls(offsets, lut, pos)

    def columns(self, choices: np.ndarray) -> np.ndarray:
        m = np.arange(choices.shape[1])
        return self.offsets[None, :] + self.lut[m[None, :], choices.astype(np.int64)]


# ---------------------------------------------------------------------------
# scoring


@dataclass(frozen=True)
class ScoreResult:
    kind: ModelKind
    score: int
    optimal_relations: tuple[BinaryRelation, ...] = field(default=(), repr=False)
    n_admissible: int = 0

    @property
    def n_optimal(self) -> int:
        return len(self.optimal_relations)


def _encode(datasets: Sequence[Dataset], n: int) -> tuple[tuple[int, ...], np.ndarray]:
    masks = sorted({o.menu.mask for d in datasets for o in d.observations}, key=lambda m: (bin(m).count("1"), m))
    col = {m: j for j, m in enumerate(masks)}
    choices = np.full((len(datasets), len(masks)), -1, dtype=np.int16)
    for i, d in enumerate(datasets):
        for o in d.observations:
            choices[i, col[o.menu.mask]] = o.choice_mask
    return tuple(masks), choices


def score_choice_matrix(
    kind: ModelKind,
    n: int,
    menu_masks: Sequence[int],
    choices: np.ndarray,
    *,
    permissive: bool = False,
    keep_optimal: bool = False,
    block: int = 16384,
    chunk: int = 1024,
) -> tuple[np.ndarray, list[np.ndarray] | None]:
    """Exact minimum distance for each row of ``choices``.

    ``choices[i, j]`` is subject ``i``'s chosen bitmask at menu ``j``, or -1
    when that subject never saw the menu.  Returns the scores and, if asked,
    the indices (into :func:`admissible_array`) of every minimising relation.

    Matches between every admissible relation and every subject are counted
    with one matrix product per block of relations, on one-hot encodings of
    the (menu, outcome) pairs.
    """
    menu_masks = tuple(int(m) for m in menu_masks)
    choices = np.asarray(choices)
    n_sub = choices.shape[0]
    present = choices >= 0
    n_obs = present.sum(axis=1)
    table = prediction_table(kind, n, menu_masks, permissive)
    k = table.shape[0]

    if n_sub <= 8:
        # small batches: direct comparison is cheaper than building one-hot blocks
        scores = np.empty(n_sub, dtype=np.int64)
        optimal = [] if keep_optimal else None
        for i in range(n_sub):
            cols = np.nonzero(present[i])[0]
            mism = (table[:, cols] != choices[i, cols].astype(table.dtype)).sum(axis=1)
            best = int(mism.min()) if k else int(n_obs[i])
            scores[i] = best
            if keep_optimal:
                optimal.append(np.nonzero(mism == best)[0])
        return scores, optimal

    layout = _OneHotLayout.build(menu_masks, n)
    subj_cols = layout.columns(np.where(present, choices, 0))
    s_mat = np.zeros((n_sub, layout.width), dtype=np.float32)
    rows = np.repeat(np.arange(n_sub), present.sum(axis=1))
    s_mat[rows, subj_cols[present]] = 1.0

    best = np.full(n_sub, -1, dtype=np.int64)
    winners: list[list[np.ndarray]] | None = [[] for _ in range(n_sub)] if keep_optimal else None
    for start in range(0, k, block):
        stop = min(k, start + block)
        rel_cols = layout.columns(table[start:stop])
        onehot = np.zeros((stop - start, layout.width), dtype=np.float32)
        onehot[np.arange(stop - start)[:, None], rel_cols] = 1.0
        for c0 in range(0, n_sub, chunk):
            c1 = min(n_sub, c0 + chunk)
            matches = (onehot @ s_mat[c0:c1].T).astype(np.int64)
            top = matches.max(axis=0)
            if winners is None:
                np.maximum(best[c0:c1], top, out=best[c0:c1])
                continue
            for j in np.nonzero(top >= best[c0:c1])[0]:
                i = c0 + j
                idx = np.nonzero(matches[:, j] == top[j])[0] + start
                if top[j] > best[i]:
                    best[i] = top[j]
                    winners[i] = [idx]
                else:
                    winners[i].append(idx)
    scores = n_obs - best
    optimal = None if winners is None else [np.concatenate(w) for w in winners]
    return scores, optimal


def score_datasets(
    datasets: Sequence[Dataset],
    kinds: Sequence[ModelKind] = ALL_MODELS,
    *,
    permissive: bool = False,
    keep_optimal: bool = True,
    jobs: int = 1,
) -> list[dict[ModelKind, ScoreResult]]:
    """Distance scores of every dataset under every model in ``kinds``."""
    datasets = list(datasets)
    if not datasets:
        return []
    for d in datasets:
        if not d.observations:
            raise ValueError(f"subject {d.subject_id}: empty dataset cannot be scored")
    n = max(d.n for d in datasets)
    masks, choices = _encode(datasets, n)
    out: list[dict[ModelKind, ScoreResult]] = [{} for _ in datasets]

    def run(kind: ModelKind, lo: int, hi: int):
        return score_choice_matrix(kind, n, masks, choices[lo:hi], permissive=permissive, keep_optimal=keep_optimal)

    jobs = max(1, jobs)
    step = -(-len(datasets) // jobs)
    for kind in kinds:
        rel = admissible_array(kind, n, permissive)
        spans = [(lo, min(len(datasets), lo + step)) for lo in range(0, len(datasets), step)]
        if jobs > 1 and len(spans) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(lambda s: run(kind, *s), spans))
        else:
            parts = [run(kind, *s) for s in spans]
        for (lo, _), (scores, optimal) in zip(spans, parts):
            for j, score in enumerate(scores):
                rels = ()
                if optimal is not None:
                    rels = tuple(BinaryRelation._wrap(rel[i]) for i in np.sort(optimal[j]))
                out[lo + j][kind] = ScoreResult(kind, int(score), rels, rel.shape[0])
    return out


def distance_score(d: Dataset, kind: ModelKind, *, permissive: bool = False) -> ScoreResult:
    """Exact distance score of ``d`` under ``kind`` with every optimal relation."""
    return score_datasets([d], [kind], permissive=permissive)[0][kind]


@dataclass(frozen=True)
class BestModel:
    kind: ModelKind
    result: ScoreResult
    scores: dict[ModelKind, ScoreResult]
    tied_with: tuple[ModelKind, ...] = ()

    @property
    def score(self) -> int:
        return self.result.score

    @property
    def tie(self) -> bool:
        return bool(self.tied_with)


def pick_best(scores: dict[ModelKind, ScoreResult], kinds: Sequence[ModelKind]) -> BestModel:
    """Lowest score wins; rational choice wins any tie it is part of, other
    ties go to the earliest kind in ``kinds``."""
    if not kinds:
        raise ValueError("no models to choose from")
    low = min(scores[k].score for k in kinds)
    tied = [k for k in kinds if scores[k].score == low]
    winner = ModelKind.RATIONAL if ModelKind.RATIONAL in tied else tied[0]
    others = tuple(k for k in tied if k is not winner)
    return BestModel(winner, scores[winner], {k: scores[k] for k in kinds}, others)


def best_model(d: Dataset, kinds: Sequence[ModelKind] = ALL_MODELS, *, permissive: bool = False) -> BestModel:
    scores = score_datasets([d], kinds, permissive=permissive)[0]
    return pick_best(scores, kinds)


def houtman_maks_active(d: Dataset) -> int:
    """Fewest active choices to drop so the rest fit rational choice.

    Deferrals are ignored; a subject who always deferred scores 0.
    """
    active = active_subdataset(d)
    if not active.observations:
        return 0
    return distance_score(active, ModelKind.RATIONAL).score
