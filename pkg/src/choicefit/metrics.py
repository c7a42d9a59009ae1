"""Descriptive choice statistics and behavioural screens.

Covers choice proportions, deferral and choose-everything counts,
feasibility-adjusted choice-size frequencies, the two satisficing metrics
(first-listed-item-only frequency and average list position of chosen
items) and the choose-everything screen for a preference for randomization.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field

import numpy as np

from .dataset import Dataset, MenuCollection

# reference cut-offs from 100,000 uniform-random simulated subjects
FIRST_ITEM_CUTOFF = {"forced": 0.28, "non_forced": 0.29}
POSITION_CUTOFF = 1.84
CHOOSE_EVERYTHING_CUTOFF = {"forced": 14, "non_forced": 11}


@dataclass(frozen=True)
class ChoiceProportions:
    per_observation: tuple[float, ...]
    average: float
    average_active: float


def choice_proportions(d: Dataset) -> ChoiceProportions:
    """|choice| / |menu| per observation; averages with and without deferrals."""
    props = tuple(len(o.choice) / len(o.menu) for o in d.observations)
    active = [p for p, o in zip(props, d.observations) if not o.deferred]
    avg = float(np.mean(props)) if props else float("nan")
    avg_active = float(np.mean(active)) if active else float("nan")
    return ChoiceProportions(props, avg, avg_active)


def choice_size_counts(d: Dataset) -> Counter:
    return Counter(len(o.choice) for o in d.observations)


def adjusted_choice_size_frequencies(datasets: Sequence[Dataset], mc: MenuCollection | None = None) -> dict[int, float]:
    """Choice-size frequencies divided by how often each size was feasible.

    Size ``s`` is counted against ``N x #menus of size >= max(s, 1)``, so a
    deferral (size 0) is feasible at every menu.  ``mc`` defaults to the
    menus of the first dataset.
    """
    datasets = list(datasets)
    if not datasets:
        return {}
    menus = list(mc.menus) if mc is not None else datasets[0].menus
    sizes = [len(m) for m in menus]
    counts: Counter = Counter()
    for d in datasets:
        counts.update(choice_size_counts(d))
    forced = all(d.forced for d in datasets)
    out = {}
    for s in range(0 if not forced else 1, max(sizes) + 1):
        feasible = sum(1 for z in sizes if z >= max(s, 1))
        out[s] = counts.get(s, 0) / (len(datasets) * feasible)
    return out


def position_table(mc: MenuCollection | Iterable) -> tuple[np.ndarray, np.ndarray]:
    """For each menu: bitmask of its first listed item, and the 1-based list
    position of every alternative (0 where absent)."""
    menus = list(mc.menus if isinstance(mc, MenuCollection) else mc)
    n = max(max(m.members) for m in menus) + 1
    first = np.array([1 << m.list_order[0] for m in menus], dtype=np.int64)
    pos = np.zeros((len(menus), n), dtype=np.int64)
    for j, m in enumerate(menus):
        for p, x in enumerate(m.list_order, start=1):
            pos[j, x] = p
    return first, pos


@dataclass(frozen=True)
class SatisficingResult:
    first_item_only_frequency: float
    avg_chosen_position: float
    first_item_flag: bool
    position_flag: bool


def first_item_only_frequency(d: Dataset) -> float:
    """Share of active choices that consist of exactly the first listed item."""
    active = [o for o in d.observations if not o.deferred]
    if not active:
        return float("nan")
    return sum(o.choice == {o.menu.list_order[0]} for o in active) / len(active)


def avg_chosen_position(d: Dataset, method: str = "per_menu") -> float:
    """Average 1-based list position of the chosen items; deferrals are skipped.

    ``per_menu`` (default) averages the positions within each menu first and
    then across menus, which is the reading that reproduces the 1.84 cut-off
    on uniform-random subjects.  ``pooled`` averages over all chosen items at
    once, so menus with more chosen items weigh more.
    """
    per = [[o.menu.list_order.index(x) + 1 for x in o.choice] for o in d.observations if o.choice]
    if not per:
        return float("nan")
    if method == "per_menu":
        return float(np.mean([np.mean(p) for p in per]))
    if method == "pooled":
        return float(np.mean([x for p in per for x in p]))
    raise ValueError(f"unknown method {method!r}; expected per_menu or pooled")


def satisficing_screen(d: Dataset, frequency_cutoff: float | None = None, position_cutoff: float = POSITION_CUTOFF) -> SatisficingResult:
    if frequency_cutoff is None:
        frequency_cutoff = FIRST_ITEM_CUTOFF["forced" if d.forced else "non_forced"]
    freq = first_item_only_frequency(d)
    pos = avg_chosen_position(d)
    return SatisficingResult(
        freq,
        pos,
        bool(freq > frequency_cutoff),
        bool(pos < position_cutoff),
    )


def choose_everything_count(d: Dataset) -> int:
    return sum(o.choice == o.menu.members for o in d.observations)


def randomization_screen(d: Dataset, cutoff: int | None = None) -> bool:
    """True when the subject chose the whole menu strictly more than ``cutoff`` times."""
    if cutoff is None:
        cutoff = CHOOSE_EVERYTHING_CUTOFF["forced" if d.forced else "non_forced"]
    return choose_everything_count(d) > cutoff


@dataclass(frozen=True)
class SubjectMetrics:
    subject_id: str
    n_observations: int
    avg_choice_proportion: float
    avg_choice_proportion_active: float
    deferral_count: int
    choose_everything_count: int
    first_item_only_frequency: float
    avg_chosen_position: float
    choice_size_counts: dict[int, int] = field(default_factory=dict)

    def as_row(self) -> dict:
        row = asdict(self)
        sizes = row.pop("choice_size_counts")
        for s, c in sorted(sizes.items()):
            row[f"size_{s}"] = c
        return row


def subject_metrics(d: Dataset) -> SubjectMetrics:
    props = choice_proportions(d)
    return SubjectMetrics(
        d.subject_id,
        len(d),
        props.average,
        props.average_active,
        sum(o.deferred for o in d.observations),
        choose_everything_count(d),
        first_item_only_frequency(d),
        avg_chosen_position(d),
        dict(sorted(choice_size_counts(d).items())),
    )
