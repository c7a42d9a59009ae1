"""Uniform-random simulated subjects and percentile cut-offs.

A simulated subject picks, at each menu, one outcome uniformly at random
among the admissible ones: any nonempty subset of the menu under forced
choice, any subset (the empty one meaning deferral) otherwise.

Random streams: each subject gets its own PCG64 generator seeded from
``SeedSequence(seed, spawn_key=(subject_index,))``, so generating subjects
in any order or split across workers reproduces the serial output exactly.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, MenuCollection, Observation, generate_menu_collection
from .metrics import position_table
from .models import ALL_MODELS, ModelKind, score_choice_matrix

GENERATOR_ID = "numpy.PCG64/SeedSequence(seed, spawn_key=(subject,))"


@dataclass(frozen=True)
class SimConfig:
    mc: MenuCollection
    n_subjects: int
    forced: bool
    seed: int = 0

    def __post_init__(self):
        if self.n_subjects < 1:
            raise ValueError("n_subjects must be at least 1")

    def metadata(self) -> dict:
        return {
            "seed": self.seed,
            "n_subjects": self.n_subjects,
            "forced": self.forced,
            "universe": self.mc.n,
            "menus": len(self.mc),
            "menu_sizes": sorted({len(m) for m in self.mc}),
            "generator": GENERATOR_ID,
            "outcome_distribution": "uniform over admissible subsets",
        }


def subject_rng(seed: int, subject: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(subject,))))


def _local_to_mask(mc: MenuCollection) -> list[np.ndarray]:
    out = []
    for menu in mc:
        items = menu.sorted_members
        lut = np.zeros(1 << len(items), dtype=np.int64)
        for code in range(1 << len(items)):
            lut[code] = sum(1 << x for b, x in enumerate(items) if (code >> b) & 1)
        out.append(lut)
    return out


def simulate_choice_masks(cfg: SimConfig, subjects: range | None = None) -> np.ndarray:
    """``(n_subjects, n_menus)`` array of chosen bitmasks, menus in ``cfg.mc`` order."""
    subjects = range(cfg.n_subjects) if subjects is None else subjects
    sizes = np.array([len(m) for m in cfg.mc], dtype=np.int64)
    high = np.left_shift(1, sizes)
    low = 1 if cfg.forced else 0
    luts = _local_to_mask(cfg.mc)
    out = np.empty((len(subjects), len(cfg.mc)), dtype=np.int16)
    for row, s in enumerate(subjects):
        codes = subject_rng(cfg.seed, s).integers(low, high)
        out[row] = [lut[c] for lut, c in zip(luts, codes)]
    return out


def _masks_to_dataset(cfg: SimConfig, i: int, masks: np.ndarray) -> Dataset:
    obs = tuple(
        Observation(menu, frozenset(x for x in menu.members if (int(c) >> x) & 1))
        for menu, c in zip(cfg.mc, masks)
    )
    return Dataset(f"sim{i:06d}", obs, forced=cfg.forced, n=cfg.mc.n)


def simulate_uniform(cfg: SimConfig) -> list[Dataset]:
    masks = simulate_choice_masks(cfg)
    return [_masks_to_dataset(cfg, i, row) for i, row in enumerate(masks)]


@dataclass(frozen=True)
class Cutoff:
    value: float
    minimum: float
    maximum: float
    p: float


def nearest_rank(values: Sequence[float] | np.ndarray, p: float) -> float:
    """Nearest-rank percentile: the ``ceil(p/100 * N)``-th smallest value."""
    v = np.sort(np.asarray(values).ravel())
    if v.size == 0:
        raise ValueError("empty distribution")
    if not 0 < p < 100:
        raise ValueError("percentile must lie in (0, 100)")
    rank = max(1, math.ceil(p / 100 * v.size))
    return v[rank - 1].item()


def cutoff(distribution: Sequence[float] | np.ndarray, p: float) -> Cutoff:
    v = np.asarray(distribution)
    if v.size == 0:
        raise ValueError("empty distribution")
    return Cutoff(nearest_rank(v, p), v.min().item(), v.max().item(), p)


@dataclass
class Calibration:
    """Score distributions and screening cut-offs for one simulated cohort."""

    config: SimConfig
    scores: dict[ModelKind, np.ndarray] = field(default_factory=dict)
    best_scores: np.ndarray | None = None
    choose_everything: np.ndarray | None = None
    first_item_frequency: np.ndarray | None = None
    average_position: np.ndarray | None = None

    def score_cutoffs(self, p: float = 2.5) -> dict[str, Cutoff]:
        out = {k.value: cutoff(v, p) for k, v in self.scores.items()}
        if self.best_scores is not None:
            out["all"] = cutoff(self.best_scores, p)
        return out

    def screen_cutoffs(self) -> dict[str, Cutoff]:
        return {
            "choose_everything_97.5": cutoff(self.choose_everything, 97.5),
            "first_item_frequency_97.5": cutoff(self.first_item_frequency[~np.isnan(self.first_item_frequency)], 97.5),
            "average_position_2.5": cutoff(self.average_position[~np.isnan(self.average_position)], 2.5),
        }

    def summary(self) -> dict:
        out = {"config": self.config.metadata(), "scores": {}, "screens": {}}
        for name, c in self.score_cutoffs().items():
            out["scores"][name] = {"minimum": c.minimum, "p2.5": c.value}
        if self.choose_everything is not None:
            for name, c in self.screen_cutoffs().items():
                out["screens"][name] = c.value
        return out


def calibrate(
    cfg: SimConfig,
    kinds: Sequence[ModelKind] = ALL_MODELS,
    *,
    batch: int = 8192,
    progress=None,
) -> Calibration:
    """Simulate ``cfg`` and collect score distributions plus screen statistics.

    Subjects are generated and scored in batches so memory stays bounded.
    With ``kinds=()`` only the screen statistics are collected.
    """
    n = cfg.mc.n
    menu_masks = tuple(m.mask for m in cfg.mc)
    first_mask, positions = position_table(cfg.mc)
    scores = {k: np.empty(cfg.n_subjects, dtype=np.int64) for k in kinds}
    every = np.empty(cfg.n_subjects, dtype=np.int64)
    first = np.empty(cfg.n_subjects)
    avgpos = np.empty(cfg.n_subjects)
    full_masks = np.array(menu_masks, dtype=np.int64)
    for lo in range(0, cfg.n_subjects, batch):
        hi = min(cfg.n_subjects, lo + batch)
        masks = simulate_choice_masks(cfg, range(lo, hi)).astype(np.int64)
        for k in kinds:
            scores[k][lo:hi], _ = score_choice_matrix(k, n, menu_masks, masks)
        every[lo:hi] = (masks == full_masks[None, :]).sum(axis=1)
        active = masks != 0
        n_active = active.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            first[lo:hi] = (masks == first_mask[None, :]).sum(axis=1) / np.where(n_active > 0, n_active, np.nan)
            chosen_bits = (masks[:, :, None] >> np.arange(n)[None, None, :]) & 1
            pos_sum = (chosen_bits * positions[None, :, :]).sum(axis=2)
            n_items = chosen_bits.sum(axis=2)
            menu_mean = pos_sum / np.where(n_items > 0, n_items, np.nan)
            avgpos[lo:hi] = _nanmean_rows(menu_mean)
        if progress is not None:
            progress(hi, cfg.n_subjects)
    best = np.min(np.stack([scores[k] for k in kinds]), axis=0) if kinds else None
    return Calibration(cfg, scores, best, every, first, avgpos)


def _nanmean_rows(a: np.ndarray) -> np.ndarray:
    # row means ignoring NaN, NaN for all-NaN rows, without the RuntimeWarning
    ok = ~np.isnan(a)
    cnt = ok.sum(axis=1)
    tot = np.where(ok, a, 0.0).sum(axis=1)
    return tot / np.where(cnt > 0, cnt, np.nan)


def paper_domain(n: int = 6, sizes: Sequence[int] = (2, 3, 4)) -> MenuCollection:
    """The 50-menu domain: all binary, ternary and quaternary menus on 6 items."""
    return generate_menu_collection(n, sizes)
