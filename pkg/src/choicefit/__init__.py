"""Fit rational, undominated and dominant choice models to choice data.

Distance scores are exact minima over enumerated preference relations;
revealed-preference axioms, indifference/indecisiveness separation,
behavioural screens and uniform-random calibration are included.
"""

__version__ = "0.1.0"

from .dataset import (
    ChoiceDataError,
    Dataset,
    Menu,
    MenuCollection,
    Observation,
    generate_menu_collection,
    parse_csv,
    write_csv,
)
from .models import (
    ALL_MODELS,
    ModelInstance,
    ModelKind,
    best_model,
    distance_score,
    generate_dataset,
    houtman_maks_active,
    predict,
    score_datasets,
)
from .relations import BinaryRelation, RelationClass, count_relations, enumerate_relations

__all__ = [
    "ALL_MODELS",
    "BinaryRelation",
    "ChoiceDataError",
    "Dataset",
    "Menu",
    "MenuCollection",
    "ModelInstance",
    "ModelKind",
    "Observation",
    "RelationClass",
    "best_model",
    "count_relations",
    "distance_score",
    "enumerate_relations",
    "generate_dataset",
    "generate_menu_collection",
    "houtman_maks_active",
    "parse_csv",
    "predict",
    "score_datasets",
    "write_csv",
]
