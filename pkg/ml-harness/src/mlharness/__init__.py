"""Desk-scale neural experiments on noisy boolean datasets."""

from .data import DatasetSplits, load_dataset_dir
from .sensitivity import model_sensitivity
from .train import TrainConfig, TrainReport, train

__all__ = [
    "DatasetSplits",
    "load_dataset_dir",
    "model_sensitivity",
    "TrainConfig",
    "TrainReport",
    "train",
]

__version__ = "0.1.0"
