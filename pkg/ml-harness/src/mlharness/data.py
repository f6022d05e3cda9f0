"""Loading of generated dataset directories (four CSVs plus a JSON sidecar).

The on-disk contract: ``{train,val}_{noiseless,noisy}.csv`` with header
``features,label`` where features are 0/1 strings (first character is input
bit 0), and ``metadata.json`` carrying the generation config and content
hashes. Nothing here imports the generator package; the files are the
interface.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SPLIT_FILES = (
    "train_noiseless.csv",
    "train_noisy.csv",
    "val_noiseless.csv",
    "val_noisy.csv",
)


@dataclass(frozen=True)
class Split:
    features: np.ndarray  # (rows, n) uint8
    labels: np.ndarray  # (rows,) uint8


@dataclass(frozen=True)
class DatasetSplits:
    train_noiseless: Split
    train_noisy: Split
    val_noiseless: Split
    val_noisy: Split
    metadata: dict

    @property
    def n_inputs(self) -> int:
        return self.train_noisy.features.shape[1]

    @property
    def p(self) -> float:
        return float(self.metadata["config"]["p"])


def _read_split(path: Path) -> Split:
    features = []
    labels = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["features", "label"]:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            features.append([int(c) for c in row["features"]])
            labels.append(int(row["label"]))
    if not features:
        raise ValueError(f"{path}: empty split")
    feat = np.array(features, dtype=np.uint8)
    lab = np.array(labels, dtype=np.uint8)
    if feat.max(initial=0) > 1 or lab.max(initial=0) > 1:
        raise ValueError(f"{path}: non-binary values")
    return Split(feat, lab)


def load_dataset_dir(path: str | Path) -> DatasetSplits:
    path = Path(path)
    meta = json.loads((path / "metadata.json").read_text())
    splits = [_read_split(path / name) for name in SPLIT_FILES]
    widths = {s.features.shape[1] for s in splits}
    if len(widths) != 1:
        raise ValueError(f"{path}: inconsistent feature widths {widths}")
    return DatasetSplits(*splits, metadata=meta)
