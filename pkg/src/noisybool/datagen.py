"""Reproducible noisy/noiseless dataset generation and serialization.

Generation follows a two-step recipe: sample all underlying bitstrings X
uniformly and label them with f, then flip each feature bit independently
with probability p to produce the noisy variant. Labels are never noised.
Row i's features and flip mask come from independent substreams, so
changing p never changes the underlying X sequence.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .functions import BooleanFunction, JuntaSpec
from .literals import arity_of, parse_literal_seeded
from .rng import substream

FORMAT_VERSION = 1

# substream keys: (0, i) features of row i, (1, i) flip mask of row i
# (key 2 is reserved by literals.py for the function subset choice)
_XKEY, _EKEY = 0, 1


@dataclass(frozen=True)
class DatasetConfig:
    """Everything needed to regenerate a dataset bit-for-bit."""

    function: str  # function literal, see literals.py
    n_bit: int  # record width including the label bit
    p: float
    n_train: int
    n_val: int
    master_seed: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"bitflip rate must be in [0, 0.5], got {self.p}")
        if self.n_train < 0 or self.n_val < 0 or self.n_train + self.n_val < 1:
            raise ValueError("need at least one row")
        if self.n_bit < 2:
            raise ValueError("n_bit must be at least 2 (one feature plus label)")

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "n_bit": self.n_bit,
            "p": self.p,
            "n_train": self.n_train,
            "n_val": self.n_val,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class Dataset:
    """Feature rows plus labels for one (split, variant) pair."""

    features: np.ndarray = field(repr=False)  # (rows, n_bit - 1) uint8
    labels: np.ndarray = field(repr=False)  # (rows,) uint8
    variant: str  # noiseless | noisy
    split: str  # train | val
    config: DatasetConfig

    def __len__(self) -> int:
        return self.features.shape[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("features,label\n")
        for row, label in zip(self.features, self.labels):
            buf.write("".join("1" if b else "0" for b in row))
            buf.write(f",{label}\n")
        return buf.getvalue()


def resolve_function(config: DatasetConfig):
    """Parse the config's function literal; seeded choices use the config
    seed so the function is part of the reproducible output."""
    func = parse_literal_seeded(config.function, config.master_seed)
    if arity_of(func) != config.n_bit - 1:
        raise ValueError(
            f"function arity {arity_of(func)} does not match n_bit - 1 = {config.n_bit - 1}"
        )
    return func


def evaluate_rows(func, features: np.ndarray) -> np.ndarray:
    """Evaluate a parsed function on each feature row (coordinate 0 first)."""
    features = np.asarray(features, dtype=np.uint8)
    if isinstance(func, JuntaSpec):
        inner_bits = features[:, list(func.subset)]
        powers = np.uint32(1) << np.arange(func.inner.n, dtype=np.uint32)
        return func.inner.table[(inner_bits.astype(np.uint32) * powers).sum(axis=1)]
    if isinstance(func, BooleanFunction):
        if features.shape[1] != func.n:
            raise ValueError("feature width does not match function arity")
        powers = np.uint32(1) << np.arange(func.n, dtype=np.uint32)
        return func.table[(features.astype(np.uint32) * powers).sum(axis=1)]
    raise TypeError(f"cannot evaluate {type(func).__name__}")


def generate(config: DatasetConfig) -> tuple[Dataset, Dataset, Dataset, Dataset]:
    """Returns (train_noiseless, train_noisy, val_noiseless, val_noisy)."""
    func = resolve_function(config)
    width = config.n_bit - 1
    total = config.n_train + config.n_val
    x = np.empty((total, width), dtype=np.uint8)
    flips = np.empty((total, width), dtype=np.uint8)
    for i in range(total):
        x[i] = substream(config.master_seed, _XKEY, i).integers(0, 2, size=width, dtype=np.uint8)
        flips[i] = substream(config.master_seed, _EKEY, i).random(width) < config.p
    labels = evaluate_rows(func, x).astype(np.uint8)
    z = x ^ flips

    def cut(arr, split):
        return arr[: config.n_train] if split == "train" else arr[config.n_train :]

    return tuple(
        Dataset(cut(feat, split), cut(labels, split), variant, split, config)
        for split, variant, feat in (
            ("train", "noiseless", x),
            ("train", "noisy", z),
            ("val", "noiseless", x),
            ("val", "noisy", z),
        )
    )


def empirical_error(dataset: Dataset, g) -> float:
    """Fraction of rows where g(features) differs from the stored label."""
    predictions = evaluate_rows(g, dataset.features)
    return float(np.mean(predictions != dataset.labels))


class LookupTable:
    """Majority-vote memorization of training rows.

    Seen feature strings map to their majority label (ties -> 0); unseen
    strings fall back to the global majority label (ties -> 0).
    """

    def __init__(self, train: Dataset):
        counts: dict[bytes, list[int]] = {}
        for row, label in zip(train.features, train.labels):
            c = counts.setdefault(row.tobytes(), [0, 0])
            c[int(label)] += 1
        self.table = {key: (1 if c[1] > c[0] else 0) for key, c in counts.items()}
        ones = int(train.labels.sum())
        self.default = 1 if 2 * ones > len(train) else 0

    def predict_rows(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.uint8)
        return np.array(
            [self.table.get(row.tobytes(), self.default) for row in features], dtype=np.uint8
        )

    def accuracy(self, dataset: Dataset) -> float:
        return float(np.mean(self.predict_rows(dataset.features) == dataset.labels))


def lookup_table_baseline(train: Dataset) -> LookupTable:
    return LookupTable(train)


_FILENAMES = {
    ("train", "noiseless"): "train_noiseless.csv",
    ("train", "noisy"): "train_noisy.csv",
    ("val", "noiseless"): "val_noiseless.csv",
    ("val", "noisy"): "val_noisy.csv",
}


def write_dataset_dir(out_dir, datasets, provenance: dict | None = None) -> Path:
    """Write the four CSVs plus a metadata.json sidecar; returns the sidecar
    path. Content hashes make reruns verifiable byte-for-byte."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    hashes = {}
    config = datasets[0].config
    for ds in datasets:
        name = _FILENAMES[(ds.split, ds.variant)]
        content = ds.to_csv().encode()
        (out_dir / name).write_bytes(content)
        hashes[name] = hashlib.sha256(content).hexdigest()
    meta = {
        "format_version": FORMAT_VERSION,
        "config": config.to_dict(),
        "resolved_function": describe_function(resolve_function(config)),
        "content_hashes": hashes,
    }
    if provenance:
        meta["provenance"] = provenance
    path = out_dir / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def describe_function(func) -> dict:
    if isinstance(func, JuntaSpec):
        return {"kind": "junta", "n_total": func.n_total, "subset": list(func.subset), "inner_arity": func.inner.n}
    return {"kind": "table", "n": func.n}


def read_dataset_dir(in_dir) -> dict:
    """Load a generated dataset directory back into Dataset objects keyed by
    '<split>_<variant>'."""
    in_dir = Path(in_dir)
    meta = json.loads((in_dir / "metadata.json").read_text())
    config = DatasetConfig(**meta["config"])
    out = {}
    for (split, variant), name in _FILENAMES.items():
        lines = (in_dir / name).read_text().splitlines()
        if lines[0] != "features,label":
            raise ValueError(f"{name}: unexpected header {lines[0]!r}")
        rows = [line.split(",") for line in lines[1:]]
        features = np.array(
            [[1 if ch == "1" else 0 for ch in feat] for feat, _ in rows], dtype=np.uint8
        )
        labels = np.array([int(label) for _, label in rows], dtype=np.uint8)
        out[f"{split}_{variant}"] = Dataset(features, labels, variant, split, config)
    return out
