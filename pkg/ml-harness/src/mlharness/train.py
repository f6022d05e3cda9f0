"""Training loop: cross-entropy plus an optional sensitivity-reward term.

The extra loss term rewards sensitivity of the learned predictor: per batch,
one uniformly random bit of each example is flipped and the soft
prediction-disagreement rate d is added to the loss as -lambda_sens * d
(scaling by n is folded into the coefficient; reported sensitivity estimates
are n * hard disagreement rate). Early stopping and best-epoch selection use
noisy validation accuracy only.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .data import DatasetSplits, load_dataset_dir
from .models import build_model
from .sensitivity import model_sensitivity

MAX_EPOCHS_CAP = 1000


@dataclass(frozen=True)
class TrainConfig:
    dataset_dir: str
    model: str = "attention"  # attention | recurrent
    depth: int = 2
    width: int = 64
    heads: int = 4
    lr: float = 1e-3
    lambda_sens: float = 0.0
    max_epochs: int = 200
    patience: int = 50
    seed: int = 0
    batch_size: int = 256
    sens_probes: int = 1024

    def __post_init__(self):
        if self.model not in ("attention", "recurrent"):
            raise ValueError(f"unknown model: {self.model!r}")
        if not 1 <= self.max_epochs <= MAX_EPOCHS_CAP:
            raise ValueError(f"max_epochs must be in [1, {MAX_EPOCHS_CAP}]")
        if not 1 <= self.patience <= self.max_epochs:
            raise ValueError("patience must be in [1, max_epochs]")
        if self.lambda_sens < 0:
            raise ValueError("lambda_sens must be >= 0")


@dataclass
class TrainReport:
    config: TrainConfig
    best_epoch: int
    noisy_val_acc: float
    noiseless_val_acc: float
    train_acc: float
    sens_estimate_trace: list[float]
    epochs_run: int
    diverged: bool
    trace: list[dict] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "config": self.config.__dict__,
            "best_epoch": self.best_epoch,
            "noisy_val_acc": self.noisy_val_acc,
            "noiseless_val_acc": self.noiseless_val_acc,
            "train_acc": self.train_acc,
            "sens_estimate_trace": self.sens_estimate_trace,
            "epochs_run": self.epochs_run,
            "diverged": self.diverged,
        }

    def save(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        with open(out / "trace.csv", "w", newline="") as fh:
            writer = csv.DictWriter(
                fh,
                fieldnames=[
                    "epoch",
                    "loss",
                    "train_acc",
                    "noisy_val_acc",
                    "noiseless_val_acc",
                    "sens_estimate",
                ],
            )
            writer.writeheader()
            writer.writerows(self.trace)


def _accuracy(model: nn.Module, features: torch.Tensor, labels: torch.Tensor) -> float:
    with torch.no_grad():
        preds = (model(features) > 0).to(labels.dtype)
    return float((preds == labels).float().mean())


def _torch_predictor(model: nn.Module):
    def predict(rows: np.ndarray) -> np.ndarray:
        with torch.no_grad():
            logits = model(torch.from_numpy(rows.astype(np.int64)))
        return (logits > 0).numpy().astype(np.uint8)

    return predict


def best_epoch_index(noisy_val_accs: list[float]) -> int:
    """First epoch attaining the maximum noisy validation accuracy."""
    return int(np.argmax(noisy_val_accs))


def train(config: TrainConfig, data: DatasetSplits | None = None) -> TrainReport:
    if data is None:
        data = load_dataset_dir(config.dataset_dir)
    torch.manual_seed(config.seed)
    n = data.n_inputs

    x_train = torch.from_numpy(data.train_noisy.features.astype(np.int64))
    y_train = torch.from_numpy(data.train_noisy.labels.astype(np.float32))
    x_val_noisy = torch.from_numpy(data.val_noisy.features.astype(np.int64))
    y_val = torch.from_numpy(data.val_noisy.labels.astype(np.float32))
    x_val_clean = torch.from_numpy(data.val_noiseless.features.astype(np.int64))
    y_val_clean = torch.from_numpy(data.val_noiseless.labels.astype(np.float32))

    model = build_model(config.model, n, config.depth, config.width, config.heads)
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    bce = nn.BCEWithLogitsLoss()
    shuffle_gen = torch.Generator().manual_seed(config.seed)
    probe_rng = np.random.default_rng(config.seed)

    trace: list[dict] = []
    noisy_accs: list[float] = []
    stats: list[tuple[float, float, float]] = []  # (train, noisy val, clean val)
    sens_trace: list[float] = []
    best_acc = -1.0
    stale = 0
    diverged = False

    for epoch in range(config.max_epochs):
        model.train()
        order = torch.randperm(len(x_train), generator=shuffle_gen)
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            idx = order[start : start + config.batch_size]
            xb, yb = x_train[idx], y_train[idx]
            logits = model(xb)
            loss = bce(logits, yb)
            if config.lambda_sens > 0:
                flipped = xb.clone()
                which = torch.randint(0, n, (len(xb),), generator=shuffle_gen)
                rows = torch.arange(len(xb))
                flipped[rows, which] ^= 1
                p = torch.sigmoid(logits)
                q = torch.sigmoid(model(flipped))
                soft_disagree = (p * (1 - q) + (1 - p) * q).mean()
                loss = loss - config.lambda_sens * soft_disagree
            opt.zero_grad()
            loss.backward()
            opt.step()
            epoch_loss += float(loss.detach()) * len(xb)
        epoch_loss /= len(x_train)
        if not np.isfinite(epoch_loss):
            diverged = True
            break

        model.eval()
        train_acc = _accuracy(model, x_train, y_train)
        noisy_acc = _accuracy(model, x_val_noisy, y_val)
        clean_acc = _accuracy(model, x_val_clean, y_val_clean)
        sens_est = model_sensitivity(_torch_predictor(model), n, config.sens_probes, probe_rng)
        noisy_accs.append(noisy_acc)
        stats.append((train_acc, noisy_acc, clean_acc))
        sens_trace.append(sens_est)
        trace.append(
            {
                "epoch": epoch,
                "loss": epoch_loss,
                "train_acc": train_acc,
                "noisy_val_acc": noisy_acc,
                "noiseless_val_acc": clean_acc,
                "sens_estimate": sens_est,
            }
        )

        if noisy_acc > best_acc:
            best_acc = noisy_acc
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break

    if not noisy_accs:
        raise RuntimeError("training diverged before completing one epoch")
    best = best_epoch_index(noisy_accs)
    return TrainReport(
        config=config,
        best_epoch=best,
        noisy_val_acc=stats[best][1],
        noiseless_val_acc=stats[best][2],
        train_acc=stats[best][0],
        sens_estimate_trace=sens_trace,
        epochs_run=len(noisy_accs),
        diverged=diverged,
        trace=trace,
    )
