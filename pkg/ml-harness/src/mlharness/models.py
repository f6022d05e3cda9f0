"""Tiny sequence classifiers over per-bit tokens.

Inputs are length-n sequences of 0/1 tokens; both models emit a single logit
for the label bit.
"""

from __future__ import annotations

import torch
from torch import nn


class AttentionClassifier(nn.Module):
    def __init__(self, n_inputs: int, depth: int = 2, width: int = 64, heads: int = 4):
        super().__init__()
        self.n_inputs = n_inputs
        self.token_emb = nn.Embedding(2, width)
        self.pos_emb = nn.Embedding(n_inputs, width)
        layer = nn.TransformerEncoderLayer(
            d_model=width,
            nhead=heads,
            dim_feedforward=2 * width,
            dropout=0.0,
            batch_first=True,
            norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=depth, enable_nested_tensor=False)
        self.head = nn.Linear(width, 1)

    def forward(self, bits: torch.Tensor) -> torch.Tensor:
        pos = torch.arange(self.n_inputs, device=bits.device)
        h = self.token_emb(bits) + self.pos_emb(pos)[None, :, :]
        h = self.encoder(h)
        return self.head(h.mean(dim=1)).squeeze(-1)


class RecurrentClassifier(nn.Module):
    def __init__(self, n_inputs: int, depth: int = 2, width: int = 64):
        super().__init__()
        self.n_inputs = n_inputs
        self.token_emb = nn.Embedding(2, width)
        self.rnn = nn.LSTM(width, width, num_layers=depth, batch_first=True)
        self.head = nn.Linear(width, 1)

    def forward(self, bits: torch.Tensor) -> torch.Tensor:
        h, _ = self.rnn(self.token_emb(bits))
        return self.head(h[:, -1, :]).squeeze(-1)


def build_model(kind: str, n_inputs: int, depth: int, width: int, heads: int) -> nn.Module:
    if kind == "attention":
        return AttentionClassifier(n_inputs, depth, width, heads)
    if kind == "recurrent":
        return RecurrentClassifier(n_inputs, depth, width)
    raise ValueError(f"unknown model kind: {kind!r}")
