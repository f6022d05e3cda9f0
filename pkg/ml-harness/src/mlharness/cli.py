"""Command line entry point: train one model on a generated dataset directory."""

from __future__ import annotations

import argparse
import json
import sys

from .train import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlharness")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    tr = sub.add_parser("train", help="train a classifier on a dataset directory")
    tr.add_argument("--dataset-dir", required=True)
    tr.add_argument("--model", choices=["attention", "recurrent"], default="attention")
    tr.add_argument("--depth", type=int, default=2)
    tr.add_argument("--width", type=int, default=64)
    tr.add_argument("--heads", type=int, default=4)
    tr.add_argument("--lr", type=float, default=1e-3)
    tr.add_argument("--lambda-sens", type=float, default=0.0)
    tr.add_argument("--max-epochs", type=int, default=200)
    tr.add_argument("--patience", type=int, default=50)
    tr.add_argument("--seed", type=int, required=True)
    tr.add_argument("--batch-size", type=int, default=256)
    tr.add_argument("--out-dir", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = TrainConfig(
        dataset_dir=args.dataset_dir,
        model=args.model,
        depth=args.depth,
        width=args.width,
        heads=args.heads,
        lr=args.lr,
        lambda_sens=args.lambda_sens,
        max_epochs=args.max_epochs,
        patience=args.patience,
        seed=args.seed,
        batch_size=args.batch_size,
    )
    try:
        report = train(config)
    except (ValueError, OSError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    report.save(args.out_dir)
    summary = report.to_dict()
    summary.pop("sens_estimate_trace")
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
