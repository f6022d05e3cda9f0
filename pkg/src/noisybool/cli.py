"""Command-line entry point.

Single-object results are emitted as JSON (with an embedded provenance
block); sweeps and scans are emitted as CSV with provenance in leading
comment lines. Every randomized subcommand requires an explicit --seed.
Exit codes: 0 success, 1 domain error (JSON on stderr), 2 parse failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import shlex
import sys
from pathlib import Path

from . import __version__
from .datagen import DatasetConfig, empirical_error, generate, read_dataset_dir, write_dataset_dir
from .ensembles import JUNTA_SCAN_P_GRID, junta_scan, prop2_monte_carlo
from .fourier import fwht
from .functions import JuntaSpec, LTFSpec, expand_junta
from .literals import parse_literal_seeded
from .noise import NoiseModel, analyze, ltf_counterexample_check, feder_bounds, noisy_error, optimal_predictor, sensitivity
from .trapsearch import (
    DEFAULT_MAX_ERR_GAP,
    DEFAULT_MAX_SENS_RATIO,
    TrapCandidate,
    analyze_profiles,
    finite_sample_vetting,
    trap_search,
)


def _provenance(argv, seed=None) -> dict:
    return {
        "tool": "noisybool",
        "version": __version__,
        "command": "noisybool " + shlex.join(argv),
        "master_seed": seed,
    }


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(provenance: dict, header: list[str], rows, out: str | None) -> None:
    target = open(out, "w", newline="") if out else sys.stdout
    try:
        for key, value in provenance.items():
            target.write(f"# {key}: {value}\n")
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    finally:
        if out:
            target.close()


def _load_function(literal: str, seed=None):
    func = parse_literal_seeded(literal, seed)
    if isinstance(func, JuntaSpec):
        func = expand_junta(func)
    return func


def _parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _parse_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def _cmd_analyze(args, argv):
    f = _load_function(args.function, args.seed)
    p_values = _parse_floats(args.p)
    prov = _provenance(argv, args.seed)
    if len(p_values) == 1:
        report = analyze(f, NoiseModel.iid(p_values[0]))
        _emit_json({"provenance": prov, "function": args.function, "p": p_values[0], "report": report.to_dict()}, args.out)
        return
    header = ["function", "p", "err_f_f", "err_f_fnstar", "sens_f", "sens_fnstar", "cond_entropy_bits", "feder_lower", "feder_upper", "self_predicting"]
    rows = []
    for p in p_values:
        r = analyze(f, NoiseModel.iid(p))
        rows.append([args.function, p, r.err_f_f, r.err_f_fnstar, r.sens_f, r.sens_fnstar, r.cond_entropy_bits, r.feder_lower, r.feder_upper, int(r.self_predicting)])
    _emit_csv(prov, header, rows, args.out)


def _cmd_fnstar(args, argv):
    f = _load_function(args.function, args.seed)
    star = optimal_predictor(f, NoiseModel.iid(args.p))
    packed = sum(int(b) << x for x, b in enumerate(star.table))
    _emit_json(
        {
            "provenance": _provenance(argv, args.seed),
            "function": args.function,
            "p": args.p,
            "fnstar": {"n": star.n, "table_hex": hex(packed), "literal": f"tt:{star.n}:{hex(packed)}", "equals_f": star == f},
        },
        args.out,
    )


def _cmd_sens(args, argv):
    f = _load_function(args.function, args.seed)
    result = sensitivity(f)
    _emit_json(
        {
            "provenance": _provenance(argv, args.seed),
            "function": args.function,
            "total": result.total,
            "per_bit": [float(v) for v in result.per_bit],
        },
        args.out,
    )


def _cmd_err(args, argv):
    f = _load_function(args.function, args.seed)
    g = _load_function(args.g, args.seed)
    value = noisy_error(f, g, NoiseModel.iid(args.p))
    _emit_json({"provenance": _provenance(argv, args.seed), "function": args.function, "g": args.g, "p": args.p, "err": value}, args.out)


def _cmd_bounds(args, argv):
    lower, upper = feder_bounds(args.entropy, args.alphabet)
    _emit_json({"provenance": _provenance(argv), "entropy_bits": args.entropy, "alphabet": args.alphabet, "lower": lower, "upper": upper}, args.out)


def _cmd_prop2(args, argv):
    prov = _provenance(argv, args.seed)
    header = ["n", "p", "samples", "mean_sens_fnstar", "std_err", "theory", "mean_sens_f"]
    rows = []
    for p in _parse_floats(args.p):
        est = prop2_monte_carlo(args.n, p, args.samples, args.seed)
        rows.append([est.n, est.p, est.samples, est.mean_sens_fnstar, est.std_err, est.theory, est.mean_sens_f])
    _emit_csv(prov, header, rows, args.out)


def _cmd_junta_scan(args, argv):
    prov = _provenance(argv, args.seed)
    records = junta_scan(args.count, args.n_total, _parse_ints(args.k), _parse_floats(args.p_grid), args.seed)
    header = ["function_id", "k", "p", "sens_f", "sens_fnstar", "err_f_f", "err_f_fnstar"]
    rows = ([r.function_id, r.k, r.p, r.sens_f, r.sens_fnstar, r.err_f_f, r.err_f_fnstar] for r in records)
    _emit_csv(prov, header, rows, args.out)


_TRAP_HEADER = ["n", "p", "s", "err_f", "err_fnstar", "sens_f", "sens_fnstar", "err_gap", "sens_ratio"]


def _trap_row(c: TrapCandidate):
    return [c.n, c.p, c.s, c.err_f, c.err_fnstar, c.sens_f, c.sens_fnstar, c.err_gap, c.sens_ratio]


def _cmd_trap_search(args, argv):
    hits = trap_search(_parse_ints(args.n_grid), _parse_floats(args.p_grid), args.max_err_gap, args.max_sens_ratio)
    _emit_csv(_provenance(argv), _TRAP_HEADER, (_trap_row(c) for c in hits), args.out)


def _cmd_trap_vet(args, argv):
    n = len(args.s) - 1
    (candidate,) = analyze_profiles(n, args.p, [[int(ch) for ch in args.s]])
    train_acc, val_acc = finite_sample_vetting(candidate, args.n_train, args.n_val, args.seed)
    _emit_json(
        {
            "provenance": _provenance(argv, args.seed),
            "candidate": dataclasses.asdict(candidate),
            "lookup_train_acc": train_acc,
            "lookup_val_acc": val_acc,
        },
        args.out,
    )


def _cmd_gen_data(args, argv):
    config = DatasetConfig(
        function=args.function,
        n_bit=args.n_bit,
        p=args.p,
        n_train=args.n_train,
        n_val=args.n_val,
        master_seed=args.seed,
    )
    datasets = generate(config)
    sidecar = write_dataset_dir(args.out_dir, datasets, _provenance(argv, args.seed))
    _emit_json({"provenance": _provenance(argv, args.seed), "metadata": str(sidecar)}, None)


def _cmd_eval_data(args, argv):
    datasets = read_dataset_dir(args.dataset_dir)
    if args.which not in datasets:
        raise ValueError(f"unknown dataset part {args.which!r}; have {sorted(datasets)}")
    dataset = datasets[args.which]
    g = parse_literal_seeded(args.g, args.seed)
    value = empirical_error(dataset, g)
    _emit_json({"provenance": _provenance(argv, args.seed), "which": args.which, "g": args.g, "empirical_error": value}, args.out)


def _cmd_ltf_check(args, argv):
    values = _parse_floats(args.a)
    spec = LTFSpec(len(values) - 1, values[0], tuple(values[1:]))
    sens_f, sens_star, violates = ltf_counterexample_check(spec, args.rho)
    _emit_json(
        {"provenance": _provenance(argv), "a": values, "rho": args.rho, "sens_f": sens_f, "sens_fnstar": sens_star, "violates": violates},
        args.out,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisybool", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, seeded=False, out=True):
        p = sub.add_parser(name)
        p.set_defaults(func=func)
        if seeded == "required":
            p.add_argument("--seed", type=int, required=True)
        elif seeded:
            p.add_argument("--seed", type=int, default=None)
        if out:
            p.add_argument("--out", default=None)
        return p

    p = add("analyze", _cmd_analyze, seeded=True)
    p.add_argument("--function", required=True)
    p.add_argument("--p", required=True, help="bitflip rate, or comma list for CSV sweep mode")

    p = add("fnstar", _cmd_fnstar, seeded=True)
    p.add_argument("--function", required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("sens", _cmd_sens, seeded=True)
    p.add_argument("--function", required=True)

    p = add("err", _cmd_err, seeded=True)
    p.add_argument("--function", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("bounds", _cmd_bounds)
    p.add_argument("--entropy", type=float, required=True)
    p.add_argument("--alphabet", type=int, default=2)

    p = add("prop2", _cmd_prop2, seeded="required")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True, help="bitflip rate or comma list")
    p.add_argument("--samples", type=int, required=True)

    p = add("junta-scan", _cmd_junta_scan, seeded="required")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--n-total", type=int, default=10)
    p.add_argument("--k", default="5,6,7")
    p.add_argument("--p-grid", default=",".join(str(v) for v in JUNTA_SCAN_P_GRID))

    p = add("trap-search", _cmd_trap_search)
    p.add_argument("--n-grid", default="4,5,6,7,8")
    p.add_argument("--p-grid", default="0.2,0.22,0.24,0.26,0.28,0.30")
    p.add_argument("--max-err-gap", type=float, default=DEFAULT_MAX_ERR_GAP)
    p.add_argument("--max-sens-ratio", type=float, default=DEFAULT_MAX_SENS_RATIO)

    p = add("trap-vet", _cmd_trap_vet, seeded="required")
    p.add_argument("--s", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n-train", type=int, required=True)
    p.add_argument("--n-val", type=int, required=True)

    p = add("gen-data", _cmd_gen_data, seeded="required", out=False)
    p.add_argument("--function", required=True)
    p.add_argument("--n-bit", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n-train", type=int, required=True)
    p.add_argument("--n-val", type=int, required=True)
    p.add_argument("--out-dir", required=True)

    p = add("eval-data", _cmd_eval_data, seeded=True)
    p.add_argument("--dataset-dir", required=True)
    p.add_argument("--which", default="val_noisy")
    p.add_argument("--g", required=True)

    p = add("ltf-check", _cmd_ltf_check)
    p.add_argument("--a", required=True, help="comma list: a0 followed by the n weights")
    p.add_argument("--rho", type=float, required=True)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        args.func(args, argv)
    except (ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
