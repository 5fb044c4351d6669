"""Batch CLI: `lab run <config.json>`, `lab check <config.json>`,
`lab list-catalog`.  Exit codes: 0 success, 1 hard-contract failure,
2 config or validation error."""

from __future__ import annotations

import argparse
import datetime
import json
import pathlib
import sys

from .experiments import (EXPERIMENTS, config_hash, rows_to_csv,
                          run_experiment, sidecar, validate_config)
from .groups import ValidationError


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc


def cmd_run(args):
    config = _load(args.config)
    validate_config(config)
    rows, hard_fail = run_experiment(config)
    outdir = pathlib.Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    csv_path = outdir / f"{config['id']}.csv"
    csv_path.write_text(rows_to_csv(rows, timestamp=stamp), encoding="utf-8")
    side = outdir / f"{config['id']}.json"
    side.write_text(json.dumps(sidecar(config, rows, hard_fail), indent=2,
                               sort_keys=True) + "\n", encoding="utf-8")
    n_fail = sum(1 for r in rows if r.verdict == "fail")
    print(f"{config['id']}: {len(rows)} rows, {n_fail} hard failures "
          f"-> {csv_path}")
    return 1 if hard_fail else 0


def cmd_check(args):
    config = _load(args.config)
    validate_config(config)
    print(f"{args.config}: valid ({config['experiment']}, "
          f"hash {config_hash(config)})")
    return 0


def cmd_list_catalog(_args):
    print("experiments: " + ", ".join(EXPERIMENTS))
    print("groups:      cyclic_sum(orders, depth, normalization, lazy), "
          "leptin_hulanicki(depth, lazy), shell(indices, tail_index)")
    print("young:       p_power(p), exp_minus, cosh, xlog")
    print("weights:     trivial, radial(values), sharpen(base), "
          "sharpen_p(base, p), wfq(fseq, q), example_nonsubadd")
    print("calculus:    gamma in (log2(4/3), 1), plateau(p, q, eps), tol")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lab",
        description="batch experiments for weighted Orlicz convolution "
                    "algebras on chains of finite groups")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.set_defaults(func=cmd_run)
    p_check = sub.add_parser("check", help="validate a config only")
    p_check.add_argument("config")
    p_check.set_defaults(func=cmd_check)
    p_cat = sub.add_parser("list-catalog", help="list catalog entries")
    p_cat.set_defaults(func=cmd_list_catalog)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
