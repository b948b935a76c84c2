"""Command line entry point: ``ffgrowth {run,verify,gen,field-info}``.

Exit status is 0 on success, 1 when a certificate fails, and 2 for usage,
configuration or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .field import FieldError, list_subfields, make_field
from .harness.config import EXPERIMENTS, ConfigError, ExperimentConfig
from .harness.experiments import default_verify_configs, run_experiment, verify_suite
from .harness.families import FAMILIES, FamilyError, generate_set
from .harness.output import fits_to_csv, to_csv, to_json
from .matgrp import PreconditionError
from .setalg import BudgetError

EXIT_OK, EXIT_CERT, EXIT_USAGE = 0, 1, 2
_USER_ERRORS = (ConfigError, FamilyError, FieldError, PreconditionError, BudgetError)


def _emit(text: str, out: str | None, name: str):
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _load(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args)
    results, fits = run_experiment(cfg)
    if args.format == "json":
        _emit(to_json(cfg, results, fits), args.out, f"{cfg.experiment}.json")
    else:
        _emit(to_csv(results, cfg.experiment), args.out, f"{cfg.experiment}.csv")
        if args.out:
            _emit(fits_to_csv(fits), args.out, f"{cfg.experiment}_fits.csv")
    failed = [r for r in results if r.failed_certificates()]
    for r in failed:
        print(f"certificate failure: {r.failed_certificates()} family={r.family} size={r.size} "
              f"trial={r.trial} sets={r.sets_repr()}", file=sys.stderr)
    return EXIT_CERT if failed else EXIT_OK


def cmd_verify(args) -> int:
    if args.config:
        cfgs = [_load(args)]
    else:
        cfgs = default_verify_configs(args.seed if args.seed is not None else 1)
    summary = verify_suite(cfgs)
    print(f"checks: {summary.checks}  failures: {len(summary.failures)}")
    for f in summary.failures:
        print("FAIL " + json.dumps(f, sort_keys=True))
    return EXIT_OK if summary.ok else EXIT_CERT


def cmd_gen(args) -> int:
    ctx = make_field(args.p, args.n)
    S = generate_set(args.family, args.size, args.seed, ctx, not args.allow_zero)
    print(" ".join(str(a) for a in S))
    return EXIT_OK


def cmd_field_info(args) -> int:
    ctx = make_field(args.p, args.n)
    print(f"q = {ctx.q}")
    if ctx.n > 1:
        print("modulus (constant term first): " + " ".join(map(str, ctx.modulus)))
    print(f"primitive element: {ctx.primitive_element}")
    for sub in list_subfields(ctx):
        print(f"subfield degree {sub.degree}: {sub.size} elements")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffgrowth", description="Exact growth experiments over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--out", help="output directory (default: rows to stdout)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="run the certificate suite")
    ver.add_argument("--config", help="verify one config instead of the built-in suite")
    ver.add_argument("--seed", type=int)
    ver.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="print one generated set")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--size", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("-p", type=int, required=True)
    gen.add_argument("-n", type=int, default=1)
    gen.add_argument("--allow-zero", action="store_true")
    gen.set_defaults(func=cmd_gen)

    fi = sub.add_parser("field-info", help="modulus, primitive element and subfields of F_{p^n}")
    fi.add_argument("-p", type=int, required=True)
    fi.add_argument("-n", type=int, default=1)
    fi.set_defaults(func=cmd_field_info)

    ap.epilog = "experiments: " + ", ".join(EXPERIMENTS)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except _USER_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
