"""Command-line front-end.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import suites
from .bounds import certified_constants, lipschitz_report, sweep_bm
from .components import expected_components
from .distributions import load_distribution
from .errors import CertificationFailed
from .graphsim import expected_components_exhaustive, mc_expected_components
from .interval import DEFAULT_ERFC_ULPS, maximize_f

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class _VerificationFailed(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", choices=("json", "csv"), default="json")
        return p

    p = common(sub.add_parser("expected-components", help="E[C] for a distribution"))
    p.add_argument("--dist", required=True, type=Path)
    p.add_argument("--method", choices=("exact", "mc", "exhaustive"), default="exact")
    p.add_argument("--trials", type=_positive, default=100_000)
    p.add_argument("--seed", type=_nonneg, default=0)

    p = common(sub.add_parser("simulate", help="Monte Carlo estimate of E[C]"))
    p.add_argument("--dist", required=True, type=Path)
    p.add_argument("--trials", type=_positive, default=100_000)
    p.add_argument("--seed", type=_nonneg, default=0)

    p = common(sub.add_parser("lipschitz-bounds", help="kappa_upper(n), kappa_lower(n)"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--erfc-ulps", type=_positive, default=DEFAULT_ERFC_ULPS)

    p = common(sub.add_parser("maximize-f", help="certify x0 and mu"))
    p.add_argument("--erfc-ulps", type=_positive, default=DEFAULT_ERFC_ULPS)

    p = common(sub.add_parser("sweep-bm", help="maximize B_m(s) over s"))
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--sidecar", type=Path, default=None,
                   help="with --output csv, write the JSON summary here")

    p = common(sub.add_parser("verify", help="run a verification suite"))
    p.add_argument("--suite", choices=suites.SUITES + ("all",), default="all")
    p.add_argument("--samples", type=_positive, default=1000)
    p.add_argument("--seed", type=_nonneg, default=0)
    return parser


def _flatten(record: dict) -> dict:
    flat = {}
    for key, value in record.items():
        if isinstance(value, list) and len(value) == 2 and all(isinstance(v, float) for v in value):
            flat[f"{key}_lo"], flat[f"{key}_hi"] = value
        elif isinstance(value, (dict, list)):
            flat[key] = json.dumps(value, sort_keys=True)
        else:
            flat[key] = value
    return flat


def _emit(records: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        payload = records[0] if len(records) == 1 else records
        out.write(json.dumps(payload) + "\n")
        return
    flat = [_flatten(r) for r in records]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    writer.writeheader()
    for row in flat:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    out.write(buf.getvalue())


def _cmd_expected(args) -> list[dict]:
    p = load_distribution(args.dist)
    if args.method == "exact":
        return [{"E_C": expected_components(p)}]
    if args.method == "exhaustive":
        return [{"E_C": expected_components_exhaustive(p)}]
    est = mc_expected_components(p, args.trials, args.seed)
    return [{"E_C": est.mean, "std_error": est.std_error, "trials": est.trials, "seed": est.seed}]


def _cmd_simulate(args) -> list[dict]:
    est = mc_expected_components(load_distribution(args.dist), args.trials, args.seed)
    return [{"mean": est.mean, "std_error": est.std_error, "trials": est.trials,
             "seed": est.seed}]


def _cmd_lipschitz(args) -> list[dict]:
    cert = maximize_f(erfc_ulps=args.erfc_ulps)
    return [lipschitz_report(args.n, cert.x0.enclosure, cert.mu).to_json_dict()]


def _cmd_maximize(args) -> list[dict]:
    return [maximize_f(erfc_ulps=args.erfc_ulps).to_json_dict()]


def _sweep_summary(sweep) -> dict:
    mu = certified_constants()[1].mid
    mu_sqrt_m = mu * math.sqrt(sweep.m)
    return {"m": sweep.m, "argmax": sweep.argmax_s, "max": sweep.max_value,
            "mu_sqrt_m": mu_sqrt_m, "upper": 3.0 + mu_sqrt_m}


def _run_sweep(args, out) -> None:
    sweep = sweep_bm(args.m, args.grid)
    summary = _sweep_summary(sweep)
    if args.output == "json":
        out.write(json.dumps(summary) + "\n")
        return
    lines = ["s,B_m"] + [f"{s!r},{v!r}" for s, v in sweep.grid]
    out.write("\n".join(lines) + "\n")
    if args.sidecar is not None:
        args.sidecar.write_text(json.dumps(summary) + "\n")


def _cmd_verify(args) -> list[dict]:
    results = suites.run(args.suite, args.samples, args.seed)
    if not all(r["passed"] for r in results):
        raise _VerificationFailed(results)
    return results


_COMMANDS = {
    "expected-components": _cmd_expected,
    "simulate": _cmd_simulate,
    "lipschitz-bounds": _cmd_lipschitz,
    "maximize-f": _cmd_maximize,
    "verify": _cmd_verify,
}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.command == "sweep-bm":
            _run_sweep(args, out)
        else:
            _emit(_COMMANDS[args.command](args), args.output, out)
    except _VerificationFailed as exc:
        _emit(exc.args[0], args.output, out)
        err.write("verification failed\n")
        return EXIT_VERIFY
    except CertificationFailed as exc:
        err.write(f"certification failed: {exc}\n")
        return EXIT_VERIFY
    except (ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
