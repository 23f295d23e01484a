"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 data invariant violation,
4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import secrets
import sys
import warnings
from dataclasses import asdict

from . import simulate as sim
from .coefficients import coefficient_set, scale_footrule, tau_bounds
from .core import CsvFormatError, read_csv, write_csv
from .errors import BadAlpha, BadRange, DuplicateValue, FootruleError
from .inference import MIN_RELIABLE_N, decide, pvalue_bounds
from .oracle import CASES, run_oracle_check
from .upper import bounds

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_ORACLE = 4


class UsageError(Exception):
    pass


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {value}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_record(record: dict, fmt: str, path) -> None:
    with _output(path) as fh:
        if fmt == "json":
            json.dump(record, fh, indent=2)
            fh.write("\n")
        else:
            writer = csv.DictWriter(fh, fieldnames=list(record), lineterminator="\n")
            writer.writeheader()
            writer.writerow(record)


def _load(path):
    try:
        return read_csv(sys.stdin if path == "-" else path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def cmd_bounds(args) -> int:
    sample = _load(args.input)
    fb = bounds(sample)
    n = sample.n
    m1, m2, m3 = sample.pattern.sizes
    tb = tau_bounds(fb, n)
    record = {
        "n": n,
        "m1": m1,
        "m2": m2,
        "m3": m3,
        "d_min": fb.d_min,
        "d_max": fb.d_max,
        "footrule_scaled_min": scale_footrule(fb.d_max, n) if n >= 2 else None,
        "footrule_scaled_max": scale_footrule(fb.d_min, n) if n >= 2 else None,
        "tau_min": tb.tau_min,
        "tau_max": tb.tau_max,
    }
    _emit_record(record, args.format, args.output)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    sample = _load(args.input)
    if sample.pattern.case != "complete":
        raise FootruleError("coeffs needs a fully observed file; use 'bounds' for missing data")
    cs = coefficient_set(sample.x_ranks, sample.y_ranks)
    _emit_record({"n": sample.n, **asdict(cs)}, args.format, args.output)
    return EXIT_OK


def cmd_test(args) -> int:
    sample = _load(args.input)
    n = sample.n
    if n < MIN_RELIABLE_N:
        print(
            f"warning: n={n} is below {MIN_RELIABLE_N}; the normal approximation may be poor",
            file=sys.stderr,
        )
    fb = bounds(sample)
    pb = pvalue_bounds(fb, n, warn=False)
    result = decide(pb, args.alpha, reject_on_equal=args.reject_on_equal)
    record = {
        "n": n,
        "d_min": fb.d_min,
        "d_max": fb.d_max,
        "p_min": pb.p_min,
        "p_max": pb.p_max,
        "p_at_dmin": pb.p_at_dmin,
        "p_at_dmax": pb.p_at_dmax,
        "alpha": args.alpha,
        "outcome": result.outcome.value,
    }
    _emit_record(record, args.format, args.output)
    return EXIT_OK


_SIM_KEYS = {"n", "gamma", "s", "mechanism", "alpha", "trials", "seed", "methods"}


def _sim_settings(args) -> dict:
    settings: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                raw = sim.parse_config_text(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {args.config}: {exc.strerror or exc}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        unknown = set(raw) - _SIM_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        try:
            for key in ("n", "trials", "seed"):
                if key in raw:
                    settings[key] = int(raw[key])
            for key in ("gamma", "s"):
                if key in raw:
                    settings[key] = _float_list(raw[key])
            if "alpha" in raw:
                settings["alpha"] = _alpha(raw["alpha"])
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"bad config value: {exc}") from None
        if "mechanism" in raw:
            settings["mechanism"] = raw["mechanism"]
        if "methods" in raw:
            settings["methods"] = raw["methods"]
    # flags override the file
    for key in _SIM_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def cmd_simulate(args) -> int:
    st = _sim_settings(args)
    seed = st.get("seed")
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
    methods = st.get("methods", "all")
    if isinstance(methods, str):
        methods = sim.ALL_METHODS if methods == "all" else tuple(
            m.strip() for m in methods.split(",") if m.strip()
        )
    s_values = st.get("s", [0.1])
    gamma_values = st.get("gamma", [0.0])
    try:
        base = sim.SimConfig(
            n=st.get("n", 200),
            gamma=gamma_values[0],
            s=s_values[0],
            mechanism=st.get("mechanism", "mcar"),
            alpha=st.get("alpha", 0.05),
            trials=st.get("trials", 1000),
            seed=seed,
            methods=methods,
            reject_on_equal=args.reject_on_equal,
        )
        summaries = sim.run_sweep(base, s_values, gamma_values, workers=args.threads)
    except (BadRange, BadAlpha) as exc:
        raise UsageError(str(exc)) from None
    rows = sim.summary_rows(summaries)
    with _output(args.output) as fh:
        if args.format == "json":
            sim.write_rows_json(rows, fh)
        else:
            sim.write_rows_csv(rows, fh)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    cases = CASES if args.cases == "all" else tuple(c.strip() for c in args.cases.split(","))
    bad = [c for c in cases if c not in CASES]
    if bad:
        raise UsageError(f"unknown cases {bad}; choose from {CASES} or 'all'")
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= --n-min <= --n-max")
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    if args.seed is None:
        print(f"seed: {seed}", file=sys.stderr)
    report = run_oracle_check(args.trials, args.n_min, args.n_max, cases, seed)
    counts = ", ".join(f"{c}={k}" for c, k in report.per_case.items())
    if report.passed:
        print(f"PASS {report.trials} instances ({counts})")
        return EXIT_OK
    print(f"FAIL at instance {report.trials}: expected {report.expected}, got {report.got}")
    write_csv(report.counterexample, sys.stdout)
    return EXIT_ORACLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="footrule-bounds",
        description="Spearman footrule bounds and independence tests for paired data with missing values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p, with_input=True):
        if with_input:
            p.add_argument("input", help="CSV with header x,y; empty cell = missing ('-' for stdin)")
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("bounds", help="footrule and Kendall bounds over all imputations")
    io_args(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("coeffs", help="footrule, rho and tau of a fully observed file")
    io_args(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("test", help="independence test robust to any imputation")
    io_args(p)
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--reject-on-equal", action="store_true", help="also reject when p_max == alpha")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="Monte Carlo rejection rates")
    io_args(p, with_input=False)
    p.add_argument("--config", help="key=value file; flags take precedence")
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=_float_list, help="one value or a comma-separated sweep")
    p.add_argument("--s", type=_float_list, help="one value or a comma-separated sweep")
    p.add_argument("--mechanism", choices=sim.MECHANISMS)
    p.add_argument("--alpha", type=_alpha)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--methods", help="comma-separated method names or 'all'")
    p.add_argument("--threads", type=int, default=None, help="worker processes (0 = one per CPU)")
    p.add_argument("--reject-on-equal", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle-check", help="compare fast bounds with brute force on random data")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--cases", default="all", help="comma-separated subset of I,II,III,general")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DuplicateValue as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FootruleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
