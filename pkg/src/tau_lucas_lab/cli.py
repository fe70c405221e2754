"""Command-line front end.

Usage:
    tau-lucas-lab tau table --bound 10000
    tau-lucas-lab tau value 2
    tau-lucas-lab lucas pair -p 2 -k 12 --ap -24
    tau-lucas-lab lucas primitive -p 2 -n 35
    tau-lucas-lab omega-bound -p 2 -k 12 --ap -24 -n 210
    tau-lucas-lab verify valuations --pmax 50 --nmax 100
    tau-lucas-lab satotate --bound 10000 --bins 20 --format json
    tau-lucas-lab theorem-tau -p 2 -r 7 --certificate cert.json
    tau-lucas-lab suite --output-dir reports/

Exit codes: 0 pass, 1 fail, 2 usage or input error, 3 budget-exhausted unknown.

Settings resolve as flags > environment (``TLL_CACHE_DIR``, ``TLL_TABLE_BOUND``)
> config file (``key = value`` lines, ``tau-lucas-lab.toml`` in the working
directory unless ``--config`` names another) > built-in defaults.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .arith import FactorBudget, factorize
from .errors import TauLabError
from .experiments import (
    FAIL,
    PASS,
    UNKNOWN,
    Report,
    SuiteConfig,
    norm_lemma_experiment,
    radical_growth_report,
    run_suite,
    sato_tate_report,
    theorem_tau_experiment,
    valuation_sweep,
)
from .lucas import (
    BHV_THRESHOLD,
    LucasPair,
    Status,
    certified_omega_lower_bound,
    lucas_u,
    normalize_pair,
    primitive_part,
)
from .tau import DEFAULT_MAX_BOUND, TauTable, build_tau_table, load_table, store_table, tau

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
CONFIG_FILENAME = "tau-lucas-lab.toml"
_STATUS_EXIT = {PASS: EXIT_OK, FAIL: EXIT_FAIL, UNKNOWN: EXIT_UNKNOWN}


@dataclass(frozen=True)
class CliConfig:
    cache_dir: Path = Path.home() / ".cache" / "tau-lucas-lab"
    table_bound: int = 10_000
    factor_budget: FactorBudget = FactorBudget()
    output_format: str = "csv"
    precision_bits: int = 128

    def __post_init__(self) -> None:
        if self.table_bound < 10:
            raise ValueError("table_bound must be >= 10")
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


def read_config_file(path: Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` comments, blank lines and ``[section]`` headers are skipped."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        values[key.strip()] = value.strip().strip("\"'")
    return values


def resolve_config(args: argparse.Namespace, environ: dict[str, str] | None = None) -> CliConfig:
    environ = os.environ if environ is None else environ
    settings: dict[str, str] = {}
    config_path = Path(args.config) if args.config else Path(CONFIG_FILENAME)
    if args.config or config_path.is_file():
        settings.update(read_config_file(config_path))
    for env_key, key in (("TLL_CACHE_DIR", "cache_dir"), ("TLL_TABLE_BOUND", "table_bound")):
        if environ.get(env_key):
            settings[key] = environ[env_key]
    flags = {
        "cache_dir": args.cache_dir,
        "table_bound": args.table_bound,
        "output_format": args.format,
        "precision_bits": args.precision_bits,
        "trial_division_bound": args.trial_bound,
        "rho_iteration_cap": args.rho_cap,
        "wall_clock_cap_ms": args.time_cap_ms,
    }
    settings.update({k: str(v) for k, v in flags.items() if v is not None})

    base = CliConfig()
    budget = base.factor_budget
    budget = FactorBudget(
        int(settings.get("trial_division_bound", budget.trial_division_bound)),
        int(settings.get("rho_iteration_cap", budget.rho_iteration_cap)),
        int(settings.get("wall_clock_cap_ms", budget.wall_clock_cap_ms)),
    )
    return CliConfig(
        cache_dir=Path(settings.get("cache_dir", base.cache_dir)),
        table_bound=int(settings.get("table_bound", base.table_bound)),
        factor_budget=budget,
        output_format=settings.get("output_format", base.output_format),
        precision_bits=int(settings.get("precision_bits", base.precision_bits)),
    )


def cached_table(config: CliConfig, bound: int | None = None) -> tuple[TauTable, Path, bool]:
    """Load ``tau_table_<bound>.txt`` from the cache, building and storing it if absent.

    Returns ``(table, path, reused)``.
    """
    bound = config.table_bound if bound is None else bound
    path = config.cache_dir / f"tau_table_{bound}.txt"
    if path.is_file():
        try:
            return load_table(path), path, True
        except TauLabError as exc:
            log.warning("discarding unreadable cache %s: %s", path, exc)
    table = build_tau_table(bound)
    config.cache_dir.mkdir(parents=True, exist_ok=True)
    store_table(table, path)
    return table, path, False


def _pair_from_args(args: argparse.Namespace, config: CliConfig) -> LucasPair:
    a_p = args.ap
    if a_p is None:
        if args.k != 12:
            raise argparse.ArgumentTypeError("--ap is required when -k is not 12")
        table, _, _ = cached_table(config, max(config.table_bound, args.p))
        a_p = table[args.p]
    return normalize_pair(args.p, args.k, a_p)


def _emit(text: str, args: argparse.Namespace) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _emit_report(report: Report, args: argparse.Namespace, config: CliConfig) -> int:
    _emit(report.render(config.output_format), args)
    return _STATUS_EXIT[report.status]


def _emit_lines(pairs: Sequence[tuple[str, object]], args: argparse.Namespace) -> None:
    _emit("".join(f"{k}={v}\n" for k, v in pairs), args)


# --- subcommand handlers ---------------------------------------------------------


def cmd_tau_table(args, config):
    table, path, reused = cached_table(config, args.bound)
    _emit_lines([("bound", table.bound), ("path", path), ("reused", str(reused).lower())], args)
    return EXIT_OK


def cmd_tau_value(args, config):
    if args.n < 1:
        raise argparse.ArgumentTypeError("n must be positive")
    largest = max((p for p, _ in factorize(args.n).factors), default=1)
    bound = max(config.table_bound, largest)
    if bound > DEFAULT_MAX_BOUND:
        raise argparse.ArgumentTypeError(f"{args.n} has a prime factor above {DEFAULT_MAX_BOUND}")
    table, _, _ = cached_table(config, bound)
    _emit(f"{tau(args.n, table)}\n", args)
    return EXIT_OK


def cmd_lucas_pair(args, config):
    pair = _pair_from_args(args, config)
    _emit_lines(
        [("p", pair.p), ("k", pair.k), ("ap", pair.a_p), ("nu", pair.nu), ("P", pair.P),
         ("Q", pair.Q), ("root_of_unity", str(pair.root_of_unity).lower())],
        args,
    )
    return EXIT_OK


def cmd_lucas_u(args, config):
    _emit(f"{lucas_u(_pair_from_args(args, config), args.n)}\n", args)
    return EXIT_OK


def cmd_lucas_primitive(args, config):
    rec = primitive_part(_pair_from_args(args, config), args.n, config.factor_budget)
    _emit_lines(
        [("index", rec.index), ("primitive_part", rec.primitive_part),
         ("witness_prime", "" if rec.witness_prime is None else rec.witness_prime),
         ("status", rec.status.value)],
        args,
    )
    return EXIT_UNKNOWN if rec.status is Status.UNKNOWN else EXIT_OK


def _omega_exit(cert) -> int:
    if cert.certified >= cert.a_priori:
        return EXIT_OK
    return EXIT_UNKNOWN if cert.unknown else EXIT_FAIL


def cmd_omega_bound(args, config):
    pair = _pair_from_args(args, config)
    cert = certified_omega_lower_bound(pair, args.n, args.threshold, config.factor_budget)
    if args.certificate:
        Path(args.certificate).write_text(cert.to_json() + "\n", encoding="utf-8")
    _emit_lines(
        [("n", args.n), ("threshold", args.threshold), ("a_priori", cert.a_priori),
         ("certified", cert.certified), ("unknown", cert.unknown)],
        args,
    )
    return _omega_exit(cert)


def cmd_verify_valuations(args, config):
    table, _, _ = cached_table(config, max(config.table_bound, args.pmax))
    return _emit_report(valuation_sweep(table, args.pmax, args.nmax), args, config)


def cmd_verify_norm_lemma(args, config):
    pair = _pair_from_args(args, config)
    points = [int(x) for x in args.points.split(",") if x.strip()]
    report = norm_lemma_experiment(pair, points, config.precision_bits)
    return _emit_report(report, args, config)


def cmd_satotate(args, config):
    table, _, _ = cached_table(config, args.bound or config.table_bound)
    return _emit_report(sato_tate_report(table, args.bins), args, config)


def cmd_radical_report(args, config):
    pair = _pair_from_args(args, config)
    report = radical_growth_report(
        pair, args.nmax, Fraction(args.epsilon), Fraction(args.c), config.factor_budget
    )
    return _emit_report(report, args, config)


def cmd_theorem_tau(args, config):
    pair = _pair_from_args(args, config)
    report, cert = theorem_tau_experiment(
        pair.p, pair.k, pair.a_p, args.r, config.factor_budget, args.threshold
    )
    if args.certificate:
        Path(args.certificate).write_text(cert.to_json() + "\n", encoding="utf-8")
    return _emit_report(report, args, config)


def cmd_suite(args, config):
    table, _, _ = cached_table(config)
    reports = run_suite(table, SuiteConfig(budget=config.factor_budget))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    worst = EXIT_OK
    for report in reports:
        path = out / f"{report.experiment}.{config.output_format}"
        path.write_text(report.render(config.output_format), encoding="utf-8", newline="\n")
        print(f"{report.experiment}: {report.status} -> {path}")
        code = _STATUS_EXIT[report.status]
        worst = code if code == EXIT_FAIL or worst == EXIT_OK else worst
    return worst


# --- parser ---------------------------------------------------------------------------


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help=f"key = value config file (default ./{CONFIG_FILENAME})")
    g.add_argument("--cache-dir")
    g.add_argument("--table-bound", type=int)
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--precision-bits", type=int)
    g.add_argument("--trial-bound", type=int, help="trial division bound")
    g.add_argument("--rho-cap", type=int, help="Pollard rho iteration cap")
    g.add_argument("--time-cap-ms", type=int, help="wall clock cap per factorization")
    g.add_argument("-o", "--output", help="write to this file instead of stdout")
    return common


def _pair_options() -> argparse.ArgumentParser:
    pair = argparse.ArgumentParser(add_help=False)
    g = pair.add_argument_group("eigenvalue")
    g.add_argument("-p", type=int, default=2, help="prime (default 2)")
    g.add_argument("-k", type=int, default=12, help="weight (default 12)")
    g.add_argument("--ap", type=int, help="a_f(p); defaults to tau(p) in weight 12")
    return pair


def build_parser() -> argparse.ArgumentParser:
    common, pair = _common_options(), _pair_options()
    parser = argparse.ArgumentParser(prog="tau-lucas-lab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    tau_p = sub.add_parser("tau", help="tau tables and values")
    tau_sub = tau_p.add_subparsers(dest="tau_command", required=True)
    p = tau_sub.add_parser("table", parents=[common], help="build or reuse a cached table")
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(func=cmd_tau_table)
    p = tau_sub.add_parser("value", parents=[common], help="print tau(N)")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_tau_value)

    lucas_p = sub.add_parser("lucas", help="Lucas pair utilities")
    lucas_sub = lucas_p.add_subparsers(dest="lucas_command", required=True)
    p = lucas_sub.add_parser("pair", parents=[common, pair], help="normalized pair parameters")
    p.set_defaults(func=cmd_lucas_pair)
    p = lucas_sub.add_parser("u", parents=[common, pair], help="print u_N")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_lucas_u)
    p = lucas_sub.add_parser("primitive", parents=[common, pair], help="primitive part of u_N")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_lucas_primitive)

    p = sub.add_parser("omega-bound", parents=[common, pair], help="certified omega(u_N) bounds")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--threshold", type=int, default=BHV_THRESHOLD)
    p.add_argument("--certificate", help="also write the JSON certificate here")
    p.set_defaults(func=cmd_omega_bound)

    verify_p = sub.add_parser("verify", help="identity checks")
    verify_sub = verify_p.add_subparsers(dest="verify_command", required=True)
    p = verify_sub.add_parser("valuations", parents=[common], help="v_p(tau(p^n)) = n v_p(tau(p))")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(func=cmd_verify_valuations)
    p = verify_sub.add_parser("norm-lemma", parents=[common, pair], help="norm growth ratios")
    p.add_argument("--points", default="1,3,20,50,100,200")
    p.set_defaults(func=cmd_verify_norm_lemma)

    p = sub.add_parser("satotate", parents=[common], help="Sato-Tate histogram")
    p.add_argument("--bound", type=int)
    p.add_argument("--bins", type=int, default=20)
    p.set_defaults(func=cmd_satotate)

    p = sub.add_parser("radical-report", parents=[common, pair], help="radicals vs conditional bound")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--epsilon", default="0")
    p.add_argument("--c", default="1")
    p.set_defaults(func=cmd_radical_report)

    p = sub.add_parser("theorem-tau", parents=[common, pair], help="primorial-index certificate")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--threshold", type=int, default=BHV_THRESHOLD)
    p.add_argument("--certificate", help="also write the JSON certificate here")
    p.set_defaults(func=cmd_theorem_tau)

    p = sub.add_parser("suite", parents=[common], help="run every experiment")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_suite)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        config = resolve_config(args)
        return args.func(args, config)
    except (TauLabError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
