"""``em`` command line: reproduce, fit, compare measures, demonstrate.

Exit status: 0 success, 1 input error, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import RunConfig, load_config, record_key, save_config
from .datasets import BUNDLED, EXPERIMENT_NAMES, load_experiments
from .errors import EMError
from .evidence import ALL_METHODS, EntropyMethod, alt_entropy, deng_entropy, read_boe
from .experiments import entropy_bakeoff, plot_data, resolve_rates, run_table3, summary_report
from .markov import total_probability_demo, two_state_generator

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _use_color(stream) -> bool:
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _bold(stream):
    if _use_color(stream):
        return lambda s: f"\033[1m{s}\033[0m"
    return lambda s: s


def _add_source(p, bundled_default=False):
    group = p.add_mutually_exclusive_group(required=not bundled_default)
    group.add_argument("--bundled", action="store_true", help="use the bundled published results")
    group.add_argument("--experiments", metavar="CSV", help="read experiment records from a CSV file")


def _add_model(p):
    p.add_argument("--config", metavar="TOML", help="run configuration (flags override it)")
    p.add_argument("--t", type=float, help="decision time (default 2)")
    p.add_argument("--mode", choices=["column-generator", "as-printed"], help="intensity matrix reading")
    p.add_argument("--fit-scope", choices=["per-experiment", "shared"])
    p.add_argument("--rates", nargs=2, type=float, metavar=("K_R", "K_W"), help="skip fitting, use these rates")
    p.add_argument("--include-wide", action="store_true", help="also run the wide-face rows")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="em", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="model vs observed table for each experiment")
    _add_source(run)
    _add_model(run)
    run.add_argument("--target", choices=["em-published", "observed"])
    run.add_argument("--entropy", metavar="METHOD", help="uncertainty measure for gamma (default deng)")
    run.add_argument("--gamma-zero", action="store_true", help="classical baseline: gamma forced to 0")
    run.add_argument("--csv", metavar="PATH", help="write full-precision CSV")

    fit = sub.add_parser("fit", help="fit payoff rates and write them into a config file")
    _add_source(fit)
    _add_model(fit)
    fit.add_argument("--target", choices=["em-published", "observed"], required=True)
    fit.add_argument("--out", metavar="TOML", default="em-fit.toml", help="config file to write")

    ent = sub.add_parser("entropy", help="compare uncertainty measures")
    src = ent.add_mutually_exclusive_group()
    src.add_argument("--bundled", action="store_true")
    src.add_argument("--experiments", metavar="CSV")
    src.add_argument("--boe", metavar="FILE", help="entropies of one body of evidence")
    _add_model(ent)
    ent.add_argument("--target", choices=["em-published", "observed"])
    ent.add_argument("--methods", nargs="+", metavar="METHOD", help="subset of measures (default all seven)")
    ent.add_argument("--csv", metavar="PATH")
    ent.add_argument("--plot-data", metavar="PATH")

    demo = sub.add_parser("markov-demo", help="two-state chain obeys total probability")
    demo.add_argument("--rates", nargs=2, type=float, default=(1.0, 0.5), metavar=("PLUS_TO_MINUS", "MINUS_TO_PLUS"))
    demo.add_argument("--t", type=float, nargs="+", default=(0.5, 1.0, 2.0, 5.0))
    demo.add_argument("--mix", nargs=2, type=float, default=(0.5, 0.5), metavar=("PHI_PLUS", "PHI_MINUS"))

    val = sub.add_parser("validate", help="check a BOE file or an experiments CSV")
    val.add_argument("path")
    return parser


def _config(args) -> RunConfig:
    config = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    changes = {}
    if getattr(args, "t", None) is not None:
        changes["t"] = args.t
    if getattr(args, "mode", None):
        changes["generator_mode"] = args.mode
    if getattr(args, "fit_scope", None):
        changes["fit_scope"] = args.fit_scope
    if getattr(args, "target", None):
        changes["target"] = args.target
    if getattr(args, "entropy", None):
        changes["entropy_method"] = EntropyMethod.parse(args.entropy)
    if getattr(args, "rates", None):
        changes["rate_overrides"] = tuple(args.rates)
    if getattr(args, "gamma_zero", False):
        changes["gamma_zero"] = True
    return config.with_(**changes)


def _records(args):
    if getattr(args, "experiments", None):
        records = load_experiments(Path(args.experiments))
    else:
        records = list(BUNDLED)
    if getattr(args, "include_wide", False):
        return records
    return [r for r in records if r.is_narrow] or records


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def cmd_run(args, out) -> int:
    config = _config(args)
    rows = run_table3(_records(args), config)
    report = summary_report(rows, bold=_bold(out))
    print(report.text, file=out)
    if args.csv:
        _write(args.csv, report.csv)
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"warning: {record_key(r.record)}: {r.error}", file=sys.stderr)
    if any(r.no_convergence for r in rows):
        return EXIT_NUMERIC
    return EXIT_INPUT if any(r.result is None for r in rows) else EXIT_OK


def cmd_fit(args, out) -> int:
    config = _config(args).with_(rate_overrides=None, fitted_rates={})
    records = _records(args)
    rates = resolve_rates(records, config)
    stored, status = {}, EXIT_OK
    print(f"{'experiment':<22} {'k_r':>10} {'k_w':>10} {'objective':>11}  converged", file=out)
    for record in records:
        key = record_key(record)
        entry = rates[key]
        if isinstance(entry, EMError):
            print(f"{key:<22} error: {entry}", file=out)
            status = max(status, EXIT_INPUT)
            continue
        k_r, k_w, fit = entry
        print(f"{key:<22} {k_r:10.6f} {k_w:10.6f} {fit.objective_value:11.3e}  {fit.converged}", file=out)
        if not fit.converged:
            status = EXIT_NUMERIC
        stored[key] = (k_r, k_w)
    save_config(config.with_(fitted_rates=stored), args.out)
    print(f"wrote {args.out}", file=out)
    return status


def cmd_entropy(args, out) -> int:
    methods = [EntropyMethod.parse(m) for m in args.methods] if args.methods else list(ALL_METHODS)
    if args.boe:
        m = read_boe(args.boe)
        for method in methods:
            value = deng_entropy(m) if method is EntropyMethod.DENG else alt_entropy(m, method)
            print(f"{method.value:<22} {value:.4f}", file=out)
        return EXIT_OK
    config = _config(args)
    records = [r for r in _records(args) if args.experiments or r.name in EXPERIMENT_NAMES]
    table = run_table3(records, config)
    rows = entropy_bakeoff(records, methods, config, table=table)
    report = summary_report(rows, bold=_bold(out))
    print(report.text, file=out)
    if args.csv:
        _write(args.csv, report.csv)
    if args.plot_data:
        _write(args.plot_data, plot_data(rows))
    return EXIT_NUMERIC if any(r.no_convergence for r in table) else EXIT_OK


def cmd_markov_demo(args, out) -> int:
    k = two_state_generator(*args.rates)
    if abs(sum(args.mix) - 1.0) > 1e-9 or min(args.mix) < 0:
        raise UsageError("--mix must be two nonnegative numbers summing to 1")
    print(f"{'t':>6} {'p(+|+)':>10} {'p(+|-)':>10} {'p(+|U)':>10} {'residual':>11}", file=out)
    for t in args.t:
        d = total_probability_demo(k, t, args.mix)
        print(f"{t:6.2f} {d.p_plus_given_plus:10.4f} {d.p_plus_given_minus:10.4f} "
              f"{d.p_plus_unknown:10.4f} {d.law_residual:11.1e}", file=out)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    path = Path(args.path)
    if path.suffix.lower() == ".csv":
        records = load_experiments(path)
        print(f"{path}: {len(records)} valid experiment records", file=out)
        return EXIT_OK
    m = read_boe(path)
    print(f"{path}: valid body of evidence over {{{','.join(m.frame.labels)}}}", file=out)
    for labels, mass in m.entries():
        print(f"  {'|'.join(labels):<20} {mass:.4f}", file=out)
    print(f"  deng entropy: {deng_entropy(m):.4f}", file=out)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "fit": cmd_fit,
    "entropy": cmd_entropy,
    "markov-demo": cmd_markov_demo,
    "validate": cmd_validate,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (EMError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
