"""``bubble`` command line.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import report as rpt
from .critical_values import STANDARD_LEVELS, bsadf_cv_sequence, check_levels, quantile_table, simulate_null
from .datestamp import StampConfig, default_min_duration, stamp
from .dgp import DgpSpec, gen_multi_bubble
from .dickey_fuller import AdfConfig
from .errors import ConfigError, ExuberanceError
from .plot import render_plot
from .recursive import WindowPolicy, run_gsadf
from .series import ColumnSchema, dumps_series, load_series, slice_series, write_text_atomic

logger = logging.getLogger("exuberance")

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_CONFIG = 0, 2, 3, 4
FORMATS = ("text", "json", "svg")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _levels(text):
    try:
        return check_levels(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _formats(text):
    out = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in out if f not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return out


def _episodes(text):
    eps = []
    for part in text.split(","):
        if not part.strip():
            continue
        try:
            a, b = part.split(":")
            eps.append((float(a), float(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"episode {part!r} is not START:END")
    return tuple(eps)


def _add_input_args(p):
    p.add_argument("--input", required=True, help="delimited file with a header row")
    p.add_argument("--date-column", default="date")
    p.add_argument("--value-column", default="value")
    p.add_argument("--date-format", default=None, help="strptime format (default: YYYY-MM-DD or YYYY-MM)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--frequency", choices=("daily", "monthly"), default=None)
    p.add_argument("--name", default=None, help="series label (default: file stem)")
    p.add_argument("--from", dest="date_from", default=None, help="first date kept")
    p.add_argument("--to", dest="date_to", default=None, help="last date kept")
    p.add_argument("--lag", type=int, default=0)
    p.add_argument("--min-window", type=int, default=None, help="smallest window in observations")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--levels", type=_levels, default=STANDARD_LEVELS)
    p.add_argument("--workers", type=int, default=None, help="parallel workers for the simulation")
    p.add_argument("--cache-dir", default=None, help="reuse simulated null draws from this directory")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--formats", type=_formats, default=FORMATS)


def build_parser():
    parser = _Parser(prog="bubble", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="GSADF/SADF statistics with Monte Carlo critical values")
    _add_input_args(p)

    p = sub.add_parser("datestamp", help="test plus BSADF date-stamping of episodes")
    _add_input_args(p)
    p.add_argument("--level", type=float, default=0.95, help="critical value level for stamping")
    p.add_argument("--min-duration", type=int, default=None, help="default ceil(log T)")

    p = sub.add_parser("simulate", help="write a synthetic multiple-episode series")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--episodes", type=_episodes, default=(), help="START:END fractions, comma separated")
    p.add_argument("--delta", type=float, default=1.06)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--reinit", choices=("origination", "fixed"), default="origination")
    p.add_argument("--reinit-value", type=float, default=None)
    p.add_argument("--name", default="simulated")
    p.add_argument("--out", required=True)

    p = sub.add_parser("critvals", help="print finite-sample critical values")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--lag", type=int, default=0)
    p.add_argument("--min-window", type=int, default=None)
    p.add_argument("--levels", type=_levels, default=STANDARD_LEVELS)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    return parser


def _load(args):
    schema = ColumnSchema(args.date_column, args.value_column, args.date_format,
                          args.delimiter, args.frequency)
    series = load_series(args.input, schema, args.name)
    if args.date_from or args.date_to:
        series = slice_series(
            series,
            args.date_from or series.timestamps[0],
            args.date_to or series.timestamps[-1],
        )
    return series


def _analyse(args, command):
    series = _load(args)
    config = AdfConfig(args.lag)
    policy = WindowPolicy(args.min_window)
    result = run_gsadf(series, config, policy)
    draws = simulate_null(len(series), args.reps, args.seed, config, policy,
                          workers=args.workers, cache_dir=args.cache_dir)
    table = quantile_table(draws, args.levels)
    run_config = {
        "lag": config.lag,
        "min_window": result.w0,
        "min_window_rule": policy.rule,
        "reps": args.reps,
        "seed": args.seed,
        "levels": list(table.levels),
    }
    return series, result, draws, table, rpt.build_report(command, series, result, draws, table, run_config)


def cmd_test(args):
    _, _, _, _, report = _analyse(args, "test")
    files = {}
    if "json" in args.formats:
        files["report.json"] = rpt.dumps(report)
    if "text" in args.formats:
        files["report.txt"] = rpt.render_text(report)
    return report, files


def cmd_datestamp(args):
    stamp_cfg = StampConfig(args.min_duration, args.level)
    series, result, draws, table, report = _analyse(args, "datestamp")
    cv = bsadf_cv_sequence(draws, stamp_cfg.level)
    episodes = stamp(result.bsadf, cv, stamp_cfg, series)
    gsadf_cv = float(quantile_table(draws, [stamp_cfg.level]).values["gsadf"][0])
    report["datestamp"] = {
        "level": stamp_cfg.level,
        "min_duration": stamp_cfg.min_duration or default_min_duration(len(series)),
        "min_duration_rule": "explicit" if stamp_cfg.min_duration else "ceil(log T)",
        "gsadf_critical_value": gsadf_cv,
        "gsadf_rejects_at_level": bool(result.gsadf >= gsadf_cv),
        "cv_sequence": rpt.numbers(cv.values),
        "episodes": [e.to_dict() for e in episodes],
    }
    files = {}
    if "json" in args.formats:
        files["report.json"] = rpt.dumps(report)
    if "text" in args.formats:
        files["report.txt"] = rpt.render_text(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["start_date", "end_date", "duration", "peak_stat", "peak_date"])
    for e in episodes:
        w.writerow([e.start_date, e.end_date, e.duration, f"{e.peak_stat:.6f}", e.peak_date])
    files["episodes.csv"] = buf.getvalue()
    if "svg" in args.formats:
        files["bsadf.svg"] = render_plot(result.bsadf, cv, episodes, report["sequences"]["dates"],
                                         title=f"BSADF of {series.name}")
    return report, files


def cmd_simulate(args):
    spec = DgpSpec(args.t, args.episodes, args.delta, args.noise_sd, args.seed,
                   args.reinit, args.reinit_value)
    labeled = gen_multi_bubble(spec, args.name)
    labels = "start_index,end_index\n" + "".join(f"{a},{b}\n" for a, b in labeled.true_episodes)
    return None, {f"{args.name}.csv": dumps_series(labeled.series), f"{args.name}_labels.csv": labels}


def cmd_critvals(args):
    config = AdfConfig(args.lag)
    policy = WindowPolicy(args.min_window)
    draws = simulate_null(args.t, args.reps, args.seed, config, policy,
                          workers=args.workers, cache_dir=args.cache_dir)
    table = quantile_table(draws, args.levels)
    if args.json:
        doc = {"T": args.t, "reps": args.reps, "seed": args.seed, "lag": args.lag,
               "min_window": draws.w0, **table.to_dict()}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        lines = [f"critical values: T={args.t} lag={args.lag} min window={draws.w0} "
                 f"reps={args.reps} seed={args.seed}",
                 f"{'level':<12}{'GSADF':>12}{'SADF':>12}"]
        for lv, g, s in zip(table.levels, table.values["gsadf"], table.values["sadf"]):
            lines.append(f"{f'{lv * 100:g}%':<12}{g:>12.6f}{s:>12.6f}")
        sys.stdout.write("\n".join(lines) + "\n")
    return None, {}


COMMANDS = {"test": cmd_test, "datestamp": cmd_datestamp, "simulate": cmd_simulate,
            "critvals": cmd_critvals}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "workers", None) is not None and args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        report, files = COMMANDS[args.command](args)
    except ExuberanceError as exc:
        print(f"bubble {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    # artifacts are written only after every computation succeeded
    for fname, text in files.items():
        write_text_atomic(os.path.join(args.out, fname), text)
    if report is not None and "text" in getattr(args, "formats", ()):
        sys.stdout.write(files.get("report.txt", ""))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
