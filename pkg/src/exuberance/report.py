"""Report assembly and text rendering.

The JSON document is the single source of truth; the text table and the SVG
are renderings of it.  Field list (``schema_version`` 1):

``command``        "test" or "datestamp"
``series``         name, frequency, T, start, end
``config``         lag, min_window, min_window_rule, reps, seed, levels
``environment``    package, numpy and numba versions, kernel backend, generator
``results``        ``gsadf`` and ``sadf`` blocks (stat, p_value,
                   critical_values keyed by level, significance, mark),
                   df_full, degenerate_windows
``null``           T, reps, seed, lag, min_window, redraws
``sequences``      dates, bsadf, argmax_start, sadf (per BSADF endpoint)
``datestamp``      (datestamp only) level, min_duration, min_duration_rule,
                   gsadf_critical_value, gsadf_rejects_at_level, cv_sequence,
                   episodes
"""
from __future__ import annotations

import json
import math

import numpy as np

from . import __version__
from ._accel import BACKEND, HAS_NUMBA
from .critical_values import GENERATOR_VERSION, STANDARD_LEVELS, classify, p_value

SCHEMA_VERSION = 1
MARK_LEGEND = "** 1% significance level; *** 5% significance level; * 10% significance level"


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def numbers(a):
    return [_num(v) for v in np.asarray(a, dtype=np.float64)]


def level_key(level):
    return f"{level:.2f}"


def environment():
    numba_version = None
    if HAS_NUMBA:
        import numba
        numba_version = numba.__version__
    return {
        "package": __version__,
        "numpy": np.__version__,
        "numba": numba_version,
        "backend": BACKEND,
        "generator": GENERATOR_VERSION,
    }


def stat_block(kind, stat, draws, table):
    levels = table.levels
    block = {
        "stat": _num(stat),
        "p_value": p_value(stat, draws.draws(kind)),
        "critical_values": {level_key(lv): _num(v) for lv, v in zip(levels, table.values[kind])},
        "significance": None,
        "mark": "",
    }
    if all(any(abs(lv - s) < 1e-12 for lv in levels) for s in STANDARD_LEVELS):
        sig = classify(stat, table, kind)
        block["significance"] = sig.value
        block["mark"] = sig.mark
    return block


def build_report(command, series, result, draws, table, config):
    dates = [series.date_str(i) for i in result.bsadf.endpoints]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "series": {
            "name": series.name,
            "frequency": series.frequency,
            "T": len(series),
            "start": series.date_str(0),
            "end": series.date_str(len(series) - 1),
        },
        "config": config,
        "environment": environment(),
        "results": {
            "gsadf": stat_block("gsadf", result.gsadf, draws, table),
            "sadf": stat_block("sadf", result.sadf, draws, table),
            "df_full": _num(result.df_full),
            "degenerate_windows": result.degenerate_windows,
        },
        "null": {
            "T": draws.T,
            "reps": draws.reps,
            "seed": draws.seed,
            "lag": draws.lag,
            "min_window": draws.w0,
            "redraws": draws.redraws,
        },
        "sequences": {
            "dates": dates,
            "bsadf": numbers(result.bsadf.stats),
            "argmax_start": [int(v) for v in result.bsadf.argmax_start],
            "sadf": numbers(result.sadf_sequence),
        },
    }


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _fmt_stat(value, mark=""):
    if value is None:
        return f"{'n/a':>12}   "
    return f"{value:>12.6f}{mark:<3}"


def format_block(name, columns):
    """Table-style block: statistic row plus one row per critical level.

    ``columns`` is a sequence of ``(label, block)`` with ``block`` shaped like
    the ``results`` entries of the report.
    """
    head = f"{'':<22}" + "".join(f"{label:>15}{'Prob.':>10}" for label, _ in columns)
    row = f"{name[:22]:<22}" + "".join(
        f"{_fmt_stat(b['stat'], b['mark'])}{b['p_value']:>10.4f}" for _, b in columns
    )
    lines = [head.rstrip(), row.rstrip()]
    keys = sorted(columns[0][1]["critical_values"], key=float, reverse=True)
    for key in keys:
        label = f"  {float(key) * 100:g}% level"
        cells = "".join(f"{_fmt_stat(b['critical_values'][key])}{'':>10}" for _, b in columns)
        lines.append((f"{label:<22}" + cells).rstrip())
    return "\n".join(lines)


def render_text(report):
    s = report["series"]
    c = report["config"]
    out = [
        f"exuberance {report['command']} report",
        f"series: {s['name']} ({s['frequency']}, T={s['T']}, {s['start']} .. {s['end']})",
        f"lag {c['lag']} | min window {c['min_window']} ({c['min_window_rule']}) | "
        f"reps {c['reps']} | seed {c['seed']}",
    ]
    ds = report.get("datestamp")
    if ds is not None:
        out.append(
            f"date-stamping: level {ds['level']} | min duration {ds['min_duration']} "
            f"({ds['min_duration_rule']})"
        )
    out.append("")
    r = report["results"]
    out.append(format_block(s["name"], [("GSADF", r["gsadf"]), ("SADF", r["sadf"])]))
    out.append("Test critical values from Monte Carlo simulation "
               f"({report['null']['reps']} replications)")
    out.append(MARK_LEGEND)
    if r["degenerate_windows"]:
        out.append(f"degenerate windows excluded from the sups: {r['degenerate_windows']}")
    if ds is not None:
        out.append("")
        eps = ds["episodes"]
        if not eps:
            out.append("no exuberance episodes stamped")
        else:
            out.append(f"{'start':<12}{'end':<12}{'obs':>5}{'peak':>12}  peak date")
            for e in eps:
                out.append(
                    f"{e['start_date']:<12}{e['end_date']:<12}{e['duration']:>5}"
                    f"{e['peak_stat']:>12.6f}  {e['peak_date']}"
                )
        if eps and not ds["gsadf_rejects_at_level"]:
            out.append("note: episodes stamped although GSADF does not reject at this level")
    return "\n".join(out) + "\n"
