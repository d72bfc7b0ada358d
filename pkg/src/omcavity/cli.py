"""Command-line interface: steady | sweep | hysteresis | spectrum | map | plot.

Configuration comes from an optional JSON file plus command-line flags,
with precedence flag > file > default.  The schema is strict: unknown
keys anywhere fail with exit code 2 and name the offending key.  All
frequency-like values are in units of the mechanical frequency.

Exit codes: 0 success, 2 invalid config/input, 3 numerical failure,
4 I/O failure.  File writes are atomic (write to a temp file in the
target directory, then rename).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import probe, steady, sweeps, svgplot
from .params import SystemParams, validate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

TOP_KEYS = {"params", "sweep", "spectrum", "map", "output"}
SWEEP_KEYS = {"parameter", "start", "stop", "points", "tie_delta_d",
              "tie_sign", "direction"}
SPECTRUM_KEYS = {"n", "start", "stop", "points", "refine", "with_eit",
                 "literal_signs"}
MAP_KEYS = {"x", "y"}
AXIS_KEYS = {"name", "start", "stop", "points"}
OUTPUT_KEYS = {"format", "path", "plot", "png", "features_path"}


class ConfigError(ValueError):
    pass


def _fmt(v) -> str:
    """Full double precision so downstream comparisons are lossless."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return f"{v:.17g}"


def _check_keys(d: dict, allowed: set, where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(cfg, TOP_KEYS, "config")
    for section, allowed in (("sweep", SWEEP_KEYS), ("spectrum", SPECTRUM_KEYS),
                             ("map", MAP_KEYS), ("output", OUTPUT_KEYS)):
        if section in cfg:
            if not isinstance(cfg[section], dict):
                raise ConfigError(f"config section {section!r} must be an object")
            _check_keys(cfg[section], allowed, f"config.{section}")
    if "map" in cfg:
        for ax in ("x", "y"):
            if ax in cfg["map"]:
                _check_keys(cfg["map"][ax], AXIS_KEYS, f"config.map.{ax}")
    return cfg


def build_params(cfg: dict, overrides: list[str]) -> SystemParams:
    d = dict(cfg.get("params", {}))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set expects name=value, got {item!r}")
        name, _, raw = item.partition("=")
        try:
            d[name.strip()] = float(raw)
        except ValueError:
            raise ConfigError(f"--set {name}: not a number: {raw!r}")
    try:
        params = SystemParams.from_dict(d)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e))
    rep = validate(params)
    if not rep.ok:
        raise ConfigError("; ".join(rep.violations))
    return params


def _section(cfg: dict, name: str, args, flag_names) -> dict:
    """Merge config-file section and CLI flags; flags win when not None."""
    merged = dict(cfg.get(name, {}))
    for key in flag_names:
        v = getattr(args, key, None)
        if v is not None:
            merged[key] = v
    return merged


def atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".omcavity-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(text: str, path: str | None) -> None:
    if path:
        atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _maybe_plot(output: dict, series, x_label: str, y_label: str,
                title: str = "") -> None:
    if output.get("plot"):
        atomic_write(output["plot"], svgplot.render_svg(
            series, x_label=x_label, y_label=y_label, title=title))
    if output.get("png"):
        from . import figures
        figures.save_png(series, output["png"], x_label=x_label,
                         y_label=y_label, title=title)


# --- commands -----------------------------------------------------------

def cmd_steady(params: SystemParams, cfg: dict, output: dict) -> None:
    rs = steady.steady_roots(params)
    doc = {
        "params": params.to_dict(),
        "branches": [
            {"n": b.n,
             "re_a_s": b.a_s.real, "im_a_s": b.a_s.imag,
             "q_s": b.q_s, "p_s": b.p_s,
             "re_sigma_s": b.sigma_s.real, "im_sigma_s": b.sigma_s.imag,
             "stability": b.stability, "marginal": b.marginal}
            for b in rs.branches
        ],
        "discriminant": rs.discriminant_value,
        "bistable_predicate": rs.is_bistable or steady.bistability_predicate(params)[0],
        "three_roots_here": rs.is_bistable,
        "degenerate": rs.degenerate,
    }
    _emit(json.dumps(doc, indent=2) + "\n", output.get("path"))


def _trace_rows(trace: sweeps.SweepTrace, hysteresis: bool):
    values, n_mat, flags = trace.branch_table()
    header = [trace.swept_name, "n_1", "n_2", "n_3", "stability"]
    if hysteresis:
        header += ["up_path", "down_path"]
    rows = []
    for i, v in enumerate(values):
        row = [_fmt(v)] + [_fmt(n_mat[i, j]) for j in range(3)] + [flags[i]]
        if hysteresis:
            row += [_fmt(trace.up_path[i] if trace.up_path is not None else None),
                    _fmt(trace.down_path[i] if trace.down_path is not None else None)]
        rows.append(row)
    return header, rows


def _trace_json(trace: sweeps.SweepTrace, hysteresis: bool) -> dict:
    values, n_mat, flags = trace.branch_table()
    doc = {
        "swept_name": trace.swept_name,
        "values": [float(v) for v in values],
        "branches_n": [[None if math.isnan(x) else x for x in row] for row in n_mat],
        "stability": flags,
    }
    if hysteresis:
        doc["up_path"] = list(map(float, trace.up_path))
        doc["down_path"] = list(map(float, trace.down_path))
    return doc


def _emit_trace(trace, output, hysteresis, x_label):
    if output.get("format", "csv") == "json":
        _emit(json.dumps(_trace_json(trace, hysteresis), indent=2) + "\n",
              output.get("path"))
    else:
        header, rows = _trace_rows(trace, hysteresis)
        _emit(_csv_text(header, rows), output.get("path"))
    values, n_mat, flags = trace.branch_table()
    series = []
    if hysteresis and trace.up_path is not None:
        series.append(svgplot.Series(tuple(trace.values), tuple(trace.up_path),
                                     label="up"))
        series.append(svgplot.Series(tuple(trace.values), tuple(trace.down_path),
                                     label="down"))
    else:
        for j in range(3):
            col = n_mat[:, j]
            if np.all(np.isnan(col)):
                continue
            dashed = any(len(f) > j and f[j] == "u" for f in flags)
            series.append(svgplot.Series(tuple(values), tuple(col),
                                         label=f"branch {j + 1}", dashed=dashed))
    _maybe_plot(output, series, x_label, "photon number n")


def cmd_sweep(params: SystemParams, cfg: dict, output: dict) -> None:
    name = cfg.get("parameter", "delta_c")
    lo = float(cfg.get("start", -2.0))
    hi = float(cfg.get("stop", 2.0))
    points = int(cfg.get("points", sweeps.SWEEP_POINTS_DEFAULT))
    if name == "delta_c":
        tie = bool(cfg.get("tie_delta_d", False))
        sign = int(cfg.get("tie_sign", 1))
        if sign not in (-1, 1):
            raise ConfigError("tie_sign must be +1 or -1")
        trace = sweeps.sweep_detuning(params, lo, hi, points,
                                      tie_delta_d=tie, tie_sign=sign)
    else:
        trace = sweeps.sweep_parameter(params, name, lo, hi, points)
    _emit_trace(trace, output, hysteresis=False,
                x_label=f"{trace.swept_name} (units of mechanical frequency)")


def cmd_hysteresis(params: SystemParams, cfg: dict, output: dict) -> None:
    lo = float(cfg.get("start", 0.0))
    hi = float(cfg.get("stop", 3.0))
    points = int(cfg.get("points", sweeps.SWEEP_POINTS_DEFAULT))
    direction = cfg.get("direction", "both")
    trace = sweeps.sweep_drive(params, lo, hi, points, direction=direction)
    _emit_trace(trace, output, hysteresis=True, x_label="pump amplitude E_l")


def cmd_spectrum(params: SystemParams, cfg: dict, output: dict) -> None:
    if "n" not in cfg:
        raise ConfigError("spectrum requires the photon number n")
    n = float(cfg["n"])
    lo = float(cfg.get("start", -2.0))
    hi = float(cfg.get("stop", 2.0))
    points = int(cfg.get("points", 2001))
    refine = bool(cfg.get("refine", True))
    with_eit = bool(cfg.get("with_eit", False))
    literal = bool(cfg.get("literal_signs", False))
    grid = probe.make_grid(lo, hi, points, params.gamma_m, refine=refine)
    spec = probe.spectrum(params, n, grid, literal_signs=literal,
                          with_eit=with_eit)
    for w in spec.warnings:
        print(f"warning: {w}", file=sys.stderr)

    header = ["delta_p", "t", "re_a1", "im_a1", "abs_a2", "abs_q1"]
    if with_eit:
        header.append("t_eit")
    rows = []
    for i in range(spec.delta_p.size):
        row = [_fmt(spec.delta_p[i]), _fmt(spec.t[i]),
               _fmt(spec.a1[i].real), _fmt(spec.a1[i].imag),
               _fmt(abs(spec.a2[i])), _fmt(abs(spec.q1[i]))]
        if with_eit:
            row.append(_fmt(spec.t_eit[i]))
        rows.append(row)

    f = spec.features
    feats = {
        "peaks": list(f.peak_positions),
        "dips": list(f.dip_positions),
        "principal_position": f.principal_position,
        "principal_value": f.principal_value,
        "principal_kind": f.principal_kind,
        "window_width": f.window_width,
        "contrast": f.contrast,
        "asymmetry": f.asymmetry,
    }
    path = output.get("path")
    if output.get("format", "csv") == "json":
        doc = {"spectrum": {"delta_p": list(map(float, spec.delta_p)),
                            "t": list(map(float, spec.t))},
               "features": feats}
        _emit(json.dumps(doc, indent=2) + "\n", path)
    else:
        _emit(_csv_text(header, rows), path)
        fpath = output.get("features_path")
        if fpath is None and path:
            fpath = path + ".features.json"
        if fpath:
            atomic_write(fpath, json.dumps(feats, indent=2) + "\n")
    series = [svgplot.Series(tuple(spec.delta_p), tuple(spec.t), label="T")]
    if with_eit:
        series.append(svgplot.Series(tuple(spec.delta_p), tuple(spec.t_eit),
                                     label="T (EIT model)", dashed=True))
    _maybe_plot(output, series, "probe detuning delta_p", "transmission T")


def cmd_map(params: SystemParams, cfg: dict, output: dict) -> None:
    def axis(d, default_name):
        name = d.get("name", default_name)
        lo = float(d.get("start", 0.0))
        hi = float(d.get("stop", 0.2))
        pts = int(d.get("points", sweeps.MAP_POINTS_DEFAULT))
        return name, np.linspace(lo, hi, pts)

    x = axis(cfg.get("x", {}), "kappa")
    y = axis(cfg.get("y", {}), "chi")
    m = sweeps.bistability_map(params, x, y)
    if output.get("format", "csv") == "json":
        doc = {"x_name": m.x_name, "y_name": m.y_name,
               "x_values": list(map(float, m.x_values)),
               "y_values": list(map(float, m.y_values)),
               "root_count": m.root_count.tolist(),
               "predicate": m.predicate.tolist(),
               "flagged_cells": int(m.flagged.sum())}
        _emit(json.dumps(doc, indent=2) + "\n", output.get("path"))
    else:
        header = [f"{m.y_name}\\{m.x_name}"] + [_fmt(v) for v in m.x_values]
        rows = [[_fmt(yv)] + [str(int(c)) for c in m.root_count[i]]
                for i, yv in enumerate(m.y_values)]
        _emit(_csv_text(header, rows), output.get("path"))


def cmd_plot(args) -> None:
    try:
        with open(args.data, encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            table = list(reader)
    except csv.Error as e:
        raise ConfigError(f"malformed CSV: {e}") from e
    if not table:
        raise ConfigError("malformed CSV: empty file")
    header, body = table[0], table[1:]
    if len(header) < 2:
        raise ConfigError("malformed CSV: need at least two columns")

    def parse(cell):
        if cell == "":
            return math.nan
        try:
            return float(cell)
        except ValueError:
            return None  # non-numeric column marker

    cols = list(zip(*body)) if body else [()] * len(header)
    x_raw = [parse(c) for c in cols[0]]
    if any(v is None for v in x_raw):
        raise ConfigError("malformed CSV: non-numeric first column")
    stability = None
    series = []
    for j in range(1, len(header)):
        vals = [parse(c) for c in cols[j]]
        if any(v is None for v in vals):
            if header[j] == "stability":
                stability = cols[j]
            continue
        series.append((j, header[j], vals))

    out = []
    for k, (j, label, vals) in enumerate(series):
        branch_idx = j - 1 if header[j].startswith("n_") else None
        if stability is not None and branch_idx is not None:
            # split into stable (solid) and unstable (dashed) runs
            for dashed, flag in ((False, "s"), (True, "u")):
                y = [v if (len(stability[i]) > branch_idx
                           and stability[i][branch_idx] == flag)
                     else math.nan for i, v in enumerate(vals)]
                if all(math.isnan(v) for v in y):
                    continue
                out.append(svgplot.Series(tuple(x_raw), tuple(y),
                                          label=label if not dashed else "",
                                          dashed=dashed,
                                          color=svgplot.PALETTE[k % len(svgplot.PALETTE)]))
        else:
            out.append(svgplot.Series(tuple(x_raw), tuple(vals), label=label))

    text = svgplot.render_svg(out, x_label=args.x_label or header[0],
                              y_label=args.y_label or "",
                              title=args.title or "")
    atomic_write(args.output, text)
    if args.png:
        from . import figures
        figures.save_png(out, args.png, x_label=args.x_label or header[0],
                         y_label=args.y_label or "", title=args.title or "")


# --- argument parsing ---------------------------------------------------

def _add_common(p):
    p.add_argument("-c", "--config", help="JSON configuration file")
    p.add_argument("--set", action="append", metavar="NAME=VALUE",
                   help="override a model parameter (repeatable)")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--plot", help="also write an SVG plot to this path")
    p.add_argument("--png", help="also render a PNG figure to this path")


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="omcavity",
        description="Steady states, bistability and probe spectra of a "
                    "Kerr optomechanical cavity with a two-level emitter. "
                    "All frequencies in units of the mechanical frequency.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("steady", help="steady-state branches at one parameter point")
    _add_common(sp)

    sp = sub.add_parser("sweep", help="steady states versus a swept parameter")
    _add_common(sp)
    sp.add_argument("--parameter", choices=sweeps.SWEEPABLE)
    sp.add_argument("--start", type=float)
    sp.add_argument("--stop", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--tie-delta-d", dest="tie_delta_d", action="store_const",
                    const=True, help="tie the emitter detuning to the cavity detuning")
    sp.add_argument("--tie-sign", dest="tie_sign", type=int, choices=(-1, 1))

    sp = sub.add_parser("hysteresis", help="drive up/down sweep with branch following")
    _add_common(sp)
    sp.add_argument("--start", type=float)
    sp.add_argument("--stop", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--direction", choices=("up", "down", "both"))

    sp = sub.add_parser("spectrum", help="weak-probe transmission spectrum")
    _add_common(sp)
    sp.add_argument("--n", type=float, help="intracavity photon number")
    sp.add_argument("--start", type=float)
    sp.add_argument("--stop", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--no-refine", dest="refine", action="store_const", const=False)
    sp.add_argument("--with-eit", dest="with_eit", action="store_const", const=True,
                    help="include the EIT-form model transmission column")
    sp.add_argument("--literal-signs", dest="literal_signs", action="store_const",
                    const=True, help="diagnostic sideband sign convention")

    sp = sub.add_parser("map", help="2-D bistability map (root counts)")
    _add_common(sp)
    sp.add_argument("--x", metavar="NAME:START:STOP:POINTS")
    sp.add_argument("--y", metavar="NAME:START:STOP:POINTS")

    sp = sub.add_parser("plot", help="render a CSV produced by this tool to SVG")
    sp.add_argument("data", help="input CSV")
    sp.add_argument("-o", "--output", required=True, help="output SVG path")
    sp.add_argument("--png", help="also render a PNG figure")
    sp.add_argument("--x-label")
    sp.add_argument("--y-label")
    sp.add_argument("--title")
    return p


def _parse_axis_flag(raw: str) -> dict:
    parts = raw.split(":")
    if len(parts) != 4:
        raise ConfigError(f"axis spec must be NAME:START:STOP:POINTS, got {raw!r}")
    return {"name": parts[0], "start": float(parts[1]),
            "stop": float(parts[2]), "points": int(parts[3])}


def run(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "plot":
            cmd_plot(args)
            return EXIT_OK
        cfg = load_config(args.config)
        params = build_params(cfg, args.set)
        output = dict(cfg.get("output", {}))
        for key in ("format", "plot", "png"):
            v = getattr(args, key, None)
            if v is not None:
                output[key] = v
        if args.output is not None:
            output["path"] = args.output

        if args.command == "steady":
            cmd_steady(params, cfg, output)
        elif args.command == "sweep":
            section = _section(cfg, "sweep", args,
                               ("parameter", "start", "stop", "points",
                                "tie_delta_d", "tie_sign"))
            cmd_sweep(params, section, output)
        elif args.command == "hysteresis":
            section = _section(cfg, "sweep", args,
                               ("start", "stop", "points", "direction"))
            cmd_hysteresis(params, section, output)
        elif args.command == "spectrum":
            section = _section(cfg, "spectrum", args,
                               ("n", "start", "stop", "points", "refine",
                                "with_eit", "literal_signs"))
            cmd_spectrum(params, section, output)
        elif args.command == "map":
            section = dict(cfg.get("map", {}))
            if getattr(args, "x", None):
                section["x"] = _parse_axis_flag(args.x)
            if getattr(args, "y", None):
                section["y"] = _parse_axis_flag(args.y)
            cmd_map(params, section, output)
        return EXIT_OK
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ZeroDivisionError, ArithmeticError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"i/o failure: {e}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
