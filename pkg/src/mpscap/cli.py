"""Command-line front end: sweeps, spectra, verification, channel demos.

Subcommands
-----------
capacity   closed-form and finite-n capacity estimates for one parameter
sweep      capacity across a parameter grid (csv, json or an svg line plot)
spectrum   closed-form and enumerated spectra side by side
verify     run the full cross-check suite; exit 1 on any failure
oracle     compare the pruned walk against the unpruned one
channel    build the finite-n dephasing channel and report the two-path check

Outputs are deterministic: identical invocations produce byte-identical
files.  ``--output`` paths that are relative are placed under
``$MPSCAP_OUTDIR`` when that variable is set.  A JSON config file mirroring
the flags can be supplied as ``mpscap --config run.json`` (remaining
arguments override the file).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from . import channel_sim as cs
from . import closed_form as cf
from . import diag_process as dp
from . import mps_core as mk
from .verify import run_verification

#: Default string lengths for the built-in models (sweep and capacity).
DEFAULT_N = {"aklt": 14, "mg": 20}

CAPACITY_HEADER = ["model", "param", "n", "estimator", "closed_form", "numeric", "gap"]
SPECTRUM_HEADER = ["family", "value", "multiplicity", "source"]


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def _param_grid(text: str) -> list[float]:
    """Parse 'start:stop:step' (stop inclusive) or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"grid must be 'start:stop:step', got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must not precede start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _resolve_output(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    outdir = os.environ.get("MPSCAP_OUTDIR")
    if outdir and not p.is_absolute():
        p = Path(outdir) / p
    return p


def _write_text(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _rows_to_csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _rows_to_json(header: list[str], rows: list[list[str]]) -> str:
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def _emit_rows(
    header: list[str], rows: list[list[str]], fmt: str, path: Path | None
) -> None:
    if fmt == "csv":
        _write_text(_rows_to_csv(header, rows), path)
    elif fmt == "json":
        _write_text(_rows_to_json(header, rows), path)
    else:
        raise ValueError(f"format {fmt!r} not supported for tabular output")


def emit_plot(
    series: Sequence[tuple[float, float]],
    path: str | Path | None,
    title: str = "",
    xlabel: str = "x",
    ylabel: str = "y",
) -> str:
    """Render a standalone SVG line chart; returns the SVG text.

    Deterministic byte output for fixed input; requires at least two points.
    """
    points = [(float(x), float(y)) for x, y in series]
    if len(points) < 2:
        raise ValueError("plot needs at least two points")
    width, height = 640, 480
    margin = 60
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    span_x = x_hi - x_lo
    span_y = y_hi - y_lo

    def sx(x: float) -> float:
        return margin + (x - x_lo) / span_x * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - y_lo) / span_y * (height - 2 * margin)

    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
    ]
    for k in range(5):
        xv = x_lo + span_x * k / 4
        yv = y_lo + span_y * k / 4
        lines.append(
            f'<text x="{sx(xv):.2f}" y="{height - margin + 20}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{xv:.6g}</text>"
        )
        lines.append(
            f'<text x="{margin - 8}" y="{sy(yv):.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.6g}</text>'
        )
    lines.append(
        f'<text x="{width // 2}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    lines.append(
        f'<text x="16" y="{height // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {height // 2})">{ylabel}</text>'
    )
    lines.append(
        f'<polyline points="{poly}" fill="none" stroke="#1f6fb4" stroke-width="2"/>'
    )
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if path is not None:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return text


def _build_model(args: argparse.Namespace) -> tuple[mk.MPSModel, float]:
    """Model plus the scalar parameter used in report rows."""
    if args.model == "aklt":
        theta = mk.AKLT_GROUND_THETA if args.theta_ground else args.theta
        if theta is None:
            raise ValueError("aklt model needs --theta or --theta-ground")
        return mk.aklt_model(theta), theta
    if args.model == "mg":
        g = mk.MG_GROUND_G if args.g_ground else args.g
        if g is None:
            raise ValueError("mg model needs --g or --g-ground")
        return mk.mg_model(g), g
    if args.model == "custom":
        if not args.model_file:
            raise ValueError("custom model needs --model-file")
        model = mk.load_model(args.model_file)
        param = next(iter(model.params.values()), 0.0)
        return model, param
    raise ValueError(f"unknown model {args.model!r}")


def _capacity_rows(
    model: mk.MPSModel, param: float, n: int, estimators: list[str], prune_tol: float
) -> list[list[str]]:
    est = cs.capacity_estimate(model, n, prune_tol=prune_tol)
    rows = []
    for name in estimators:
        numeric = est.estimate_avg if name == "avg" else est.estimate_cond
        gap = est.gap_avg if name == "avg" else est.gap_cond
        rows.append(
            [
                model.label,
                _fmt(param),
                str(n),
                name,
                _fmt(est.closed_form),
                _fmt(numeric),
                _fmt(gap),
            ]
        )
    return rows


def _estimators(arg: str) -> list[str]:
    if arg == "both":
        return ["avg", "cond"]
    if arg in ("avg", "cond"):
        return [arg]
    raise ValueError(f"unknown estimator {arg!r}")


def _cmd_capacity(args: argparse.Namespace) -> int:
    model, param = _build_model(args)
    n = args.n or DEFAULT_N.get(model.label, 12)
    rows = _capacity_rows(model, param, n, _estimators(args.estimator), args.prune_tol)
    _emit_rows(CAPACITY_HEADER, rows, args.format, _resolve_output(args.output))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.model == "aklt":
        grid = _param_grid(args.theta) if args.theta else [
            round(0.1 * k, 1) for k in range(16)
        ] + [mk.AKLT_GROUND_THETA]
        build = mk.aklt_model
    elif args.model == "mg":
        grid = _param_grid(args.g) if args.g else [round(0.05 * k, 2) for k in range(20)]
        build = mk.mg_model
    else:
        raise ValueError("sweep supports the built-in models 'aklt' and 'mg'")
    n = args.n or DEFAULT_N[args.model]
    estimators = _estimators(args.estimator)
    rows = []
    for param in sorted(grid):
        rows.extend(
            _capacity_rows(build(param), param, n, estimators, args.prune_tol)
        )
    out = _resolve_output(args.output)
    if args.format == "svg":
        main_est = estimators[-1]
        series = [
            (float(r[1]), float(r[5])) for r in rows if r[3] == main_est
        ]
        label = "theta" if args.model == "aklt" else "g"
        text = emit_plot(
            series,
            out,
            title=f"{args.model} capacity vs {label} (n={n}, {main_est})",
            xlabel=label,
            ylabel="capacity (qubits/use)",
        )
        if out is None:
            sys.stdout.write(text)
        return 0
    _emit_rows(CAPACITY_HEADER, rows, args.format, out)
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    model, param = _build_model(args)
    n = args.n or 6
    rows: list[list[str]] = []
    if model.label == "aklt":
        families = cf.aklt_spectrum(n, param)
    elif model.label == "mg":
        families = cf.mg_spectrum(n, param)
    else:
        families = []
    for fam in families:
        rows.append([fam.label, _fmt(fam.value), str(fam.multiplicity), "closed_form"])
    dist = dp.enumerate_distribution(model, n, args.prune_tol)
    grouped = dp.spectrum_of(dist)
    for idx, (value, mult) in enumerate(grouped.entries):
        rows.append([f"group_{idx}", _fmt(value), str(mult), "enumeration"])
    _emit_rows(SPECTRUM_HEADER, rows, args.format, _resolve_output(args.output))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_verification(which=args.model, n_max=args.n_max)
    for result in results:
        print(result)
    failures = [r for r in results if not r.passed]
    print(f"{len(results) - len(failures)}/{len(results)} checks passed")
    if failures:
        print(f"first failure: {failures[0].name}", file=sys.stderr)
        return 1
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    model, param = _build_model(args)
    n = args.n or 8
    pruned = dp.enumerate_distribution(model, n, args.prune_tol)
    full = dp.enumerate_distribution(model, n, prune_tol=0.0)
    gap = dp.compare_distributions(pruned, full)
    rows = [
        [
            model.label,
            _fmt(param),
            str(n),
            str(len(pruned)),
            str(len(full)),
            _fmt(gap),
            _fmt(pruned.pruned_mass),
        ]
    ]
    header = ["model", "param", "n", "items_pruned", "items_full", "max_diff", "pruned_mass"]
    _emit_rows(header, rows, args.format, _resolve_output(args.output))
    if gap > 1e-12:
        print(f"pruned and full walks disagree by {gap:.3e}", file=sys.stderr)
        return 1
    return 0


def _cmd_channel(args: argparse.Namespace) -> int:
    model, param = _build_model(args)
    n = args.n or 3
    estimate = cs.capacity_estimate(model, n, prune_tol=args.prune_tol, two_path_max_n=n)
    two_path = estimate.two_path
    if two_path is None:
        raise ValueError(f"channel check needs d^n <= {cs.MAX_DENSE_DIM}")
    dist = dp.enumerate_distribution(model, n, args.prune_tol)
    channel = cs.dephasing_channel(dist)
    header = [
        "model",
        "param",
        "n",
        "kraus_count",
        "completeness_residual",
        "env_entropy",
        "complementary_entropy",
        "two_path_residual",
        "coherent_info_rate",
    ]
    rows = [
        [
            model.label,
            _fmt(param),
            str(n),
            str(len(channel)),
            _fmt(channel.completeness_residual()),
            _fmt(two_path.env_entropy),
            _fmt(two_path.complementary_entropy),
            _fmt(two_path.residual),
            _fmt(two_path.coherent_info_rate),
        ]
    ]
    _emit_rows(header, rows, args.format, _resolve_output(args.output))
    return 0


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--model", choices=("aklt", "mg", "custom"), required=True,
        help="built-in chain or a custom JSON model",
    )
    parser.add_argument("--theta", type=float, default=None, help="aklt angle (radians)")
    parser.add_argument("--g", type=float, default=None, help="mg coupling in [0,1)")
    parser.add_argument(
        "--theta-ground", action="store_true",
        help="use the aklt ground-state angle acos(sqrt(2/3))",
    )
    parser.add_argument(
        "--g-ground", action="store_true", help="use the mg ground-state coupling 1/2"
    )
    parser.add_argument("--model-file", default=None, help="JSON file for --model custom")


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--prune-tol", type=float, default=dp.DEFAULT_PRUNE_TOL)
    parser.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json", "svg"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpscap",
        description="Quantum capacity of dephasing memory channels with "
        "matrix-product-state environments",
    )
    parser.add_argument("--version", action="version", version=f"mpscap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="capacity estimates for one parameter")
    _add_model_options(p)
    p.add_argument("--n", type=int, default=None, help="string length")
    p.add_argument("--estimator", choices=("avg", "cond", "both"), default="both")
    _add_common_options(p)
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("sweep", help="capacity across a parameter grid")
    p.add_argument("--model", choices=("aklt", "mg"), required=True)
    p.add_argument("--theta", default=None, help="grid start:stop:step (radians)")
    p.add_argument("--g", default=None, help="grid start:stop:step")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--estimator", choices=("avg", "cond", "both"), default="cond")
    _add_common_options(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("spectrum", help="closed-form and enumerated spectra")
    _add_model_options(p)
    p.add_argument("--n", type=int, default=None)
    _add_common_options(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("verify", help="run the cross-check suite")
    p.add_argument("--model", choices=("aklt", "mg", "both"), default="both")
    p.add_argument("--n-max", type=int, default=12)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="pruned vs unpruned enumeration")
    _add_model_options(p)
    p.add_argument("--n", type=int, default=None)
    _add_common_options(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("channel", help="finite-n channel and two-path check")
    _add_model_options(p)
    p.add_argument("--n", type=int, default=None)
    _add_common_options(p)
    p.set_defaults(func=_cmd_channel)

    return parser


def _argv_from_config(path: str, extra: list[str]) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        config: dict[str, Any] = json.load(fh)
    command = config.pop("command", None)
    if not command:
        raise ValueError("config file must contain a 'command' key")
    argv = [str(command)]
    for key, value in config.items():
        flag = "--" + str(key).replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv.extend([flag, str(value)])
    argv.extend(extra)
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    args_list = list(sys.argv[1:] if argv is None else argv)
    if args_list[:1] == ["--config"]:
        if len(args_list) < 2:
            print("--config needs a file path", file=sys.stderr)
            return 2
        try:
            args_list = _argv_from_config(args_list[1], args_list[2:])
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    parser = build_parser()
    try:
        args = parser.parse_args(args_list)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, mk.ConvergenceError, cs.ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
