"""Command line front end.

Subcommands: tangle (segment one file), sweep (several window widths plus
a summary CSV), layout (coordinates included), eval (price coincidence
table), synth (seeded synthetic data).  Exit codes: 0 on success, 1 on
usage errors, 2 on malformed input files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .emit import DEFAULT_KEY_EVENTS, emit_dot, emit_json
from .errors import (
    EmptyBasketError,
    EmptyEvaluationError,
    EmptySequenceError,
    ParseError,
)
from .evaluator import (
    EvalParams,
    RegimeSpec,
    SyntheticSpec,
    coincidence_table,
    generate_synthetic,
)
from .ingest import FormatOptions, parse_baskets, parse_prices
from .layout import LayoutParams, assign_positions, stretch
from .tangler import BASKET, PLAIN, TangleParams, sweep, tangle

USAGE_EXIT = 1
PARSE_EXIT = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would sys.exit(2); route usage problems to exit code 1 instead
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _window_list(text: str) -> list[int]:
    """Accept '3..6' or '3,4,5'."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            start, stop = int(low), int(high)
            if stop < start:
                raise ValueError
            values = list(range(start, stop + 1))
        else:
            values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected N..M or a comma list of integers, got {text!r}"
        ) from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("window widths must all be >= 1")
    return values


def _delta_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("deltas must all be positive")
    return values


def _add_input_options(parser: argparse.ArgumentParser):
    parser.add_argument("--input", required=True, help="basket CSV file")
    parser.add_argument(
        "--delimiter", default=",", choices=[",", "\t"], help="cell delimiter (default comma)"
    )
    parser.add_argument("--header", action="store_true", help="skip the first row")
    parser.add_argument(
        "--date-style",
        default="auto",
        choices=["auto", "iso", "dotted"],
        help="accepted date format (default auto)",
    )


def _read_sequence(args):
    options = FormatOptions(
        delimiter=args.delimiter, has_header=args.header, date_style=args.date_style
    )
    with open(args.input, encoding="utf-8", errors="replace", newline="") as handle:
        return parse_baskets(handle, options)


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _layout_params(args) -> LayoutParams:
    return LayoutParams(
        a=args.extension_a,
        stretch_iterations=args.stretch_iterations,
        stretch_step=args.stretch_step,
    )


def _render(result, args, with_layout: bool) -> str:
    params = _layout_params(args)
    layout = None
    if with_layout or args.format == "dot":
        layout = assign_positions(result.sequence, result, params)
        if params.stretch_iterations:
            layout = stretch(layout, params)
    if args.format == "dot":
        return emit_dot(result, layout)
    return emit_json(result, layout, key_events=args.key_events)


def _cmd_tangle(args) -> int:
    seq = _read_sequence(args)
    result = tangle(seq, TangleParams(args.window, args.variant))
    _write_text(args.out, _render(result, args, with_layout=False))
    return 0


def _cmd_layout(args) -> int:
    seq = _read_sequence(args)
    result = tangle(seq, TangleParams(args.window, args.variant))
    _write_text(args.out, _render(result, args, with_layout=True))
    return 0


def _cmd_sweep(args) -> int:
    seq = _read_sequence(args)
    results = sweep(seq, args.windows, variant=args.variant)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for window in sorted(results):
        (out_dir / f"tangle_w{window}.json").write_text(
            emit_json(results[window], key_events=args.key_events), encoding="utf-8"
        )
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["window", "pill_count", "mean_span", "time_resolution"])
    for window in sorted(results):
        pills = results[window].pills
        if pills:
            mean_span = sum(p.span for p in pills) / len(pills)
            resolution = seq.basket_count / len(pills)
            writer.writerow([window, len(pills), f"{mean_span:.3f}", f"{resolution:.3f}"])
        else:
            writer.writerow([window, 0, "", ""])
    (out_dir / "sweep_summary.csv").write_text(buffer.getvalue(), encoding="utf-8")
    return 0


def _cmd_eval(args) -> int:
    seq = _read_sequence(args)
    with open(args.prices, encoding="utf-8", errors="replace", newline="") as handle:
        prices = parse_prices(handle, delimiter=args.delimiter)
    params = EvalParams(
        windows=tuple(args.windows),
        deltas_months=tuple(args.deltas),
        sigma_rule=not args.no_sigma,
        comparison=args.comparison,
    )
    table = coincidence_table(seq, prices, params)
    if args.format == "json":
        _write_text(args.out, json.dumps(table.to_dict(), sort_keys=True, indent=2) + "\n")
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["role", "delta_months", "metric", "count", "fraction"])
        for role, delta, metric, count, fraction in table.to_rows():
            writer.writerow([role, delta, metric, count, f"{fraction:.4f}"])
        _write_text(args.out, buffer.getvalue())
    return 0


def _load_synth_spec(path: str, seed_override: int | None) -> SyntheticSpec:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None
    try:
        regimes = tuple(
            RegimeSpec(
                vocabulary=tuple(str(t) for t in regime["vocabulary"]),
                length_baskets=int(regime["length_baskets"]),
                repeat_rate=float(regime.get("repeat_rate", 0.6)),
            )
            for regime in raw["regimes"]
        )
        spec = SyntheticSpec(
            regimes=regimes,
            noise_rate=float(raw.get("noise_rate", 0.0)),
            seed=int(raw.get("seed", 0)) if seed_override is None else seed_override,
            basket_size=int(raw.get("basket_size", 5)),
            start_date=raw.get("start_date", "2000-01-07"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad synthetic spec in {path}: {exc}") from None
    return spec


def _cmd_synth(args) -> int:
    spec = _load_synth_spec(args.spec, args.seed)
    seq, boundaries = generate_synthetic(spec)
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    for k, basket in enumerate(seq.baskets()):
        label = seq.time_label(k) or str(k)
        writer.writerow([label] + [event.token for event in basket])
    _write_text(args.out, buffer.getvalue())
    if args.boundaries_out:
        _write_text(
            args.boundaries_out,
            json.dumps({"boundaries": boundaries}, sort_keys=True, indent=2) + "\n",
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tangled", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub, formats):
        _add_input_options(sub)
        sub.add_argument("--variant", default=BASKET, choices=[PLAIN, BASKET])
        sub.add_argument("--format", default=formats[0], choices=list(formats))
        sub.add_argument("--out", default=None, help="output file (default stdout)")
        sub.add_argument("--key-events", type=_positive_int, default=DEFAULT_KEY_EVENTS)
        sub.add_argument("--extension-a", type=float, default=1.0, help="extrapolation gain")
        sub.add_argument("--stretch-iterations", type=int, default=0)
        sub.add_argument("--stretch-step", type=float, default=0.05)

    sub = subparsers.add_parser("tangle", help="segment one basket file")
    add_common(sub, ("json", "dot"))
    sub.add_argument("--window", type=_positive_int, required=True)
    sub.set_defaults(handler=_cmd_tangle)

    sub = subparsers.add_parser("layout", help="segment and embed in the plane")
    add_common(sub, ("json", "dot"))
    sub.add_argument("--window", type=_positive_int, required=True)
    sub.set_defaults(handler=_cmd_layout)

    sub = subparsers.add_parser("sweep", help="tangle at several window widths")
    _add_input_options(sub)
    sub.add_argument("--variant", default=BASKET, choices=[PLAIN, BASKET])
    sub.add_argument("--windows", type=_window_list, required=True, help="N..M or comma list")
    sub.add_argument("--out-dir", default=".", help="directory for documents and summary")
    sub.add_argument("--key-events", type=_positive_int, default=DEFAULT_KEY_EVENTS)
    sub.set_defaults(handler=_cmd_sweep)

    sub = subparsers.add_parser("eval", help="price coincidence table for change points")
    _add_input_options(sub)
    sub.add_argument("--prices", required=True, help="date,symbol,price CSV")
    sub.add_argument("--windows", type=_window_list, default=[3, 4, 5, 6])
    sub.add_argument("--deltas", type=_delta_list, default=[3.0, 6.0, 12.0, 24.0],
                     help="horizons in months")
    sub.add_argument("--no-sigma", action="store_true", help="drop the sigma rule rows")
    sub.add_argument("--comparison", default="mean", choices=["mean", "endpoint"])
    sub.add_argument("--format", default="csv", choices=["csv", "json"])
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_eval)

    sub = subparsers.add_parser("synth", help="generate seeded synthetic baskets")
    sub.add_argument("--spec", required=True, help="JSON recipe file")
    sub.add_argument("--seed", type=int, default=None, help="override the spec seed")
    sub.add_argument("--out", default=None, help="basket CSV (default stdout)")
    sub.add_argument("--boundaries-out", default=None, help="planted boundaries JSON")
    sub.set_defaults(handler=_cmd_synth)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    try:
        return args.handler(args)
    except (ParseError, EmptyBasketError, EmptySequenceError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return PARSE_EXIT
    except (EmptyEvaluationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
