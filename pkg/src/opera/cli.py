"""Command-line front end: validate, discover, analyze, dot, serve.

Exit codes: 0 success, 1 usage error, 2 data error, 3 non-fitting log.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .discovery import discover_ocpn
from .errors import NonFittingLog, NonFittingTrace, OperaError
from .metrics import (
    AGGREGATIONS,
    all_measures,
    analyze,
    dot_annotations,
    expand_measures,
    report_to_json,
)
from .ocel import OCEL
from .ocel_io import FORMATS, import_log
from .ocpn import OCPN, model_from_json, model_to_json
from .timefmt import format_rfc3339, parse_point
from .viz import to_dot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NON_FITTING = 3


def _infer_format(path: str) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    mapped = {"jsonocel": "json", "xmlocel": "xml"}.get(suffix, suffix)
    if mapped not in FORMATS:
        raise click.UsageError(f"cannot infer log format from {path!r}; pass --format")
    return mapped


def _read_log(path: str, fmt: str | None) -> OCEL:
    data = Path(path).read_bytes()
    return import_log(data, fmt or _infer_format(path))


def _read_model(path: str | None, log: OCEL) -> OCPN:
    if path is None:
        return discover_ocpn(log)
    return model_from_json(Path(path).read_bytes())


def _write_out(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


def _window(window_from: str | None, window_to: str | None) -> tuple[float, float] | None:
    if window_from is None and window_to is None:
        return None
    if window_from is None or window_to is None:
        raise click.UsageError("--from and --to must be given together")
    return (parse_point(window_from), parse_point(window_to))


format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default=None,
    help="Log format; inferred from the file extension when omitted.",
)
model_option = click.option(
    "--model", "model_path", type=click.Path(exists=True, dir_okay=False),
    default=None, help="Model JSON; discovered from the log when omitted.",
)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="Output file (default: stdout).")
from_option = click.option("--from", "window_from", default=None,
                           help="Window start (RFC 3339 or epoch seconds).")
to_option = click.option("--to", "window_to", default=None,
                         help="Window end (RFC 3339 or epoch seconds).")


@click.group()
def cli() -> None:
    """Object-centric process performance analysis."""


@cli.command()
@click.argument("input", type=click.Path(exists=True, dir_okay=False))
@format_option
def validate(input: str, fmt: str | None) -> None:
    """Parse a log and print its statistics."""
    log = _read_log(input, fmt)
    per_type: dict[str, int] = {}
    for ot in log.objects.values():
        per_type[ot] = per_type.get(ot, 0) + 1
    span = log.time_span()
    stats = {
        "events": len(log.events),
        "objects": len(log.objects),
        "object_types": dict(sorted(per_type.items())),
        "activities": sorted({e.act for e in log.events}),
        "time_span": None if span is None else {
            "from": format_rfc3339(span[0]),
            "to": format_rfc3339(span[1]),
        },
    }
    click.echo(json.dumps(stats, sort_keys=True, indent=2))


@cli.command()
@click.argument("input", type=click.Path(exists=True, dir_okay=False))
@format_option
@out_option
def discover(input: str, fmt: str | None, out: str | None) -> None:
    """Discover a model and write it as model JSON."""
    log = _read_log(input, fmt)
    _write_out(model_to_json(discover_ocpn(log)), out)


@cli.command("analyze")
@click.argument("input", type=click.Path(exists=True, dir_okay=False))
@format_option
@model_option
@click.option("--measures", default=None,
              help="Comma-separated measure keys (default: all).")
@click.option("--aggregations", default=",".join(AGGREGATIONS),
              help="Comma-separated aggregations (validated).")
@from_option
@to_option
@out_option
def analyze_cmd(input: str, fmt: str | None, model_path: str | None,
                measures: str | None, aggregations: str,
                window_from: str | None, window_to: str | None,
                out: str | None) -> None:
    """Replay a log on a model and write the performance report JSON."""
    log = _read_log(input, fmt)
    net = _read_model(model_path, log)
    for agg in aggregations.split(","):
        if agg and agg not in AGGREGATIONS:
            raise click.UsageError(f"unknown aggregation {agg!r}")
    if measures is None:
        kinds = all_measures(log.object_types)
    else:
        kinds = expand_measures([m for m in measures.split(",") if m], log.object_types)
    report = analyze(log, net, kinds, window=_window(window_from, window_to))
    _write_out(report_to_json(report), out)


@cli.command()
@click.argument("input", type=click.Path(exists=True, dir_okay=False))
@format_option
@model_option
@click.option("--measures", "measure", default=None,
              help="Single measure key to annotate transitions with.")
@click.option("--aggregations", "aggregation", default="mean",
              type=click.Choice(AGGREGATIONS),
              help="Aggregation used for the annotation.")
@from_option
@to_option
@out_option
def dot(input: str, fmt: str | None, model_path: str | None, measure: str | None,
        aggregation: str, window_from: str | None, window_to: str | None,
        out: str | None) -> None:
    """Export the model as DOT, optionally annotated with one measure."""
    log = _read_log(input, fmt)
    net = _read_model(model_path, log)
    annotations: dict[str, str] = {}
    if measure is not None:
        if "," in measure:
            raise click.UsageError("dot annotates exactly one measure")
        kinds = expand_measures([measure], log.object_types)
        report = analyze(log, net, kinds, window=_window(window_from, window_to))
        annotated = dot_annotations(report.to_json_dict(), kinds[0].key(), aggregation)
        annotations = annotated or {}
    _write_out(to_dot(net, annotations).encode("utf-8"), out)


@cli.command()
def serve() -> None:
    """Run the HTTP service (configured via OPERA_DATA_DIR, OPERA_PORT)."""
    from .service import main as service_main

    service_main()


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="opera", standalone_mode=False)
        return EXIT_OK
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return EXIT_USAGE
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except (NonFittingLog, NonFittingTrace) as exc:
        click.echo(f"non-fitting log: {exc}", err=True)
        return EXIT_NON_FITTING
    except OperaError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return EXIT_DATA
    except OSError as exc:
        click.echo(str(exc), err=True)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
