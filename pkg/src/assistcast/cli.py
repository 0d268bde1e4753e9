"""Command-line entry points for the forecasting and planning pipeline.

Subcommands::

    synth      generate synthetic events/weather/roster/truth files
    ingest     build and persist the station-hour panel (+ sidecar)
    train      grid-search and fit every station x bucket model
    forecast   bucket-routed trajectory CSV (+ figures) for a span
    evaluate   held-out metric table CSV (+ error-by-horizon figure)
    heatmap    RAG heatmap JSON/CSV (+ figure) per station
    serve      run the HTTP API

Report-producing commands write matplotlib figures next to their delimited
outputs unless --no-figures is given.  Failures print a single-line JSON
object to stderr and exit 1; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import pandas as pd

from assistcast import pipeline, report, synth
from assistcast.config import AppConfig, load_config
from assistcast.gam.diagnostics import residual_diagnostics
from assistcast.gam.model import predict

logger = logging.getLogger(__name__)


def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="path to config JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assistcast", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--log-level", default="INFO")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic input files")
    _add_config(p)
    p.add_argument("--spec", type=Path, default=None, help="synth spec JSON (default: built-in)")
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p.add_argument("--out", type=Path, default=None, help="output directory (default: data_dir)")

    p = sub.add_parser("ingest", help="build the station-hour panel")
    _add_config(p)

    p = sub.add_parser("train", help="fit all station x bucket models")
    _add_config(p)

    p = sub.add_parser("forecast", help="forecast a span from an origin")
    _add_config(p)
    p.add_argument("--origin", required=True, help="forecast origin (ISO-8601 UTC)")
    p.add_argument("--from", dest="start", required=True, help="span start hour")
    p.add_argument("--to", dest="end", required=True, help="span end hour (inclusive)")
    p.add_argument("--station", default=None, help="single station (default: all)")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("evaluate", help="held-out evaluation report")
    _add_config(p)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("heatmap", help="RAG heatmap for upcoming days")
    _add_config(p)
    p.add_argument("--days", type=int, default=None)
    p.add_argument("--station", default=None)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("serve", help="run the HTTP API")
    _add_config(p)
    p.add_argument("--port", type=int, default=None)
    return parser


def cmd_synth(args, config: AppConfig) -> int:
    if args.spec is not None:
        spec = synth.SynthSpec.from_dict(json.loads(args.spec.read_text()))
    else:
        spec = synth.default_spec()
    if args.seed is not None:
        from dataclasses import replace

        spec = replace(spec, seed=args.seed)
    out_dir = args.out or config.data_dir
    result = synth.generate(spec, out_dir)
    print(f"wrote {', '.join(str(p) for p in result.paths.values())}")
    return 0


def cmd_ingest(args, config: AppConfig) -> int:
    bundle = pipeline.build_bundle(config)
    pipeline.persist_bundle(bundle, config)
    print(
        f"panel: {len(bundle.panel)} rows, {len(config.stations)} stations, "
        f"{bundle.ingest.n_retained} pre-booked events -> {config.panel_dir}"
    )
    return 0


def cmd_train(args, config: AppConfig) -> int:
    bundle = pipeline.load_bundle(config)
    models = pipeline.train_all(config, bundle)
    pipeline.save_models(config, models, bundle)
    n = sum(len(v) for v in models.values())
    print(f"trained {n} models -> {config.model_dir}")
    return 0


def cmd_forecast(args, config: AppConfig) -> int:
    bundle = pipeline.load_bundle(config)
    models, _, _ = pipeline.load_models(config)
    origin = pipeline.parse_ts(args.origin)
    start, end = pipeline.parse_ts(args.start), pipeline.parse_ts(args.end)
    if end <= origin:
        raise ValueError(f"span end {end} is not after origin {origin}: nothing to forecast")
    stations = [args.station] if args.station else config.stations
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    frames = []
    for station in stations:
        if station not in models:
            raise ValueError(f"no trained models for station {station!r}")
        traj = pipeline.forecast_station(config, bundle, models[station], station, origin, start, end)
        frames.append(traj)
        if not args.no_figures and config.figures:
            fig = report.plot_trajectory(traj, title=f"{station} forecast from {origin}")
            report.save_figure(fig, out_dir / f"forecast_{station}.png")
    combined = pd.concat(frames, ignore_index=True)
    csv_path = out_dir / "trajectory.csv"
    combined.to_csv(csv_path, index=False)
    print(f"wrote {csv_path} ({len(combined)} rows)")
    return 0


def cmd_evaluate(args, config: AppConfig) -> int:
    bundle = pipeline.load_bundle(config)
    models, _, _ = pipeline.load_models(config)
    rep = pipeline.evaluation_report(config, bundle, models)
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "evaluation.csv"
    rep.to_csv(csv_path, index=False)
    print(f"wrote {csv_path} ({len(rep)} rows)")

    if not args.no_figures and config.figures:
        fig = report.plot_error_by_horizon(rep, config.buckets.names)
        report.save_figure(fig, out_dir / "error_by_horizon.png")
        mid_bucket = config.buckets.names[min(3, len(config.buckets) - 1)]
        for station in config.stations:
            test_rows = bundle.station_rows(station, "TEST")
            if len(test_rows) == 0:
                continue
            diag = residual_diagnostics(models[station][mid_bucket], test_rows)
            fig = report.plot_residual_diagnostics(diag, title=f"{station} ({mid_bucket})")
            report.save_figure(fig, out_dir / f"diagnostics_{station}_{mid_bucket}.png")
            _, breakdown = predict(models[station][mid_bucket], test_rows)
            fig = report.plot_components(breakdown, title=f"{station} components ({mid_bucket})")
            report.save_figure(fig, out_dir / f"components_{station}_{mid_bucket}.png")
    return 0


def cmd_heatmap(args, config: AppConfig) -> int:
    bundle = pipeline.load_bundle(config)
    models, _, _ = pipeline.load_models(config)
    roster = pipeline.load_roster(config)
    stations = [args.station] if args.station else config.stations
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    for station in stations:
        if station not in models:
            raise ValueError(f"no trained models for station {station!r}")
        heatmap = pipeline.heatmap_for_station(
            config, bundle, models[station], roster, station, days=args.days
        )
        (out_dir / f"heatmap_{station}.json").write_text(json.dumps(heatmap.to_json_dict(), indent=2))
        csv_frame = heatmap.to_csv_frame()
        csv_frame.to_csv(out_dir / f"heatmap_{station}.csv", index=False)
        if not args.no_figures and config.figures:
            report.save_figure(report.plot_heatmap(heatmap), out_dir / f"heatmap_{station}.png")
        counts = heatmap.class_counts()
        print(f"{station}: {len(heatmap.cells)} cells "
              f"(G {counts['GREEN']} / A {counts['AMBER']} / R {counts['RED']})")
    return 0


def cmd_serve(args, config: AppConfig) -> int:
    import uvicorn

    from assistcast.api import create_app

    port = args.port or config.service_port
    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="info")
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "train": cmd_train,
    "forecast": cmd_forecast,
    "evaluate": cmd_evaluate,
    "heatmap": cmd_heatmap,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except Exception as exc:  # single-line machine-readable failure contract
        print(json.dumps({"error": str(exc), "command": args.command}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
