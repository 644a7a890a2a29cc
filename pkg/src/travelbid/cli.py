"""Command line entry points.

Subcommands:
  experiment    run a multi-game bidding strategy tournament
  predict-eval  score hotel price predictors on self-generated games
  solve         solve one bid instance from a JSON file
  flight-sim    simulate flight price walks and the drift-bound filter

Exit codes: 0 success, 1 runtime failure, 2 bad usage or configuration.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .flight import FlightFilter, FlightParams, sample_walk
from .optimizer import (
    MU_KINDS,
    instance_from_dict,
    mu_strategy,
    solution_to_dict,
    solve_bid_saa,
    solve_evm,
)
from .predicteval import PredictEvalConfig, run_predict_eval
from .simulator import ExperimentConfig, records_to_jsonl, run_experiment


class ConfigError(Exception):
    pass


def _load_config(cls, path: str | None, overrides: dict):
    data = {}
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    fields = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - fields
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    data.update({k: v for k, v in overrides.items() if v is not None and k in fields})
    for key in ("strategies", "minutes"):
        if key in data and isinstance(data[key], list):
            data[key] = tuple(data[key])
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _print_defaults(cls) -> None:
    defaults = dataclasses.asdict(cls())
    print(json.dumps(defaults, indent=2, default=list))


def _write_manifest(outdir: Path, subcommand: str, config_path: str | None, seed: int) -> None:
    digest = ""
    if config_path and Path(config_path).exists():
        digest = hashlib.sha256(Path(config_path).read_bytes()).hexdigest()
    manifest = {
        "subcommand": subcommand,
        "config_path": config_path or "",
        "config_sha256": digest,
        "seed": seed,
        "version": __version__,
        "outdir": str(outdir),
        "created": datetime.now(timezone.utc).isoformat(),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_experiment(args) -> int:
    if args.print_defaults:
        _print_defaults(ExperimentConfig)
        return 0
    cfg = _load_config(
        ExperimentConfig, args.config, {"seed": args.seed, "workers": args.workers}
    )
    result = run_experiment(cfg)
    out = _outdir(args)
    with (out / "results.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["strategy", "n_games", "mean", "ci95"])
        for s in result.summaries:
            writer.writerow([s.strategy, s.n_games, f"{s.mean:.4f}", f"{s.ci95:.4f}"])
    (out / "games.jsonl").write_text(records_to_jsonl(result.records))
    _write_manifest(out, "experiment", args.config, cfg.seed)
    for s in result.summaries:
        print(f"{s.strategy:6s} n={s.n_games:4d} mean={s.mean:9.2f} +-{s.ci95:.2f}")
    return 0


def cmd_predict_eval(args) -> int:
    if args.print_defaults:
        _print_defaults(PredictEvalConfig)
        return 0
    cfg = _load_config(PredictEvalConfig, args.config, {"seed": args.seed})
    rows = run_predict_eval(cfg)
    out = _outdir(args)
    with (out / "metrics.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["game", "minute", "method", "euclidean", "evpp"])
        for r in rows:
            writer.writerow([r.game, r.minute, r.method, f"{r.euclid:.4f}", f"{r.evpp:.4f}"])
    _write_manifest(out, "predict-eval", args.config, cfg.seed)
    print(f"wrote {len(rows)} metric rows for {cfg.n_games} games to {out / 'metrics.csv'}")
    return 0


def cmd_solve(args) -> int:
    if not args.instance:
        raise ConfigError("solve requires an instance file")
    try:
        data = json.loads(Path(args.instance).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read instance {args.instance}: {exc}") from exc
    inst = instance_from_dict(data)
    if args.method == "saa":
        sol = solve_bid_saa(inst)
    elif args.method == "evm":
        sol = solve_evm(inst)
    else:
        sol = mu_strategy(args.method, inst)
    out = _outdir(args)
    payload = solution_to_dict(sol)
    payload["method"] = args.method
    (out / "solution.json").write_text(json.dumps(payload, indent=2) + "\n")
    _write_manifest(out, "solve", args.instance, 0)
    print(f"objective {sol.objective_float:.4f} written to {out / 'solution.json'}")
    return 0


@dataclasses.dataclass
class FlightSimConfig:
    n_flights: int = 8
    seed: int = 0
    horizon: int = 540        # seconds of game time
    report_every: int = 6     # quotes between report rows


def cmd_flight_sim(args) -> int:
    if args.print_defaults:
        _print_defaults(FlightSimConfig)
        return 0
    cfg = _load_config(FlightSimConfig, args.config, {"seed": args.seed})
    params = FlightParams(horizon=cfg.horizon)
    rng = np.random.default_rng(cfg.seed)
    out = _outdir(args)
    failures = 0
    with (out / "flights.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["flight", "true_z", "time", "price", "mode_z", "predicted_min"])
        for f in range(cfg.n_flights):
            z = int(rng.integers(-params.c, params.d + 1))
            try:
                walk = sample_walk(params, z, rng)
                filt = FlightFilter(params)
                for j, price in enumerate(walk.prices):
                    t = j * params.quote_interval
                    filt.observe_price(t, price)
                    if j and j % cfg.report_every == 0 and t < params.horizon:
                        writer.writerow(
                            [f, z, t, price, filt.mode(), f"{filt.predict_min():.2f}"]
                        )
            except Exception as exc:
                if not args.keep_going:
                    raise
                failures += 1
                print(f"flight {f} failed: {exc}", file=sys.stderr)
    _write_manifest(out, "flight-sim", args.config, cfg.seed)
    print(f"simulated {cfg.n_flights} flights ({failures} failures) into {out}")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="travelbid")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--keep-going", action="store_true")
        p.add_argument("--print-defaults", action="store_true")
        if seed:
            p.add_argument("--seed", type=int)

    p = sub.add_parser("experiment", help="run a strategy tournament")
    common(p)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("predict-eval", help="evaluate hotel price predictors")
    common(p)
    p.set_defaults(func=cmd_predict_eval)

    p = sub.add_parser("solve", help="solve a bid instance")
    common(p, seed=False)
    p.add_argument("--instance", help="bid instance JSON file")
    p.add_argument(
        "--method", default="saa", choices=("saa", "evm") + MU_KINDS
    )
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("flight-sim", help="simulate flight prices and the filter")
    common(p)
    p.set_defaults(func=cmd_flight_sim)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
