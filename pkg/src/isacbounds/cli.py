"""Command-line entry point: sweeps, oracle checks and result emission.

Every run writes its outputs plus a manifest echoing the fully resolved
configuration; `isacbounds replay <manifest>` re-executes that configuration
and reproduces the output files byte-identically.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .array_model import Target, sjb_beamformer, steered_beamformer, steering_vector
from .bounds import zzb_closed, zzb_numeric_oracle
from .comm_rate import ergodic_rate_closed
from .config import ConfigBundle, config_from_dict, default_config, load_config
from .errors import ConfigError, IsacBoundsError
from .experiments import SweepRow, alpha_sweep, bound_vs_snr_sweep, pareto_sweep
from .svgplot import AxesSpec, write_svg_plot
from .tables import atomic_write_text, write_table

_SUBCOMMANDS = ("bounds-sweep", "alpha-sweep", "pareto", "oracle-check", "rate", "replay")


class _Parser(argparse.ArgumentParser):
    """argparse with the documented failure contract: usage on stderr, exit 1."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept "-30,0" style dB lists as values, not flags
        self._negative_number_matcher = re.compile(r"^-\d+[\d.,]*$")

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _db_tag(value: float) -> str:
    body = f"{abs(value):g}".replace(".", "p")
    return ("m" if value < 0 else "") + body + "db"


def _parse_db_list(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"flag {flag}: expected comma-separated numbers, got {text!r}") from exc


def _load_bundle(config_path: str | None, seed: int | None) -> ConfigBundle:
    bundle = load_config(config_path) if config_path else default_config()
    if seed is not None:
        echo = dict(bundle.echo)
        echo["master_seed"] = int(seed)
        bundle = config_from_dict(echo)
    return bundle


def _write_manifest(path: str, subcommand: str, resolved: dict, outputs: list, wall: float):
    manifest = {
        "tool": "isacbounds",
        "version": __version__,
        "subcommand": subcommand,
        "resolved": resolved,
        "outputs": outputs,
        "wall_time_s": round(wall, 6),
    }
    atomic_write_text(path, json.dumps(manifest, indent=2) + "\n")


def _rows_series(rows, columns):
    series = []
    for label, attr in columns:
        pts = [(r.x, getattr(r, attr)) for r in rows if getattr(r, attr) is not None]
        series.append((label, pts))
    return series


def _execute(subcommand: str, resolved: dict, out_dir: str, workers: int) -> list:
    """Run one subcommand from its resolved parameter set; returns the output
    descriptors for the manifest."""
    bundle = config_from_dict(resolved["config"])
    cfg = bundle.experiment
    fmt = resolved.get("format", "csv")
    want_svg = resolved.get("svg", False)
    ext = "csv" if fmt == "csv" else "json"
    outputs = []

    def table_path(stem: str) -> str:
        return f"{out_dir}/{stem}.{ext}"

    if subcommand == "bounds-sweep":
        rows = bound_vs_snr_sweep(cfg, workers=workers)
        path = table_path("bounds_sweep")
        write_table(rows, fmt, path)
        outputs.append({"path": path, "rows": len(rows), "n_excluded": [r.n_excluded for r in rows]})
        if want_svg:
            svg = f"{out_dir}/bounds_sweep.svg"
            write_svg_plot(
                _rows_series(rows, [("ZZB", "zzb_rmse_deg"), ("CRB", "crb_rmse_deg"), ("APB", "apb_rmse_deg")]),
                AxesSpec("AoA RMSE bounds vs sensing SNR", "sensing SNR (dB)", "RMSE (deg)", log_y=True),
                svg,
            )
            outputs.append({"path": svg})

    elif subcommand == "alpha-sweep":
        comm_db = resolved["comm_snr_db"]
        sensing_list = resolved["sensing_snr_db"]
        per_snr = alpha_sweep(cfg, comm_db, sensing_list)
        for snr_db, rows in per_snr.items():
            path = table_path(f"alpha_sweep_{_db_tag(snr_db)}")
            write_table(rows, fmt, path)
            outputs.append({"path": path, "rows": len(rows), "n_excluded": [r.n_excluded for r in rows]})
        if want_svg:
            svg = f"{out_dir}/alpha_sweep_zzb.svg"
            series = [
                (f"ZZB @ {snr_db:g} dB", [(r.x, r.zzb_rmse_deg) for r in rows])
                for snr_db, rows in per_snr.items()
            ]
            write_svg_plot(
                series,
                AxesSpec("ZZB RMSE vs beamforming parameter", "alpha", "RMSE (deg)", log_y=True),
                svg,
            )
            outputs.append({"path": svg})
            svg = f"{out_dir}/alpha_sweep_rate.svg"
            first_rows = next(iter(per_snr.values()))
            write_svg_plot(
                [("rate", [(r.x, r.rate_bps_hz) for r in first_rows])],
                AxesSpec("Communication rate vs beamforming parameter", "alpha", "rate (bps/Hz)"),
                svg,
            )
            outputs.append({"path": svg})

    elif subcommand == "pareto":
        sensing_db = resolved["sensing_snr_db"]
        comm_list = resolved["comm_snr_db"]
        fronts = pareto_sweep(cfg, sensing_db, comm_list)
        apb_deg = math.degrees(
            math.sqrt(
                cfg.scenario.n_targets
                * cfg.scenario.prior_range**2
                / ((cfg.scenario.n_targets + 1) ** 2 * (cfg.scenario.n_targets + 2))
            )
        )
        for comm_db, front in fronts.items():
            rows = [
                SweepRow(
                    x=p.alpha,
                    zzb_rmse_deg=p.zzb_rmse_deg,
                    crb_rmse_deg=p.crb_rmse_deg,
                    apb_rmse_deg=apb_deg,
                    rate_bps_hz=p.rate_bps_hz,
                    n_trials=1,
                    n_excluded=0,
                )
                for p in front
            ]
            path = table_path(f"pareto_{_db_tag(comm_db)}")
            write_table(rows, fmt, path)
            outputs.append({"path": path, "rows": len(rows), "n_excluded": [0] * len(rows)})
        if want_svg:
            svg = f"{out_dir}/pareto.svg"
            series = [
                (f"comm {comm_db:g} dB", [(p.rate_bps_hz, p.zzb_rmse_deg) for p in front])
                for comm_db, front in fronts.items()
            ]
            write_svg_plot(
                series,
                AxesSpec("Rate-sensing Pareto fronts", "rate (bps/Hz)", "ZZB RMSE (deg)", log_y=True),
                svg,
            )
            outputs.append({"path": svg})

    elif subcommand == "oracle-check":
        snr_db = resolved["snr_db"]
        s = cfg.scenario
        if s.n_targets != 1:
            raise ConfigError("oracle-check requires a single-target configuration")
        target = s.targets[0]
        w = steered_beamformer(target.theta_s, s.m_tx, s.power_budget)
        gain = abs(np.vdot(steering_vector(target.theta_s, s.m_tx), w.weights)) ** 2
        eta = 10.0 ** (snr_db / 10.0)
        mag = math.sqrt(eta * s.noise_var_sense / gain)
        centered = replace(s, targets=(Target(mag, target.theta_s, 0.0),))
        closed = zzb_closed(centered, w).zzb
        numeric = zzb_numeric_oracle(centered, w)
        rel = abs(closed - numeric) / numeric
        print(
            f"sensing SNR {snr_db:g} dB: closed-form ZZB = {closed:.9g} rad^2, "
            f"numeric oracle = {numeric:.9g} rad^2, relative error = {rel:.4%}"
        )
        path = f"{out_dir}/oracle_check.json"
        atomic_write_text(
            path,
            json.dumps(
                {
                    "snr_db": snr_db,
                    "zzb_closed_rad2": float(f"{closed:.12g}"),
                    "zzb_numeric_rad2": float(f"{numeric:.12g}"),
                    "relative_error": float(f"{rel:.12g}"),
                },
                indent=2,
            )
            + "\n",
        )
        outputs.append({"path": path})

    elif subcommand == "rate":
        comm_list = resolved["comm_snr_db"]
        alpha = resolved["alpha"]
        sensing_db = resolved["sensing_snr_db"]
        s = cfg.scenario
        if s.n_targets != 1:
            raise ConfigError("rate requires a single-target configuration")
        rows = []
        per_alpha = alpha_sweep(
            replace(cfg, alpha_grid=(alpha,)), comm_list[0], [sensing_db]
        )[float(sensing_db)]
        bounds_row = per_alpha[0]
        for comm_db in comm_list:
            gain_c = abs(
                np.vdot(
                    steering_vector(s.theta_c, s.m_tx),
                    sjb_beamformer(alpha, s.theta_c, s.targets[0].theta_s, s.m_tx, s.power_budget).weights,
                )
            ) ** 2
            rho = 10.0 ** (comm_db / 10.0) * gain_c / (s.power_budget * s.m_tx)
            rows.append(
                SweepRow(
                    x=comm_db,
                    zzb_rmse_deg=bounds_row.zzb_rmse_deg,
                    crb_rmse_deg=bounds_row.crb_rmse_deg,
                    apb_rmse_deg=bounds_row.apb_rmse_deg,
                    rate_bps_hz=ergodic_rate_closed(rho) if rho > 0 else 0.0,
                    n_trials=1,
                    n_excluded=0,
                )
            )
        path = table_path("rate")
        write_table(rows, fmt, path)
        outputs.append({"path": path, "rows": len(rows), "n_excluded": [0] * len(rows)})

    else:  # pragma: no cover
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    return outputs


def run(argv) -> int:
    """Parse arguments, execute one subcommand, write results + manifest.

    Exit codes: 0 success, 1 configuration/usage error, 2 runtime error.
    """
    parser = _Parser(prog="isacbounds", description=__doc__)
    parser.add_argument("--version", action="version", version=f"isacbounds {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (defaults fill absent keys)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--workers", type=int, default=1, help="trial-level worker threads")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--svg", action="store_true", help="also emit SVG plots")

    common(sub.add_parser("bounds-sweep", help="RMSE bounds vs sensing SNR (Fig. 2 style)"))

    p = sub.add_parser("alpha-sweep", help="rate and bounds vs SJB alpha (Figs. 3-4 style)")
    common(p)
    p.add_argument("--comm-snr-db", type=float, default=None)
    p.add_argument("--sensing-snr-db", default="-30,-20,-10,0", help="comma-separated dB list")

    p = sub.add_parser("pareto", help="rate-sensing Pareto fronts (Fig. 5 style)")
    common(p)
    p.add_argument("--sensing-snr-db", type=float, default=-10.0)
    p.add_argument("--comm-snr-db", default="0,10,20", help="comma-separated dB list")

    p = sub.add_parser("oracle-check", help="closed-form vs numeric-integration ZZB")
    common(p)
    p.add_argument("--snr-db", type=float, default=10.0)

    p = sub.add_parser("rate", help="ergodic rate vs communication SNR")
    common(p)
    p.add_argument("--comm-snr-db", default="0,2,4,6,8,10,12,14,16,18,20")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--sensing-snr-db", type=float, default=-10.0)

    p = sub.add_parser("replay", help="re-run a manifest and reproduce its outputs")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="output directory (default: manifest directory)")
    p.add_argument("--workers", type=int, default=1)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.subcommand == "replay":
            with open(args.manifest, "r", encoding="utf-8") as fh:
                manifest = json.load(fh)
            subcommand = manifest["subcommand"]
            resolved = manifest["resolved"]
            out_dir = args.out
            if out_dir is None:
                out_dir = os.path.dirname(os.path.abspath(args.manifest))
            t0 = time.perf_counter()
            outputs = _execute(subcommand, resolved, out_dir, args.workers)
            stem = subcommand.replace("-", "_")
            _write_manifest(
                f"{out_dir}/{stem}_manifest.json", subcommand, resolved, outputs, time.perf_counter() - t0
            )
            return 0

        bundle = _load_bundle(args.config, args.seed)
        resolved = {"config": bundle.echo, "format": args.format, "svg": bool(args.svg)}
        if args.subcommand == "alpha-sweep":
            resolved["comm_snr_db"] = (
                bundle.comm_snr_db if args.comm_snr_db is None else float(args.comm_snr_db)
            )
            resolved["sensing_snr_db"] = _parse_db_list(args.sensing_snr_db, "--sensing-snr-db")
        elif args.subcommand == "pareto":
            resolved["sensing_snr_db"] = float(args.sensing_snr_db)
            resolved["comm_snr_db"] = _parse_db_list(args.comm_snr_db, "--comm-snr-db")
        elif args.subcommand == "oracle-check":
            resolved["snr_db"] = float(args.snr_db)
        elif args.subcommand == "rate":
            resolved["comm_snr_db"] = _parse_db_list(args.comm_snr_db, "--comm-snr-db")
            resolved["alpha"] = float(args.alpha)
            resolved["sensing_snr_db"] = float(args.sensing_snr_db)

        t0 = time.perf_counter()
        outputs = _execute(args.subcommand, resolved, args.out, args.workers)
        stem = args.subcommand.replace("-", "_")
        _write_manifest(
            f"{args.out}/{stem}_manifest.json",
            args.subcommand,
            resolved,
            outputs,
            time.perf_counter() - t0,
        )
        return 0
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except (IsacBoundsError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"runtime error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
