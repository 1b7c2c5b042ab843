"""JSON configuration ingestion with defaults and validation.

Angles are degrees in the file (keys carry a _deg suffix) and radians inside.
Unknown keys are rejected so typos fail loudly with the offending key path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .array_model import Scenario, Target
from .errors import ConfigError
from .experiments import ExperimentConfig

_TOP_KEYS = {
    "m_tx",
    "m_rx",
    "snapshots",
    "n_trials",
    "master_seed",
    "prior_range_deg",
    "min_separation",
    "noise_var_sense",
    "noise_var_comm",
    "power_budget",
    "targets",
    "comm",
    "snr_grid_db",
    "alpha_grid",
}
_TARGET_KEYS = {"theta_s_deg", "theta_r_deg", "gamma"}
_COMM_KEYS = {"theta_c_deg", "snr_db"}
_GRID_KEYS = {"start", "stop", "step"}


@dataclass(frozen=True)
class ConfigBundle:
    """Validated experiment config plus the comm SNR and a replayable echo."""

    experiment: ExperimentConfig
    comm_snr_db: float
    echo: dict


def _require(cond: bool, key: str, constraint: str) -> None:
    if not cond:
        raise ConfigError(f"config key '{key}': {constraint}")


def _number(raw: dict, key: str, default, *, path: str = ""):
    value = raw.get(key, default)
    full = f"{path}{key}"
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), full, "must be a number")
    return value


def _grid(raw, key: str, default: tuple[float, ...]) -> tuple[float, ...]:
    if key not in raw:
        return default
    spec = raw[key]
    if isinstance(spec, list):
        _require(len(spec) > 0, key, "grid list must be nonempty")
        _require(
            all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in spec),
            key,
            "grid entries must be numbers",
        )
        return tuple(float(v) for v in spec)
    _require(isinstance(spec, dict), key, "must be a list or {start, stop, step}")
    unknown = set(spec) - _GRID_KEYS
    _require(not unknown, key, f"unknown grid keys {sorted(unknown)}")
    for sub in ("start", "stop", "step"):
        _require(sub in spec, f"{key}.{sub}", "is required in a grid spec")
    start, stop, step = (float(spec[k]) for k in ("start", "stop", "step"))
    _require(step > 0, f"{key}.step", "must be > 0")
    _require(stop >= start, f"{key}.stop", "must be >= start")
    n = int(round((stop - start) / step))
    grid = tuple(start + i * step for i in range(n + 1))
    _require(abs(grid[-1] - stop) < 1e-9, key, "step must divide (stop - start)")
    return grid


def config_from_dict(raw: dict) -> ConfigBundle:
    """Build a validated ConfigBundle from a parsed JSON object."""
    if not isinstance(raw, dict):
        raise ConfigError("top-level config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    _require(not unknown, ", ".join(sorted(unknown)), "unknown key(s)")

    m_tx = int(_number(raw, "m_tx", 8))
    m_rx = int(_number(raw, "m_rx", 8))
    snapshots = int(_number(raw, "snapshots", 100))
    n_trials = int(_number(raw, "n_trials", 500))
    master_seed = int(_number(raw, "master_seed", 1))
    prior_range_deg = float(_number(raw, "prior_range_deg", 60.0))
    noise_var_sense = float(_number(raw, "noise_var_sense", 1.0))
    noise_var_comm = float(_number(raw, "noise_var_comm", 1.0))
    power_budget = float(_number(raw, "power_budget", 1.0))

    _require(m_tx >= 1, "m_tx", "must be >= 1")
    _require(m_rx >= 2, "m_rx", "must be >= 2")
    _require(snapshots >= 1, "snapshots", "must be >= 1")
    _require(n_trials >= 1, "n_trials", "must be >= 1")
    _require(noise_var_sense > 0, "noise_var_sense", "must be > 0")
    _require(noise_var_comm > 0, "noise_var_comm", "must be > 0")
    _require(power_budget > 0, "power_budget", "must be > 0")
    _require(0 < prior_range_deg <= 180.0, "prior_range_deg", "must lie in (0, 180]")

    min_separation = float(_number(raw, "min_separation", 2.0 / m_rx))
    _require(min_separation >= 0, "min_separation", "must be >= 0")

    targets_raw = raw.get("targets", [{"theta_s_deg": 5.0, "theta_r_deg": 15.0}])
    _require(isinstance(targets_raw, list) and targets_raw, "targets", "must be a nonempty list")
    targets = []
    for i, t in enumerate(targets_raw):
        path = f"targets[{i}]."
        _require(isinstance(t, dict), f"targets[{i}]", "must be an object")
        unknown = set(t) - _TARGET_KEYS
        _require(not unknown, f"targets[{i}]", f"unknown key(s) {sorted(unknown)}")
        theta_s_deg = float(_number(t, "theta_s_deg", 5.0, path=path))
        _require("theta_r_deg" in t, f"{path}theta_r_deg", "is required")
        theta_r_deg = float(_number(t, "theta_r_deg", None, path=path))
        gamma = float(_number(t, "gamma", 1.0, path=path))
        _require(abs(theta_s_deg) < 90.0, f"{path}theta_s_deg", "must lie in (-90, 90)")
        _require(abs(theta_r_deg) < 90.0, f"{path}theta_r_deg", "must lie in (-90, 90)")
        _require(
            abs(theta_r_deg) <= prior_range_deg / 2.0,
            f"{path}theta_r_deg",
            f"must lie inside the prior [-{prior_range_deg / 2}, {prior_range_deg / 2}] deg",
        )
        _require(gamma != 0, f"{path}gamma", "must be nonzero")
        targets.append(
            Target(gamma, math.radians(theta_s_deg), math.radians(theta_r_deg))
        )

    comm_raw = raw.get("comm", {})
    _require(isinstance(comm_raw, dict), "comm", "must be an object")
    unknown = set(comm_raw) - _COMM_KEYS
    _require(not unknown, "comm", f"unknown key(s) {sorted(unknown)}")
    theta_c_deg = float(_number(comm_raw, "theta_c_deg", 45.0, path="comm."))
    comm_snr_db = float(_number(comm_raw, "snr_db", 20.0, path="comm."))
    _require(abs(theta_c_deg) < 90.0, "comm.theta_c_deg", "must lie in (-90, 90)")

    snr_grid = _grid(raw, "snr_grid_db", tuple(float(x) for x in range(-40, 12, 2)))
    alpha_grid = _grid(raw, "alpha_grid", tuple(round(0.02 * i, 10) for i in range(51)))
    _require(all(0.0 <= a <= 1.0 for a in alpha_grid), "alpha_grid", "entries must lie in [0, 1]")

    try:
        scenario = Scenario(
            m_tx=m_tx,
            m_rx=m_rx,
            snapshots=snapshots,
            targets=tuple(targets),
            noise_var_sense=noise_var_sense,
            noise_var_comm=noise_var_comm,
            power_budget=power_budget,
            prior_range=math.radians(prior_range_deg),
            theta_c=math.radians(theta_c_deg),
        )
        experiment = ExperimentConfig(
            scenario=scenario,
            snr_grid_db=snr_grid,
            alpha_grid=alpha_grid,
            n_trials=n_trials,
            master_seed=master_seed,
            min_separation=min_separation,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    echo = {
        "m_tx": m_tx,
        "m_rx": m_rx,
        "snapshots": snapshots,
        "n_trials": n_trials,
        "master_seed": master_seed,
        "prior_range_deg": prior_range_deg,
        "min_separation": min_separation,
        "noise_var_sense": noise_var_sense,
        "noise_var_comm": noise_var_comm,
        "power_budget": power_budget,
        "targets": [
            {
                "theta_s_deg": math.degrees(t.theta_s),
                "theta_r_deg": math.degrees(t.theta_r),
                "gamma": abs(t.gamma),
            }
            for t in targets
        ],
        "comm": {"theta_c_deg": theta_c_deg, "snr_db": comm_snr_db},
        "snr_grid_db": list(snr_grid),
        "alpha_grid": list(alpha_grid),
    }
    return ConfigBundle(experiment=experiment, comm_snr_db=comm_snr_db, echo=echo)


def load_config(path: str) -> ConfigBundle:
    """Parse and validate a JSON config file; defaults fill absent keys."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def default_config() -> ConfigBundle:
    """The built-in defaults (8x8 ULA, L=100, 500 trials, 60 deg prior)."""
    return config_from_dict({})
