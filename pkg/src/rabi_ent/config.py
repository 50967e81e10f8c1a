"""Run-configuration schema: validation, defaults, and object construction.

Configurations are JSON objects.  Every section is validated before any
computation starts and unknown keys are rejected outright, so a typo fails
fast instead of silently falling back to a default.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .oracle import EDConfig, HamiltonianVariant, required_n_max
from .params import KappaConvention, ModelParams, SpinState
from .scan import AxisRange, ScanSpec, SWEEPABLE
from .specialfn import DEFAULT_TAIL_TOL

_KAPPA_CONVENTIONS = {c.value: c for c in KappaConvention}
_VARIANTS = {v.value: v for v in HamiltonianVariant}
_SPIN_STATES = {s.name: s for s in SpinState}

_TOP_KEYS = {"model", "time_grid", "tail_tol", "spectrum", "ed", "jc", "scan", "output", "label", "description"}
_MODEL_KEYS = {"ratio_r", "beta", "kappa0", "alpha_sq", "kappa_convention"}
_TIME_KEYS = {"t_max", "points", "t_min"}
_SPECTRUM_KEYS = {"n_min", "n_max"}
_ED_KEYS = {"n_max", "variant", "initial_spin", "initial_fock", "check_truncation", "dim_ceiling"}
_JC_KEYS = {"delta", "g", "alpha_sq", "corrected"}
_SCAN_KEYS = {"ranges", "fixed", "horizon", "time_points", "kappa_convention", "grid_ceiling", "refine"}
_RANGE_KEYS = {"min", "max", "steps"}
_REFINE_KEYS = {"step_scales", "max_iters", "ftol", "bounds"}
_OUTPUT_KEYS = {"path"}


def _require_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object, got {type(obj).__name__}")
    return obj


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}; allowed keys are {sorted(allowed)}")


def _number(obj: dict, key: str, path: str, *, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise ConfigError(f"{path}.{key}: required")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _integer(obj: dict, key: str, path: str, *, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise ConfigError(f"{path}.{key}: required")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    return int(value)


def _boolean(obj: dict, key: str, path: str, *, default: bool) -> bool:
    if key not in obj:
        return default
    value = obj[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected true/false, got {value!r}")
    return value


def _choice(obj: dict, key: str, path: str, table: dict, *, default=None):
    if key not in obj:
        return default
    value = obj[key]
    if value not in table:
        raise ConfigError(f"{path}.{key}: expected one of {sorted(table)}, got {value!r}")
    return table[value]


def validate_config(raw: dict) -> dict:
    """Structural validation of a full configuration object.

    Returns the input unchanged on success; raises ConfigError with a
    dotted path on the first problem found.
    """
    _require_mapping(raw, "config")
    _reject_unknown(raw, _TOP_KEYS, "config")
    if "model" in raw:
        model = _require_mapping(raw["model"], "model")
        _reject_unknown(model, _MODEL_KEYS, "model")
        for key in ("ratio_r", "beta"):
            _number(model, key, "model")
        _number(model, "kappa0", "model", required=False)
        _number(model, "alpha_sq", "model", required=False)
        _choice(model, "kappa_convention", "model", _KAPPA_CONVENTIONS)
    if "time_grid" in raw:
        grid = _require_mapping(raw["time_grid"], "time_grid")
        _reject_unknown(grid, _TIME_KEYS, "time_grid")
        t_max = _number(grid, "t_max", "time_grid")
        t_min = _number(grid, "t_min", "time_grid", required=False, default=0.0)
        points = _integer(grid, "points", "time_grid", required=False, default=2000)
        if points < 2:
            raise ConfigError(f"time_grid.points: must be >= 2, got {points}")
        if not t_max > t_min:
            raise ConfigError(f"time_grid: t_max {t_max} must exceed t_min {t_min}")
    if "tail_tol" in raw:
        tail = raw["tail_tol"]
        if isinstance(tail, bool) or not isinstance(tail, (int, float)):
            raise ConfigError(f"tail_tol: expected a number, got {tail!r}")
        if not 0.0 < float(tail) <= 1e-6:
            raise ConfigError(f"tail_tol: must lie in (0, 1e-6], got {tail}")
    if "spectrum" in raw:
        spectrum = _require_mapping(raw["spectrum"], "spectrum")
        _reject_unknown(spectrum, _SPECTRUM_KEYS, "spectrum")
        n_min = _integer(spectrum, "n_min", "spectrum", required=False, default=0)
        n_max = _integer(spectrum, "n_max", "spectrum", required=False)
        if n_min < 0:
            raise ConfigError(f"spectrum.n_min: must be >= 0, got {n_min}")
        if n_max is not None and n_max < n_min:
            raise ConfigError(f"spectrum: n_max {n_max} below n_min {n_min}")
    if "ed" in raw:
        ed = _require_mapping(raw["ed"], "ed")
        _reject_unknown(ed, _ED_KEYS, "ed")
        _integer(ed, "n_max", "ed", required=False)
        _choice(ed, "variant", "ed", _VARIANTS)
        _choice(ed, "initial_spin", "ed", _SPIN_STATES)
        if "initial_fock" in ed and ed["initial_fock"] is not None:
            _integer(ed, "initial_fock", "ed")
        _boolean(ed, "check_truncation", "ed", default=True)
        _integer(ed, "dim_ceiling", "ed", required=False)
    if "jc" in raw:
        jc = _require_mapping(raw["jc"], "jc")
        _reject_unknown(jc, _JC_KEYS, "jc")
        _number(jc, "delta", "jc")
        _number(jc, "g", "jc")
        _number(jc, "alpha_sq", "jc")
        _boolean(jc, "corrected", "jc", default=True)
    if "scan" in raw:
        scan = _require_mapping(raw["scan"], "scan")
        _reject_unknown(scan, _SCAN_KEYS, "scan")
        ranges = _require_mapping(scan.get("ranges", {}), "scan.ranges")
        for name, axis in ranges.items():
            if name not in SWEEPABLE:
                raise ConfigError(f"scan.ranges.{name}: not a sweepable parameter")
            axis = _require_mapping(axis, f"scan.ranges.{name}")
            _reject_unknown(axis, _RANGE_KEYS, f"scan.ranges.{name}")
            _number(axis, "min", f"scan.ranges.{name}")
            _number(axis, "max", f"scan.ranges.{name}")
            _integer(axis, "steps", f"scan.ranges.{name}")
        fixed = _require_mapping(scan.get("fixed", {}), "scan.fixed")
        for name in fixed:
            if name not in SWEEPABLE:
                raise ConfigError(f"scan.fixed.{name}: not a sweepable parameter")
            _number(fixed, name, "scan.fixed")
        _number(scan, "horizon", "scan")
        _integer(scan, "time_points", "scan", required=False)
        _choice(scan, "kappa_convention", "scan", _KAPPA_CONVENTIONS)
        _integer(scan, "grid_ceiling", "scan", required=False)
        if "refine" in scan:
            refine = _require_mapping(scan["refine"], "scan.refine")
            _reject_unknown(refine, _REFINE_KEYS, "scan.refine")
            steps = _require_mapping(refine.get("step_scales", {}), "scan.refine.step_scales")
            for name in steps:
                _number(steps, name, "scan.refine.step_scales")
            _integer(refine, "max_iters", "scan.refine", required=False)
            _number(refine, "ftol", "scan.refine", required=False)
            if "bounds" in refine:
                bounds = _require_mapping(refine["bounds"], "scan.refine.bounds")
                for name, pair in bounds.items():
                    if not (isinstance(pair, list) and len(pair) == 2):
                        raise ConfigError(f"scan.refine.bounds.{name}: expected [lo, hi]")
    if "output" in raw:
        output = _require_mapping(raw["output"], "output")
        _reject_unknown(output, _OUTPUT_KEYS, "output")
        if "path" in output and not isinstance(output["path"], str):
            raise ConfigError("output.path: expected a string")
    if "label" in raw and not isinstance(raw["label"], str):
        raise ConfigError("label: expected a string")
    if "description" in raw and not isinstance(raw["description"], str):
        raise ConfigError("description: expected a string")
    return raw


def load_config(path: str | Path) -> dict:
    """Read and validate a JSON configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return validate_config(raw)


def require_section(cfg: dict, name: str) -> dict:
    if name not in cfg:
        raise ConfigError(f"this command requires a {name!r} section in the config")
    return cfg[name]


def params_from_config(cfg: dict) -> ModelParams:
    model = require_section(cfg, "model")
    return ModelParams(
        ratio_r=float(model["ratio_r"]),
        beta=float(model["beta"]),
        kappa0=float(model.get("kappa0", 0.0)),
        alpha_sq=float(model.get("alpha_sq", 0.0)),
        kappa_convention=_KAPPA_CONVENTIONS[model.get("kappa_convention", "omega0_scaled")],
    )


def times_from_config(cfg: dict) -> np.ndarray:
    grid = require_section(cfg, "time_grid")
    return np.linspace(
        float(grid.get("t_min", 0.0)), float(grid["t_max"]), int(grid.get("points", 2000))
    )


def tail_tol_from_config(cfg: dict) -> float:
    return float(cfg.get("tail_tol", DEFAULT_TAIL_TOL))


def edconfig_from_config(cfg: dict, params: ModelParams) -> EDConfig:
    ed = cfg.get("ed", {})
    n_max = ed.get("n_max")
    if n_max is None:
        n_max = required_n_max(params.alpha_sq)
    kwargs = {"n_max": int(n_max), "variant": _VARIANTS[ed.get("variant", "half_sum")]}
    if "dim_ceiling" in ed:
        kwargs["dim_ceiling"] = int(ed["dim_ceiling"])
    return EDConfig(**kwargs)


def scanspec_from_config(cfg: dict) -> ScanSpec:
    from .errors import DomainError

    scan = require_section(cfg, "scan")
    try:
        ranges = {
            name: AxisRange(min=float(a["min"]), max=float(a["max"]), steps=int(a["steps"]))
            for name, a in scan.get("ranges", {}).items()
        }
        fixed = {name: float(v) for name, v in scan.get("fixed", {}).items()}
        kwargs = {
            "ranges": ranges,
            "fixed": fixed,
            "horizon": float(scan["horizon"]),
            "time_points": int(scan.get("time_points", 2000)),
            "kappa_convention": _KAPPA_CONVENTIONS[scan.get("kappa_convention", "omega0_scaled")],
            "tail_tol": tail_tol_from_config(cfg),
        }
        if "grid_ceiling" in scan:
            kwargs["grid_ceiling"] = int(scan["grid_ceiling"])
        return ScanSpec(**kwargs)
    except DomainError as exc:
        # a structurally inconsistent scan request is a configuration problem
        raise ConfigError(f"scan: {exc}") from exc
