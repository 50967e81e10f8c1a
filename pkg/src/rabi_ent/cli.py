"""Command-line driver.

Subcommands compute the closed-form spectrum, the averaged transition
probability, the dense-oracle populations, the JC inversion comparator, or
a parameter scan, and write a CSV plus a JSON sidecar with the fully
resolved configuration.  Identical config and package version produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

from . import __version__
from .config import (
    edconfig_from_config,
    load_config,
    params_from_config,
    require_section,
    scanspec_from_config,
    tail_tol_from_config,
    times_from_config,
    validate_config,
)
from .dynamics import jc_inversion, survival_prob, transition_prob
from .errors import CapacityError, ConfigError, DomainError
from .oracle import evolve
from .params import SpinState
from .scan import grid_scan, refine
from .spectrum import aa_rows
from .specialfn import poisson_logweights

_PRESET_PANELS = {1: 4, 2: 3, 3: 3, 4: 1}

_SPECTRUM_COLUMNS = (
    "N",
    "omega1N",
    "omega2N",
    "t0tilde",
    "e0",
    "eplus",
    "eminus",
    "weight",
    "rabi_freq",
)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        # mkstemp creates 0600; restore the ordinary umask-derived mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp_name, 0o666 & ~umask)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_sidecar(csv_path: Path, payload: dict) -> Path:
    sidecar = csv_path.with_name(csv_path.name + ".json")
    _atomic_write(sidecar, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return sidecar


def preset_name(fig: int, panel: int) -> str:
    if fig not in _PRESET_PANELS:
        raise ConfigError(f"unknown figure preset {fig}; available: {sorted(_PRESET_PANELS)}")
    if not 1 <= panel <= _PRESET_PANELS[fig]:
        raise ConfigError(
            f"figure {fig} has panels 1..{_PRESET_PANELS[fig]}, got panel {panel}"
        )
    return f"fig{fig}_p{panel}"


def load_preset(fig: int, panel: int = 1) -> dict:
    """Load one of the bundled figure presets as a validated config."""
    name = preset_name(fig, panel)
    source = resources.files("rabi_ent.presets").joinpath(f"{name}.json")
    raw = json.loads(source.read_text())
    return validate_config(raw)


def _resolve_config(args) -> tuple[dict, str]:
    if args.config is not None and args.fig is not None:
        raise ConfigError("--config and --fig are mutually exclusive")
    if args.config is not None:
        cfg = load_config(args.config)
        return cfg, cfg.get("label", Path(args.config).stem)
    if args.fig is not None:
        cfg = load_preset(args.fig, args.panel)
        return cfg, cfg.get("label", preset_name(args.fig, args.panel))
    raise ConfigError("provide either --config FILE or --fig N [--panel K]")


def _resolved_payload(command: str, cfg: dict, extras: dict | None = None) -> dict:
    payload = {
        "command": command,
        "version": __version__,
        "resolved": copy.deepcopy(cfg),
    }
    if extras:
        payload.update(extras)
    return payload


def _out_path(args, cfg: dict, label: str, command: str) -> Path:
    if args.out is not None:
        return Path(args.out)
    configured = cfg.get("output", {}).get("path")
    if configured is not None:
        return Path(configured)
    return Path(f"{command}_{label}.csv")


def cmd_tprob(args) -> int:
    cfg, label = _resolve_config(args)
    params = params_from_config(cfg)
    times = times_from_config(cfg)
    tail_tol = tail_tol_from_config(cfg)
    t_series = transition_prob(params, times, tail_tol)
    p_series = survival_prob(params, times, tail_tol)
    t_vals = t_series.channels["T"]
    p_vals = p_series.channels["P_stay"]
    path = _out_path(args, cfg, label, "tprob")
    _write_csv(path, ("t", "T", "P_stay"), zip(times, t_vals, p_vals))
    _write_sidecar(
        path,
        _resolved_payload(
            "tprob",
            cfg,
            {"max_T": float(t_vals.max()), "min_P_stay": float(p_vals.min())},
        ),
    )
    print(f"wrote {path} ({times.size} rows); max T = {t_vals.max():.6g}")
    return 0


def cmd_spectrum(args) -> int:
    cfg, label = _resolve_config(args)
    params = params_from_config(cfg)
    spectrum_cfg = cfg.get("spectrum", {})
    n_min = int(spectrum_cfg.get("n_min", 0))
    n_max = spectrum_cfg.get("n_max")
    if n_max is None:
        n_max = poisson_logweights(params.alpha_sq, tail_tol_from_config(cfg)).n_cut
    rows = aa_rows(params, int(n_max), n_min)
    path = _out_path(args, cfg, label, "spectrum")
    _write_csv(
        path,
        _SPECTRUM_COLUMNS,
        (
            (
                str(r.N),
                r.omega1N,
                r.omega2N,
                r.t0tilde,
                r.e0,
                r.eplus,
                r.eminus,
                r.weight,
                r.rabi_freq,
            )
            for r in rows
        ),
    )
    _write_sidecar(
        path,
        _resolved_payload("spectrum", cfg, {"n_min": n_min, "n_max": int(n_max)}),
    )
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def cmd_oracle(args) -> int:
    cfg, label = _resolve_config(args)
    params = params_from_config(cfg)
    times = times_from_config(cfg)
    ed_cfg = cfg.get("ed", {})
    config = edconfig_from_config(cfg, params)
    initial_spin = SpinState[ed_cfg.get("initial_spin", "J1M0")]
    initial_fock = ed_cfg.get("initial_fock")
    result = evolve(
        params,
        config,
        times,
        initial_spin=initial_spin,
        initial_fock=initial_fock,
        compute_truncation_error=ed_cfg.get("check_truncation", True),
    )
    pops = result.populations.channels
    conc = result.concurrence.channels["C"]
    path = _out_path(args, cfg, label, "oracle")
    _write_csv(
        path,
        ("t", "P11", "P1m1", "P10", "P00", "C"),
        zip(times, pops["P11"], pops["P1m1"], pops["P10"], pops["P00"], conc),
    )
    _write_sidecar(
        path,
        _resolved_payload(
            "oracle",
            cfg,
            {
                "n_max": config.n_max,
                "variant": config.variant.value,
                "truncation_error": result.truncation_error,
            },
        ),
    )
    print(f"wrote {path} ({times.size} rows); truncation_error = {result.truncation_error}")
    return 0


def cmd_jc(args) -> int:
    cfg, label = _resolve_config(args)
    jc = require_section(cfg, "jc")
    times = times_from_config(cfg)
    series = jc_inversion(
        delta=float(jc["delta"]),
        g=float(jc["g"]),
        alpha_sq=float(jc["alpha_sq"]),
        times=times,
        tail_tol=tail_tol_from_config(cfg),
        corrected=jc.get("corrected", True),
    )
    w_vals = series.channels["W"]
    path = _out_path(args, cfg, label, "jc")
    _write_csv(path, ("t", "W"), zip(times, w_vals))
    _write_sidecar(path, _resolved_payload("jc", cfg))
    print(f"wrote {path} ({times.size} rows)")
    return 0


def cmd_scan(args) -> int:
    cfg, label = _resolve_config(args)
    spec = scanspec_from_config(cfg)
    result = grid_scan(spec)
    refine_cfg = cfg.get("scan", {}).get("refine")
    refined = None
    if refine_cfg is not None:
        step_scales = {
            name: float(v) for name, v in refine_cfg.get("step_scales", {}).items()
        }
        if set(step_scales) != set(result.axis_names):
            raise ConfigError("scan.refine.step_scales must cover exactly the swept axes")
        bounds = {
            name: (float(pair[0]), float(pair[1]))
            for name, pair in refine_cfg.get("bounds", {}).items()
        } or {name: (spec.ranges[name].min, spec.ranges[name].max) for name in result.axis_names}
        refined = refine(
            result.best_point,
            step_scales,
            max_iters=int(refine_cfg.get("max_iters", 200)),
            ftol=float(refine_cfg.get("ftol", 1e-8)),
            bounds=bounds,
            spec=spec,
        )
    path = _out_path(args, cfg, label, "scan")
    header = tuple(result.axis_names) + ("objective",)
    rows = (
        tuple(point) + (obj,)
        for point, obj in zip(result.points, result.objectives)
    )
    _write_csv(path, header, rows)
    extras = {
        "best_point": result.best_point,
        "best_objective": result.best_objective,
        "grid_size": result.metadata.get("grid_size"),
    }
    if refined is not None:
        extras["refined_point"] = refined.best_point
        extras["refined_objective"] = refined.best_objective
        extras["refine_trace"] = [
            {"point": point, "objective": value} for point, value in refined.trace
        ]
        extras["refine_metadata"] = refined.metadata
    _write_sidecar(path, _resolved_payload("scan", cfg, extras))
    best = refined.best_objective if refined is not None else result.best_objective
    print(f"wrote {path} ({result.objectives.size} grid rows); best objective = {best:.6g}")
    return 0


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "tprob": cmd_tprob,
    "oracle": cmd_oracle,
    "jc": cmd_jc,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabi-ent",
        description="Two qubits ultrastrongly coupled to an oscillator: "
        "spectra, transition probabilities, dense-oracle checks, and scans.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "per-photon-number closed-form spectrum rows as CSV"),
        ("tprob", "averaged transition probability T(t) and survival 1-2T(t)"),
        ("oracle", "dense-diagonalization populations and concurrence"),
        ("jc", "Jaynes-Cummings inversion comparator W(t)"),
        ("scan", "grid scan (and optional refinement) of max_t T(t)"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=str, default=None, help="JSON run configuration")
        cmd.add_argument("--fig", type=int, default=None, help="bundled figure preset number")
        cmd.add_argument("--panel", type=int, default=1, help="panel within the figure preset")
        cmd.add_argument("--out", type=str, default=None, help="output CSV path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"numeric domain error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
