"""Command-line front end.

Subcommands:

* sweep        phase sweep of the full pipeline, written as CSV or JSON
* verify       internal consistency suites (CPTP, oracle equivalence,
               closed forms, bounds, fringe form) with pass/fail output
* enhancement  closed-form N00N absorption table for the configured and
               the ideal beamsplitter

Configuration is a flat key = value text file; --config, the NOON_SIM_CONFIG
environment variable and the packaged defaults are tried in that order. Data
files are deterministic for a given config and flags; each output file gets a
<name>.manifest.json sidecar holding the config snapshot and the timestamp.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, oracle
from .analysis import fit_fringe, ideal_rho00, noon_absorption, rho00_bound
from .channels import (
    LbsParams,
    LossParams,
    apply_channel,
    cptp_residual,
    lbs_channel,
    lbs_kraus_closed_form,
    loss_channel,
    sample_lbs_params,
)
from .errors import DomainError, InvariantError
from .experiment import ExperimentConfig, loss_probabilities, sweep_phase
from .fock import DIM

SWEEP_COLUMNS = ("phi", "p11", "p20", "p02", "c_total_norm", "rho00", "n0", "n1", "n2")
ENHANCEMENT_COLUMNS = (
    "panel",
    "n",
    "gamma",
    "delta",
    "p_noon_max",
    "p_noon_min",
    "p_independent",
    "ratio",
)

_REQUIRED_KEYS = (
    "t_p1",
    "t_q1",
    "t_p2",
    "t_q2",
    "t_p3",
    "t_q3",
    "lbs_r_re",
    "lbs_r_im",
    "lbs_t_re",
    "lbs_t_im",
    "visibility",
    "eta_det",
    "eta_cpl",
    "transmission_interpretation",
    "include_output_stage",
)
_OPTIONAL_KEYS = ("alpha_tabulated",)

ENV_CONFIG = "NOON_SIM_CONFIG"


def default_config_text() -> str:
    """Raw text of the packaged default configuration."""
    return resources.files("noonsim.data").joinpath("default.cfg").read_text(encoding="utf-8")


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat key = value lines; '#' starts a comment."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno} is not 'key = value': {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise DomainError(f"config line {lineno} is not 'key = value': {raw.strip()!r}")
        if key not in _REQUIRED_KEYS and key not in _OPTIONAL_KEYS:
            raise DomainError(f"unknown config key {key!r} on line {lineno}")
        if key in entries:
            raise DomainError(f"duplicate config key {key!r} on line {lineno}")
        entries[key] = value
    missing = [k for k in _REQUIRED_KEYS if k not in entries]
    if missing:
        raise DomainError(f"config is missing required keys: {', '.join(missing)}")
    return entries


def _as_float(entries: dict[str, str], key: str) -> float:
    try:
        return float(entries[key])
    except ValueError:
        raise DomainError(f"config value {key} = {entries[key]!r} is not a number") from None


def _as_bool(entries: dict[str, str], key: str) -> bool:
    value = entries[key].lower()
    if value not in ("true", "false"):
        raise DomainError(f"config value {key} = {entries[key]!r} must be true or false")
    return value == "true"


def config_from_entries(entries: dict[str, str]) -> ExperimentConfig:
    lbs = LbsParams(
        r=complex(_as_float(entries, "lbs_r_re"), _as_float(entries, "lbs_r_im")),
        t=complex(_as_float(entries, "lbs_t_re"), _as_float(entries, "lbs_t_im")),
    )
    return ExperimentConfig(
        t_p1=_as_float(entries, "t_p1"),
        t_q1=_as_float(entries, "t_q1"),
        t_p2=_as_float(entries, "t_p2"),
        t_q2=_as_float(entries, "t_q2"),
        t_p3=_as_float(entries, "t_p3"),
        t_q3=_as_float(entries, "t_q3"),
        lbs=lbs,
        visibility=_as_float(entries, "visibility"),
        eta_det=_as_float(entries, "eta_det"),
        eta_cpl=_as_float(entries, "eta_cpl"),
        transmission_interpretation=entries["transmission_interpretation"],
        include_output_stage=_as_bool(entries, "include_output_stage"),
        alpha_tabulated=_as_float(entries, "alpha_tabulated") if "alpha_tabulated" in entries else None,
    )


def resolve_config_path(explicit: str | None) -> Path | None:
    """--config beats NOON_SIM_CONFIG beats the packaged default (None)."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_CONFIG, "").strip()
    if env:
        return Path(env)
    return None


def load_config(path: str | os.PathLike | None = None) -> ExperimentConfig:
    """Load an ExperimentConfig from a file, or the packaged defaults when path is None."""
    if path is None:
        text = default_config_text()
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DomainError(f"cannot read config {path}: {exc}") from exc
    return config_from_entries(parse_config_text(text))


def _format_value(x: float) -> str:
    return format(float(x), ".17g")


def _write_manifest(output: Path, command: str, config_path: Path | None, flags: dict) -> None:
    manifest = {
        "tool": "noonsim",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config_path": str(config_path) if config_path is not None else "packaged-default",
        "flags": flags,
        "outputs": [str(output)],
    }
    path = Path(str(output) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def _write_rows(output: Path, fmt: str, columns: tuple[str, ...], rows: list[list]) -> None:
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(cell if isinstance(cell, str) else _format_value(cell) for cell in row))
        output.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        payload = [
            {col: (cell if isinstance(cell, str) else float(cell)) for col, cell in zip(columns, row)}
            for row in rows
        ]
        output.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def cmd_sweep(args) -> int:
    config_path = resolve_config_path(args.config)
    cfg = load_config(config_path)
    steps = int(args.steps)
    if steps < 1:
        raise DomainError(f"--steps must be >= 1, got {steps}")
    start = float(args.phase_start)
    stop = float(args.phase_stop)
    if not (math.isfinite(start) and math.isfinite(stop)) or stop <= start:
        raise DomainError(f"need finite --phase-stop > --phase-start, got {start!r}, {stop!r}")
    # half-open grid [start, stop): the pipeline is periodic in the phase
    phases = start + (stop - start) * np.arange(steps) / steps
    records = sweep_phase(cfg, phases)
    rows = [
        [rec.phi, rec.p11, rec.p20, rec.p02, rec.c_total_norm, rec.rho00, rec.n0, rec.n1, rec.n2]
        for rec in records
    ]
    output = Path(args.output)
    _write_rows(output, args.format, SWEEP_COLUMNS, rows)
    _write_manifest(
        output,
        "sweep",
        config_path,
        {
            "phase_start": start,
            "phase_stop": stop,
            "steps": steps,
            "format": args.format,
        },
    )
    return 0


def cmd_enhancement(args) -> int:
    config_path = resolve_config_path(args.config)
    cfg = load_config(config_path)
    n_max = int(args.n_max)
    if not 1 <= n_max <= 7:
        raise DomainError(f"--n-max must lie in 1..7, got {n_max}")
    panels = (("config", cfg.lbs), ("ideal", LbsParams(r=0.5, t=0.5)))
    rows = []
    for name, params in panels:
        for n in range(1, n_max + 1):
            row = noon_absorption(params, n)
            ratio = row.p_noon_max / row.p_independent if row.p_independent > 0.0 else float("nan")
            rows.append(
                [
                    name,
                    float(row.n),
                    row.gamma,
                    row.delta,
                    row.p_noon_max,
                    row.p_noon_min,
                    row.p_independent,
                    ratio,
                ]
            )
    output = Path(args.output)
    _write_rows(output, args.format, ENHANCEMENT_COLUMNS, rows)
    _write_manifest(output, "enhancement", config_path, {"n_max": n_max, "format": args.format})
    return 0


def _random_density(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _suite_cptp(cfg: ExperimentConfig, rng: np.random.Generator):
    channels = _config_channels(cfg)
    for _ in range(20):
        p, q = rng.uniform(0.0, 1.0, size=2)
        channels.append(loss_channel(LossParams(p, q)))
        channels.append(lbs_channel(sample_lbs_params(rng)))
    worst = max(cptp_residual(ch) for ch in channels)
    return worst <= 1e-10, f"max completeness residual {worst:.3e} over {len(channels)} channels"


def _config_channels(cfg: ExperimentConfig):
    p1, q1, p2, q2, p3, q3 = loss_probabilities(cfg)
    return [
        loss_channel(LossParams(p1, q1)),
        loss_channel(LossParams(p2, q2)),
        loss_channel(LossParams(p3, q3)),
        lbs_channel(cfg.lbs),
    ]


def _suite_oracle(cfg: ExperimentConfig, rng: np.random.Generator):
    worst = 0.0
    draws = 0
    maps = [oracle.dilated_mode_map(cfg.lbs)]
    for _ in range(15):
        maps.append(oracle.loss_mode_map(LossParams(*rng.uniform(0.0, 1.0, size=2))))
        maps.append(oracle.dilated_mode_map(sample_lbs_params(rng)))
    for mode_map in maps:
        channel = oracle.kraus_from_dilation(mode_map)
        rho = _random_density(rng)
        dev = float(np.max(np.abs(apply_channel(channel, rho) - oracle.simulate_dilation(rho, mode_map))))
        worst = max(worst, dev)
        draws += 1
    return worst <= 1e-10, f"max Kraus vs dilation deviation {worst:.3e} over {draws} draws"


def _suite_closed_forms(cfg: ExperimentConfig, rng: np.random.Generator):
    worst_loss = 0.0
    worst_lbs = 0.0
    stage_losses = loss_probabilities(cfg)
    loss_params = [LossParams(*stage_losses[0:2]), LossParams(*stage_losses[2:4])]
    loss_params += [LossParams(*rng.uniform(0.0, 1.0, size=2)) for _ in range(10)]
    for params in loss_params:
        built = loss_channel(params)
        reference = oracle.kraus_from_dilation(oracle.loss_mode_map(params))
        worst_loss = max(
            worst_loss,
            max(float(np.max(np.abs(a - b))) for a, b in zip(built.operators, reference.operators)),
        )
    lbs_list = [cfg.lbs] + [sample_lbs_params(rng) for _ in range(10)]
    for params in lbs_list:
        built = lbs_channel(params)
        reference = lbs_kraus_closed_form(params)
        worst_lbs = max(
            worst_lbs,
            max(float(np.max(np.abs(a - b))) for a, b in zip(built.operators, reference)),
        )
    ok = worst_loss <= 1e-12 and worst_lbs <= 1e-9
    return ok, f"loss vs dilation {worst_loss:.3e}; lbs closed form vs dilation {worst_lbs:.3e}"


def _suite_bounds(cfg: ExperimentConfig, rng: np.random.Generator):
    worst_gap = -math.inf
    worst_identity = 0.0
    for _ in range(1000):
        params = sample_lbs_params(rng, alpha_max=0.5)
        value = ideal_rho00(params)
        worst_gap = max(worst_gap, value - rho00_bound(params.alpha))
        worst_identity = max(worst_identity, abs(value - (params.alpha**2 + params.delta**2)))
    ok = worst_gap <= 1e-12 and worst_identity <= 1e-12
    return ok, f"max (rho00 - 2 alpha^2) = {worst_gap:.3e}; identity deviation {worst_identity:.3e}"


def _suite_fringe_form(cfg: ExperimentConfig, rng: np.random.Generator):
    phases = 2.0 * math.pi * np.arange(64) / 64.0
    records = sweep_phase(cfg, phases)
    worst = 0.0
    for column in ("p11", "p20", "p02"):
        fit = fit_fringe([(rec.phi, getattr(rec, column)) for rec in records])
        worst = max(worst, fit.residual)
    return worst <= 1e-10, f"max least-squares residual {worst:.3e} over p11/p20/p02"


def cmd_verify(args) -> int:
    config_path = resolve_config_path(args.config)
    try:
        cfg = load_config(config_path)
    except DomainError as exc:
        print(f"FAIL config-physicality: {exc}")
        raise
    print(
        "PASS config-physicality: "
        f"alpha = {cfg.lbs.alpha:.6g}, |delta| = {abs(cfg.lbs.delta):.6g}, |delta| <= alpha holds"
    )
    suites = (
        ("cptp", _suite_cptp),
        ("oracle-equivalence", _suite_oracle),
        ("analytic-forms", _suite_closed_forms),
        ("bounds", _suite_bounds),
        ("fringe-form", _suite_fringe_form),
    )
    failures = 0
    for name, suite in suites:
        rng = np.random.default_rng(args.seed)
        ok, detail = suite(cfg, rng)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures += 1
    if cfg.alpha_tabulated is not None:
        derived = cfg.lbs.alpha
        print(
            "INFO alpha-tabulated: derived alpha = "
            f"{derived:.6g}, tabulated {cfg.alpha_tabulated:.6g}, "
            f"difference {abs(derived - cfg.alpha_tabulated):.6g} (reported, not scored)"
        )
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noonsim",
        description="Two-photon N00N-state absorption simulator: phase sweeps, "
        "consistency verification and enhancement tables.",
    )
    parser.add_argument(
        "--config",
        help=f"path to a key = value config file (default: ${ENV_CONFIG} or the packaged defaults)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="sweep the interferometer phase and write per-phase observables")
    sweep.add_argument("--phase-start", type=float, default=0.0, help="grid start in radians (default 0)")
    sweep.add_argument(
        "--phase-stop", type=float, default=2.0 * math.pi, help="grid stop in radians, excluded (default 2 pi)"
    )
    sweep.add_argument("--steps", type=int, default=64, help="number of grid points (default 64)")
    sweep.add_argument("--output", required=True, help="output data file")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    verify = sub.add_parser("verify", help="run the internal consistency suites")
    verify.add_argument("--seed", type=int, default=20240817, help="seed for the randomized suites")

    enhancement = sub.add_parser("enhancement", help="write the closed-form N00N enhancement table")
    enhancement.add_argument("--n-max", type=int, default=7, help="largest photon number, 1..7 (default 7)")
    enhancement.add_argument("--output", required=True, help="output data file")
    enhancement.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"sweep": cmd_sweep, "verify": cmd_verify, "enhancement": cmd_enhancement}
    try:
        return handlers[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
