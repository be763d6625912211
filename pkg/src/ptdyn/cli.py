"""``ptdyn`` command-line front end.

Every command is deterministic: identical options give byte-identical output.
Exit codes: 0 success, 1 invalid configuration, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import infomeasures as im
from .circuit import PostSelectionVanished, format_gate_list
from .lcu import DegenerateNormalizer, circuit_ops, run_circuit, verify_point
from .ptdynamics import (
    PTParams,
    Regime,
    bloch,
    damping,
    default_horizon,
    stable_state_a,
    stable_state_b,
)

log = logging.getLogger("ptdyn")

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("evolve", "sweep", "stable", "turning", "critical", "circuit")
EVOLVE_HEADER = ["r", "t", "S_A", "S_B", "S_BC", "I_AB", "I_BC", "C_AB", "C_BC", "p_success"]
SWEEP_HEADER = ["r", "delta_I", "I_ref", "A", "C_s"]
STABLE_HEADER = ["r", "D", "offdiag_A", "S_A", "S_B", "C_BC",
                 "bloch_A_x", "bloch_A_y", "bloch_A_z", "bloch_B_x", "bloch_B_y", "bloch_B_z"]
TURNING_HEADER = ["r", "t_p", "s_p", "s_ss"]
CRITICAL_HEADER = ["r_MI"]
CIRCUIT_HEADER = ["r", "t", "trace_distance", "fidelity", "p_success"]
CIRCUIT_TOL = 1e-9
NOISE_FLOOR = 1e-12

DEFAULT_STEPS = {"evolve": 201, "sweep": 4000, "stable": 2, "turning": 2000,
                 "critical": 2, "circuit": 20}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    s: float = 1.0
    r: float = 0.5
    t_max: Optional[float] = None
    steps: Optional[int] = None
    r_grid: Optional[list[float]] = None
    output_format: str = "csv"
    output_path: Optional[str] = None
    dump: bool = False
    decompose: bool = False

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not (math.isfinite(self.s) and self.s > 0):
            raise ConfigError("--s must be positive")
        for r in self.rs:
            if not (math.isfinite(r) and r >= 0):
                raise ConfigError(f"r values must be >= 0, got {r}")
        if self.t_max is not None and not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigError("--t-max must be positive")
        if self.steps is not None and self.steps < 2:
            raise ConfigError("--steps must be at least 2")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        return self

    @property
    def rs(self) -> list[float]:
        return list(self.r_grid) if self.r_grid else [self.r]

    def n_steps(self) -> int:
        return self.steps if self.steps is not None else DEFAULT_STEPS[self.command]

    def horizon(self, p: PTParams) -> float:
        return self.t_max if self.t_max is not None else default_horizon(p)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        x = 0.0  # no "-0"
    return f"{x:.12g}"


def _json_value(x):
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(_fmt(x))


def render(rows: list[dict], header: list[str], fmt: str) -> str:
    if fmt == "json":
        data = [{k: _json_value(row.get(k)) for k in header} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row.get(k)) for k in header])
    return buf.getvalue()


def _snap(x: float) -> float:
    # values this small are eigen-solver roundoff, not signal
    return 0.0 if abs(x) < NOISE_FLOOR else x


def _clean_record(rec: im.SweepRecord) -> dict:
    row = rec.as_dict()
    for key in ("I_AB", "I_BC"):
        row[key] = _snap(max(row[key], 0.0))
    for key in ("S_A", "S_B", "S_BC"):
        row[key] = _snap(min(max(row[key], 0.0), 3.0))
    for key in ("C_AB", "C_BC"):
        row[key] = _snap(row[key])
    return row


def cmd_evolve(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    p = PTParams(r=cfg.r, s=cfg.s)
    rows = []
    for t in np.linspace(0.0, cfg.horizon(p), cfg.n_steps()):
        t = float(t)
        try:
            ps = run_circuit(p, t).p_success
        except (DegenerateNormalizer, PostSelectionVanished) as exc:
            log.warning("p_success unavailable at t=%g: %s", t, exc)
            ps = None
        rows.append(_clean_record(im.record_at(p, t, p_success=ps)))
    return rows, EVOLVE_HEADER


def cmd_sweep(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    samples = max(cfg.n_steps(), 100)
    rows = []
    for r in sorted(cfg.rs):
        p = PTParams(r=r, s=cfg.s)
        horizon = cfg.horizon(p)
        d_i = im.delta_mutual_info(r, horizon=horizon, samples=samples, s=cfg.s)
        rows.append({
            "r": r,
            "delta_I": d_i,
            "I_ref": d_i + 1,
            "A": im.concurrence_amplitude(r, horizon=horizon, samples=samples, s=cfg.s),
            "C_s": im.stable_concurrence(r, s=cfg.s) if p.regime is Regime.BROKEN else None,
        })
    return rows, SWEEP_HEADER


def cmd_stable(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    rows = []
    for r in sorted(cfg.rs):
        if r <= 1:
            raise ConfigError(
                f"r={r}: stable states need the broken phase (r > 1); "
                "the unbroken phase and the exceptional point have none")
        rho_a, rho_b = stable_state_a(r), stable_state_b(r)
        ba, bb = bloch(rho_a), bloch(rho_b)
        rows.append({
            "r": r,
            "D": damping(r),
            "offdiag_A": abs(rho_a[0, 1]),
            "S_A": im.von_neumann_entropy(rho_a),
            "S_B": im.entropy_stable_b(r),
            "C_BC": im.stable_concurrence(r, s=cfg.s),
            "bloch_A_x": ba[0], "bloch_A_y": ba[1], "bloch_A_z": ba[2],
            "bloch_B_x": bb[0], "bloch_B_y": bb[1], "bloch_B_z": bb[2],
        })
    return rows, STABLE_HEADER


def cmd_turning(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    rows = []
    for r in sorted(cfg.rs):
        p = PTParams(r=r, s=cfg.s)
        if p.regime is not Regime.BROKEN:
            raise ConfigError(f"r={r}: turning points exist only in the broken phase (r > 1)")
        row = {"r": r, "t_p": None, "s_p": None, "s_ss": im.entropy_stable_b(r)}
        try:
            tp = im.find_turning_point(p, horizon=cfg.horizon(p), grid=cfg.n_steps())
            row.update(t_p=tp.t_p, s_p=tp.s_p)
        except im.NoTurningPoint as exc:
            log.info("%s", exc)
        rows.append(row)
    return rows, TURNING_HEADER


def cmd_critical(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    return [{"r_MI": im.critical_r_mi(1e-8)}], CRITICAL_HEADER


def cmd_circuit(cfg: RunConfig) -> tuple[list[dict], list[str]]:
    rows = []
    for r in sorted(cfg.rs):
        p = PTParams(r=r, s=cfg.s)
        for t in np.linspace(0.0, cfg.horizon(p), cfg.n_steps()):
            try:
                rows.append(verify_point(p, float(t), decompose=cfg.decompose))
            except (DegenerateNormalizer, PostSelectionVanished) as exc:
                log.warning("skipping r=%g t=%g: %s", r, t, exc)
    return rows, CIRCUIT_HEADER


HANDLERS = {
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "stable": cmd_stable,
    "turning": cmd_turning,
    "critical": cmd_critical,
    "circuit": cmd_circuit,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad r grid {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptdyn", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    # defaults stay None so config-file values can fill the gaps
    parser.add_argument("--config", help="JSON file whose keys are flag names")
    parser.add_argument("--s", type=float)
    parser.add_argument("--r", type=float)
    parser.add_argument("--r-grid", type=_float_list)
    parser.add_argument("--t-max", type=float)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--output", help="output path (default: stdout)")
    parser.add_argument("--dump", action="store_true", default=None,
                        help="circuit: print the gate list for (r, t-max)")
    parser.add_argument("--decompose", action="store_true", default=None,
                        help="circuit: expand controlled gates into rotations and CNOTs")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


_KEYS = {"s": "s", "r": "r", "r_grid": "r_grid", "t_max": "t_max", "steps": "steps",
         "format": "output_format", "output": "output_path", "dump": "dump",
         "decompose": "decompose"}


def _load_config_file(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        norm = key.lstrip("-").replace("-", "_")
        if norm not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        if norm == "r_grid" and isinstance(value, str):
            value = _float_list(value)
        out[_KEYS[norm]] = value
    return out


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = _load_config_file(args.config) if args.config else {}
    for flag, attr in _KEYS.items():
        v = getattr(args, flag)
        if v is not None:
            values[attr] = v
    try:
        cfg = RunConfig(command=args.command, **values)
        cfg.s, cfg.r = float(cfg.s), float(cfg.r)
        if cfg.t_max is not None:
            cfg.t_max = float(cfg.t_max)
        if cfg.r_grid is not None:
            cfg.r_grid = [float(x) for x in cfg.r_grid]
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def run(cfg: RunConfig) -> int:
    rows, header = HANDLERS[cfg.command](cfg)
    report = render(rows, header, cfg.output_format)
    if cfg.command == "circuit" and cfg.dump:
        # gate list owns stdout; the report is only written to a file
        p = PTParams(r=cfg.r, s=cfg.s)
        _emit(format_gate_list(circuit_ops(p, cfg.horizon(p), decompose=cfg.decompose)), None)
        if cfg.output_path is not None:
            _emit(report, cfg.output_path)
    else:
        _emit(report, cfg.output_path)
    if cfg.command == "circuit":
        bad = [row for row in rows if row["trace_distance"] > CIRCUIT_TOL]
        if bad:
            log.error("%d point(s) exceed trace distance %g", len(bad), CIRCUIT_TOL)
            return EXIT_VERIFY
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except OSError as exc:
        log.error("cannot read config: %s", exc)
        return EXIT_IO
    except (ConfigError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    try:
        return run(cfg)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
