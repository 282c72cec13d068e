"""Command-line front end.

Subcommands: modes, crosscheck, extract, sweep, vacuum-audit. All inputs
come from a flat key=value config file plus repeatable --set KEY=VALUE
overrides; every number in the output is produced by a library call, the
CLI only formats. Output is deterministic: fixed field order and floats
rendered with 17 significant digits, so identical configs give
byte-identical files. CSV files start with a `# schema=1` comment and
JSON reports carry a `schema_version` field.

Exit codes: 0 success, 2 configuration error, 3 failed internal assertion.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .free_field import ModeIndex, mode_energy, mode_momentum
from .hole_theory import (VacuumMode, build_vacuum, energy_ledger,
                          evolve_ensemble, pauli_audit)
from .lattice import make_grid
from .oracle import crosscheck
from .potential import (ConstantPotential, Potential, ZeroPotential,
                        extraction_from_packet, load_tabulated_csv)
from .scenarios import (ExtractionParams, run_extraction, sweep_g,
                        sweep_slope, two_mode_packet)

_TWO_PI = 2.0 * math.pi

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_ASSERTION = 3


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    p: float = 1.0
    p_prime: float = 2.0
    g: float = 4.0
    q: float = 1.0
    length: float = _TWO_PI
    t_f: float = _TWO_PI
    n_z: int = 128
    r_max: int = 8
    dt: float | None = None
    potential: str = "extraction"
    v0: float = 1.0
    tabulated_csv: str | None = None
    g_list: tuple = (1.0, 2.0, 4.0, 8.0)
    dt_list: tuple | None = None
    tolerance: float | None = None
    out: str | None = None
    json_out: str | None = None
    ledger_out: str = "extract_ledger.csv"


def _float_key(name, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from None


def _int_key(name, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def _float_list_key(name, raw):
    items = [part.strip() for part in str(raw).split(",") if part.strip()]
    return tuple(_float_key(name, part) for part in items)


_PARSERS = {
    "p": _float_key,
    "p_prime": _float_key,
    "g": _float_key,
    "q": _float_key,
    "length": _float_key,
    "t_f": _float_key,
    "n_z": _int_key,
    "r_max": _int_key,
    "dt": _float_key,
    "v0": _float_key,
    "tolerance": _float_key,
    "g_list": _float_list_key,
    "dt_list": _float_list_key,
    "potential": lambda name, raw: str(raw),
    "tabulated_csv": lambda name, raw: str(raw),
    "out": lambda name, raw: str(raw),
    "json_out": lambda name, raw: str(raw),
    "ledger_out": lambda name, raw: str(raw),
}


def parse_config_pairs(text: str):
    """key=value lines; blank lines and # comments ignored."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        pairs.append((key.strip(), value.strip()))
    return pairs


def build_config(pairs) -> RunConfig:
    values = {}
    for key, raw in pairs:
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _PARSERS[key](key, raw)
    return RunConfig(**values)


def _load_config(args) -> RunConfig:
    pairs = []
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file not found: {args.config}")
        pairs.extend(parse_config_pairs(path.read_text()))
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        pairs.append((key.strip(), value.strip()))
    return build_config(pairs)


def fmt(x) -> str:
    """Deterministic 17-significant-digit rendering of one number."""
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not formatted as numbers")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    value = float(x)
    if not math.isfinite(value):
        raise ValueError("non-finite value in output")
    return format(value, ".17g")


def _json_render(value, indent=0) -> str:
    pad = " " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [f'{pad}  {json.dumps(str(k))}: {_json_render(v, indent + 2)}'
                for k, v in value.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        rows = [f"{pad}  {_json_render(v, indent + 2)}" for v in value]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return fmt(value)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(header: str, rows, trailer=()) -> str:
    lines = ["# schema=1", header, *rows, *trailer]
    return "\n".join(lines) + "\n"


def build_potential(cfg: RunConfig) -> Potential:
    kind = cfg.potential
    if kind == "zero":
        return ZeroPotential(q=cfg.q)
    if kind == "constant":
        return ConstantPotential(v0=cfg.v0, t_off=cfg.t_f, q=cfg.q)
    if kind == "extraction":
        return extraction_from_packet(cfg.p, cfg.p_prime, cfg.g, cfg.q,
                                      cfg.length, cfg.t_f)
    if kind == "tabulated":
        if not cfg.tabulated_csv:
            raise ConfigError("potential=tabulated requires tabulated_csv")
        path = Path(cfg.tabulated_csv)
        if not path.is_file():
            raise ConfigError(f"tabulated_csv file not found: {cfg.tabulated_csv}")
        return load_tabulated_csv(path, cfg.length, q=cfg.q)
    raise ConfigError(
        f"potential must be zero, constant, extraction or tabulated, got {kind!r}")


def _extraction_params(cfg: RunConfig) -> ExtractionParams:
    return ExtractionParams(p=cfg.p, p_prime=cfg.p_prime, g=cfg.g, q=cfg.q,
                            length=cfg.length, t_f=cfg.t_f, n_z=cfg.n_z,
                            r_max=cfg.r_max, dt=cfg.dt)


def _config_echo(params: ExtractionParams) -> dict:
    return {
        "p": params.p, "p_prime": params.p_prime, "g": params.g, "q": params.q,
        "length": params.length, "t_f": params.t_f, "n_z": params.n_z,
        "r_max": params.r_max, "dt": params.dt,
    }


def cmd_modes(cfg: RunConfig) -> int:
    grid = make_grid(cfg.n_z, cfg.length)
    if cfg.r_max < 0 or cfg.r_max > grid.nyquist_r:
        raise ConfigError(
            f"r_max must lie in [0, {grid.nyquist_r}] for n_z={cfg.n_z}, got {cfg.r_max}")
    rows = []
    for k in range(1, cfg.r_max + 1):
        for r in (k, -k):
            for lam in (-1, 1):
                mode = ModeIndex(lam=lam, r=r)
                rows.append(",".join([str(lam), str(r),
                                      fmt(mode_momentum(mode, grid)),
                                      fmt(mode_energy(mode, grid))]))
    _emit(_csv("lambda,r,p,eps", rows), cfg.out)
    return _EXIT_OK


def cmd_crosscheck(cfg: RunConfig) -> int:
    grid = make_grid(cfg.n_z, cfg.length)
    subject = two_mode_packet(cfg.p, cfg.p_prime, grid)
    V = build_potential(cfg)
    dts = cfg.dt_list
    if not dts:
        dts = (cfg.t_f / 64.0, cfg.t_f / 128.0, cfg.t_f / 256.0)
    rows = crosscheck(subject, V, cfg.t_f, dts)
    lines = [",".join([fmt(row.dt), fmt(row.error),
                       "" if row.order is None else fmt(row.order)])
             for row in rows]
    _emit(_csv("dt,error,order", lines), cfg.out)
    return _EXIT_OK


def _ledger_csv(report) -> str:
    rows = []
    for i, label in enumerate(report.ledger.labels):
        if isinstance(label, VacuumMode):
            kind, r_text, lam = "vacuum", str(label.r), "-1"
        else:
            kind, r_text, lam = "packet", "", "1"
        rows.append(",".join([str(i), kind, r_text, lam,
                              fmt(report.ledger.eps_initial[i]),
                              fmt(report.ledger.eps_final[i]),
                              fmt(report.ledger.delta_eps[i])]))
    return _csv("orbital_index,label,r,lambda,eps0,eps_final,delta_eps", rows)


def _report_json(report, command: str) -> dict:
    return {
        "schema_version": 1,
        "command": command,
        "config": _config_echo(report.params),
        "predicted_delta_packet": report.predicted_delta_packet,
        "measured_delta_packet": report.measured_delta_packet,
        "delta_vacuum": report.ledger.delta_vacuum,
        "delta_total": report.ledger.delta_total,
        "E_rel_initial": report.ledger.E_rel_initial,
        "E_rel_final": report.E_rel_final,
        "threshold_g": report.threshold_g,
        "max_abs_potential": report.max_abs_potential,
        "pauli_before": list(report.pauli_before),
        "pauli_after": list(report.pauli_after),
        "tolerances": {
            "packet_rel": report.tolerance_packet_rel,
            "vacuum": report.tolerance_vacuum,
            "pauli": report.tolerance_pauli,
        },
        "checks": [{"name": c.name, "value": c.value, "bound": c.bound,
                    "passed": c.passed} for c in report.checks],
        "ok": report.ok,
    }


def cmd_extract(cfg: RunConfig) -> int:
    params = _extraction_params(cfg)
    report = run_extraction(params)
    _emit(_json_render(_report_json(report, "extract")) + "\n", cfg.json_out)
    _emit(_ledger_csv(report), cfg.ledger_out)
    if not report.ok:
        for check in report.failed_checks():
            print(f"assertion failed: {check.name} value={fmt(check.value)} "
                  f"bound={fmt(check.bound)}", file=sys.stderr)
        return _EXIT_ASSERTION
    return _EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.g_list:
        raise ConfigError("g_list must be nonempty")
    params = _extraction_params(cfg)
    reports = sweep_g(params, cfg.g_list)
    rows = [",".join([fmt(rep.params.g), fmt(rep.measured_delta_packet),
                      fmt(rep.ledger.delta_vacuum), fmt(rep.ledger.delta_total),
                      fmt(rep.E_rel_final), fmt(rep.pauli_after[0])])
            for rep in reports]
    trailer = []
    if len(reports) >= 2:
        slope, intercept = sweep_slope(reports)
        trailer = [f"# slope={fmt(slope)}", f"# intercept={fmt(intercept)}"]
    _emit(_csv("g,delta_packet,delta_vacuum,delta_total,E_rel_final,pauli_offdiag",
               rows, trailer), cfg.out)
    return _EXIT_OK


def cmd_vacuum_audit(cfg: RunConfig) -> int:
    grid = make_grid(cfg.n_z, cfg.length)
    if cfg.r_max < 0 or cfg.r_max > grid.nyquist_r:
        raise ConfigError(
            f"r_max must lie in [0, {grid.nyquist_r}] for n_z={cfg.n_z}, got {cfg.r_max}")
    V = build_potential(cfg)
    dt = cfg.dt if cfg.dt is not None else cfg.t_f / 256.0
    if dt <= 0:
        raise ConfigError(f"dt must be positive, got {dt}")
    before = build_vacuum(grid, cfg.r_max)
    after = evolve_ensemble(before, V, cfg.t_f, dt)
    ledger = energy_ledger(before, after, cfg.r_max, cfg.length)
    max_abs_delta = float(np.max(np.abs(ledger.delta_eps))) if len(ledger.delta_eps) else 0.0
    pauli_before = pauli_audit(before)
    pauli_after = pauli_audit(after)
    tol = cfg.tolerance
    if tol is None:
        tol = 1e-6 if cfg.potential == "tabulated" else 1e-8
    pauli_tol = 1e-10
    checks = [
        ("vacuum_energies_unchanged", max_abs_delta, tol),
        ("pauli_after", max(pauli_after), pauli_tol),
    ]
    ok = all(value <= bound for _, value, bound in checks)
    doc = {
        "schema_version": 1,
        "command": "vacuum-audit",
        "config": {
            "potential": cfg.potential, "tabulated_csv": cfg.tabulated_csv,
            "q": cfg.q, "length": cfg.length, "t_f": cfg.t_f, "n_z": cfg.n_z,
            "r_max": cfg.r_max, "dt": dt,
        },
        "max_abs_delta_eps": max_abs_delta,
        "delta_vacuum": ledger.delta_vacuum,
        "pauli_before": list(pauli_before),
        "pauli_after": list(pauli_after),
        "tolerance": tol,
        "checks": [{"name": name, "value": value, "bound": bound,
                    "passed": value <= bound} for name, value, bound in checks],
        "ok": ok,
    }
    _emit(_json_render(doc) + "\n", cfg.json_out)
    if not ok:
        for name, value, bound in checks:
            if value > bound:
                print(f"assertion failed: {name} value={fmt(value)} "
                      f"bound={fmt(bound)}", file=sys.stderr)
        return _EXIT_ASSERTION
    return _EXIT_OK


_COMMANDS = {
    "modes": cmd_modes,
    "crosscheck": cmd_crosscheck,
    "extract": cmd_extract,
    "sweep": cmd_sweep,
    "vacuum-audit": cmd_vacuum_audit,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="flat key=value config file")
    common.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override one config key")
    parser = argparse.ArgumentParser(
        prog="diracsea",
        description="Exactly solvable massless Dirac dynamics on a circle: "
                    "eigenmode tables, solver cross-checks, and filled-sea "
                    "energy-extraction experiments.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    sub.add_parser("modes", parents=[common],
                   help="list (lambda, r, p, eps) for the cutoff set")
    sub.add_parser("crosscheck", parents=[common],
                   help="split-step vs exact solver error table")
    sub.add_parser("extract", parents=[common],
                   help="run one extraction experiment; JSON report + CSV ledger")
    sub.add_parser("sweep", parents=[common],
                   help="extraction runs over g_list with a slope summary")
    sub.add_parser("vacuum-audit", parents=[common],
                   help="evolve the bare sea and verify its energies stay put")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
