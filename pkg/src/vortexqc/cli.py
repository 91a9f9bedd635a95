"""Scenario runner: ``vortexqc {verify,gate,synthesize,rabi,entangle}``.

Every run produces a JSON report with the stable keys ``scenario``,
``inputs``, ``matrices``, ``checks``, ``fidelities``, ``details`` and
``duration_ms``.  Complex matrices are written as nested ``[re, im]`` pairs.
The exit status is 0 iff every enabled check passes, 1 otherwise, 2 for
usage errors and 3 when the entangling protocol finds no beat.
"""
from __future__ import annotations

import argparse
import ast
import configparser
import csv
import io
import json
import math
import operator
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import braiding, dynamics, twoqubit, verify
from .clifford import max_abs
from .errors import ProtocolFailure

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PROTOCOL = 0, 1, 2, 3
SCENARIOS = ("verify", "gate", "synthesize", "rabi", "entangle")

REPORT_SCHEMA = {
    "type": "object",
    "required": ["scenario", "inputs", "matrices", "checks", "fidelities", "duration_ms"],
    "properties": {
        "scenario": {"enum": list(SCENARIOS)},
        "inputs": {"type": "object"},
        "matrices": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                },
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "tol", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "value": {"type": ["number", "string"]},
                    "tol": {"type": "number"},
                    "pass": {"type": "boolean"},
                },
            },
        },
        "fidelities": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["value", "tol", "pass"],
            },
        },
        "details": {"type": "object"},
        "duration_ms": {"type": "number"},
    },
}


class UsageError(ValueError):
    """Bad command line or config; exit status 2."""


# ---------------------------------------------------------------- config

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def parse_number(text: str) -> float:
    """Finite float from an arithmetic expression that may use ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise UsageError(f"cannot parse number {text!r}")

    try:
        value = ev(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc
    if not math.isfinite(value):
        raise UsageError(f"value {text!r} is not finite")
    return value


def parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"cannot parse boolean {text!r}")


def parse_int(text: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise UsageError(f"cannot parse integer {text!r}") from exc


CONFIG_SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "run": {"seed": parse_int, "tol": parse_number, "out": str},
    "verify": {"filter": str, "tol": parse_number},
    "gate": {"eta": parse_number, "phi": parse_number, "omega": parse_number, "compose": str},
    "synthesize": {"target": str, "random": parse_bool},
    "rabi": {
        "omega": parse_number,
        "dJ": parse_number,
        "pair": str,
        "steps": parse_int,
        "max_periods": parse_int,
        "trace": str,
        "trace_pair": parse_int,
        "method": str,
    },
    "entangle": {
        "J12": parse_number,
        "J1p2p": parse_number,
        "J11p": parse_number,
        "sweep": str,
        "strong": parse_number,
        "weak": parse_number,
    },
}


@dataclass
class RunConfig:
    scenario: str
    values: dict[str, Any] = field(default_factory=dict)
    seed: int = verify.DEFAULT_SEED
    tol: float | None = None
    out: str | None = None

    def get(self, key: str, default=None):
        value = self.values.get(key)
        return default if value is None else value


def load_config(path: str) -> dict[str, dict[str, Any]]:
    """Read an INI file with one section per scenario plus ``[run]``."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep key case (J12, dJ)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    out: dict[str, dict[str, Any]] = {}
    for section in parser.sections():
        if section not in CONFIG_SCHEMA:
            raise UsageError(f"unknown config section [{section}]")
        schema = CONFIG_SCHEMA[section]
        values = {}
        for key, raw in parser.items(section):
            if key not in schema:
                raise UsageError(f"unknown key {key!r} in [{section}]")
            values[key] = schema[key](raw)
        out[section] = values
    return out


# ---------------------------------------------------------------- reporting


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return _finite(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def matrix_pairs(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    # adding 0.0 folds -0.0 into 0.0
    return [[[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row] for row in m]


class Report:
    def __init__(self, scenario: str, inputs: dict):
        self.scenario = scenario
        self.inputs = inputs
        self.matrices: dict[str, list] = {}
        self.checks: list[dict] = []
        self.fidelities: dict[str, dict] = {}
        self.details: dict[str, Any] = {}
        self.csv_rows: list[list] | None = None
        self.csv_header: list[str] | None = None

    def matrix(self, name: str, m: np.ndarray) -> None:
        self.matrices[name] = matrix_pairs(m)

    def check(self, name: str, value: float, tol: float, mode: str = "max") -> bool:
        c = verify.Check(name, float(value), float(tol), mode)
        self.checks.append({"name": name, "value": _finite(float(value)), "tol": float(tol), "pass": c.passed})
        return c.passed

    def fidelity(self, name: str, value: float, tol: float) -> bool:
        ok = bool(np.isfinite(value) and value >= tol)
        self.fidelities[name] = {"value": float(value), "tol": float(tol), "pass": ok}
        return ok

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks) and all(f["pass"] for f in self.fidelities.values())

    def to_dict(self, duration_ms: float) -> dict:
        return {
            "scenario": self.scenario,
            "inputs": _jsonable(self.inputs),
            "matrices": self.matrices,
            "checks": self.checks,
            "fidelities": _jsonable(self.fidelities),
            "details": _jsonable(self.details),
            "duration_ms": duration_ms,
        }


def format_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.15g}" if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- scenarios


def cmd_verify(cfg: RunConfig) -> Report:
    name_filter = cfg.get("filter")
    tol = cfg.tol if cfg.tol is not None else cfg.get("tol")
    report = Report("verify", {"filter": name_filter, "tol": tol, "seed": cfg.seed})
    for c in verify.run_identity_suite(tol=tol, name_filter=name_filter, seed=cfg.seed):
        report.check(c.name, c.value, c.tol, c.mode)
    return report


def _parse_compose(text: str) -> list[tuple[float, float]]:
    factors = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise UsageError(f"compose factor {chunk!r} must be 'eta,phi'")
        factors.append((parse_number(parts[0]), parse_number(parts[1])))
    if not factors:
        raise UsageError("empty --compose")
    return factors


def cmd_gate(cfg: RunConfig) -> Report:
    eta = float(cfg.get("eta", 0.0))
    phi = float(cfg.get("phi", 0.0))
    omega = float(cfg.get("omega", 1.0))
    if omega <= 0:
        raise UsageError("omega must be positive")
    tol = cfg.tol if cfg.tol is not None else 1e-10
    report = Report("gate", {"eta": eta, "phi": phi, "omega": omega, "compose": cfg.get("compose")})

    M = braiding.m_gate(eta, phi).matrix
    composite = braiding.m31_odd(None, phi) @ braiding.dynamical_phase_matrix(eta) @ np.linalg.inv(
        braiding.m31_odd(None, phi)
    )
    composite_even = braiding.m31_even(None, phi) @ braiding.dynamical_phase_matrix(eta) @ np.linalg.inv(
        braiding.m31_even(None, phi)
    )
    report.matrix("M", M)
    report.matrix("composite_odd", composite)
    report.matrix("composite_even", composite_even)
    residual = max(braiding.block_residual(composite), braiding.block_residual(composite_even))
    report.check("blocks", residual, tol)
    report.check("composite_vs_closed_form", max_abs(composite - braiding.composite_reference(eta, phi)), tol)
    report.check("M_unitary", max_abs(M.conj().T @ M - np.eye(2)), tol)
    evolved = dynamics.gate_by_evolution(eta, phi, omega)
    report.check("evolution_vs_composite", max_abs(evolved - composite), tol)

    t = dynamics.dwell_time(eta, omega)
    report.details["blocks_ok"] = residual <= tol
    report.details["dwell_time"] = t
    report.details["schedule"] = [
        {"step": "exchange", "vortices": [3, 1], "orientation": "ccw"},
        {"step": "dwell", "pair": [1, 2], "J": omega, "duration": t},
        {"step": "exchange", "vortices": [3, 1], "orientation": "cw"},
    ]
    compose = cfg.get("compose")
    if compose:
        factors = _parse_compose(compose)
        # written order is matrix-product order: the rightmost factor acts first
        product = braiding.sequence_matrix(list(reversed(factors)))
        report.matrix("composed", product)
        infid = 1 - braiding.gate_fidelity(product, braiding.HADAMARD)
        report.details["compose_factors"] = [list(f) for f in factors]
        report.details["hadamard"] = infid <= 1e-10
        report.details["hadamard_infidelity"] = infid
    return report


def _parse_target(text: str) -> np.ndarray:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 4:
        raise UsageError("target needs 4 complex entries (row-major)")
    try:
        values = [complex(p.replace(" ", "").replace("i", "j")) for p in parts]
    except ValueError as exc:
        raise UsageError(f"cannot parse target entries: {exc}") from exc
    return np.array(values, dtype=complex).reshape(2, 2)


def cmd_synthesize(cfg: RunConfig) -> Report:
    from scipy.stats import unitary_group

    if cfg.get("random"):
        target = unitary_group.rvs(2, random_state=cfg.seed)
    elif cfg.get("target"):
        target = _parse_target(cfg.get("target"))
    else:
        raise UsageError("synthesize needs --target or --random")
    unitarity = max_abs(target.conj().T @ target - np.eye(2))
    if unitarity > 1e-8:
        raise UsageError(f"target is not unitary (residual {unitarity:.3g})")
    report = Report("synthesize", {"target": matrix_pairs(target), "seed": cfg.seed, "random": bool(cfg.get("random"))})
    seq = braiding.decompose_su2(target, tol=1e-8)
    rebuilt = braiding.sequence_matrix(seq)
    report.matrix("target", target)
    report.matrix("reconstruction", rebuilt)
    report.details["sequence"] = [{"eta": eta, "phi": phi} for eta, phi in seq]
    report.check("sequence_length", len(seq), 3)
    tol = cfg.tol if cfg.tol is not None else 1e-9
    report.fidelity("reconstruction", braiding.gate_fidelity(rebuilt, target), 1 - tol)
    return report


def cmd_rabi(cfg: RunConfig) -> Report:
    omega = float(cfg.get("omega", 1.0))
    dJ = float(cfg.get("dJ", 0.02))
    pair = tuple(int(x) for x in str(cfg.get("pair", "2,3")).split(","))
    steps = int(cfg.get("steps", dynamics.DEFAULT_STEPS_PER_PERIOD))
    max_periods = int(cfg.get("max_periods", 400))
    method = str(cfg.get("method", "magnus4"))
    if method not in dynamics.METHODS:
        raise UsageError(f"method must be one of {', '.join(dynamics.METHODS)}")
    if omega <= 0:
        raise UsageError("omega must be positive")
    if len(pair) != 2 or set(pair) - {1, 2, 3} or pair[0] == pair[1]:
        raise UsageError("pair must name two distinct vortices among 1, 2, 3")
    if steps < dynamics.MIN_STEPS_PER_PERIOD:
        raise UsageError(f"steps must be >= {dynamics.MIN_STEPS_PER_PERIOD}")
    if abs(dJ) / omega > 0.2:
        print(f"vortexqc: warning: dJ/omega = {abs(dJ) / omega:.3g} exceeds 0.2; "
              "rotating-wave deviations will be large", file=sys.stderr)
    report = Report(
        "rabi", {"omega": omega, "dJ": dJ, "pair": list(pair), "steps": steps, "max_periods": max_periods,
                 "method": method}
    )
    results = dynamics.rabi_transition_check(omega, dJ, pair, 0.0, steps, max_periods, method=method)
    table = []
    for r in results:
        name = f"{r.ground}->{r.excited}"
        if dJ != 0:
            report.check(f"transfer.{name}", r.max_transfer, 0.99, mode="min")
        report.check(f"parity_drift.{name}", r.parity_drift, 1e-9)
        report.check(f"norm_drift.{name}", r.norm_drift, 1e-9)
        report.check(f"cross_parity.{name}", r.cross_parity_leakage, 1e-6)
        table.append({"ground": r.ground, "excited": r.excited, "max_transfer": r.max_transfer,
                      "peak_time": r.peak_time})
    report.details["transitions"] = table
    k = int(cfg.get("trace_pair", 0))
    if not 0 <= k < len(results):
        raise UsageError("trace_pair out of range")
    tr = results[k].trace
    report.csv_header = ["t", *tr.labels]
    report.csv_rows = [[float(t), *map(float, row)] for t, row in zip(tr.times, tr.populations)]
    return report


def _parse_sweep(text: str) -> tuple[str, list[float]]:
    if "=" not in text:
        raise UsageError("sweep must look like J11p=0.2,0.1")
    key, values = text.split("=", 1)
    key = key.strip()
    if key not in ("J12", "J1p2p", "J11p"):
        raise UsageError(f"cannot sweep {key!r}")
    return key, [parse_number(v) for v in values.split(",") if v.strip()]


def cmd_entangle(cfg: RunConfig) -> Report:
    params = {k: float(cfg.get(k, d)) for k, d in (("J12", 1.0), ("J1p2p", 1.0), ("J11p", 0.02))}
    strong = float(cfg.get("strong", twoqubit.STRONG_THRESHOLD))
    weak = float(cfg.get("weak", twoqubit.WEAK_THRESHOLD))
    report = Report("entangle", {**params, "strong": strong, "weak": weak, "sweep": cfg.get("sweep")})
    note = (
        "fidelities are reported against both (-|00>+|11>)/sqrt2 (phi_minus, the state the steps "
        "produce) and (|00>+|11>)/sqrt2 (phi_plus, the usual Bell target); they differ by a relative sign"
    )
    report.details["sign_note"] = note

    sweep = cfg.get("sweep")
    if sweep:
        key, values = _parse_sweep(sweep)
        rows = []
        for v in values:
            r = twoqubit.entangling_protocol(**{**params, key: v}, strong=strong, weak=weak)
            rows.append({key: v, "fidelity_phi_minus": r.fidelity_phi_minus,
                         "fidelity_phi_plus": r.fidelity_phi_plus, "beat_detected": r.beat_detected,
                         "ratio_strong": r.conditions.ratio_strong, "ratio_weak": r.conditions.ratio_weak})
        report.details["sweep"] = rows
        fids = [row["fidelity_phi_minus"] for row in rows]
        worst = max((a - b for a, b in zip(fids, fids[1:])), default=0.0)
        report.check("sweep.monotone", worst, 1e-12)
        report.csv_header = [key, "fidelity_phi_minus", "fidelity_phi_plus"]
        report.csv_rows = [[row[key], row["fidelity_phi_minus"], row["fidelity_phi_plus"]] for row in rows]
        return report

    r = twoqubit.entangling_protocol(**params, strict=True, strong=strong, weak=weak)
    report.fidelity("phi_minus", r.fidelity_phi_minus, 0.99)
    report.details["fidelity_phi_plus"] = r.fidelity_phi_plus
    report.details["beat_period"] = r.beat_period
    report.details["dwell_time"] = r.dwell_time
    report.details["conditions"] = {
        "ratio_strong": r.conditions.ratio_strong,
        "ratio_weak": r.conditions.ratio_weak,
        "strong_ok": r.conditions.strong_ok,
        "weak_ok": r.conditions.weak_ok,
    }
    report.check("step3_parity_drift", r.step3_parity_drift, 1e-9)
    report.check("norm_drift", r.norm_drift, 1e-9)
    return report


COMMANDS = {
    "verify": cmd_verify,
    "gate": cmd_gate,
    "synthesize": cmd_synthesize,
    "rabi": cmd_rabi,
    "entangle": cmd_entangle,
}


# ---------------------------------------------------------------- entry point


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # Subcommands repeat the global flags; SUPPRESS keeps a flag given before
    # the subcommand from being reset to the subparser default.
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [run] and per-scenario sections", **kw)
    common.add_argument("--out", help="write the JSON report here instead of stdout", **kw)
    common.add_argument("--seed", type=int, help="seed for randomized suites", **kw)
    common.add_argument("--tol", type=parse_number, help="override tolerances", **kw)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)", **kw)
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="tabular output as CSV", **kw)
    common.add_argument("--no-timing", action="store_true", help="write duration_ms as 0", **kw)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="vortexqc", description=__doc__.splitlines()[0],
                                     parents=[_global_flags(suppress=False)])
    sub = parser.add_subparsers(dest="scenario", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--filter", help="only checks whose name contains this text")

    p = sub.add_parser("gate", parents=[common], help="one-qubit gate from exchange and dwell")
    p.add_argument("--eta", type=parse_number)
    p.add_argument("--phi", type=parse_number)
    p.add_argument("--omega", type=parse_number)
    p.add_argument("--compose", help="matrix product of M factors, e.g. 'pi/4,-pi/2;pi/2,0'")

    p = sub.add_parser("synthesize", parents=[common], help="decompose a 2x2 unitary into M gates")
    p.add_argument("--target", help="four complex entries, row-major, e.g. '0.7071,0.7071,0.7071,-0.7071'")
    p.add_argument("--random", action="store_const", const=True, help="Haar-random target from --seed")

    p = sub.add_parser("rabi", parents=[common], help="driven transitions between the two levels")
    p.add_argument("--omega", type=parse_number)
    p.add_argument("--dJ", type=parse_number)
    p.add_argument("--pair", help="driven coupling, e.g. '2,3'")
    p.add_argument("--steps", type=int, help="steps per drive period")
    p.add_argument("--max-periods", dest="max_periods", type=int)
    p.add_argument("--trace", help="write the population trace as CSV")
    p.add_argument("--trace-pair", dest="trace_pair", type=int, help="which transition to trace (0-3)")
    p.add_argument("--method", choices=dynamics.METHODS, help="integrator step (default magnus4)")

    p = sub.add_parser("entangle", parents=[common], help="two-qubit entangling protocol")
    p.add_argument("--J12", type=parse_number)
    p.add_argument("--J1p2p", type=parse_number)
    p.add_argument("--J11p", type=parse_number)
    p.add_argument("--sweep", help="e.g. 'J11p=0.2,0.1,0.05,0.02'")
    p.add_argument("--strong", type=parse_number, help="threshold for min(|J12|,|J1'2'|)/|J11'|")
    p.add_argument("--weak", type=parse_number, help="threshold for |J11'|/|J12-J1'2'|")
    return parser


_GLOBAL_KEYS = {"config", "out", "seed", "tol", "fmt", "no_timing", "scenario"}


def make_config(args: argparse.Namespace) -> RunConfig:
    sections = load_config(args.config) if args.config else {}
    run = sections.get("run", {})
    values = dict(sections.get(args.scenario, {}))
    for key, value in vars(args).items():
        if key not in _GLOBAL_KEYS and value is not None:
            values[key] = value
    seed = args.seed if args.seed is not None else run.get("seed", verify.DEFAULT_SEED)
    tol = args.tol if args.tol is not None else run.get("tol")
    out = args.out or run.get("out")
    return RunConfig(args.scenario, values, int(seed), tol, out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = make_config(args)
        report = COMMANDS[cfg.scenario](cfg)
    except UsageError as exc:
        print(f"vortexqc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProtocolFailure as exc:
        print(f"vortexqc: protocol failure: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    duration_ms = 0.0 if args.no_timing else round((time.perf_counter() - started) * 1000, 3)
    text = json.dumps(report.to_dict(duration_ms), indent=2) + "\n"

    trace_path = cfg.values.get("trace")
    if trace_path and report.csv_header:
        with open(trace_path, "w", newline="") as fh:
            fh.write(format_csv(report.csv_header, report.csv_rows))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    if args.fmt == "csv" and report.csv_header:
        sys.stdout.write(format_csv(report.csv_header, report.csv_rows))
    elif not cfg.out:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
