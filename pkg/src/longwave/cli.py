"""Command-line front end.

Usage::

    longwave dispersion config.json
    longwave propagate config.json [--m M] [--dt DT] [--out PATH]
    longwave invariance maxwell scenario.json
    longwave decompose config.json
    longwave energy config.json
    longwave sweep config.json

A config file is ``{"command": ..., "params": {...}, "output": {...}}``.
Exit status is 0 on success, 1 when a physical precondition fails (for
example a CFL violation) and 2 for configuration or I/O problems.  Every
failure prints a line starting with ``error:`` on stderr.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import copy
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from . import scenarios
from .dispersion import DispersionParams, group_velocity, omega_branches
from .errors import ConfigError, PreconditionError
from .fields import VectorField, curl, divergence, make_grid, residual_norms
from .gauge_em import energy_conservation_residual, helmholtz_decompose
from .output import emit_svg_plot, emit_table, read_table
from .snapshots import write_snapshot
from .telegraph import WavepacketSpec, run_simulation

COMMANDS = ("dispersion", "propagate", "invariance", "decompose", "energy", "sweep")

# -- schema --------------------------------------------------------------------

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_INT = {"type": "integer"}


def _obj(props, required=()):
    return {"type": "object", "properties": props, "required": list(required),
            "additionalProperties": False}


_PHYSICS = _obj({"m": {"type": "number", "minimum": 0}, "c": _POS, "hbar": _POS, "mu0": _POS})
_GRID = _obj({"points": {"type": "integer", "minimum": 4, "multipleOf": 2}, "length": _POS})
_GAUGE = _obj({"v": {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3},
               "k": _NUM, "amplitude": _NUM, "waveform": {"enum": ["sin", "cos"]}})
_OUTPUT = {**_obj({"csv_path": {"type": "string"}, "json_path": {"type": "string"},
                   "svg_path": {"type": "string"}, "snapshots_path": {"type": "string"}}),
           "minProperties": 1}

PARAM_SCHEMAS = {
    "dispersion": _obj({
        "m": {"type": "number", "minimum": 0}, "kmin": _NUM, "kmax": _NUM,
        "samples": {"type": "integer", "minimum": 1}, "spinor_sign": {"enum": [1, -1]},
        "c": _POS, "hbar": _POS, "spacing": {"enum": ["linear", "log"]},
    }, ["m", "kmin", "kmax", "samples"]),
    "propagate": _obj({
        "grid": _obj({"length": _POS, "points": {"type": "integer", "minimum": 4,
                                                  "multipleOf": 2}}, ["length", "points"]),
        "packet": _obj({"k0": _NUM, "sigma": _POS, "x0": _NUM, "amplitude": _NUM,
                        "branch": {"enum": ["hi", "lo", "mixed"]}, "spinor_sign": {"enum": [1, -1]},
                        "mix": {"type": "number", "minimum": 0, "maximum": 1}},
                       ["k0", "sigma", "x0"]),
        "physics": _obj({"m": {"type": "number", "minimum": 0}, "c": _POS, "hbar": _POS}, ["m"]),
        "run": _obj({"method": {"enum": ["spectral", "leapfrog"]}, "dt": _POS,
                     "steps": {"type": "integer", "minimum": 0},
                     "record_every": {"type": "integer", "minimum": 1}},
                    ["method", "dt", "steps"]),
    }, ["grid", "packet", "physics", "run"]),
    "invariance": _obj({
        "family": {"enum": list(scenarios.FAMILIES)},
        "fixture": {"enum": list(scenarios.FIXTURES)},
        "grid": _GRID, "gauge": _GAUGE, "physics": _PHYSICS, "dt": _POS,
        "snapshots": {"type": "integer", "minimum": 3}, "k": _NUM, "amplitude": _NUM,
        "normalize": {"type": "boolean"}, "flow": {"enum": ["circular", "rectilinear"]},
        "v0": _NUM,
    }),
    "decompose": _obj({
        "grid": _GRID, "field": {"enum": ["random", "gradient_plus_curl"]},
        "seed": _INT, "bandwidth": {"type": "integer", "minimum": 1},
    }),
    "energy": _obj({
        "grid": _GRID, "gauge": _GAUGE, "physics": _PHYSICS,
        "sign_convention": {"enum": ["derived", "paper"]},
        "source": {"enum": ["analytic", "history"]}, "dt": _POS, "t": _NUM,
        "snapshots": {"type": "integer", "minimum": 3},
    }),
    "sweep": _obj({
        "base": {"type": "object"}, "parameter": {"type": "string"},
        "values": {"type": "array", "items": _NUM, "minItems": 1},
    }, ["base", "parameter", "values"]),
}


def _schema(command):
    return _obj({"command": {"enum": [command]}, "params": PARAM_SCHEMAS[command],
                 "output": _OUTPUT}, ["command", "params", "output"])


@dataclass
class CommandConfig:
    command: str
    params: dict
    output: dict = field(default_factory=dict)


def _format_error(err) -> str:
    path = ".".join(str(p) for p in err.absolute_path)
    if err.validator == "required":
        missing = err.message.split("'")[1]
        return f"{path + '.' if path else ''}{missing}: missing required key"
    return f"{path or '<root>'}: {err.message}"


def parse_config(text, command: str | None = None) -> CommandConfig:
    """Validate a JSON document; every schema violation is reported at once."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON: {exc}") from None
    else:
        doc = copy.deepcopy(text)
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    if command is not None:
        doc.setdefault("command", command)
        if doc["command"] != command:
            raise ConfigError(f"config is for {doc['command']!r}, not {command!r}")
    cmd = doc.get("command")
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}; valid commands: {', '.join(COMMANDS)}")
    validator = jsonschema.Draft7Validator(_schema(cmd))
    problems = sorted(_format_error(e) for e in validator.iter_errors(doc))
    if problems:
        raise ConfigError(problems)
    return CommandConfig(cmd, doc["params"], doc["output"])


# -- commands ------------------------------------------------------------------

def _log(msg):
    print(msg, file=sys.stderr)


def _write_reports(reports, output):
    payload = [r.to_dict() for r in reports]
    if "json_path" in output:
        with open(output["json_path"], "w", newline="") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if "csv_path" in output:
        emit_table([(r.equation_id, r.l2, r.linf) for r in reports], ["equation_id", "l2", "linf"],
                   output["csv_path"])


def _headline(reports):
    return ", ".join(f"{r.equation_id} l2={r.l2:.3e}" for r in reports)


def cmd_dispersion(params, output):
    constants = scenarios.constants_from(params)
    dp = DispersionParams(params["m"], params.get("spinor_sign", 1), constants)
    n = params["samples"]
    if params.get("spacing", "linear") == "log":
        if not (params["kmin"] > 0 and params["kmax"] > 0):
            raise PreconditionError("log spacing needs kmin, kmax > 0")
        k = np.geomspace(params["kmin"], params["kmax"], n)
    else:
        k = np.linspace(params["kmin"], params["kmax"], n)
    pair = omega_branches(k, dp)
    vg = group_velocity(k, dp)
    rows = list(zip(k, np.atleast_1d(pair.omega_hi), np.atleast_1d(pair.omega_lo),
                    np.atleast_1d(vg)))
    if "csv_path" in output:
        emit_table(rows, ["k", "omega_hi", "omega_lo", "v_g"], output["csv_path"])
    if "json_path" in output:
        with open(output["json_path"], "w", newline="") as fh:
            json.dump([dict(zip(["k", "omega_hi", "omega_lo", "v_g"], map(float, r))) for r in rows],
                      fh, indent=2)
            fh.write("\n")
    if "svg_path" in output:
        emit_svg_plot([(k, pair.omega_hi), (k, pair.omega_lo)], ["omega_hi", "omega_lo"],
                      output["svg_path"], title="Dispersion branches", xlabel="k", ylabel="omega")
    _log(f"dispersion: {n} rows, m={dp.m}, max v_g={float(np.max(vg)):.6g}")


def cmd_propagate(params, output):
    g, pk, ph, run = params["grid"], params["packet"], params["physics"], params["run"]
    grid = make_grid(1, [g["length"]], [g["points"]])
    sign = pk.get("spinor_sign", 1)
    spec = WavepacketSpec(pk["k0"], pk["sigma"], pk["x0"], pk.get("amplitude", 1.0),
                          pk.get("branch", "hi"), sign, pk.get("mix", 0.5))
    dp = DispersionParams(ph["m"], sign, scenarios.constants_from(ph))
    keep = "snapshots_path" in output
    rec = run_simulation(spec, grid, run["method"], run["dt"], run["steps"],
                         run.get("record_every", 1), dp, keep_snapshots=keep)
    if "csv_path" in output:
        emit_table(zip(rec.times, rec.centroids, rec.l2_norms), ["t", "centroid", "l2_norm"],
                   output["csv_path"])
    expected = float(group_velocity(pk["k0"], dp))
    drift = float(np.max(np.abs(np.array(rec.l2_norms) / rec.l2_norms[0] - 1)))
    summary = {"measured_vg": rec.measured_vg, "fit_residual": rec.fit_residual,
               "expected_vg": expected, "norm_drift": drift, "records": len(rec.times)}
    if "json_path" in output:
        with open(output["json_path"], "w", newline="") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if "svg_path" in output:
        emit_svg_plot([(rec.times, rec.centroids)], ["centroid"], output["svg_path"],
                      title="Packet centroid", xlabel="t", ylabel="x")
    if keep:
        os.makedirs(output["snapshots_path"], exist_ok=True)
        psis = rec.snapshots.snapshots if rec.snapshots else []
        for i, (t, psi) in enumerate(zip(rec.times, psis)):
            write_snapshot(os.path.join(output["snapshots_path"], f"psi_{i:05d}.txt"), psi, t)
    vg = "undefined" if rec.measured_vg is None else f"{rec.measured_vg:.6g}"
    _log(f"propagate: {len(rec.times)} records, measured_vg={vg}, expected_vg={expected:.6g}, "
         f"norm_drift={drift:.3e}")


def cmd_invariance(params, output, family=None):
    family = family or params.get("family")
    if family is None:
        raise ConfigError("invariance needs a family (command-line argument or params.family)")
    reports = scenarios.run_family(family, params)
    _write_reports(reports, output)
    _log(f"invariance {family}: {_headline(reports)}")


def _band_limited(grid, rng, bandwidth):
    comps = np.zeros((3,) + grid.shape, dtype=complex)
    k_idx = np.meshgrid(*[np.fft.fftfreq(n, 1.0 / n) for n in grid.points], indexing="ij")
    mask = np.all([np.abs(k) <= bandwidth for k in k_idx], axis=0)
    for i in range(3):
        spec = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * mask
        comps[i] = np.fft.ifftn(spec).real * grid.size
    return VectorField(grid, comps)


def cmd_decompose(params, output):
    g = params.get("grid", {})
    grid = make_grid(3, [g.get("length", 2 * np.pi)] * 3, [g.get("points", 32)] * 3)
    kind = params.get("field", "random")
    if kind == "random":
        rng = np.random.default_rng(params.get("seed", 0))
        A = _band_limited(grid, rng, params.get("bandwidth", grid.points[0] // 4))
    else:
        x, y, _ = (np.broadcast_to(c, grid.shape) for c in grid.coords)
        A = VectorField.from_components(grid, np.cos(x) - np.sin(y), np.sin(x), 0.0)
    perp, par = helmholtz_decompose(A)
    scale = A.scale()
    reports = [residual_norms(curl(par) / scale, "curl_A_par"),
               residual_norms(divergence(perp) / scale, "div_A_perp"),
               residual_norms((perp + par - A) / scale, "reconstruction")]
    _write_reports(reports, output)
    if "snapshots_path" in output:
        os.makedirs(output["snapshots_path"], exist_ok=True)
        write_snapshot(os.path.join(output["snapshots_path"], "A_perp.txt"), perp)
        write_snapshot(os.path.join(output["snapshots_path"], "A_par.txt"), par)
    _log(f"decompose: {_headline(reports)}")


def cmd_energy(params, output):
    constants = scenarios.constants_from(params.get("physics"))
    g = params.get("grid", {})
    grid = make_grid(3, [g.get("length", 2 * np.pi)] * 3, [g.get("points", 16)] * 3)
    f = scenarios._gauge(params, constants)
    conv = params.get("sign_convention", "derived")
    if params.get("source", "analytic") == "analytic":
        rep = energy_conservation_residual(f, constants, conv, grid, [params.get("t", 0.0)])
    else:
        hist = f.history(grid, params.get("dt", 1e-3), params.get("snapshots", 3),
                         params.get("t", 0.0))
        rep = energy_conservation_residual(hist, constants, conv)
    _write_reports([rep], output)
    _log(f"energy: {_headline([rep])}")


def _set_path(doc, dotted, value):
    keys = dotted.split(".")
    node = doc
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def _sweep_worker(base, parameter, value, tmpdir, index):
    doc = copy.deepcopy(base)
    _set_path(doc, parameter, value)
    path = os.path.join(tmpdir, f"run_{index:05d}.csv")
    doc["output"] = {"csv_path": path}
    cfg = parse_config(doc)
    COMMAND_FUNCS[cfg.command](cfg.params, cfg.output)
    return read_table(path)


def cmd_sweep(params, output):
    base = params["base"]
    if base.get("command") not in ("dispersion", "propagate"):
        raise ConfigError("sweep base.command must be 'dispersion' or 'propagate'")
    if "csv_path" not in output:
        raise ConfigError("sweep needs output.csv_path")
    values = params["values"]
    cap = int(os.environ.get("LONGWAVE_THREADS", os.cpu_count() or 1))
    workers = max(1, min(cap, len(values)))
    with tempfile.TemporaryDirectory() as tmp:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_worker, base, params["parameter"], v, tmp, i)
                       for i, v in enumerate(values)]
            results = [fut.result() for fut in futures]
    key = params["parameter"].split(".")[-1]
    columns = [key] + results[0][0]
    rows = [[v, *row] for v, (_, table) in zip(values, results) for row in table]
    emit_table(rows, columns, output["csv_path"])
    _log(f"sweep: {len(values)} runs over {params['parameter']}, {len(rows)} rows")


COMMAND_FUNCS = {
    "dispersion": cmd_dispersion,
    "propagate": cmd_propagate,
    "invariance": cmd_invariance,
    "decompose": cmd_decompose,
    "energy": cmd_energy,
    "sweep": cmd_sweep,
}


def run_command(config: CommandConfig, family: str | None = None) -> int:
    """Execute a validated config; returns the process exit status."""
    try:
        if config.command == "invariance":
            cmd_invariance(config.params, config.output, family)
        else:
            COMMAND_FUNCS[config.command](config.params, config.output)
    except ConfigError as exc:
        for problem in exc.problems:
            _log(f"error: {problem}")
        return 2
    except PreconditionError as exc:
        _log(f"error: {exc}")
        return 1
    except OSError as exc:
        _log(f"error: {exc}")
        return 2
    return 0


def _apply_overrides(doc, command, args):
    params = doc.setdefault("params", {})
    output = doc.setdefault("output", {})
    if args.m is not None:
        if command == "dispersion":
            params["m"] = args.m
        else:
            params.setdefault("physics", {})["m"] = args.m
    if args.dt is not None:
        if command == "propagate":
            params.setdefault("run", {})["dt"] = args.dt
        else:
            params["dt"] = args.dt
    if args.out is not None:
        key = "csv_path" if command in ("dispersion", "propagate", "sweep") else "json_path"
        output[key] = args.out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="longwave", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "invariance":
            p.add_argument("family", choices=scenarios.FAMILIES)
        p.add_argument("config", help="JSON config file")
        p.add_argument("--m", type=float, help="override the particle mass")
        p.add_argument("--dt", type=float, help="override the time step")
        p.add_argument("--out", help="override the primary output path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        _log(f"error: cannot read config: {exc}")
        return 2
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        _log(f"error: malformed JSON: {exc}")
        return 2
    if not isinstance(doc, dict):
        _log("error: config must be a JSON object")
        return 2
    _apply_overrides(doc, args.command, args)
    try:
        config = parse_config(doc, args.command)
    except ConfigError as exc:
        for problem in exc.problems:
            _log(f"error: {problem}")
        return 2
    return run_command(config, getattr(args, "family", None))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
