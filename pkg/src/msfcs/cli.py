"""Command-line surface: observable tables, evolution traces, classical
oracles, density grids, regime reports and the verification suite.

Configuration is a JSON file validated against a strict schema (unknown keys
rejected).  Data outputs are deterministic CSV/JSON with 17 significant
digits and LF line endings; run metadata goes to a sidecar ``.meta.json``
next to the data file, never into the data itself.

Exit codes: 0 success, 2 configuration error, 3 numeric/invariant failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np

from . import __version__
from . import classical as cl
from . import coherent as ch
from . import evolution as ev
from . import semiclassics as sc
from .acceptance import run_all
from .params import FieldConfig, ParticleSpec, Species
from .qseries import ConvergenceError, RegimeError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_SIGN = {"enum": [-1, 1]}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["system"],
    "properties": {
        "system": {
            "type": "object",
            "additionalProperties": False,
            "required": ["gamma", "eps", "flux_ratio", "sign_b", "species", "mass"],
            "properties": {
                "gamma": {"type": "number", "exclusiveMinimum": 0},
                "eps": _SIGN,
                "flux_ratio": {"type": "number"},
                "sign_b": _SIGN,
                "species": {"enum": [s.value for s in Species]},
                "mass": {"type": "number", "minimum": 0},
                "sigma": {"enum": [-1, 0, 1]},
                "branch": _SIGN,
                "s_pol": _SIGN,
                "p3": {"type": "number"},
                "lambda": {"type": "number"},
            },
        },
        "state": {
            "type": "object",
            "additionalProperties": False,
            "required": ["re_z1", "im_z1", "re_z2", "im_z2", "j"],
            "properties": {
                "re_z1": {"type": "number"},
                "im_z1": {"type": "number"},
                "re_z2": {"type": "number"},
                "im_z2": {"type": "number"},
                "j": {"enum": [0, 1]},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["param"],
            "properties": {
                "param": {"enum": ["abs_z1", "abs_z2", "j", "mu"]},
                "values": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "start": {"type": "number"},
                "stop": {"type": "number"},
                "num": {"type": "integer", "minimum": 2},
                "spacing": {"enum": ["linear", "geom"]},
            },
        },
        "evolution": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode", "t_max", "samples"],
            "properties": {
                "mode": {"enum": ["NonRelT", "LightCone", "QuasiCS"]},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "samples": {"type": "integer", "minimum": 2},
            },
        },
        "classical": {
            "type": "object",
            "additionalProperties": False,
            "required": ["x", "y", "z", "P1", "P2", "P3", "mass"],
            "properties": {
                "x": {"type": "number"},
                "y": {"type": "number"},
                "z": {"type": "number"},
                "P1": {"type": "number"},
                "P2": {"type": "number"},
                "P3": {"type": "number"},
                "mass": {"type": "number", "exclusiveMinimum": 0},
                "periods": {"type": "number", "exclusiveMinimum": 0},
                "steps_per_period": {"type": "integer", "minimum": 16},
            },
        },
        "density": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rho_max": {"type": "number", "exclusiveMinimum": 0},
                "n_rho": {"type": "integer", "minimum": 4},
                "n_phi": {"type": "integer", "minimum": 4},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
            },
        },
    },
}


class ConfigError(ValueError):
    pass


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    import jsonschema

    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config schema violation: {exc.message} (at {'/'.join(map(str, exc.path))})") from exc
    return cfg


def build_system(cfg: dict) -> tuple[FieldConfig, ParticleSpec]:
    sy = cfg["system"]
    try:
        field = FieldConfig.from_flux(sy["gamma"], sy["eps"], sy["flux_ratio"], sy["sign_b"])
        spec = ParticleSpec(
            species=Species(sy["species"]),
            mass=sy["mass"],
            sigma=sy.get("sigma", 0),
            branch=sy.get("branch", 1),
            s_pol=sy.get("s_pol", 1),
            lam=sy.get("lambda", 0.0),
            p3=sy.get("p3", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return field, spec


def build_state(cfg: dict, field: FieldConfig, spec: ParticleSpec) -> ch.CoherentState:
    st = cfg.get("state")
    if st is None:
        raise ConfigError("this command requires a 'state' block")
    try:
        return ch.CoherentState(
            z1=complex(st["re_z1"], st["im_z1"]),
            z2=complex(st["re_z2"], st["im_z2"]),
            j=st["j"],
            field=field,
            spec=spec,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_table(path: str | None, fmt: str, header: list[str], rows: list[list[float]], cfg: dict) -> None:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            {"columns": header, "rows": [[float(v) for v in row] for row in rows]},
            indent=2,
            sort_keys=True,
        ) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    meta = {"tool": "msfcs", "version": __version__, "columns": header, "config": cfg}
    with open(path + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


MEANS_COLUMNS = [
    "gamma", "eps", "vartheta", "l0", "mu", "mass", "branch", "j",
    "re_z1", "im_z1", "re_z2", "im_z2",
    "norm_scaled", "norm_abs_err", "n1_mean", "n2_mean",
    "a1_re", "a1_im", "a2_re", "a2_im", "x_mean", "y_mean",
    "R2_mean", "Rc2_mean", "R_mean", "Rc_mean", "Jz_mean",
    "var_n1", "var_n2", "var_xy", "d_offset", "cross_kernel_abs",
]


def _means_row(args) -> list[float]:
    field, spec, z1, z2, j = args
    cs = ch.CoherentState(z1=z1, z2=z2, j=j, field=field, spec=spec)
    obs = ch.observables(cs)
    other = ch.CoherentState(z1=z1, z2=z2, j=1 - j, field=field, spec=spec)
    cross = abs(complex(ch.norm_kernel(cs, other).value))
    return [
        field.gamma, field.eps, field.vartheta, field.l0, field.mu, spec.mass, spec.branch, j,
        z1.real, z1.imag, z2.real, z2.imag,
        complex(obs.norm.value).real, obs.norm.abs_err, obs.n1_mean, obs.n2_mean,
        obs.a1_mean.real, obs.a1_mean.imag, obs.a2_mean.real, obs.a2_mean.imag,
        obs.x_mean, obs.y_mean,
        obs.R2_mean, obs.Rc2_mean, obs.R_mean, obs.Rc_mean, obs.Jz_mean,
        obs.var_n1, obs.var_n2, obs.var_xy, obs.d_offset, cross,
    ]


def _sweep_values(cfg: dict) -> list[float] | None:
    sw = cfg.get("sweep")
    if sw is None:
        return None
    if "values" in sw:
        return [float(v) for v in sw["values"]]
    for key in ("start", "stop", "num"):
        if key not in sw:
            raise ConfigError("sweep needs either 'values' or start/stop/num")
    if sw.get("spacing", "linear") == "geom":
        return list(np.geomspace(sw["start"], sw["stop"], sw["num"]))
    return list(np.linspace(sw["start"], sw["stop"], sw["num"]))


def cmd_means(cfg: dict, out: str | None, fmt: str) -> int:
    field, spec = build_system(cfg)
    base = build_state(cfg, field, spec)
    values = _sweep_values(cfg)
    tasks = []
    if values is None:
        tasks.append((field, spec, complex(base.z1), complex(base.z2), base.j))
    else:
        param = cfg["sweep"]["param"]
        for val in values:
            z1, z2, j, f = complex(base.z1), complex(base.z2), base.j, field
            if param == "abs_z1":
                ph = np.angle(z1) if z1 != 0 else 0.0
                z1 = val * np.exp(1j * ph)
            elif param == "abs_z2":
                ph = np.angle(z2) if z2 != 0 else 0.0
                z2 = val * np.exp(1j * ph)
            elif param == "j":
                j = int(val)
                if j not in (0, 1):
                    raise ConfigError("sweep over j takes values 0 and 1 only")
            elif param == "mu":
                f = FieldConfig(gamma=field.gamma, eps=field.eps, vartheta=field.vartheta, l0=field.l0, mu=float(val))
            tasks.append((f, spec, z1, z2, j))
    with ThreadPoolExecutor(max_workers=min(8, max(1, len(tasks)))) as pool:
        rows = list(pool.map(_means_row, tasks))
    write_table(out, fmt, MEANS_COLUMNS, rows, cfg)
    return EXIT_OK


EVOLVE_COLUMNS = ["time", "x_mean", "y_mean", "abs_a1", "arg_a1", "norm", "R2_mean"]


def cmd_evolve(cfg: dict, out: str | None, fmt: str) -> int:
    field, spec = build_system(cfg)
    cs = build_state(cfg, field, spec)
    evb = cfg.get("evolution")
    if evb is None:
        raise ConfigError("evolve requires an 'evolution' block")
    mode = ev.EvolutionMode(evb["mode"])
    times = np.linspace(0.0, evb["t_max"], evb["samples"])
    norm0 = complex(ch.norm_kernel(cs).value).real
    r2 = ch.mean_R2_Rc2(cs).R2_mean  # commutes with every driver used here
    rows = []
    if mode is ev.EvolutionMode.QUASI_CS:
        q = ev.QuasiEvolution(cs)
        for t in times:
            a1 = q.a1_mean(t)
            x, y = q.mean_xy(t)
            rows.append([t, x, y, abs(a1), np.angle(a1), q.norm(t), r2])
    else:
        rate = ev.rotation_frequency(cs, mode)
        # phase chosen so the trace starts at the configured state
        psi0 = -float(np.angle(-complex(cs.z1) / cs.u)) if cs.u > 0 else 0.0
        evo = ev.EvolutionSpec(mode=mode, omega=abs(rate), psi0=psi0, times=tuple(times))
        tr = ev.mean_trajectory(cs, evo)
        a1_ratio = ch.mean_a(cs, 1) / complex(cs.z1) if cs.z1 != 0 else 0.0
        for i, t in enumerate(times):
            z1t = complex(cs.z1) * np.exp(-1j * rate * t)
            a1 = z1t * a1_ratio
            rows.append([t, tr.x[i], tr.y[i], abs(a1), np.angle(a1), norm0, r2])
    write_table(out, fmt, EVOLVE_COLUMNS, rows, cfg)
    return EXIT_OK


CLASSICAL_COLUMNS = ["t", "x", "y", "z", "P1", "P2", "P3", "abs_a1", "abs_a2", "Lz", "pos_err"]


def cmd_classical(cfg: dict, out: str | None, fmt: str) -> int:
    field, _ = build_system(cfg)
    blk = cfg.get("classical")
    if blk is None:
        raise ConfigError("classical requires a 'classical' block")
    state = cl.PhaseState(
        x=blk["x"], y=blk["y"], z=blk["z"], P1=blk["P1"], P2=blk["P2"], P3=blk["P3"], mass=blk["mass"]
    )
    traj = cl.trajectory_from_state(state, field)
    period = 2.0 * math.pi / traj.omega
    periods = blk.get("periods", 1.0)
    steps = blk.get("steps_per_period", 2000)
    samples = cl.integrate_lorentz(state, field.gamma, field.eps, periods * period, period / steps)
    rows = []
    for i in range(samples.t.size):
        s = cl.PhaseState(
            samples.x[i], samples.y[i], samples.z[i], samples.P1[i], samples.P2[i], samples.P3[i], samples.mass
        )
        inv = cl.invariants_of(s, field)
        xx, yy, zz = cl.trajectory_at(traj, samples.t[i])
        err = math.dist((xx, yy, zz), (samples.x[i], samples.y[i], samples.z[i]))
        rows.append(
            [samples.t[i], samples.x[i], samples.y[i], samples.z[i], samples.P1[i], samples.P2[i], samples.P3[i], abs(inv.a1), abs(inv.a2), inv.Lz, err]
        )
    write_table(out, fmt, CLASSICAL_COLUMNS, rows, cfg)
    return EXIT_OK


DENSITY_COLUMNS = ["rho", "phi", "density"]


def cmd_density(cfg: dict, out: str | None, fmt: str) -> int:
    field, spec = build_system(cfg)
    cs = build_state(cfg, field, spec)
    blk = cfg.get("density", {})
    rad = ch.mean_R2_Rc2(cs)
    default_hi = 0.5 * field.gamma * (math.sqrt(rad.R2_mean) + math.sqrt(rad.Rc2_mean) + 10.0) ** 2
    rho_max = blk.get("rho_max", default_hi)
    n_rho = blk.get("n_rho", 120)
    n_phi = blk.get("n_phi", 64)
    rhos = np.linspace(rho_max / n_rho, rho_max, n_rho)
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    dens = ch.density_grid(cs, phis, rhos)
    rows = [[r, p, dens[i, k]] for i, r in enumerate(rhos) for k, p in enumerate(phis)]
    write_table(out, fmt, DENSITY_COLUMNS, rows, cfg)
    return EXIT_OK


def cmd_regimes(cfg: dict, out: str | None, fmt: str) -> int:
    field, spec = build_system(cfg)
    cs = build_state(cfg, field, spec)
    reports = sc.compare_all(field, spec, complex(cs.z1), complex(cs.z2), cs.j)
    bundle: dict[str, Any] = {
        "_state": {"abs_z1": cs.u, "abs_z2": cs.v, "j": cs.j, "gamma": field.gamma, "mu": field.mu},
    }
    bundle.update(
        {
            r.claim: {
                "regime": r.regime.value,
                "applicable": r.applicable,
                "exact": r.exact,
                "asymptotic": r.asymptotic,
                "abs_diff": r.abs_diff,
                "predicted_order": r.predicted_order,
                "passed": r.passed,
            }
            for r in reports
        }
    )
    text = json.dumps(bundle, indent=2, sort_keys=True, allow_nan=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    failed = [r.claim for r in reports if r.passed is False]
    if failed:
        sys.stderr.write(f"failed claims: {', '.join(failed)}\n")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify() -> int:
    results = run_all()
    width = max(len(r.title) for r in results)
    all_ok = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark}  {r.number:2d}  {r.title:<{width}}  ({r.seconds:6.2f}s)  {r.detail}")
        all_ok &= r.passed
    print("verification " + ("PASSED" if all_ok else "FAILED"))
    return EXIT_OK if all_ok else EXIT_NUMERIC


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="msfcs",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "column orders are fixed:\n"
            f"  means:     {', '.join(MEANS_COLUMNS)}\n"
            f"  evolve:    {', '.join(EVOLVE_COLUMNS)}\n"
            f"  classical: {', '.join(CLASSICAL_COLUMNS)}\n"
            f"  density:   {', '.join(DENSITY_COLUMNS)}\n"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("means", "evolve", "classical", "density", "regimes"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_parser("verify")
    args = parser.parse_args(argv)

    if args.command == "verify":
        return cmd_verify()
    try:
        cfg = load_config(args.config)
        out = args.out or cfg.get("output", {}).get("path")
        fmt = args.format or cfg.get("output", {}).get("format", "csv")
        handler = {
            "means": cmd_means,
            "evolve": cmd_evolve,
            "classical": cmd_classical,
            "density": cmd_density,
            "regimes": cmd_regimes,
        }[args.command]
        return handler(cfg, out, fmt)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except (ConvergenceError, RegimeError, ch.DegenerateStateError, ev.SamplingError) as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except ValueError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
