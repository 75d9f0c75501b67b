"""Figure renderers for the msfcs command-line outputs.

Five figure kinds, each reading the documented CSV/JSON columns of one CLI
command and writing a deterministic image (fixed size, fixed axis policy, no
randomness).  Input columns are validated up front; a missing column raises a
schema error naming the expected header.
"""

from __future__ import annotations

import csv
import json
import math
import pathlib

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (6.0, 6.0)
DPI = 130

REQUIRED_COLUMNS = {
    "TrajectoryTypes": ["t", "x", "y"],
    "SpreadRings": ["R_mean", "Rc_mean", "var_xy", "j"],
    "MeanCircle": ["time", "x_mean", "y_mean"],
    "DensityHeatmap": ["rho", "phi", "density"],
}


class SchemaError(ValueError):
    pass


def read_csv_columns(path: str | pathlib.Path, required: list[str]) -> dict[str, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {missing}; expected at least {required}, got {header}"
            )
        rows = list(reader)
    return {c: np.array([float(r[c]) for r in rows]) for c in header}


def _new_axes():
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    return fig, ax


def _finish(fig, ax, out_path: str, title: str) -> None:
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_trajectory_types(inputs: list[str], out_path: str) -> None:
    """Two classical orbits around the flux-line marker at the origin."""
    if len(inputs) != 2:
        raise SchemaError("TrajectoryTypes needs exactly two classical CSV inputs")
    fig, ax = _new_axes()
    styles = (("tab:blue", "orbit A"), ("tab:red", "orbit B"))
    for path, (color, label) in zip(inputs, styles):
        cols = read_csv_columns(path, REQUIRED_COLUMNS["TrajectoryTypes"])
        ax.plot(cols["x"], cols["y"], color=color, lw=1.4, label=label)
    ax.plot([0], [0], marker="*", ms=14, color="black", ls="none", label="flux line")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="upper right")
    _finish(fig, ax, out_path, "orbit types around the flux line")


def render_spread_rings(inputs: list[str], out_path: str) -> None:
    """Mean orbit, mean center circle and the position-spread annulus."""
    cols = read_csv_columns(inputs[0], REQUIRED_COLUMNS["SpreadRings"])
    # highlight the row with the smallest |R_mean - Rc_mean| (closest graze)
    idx = int(np.argmin(np.abs(cols["R_mean"] - cols["Rc_mean"])))
    r_mean = cols["R_mean"][idx]
    rc_mean = cols["Rc_mean"][idx]
    spread = math.sqrt(cols["var_xy"][idx])
    th = np.linspace(0.0, 2.0 * math.pi, 361)
    fig, ax = _new_axes()
    center = (rc_mean, 0.0)
    ax.plot(center[0] + r_mean * np.cos(th), center[1] + r_mean * np.sin(th),
            color="tab:blue", lw=1.6, label="mean orbit radius")
    ax.plot(rc_mean * np.cos(th), rc_mean * np.sin(th),
            color="tab:green", lw=1.2, ls="--", label="mean center distance")
    for sign in (-1.0, 1.0):
        rr = max(r_mean + sign * spread, 0.0)
        ax.plot(center[0] + rr * np.cos(th), center[1] + rr * np.sin(th),
                color="tab:blue", lw=0.8, alpha=0.5,
                label="position spread" if sign > 0 else None)
    ax.plot([0], [0], marker="*", ms=14, color="black", ls="none", label="flux line")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="upper right", fontsize=8)
    _finish(fig, ax, out_path, "orbit spread near the flux line")


def render_mean_circle(inputs: list[str], out_path: str) -> None:
    """Mean-position trace with the fitted circle annotated."""
    cols = read_csv_columns(inputs[0], REQUIRED_COLUMNS["MeanCircle"])
    x, y = cols["x_mean"], cols["y_mean"]
    a = np.column_stack([2 * x, 2 * y, np.ones_like(x)])
    sol, *_ = np.linalg.lstsq(a, x * x + y * y, rcond=None)
    cx, cy, c = sol
    radius = math.sqrt(max(c + cx * cx + cy * cy, 0.0))
    fig, ax = _new_axes()
    ax.plot(x, y, ".", ms=3.5, color="tab:blue", label="mean positions")
    th = np.linspace(0.0, 2.0 * math.pi, 361)
    ax.plot(cx + radius * np.cos(th), cy + radius * np.sin(th), color="tab:orange", lw=1.0, label="fitted circle")
    ax.plot([cx], [cy], "+", ms=10, color="tab:orange")
    ax.annotate(f"center ({cx:.4g}, {cy:.4g})\nradius {radius:.4g}", (cx, cy),
                textcoords="offset points", xytext=(8, 8), fontsize=8)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="upper right", fontsize=8)
    _finish(fig, ax, out_path, "mean-position circle")


def render_asymptotic_error(inputs: list[str], out_path: str) -> None:
    """Exact-minus-asymptotic deviations versus |z1| on a log scale, with the
    3x predicted-order acceptance line, from regime-report JSON bundles."""
    series: dict[str, list[tuple[float, float, float]]] = {}
    for path in inputs:
        with open(path, "r", encoding="utf-8") as fh:
            bundle = json.load(fh)
        state = bundle.get("_state")
        if state is None or "abs_z1" not in state:
            raise SchemaError(f"{path}: regime bundle lacks the _state record")
        u = float(state["abs_z1"])
        for claim, rec in bundle.items():
            if claim.startswith("_") or not rec.get("applicable"):
                continue
            series.setdefault(claim, []).append((u, rec["abs_diff"], rec["predicted_order"]))
    if not series:
        raise SchemaError("no applicable claims found in the regime bundles")
    fig, ax = _new_axes()
    for claim in sorted(series):
        pts = sorted(series[claim])
        us = [p[0] for p in pts]
        diffs = [max(p[1], 1e-300) for p in pts]
        ax.plot(us, diffs, marker="o", ms=3, lw=1.0, label=claim)
    # the acceptance threshold of the largest-budget claim as a reference line
    ref_claim = max(series, key=lambda c: max(p[2] for p in series[c]))
    pts = sorted(series[ref_claim])
    ax.plot([p[0] for p in pts], [3.0 * p[2] for p in pts], color="black", ls=":",
            lw=1.2, label="3 x predicted order")
    ax.set_yscale("log")
    ax.set_xlabel("|z1|")
    ax.set_ylabel("|exact - asymptotic|")
    ax.legend(loc="upper right", fontsize=7)
    _finish(fig, ax, out_path, "asymptotic-formula deviations")


def render_density_heatmap(inputs: list[str], out_path: str) -> None:
    """Polar density heatmap in Cartesian coordinates."""
    cols = read_csv_columns(inputs[0], REQUIRED_COLUMNS["DensityHeatmap"])
    rhos = np.unique(cols["rho"])
    phis = np.unique(cols["phi"])
    dens = cols["density"].reshape(rhos.size, phis.size)
    # close the azimuthal seam for plotting
    phis_c = np.concatenate([phis, [phis[0] + 2.0 * math.pi]])
    dens_c = np.concatenate([dens, dens[:, :1]], axis=1)
    r = np.sqrt(2.0 * rhos)  # radial coordinate for unit field scale
    pp, rr = np.meshgrid(phis_c, r)
    fig, ax = _new_axes()
    mesh = ax.pcolormesh(rr * np.cos(pp), rr * np.sin(pp), dens_c, shading="gouraud", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="density")
    ax.plot([0], [0], marker="*", ms=10, color="white", ls="none")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _finish(fig, ax, out_path, "position density")


RENDERERS = {
    "TrajectoryTypes": render_trajectory_types,
    "SpreadRings": render_spread_rings,
    "MeanCircle": render_mean_circle,
    "AsymptoticError": render_asymptotic_error,
    "DensityHeatmap": render_density_heatmap,
}

FIGURE_KINDS = tuple(RENDERERS)


def render(spec: dict, base_dir: str | pathlib.Path = ".") -> str:
    """Render one figure spec: {"kind", "input_csv", "output"}.

    Input and output paths are resolved against ``base_dir`` (the directory
    of the spec file when driven by the CLI).  Returns the output path.
    """
    for key in ("kind", "input_csv", "output"):
        if key not in spec:
            raise SchemaError(f"figure spec missing required key {key!r}")
    kind = spec["kind"]
    if kind not in RENDERERS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of {sorted(RENDERERS)}")
    base = pathlib.Path(base_dir)
    raw_inputs = spec["input_csv"]
    if isinstance(raw_inputs, str):
        raw_inputs = [raw_inputs]
    inputs = [str((base / p).resolve()) for p in raw_inputs]
    for p in inputs:
        if not pathlib.Path(p).exists():
            raise SchemaError(f"input file does not exist: {p}")
    out_path = str((base / spec["output"]).resolve())
    pathlib.Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    RENDERERS[kind](inputs, out_path)
    return out_path
