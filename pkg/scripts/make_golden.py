#!/usr/bin/env python3
"""Regenerate the golden data files under golden/ through the CLI surface.

These files are regression anchors for the CLI (byte-identical reruns) and
the fixed inputs for the figure renderer; they are never inputs to the
numerical test suite.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from msfcs.cli import main  # noqa: E402

ROOT = pathlib.Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "golden"

SYSTEM = {
    "gamma": 1.0,
    "eps": 1,
    "flux_ratio": 0.4,
    "sign_b": 1,
    "species": "NR2p1SpinUp",
    "mass": 1.0,
    "branch": 1,
}


def run(command: str, cfg: dict, out: pathlib.Path, fmt: str = "csv") -> None:
    cfg_path = GOLDEN / f"_cfg_{out.stem}.json"
    cfg_path.write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")
    rc = main([command, "--config", str(cfg_path), "--out", str(out), "--format", fmt])
    if rc != 0:
        raise SystemExit(f"{command} failed with exit code {rc}")
    print(f"wrote {out.relative_to(ROOT)}")


def main_golden() -> None:
    GOLDEN.mkdir(exist_ok=True)

    # two classical orbits: one avoiding the flux line (R < Rc), one
    # embracing it (R > Rc)
    run(
        "classical",
        {
            "system": {**SYSTEM, "species": "Spinless", "mass": 1.2},
            "classical": {
                "x": 2.5, "y": 0.0, "z": 0.0, "P1": 0.0, "P2": 1.1, "P3": 0.1,
                "mass": 1.2, "steps_per_period": 400,
            },
        },
        GOLDEN / "classical_avoid.csv",
    )
    run(
        "classical",
        {
            "system": {**SYSTEM, "species": "Spinless", "mass": 1.2},
            "classical": {
                "x": 1.8, "y": 0.0, "z": 0.0, "P1": 0.0, "P2": -2.2, "P3": 0.1,
                "mass": 1.2, "steps_per_period": 400,
            },
        },
        GOLDEN / "classical_embrace.csv",
    )

    # observable sweep across the diagonal (spread-ring source)
    run(
        "means",
        {
            "system": SYSTEM,
            "state": {"re_z1": 6.0, "im_z1": 0.0, "re_z2": 6.0, "im_z2": 0.0, "j": 1},
            "sweep": {"param": "abs_z1", "start": 3.0, "stop": 9.0, "num": 7},
        },
        GOLDEN / "means_sweep.csv",
    )

    # one mean-trajectory circle
    run(
        "evolve",
        {
            "system": SYSTEM,
            "state": {"re_z1": 2.0, "im_z1": 0.5, "re_z2": 4.0, "im_z2": -1.0, "j": 0},
            "evolution": {"mode": "NonRelT", "t_max": 6.3, "samples": 160},
        },
        GOLDEN / "evolve_circle.csv",
    )

    # regime reports along the diagonal (asymptotic-error source)
    for u in (10, 15, 20, 30, 40):
        run(
            "regimes",
            {
                "system": SYSTEM,
                "state": {"re_z1": float(u), "im_z1": 0.0, "re_z2": float(u), "im_z2": 0.0, "j": 1},
            },
            GOLDEN / f"regimes_u{u}.json",
            fmt="json",
        )

    # density grid of a type-0 state
    run(
        "density",
        {
            "system": SYSTEM,
            "state": {"re_z1": 2.0, "im_z1": 0.0, "re_z2": 4.0, "im_z2": 0.0, "j": 0},
            "density": {"rho_max": 70.0, "n_rho": 90, "n_phi": 72},
        },
        GOLDEN / "density_j0.csv",
    )


if __name__ == "__main__":
    main_golden()
