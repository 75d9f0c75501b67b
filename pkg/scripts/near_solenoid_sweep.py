#!/usr/bin/env python3
"""Sweep |z1| across the diagonal at fixed |z2| and print how the mean
moving-off distance and the position spread behave near the flux line."""

import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from msfcs import coherent as ch
from msfcs.params import FieldConfig, ParticleSpec, Species

field = FieldConfig(gamma=1.0, eps=1, vartheta=1, l0=0, mu=0.4)
spec = ParticleSpec(species=Species.NR2P1_SPIN_UP, mass=1.0, branch=1)

v = 25.0
print(f"|z2| = {v}, j follows the dominant parameter")
print(f"{'|z1|':>6} {'j':>2} {'d_offset':>12} {'sqrt(var_xy)':>13} {'VarN1/|z1|^2':>13}")
for u in np.linspace(5.0, 45.0, 9):
    j = 1 if u > v else 0
    cs = ch.CoherentState(z1=float(u), z2=v, j=j, field=field, spec=spec)
    rad = ch.mean_R2_Rc2(cs)
    var = ch.variances(cs)
    print(
        f"{u:6.1f} {j:2d} {rad.d_offset:12.5f} {math.sqrt(var.var_xy):13.5f} "
        f"{var.var_n1 / u**2:13.5f}"
    )
print()
print("near-diagonal reference: |d| ->", f"{math.sqrt(2 / math.pi):.5f}",
      "and VarN1/|z1|^2 ->", f"{1 - 1 / math.pi:.5f}")
