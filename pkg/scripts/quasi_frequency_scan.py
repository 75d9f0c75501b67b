#!/usr/bin/env python3
"""Fit the quasi-evolution rotation rate of massless states against the
synchrotron rate for a range of |z1|, far from and on the diagonal."""

import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from msfcs import coherent as ch
from msfcs import evolution as ev
from msfcs.params import FieldConfig, ParticleSpec, Species

field = FieldConfig(gamma=1.0, eps=1, vartheta=1, l0=0, mu=0.4)
spec = ParticleSpec(species=Species.MASSLESS2P1, mass=0.0, branch=1)

print(f"{'|z1|':>6} {'|z2|':>6} {'j':>2} {'om_fit/om-1':>14} {'shift*2 sqrt(pi)|z1|':>20}")
for u, v, j in ((20.0, 5.0, 1), (30.0, 7.0, 1), (40.0, 10.0, 1), (20.0, 20.0, 1), (30.0, 30.0, 1), (30.0, 30.0, 0)):
    cs = ch.CoherentState(z1=u, z2=v, j=j, field=field, spec=spec)
    q = ev.QuasiEvolution(cs)
    omega = field.gamma / (math.sqrt(2.0 * field.gamma) * u)
    times = np.linspace(0.0, 3.0 * 2.0 * math.pi / omega, 256)
    om_fit, _ = ev.fit_rotation_frequency(times, np.array([q.a1_mean(t) for t in times]))
    dev = om_fit / omega - 1.0
    scaled = dev * 2.0 * math.sqrt(math.pi) * u
    print(f"{u:6.1f} {v:6.1f} {j:2d} {dev:14.3e} {scaled:20.4f}")
print()
print("on the diagonal the scaled column approaches (-1)^j")
