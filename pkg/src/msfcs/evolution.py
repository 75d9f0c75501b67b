"""Time evolution of the trajectory-type states.

Three drivers: lab-time rotation of z1 (nonrelativistic species), light-cone
rotation in x_minus (relativistic 3+1), and the massless 2+1 quasi-evolution
where each lattice term acquires a phase from the spectral frequency
Omega(n1) = Pi0(n1+1) - Pi0(n1).  The first two preserve the state form
exactly, so the mean position runs on an exact circle; the massless case
keeps a2 frozen and dephases a1 slowly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coherent import CoherentState, mean_a, sector_sum
from .params import Species
from .qseries import term_table


class EvolutionMode(Enum):
    NON_REL_T = "NonRelT"
    LIGHT_CONE = "LightCone"
    QUASI_CS = "QuasiCS"


class SamplingError(ValueError):
    """Phase samples too sparse to unwrap unambiguously."""


_MODE_SPECIES = {
    EvolutionMode.NON_REL_T: (
        Species.SPINLESS,
        Species.NR2P1_SPIN_UP,
        Species.NR2P1_SPIN_DOWN,
        Species.NR3P1,
    ),
    EvolutionMode.LIGHT_CONE: (Species.REL3P1,),
    EvolutionMode.QUASI_CS: (Species.MASSLESS2P1,),
}


@dataclass(frozen=True)
class EvolutionSpec:
    """Evolution mode, positive rotation rate, initial phase and sample times."""

    mode: EvolutionMode
    omega: float
    psi0: float
    times: tuple[float, ...]

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        t = np.asarray(self.times, dtype=float)
        if t.size and np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")


def z1_of_t(mod_z1: float, psi0: float, sigma: int, omega: float, t) -> complex | np.ndarray:
    """Rotating first parameter -|z1| exp(-i sigma (omega t + psi0))."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    if mod_z1 < 0:
        raise ValueError("mod_z1 must be nonnegative")
    psi = omega * np.asarray(t, dtype=float) + psi0
    out = -mod_z1 * np.exp(-1j * sigma * psi)
    return complex(out) if np.isscalar(t) or np.asarray(t).ndim == 0 else out


def z1_of_xminus(mod_z1: float, psi0: float, omega_tilde: float, x_minus) -> complex | np.ndarray:
    """Light-cone rotation -|z1| exp(-i (omega_tilde x_minus + psi0)).

    omega_tilde may be negative (antiparticle branch), reversing the sense.
    """
    if omega_tilde == 0:
        raise ValueError("omega_tilde must be nonzero")
    if mod_z1 < 0:
        raise ValueError("mod_z1 must be nonnegative")
    psi = omega_tilde * np.asarray(x_minus, dtype=float) + psi0
    out = -mod_z1 * np.exp(-1j * psi)
    return complex(out) if np.isscalar(x_minus) or np.asarray(x_minus).ndim == 0 else out


def rotation_frequency(cs: CoherentState, mode: EvolutionMode) -> float:
    """Signed z1 rotation rate of the state under the given driver."""
    sp = cs.spec
    g = cs.field.gamma
    if mode is EvolutionMode.NON_REL_T:
        return sp.branch * g / sp.mass
    if mode is EvolutionMode.LIGHT_CONE:
        return g / (sp.lam * sp.mass)
    if mode is EvolutionMode.QUASI_CS:
        energy = math.sqrt(2.0 * g) * cs.u
        return sp.branch * g / energy
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class MeanTrace:
    """Mean-position trace with the exact circle parameters it must lie on."""

    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    center: complex  # in the x - i eps y encoding
    radius: float
    rate: float  # signed phase rate of the encoded mean


def mean_trajectory(cs0: CoherentState, evo: EvolutionSpec) -> MeanTrace:
    """Mean (x, y) of the evolved state at each requested time.

    The kernel ratios depend only on |z1|, |z2|, which the evolution leaves
    fixed, so the trace is an exact circle of radius sqrt(2/gamma)|a1| around
    sqrt(2/gamma) a2, traversed at the mode's rotation rate.
    """
    sp = cs0.spec.species
    if sp not in _MODE_SPECIES[evo.mode]:
        raise ValueError(f"{sp.value} cannot evolve in mode {evo.mode.value}")
    if evo.mode is EvolutionMode.QUASI_CS:
        raise ValueError("use QuasiEvolution for the massless driver")
    g = cs0.field.gamma
    rate = rotation_frequency(cs0, evo.mode)
    if abs(abs(rate) - evo.omega) > 1e-9 * evo.omega:
        raise ValueError(f"spec omega {evo.omega} inconsistent with state rate {abs(rate)}")
    z1_0 = complex(cs0.z1)
    a1_ratio = mean_a(cs0, 1) / z1_0 if z1_0 != 0 else 0.0
    a2_bar = mean_a(cs0, 2)
    times = np.asarray(evo.times, dtype=float)
    psi0 = evo.psi0
    # z1(t) = -|z1| exp(-i (rate t + psi0)); signed rate carries the branch
    z1_t = -cs0.u * np.exp(-1j * (rate * times + psi0))
    w = math.sqrt(2.0 / g) * (a2_bar - np.conj(z1_t * a1_ratio))
    xs = w.real
    ys = -cs0.field.eps * w.imag
    return MeanTrace(
        times=times,
        x=xs,
        y=ys,
        center=math.sqrt(2.0 / g) * a2_bar,
        radius=math.sqrt(2.0 / g) * abs(a1_ratio) * cs0.u,
        rate=rate,
    )


def fit_circle(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Algebraic least-squares circle fit: (cx, cy, radius, max residual)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = np.column_stack([2 * x, 2 * y, np.ones_like(x)])
    b = x * x + y * y
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    cx, cy, c = sol
    r = math.sqrt(max(c + cx * cx + cy * cy, 0.0))
    resid = np.abs(np.hypot(x - cx, y - cy) - r).max()
    return float(cx), float(cy), r, float(resid)


# ---------------------------------------------------------------------------
# spectral frequency operator
# ---------------------------------------------------------------------------


def pi0_spectral(n1, mass: float, gamma: float, sigma: int, eps: int):
    """Transverse energy sqrt(M^2 + 2 gamma [n1 + (1 - sigma eps)/2])."""
    n1 = np.asarray(n1, dtype=float)
    if np.any(n1 <= -1.0):
        raise ValueError("n1 must exceed -1")
    out = np.sqrt(mass * mass + 2.0 * gamma * (n1 + 0.5 * (1.0 - sigma * eps)))
    return float(out) if out.ndim == 0 else out


def omega_spectral(n1, mass: float, gamma: float, sigma: int, eps: int):
    """Level spacing written in subtraction-free form:
    Omega(n1) = 2 gamma / (sqrt(Pi0^2 + 2 gamma) + Pi0) = Pi0(n1+1) - Pi0(n1).
    """
    p0 = pi0_spectral(n1, mass, gamma, sigma, eps)
    out = 2.0 * gamma / (np.sqrt(np.square(p0) + 2.0 * gamma) + p0)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# massless 2+1 quasi-evolution
# ---------------------------------------------------------------------------


class QuasiEvolution:
    """Phase-weighted lattice evolution of a massless 2+1 state.

    The numerator of mean(a1)(t) carries exp(-i branch Omega(n1) t) on every
    lattice term (over the contracted set for j = 0, the full set for j = 1);
    the denominator is the frozen sigma-summed norm, and mean(a2) does not
    move at all.  Term tables are precomputed once per state.
    """

    def __init__(self, cs0: CoherentState):
        if cs0.spec.species is not Species.MASSLESS2P1:
            raise ValueError("quasi-evolution is defined for Massless2p1 only")
        self.cs0 = cs0
        f = cs0.field
        self._den = 0.0
        self._num_terms: list[np.ndarray] = []
        self._num_omegas: list[np.ndarray] = []
        include_l0 = cs0.j == 1
        for sigma in cs0.sectors():
            self._den += complex(sector_sum(cs0, sigma, "one").value).real
            idx = cs0.index_set(sigma)
            tab = term_table(idx.alpha, cs0.u, cs0.v, cs0.j, include_l0=include_l0)
            # the phase depends only on n1: collapse the lattice onto the
            # (unit-spaced) n1 values to make per-sample work trivial
            frac = idx.alpha if cs0.j == 1 else 0.0
            keys = np.rint(tab.n1 - frac).astype(np.int64)
            keys -= keys.min() if keys.size else 0
            agg = np.bincount(keys, weights=tab.terms)
            n1_vals = frac + float(np.rint(tab.n1 - frac).min() if tab.n1.size else 0) + np.arange(agg.size)
            keep = agg > 0.0
            self._num_terms.append(agg[keep])
            # the frequency operator uses the -vartheta spin shift for every sector
            self._num_omegas.append(
                omega_spectral(n1_vals[keep], 0.0, f.gamma, -f.vartheta, f.eps)
            )
        self._a2 = mean_a(cs0, 2)

    def a1_mean(self, t: float) -> complex:
        num = 0j
        for terms, om in zip(self._num_terms, self._num_omegas):
            num += complex((terms * np.exp(-1j * self.cs0.spec.branch * om * t)).sum())
        return complex(self.cs0.z1) * num / self._den

    def a2_mean(self, t: float) -> complex:
        return self._a2

    def norm(self, t: float) -> float:
        # unitary driver: the sigma-summed norm is time independent
        return self._den

    def mean_xy(self, t: float) -> tuple[float, float]:
        g = self.cs0.field.gamma
        w = math.sqrt(2.0 / g) * (self._a2 - self.a1_mean(t).conjugate())
        return w.real, -self.cs0.field.eps * w.imag


def quasi_mean_a1(cs0: CoherentState, t: float, branch: int | None = None) -> complex:
    """Mean of a1 at time t for a massless 2+1 state (see QuasiEvolution)."""
    if branch is not None and branch != cs0.spec.branch:
        raise ValueError("branch must match the state's energy branch")
    return QuasiEvolution(cs0).a1_mean(t)


def fit_rotation_frequency(times, a1_samples) -> tuple[float, float]:
    """Least-squares linear fit of the unwrapped phase of mean(a1)(t).

    Returns (omega_bar, max phase residual); requires at least 64 samples,
    nonvanishing moduli, and sampling above the Nyquist rate of the phase
    steps (raises SamplingError otherwise).
    """
    times = np.asarray(times, dtype=float)
    samples = np.asarray(a1_samples, dtype=complex)
    if times.size < 64:
        raise SamplingError("need at least 64 samples to fit the rotation rate")
    if np.any(np.abs(samples) == 0.0):
        raise SamplingError("mean(a1) vanished at a sample; phase undefined")
    raw = np.angle(samples)
    steps = np.diff(raw)
    steps = (steps + math.pi) % (2.0 * math.pi) - math.pi
    if np.any(np.abs(steps) > 0.9 * math.pi):
        raise SamplingError("phase steps too close to pi: sampling below Nyquist")
    phase = np.unwrap(raw)
    coef = np.polyfit(times, phase, 1)
    resid = float(np.abs(phase - np.polyval(coef, times)).max())
    return float(abs(coef[0])), resid
