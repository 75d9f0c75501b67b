"""Classical charged-particle motion in the uniform-field-plus-flux-line
background: closed-form circular trajectories, a Runge-Kutta oracle for the
equations of motion, integrals of motion, orbit-type classification, and the
light-cone parametrization.

Natural units; the flux line contributes only the topological constant
eps*(l0+mu) to the canonical angular momentum (trajectories never touch the
axis).  Momenta are kinetic and contravariant: dz/dt = +P3/p0, while the
trajectory records carry the covariant longitudinal momentum p3 = -P3 so that
z(t) = -(p3/p0) t + z0.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import FieldConfig


@dataclass(frozen=True)
class PhaseState:
    """Instantaneous phase-space point (positions, kinetic momenta, mass)."""

    x: float
    y: float
    z: float
    P1: float
    P2: float
    P3: float
    mass: float

    @property
    def p0(self) -> float:
        return math.sqrt(self.mass**2 + self.P1**2 + self.P2**2 + self.P3**2)


@dataclass(frozen=True)
class ClassicalTrajectory:
    """Closed-form circular orbit: radius R, center (Rc, alpha_c), phase psi0.

    p0 is the conserved energy, p3 the covariant longitudinal momentum
    (z drifts as -(p3/p0) t + z0), eps the rotation sense and gamma the field
    strength that fixes the rotation rate omega = gamma / p0.
    """

    R: float
    Rc: float
    alpha_c: float
    psi0: float
    p0: float
    p3: float
    z0: float
    eps: int
    gamma: float

    def __post_init__(self):
        if self.R < 0 or self.Rc < 0:
            raise ValueError("R and Rc must be nonnegative")
        if self.eps not in (-1, 1):
            raise ValueError("eps must be +1 or -1")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @property
    def omega(self) -> float:
        return self.gamma / self.p0


@dataclass(frozen=True)
class MotionInvariants:
    """Complex rotating-frame invariants and derived orbit geometry."""

    a1: complex
    a2: complex
    Lz: float
    lam: float
    E_perp_sq: float
    R: float
    Rc: float
    alpha_c: float
    psi: float


def trajectory_at(traj: ClassicalTrajectory, t: float) -> tuple[float, float, float]:
    """Point of the closed-form trajectory at lab time t."""
    if not traj.p0 > 0:
        raise ValueError("trajectory requires p0 > 0")
    psi = traj.omega * t + traj.psi0
    x = traj.Rc * math.cos(traj.alpha_c) + traj.R * math.cos(psi)
    y = traj.Rc * math.sin(traj.alpha_c) - traj.eps * traj.R * math.sin(psi)
    z = -(traj.p3 / traj.p0) * t + traj.z0
    return x, y, z


@dataclass
class TrajectorySamples:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    P3: np.ndarray
    mass: float


def integrate_lorentz(
    initial: PhaseState, gamma: float, eps: int, t_final: float, step: float
) -> TrajectorySamples:
    """Fixed-step RK4 integration of the equations of motion in lab time.

    dx/dt = P/p0 and dP_perp/dt rotates at rate eps*gamma/p0; p0 is
    reevaluated from the state so energy conservation is a diagnostic, not an
    input.  Emits a warning if the sampled orbit passes within 1e-12 of the
    flux line, where the orbit type is undefined.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if initial.x**2 + initial.y**2 == 0.0:
        raise ValueError("initial state must lie off the flux line")
    n = int(round(t_final / step))
    state = np.array(
        [initial.x, initial.y, initial.z, initial.P1, initial.P2, initial.P3], dtype=float
    )
    m = initial.mass

    def deriv(s: np.ndarray) -> np.ndarray:
        p0 = math.sqrt(m * m + s[3] ** 2 + s[4] ** 2 + s[5] ** 2)
        return np.array(
            [
                s[3] / p0,
                s[4] / p0,
                s[5] / p0,
                eps * gamma * s[4] / p0,
                -eps * gamma * s[3] / p0,
                0.0,
            ]
        )

    out = np.empty((n + 1, 6))
    out[0] = state
    for i in range(n):
        k1 = deriv(state)
        k2 = deriv(state + 0.5 * step * k1)
        k3 = deriv(state + 0.5 * step * k2)
        k4 = deriv(state + step * k3)
        state = state + (step / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[i + 1] = state
    r = np.hypot(out[:, 0], out[:, 1])
    if r.min() < 1e-12:
        warnings.warn("trajectory passes within 1e-12 of the flux line; orbit type undefined")
    times = np.arange(n + 1) * step
    return TrajectorySamples(
        t=times, x=out[:, 0], y=out[:, 1], z=out[:, 2], P1=out[:, 3], P2=out[:, 4], P3=out[:, 5], mass=m
    )


def invariants_of(state: PhaseState, field: FieldConfig) -> MotionInvariants:
    """Rotating-frame invariants a1, a2 plus L_z, lambda and orbit geometry.

    In terms of the contravariant kinetic momenta carried by the state,
    a1 = (-i P1 + eps P2)/sqrt(2 gamma) = -sqrt(gamma/2) R exp(-i psi) and
    a2 = sqrt(gamma/2)(x - i eps y) + (i P1 + eps P2)/sqrt(2 gamma)
       =  sqrt(gamma/2) Rc exp(-i eps alpha).
    L_z uses generalized momenta, picking up the flux constant eps*(l0+mu).
    """
    g = field.gamma
    eps = field.eps
    rt = math.sqrt(2.0 * g)
    a1 = complex(0.0, -state.P1 / rt) + eps * state.P2 / rt
    a2 = math.sqrt(g / 2.0) * complex(state.x, -eps * state.y) + complex(
        eps * state.P2 / rt, state.P1 / rt
    )
    r_sq = state.x**2 + state.y**2
    lz = state.x * state.P2 - state.y * state.P1 + eps * g * r_sq / 2.0 + eps * field.flux_number
    lam = (state.p0 - state.P3) / state.mass if state.mass > 0 else math.inf
    e_perp_sq = state.P1**2 + state.P2**2
    R = abs(a1) * math.sqrt(2.0 / g)
    Rc = abs(a2) * math.sqrt(2.0 / g)
    psi = -cmath.phase(-a1) if abs(a1) > 0 else 0.0
    alpha_c = -eps * cmath.phase(a2) if abs(a2) > 0 else 0.0
    return MotionInvariants(
        a1=a1, a2=a2, Lz=lz, lam=lam, E_perp_sq=e_perp_sq, R=R, Rc=Rc, alpha_c=alpha_c, psi=psi
    )


def trajectory_from_state(state: PhaseState, field: FieldConfig) -> ClassicalTrajectory:
    """Closed-form trajectory through the given state, taken at t = 0."""
    inv = invariants_of(state, field)
    return ClassicalTrajectory(
        R=inv.R,
        Rc=inv.Rc,
        alpha_c=inv.alpha_c,
        psi0=inv.psi,
        p0=state.p0,
        p3=-state.P3,
        z0=state.z,
        eps=field.eps,
        gamma=field.gamma,
    )


def classify_orbit(R: float, Rc: float) -> int:
    """Trajectory type: 1 if the orbit embraces the flux line, 0 if not."""
    if R < 0 or Rc < 0:
        raise ValueError("R and Rc must be nonnegative")
    if R == Rc:
        raise ValueError("orbit through the flux line: type undefined at R = Rc")
    return 1 if R * R - Rc * Rc > 0 else 0


def lightcone_trajectory(
    traj: ClassicalTrajectory, lam: float, x_minus: float
) -> tuple[float, float, float, float]:
    """Trajectory point parametrized by the light-cone time x_minus = t - z.

    The rotation phase advances as psi = omega_tilde x_minus + const with
    omega_tilde = (gamma/M)/lambda.  Consistency with the lab-time form is
    exact: converting the returned (t, z) back gives t - z = x_minus.
    """
    if lam == 0.0:
        raise ValueError("lambda must be nonzero")
    m_sq = traj.p0**2 - traj.p3**2 - traj.gamma**2 * traj.R**2
    if m_sq <= 0:
        raise ValueError("state is not on a massive shell; light-cone form undefined")
    mass = math.sqrt(m_sq)
    lam_traj = (traj.p0 + traj.p3) / mass
    if abs(lam - lam_traj) > 1e-9 * max(1.0, abs(lam)):
        raise ValueError(f"lambda {lam} inconsistent with trajectory value {lam_traj}")
    s = (x_minus + traj.z0) / lam
    t = (traj.p0 / mass) * s
    x, y, z = trajectory_at(traj, t)
    return t, x, y, z


def winding_number(x: np.ndarray, y: np.ndarray) -> int:
    """Net turns of a sampled closed curve around the origin."""
    ang = np.unwrap(np.arctan2(y, x))
    return int(round((ang[-1] - ang[0]) / (2.0 * math.pi)))
