import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msfcs import classical as cl
from msfcs.params import FieldConfig

FIELD = FieldConfig(gamma=1.7, eps=-1, vartheta=1, l0=2, mu=0.4)
STATE = cl.PhaseState(x=1.3, y=-0.7, z=0.2, P1=0.9, P2=1.4, P3=0.3, mass=1.2)


def _orbit(field=FIELD, state=STATE, periods=1.0, steps=2000):
    traj = cl.trajectory_from_state(state, field)
    period = 2.0 * math.pi / traj.omega
    samples = cl.integrate_lorentz(state, field.gamma, field.eps, periods * period, period / steps)
    return traj, samples


def test_trajectory_at_phase_zero_and_half_period():
    traj = cl.ClassicalTrajectory(
        R=1.0, Rc=0.0, alpha_c=0.0, psi0=0.0, p0=1.0, p3=0.0, z0=0.7, eps=1, gamma=1.0
    )
    assert cl.trajectory_at(traj, 0.0) == pytest.approx((1.0, 0.0, 0.7))
    x, y, z = cl.trajectory_at(traj, math.pi / traj.omega)
    assert (x, y, z) == pytest.approx((-1.0, 0.0, 0.7), abs=1e-12)


def test_trajectory_matches_integrator():
    # p0 must exceed gamma R for the state to sit on a real mass shell
    traj = cl.ClassicalTrajectory(
        R=2.0, Rc=3.0, alpha_c=math.pi / 4, psi0=0.3, p0=4.0, p3=0.0, z0=0.0, eps=-1, gamma=1.7
    )
    # seed the integrator from the closed form at t = 0
    x0, y0, z0 = cl.trajectory_at(traj, 0.0)
    # kinetic momenta from the time derivatives
    dt = 1e-7
    x1, y1, z1 = cl.trajectory_at(traj, dt)
    vx, vy = (x1 - x0) / dt, (y1 - y0) / dt
    mass = math.sqrt(traj.p0**2 - traj.gamma**2 * traj.R**2)
    state = cl.PhaseState(x0, y0, z0, traj.p0 * vx, traj.p0 * vy, 0.0, mass)
    samples = cl.integrate_lorentz(state, traj.gamma, traj.eps, 0.9, 0.9 / 4000)
    xx, yy, zz = cl.trajectory_at(traj, 0.9)
    assert math.dist((xx, yy), (samples.x[-1], samples.y[-1])) < 1e-5


def test_integrator_closed_orbit_periodicity():
    traj, samples = _orbit()
    assert math.dist((samples.x[0], samples.y[0]), (samples.x[-1], samples.y[-1])) < 1e-6


def test_integrator_degenerate_orbit():
    state = cl.PhaseState(x=2.0, y=0.0, z=0.0, P1=0.0, P2=0.0, P3=0.5, mass=1.0)
    samples = cl.integrate_lorentz(state, 1.0, 1, 3.0, 0.01)
    assert np.abs(samples.x - 2.0).max() < 1e-14
    assert np.abs(samples.y).max() < 1e-14
    assert samples.z[-1] == pytest.approx(3.0 * 0.5 / state.p0, rel=1e-12)


def test_integrator_conserves_transverse_momentum():
    _, samples = _orbit()
    pperp = samples.P1**2 + samples.P2**2
    assert (pperp.max() - pperp.min()) / pperp[0] < 1e-9


def test_integrator_rejects_axis_seed():
    with pytest.raises(ValueError):
        cl.integrate_lorentz(cl.PhaseState(0, 0, 0, 1, 0, 0, 1.0), 1.0, 1, 1.0, 0.01)


def test_invariants_constant_along_orbit():
    traj, samples = _orbit()
    a1_rot, a2s = [], []
    for i in range(0, samples.t.size, 100):
        s = cl.PhaseState(
            samples.x[i], samples.y[i], samples.z[i], samples.P1[i], samples.P2[i], samples.P3[i], samples.mass
        )
        inv = cl.invariants_of(s, FIELD)
        a1_rot.append(inv.a1 * cmath.exp(1j * traj.omega * samples.t[i]))
        a2s.append(inv.a2)
    assert max(abs(a - a1_rot[0]) for a in a1_rot) < 1e-8 * abs(a1_rot[0])
    assert max(abs(a - a2s[0]) for a in a2s) < 1e-8 * abs(a2s[0])


def test_invariants_identities():
    inv = cl.invariants_of(STATE, FIELD)
    g = FIELD.gamma
    assert abs(inv.a1) ** 2 == pytest.approx(g / 2.0 * inv.R**2, rel=1e-14)
    assert abs(inv.a2) ** 2 == pytest.approx(g / 2.0 * inv.Rc**2, rel=1e-14)
    assert inv.E_perp_sq == pytest.approx(g * g * inv.R**2, rel=1e-13)
    lz_ref = (FIELD.eps * g / 2.0) * (inv.Rc**2 - inv.R**2) + FIELD.eps * FIELD.flux_number
    assert inv.Lz == pytest.approx(lz_ref, abs=1e-10)
    assert inv.lam == pytest.approx((STATE.p0 - STATE.P3) / STATE.mass, rel=1e-14)


def test_classify_orbit():
    assert cl.classify_orbit(2.0, 1.0) == 1
    assert cl.classify_orbit(1.0, 2.0) == 0
    with pytest.raises(ValueError):
        cl.classify_orbit(1.0, 1.0)


def test_classify_matches_winding():
    for eps in (-1, 1):
        field = FieldConfig(gamma=1.7, eps=eps, vartheta=1, l0=0, mu=0.2)
        traj, samples = _orbit(field=field)
        j = cl.classify_orbit(traj.R, traj.Rc)
        assert abs(cl.winding_number(samples.x, samples.y)) == j


def test_radial_bounds_along_orbit():
    traj, samples = _orbit()
    r = np.hypot(samples.x, samples.y)
    assert r.max() <= traj.R + traj.Rc + 1e-9
    assert r.min() >= abs(traj.R - traj.Rc) - 1e-9


def test_lightcone_intercepts_and_round_trip():
    traj = cl.trajectory_from_state(STATE, FIELD)
    lam = (traj.p0 + traj.p3) / STATE.mass
    t, x, y, z = cl.lightcone_trajectory(traj, lam, 0.0)
    assert t - z == pytest.approx(0.0, abs=1e-12)
    for xm in (0.7, -2.2, 13.0):
        t, x, y, z = cl.lightcone_trajectory(traj, lam, xm)
        assert t - z == pytest.approx(xm, abs=1e-12)


def test_lightcone_matches_proper_parametrization():
    traj = cl.ClassicalTrajectory(
        R=0.8, Rc=1.9, alpha_c=0.4, psi0=0.1, p0=2.0, p3=0.6, z0=0.0, eps=1, gamma=1.3
    )
    mass = math.sqrt(traj.p0**2 - traj.p3**2 - traj.gamma**2 * traj.R**2)
    lam = (traj.p0 + traj.p3) / mass
    for xm in (0.3, 1.7, -0.9):
        s = xm / lam
        t_expect = (traj.p0 / mass) * s
        t, x, y, z = cl.lightcone_trajectory(traj, lam, xm)
        assert t == pytest.approx(t_expect, abs=1e-12)
        assert (x, y, z) == pytest.approx(cl.trajectory_at(traj, t_expect), abs=1e-12)


def test_lightcone_domain():
    traj = cl.trajectory_from_state(STATE, FIELD)
    with pytest.raises(ValueError):
        cl.lightcone_trajectory(traj, 0.0, 1.0)
    with pytest.raises(ValueError):
        cl.lightcone_trajectory(traj, 99.0, 1.0)  # inconsistent with the orbit


@settings(max_examples=25, deadline=None)
@given(
    x=st.floats(0.5, 3.0),
    y=st.floats(-2.0, 2.0),
    p1=st.floats(-2.0, 2.0),
    p2=st.floats(0.1, 2.0),
    eps=st.sampled_from([-1, 1]),
)
def test_closed_form_periodicity_property(x, y, p1, p2, eps):
    field = FieldConfig(gamma=1.0, eps=eps, vartheta=1, l0=0, mu=0.1)
    state = cl.PhaseState(x, y, 0.0, p1, p2, 0.0, 1.0)
    traj = cl.trajectory_from_state(state, field)
    period = 2.0 * math.pi / traj.omega
    p_a = cl.trajectory_at(traj, 0.37)
    p_b = cl.trajectory_at(traj, 0.37 + period)
    assert p_a[0] == pytest.approx(p_b[0], abs=1e-9)
    assert p_a[1] == pytest.approx(p_b[1], abs=1e-9)
