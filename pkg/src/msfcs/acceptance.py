"""Executable acceptance criteria.

Each criterion is a self-contained check with its tolerance pinned here; the
CLI ``verify`` command and the pytest suite both run this list.  Oracles that
need extended precision use long doubles so the package stays dependency-free
at run time (the test tree additionally cross-checks against mpmath).
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from . import classical as cl
from . import coherent as ch
from . import evolution as ev
from . import qseries as qs
from .params import FieldConfig, ParticleSpec, Species
from .specfun import laguerre_fn


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float


def _field(mu=0.4, gamma=1.0, eps=1, vartheta=1, l0=0) -> FieldConfig:
    return FieldConfig(gamma=gamma, eps=eps, vartheta=vartheta, l0=l0, mu=mu)


def _spin_up(branch=1, mass=1.0) -> ParticleSpec:
    return ParticleSpec(species=Species.NR2P1_SPIN_UP, mass=mass, branch=branch)


def crit_generating_identity() -> tuple[bool, str]:
    """Series vs closed-form generating function on a 27-point grid per order."""
    z1s = (0.8 * cmath.exp(0.3j), 2.0 * cmath.exp(-1.1j), 2.9 + 0j)
    z2s = (0.5 + 0j, 1.5 * cmath.exp(0.7j), 3.0 * cmath.exp(-0.4j))
    rhos = (0.8, 4.0, 11.0)
    worst = 0.0
    n = 0
    for alpha in (-0.6, 0.3, 1.7):
        for z1 in z1s:
            for z2 in z2s:
                for rho in rhos:
                    if abs(z1 * z2 * rho) > 100.0:
                        continue
                    c = qs.y_alpha(alpha, z1, z2, rho)
                    s = qs.y_alpha_series(alpha, z1, z2, rho)
                    worst = max(worst, abs(c - s) / max(abs(c), abs(s), 1.0))
                    n += 1
    return worst <= 1e-9, f"worst rel dev {worst:.2e} over {n} grid points (tol 1e-9)"


def crit_laguerre_orthonormality() -> tuple[bool, str]:
    """Quadrature Gram matrix of the Laguerre functions equals the identity."""
    mmax = 12
    xg, wg = np.polynomial.legendre.leggauss(24)
    # substitute rho = t^4 so the rho^alpha endpoint behavior is smooth
    edges = np.linspace(0.0, 160.0**0.25, 49)
    worst = 0.0
    for alpha in (0.25, 1.5):
        gram = np.zeros((mmax + 1, mmax + 1))
        for lo, hi in zip(edges[:-1], edges[1:]):
            ts = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
            rhos = ts**4
            jac = 4.0 * ts**3
            vals = np.array([laguerre_fn(m, alpha, rhos) for m in range(mmax + 1)])
            gram += 0.5 * (hi - lo) * (vals * (wg * jac)) @ vals.T
        worst = max(worst, float(np.abs(gram - np.eye(mmax + 1)).max()))
    return worst <= 1e-7, f"worst Gram deviation {worst:.2e} (tol 1e-7)"


def crit_q_path_agreement() -> tuple[bool, str]:
    """Ladder series, integral representation and raw lattice sum agree."""
    worst_pair = None
    ok = True
    for alpha in (-0.7, -0.3, 0.3, 0.5, 1.3, 1.7):
        for u in (0.5, 1.0, 2.0, 4.0, 8.0):
            for v in (0.5, 1.0, 2.0, 4.0, 8.0):
                direct = qs.q_minus_scaled(alpha, u, v)
                integ = qs.q_minus_scaled(alpha, u, v, path=qs.EvalPath.INTEGRAL_REP)
                tab = qs.term_table(alpha, u, v, 0, include_l0=False)
                lattice = qs.SeriesValue(
                    tab.total(), tab.tail_bound * 2 + 1e-12 * tab.total(), tab.n_terms, qs.EvalPath.DIRECT_SERIES
                )
                for a, b in ((direct, integ), (direct, lattice), (integ, lattice)):
                    if not qs.paths_agree(a, b):
                        ok = False
                        worst_pair = (alpha, u, v, complex(a.value).real, complex(b.value).real)
    detail = "all 150 grid points agree within combined bounds" if ok else f"disagreement at {worst_pair}"
    return ok, detail


def crit_reference_superposition() -> tuple[bool, str]:
    """Scaled type-0 plus type-1 kernels sum to one in the zero-flux limit."""
    worst = 0.0
    for (u, v) in ((3.0, 4.0), (10.0, 2.0), (25.0, 25.0)):
        s = complex(qs.q_full_scaled(1.0, u, v).value).real + complex(
            qs.q_full_scaled(0.0, v, u).value
        ).real
        worst = max(worst, abs(s - 1.0))
    return worst <= 1e-10, f"worst deviation from 1: {worst:.2e} (tol 1e-10)"


def crit_near_offset() -> tuple[bool, str]:
    """Mean moving-off distance near the diagonal, all spins, both types."""
    worst = 0.0
    for j in (0, 1):
        target = (-1.0) ** (j + 1) * math.sqrt(2.0 / math.pi)
        for sigma in (0, 1, -1):
            if sigma == 0:
                spec = ParticleSpec(species=Species.SPINLESS, mass=1.0)
            else:
                spec = _spin_up(branch=sigma)
            cs = ch.CoherentState(z1=30.0, z2=30.0, j=j, field=_field(), spec=spec)
            d = ch.mean_R2_Rc2(cs).d_offset
            worst = max(worst, abs(d / target - 1.0))
    return worst <= 0.10, f"worst relative deviation {worst:.2%} (tol 10%)"


def crit_variances() -> tuple[bool, str]:
    """Occupation and position variances in the far and near regimes."""
    checks = []
    far = ch.CoherentState(z1=5.0, z2=25.0, j=0, field=_field(), spec=_spin_up())
    v = ch.variances(far)
    checks.append(("far VarN1", abs(v.var_n1 / 25.0 - 1.0), 0.02))
    checks.append(("far VarN2", abs(v.var_n2 / 625.0 - 1.0), 0.02))
    checks.append(("far var_xy", abs(v.var_xy / 2.0 - 1.0), 0.05))
    near = ch.CoherentState(z1=30.0, z2=30.0, j=0, field=_field(), spec=_spin_up())
    v = ch.variances(near)
    t = (1.0 - 1.0 / math.pi) * 900.0
    checks.append(("near VarN1", abs(v.var_n1 / t - 1.0), 0.05))
    checks.append(("near VarN2", abs(v.var_n2 / t - 1.0), 0.05))
    checks.append(("near var_xy", abs(v.var_xy / (4.0 * 30.0 / math.sqrt(math.pi)) - 1.0), 0.10))
    bad = [(n, d, tol) for n, d, tol in checks if d > tol]
    detail = "; ".join(f"{n}: {d:.3%}" for n, d, _ in checks)
    return not bad, detail


def crit_uncertainty() -> tuple[bool, str]:
    """Robertson products: bound holds on random states; regime ratios."""
    rng = np.random.default_rng(20260809)
    for _ in range(100):
        gamma = float(rng.uniform(0.5, 2.0))
        mu = float(rng.uniform(0.0, 0.999))
        eps = int(rng.choice((-1, 1)))
        theta = int(rng.choice((-1, 1)))
        j = int(rng.integers(0, 2))
        sigma = int(rng.choice((0, 1, -1)))
        z1 = float(rng.uniform(0.1, 6.0)) * cmath.exp(1j * float(rng.uniform(0, 2 * math.pi)))
        z2 = float(rng.uniform(0.1, 6.0)) * cmath.exp(1j * float(rng.uniform(0, 2 * math.pi)))
        f = FieldConfig(gamma=gamma, eps=eps, vartheta=theta, l0=0, mu=mu)
        spec = ParticleSpec(species=Species.SPINLESS, mass=1.0) if sigma == 0 else _spin_up(branch=sigma)
        cs = ch.CoherentState(z1=z1, z2=z2, j=j, field=f, spec=spec)
        ch.uncertainty_products(cs)  # raises if a product undercuts its bound
    far = ch.uncertainty_products(
        ch.CoherentState(z1=5.0, z2=25.0, j=0, field=_field(), spec=_spin_up())
    )
    near = ch.uncertainty_products(
        ch.CoherentState(z1=30.0, z2=30.0, j=1, field=_field(), spec=_spin_up())
    )
    ok = 0.9 <= far.minimality_p <= 1.5 and near.minimality_p >= 5.0
    return ok, (
        f"100 random states hold the bound; far minimality {far.minimality_p:.3f} "
        f"(band [0.9, 1.5]), near minimality {near.minimality_p:.1f} (>= 5)"
    )


def crit_classical_oracle() -> tuple[bool, str]:
    """RK4 versus closed form plus conservation of the motion invariants."""
    field = FieldConfig(gamma=1.7, eps=-1, vartheta=1, l0=2, mu=0.4)
    st = cl.PhaseState(x=1.3, y=-0.7, z=0.2, P1=0.9, P2=1.4, P3=0.3, mass=1.2)
    traj = cl.trajectory_from_state(st, field)
    period = 2.0 * math.pi / traj.omega
    samples = cl.integrate_lorentz(st, field.gamma, field.eps, period, period / 2000)
    pos_err = 0.0
    for i in range(0, samples.t.size, 40):
        xx, yy, zz = cl.trajectory_at(traj, samples.t[i])
        pos_err = max(pos_err, math.dist((xx, yy, zz), (samples.x[i], samples.y[i], samples.z[i])))
    a1_rot, a2s, pp = [], [], []
    for i in range(0, samples.t.size, 40):
        s = cl.PhaseState(
            samples.x[i], samples.y[i], samples.z[i], samples.P1[i], samples.P2[i], samples.P3[i], samples.mass
        )
        inv = cl.invariants_of(s, field)
        a1_rot.append(inv.a1 * cmath.exp(1j * traj.omega * samples.t[i]))
        a2s.append(inv.a2)
        pp.append(inv.E_perp_sq)
    a1_dev = max(abs(a - a1_rot[0]) for a in a1_rot) / abs(a1_rot[0])
    a2_dev = max(abs(a - a2s[0]) for a in a2s) / abs(a2s[0])
    pp_dev = (max(pp) - min(pp)) / pp[0]
    ok = pos_err < 1e-6 * traj.R and a1_dev < 1e-8 and a2_dev < 1e-8 and pp_dev < 1e-8
    return ok, (
        f"position err {pos_err:.2e} (< {1e-6 * traj.R:.1e}); invariant drifts "
        f"a1: {a1_dev:.1e}, a2: {a2_dev:.1e}, P_perp^2: {pp_dev:.1e} (all < 1e-8)"
    )


def _circle_case(cs, mode, psi0=0.3):
    rate = ev.rotation_frequency(cs, mode)
    period = 2.0 * math.pi / abs(rate)
    times = tuple(np.linspace(0.0, period, 128, endpoint=False))
    evo = ev.EvolutionSpec(mode=mode, omega=abs(rate), psi0=psi0, times=times)
    tr = ev.mean_trajectory(cs, evo)
    _, _, _, resid = ev.fit_circle(tr.x, tr.y)
    w = tr.x - 1j * cs.field.eps * tr.y - tr.center
    om_fit, _ = ev.fit_rotation_frequency(np.asarray(times), w.conj())
    return resid / tr.radius, abs(om_fit - abs(rate)) / abs(rate)


def crit_mean_circle() -> tuple[bool, str]:
    """Mean-position traces are exact circles at the mode rate, all species."""
    field = _field()
    cases = []
    for spec in (
        ParticleSpec(species=Species.SPINLESS, mass=1.1),
        _spin_up(branch=1),
        _spin_up(branch=-1),
        ParticleSpec(species=Species.NR2P1_SPIN_DOWN, mass=0.9, branch=1),
        ParticleSpec(species=Species.NR3P1, mass=1.4, s_pol=1),
        ParticleSpec(species=Species.NR3P1, mass=1.4, s_pol=-1),
    ):
        for j in (0, 1):
            cs = ch.CoherentState(
                z1=2.0 * cmath.exp(0.4j), z2=4.0 * cmath.exp(-0.9j), j=j, field=field, spec=spec
            )
            cases.append(_circle_case(cs, ev.EvolutionMode.NON_REL_T))
    rel = ParticleSpec(species=Species.REL3P1, mass=1.0, sigma=1, branch=1, lam=2.3)
    for j in (0, 1):
        cs = ch.CoherentState(z1=3.0, z2=1.5 * cmath.exp(0.8j), j=j, field=field, spec=rel)
        cases.append(_circle_case(cs, ev.EvolutionMode.LIGHT_CONE))
    resid = max(c[0] for c in cases)
    rate_dev = max(c[1] for c in cases)
    ok = resid <= 1e-10 and rate_dev <= 1e-10
    return ok, f"max circle residual/radius {resid:.1e}, max rate deviation {rate_dev:.1e} (both <= 1e-10)"


def crit_spectral_identity() -> tuple[bool, str]:
    """Level-spacing form of the frequency against the long-double difference."""
    ld = np.longdouble
    worst = 0.0
    ns = np.concatenate([np.array([0.0, 1.0, 7.3]), np.geomspace(1.0, 1e4, 60)])
    for gamma in (0.7, 1.0, 2.3):
        for mass in (0.0, 1.0):
            for se in (-1, 1):
                shift = 0.5 * (1.0 - se)
                p = lambda n: np.sqrt(ld(mass) ** 2 + 2 * ld(gamma) * (ld(n) + ld(shift)))
                for n in ns:
                    om = ev.omega_spectral(float(n), mass, gamma, se, 1)
                    ref = float(p(n + 1.0) - p(n))
                    worst = max(worst, abs(om - ref) / ref)
    return worst <= 1e-13, f"worst relative deviation {worst:.2e} over n in [0, 1e4] (tol 1e-13)"


def crit_quasi_frequency() -> tuple[bool, str]:
    """Fitted quasi-evolution rotation rate in the far and near regimes."""
    field = _field()
    mspec = ParticleSpec(species=Species.MASSLESS2P1, mass=0.0, branch=1)
    omega_cl = field.gamma / (math.sqrt(2.0 * field.gamma) * 40.0)
    times = np.linspace(0.0, 3.0 * 2.0 * math.pi / omega_cl, 256)
    far = ch.CoherentState(z1=40.0, z2=10.0, j=1, field=field, spec=mspec)
    qfar = ev.QuasiEvolution(far)
    om_far, _ = ev.fit_rotation_frequency(times, np.array([qfar.a1_mean(t) for t in times]))
    far_dev = abs(om_far / omega_cl - 1.0)
    shifts_ok = True
    shift_detail = []
    for j in (0, 1):
        cs = ch.CoherentState(z1=40.0, z2=40.0, j=j, field=field, spec=mspec)
        q = ev.QuasiEvolution(cs)
        om_f, _ = ev.fit_rotation_frequency(times, np.array([q.a1_mean(t) for t in times]))
        shift = om_f / omega_cl - 1.0
        pred = (-1.0) ** j / (2.0 * math.sqrt(math.pi) * 40.0)
        shifts_ok &= abs(shift / pred - 1.0) <= 0.20
        shift_detail.append(f"j={j}: shift/pred={shift / pred:.3f}")
    r2 = ch.mean_R2_Rc2(far).R2_mean
    relation = abs(om_far * math.sqrt(r2) - 1.0)
    ok = far_dev <= 5e-3 and shifts_ok and relation <= 1e-2
    return ok, (
        f"far |om/om_cl - 1| = {far_dev:.1e} (<= 5e-3); {'; '.join(shift_detail)} "
        f"(within 20%); |om sqrt(R2) - 1| = {relation:.1e} (<= 1e-2)"
    )


def crit_quantum_limit() -> tuple[bool, str]:
    """Position-mean combination and kernel ratio in the deep quantum limit."""
    field = _field()
    worst_pos = 0.0
    for j in (0, 1):
        cs = ch.CoherentState(z1=0.01, z2=0.01 * cmath.exp(0.5j), j=j, field=field, spec=_spin_up())
        w = ch.mean_a(cs, 2) - ch.mean_a(cs, 1).conjugate()
        target = complex(cs.z2) if j == 0 else -complex(cs.z1).conjugate()
        worst_pos = max(worst_pos, abs(w - target) / abs(target))
    d = qs.delta_ratio(0.4, 0.01, 0.01)
    d_dev = abs(d / (0.01**2 / 1.4) - 1.0)
    ok = worst_pos <= 1e-2 and d_dev <= 1e-2
    return ok, f"position-mean rel dev {worst_pos:.1e}, ratio rel dev {d_dev:.1e} (both <= 1e-2)"


def _plane_quadrature(cs, n_phi=256, n_panels=24, nodes=24):
    """(integral of the density, mean rho) by Gauss-Legendre panels x trapezoid."""
    rad = ch.mean_R2_Rc2(cs)
    rho_hi = 0.5 * cs.field.gamma * (math.sqrt(rad.R2_mean) + math.sqrt(rad.Rc2_mean) + 14.0) ** 2
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(1e-9, rho_hi, n_panels + 1)
    total = 0.0
    mean_rho = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        rhos = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
        dens = ch.density_grid(cs, phis, rhos)
        ring = dens.mean(axis=1) * 2.0 * math.pi  # phi average times full angle
        total += float((wg * ring).sum()) * 0.5 * (hi - lo)
        mean_rho += float((wg * ring * rhos).sum()) * 0.5 * (hi - lo)
    return total, mean_rho / total


def crit_density_normalization() -> tuple[bool, str]:
    """Plane quadrature of the density is 1; the mean rho sits in the
    classical annulus [(R - Rc)^2, (R + Rc)^2] * gamma/2."""
    field = _field()
    states = [
        ch.CoherentState(z1=2.0, z2=4.0, j=0, field=field, spec=_spin_up()),
        ch.CoherentState(z1=1.2 + 0.8j, z2=3.5, j=0, field=field, spec=_spin_up()),
        ch.CoherentState(z1=4.0, z2=2.0, j=1, field=field, spec=_spin_up()),
        ch.CoherentState(z1=3.2, z2=1.1 - 0.6j, j=1, field=field, spec=_spin_up()),
    ]
    worst_norm = 0.0
    band_ok = True
    details = []
    for cs in states:
        total, mean_rho = _plane_quadrature(cs)
        worst_norm = max(worst_norm, abs(total - 1.0))
        rad = ch.mean_R2_Rc2(cs)
        lo = 0.5 * cs.field.gamma * (rad.R_mean - rad.Rc_mean) ** 2
        hi = 0.5 * cs.field.gamma * (rad.R_mean + rad.Rc_mean) ** 2
        inside = lo <= mean_rho <= hi
        band_ok &= inside
        details.append(f"j={cs.j}: norm dev {abs(total - 1.0):.1e}, mean rho {mean_rho:.2f} in [{lo:.2f}, {hi:.2f}]")
    ok = worst_norm <= 1e-4 and band_ok
    return ok, "; ".join(details)


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "generating-function identity (series vs closed form)", crit_generating_identity, 1.0),
    (2, "Laguerre-function orthonormality", crit_laguerre_orthonormality, 5.0),
    (3, "kernel path agreement (series / integral / lattice)", crit_q_path_agreement, 10.0),
    (4, "zero-flux reference superposition", crit_reference_superposition, None),
    (5, "near-diagonal moving-off distance", crit_near_offset, None),
    (6, "occupation and position variances", crit_variances, None),
    (7, "uncertainty products", crit_uncertainty, None),
    (8, "classical integrator oracle", crit_classical_oracle, None),
    (9, "mean-trajectory circles", crit_mean_circle, None),
    (10, "spectral frequency identity", crit_spectral_identity, None),
    (11, "quasi-evolution rotation frequency", crit_quasi_frequency, 60.0),
    (12, "quantum-limit means", crit_quantum_limit, None),
    (13, "density normalization and annulus", crit_density_normalization, None),
]


def run_all(numbers: set[int] | None = None) -> list[CriterionResult]:
    out = []
    for num, title, fn, budget in CRITERIA:
        if numbers is not None and num not in numbers:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # report, never crash the suite
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        if budget is not None and dt > budget:
            passed = False
            detail += f" [exceeded {budget:.0f}s runtime budget]"
        out.append(CriterionResult(num, title, passed, detail, dt))
    return out
