"""Observables of the two-parameter trajectory-type states.

A state is labelled by complex (z1, z2), a trajectory type j, the field
configuration and a particle species.  Every norm, mean and variance reduces
to weighted lattice sums over the quantum-number set of that type (see
:mod:`msfcs.qseries`); species enter through the effective mantissa shift,
through a spin-sector sum (massless 2+1), or through the energy-operator
weight sqrt(M^2 + 2 gamma [n1 + (1-sigma eps)/2]) + M (massive 2+1).

Where a closed form through the kernel ratio Delta exists it is implemented
as an independent second route and cross-asserted in the tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .params import FieldConfig, ParticleSpec, Species
from .qseries import (
    ConvergenceError,
    EvalPath,
    IndexSet,
    SeriesValue,
    term_table,
    weighted_sum,
)
from .specfun import _ln_gamma_arr


class DegenerateStateError(ValueError):
    """All scaled sector norms underflowed; the state is numerically empty."""


def pi0_weight(n1, mass: float, gamma: float, sigma: int, eps: int):
    """Spectral transverse-energy weight sqrt(M^2 + 2 gamma [n1 + (1-se)/2])."""
    return np.sqrt(mass * mass + 2.0 * gamma * (n1 + 0.5 * (1.0 - sigma * eps)))


@dataclass(frozen=True)
class CoherentState:
    z1: complex
    z2: complex
    j: int
    field: FieldConfig
    spec: ParticleSpec

    def __post_init__(self):
        if self.j not in (0, 1):
            raise ValueError(f"j must be 0 or 1, got {self.j!r}")
        for name in ("z1", "z2"):
            z = complex(getattr(self, name))
            if not (cmath.isfinite(z)):
                raise ValueError(f"{name} must be finite, got {z!r}")

    @property
    def u(self) -> float:
        return abs(complex(self.z1))

    @property
    def v(self) -> float:
        return abs(complex(self.z2))

    def index_set(self, sigma: int) -> IndexSet:
        f = self.field
        return IndexSet(j=self.j, sigma=sigma, eps=f.eps, vartheta=f.vartheta, mu=f.mu)

    def sectors(self) -> tuple[int, ...]:
        return self.spec.sigma_sectors()

    def species_weight(self, sigma: int):
        """(weight callable or None, envelope) entering every lattice sum."""
        if self.spec.species is Species.REL2P1_MASSIVE:
            m, g, e = self.spec.mass, self.field.gamma, self.field.eps

            def w(n1, n2):
                return pi0_weight(n1, m, g, sigma, e) + m

            c_env = 2.0 * (m + math.sqrt(2.0 * g) + 1.0)
            return w, (c_env, 0.5)
        return None, (1.0, 0.0)

    def sigma_for_radius(self) -> int:
        """Spin number entering the radius-squared relation (2 N1 + 1 - se)/g."""
        sp = self.spec.species
        if sp is Species.SPINLESS:
            return 0
        if sp is Species.MASSLESS2P1:
            # the massless transverse energy operator is diagonal with the
            # -vartheta shift, so the radius relation carries sigma = -vartheta
            return -self.field.vartheta
        return self.spec.sigma_eff()


# ---------------------------------------------------------------------------
# sector moments: all weighted lattice sums a state needs, from cached tables
# ---------------------------------------------------------------------------


def _combine(weight_a, weight_b):
    if weight_a is None:
        return weight_b
    if weight_b is None:
        return weight_a

    def w(n1, n2):
        return weight_a(n1, n2) * weight_b(n1, n2)

    return w


_BASE_WEIGHTS: dict[str, tuple[Callable, tuple[float, float]]] = {
    "one": (lambda n1, n2: np.ones_like(n1), (1.0, 0.0)),
    "n1": (lambda n1, n2: n1, (1.0, 1.0)),
    "n2": (lambda n1, n2: n2, (1.0, 1.0)),
    "n1sq": (lambda n1, n2: n1 * n1, (1.0, 2.0)),
    "n2sq": (lambda n1, n2: n2 * n2, (1.0, 2.0)),
    "n1n2": (lambda n1, n2: n1 * n2, (1.0, 2.0)),
    "ndiff_sq": (lambda n1, n2: (n1 - n2) ** 2, (1.0, 2.0)),
}


def sector_sum(
    cs: CoherentState,
    sigma: int,
    key: str,
    include_l0: bool = True,
    shift_species_n1: bool = False,
    tol: float = 1e-13,
) -> SeriesValue:
    """One weighted lattice sum of the given base weight times the species
    weight (optionally evaluated at n1 + 1, as ladder matrix elements need)."""
    base, (c_b, p_b) = _BASE_WEIGHTS[key]
    wspec, (c_s, p_s) = cs.species_weight(sigma)
    if wspec is not None and shift_species_n1:
        inner = wspec

        def wshift(n1, n2):
            return inner(n1 + 1.0, n2)

        wspec = wshift
        c_s *= 2.0
    weight = _combine(wspec, base)
    envelope = (c_b * c_s * 2.0, p_b + p_s)
    return weighted_sum(cs.index_set(sigma), cs.u, cs.v, weight, tol=tol, envelope=envelope, include_l0=include_l0)


def _sector_norms(cs: CoherentState) -> dict[int, SeriesValue]:
    out = {}
    for sigma in cs.sectors():
        out[sigma] = sector_sum(cs, sigma, "one")
    if all(abs(complex(s.value)) < 1e-300 for s in out.values()):
        raise DegenerateStateError("all scaled sector norms underflowed")
    return out


# ---------------------------------------------------------------------------
# norms and matrix elements
# ---------------------------------------------------------------------------


def norm_kernel(cs: CoherentState, other: CoherentState | None = None) -> SeriesValue:
    """Scaled norm (or same-j overlap) kernel, aggregated over spin sectors.

    The scale convention is exp(-|z1|^2-|z2|^2) for the diagonal case and
    exp(-|z1 z1'| - |z2 z2'|) for overlaps.  States of different trajectory
    type are exactly orthogonal.
    """
    if other is None:
        vals = _sector_norms(cs)
        total = sum(complex(s.value) for s in vals.values())
        err = sum(s.abs_err for s in vals.values())
        n = sum(s.n_terms for s in vals.values())
        return SeriesValue(total.real, err, n, EvalPath.DIRECT_SERIES)
    if other.j != cs.j:
        return SeriesValue(0.0, 0.0, 0, EvalPath.CLOSED_FORM)
    if other.spec != cs.spec or other.field != cs.field:
        raise ValueError("overlaps need matching species and field configuration")
    w1 = complex(cs.z1).conjugate() * complex(other.z1)
    w2 = complex(cs.z2).conjugate() * complex(other.z2)
    total = 0j
    err = 0.0
    n = 0
    for sigma in cs.sectors():
        wspec, _ = cs.species_weight(sigma)
        sv = _offdiag_sum(cs.index_set(sigma), w1, w2, wspec)
        total += complex(sv.value)
        err += sv.abs_err
        n += sv.n_terms
    return SeriesValue(total, err, n, EvalPath.DIRECT_SERIES)


def _offdiag_sum(idx: IndexSet, w1: complex, w2: complex, weight=None, include_l0: bool = True) -> SeriesValue:
    """Lattice sum with complex pair products w1 = conj(z1) z1', w2 = conj(z2) z2'.

    Powers are principal per product; scale is exp(-|w1|-|w2|).
    """
    tab = term_table(idx.alpha, math.sqrt(abs(w1)), math.sqrt(abs(w2)), idx.j, include_l0=include_l0)
    if tab.n_terms == 0:
        return SeriesValue(0.0, tab.tail_bound, 0, EvalPath.DIRECT_SERIES)
    w = np.ones_like(tab.terms) if weight is None else np.asarray(weight(tab.n1, tab.n2))
    ph1 = cmath.phase(w1) if w1 != 0 else 0.0
    ph2 = cmath.phase(w2) if w2 != 0 else 0.0
    if ph1 == 0.0 and ph2 == 0.0:
        value: complex = float((w * tab.terms).sum())
    else:
        value = complex((w * tab.terms * np.exp(1j * (tab.n1 * ph1 + tab.n2 * ph2))).sum())
    wmax = float(np.abs(w).max(initial=1.0))
    abs_err = tab.tail_bound * 4.0 * wmax + 1e-12 * float((np.abs(w) * tab.terms).sum())
    return SeriesValue(value, abs_err, tab.n_terms, EvalPath.DIRECT_SERIES)


# ---------------------------------------------------------------------------
# means
# ---------------------------------------------------------------------------


def mean_n(cs: CoherentState, k: int, method: str = "weighted") -> float:
    """Mean occupation of ladder k in {1, 2}.

    method="weighted" sums the lattice with weight n_k; method="ratio" uses
    the independent closed forms through the kernel ratio (single-sector and
    massless species only).
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    if method == "weighted":
        num = 0.0
        den = 0.0
        for sigma in cs.sectors():
            num += complex(sector_sum(cs, sigma, "n1" if k == 1 else "n2").value).real
            den += complex(sector_sum(cs, sigma, "one").value).real
        if den < 1e-300:
            raise DegenerateStateError("scaled norm underflowed")
        return num / den
    if method != "ratio":
        raise ValueError(f"unknown method {method!r}")
    if cs.spec.species is Species.REL2P1_MASSIVE:
        raise ValueError("no kernel-ratio closed form with the massive weight")
    num = 0.0
    den = 0.0
    for sigma in cs.sectors():
        n_sig, d_sig = _mean_n_ratio_sector(cs, sigma, k)
        num += n_sig
        den += d_sig
    return num / den


def _mean_n_ratio_sector(cs: CoherentState, sigma: int, k: int) -> tuple[float, float]:
    """(numerator, denominator) of the Bessel-ladder closed form for one sector.

    For j = 0 the kernel is Q_a(u, v) with a = 1 - mu_sigma, u = |z1|:
    N1 = u^2 Delta_a and N2 - N1 is the mean ladder offset; j = 1 mirrors
    the roles with (u, v) -> (|z2|, |z1|).
    """
    from .qseries import _l0_term_scaled, _ladder_sum_scaled

    idx = cs.index_set(sigma)
    a = idx.alpha
    if cs.j == 0:
        ku, kv = cs.u, cs.v
    else:
        ku, kv = cs.v, cs.u
    qm, _, _ = _ladder_sum_scaled(a, ku, kv, 1, 1e-13, 20000)
    q = qm + _l0_term_scaled(a, ku, kv)
    # mean ladder offset sum_l (a+l) t_l / q
    soff, _, _ = _ladder_sum_scaled(a, ku, kv, 0, 1e-13, 20000, weight_l=lambda b: b)
    n_inner = ku * ku * qm  # N of the index whose ladder is contracted
    n_outer = n_inner + soff
    if cs.j == 0:
        n1_num, n2_num = n_inner, n_outer
    else:
        n1_num, n2_num = n_outer, n_inner
    return (n1_num if k == 1 else n2_num), q


def mean_a(cs: CoherentState, k: int) -> complex:
    """Mean of the lowering operator a_k in the state.

    Closed forms: for j = 0 the second parameter is exact (a2 -> z2) and the
    first is contracted by the kernel ratio; j = 1 mirrors this.  The massive
    species applies its energy weight, shifted to n1 + 1 under a1.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    exact = (cs.j == 0 and k == 2) or (cs.j == 1 and k == 1)
    zk = complex(cs.z1) if k == 1 else complex(cs.z2)
    if zk == 0:
        return 0j  # the matrix element carries the factor z_k exactly
    if cs.spec.species is Species.REL2P1_MASSIVE:
        shift = k == 1  # a1 lowers n1, moving the weight argument up by one
        num = 0.0
        den = 0.0
        for sigma in cs.sectors():
            num += complex(sector_sum(cs, sigma, "one", include_l0=exact, shift_species_n1=shift).value).real
            den += complex(sector_sum(cs, sigma, "one").value).real
        if den < 1e-300:
            raise DegenerateStateError("scaled norm underflowed")
        return zk * (num / den)
    if exact:
        return zk
    num = 0.0
    den = 0.0
    for sigma in cs.sectors():
        num += complex(sector_sum(cs, sigma, "one", include_l0=False).value).real
        den += complex(sector_sum(cs, sigma, "one").value).real
    if den < 1e-300:
        raise DegenerateStateError("scaled norm underflowed")
    return zk * (num / den)


def a_matrix_element(cs: CoherentState, other: CoherentState, k: int) -> complex:
    """Matrix element of a_k between two same-type states (z differing).

    (a1) = z1' Q^-(...) style for the contracted index, z_k' Q(...) for the
    exact one; vanishes across trajectory types.
    """
    if other.j != cs.j or other.spec != cs.spec or other.field != cs.field:
        if other.j != cs.j:
            return 0j
        raise ValueError("matrix elements need matching species and field")
    exact = (cs.j == 0 and k == 2) or (cs.j == 1 and k == 1)
    zk = complex(other.z1) if k == 1 else complex(other.z2)
    w1 = complex(cs.z1).conjugate() * complex(other.z1)
    w2 = complex(cs.z2).conjugate() * complex(other.z2)
    total = 0j
    for sigma in cs.sectors():
        wspec, _ = cs.species_weight(sigma)
        if wspec is not None:
            raise ValueError("massive-species matrix elements are not exposed")
        total += complex(_offdiag_sum(cs.index_set(sigma), w1, w2, include_l0=exact).value)
    return zk * total


def mean_position(cs: CoherentState) -> tuple[float, float]:
    """(x, y) means, decoded from x - i eps y = sqrt(2/gamma)(a2 - conj(a1))."""
    w = math.sqrt(2.0 / cs.field.gamma) * (mean_a(cs, 2) - mean_a(cs, 1).conjugate())
    return w.real, -cs.field.eps * w.imag


@dataclass(frozen=True)
class RadiusMeans:
    R2_mean: float
    Rc2_mean: float
    R_mean: float
    Rc_mean: float
    Jz_mean: float
    d_offset: float


def mean_R2_Rc2(cs: CoherentState) -> RadiusMeans:
    """Radius-squared means, mean orbit radii, angular momentum and offset.

    R2 = (2 N1 + 1 - sigma eps)/gamma and Rc2 = (2 N2 + 1)/gamma; the mean
    circle radii are R = sqrt(2/gamma)|a1|, Rc = sqrt(2/gamma)|a2|; J_z picks
    up the flux constant eps (l0 + mu) plus eps(N2 - N1 + eps sigma/2).
    """
    g = cs.field.gamma
    eps = cs.field.eps
    n1 = mean_n(cs, 1)
    n2 = mean_n(cs, 2)
    sig_r = cs.sigma_for_radius()
    r2 = (2.0 * n1 + 1.0 - sig_r * eps) / g
    rc2 = (2.0 * n2 + 1.0) / g
    r_mean = math.sqrt(2.0 / g) * abs(mean_a(cs, 1))
    rc_mean = math.sqrt(2.0 / g) * abs(mean_a(cs, 2))
    sig_bar = _sigma_mean(cs)
    jz = eps * (cs.field.flux_number + n2 - n1 + eps * sig_bar / 2.0)
    return RadiusMeans(
        R2_mean=r2,
        Rc2_mean=rc2,
        R_mean=r_mean,
        Rc_mean=rc_mean,
        Jz_mean=jz,
        d_offset=math.sqrt(r2) - math.sqrt(rc2),
    )


def _sigma_mean(cs: CoherentState) -> float:
    sectors = cs.sectors()
    if len(sectors) == 1:
        return float(sectors[0])
    norms = _sector_norms(cs)
    den = sum(complex(s.value).real for s in norms.values())
    num = sum(sigma * complex(s.value).real for sigma, s in norms.items())
    return num / den


@dataclass(frozen=True)
class Variances:
    var_n1: float
    var_n2: float
    var_xy: float


def variances(cs: CoherentState, clamp_warn: bool = True) -> Variances:
    """Variances of the two occupation numbers and of the position pair.

    var_xy = Var x + Var y = (2/gamma)[N1 + N2 + 1 - |a1|^2 - |a2|^2], which
    is exact for these states (the ladder-boundary terms telescope).
    """
    import warnings

    num = {k: 0.0 for k in ("one", "n1", "n2", "n1sq", "n2sq")}
    for sigma in cs.sectors():
        for k in num:
            num[k] += complex(sector_sum(cs, sigma, k).value).real
    den = num["one"]
    if den < 1e-300:
        raise DegenerateStateError("scaled norm underflowed")
    n1, n2 = num["n1"] / den, num["n2"] / den
    var1 = num["n1sq"] / den - n1 * n1
    var2 = num["n2sq"] / den - n2 * n2
    g = cs.field.gamma
    a1 = mean_a(cs, 1)
    a2 = mean_a(cs, 2)
    vxy = (2.0 / g) * (n1 + n2 + 1.0 - abs(a1) ** 2 - abs(a2) ** 2)
    out = []
    for name, val in (("var_n1", var1), ("var_n2", var2), ("var_xy", vxy)):
        if val < -1e-9 * max(1.0, n1 + n2):
            raise ConvergenceError(f"{name} came out negative beyond tolerance: {val}")
        if val < 0.0:
            if clamp_warn:
                warnings.warn(f"{name} clamped to 0 from {val:.3e}")
            val = 0.0
        out.append(val)
    return Variances(*out)


@dataclass(frozen=True)
class UncertaintyReport:
    product_p: float  # Var(P_perp^2) * (Var x + Var y)
    bound_p: float  # |mean(P1 + i eps P2)|^2
    product_l: float  # Var(L_z) * (Var x + Var y)
    bound_l: float  # |mean(x - i eps y)|^2 / 4
    ratio_p: float
    ratio_l: float
    minimality_p: float  # product / (4 * bound): ~1 when saturated
    minimality_l: float


def uncertainty_products(cs: CoherentState) -> UncertaintyReport:
    """Robertson-type products for (P_perp^2, positions) and (L_z, positions).

    Var(P_perp^2) = (2 gamma)^2 Var N1 exactly (operator identity) and
    Var L_z = Var(N1 - N2); both lower bounds follow from summing the
    component-wise uncertainty relations over x and y.  Violation beyond
    1e-9 relative raises.
    """
    g = cs.field.gamma
    v = variances(cs)
    num = {k: 0.0 for k in ("one", "n1", "n2", "ndiff_sq")}
    for sigma in cs.sectors():
        for k in num:
            num[k] += complex(sector_sum(cs, sigma, k).value).real
    den = num["one"]
    ndiff_mean = (num["n1"] - num["n2"]) / den
    var_ndiff = num["ndiff_sq"] / den - ndiff_mean**2
    var_p2 = (2.0 * g) ** 2 * v.var_n1
    a1 = mean_a(cs, 1)
    bound_p = 2.0 * g * abs(a1) ** 2
    w = math.sqrt(2.0 / g) * (mean_a(cs, 2) - a1.conjugate())
    bound_l = abs(w) ** 2 / 4.0
    product_p = var_p2 * v.var_xy
    product_l = var_ndiff * v.var_xy
    scale_p = max(product_p, bound_p, 1e-300)
    scale_l = max(product_l, bound_l, 1e-300)
    if product_p < bound_p - 1e-9 * scale_p or product_l < bound_l - 1e-9 * scale_l:
        raise ConvergenceError("uncertainty product fell below its lower bound")
    return UncertaintyReport(
        product_p=product_p,
        bound_p=bound_p,
        product_l=product_l,
        bound_l=bound_l,
        ratio_p=product_p / bound_p if bound_p > 0 else math.inf,
        ratio_l=product_l / bound_l if bound_l > 0 else math.inf,
        minimality_p=product_p / (4.0 * bound_p) if bound_p > 0 else math.inf,
        minimality_l=product_l / (4.0 * bound_l) if bound_l > 0 else math.inf,
    )


@dataclass(frozen=True)
class ObservableSet:
    norm: SeriesValue
    n1_mean: float
    n2_mean: float
    a1_mean: complex
    a2_mean: complex
    x_mean: float
    y_mean: float
    R2_mean: float
    Rc2_mean: float
    R_mean: float
    Rc_mean: float
    Jz_mean: float
    var_n1: float
    var_n2: float
    var_xy: float
    d_offset: float


def observables(cs: CoherentState) -> ObservableSet:
    """All scalar observables of one state in a single bundle."""
    nrm = norm_kernel(cs)
    n1 = mean_n(cs, 1)
    n2 = mean_n(cs, 2)
    a1 = mean_a(cs, 1)
    a2 = mean_a(cs, 2)
    x, y = mean_position(cs)
    rad = mean_R2_Rc2(cs)
    var = variances(cs)
    return ObservableSet(
        norm=nrm,
        n1_mean=n1,
        n2_mean=n2,
        a1_mean=a1,
        a2_mean=a2,
        x_mean=x,
        y_mean=y,
        R2_mean=rad.R2_mean,
        Rc2_mean=rad.Rc2_mean,
        R_mean=rad.R_mean,
        Rc_mean=rad.Rc_mean,
        Jz_mean=rad.Jz_mean,
        var_n1=var.var_n1,
        var_n2=var.var_n2,
        var_xy=var.var_xy,
        d_offset=rad.d_offset,
    )


# ---------------------------------------------------------------------------
# position density on the plane
# ---------------------------------------------------------------------------


_DENSITY_SPECIES = (
    Species.SPINLESS,
    Species.NR2P1_SPIN_UP,
    Species.NR2P1_SPIN_DOWN,
    Species.NR3P1,
    Species.REL3P1,
    Species.MASSLESS2P1,
)


def _branch_phases_and_orders(cs: CoherentState, sigma: int, n_branches: int):
    """Angular phase factors and generating-function orders per ladder branch.

    Branch k of type j = 0 has order (1 - mu_sigma) + k and angular factor
    exp(i eps c_k phi); type j = 1 has order mu_sigma + k plus a constant
    ladder phase i eps pi [l - (1-eps)(1+sigma)/4].
    """
    f = cs.field
    eps, theta = f.eps, f.vartheta
    idx = cs.index_set(sigma)
    ks = np.arange(n_branches)
    if cs.j == 0:
        ltil = -(1 + theta * eps) / 2.0 - ks
    else:
        ltil = (1 - theta * eps) / 2.0 + ks
    l = ltil + (1 + eps) * (1 + sigma) / 2.0
    c_phi = eps * (f.l0 - l + (1 - eps * sigma) / 2.0)
    if cs.j == 0:
        const = np.zeros(n_branches)
    else:
        const = eps * math.pi * (l - (1 - eps) * (1 + sigma) / 4.0)
    orders = idx.alpha + ks
    return c_phi, const, orders


def _y_scaled_grid(alpha: float, zA: complex, zB: complex, rhos: np.ndarray, s: float) -> np.ndarray:
    """Generating function of one branch over a rho grid, scaled by e^-s.

    Computes exp(zA zB - rho/2 - s) (sqrt(zB/zA))^a (z_A z_B)^(a/2) rho^(a/2)
    times the reduced Bessel series; valid while |zA zB| stays below ~20
    (larger products would need more than long-double headroom).
    """
    zA, zB = complex(zA), complex(zB)
    rhos = np.asarray(rhos, dtype=float)
    if zA == 0 or zB == 0:
        if alpha > 0:
            return np.zeros_like(rhos, dtype=complex)
        if alpha == 0:  # only m = 0 survives
            return np.exp(-rhos / 2.0 - s).astype(complex)
        raise ValueError("zero parameter with negative order is singular")
    w = np.asarray(zA * zB * rhos, dtype=complex)
    branch = cmath.sqrt(zB / zA) ** alpha * cmath.sqrt(zA * zB) ** alpha
    pref = np.exp(zA * zB - rhos / 2.0 - s) * branch * np.power(rhos, alpha / 2.0)
    # reduced series in extended precision over the grid
    lg = float(_ln_gamma_arr(alpha + 1.0)[0])
    t = np.full(w.shape, math.exp(-lg), dtype=np.clongdouble)
    acc = t.copy()
    wl = w.astype(np.clongdouble)
    k = 0
    tmax = float(np.abs(t).max())
    while True:
        k += 1
        t = -t * wl / (k * (k + alpha))
        acc = acc + t
        tnow = float(np.abs(t).max())
        tmax = max(tmax, tnow)
        if tnow < 1e-24 * (float(np.abs(acc).max()) + 1e-6 * tmax) or k > 800:
            break
    return pref * acc.astype(complex)


def density_grid(cs: CoherentState, phis: np.ndarray, rhos: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Normalized position density on a (rho, phi) grid, shape (nr, nphi).

    The density is |sum over ladder branches|^2 / (2 pi * norm); the branch
    sum is truncated adaptively once added branches fall below ``tol`` of the
    accumulated maximum.  Integrating rho and phi over the plane gives 1.
    """
    sp = cs.spec.species
    if sp not in _DENSITY_SPECIES:
        raise ValueError(f"density is not defined through the scalar kernel for {sp.value}")
    if sp is Species.MASSLESS2P1 and cs.j == 0:
        raise ValueError("massless type-0 density is out of scope (zero-mode corrections)")
    phis = np.asarray(phis, dtype=float)
    rhos = np.asarray(rhos, dtype=float)
    if np.any(rhos <= 0):
        raise ValueError("rho grid must be strictly positive")
    s = (cs.u**2 + cs.v**2) / 2.0
    total = np.zeros((rhos.size, phis.size))
    norm = 0.0
    for sigma in cs.sectors():
        norm += complex(sector_sum(cs, sigma, "one").value).real
        amp = _sector_amplitude_grid(cs, sigma, phis, rhos, s, tol)
        total += np.abs(amp) ** 2
    return total / (2.0 * math.pi * norm)


def _sector_amplitude_grid(cs, sigma, phis, rhos, s, tol) -> np.ndarray:
    zA, zB = (cs.z1, cs.z2) if cs.j == 0 else (cs.z2, cs.z1)
    amp = np.zeros((rhos.size, phis.size), dtype=complex)
    peak = 0.0
    k = 0
    idle = 0
    max_branches = 600
    while k < max_branches:
        c_phi, const, orders = _branch_phases_and_orders(cs, sigma, k + 1)
        y = _y_scaled_grid(float(orders[k]), zA, zB, rhos, s)
        phase = np.exp(1j * (c_phi[k] * phis + const[k]))
        amp += y[:, None] * phase[None, :]
        mag = float(np.abs(y).max())
        peak = max(peak, mag)
        if peak > 0 and mag < tol * peak:
            idle += 1
            if idle >= 4:
                return amp
        else:
            idle = 0
        k += 1
    raise ConvergenceError("ladder-branch sum for the density did not converge")


def density(cs: CoherentState, phi: float, rho: float, l_window: int | None = None) -> float:
    """Normalized position density at one point of the plane."""
    if l_window is not None and l_window < 8:
        raise ConvergenceError("ladder window too small for the branch tail bound")
    val = density_grid(cs, np.array([phi]), np.array([rho]))
    return float(val[0, 0])
