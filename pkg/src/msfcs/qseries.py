"""Kernel series for coherent-state norms, means and matrix elements.

Every observable of the two-parameter states reduces to weighted double sums
over the quantum-number lattice (n1, n2) of one trajectory type, or to the
equivalent ladder sums of modified Bessel functions

    Q_a(u, v)   = sum_{l>=0} (v/u)^(a+l) I_{a+l}(2uv),
    Q_a^-(u, v) = sum_{l>=1} (v/u)^(a+l) I_{a+l}(2uv).

Three independent evaluation paths are provided and cross-checked:

* DirectSeries - the Bessel ladder sum (or, for complex arguments, the raw
  double series over the index lattice);
* IntegralRep  - 1 - T(u, v) with T an adaptive quadrature (real u, v > 0);
* the generic ``weighted_sum`` over an :class:`IndexSet`, a pure
  gamma-function double sum with no Bessel evaluation at all.

Scaling convention: "scaled" values carry exp(-u^2-v^2) (exp(-|w1|-|w2|) for
complex products) relative to the raw kernels, keeping magnitudes
representable out to |z| ~ 50.  Every result is a :class:`SeriesValue`
bundling the value with a rigorous truncation + roundoff bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .params import mu_sigma
from .specfun import _ln_gamma_arr, bessel_i_scaled

_LD = np.longdouble


class EvalPath(str, Enum):
    DIRECT_SERIES = "DirectSeries"
    INTEGRAL_REP = "IntegralRep"
    CLOSED_FORM = "ClosedForm"
    ASYMPTOTIC = "Asymptotic"


class Regime(str, Enum):
    QUANTUM = "Quantum"
    FAR_BELOW_DIAG = "FarBelowDiag"
    NEAR_DIAG = "NearDiag"
    FAR_ABOVE_DIAG = "FarAboveDiag"
    INTERMEDIATE = "Intermediate"


class ConvergenceError(RuntimeError):
    """No rigorous truncation bound could be established within the term cap."""


class RegimeError(ValueError):
    """An asymptotic formula was requested outside its validated regime."""


@dataclass(frozen=True)
class SeriesValue:
    """A computed series value with a rigorous absolute-error bound."""

    value: complex
    abs_err: float
    n_terms: int
    path: EvalPath

    def __post_init__(self):
        if not self.abs_err >= 0.0:
            raise ValueError(f"abs_err must be >= 0, got {self.abs_err!r}")
        if cmath.isfinite(complex(self.value)) and not math.isfinite(self.abs_err):
            raise ValueError("abs_err must be finite when the value is finite")


def paths_agree(a: SeriesValue, b: SeriesValue, rel: float = 1e-12) -> bool:
    """Two evaluations of the same quantity must overlap within their bounds."""
    scale = max(abs(complex(a.value)), abs(complex(b.value)))
    return abs(complex(a.value) - complex(b.value)) <= a.abs_err + b.abs_err + rel * scale


@dataclass(frozen=True)
class IndexSet:
    """Quantum-number lattice of one trajectory type and spin sector.

    The admissible pairs are (n1, n2) = (m, m + a + l) for type j = 0 and
    (m + a + l, m) for type j = 1, with integer m >= 0, ladder index l >= 0
    and a the kernel order (1 - mu_sigma or mu_sigma respectively).  The
    ladder index maps back to the angular label via
    ltilde = -(1 + vartheta*eps)/2 - l  (j = 0)  and
    ltilde =  (1 - vartheta*eps)/2 + l  (j = 1).
    """

    j: int
    sigma: int
    eps: int
    vartheta: int
    mu: float

    def __post_init__(self):
        if self.j not in (0, 1):
            raise ValueError(f"j must be 0 or 1, got {self.j!r}")
        if self.eps not in (-1, 1) or self.vartheta not in (-1, 1):
            raise ValueError("eps and vartheta must be +1 or -1")
        # sigma/mu ranges checked by mu_sigma

    @property
    def mu_sigma(self) -> float:
        return mu_sigma(self.mu, self.vartheta, self.eps, self.sigma)

    @property
    def alpha(self) -> float:
        """Kernel order of the ladder sums for this type."""
        return 1.0 - self.mu_sigma if self.j == 0 else self.mu_sigma

    def ltilde(self, l: int) -> float:
        if self.j == 0:
            return -(1 + self.vartheta * self.eps) / 2 - l
        return (1 - self.vartheta * self.eps) / 2 + l

    def pair(self, l: int, m: int) -> tuple[float, float]:
        """(n1, n2) of ladder index l >= 0 and radial index m >= 0."""
        off = m + self.alpha + l
        return (float(m), off) if self.j == 0 else (off, float(m))


# ---------------------------------------------------------------------------
# term tables: the raw double series over an index set, fully vectorized
# ---------------------------------------------------------------------------


@dataclass
class TermTable:
    """Flat scaled-term table of a kernel double sum (diagonal arguments).

    ``terms`` carry the factor exp(-u^2 - v^2); ``tail_bound`` bounds the
    scaled mass of every lattice point left out of the table.  Tables are
    cached and shared; treat all arrays as read-only.
    """

    n1: np.ndarray
    n2: np.ndarray
    terms: np.ndarray  # long double, nonnegative
    tail_bound: float
    u: float
    v: float

    @property
    def n_terms(self) -> int:
        return self.n1.size

    def total(self) -> float:
        return float(self.terms.sum())


def _chernoff_tail(y: float, lam: float) -> float:
    """Bound on the scaled one-sided Poisson-like grid mass at or beyond y."""
    if lam <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    return math.exp(min(0.0, y - lam - y * math.log(y / lam)))


def term_table(
    alpha: float,
    u: float,
    v: float,
    j: int,
    include_l0: bool = True,
    tol: float = 1e-14,
    max_branches: int = 20000,
) -> TermTable:
    """Enumerate the scaled double series of Q_alpha over one index set.

    For j = 0 the pairs are (m, m + alpha + l) with u powering n1 = m; for
    j = 1 they are (m + alpha + l, m).  Windows are sized from the Poisson
    widths of the two marginals, deepened when the total itself is
    exponentially small (only possible for u > v), and the discarded mass is
    bounded by Chernoff tails times a small constant accounting for the
    unit-spaced fractional lattice.
    """
    if not alpha > -1.0 - 1e-15:
        raise ValueError(f"kernel order must exceed -1, got {alpha!r}")
    if u < 0 or v < 0:
        raise ValueError("term_table needs nonnegative real arguments")
    return _term_table_cached(float(alpha), float(u), float(v), int(j), bool(include_l0), float(tol), int(max_branches))


def _term_table_build(
    alpha: float, u: float, v: float, j: int, include_l0: bool, tol: float, max_branches: int
) -> TermTable:
    lam1, lam2 = u * u, v * v
    # smallest possible total: O(1) for v >= u, exp(-(u-v)^2)-scale for u > v
    ln_small = -(max(u - v, 0.0) ** 2) - 0.5 * math.log(4.0 * lam1 * lam2 + 10.0) - abs(alpha) - 3.0
    depth = -ln_small - math.log(tol) + 30.0
    k = max(10.0, math.sqrt(2.0 * depth) + 1.0)

    def window(lam: float) -> tuple[float, float]:
        half = k * math.sqrt(lam + 1.0) + 25.0
        return max(0.0, lam - half), lam + half

    w1_lo, w1_hi = window(lam1)
    w2_lo, w2_hi = window(lam2)
    # map (n1, n2) windows onto the (l, m) enumeration
    if j == 0:
        m_lo_glob, m_hi_glob = w1_lo, w1_hi
        o_lo_glob, o_hi_glob = w2_lo, w2_hi  # offset coordinate n2 = m + alpha + l
    else:
        m_lo_glob, m_hi_glob = w2_lo, w2_hi
        o_lo_glob, o_hi_glob = w1_lo, w1_hi

    l_min = 0 if include_l0 else 1
    l_lo = max(l_min, int(math.ceil(o_lo_glob - m_hi_glob - alpha)))
    l_hi = int(math.floor(o_hi_glob - m_lo_glob - alpha))
    if l_hi - l_lo + 1 > max_branches:
        raise ConvergenceError(
            f"index set needs {l_hi - l_lo + 1} ladder branches, cap is {max_branches}"
        )

    m_chunks = []
    l_vals = []
    for l in range(l_lo, l_hi + 1):
        beta = alpha + l
        m_a = max(int(math.ceil(m_lo_glob)), int(math.ceil(o_lo_glob - beta)))
        m_b = min(int(math.floor(m_hi_glob)), int(math.floor(o_hi_glob - beta)))
        if m_b < m_a:
            continue
        m_chunks.append(np.arange(m_a, m_b + 1, dtype=np.int64))
        l_vals.append(l)

    if m_chunks:
        m_arr = np.concatenate(m_chunks).astype(float)
        off_arr = np.concatenate(
            [np.full(c.size, alpha + l, dtype=float) + c for c, l in zip(m_chunks, l_vals)]
        )
    else:
        m_arr = np.zeros(0)
        off_arr = np.zeros(0)
    if j == 0:
        n1, n2 = m_arr, off_arr
    else:
        n1, n2 = off_arr, m_arr

    scale = u * u + v * v
    if u > 0:
        log_t = (2.0 * math.log(u)) * n1
    else:
        log_t = np.where(n1 == 0, 0.0, -np.inf)
    if v > 0:
        log_t = log_t + (2.0 * math.log(v)) * n2
    else:
        log_t = log_t + np.where(n2 == 0, 0.0, -np.inf)
    log_t = log_t - _ln_gamma_arr(n1 + 1.0, dtype=np.float64) - _ln_gamma_arr(n2 + 1.0, dtype=np.float64) - scale
    terms = np.exp(log_t)

    grid_const = 12.0  # unit-spaced fractional lattice vs integer Poisson, both sides
    tail = grid_const * (
        _chernoff_tail(w1_lo - 1.0, lam1) * (1.0 if w1_lo > 0 else 0.0)
        + _chernoff_tail(w1_hi + 1.0, lam1)
        + _chernoff_tail(w2_lo - 1.0, lam2) * (1.0 if w2_lo > 0 else 0.0)
        + _chernoff_tail(w2_hi + 1.0, lam2)
    )
    tail += 5e-324 * n1.size  # mass flushed to zero by exp underflow
    return TermTable(n1=n1, n2=n2, terms=terms, tail_bound=tail, u=u, v=v)


@lru_cache(maxsize=128)
def _term_table_cached(alpha, u, v, j, include_l0, tol, max_branches) -> TermTable:
    return _term_table_build(alpha, u, v, j, include_l0, tol, max_branches)


def kernel_table(idx: IndexSet, u: float, v: float, include_l0: bool = True, tol: float = 1e-14) -> TermTable:
    """Term table of the (scaled) norm kernel of ``idx`` at |z1| = u, |z2| = v."""
    return term_table(idx.alpha, u, v, idx.j, include_l0=include_l0, tol=tol)


def weighted_sum(
    idx: IndexSet,
    u: float,
    v: float,
    weight: Callable[[np.ndarray, np.ndarray], np.ndarray],
    tol: float = 1e-13,
    envelope: tuple[float, float] = (1.0, 0.0),
    include_l0: bool = True,
) -> SeriesValue:
    """Scaled weighted double sum over the index set.

    Computes exp(-u^2-v^2) * sum weight(n1, n2) u^(2 n1) v^(2 n2)
    / (Gamma(1+n1) Gamma(1+n2)).  ``envelope = (C, p)`` declares
    |weight| <= C (1 + n1 + n2)^p, which controls the tail bound; a weight
    observed to exceed its envelope on the table is rejected.
    """
    c_env, p_env = envelope
    tab = term_table(idx.alpha, u, v, idx.j, include_l0=include_l0, tol=tol)
    if tab.n_terms == 0:
        return SeriesValue(0.0, tab.tail_bound * c_env, 0, EvalPath.DIRECT_SERIES)
    w = np.asarray(weight(tab.n1, tab.n2))
    bound = c_env * (1.0 + tab.n1 + tab.n2) ** p_env
    if np.any(np.abs(w) > bound * (1.0 + 1e-9) + 1e-300):
        raise ValueError("weight exceeds its declared polynomial envelope")
    if np.iscomplexobj(w):
        value = complex((w * tab.terms).sum())
    else:
        value = float((w * tab.terms).sum())
    absw_sum = float((np.abs(w) * tab.terms).sum())
    n_edge = float(tab.n1.max() + tab.n2.max()) + 4.0 * k_reach(u, v)
    tail = tab.tail_bound * c_env * (1.0 + n_edge) ** p_env * 2.0
    # 1e-12 covers the float64 assembly of exponents up to ~4e3 in magnitude
    abs_err = tail + 1e-12 * absw_sum + 1e-300
    return SeriesValue(value, abs_err, tab.n_terms, EvalPath.DIRECT_SERIES)


def k_reach(u: float, v: float) -> float:
    """Scale of how far the tails can reach past the windows (bound helper)."""
    return math.sqrt(u * u + v * v + 1.0)


# ---------------------------------------------------------------------------
# Bessel-ladder evaluation (DirectSeries for real arguments)
# ---------------------------------------------------------------------------


def _ladder_reachable(u: float, v: float) -> bool:
    """Whether the Bessel-ladder loop is safe and cheap for these arguments.

    The deepest scaled-Bessel exponent visited is about
    -(u-v)^2 - |v^2-u^2| |ln(v/u)| at the dominant ladder rung; keep a wide
    margin below the 1e-308 floor.  Large 2uv also makes the per-rung Bessel
    series expensive, so big arguments go to the lattice path instead.
    """
    if u == 0.0 or v == 0.0:
        return True
    if 2.0 * u * v > 600.0:
        return False
    depth = (u - v) ** 2 + abs(v * v - u * u) * abs(math.log(v / u))
    return depth < 580.0


def _ladder_sum_scaled(
    alpha: float,
    u: float,
    v: float,
    l_start: int,
    tol: float,
    max_terms: int,
    weight_l: Callable[[float], float] | None = None,
) -> tuple[float, float, int]:
    """sum_{l >= l_start} w(a+l) (v/u)^(a+l) I_{a+l}(2uv) e^(-u^2-v^2).

    Returns (value, abs_err, n_terms).  Truncation uses the term-ratio bound
    I_{b+1}(x) <= x I_b(x) / (2(b+1)), i.e. t_{l+1} <= t_l v^2/(b+1), which is
    geometric once b+1 > v^2; for weighted sums the declared weight must be
    bounded by a linear envelope in the order (all uses here are).
    """
    if u < 0 or v < 0:
        raise ValueError("ladder sum needs nonnegative real arguments")
    if v == 0.0:
        return 0.0, 0.0, 0
    if u == 0.0:
        # only the m = 0 row survives: t_l = v^(2(a+l)) e^(-v^2) / Gamma(a+l+1)
        s = _LD(0.0)
        l = l_start
        n = 0
        while True:
            beta = alpha + l
            t = math.exp(2 * beta * math.log(v) - float(_ln_gamma_arr(beta + 1.0)[0]) - v * v)
            w = 1.0 if weight_l is None else weight_l(beta)
            s += _LD(t * w)
            n += 1
            r = v * v / (beta + 1.0)
            if r < 0.5 and t * abs(w) < tol * float(abs(s)) + 1e-320:
                wfac = 1.0 if weight_l is None else abs(weight_l(beta + 1.0)) + 1.0
                return float(s), t * wfac * r / (1 - r) + 1e-320, n
            l += 1
            if n > max_terms:
                raise ConvergenceError("ladder sum did not converge within max_terms")

    if not _ladder_reachable(u, v):
        raise ConvergenceError("ladder rungs exceed double range; use the lattice path")
    gauss_ln = -((u - v) ** 2)
    log_vu = math.log(v / u)
    x = 2 * u * v
    s = _LD(0.0)
    abs_s = _LD(0.0)
    l = l_start
    n = 0
    t = 0.0
    while True:
        beta = alpha + l
        ive = bessel_i_scaled(beta, x)
        t = math.exp(beta * log_vu + math.log(ive) + gauss_ln) if ive > 0.0 else 0.0
        w = 1.0 if weight_l is None else weight_l(beta)
        s += _LD(t * w)
        abs_s += _LD(abs(t * w))
        n += 1
        r = v * v / (beta + 1.0)
        converged = r < 0.9 and t * (abs(w) + 1.0) * r / (1.0 - r) < tol * float(abs_s) + 1e-320
        if converged or (n > max_terms and r < 0.9):
            # at the term cap the (valid) tail bound is reported, never hidden
            wfac = 1.0 if weight_l is None else abs(weight_l(beta + 2.0)) + 1.0
            tail = t * wfac * r / (1.0 - r)
            round_off = 5e-17 * float(abs_s) * math.log(n + 2.0)
            return float(s), tail + round_off + 1e-320, n
        l += 1
        if n > max_terms:
            raise ConvergenceError(
                f"no tail bound within {max_terms} terms "
                f"(last term {t:.3e}, ratio bound {r:.3f} >= 0.9)"
            )


def _unscale(scaled: SeriesValue, u_sq_plus_v_sq: float) -> SeriesValue:
    factor = math.exp(u_sq_plus_v_sq)  # OverflowError past ~709: use the scaled form
    return SeriesValue(
        complex(scaled.value) * factor if isinstance(scaled.value, complex) else scaled.value * factor,
        scaled.abs_err * factor,
        scaled.n_terms,
        scaled.path,
    )


def _is_real_nonneg(x: complex) -> bool:
    return (not isinstance(x, complex)) or (x.imag == 0.0 and x.real >= 0.0)


def _complex_double_sum(
    alpha: float, u: complex, v: complex, include_l0: bool, tol: float
) -> SeriesValue:
    """Raw double series with complex arguments, scaled by exp(-|u|^2-|v|^2).

    Powers are taken per argument with principal logs, u^(2 n1) v^(2 n2),
    matching the generating-series definition of the kernels.
    """
    au, av = abs(u), abs(v)
    tab = term_table(alpha, au, av, 0, include_l0=include_l0, tol=tol)
    if tab.n_terms == 0:
        return SeriesValue(0.0, tab.tail_bound, 0, EvalPath.DIRECT_SERIES)
    ph_u = cmath.phase(u) if au > 0 else 0.0
    ph_v = cmath.phase(v) if av > 0 else 0.0
    if ph_u == 0.0 and ph_v == 0.0:
        value: complex = tab.total()
    else:
        phases = np.exp(1j * (2.0 * tab.n1 * ph_u + 2.0 * tab.n2 * ph_v))
        value = complex((phases * tab.terms).sum())
    abs_err = tab.tail_bound * 2.0 + 1e-12 * tab.total()
    return SeriesValue(value, abs_err, tab.n_terms, EvalPath.DIRECT_SERIES)


def q_minus_scaled(
    alpha: float,
    u: complex,
    v: complex,
    tol: float = 1e-13,
    max_terms: int = 20000,
    path: EvalPath = EvalPath.DIRECT_SERIES,
) -> SeriesValue:
    """exp(-|u|^2-|v|^2) Q_alpha^-(u, v)."""
    if not alpha > -1.0 - 1e-15:
        raise ValueError(f"order must exceed -1, got {alpha!r}")
    if path is EvalPath.INTEGRAL_REP:
        if not (_is_real_nonneg(u) and _is_real_nonneg(v)):
            raise ValueError("the integral representation needs positive real arguments")
        ur, vr = float(complex(u).real), float(complex(v).real)
        t_val = t_integral(alpha, ur, vr)
        return SeriesValue(1.0 - complex(t_val.value).real, t_val.abs_err, t_val.n_terms, EvalPath.INTEGRAL_REP)
    if path is not EvalPath.DIRECT_SERIES:
        raise ValueError(f"unsupported path {path!r} for q_minus")
    if _is_real_nonneg(u) and _is_real_nonneg(v):
        ur, vr = float(complex(u).real), float(complex(v).real)
        if _ladder_reachable(ur, vr):
            val, err, n = _ladder_sum_scaled(alpha, ur, vr, 1, tol, max_terms)
            return SeriesValue(val, err, n, EvalPath.DIRECT_SERIES)
    return _complex_double_sum(alpha, complex(u), complex(v), include_l0=False, tol=tol)


def q_full_scaled(
    alpha: float,
    u: complex,
    v: complex,
    tol: float = 1e-13,
    max_terms: int = 20000,
    path: EvalPath = EvalPath.DIRECT_SERIES,
) -> SeriesValue:
    """exp(-|u|^2-|v|^2) Q_alpha(u, v) = scaled Q^- plus the l = 0 rung."""
    if not alpha > -1.0 - 1e-15:
        raise ValueError(f"order must exceed -1, got {alpha!r}")
    if path is EvalPath.INTEGRAL_REP:
        qm = q_minus_scaled(alpha, u, v, tol, max_terms, path)
        ur, vr = float(complex(u).real), float(complex(v).real)
        l0 = _l0_term_scaled(alpha, ur, vr)
        return SeriesValue(
            complex(qm.value).real + l0, qm.abs_err + 1e-16 * abs(l0), qm.n_terms, qm.path
        )
    if path is not EvalPath.DIRECT_SERIES:
        raise ValueError(f"unsupported path {path!r} for q_full")
    if _is_real_nonneg(u) and _is_real_nonneg(v):
        ur, vr = float(complex(u).real), float(complex(v).real)
        if _ladder_reachable(ur, vr):
            val, err, n = _ladder_sum_scaled(alpha, ur, vr, 0, tol, max_terms)
            return SeriesValue(val, err, n, EvalPath.DIRECT_SERIES)
    return _complex_double_sum(alpha, complex(u), complex(v), include_l0=True, tol=tol)


def _l0_term_scaled(alpha: float, u: float, v: float) -> float:
    """(v/u)^alpha I_alpha(2uv) e^(-u^2-v^2), with the u = 0 limit."""
    if v == 0.0 and u == 0.0:
        return 1.0 if alpha == 0.0 else 0.0
    if u == 0.0:
        return math.exp(2 * alpha * math.log(v) - float(_ln_gamma_arr(alpha + 1.0)[0]) - v * v)
    if v == 0.0:
        return 0.0 if alpha > 0 else (math.exp(-u * u) if alpha == 0.0 else math.inf)
    return math.exp(alpha * math.log(v / u) - (u - v) ** 2) * bessel_i_scaled(alpha, 2 * u * v)


def q_minus(alpha, u, v, tol=1e-13, max_terms=20000, path=EvalPath.DIRECT_SERIES) -> SeriesValue:
    """Q_alpha^-(u, v) (raw scale; overflows past |u|^2+|v|^2 ~ 709)."""
    sc = q_minus_scaled(alpha, u, v, tol, max_terms, path)
    return _unscale(sc, abs(complex(u)) ** 2 + abs(complex(v)) ** 2)


def q_full(alpha, u, v, tol=1e-13, max_terms=20000, path=EvalPath.DIRECT_SERIES) -> SeriesValue:
    """Q_alpha(u, v) = Q_alpha^-(u, v) + (v/u)^alpha I_alpha(2uv)."""
    sc = q_full_scaled(alpha, u, v, tol, max_terms, path)
    return _unscale(sc, abs(complex(u)) ** 2 + abs(complex(v)) ** 2)


# ---------------------------------------------------------------------------
# integral representation
# ---------------------------------------------------------------------------


def t_integral(alpha: float, u: float, v: float) -> SeriesValue:
    """T(u, v) = 2 e^(-u^2) int_v^inf e^(-w^2) (w/u)^a I_a(2uw) w dw.

    The integrand is evaluated in overflow-safe form
    2 exp(-(w-u)^2) [e^(-2uw) I_a(2uw)] (w/u)^a w and satisfies
    scaled Q_a^- = 1 - T.  Adaptive quadrature up to a cutoff where the
    Gaussian factor is below 1e-18, plus an analytic remainder bound.
    """
    if not (u > 0 and v > 0):
        raise ValueError("t_integral needs positive real arguments")

    def integrand(w: float) -> float:
        return (
            2.0
            * math.exp(-((w - u) ** 2) + alpha * math.log(w / u))
            * bessel_i_scaled(alpha, 2 * u * w)
            * w
        )

    hi = max(v, u) + 10.0
    pts = [u] if v < u < hi else None
    val, err = quad(integrand, v, hi, points=pts, limit=200, epsabs=1e-14, epsrel=1e-12)
    # remainder: integrand <= f(hi) * exp(-(w-u)^2 + (hi-u)^2) * (w/hi)^(a+1) growth
    f_hi = integrand(hi)
    d = hi - u
    remainder = f_hi * math.exp(1.0) / (2.0 * d) * 2.0 if f_hi > 0 else 0.0
    return SeriesValue(val, err + remainder + 1e-300, 0, EvalPath.INTEGRAL_REP)


# ---------------------------------------------------------------------------
# ratios, generating function, asymptotics
# ---------------------------------------------------------------------------


def delta_ratio(alpha: float, u: float, v: float, tol: float = 1e-13) -> float:
    """Delta_a = Q_a^- / Q_a in (0, 1) for positive real arguments."""
    if not (u > 0 and v > 0):
        raise ValueError("delta_ratio needs positive real arguments")
    qm = q_minus_scaled(alpha, u, v, tol)
    l0 = _l0_term_scaled(alpha, u, v)
    return float(complex(qm.value).real / (complex(qm.value).real + l0))


def varpi(alpha: float, u: float, v: float, tol: float = 1e-13) -> float:
    """varpi_a = 1 - Delta_a = (v/u)^a I_a(2uv) e^(-u^2-v^2) / scaled Q_a."""
    if not (u > 0 and v > 0):
        raise ValueError("varpi needs positive real arguments")
    qm = q_minus_scaled(alpha, u, v, tol)
    l0 = _l0_term_scaled(alpha, u, v)
    return float(l0 / (complex(qm.value).real + l0))


def _j_reduced(alpha: float, w: complex, max_terms: int = 800) -> complex:
    """sum_k (-w)^k / (k! Gamma(a+k+1)), so J_a(2 sqrt(w)) = w^(a/2) * this.

    Summed in extended precision; alternating cancellation limits |w| to a few
    hundred, ample for the |z1 z2 rho| <= 100 contract.
    """
    wl = np.clongdouble(w)
    lg = _ln_gamma_arr(alpha + 1.0)[0]
    t = np.clongdouble(np.exp(-lg))
    s = t
    tmax = abs(t)
    k = 0
    while True:
        k += 1
        t = -t * wl / (k * (k + alpha))
        s = s + t
        tmax = max(tmax, abs(t))
        if abs(t) < 1e-25 * (abs(s) + 1e-6 * tmax) or k > max_terms:
            break
    return complex(s)


def y_alpha(alpha: float, z1: complex, z2: complex, rho: float) -> complex:
    """Closed form of the generating sum over one ladder branch:

        exp(z1 z2 - rho/2) (sqrt(z2/z1))^a  J_a(2 sqrt(z1 z2 rho)),

    with principal branches.  For z1 = 0 the defining series collapses to its
    first term and is used directly.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    if not alpha > -1.0:
        raise ValueError(f"order must exceed -1, got {alpha!r}")
    z1 = complex(z1)
    z2 = complex(z2)
    if z1 == 0:
        return y_alpha_series(alpha, z1, z2, rho)
    w = z1 * z2 * rho
    branch = cmath.sqrt(z2 / z1) ** alpha * cmath.sqrt(w) ** alpha
    return cmath.exp(z1 * z2 - rho / 2.0) * branch * _j_reduced(alpha, w)


def y_alpha_series(alpha: float, z1: complex, z2: complex, rho: float, max_terms: int = 2000) -> complex:
    """Defining series sum_m z1^m z2^(m+a) I_{m+a,m}(rho) / sqrt(m! Gamma(1+m+a)).

    Convention: z2^(m+a) is taken as z2^a z2^m with the principal power.
    The normalized Laguerre values are advanced by their three-term
    recurrence alongside the coefficients, so the whole sum is linear in the
    number of terms.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    if not alpha > -1.0:
        raise ValueError(f"order must exceed -1, got {alpha!r}")
    z1 = complex(z1)
    z2 = complex(z2)
    if z2 == 0:
        if alpha > 0:
            return 0j
        if alpha == 0:
            return complex(math.exp(-rho / 2.0))  # only m = 0 survives, I_{0,0}
        raise ValueError("z2 = 0 with negative order is singular")
    lg_a = float(_ln_gamma_arr(alpha + 1.0)[0])
    # coeff_m = z2^a (z1 z2)^m / sqrt(m! Gamma(1+m+a)), advanced recursively;
    # lag_m is the orthonormal Laguerre value of degree m
    coeff = np.clongdouble(cmath.exp(alpha * cmath.log(z2) - 0.5 * lg_a))
    zz = np.clongdouble(z1 * z2)
    lag_prev = np.longdouble(0.0)
    lag = np.exp(np.longdouble(-rho / 2.0 + 0.5 * alpha * math.log(rho) - 0.5 * lg_a))
    s = np.clongdouble(0.0)
    tmax = 0.0
    m = 0
    while True:
        term = coeff * lag
        s = s + term
        tmax = max(tmax, abs(term))
        if m > 4 and abs(term) < 1e-20 * (abs(s) + 1e-6 * tmax):
            break
        if m > max_terms:
            raise ConvergenceError("generating series did not converge")
        # advance the (unnormalized-weight) recurrence: values stay O(1) after
        # the 1/sqrt(Gamma) normalization carried by coeff
        ml = np.longdouble(m)
        al = np.longdouble(alpha)
        rl = np.longdouble(rho)
        lag_next = ((2 * ml + al + 1 - rl) * lag - np.sqrt(ml * (ml + al)) * lag_prev) / np.sqrt(
            (ml + 1) * (ml + 1 + al)
        )
        lag_prev, lag = lag, lag_next
        coeff = coeff * zz / np.clongdouble(np.sqrt((ml + 1) * (ml + 1 + al)))
        m += 1
    return complex(s)


def asymptotic_q(alpha: float, u: float, v: float, regime: Regime) -> SeriesValue:
    """Closed-form approximants of the scaled Q_alpha in the three validated
    regimes, with the magnitude of the first neglected order as the error."""
    if regime is Regime.FAR_BELOW_DIAG:
        if not (v - u >= 3.0 and u >= 5.0):
            raise RegimeError(f"FarBelowDiag needs v-u >= 3 and u >= 5, got u={u}, v={v}")
        small = (u / v) ** (1.0 - alpha) * math.exp(-((v - u) ** 2)) / (2.0 * math.sqrt(math.pi * u * v))
        value = 1.0 - small
        ratio = u / v
        predicted = small * (ratio / (1.0 - ratio) + (1.0 + 4.0 * alpha * alpha) / (8.0 * u * v))
    elif regime is Regime.NEAR_DIAG:
        if not (abs(v - u) <= 0.3 and min(u, v) >= 10.0):
            raise RegimeError(f"NearDiag needs |v-u| <= 0.3 and min >= 10, got u={u}, v={v}")
        value = 0.5 + (v - u) / math.sqrt(math.pi) - (alpha - 0.5) / (2.0 * math.sqrt(math.pi) * u)
        predicted = 2.0 * abs(v - u) ** 3 / (3.0 * math.sqrt(math.pi)) + (1.0 + alpha * alpha) / (u * u)
    elif regime is Regime.FAR_ABOVE_DIAG:
        if not (u - v >= 3.0 and v >= 5.0):
            raise RegimeError(f"FarAboveDiag needs u-v >= 3 and v >= 5, got u={u}, v={v}")
        value = (v / u) ** alpha * math.exp(-((v - u) ** 2)) / (2.0 * math.sqrt(math.pi * u * v))
        ratio = v / u
        predicted = value * (ratio / (1.0 - ratio) + (1.0 + 4.0 * alpha * alpha) / (8.0 * u * v))
    else:
        raise RegimeError(f"no asymptotic formula for regime {regime!r}")
    return SeriesValue(value, predicted, 0, EvalPath.ASYMPTOTIC)


def dump_term_table(idx: IndexSet, u: float, v: float, path: str, tol: float = 1e-14) -> None:
    """Debug dump of the kernel term table as CSV (n1, n2, scaled term)."""
    tab = kernel_table(idx, u, v, tol=tol)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("n1,n2,scaled_term\n")
        for a, b, t in zip(tab.n1, tab.n2, tab.terms.astype(float)):
            fh.write(f"{a:.17g},{b:.17g},{t:.17g}\n")
