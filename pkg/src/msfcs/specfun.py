"""Real-order special functions: log-gamma, Bessel J and I, Laguerre functions.

Everything is implemented in-repo (no external special-function library) and
evaluated through 80-bit long doubles where cancellation or term growth would
otherwise eat into the double-precision budget.  Orders live on alpha > -1,
with the integer boundary alpha = -1 admitted for the modified Bessel function
through the reflection I_{-1} = I_1 (the zero-flux reference path needs it).

The test suite validates every function against independent high-precision
oracles (direct series summed with mpmath).
"""

from __future__ import annotations

import math

import numpy as np

_LD = np.longdouble
_LN_SQRT_2PI = _LD("0.91893853320467274178032973640561763986")

# B_{2k} / (2k (2k-1)) for the asymptotic log-gamma series, k = 1..10.
_STIRLING = (
    _LD(1) / 12,
    _LD(-1) / 360,
    _LD(1) / 1260,
    _LD(-1) / 1680,
    _LD(1) / 1188,
    _LD(-691) / 360360,
    _LD(1) / 156,
    _LD(-3617) / 122400,
    _LD(43867) / 244188,
    _LD(-174611) / 125400,
)

_SHIFT = 12.0  # recurrence threshold for the asymptotic series


def _ln_gamma_arr(x, dtype=_LD) -> np.ndarray:
    """Vectorized ln Gamma on x >= 0 (x = 0 maps to +inf).

    Asymptotic series after recurrence shifts to x >= 12; in long double the
    result is good to ~1e-19 relative, in float64 to a few ulp.
    """
    x = np.atleast_1d(np.asarray(x, dtype=dtype)).copy()
    zero = x == 0
    x[zero] = 1.0  # placeholder; fixed up at the end
    shift = np.zeros_like(x)
    for _ in range(int(_SHIFT) + 2):
        small = x < _SHIFT
        if not small.any():
            break
        shift[small] += np.log(x[small])
        x[small] += 1
    w = 1.0 / (x * x)
    ser = np.full_like(x, _STIRLING[-1])
    for c in _STIRLING[-2::-1]:
        ser = ser * w + dtype(c)
    out = (x - 0.5) * np.log(x) - x + dtype(_LN_SQRT_2PI) + ser / x - shift
    out[zero] = np.inf
    return out


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"ln_gamma requires x > 0, got {x!r}")
    return float(_ln_gamma_arr(x)[0])


def _lgamma_ld(x: float) -> _LD:
    return _ln_gamma_arr(x)[0]


def _check_order(alpha: float, allow_minus_one: bool) -> None:
    lo_ok = alpha >= -1.0 if allow_minus_one else alpha > -1.0
    if not (lo_ok and math.isfinite(alpha)):
        raise ValueError(f"order must satisfy alpha > -1, got {alpha!r}")


def bessel_i_scaled(alpha: float, x: float) -> float:
    """exp(-x) * I_alpha(x) for x >= 0, alpha >= -1 (alpha = -1 reflects to +1)."""
    _check_order(alpha, allow_minus_one=True)
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"bessel_i requires x >= 0, got {x!r}")
    if alpha == -1.0:
        alpha = 1.0
    if x == 0.0:
        if alpha == 0.0:
            return 1.0
        return 0.0 if alpha > 0 else math.inf
    if x <= 40.0 or 8.0 * alpha * alpha > x:
        # ascending series; all terms positive, no cancellation.  Also used at
        # large x when the order is big enough to invalidate the fixed-order
        # asymptotic expansion (validity needs alpha^2 << x).
        xl = _LD(x)
        q = xl * xl / 4
        lead = _LD(alpha) * np.log(xl / 2) - _lgamma_ld(alpha + 1.0) - xl
        # start at the log-scaled leading term to dodge premature overflow
        t = np.exp(lead)
        s = t
        k = 0
        kmax = int(x) + 40 * int(math.sqrt(x) + 1) + 600
        while True:
            k += 1
            t *= q / (k * (k + alpha))
            s += t
            if (t < s * _LD(1e-21) and k > x / 2) or k > kmax:
                break
        return float(s)
    # large argument: asymptotic expansion of the exponentially scaled function
    xl = _LD(x)
    term = _LD(1.0)
    s = term
    k = 0
    prev = np.inf
    while True:
        num = 4.0 * alpha * alpha - (2 * k + 1) ** 2
        term = -term * _LD(num) / (8 * (k + 1) * xl)
        if abs(term) >= prev:  # asymptotic tail started growing
            break
        s += term
        prev = abs(term)
        k += 1
        if prev < 1e-21 or k > 200:
            break
    return float(s / np.sqrt(2 * np.pi * xl))


def bessel_i(alpha: float, x: float) -> float:
    """Modified Bessel function I_alpha(x), x >= 0, alpha >= -1."""
    scaled = bessel_i_scaled(alpha, x)
    return scaled * math.exp(x)  # OverflowError past x ~ 709: use the scaled form


def _bessel_j_series(alpha: float, x: float) -> float:
    xl = _LD(x)
    q = xl * xl / 4
    t = np.exp(_LD(alpha) * np.log(xl / 2) - _lgamma_ld(alpha + 1.0))
    s = t
    tmax = abs(t)
    k = 0
    while True:
        k += 1
        t *= -q / (k * (k + alpha))
        s += t
        tmax = max(tmax, abs(t))
        if abs(t) < _LD(1e-25) * (abs(s) + _LD(1e-6) * tmax) or k > 400:
            break
    return float(s)


def _bessel_j_miller(alpha: float, x: float) -> float:
    """Backward-recurrence evaluation, stable for x above the series range.

    Normalization: sum_k c_k J_{alpha+2k}(x) = (x/2)^alpha with
    c_0 = Gamma(alpha+1), c_k = (alpha+2k) Gamma(alpha+k) / k!.
    """
    n_top = int(math.ceil(x + 15.0 * math.sqrt(x) + 30.0))
    fp = _LD(0.0)  # f at order alpha + n + 1
    fc = _LD(1e-300)  # f at order alpha + n
    norm = _LD(0.0)
    f_alpha = _LD(0.0)
    xl = _LD(x)
    # ln Gamma(alpha+k) for k >= 1 (k = 0 is handled through Gamma(alpha+1))
    lg_cache = _ln_gamma_arr(np.arange(1, n_top // 2 + 2, dtype=float) + alpha)
    for n in range(n_top, -1, -1):
        if n % 2 == 0:
            k = n // 2
            if k == 0:
                ck = np.exp(_lgamma_ld(alpha + 1.0))
            else:
                ck = _LD(alpha + 2 * k) * np.exp(lg_cache[k - 1] - _lgamma_ld(k + 1.0))
            norm += ck * fc
        if n == 0:
            f_alpha = fc
            break
        nu = _LD(alpha + n)
        fm = (2 * nu / xl) * fc - fp
        fp, fc = fc, fm
        if abs(fc) > _LD(1e290):
            fc *= _LD(1e-290)
            fp *= _LD(1e-290)
            norm *= _LD(1e-290)
            f_alpha *= _LD(1e-290)
    target = np.exp(_LD(alpha) * np.log(xl / 2))
    return float(f_alpha * target / norm)


def bessel_j(alpha: float, x: float) -> float:
    """Bessel function of the first kind J_alpha(x), x >= 0, alpha > -1."""
    _check_order(alpha, allow_minus_one=False)
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"bessel_j requires x >= 0, got {x!r}")
    if x == 0.0:
        if alpha == 0.0:
            return 1.0
        return 0.0 if alpha > 0 else math.inf
    if x < 6.0:
        return _bessel_j_series(alpha, x)
    return _bessel_j_miller(alpha, x)


def laguerre_fn(m: int, alpha: float, rho):
    """Orthonormal Laguerre function of degree m and order alpha at rho >= 0.

    This is sqrt(Gamma(m+1)/Gamma(m+alpha+1)) * exp(-rho/2) * rho^(alpha/2)
    * L_m^alpha(rho), evaluated through the normalized three-term recurrence
        f_{m+1} = [(2m+alpha+1-rho) f_m - sqrt(m(m+alpha)) f_{m-1}]
                  / sqrt((m+1)(m+1+alpha)),
    whose iterates stay O(1) for all admissible arguments.  ``rho`` may be a
    scalar or an array.
    """
    if m < 0 or not isinstance(m, (int, np.integer)):
        raise ValueError(f"degree must be a nonnegative integer, got {m!r}")
    _check_order(alpha, allow_minus_one=False)
    scalar = np.ndim(rho) == 0
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(rho_arr < 0) or not np.all(np.isfinite(rho_arr)):
        raise ValueError(f"rho must be >= 0, got {rho!r}")
    at_zero = rho_arr == 0.0
    if np.any(at_zero) and alpha < 0:
        raise ValueError("rho = 0 is singular for alpha < 0")
    al = _LD(alpha)
    rl = rho_arr.astype(_LD)
    rl[at_zero] = 1.0  # placeholder; overwritten below
    f_prev = np.zeros_like(rl)
    f = np.exp(-rl / 2 + al / 2 * np.log(rl) - _lgamma_ld(alpha + 1.0) / 2)
    for k in range(m):
        kl = _LD(k)
        f_next = ((2 * kl + al + 1 - rl) * f - np.sqrt(kl * (kl + al)) * f_prev) / np.sqrt(
            (kl + 1) * (kl + 1 + al)
        )
        f_prev, f = f, f_next
    out = f.astype(float)
    out[at_zero] = 1.0 if alpha == 0.0 else 0.0
    return float(out[0]) if scalar else out
