import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msfcs import specfun as sf

from .oracles import besseli_scaled, besselj_series, laguerre_norm, mp

# frozen from the high-precision defining-series oracle (tests/oracles.py)
J_03_20 = 0.42569406198141372823
I_HALF_1 = 0.93767488824548764672  # sqrt(2/pi) sinh 1
I_MHALF_1 = 1.2312002145929674465  # sqrt(2/pi) cosh 1
LAG_2_07_15 = -0.23750057254099455202  # explicit quadratic a(α)+b(α)ρ+c(α)ρ²


def test_ln_gamma_examples():
    assert sf.ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert sf.ln_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert sf.ln_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-14)


def test_ln_gamma_accuracy_band():
    for x in np.geomspace(0.1, 1e6, 160):
        ref = float(mp.loggamma(float(x)))
        got = sf.ln_gamma(float(x))
        assert got == pytest.approx(ref, rel=1e-13, abs=1e-15)


def test_ln_gamma_domain():
    for bad in (0.0, -1.5, math.nan):
        with pytest.raises(ValueError):
            sf.ln_gamma(bad)


def test_bessel_j_examples():
    assert sf.bessel_j(0.0, 0.0) == 1.0
    # half order: J_{1/2}(x) = sqrt(2/(pi x)) sin x vanishes at pi
    assert sf.bessel_j(0.5, math.pi) == pytest.approx(0.0, abs=1e-13)
    assert sf.bessel_j(0.3, 2.0) == pytest.approx(J_03_20, abs=1e-13)


def test_bessel_j_against_series_oracle():
    for a in (-0.9, -0.5, 0.0, 0.3, 1.7):
        for x in (0.05, 1.0, 5.9, 6.1, 12.0, 27.0, 50.0):
            ref = float(besselj_series(a, x))
            assert abs(sf.bessel_j(a, x) - ref) < 1e-12


def test_bessel_j_domain():
    with pytest.raises(ValueError):
        sf.bessel_j(-1.2, 1.0)
    with pytest.raises(ValueError):
        sf.bessel_j(0.5, -1.0)


def test_bessel_i_examples():
    assert sf.bessel_i(0.0, 0.0) == 1.0
    assert sf.bessel_i(0.5, 1.0) == pytest.approx(I_HALF_1, rel=1e-13)
    assert sf.bessel_i(-0.5, 1.0) == pytest.approx(I_MHALF_1, rel=1e-13)


def test_bessel_i_accuracy_band():
    for a in (-0.99, -0.5, 0.0, 0.7, 1.9):
        for x in (0.01, 1.0, 39.0, 41.0, 120.0, 200.0):
            ref = float(mp.besseli(a, x))
            assert sf.bessel_i(a, x) == pytest.approx(ref, rel=1e-12)


def test_bessel_i_scaled_large_arguments_and_orders():
    for a in (0.0, 1.5, 40.0, 300.0):
        for x in (50.0, 800.0, 4000.0):
            ref = float(besseli_scaled(a, x))
            assert sf.bessel_i_scaled(a, x) == pytest.approx(ref, rel=5e-13)


def test_bessel_i_reflection_at_minus_one():
    for x in (0.3, 1.0, 7.5, 60.0):
        assert sf.bessel_i(-1.0, x) == pytest.approx(sf.bessel_i(1.0, x), rel=1e-13)


def test_laguerre_examples():
    assert sf.laguerre_fn(0, 0.0, 3.0) == pytest.approx(math.exp(-1.5), rel=1e-14)
    for m in (0, 1, 5, 17):
        assert sf.laguerre_fn(m, 0.0, 0.0) == 1.0
    assert sf.laguerre_fn(2, 0.7, 1.5) == pytest.approx(LAG_2_07_15, rel=1e-13)


def test_laguerre_against_recurrence_oracle():
    for m in (0, 1, 3, 12, 50):
        for a in (-0.7, 0.25, 1.5):
            for rho in (1e-4, 0.8, 12.0, 100.0):
                ref = float(laguerre_norm(m, a, rho))
                assert sf.laguerre_fn(m, a, rho) == pytest.approx(ref, abs=1e-13)


def test_laguerre_zero_and_domain():
    assert sf.laguerre_fn(3, 1.2, 0.0) == 0.0
    with pytest.raises(ValueError):
        sf.laguerre_fn(2, -0.4, 0.0)
    with pytest.raises(ValueError):
        sf.laguerre_fn(-1, 0.5, 1.0)
    with pytest.raises(ValueError):
        sf.laguerre_fn(2, 0.5, -1.0)


def test_laguerre_vectorized_matches_scalar():
    rhos = np.array([0.0, 0.3, 2.0, 40.0])
    vals = sf.laguerre_fn(4, 0.6, rhos)
    for r, v in zip(rhos, vals):
        assert v == sf.laguerre_fn(4, 0.6, float(r))


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(0, 50),
    a=st.floats(0.01, 2.0),
    rho=st.floats(1e-6, 100.0),
)
def test_laguerre_bounded_envelope(m, a, rho):
    # orthonormal-family values stay inside a unit-scale envelope
    assert abs(sf.laguerre_fn(m, a, rho)) <= 1.1
