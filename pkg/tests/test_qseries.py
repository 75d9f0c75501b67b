import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msfcs import qseries as qs

from .oracles import mp, q_minus_ladder

# frozen from the raw lattice double sum in mpmath (tests/oracles.py)
QMINUS_03_07_11 = 2.4244350679470542105
QFULL_05_2_5_SCALED = 0.99998895475150070728
J0_2SQRT2 = -0.19654809527046820004


def test_series_value_invariants():
    with pytest.raises(ValueError):
        qs.SeriesValue(1.0, -1e-3, 1, qs.EvalPath.DIRECT_SERIES)
    with pytest.raises(ValueError):
        qs.SeriesValue(1.0, math.inf, 1, qs.EvalPath.DIRECT_SERIES)
    a = qs.SeriesValue(1.0, 1e-12, 3, qs.EvalPath.DIRECT_SERIES)
    b = qs.SeriesValue(1.0 + 5e-13, 1e-13, 4, qs.EvalPath.INTEGRAL_REP)
    assert qs.paths_agree(a, b)
    c = qs.SeriesValue(1.1, 1e-13, 4, qs.EvalPath.INTEGRAL_REP)
    assert not qs.paths_agree(a, c)


def test_index_set_matches_angular_enumeration():
    # spinning pairs generated branch-by-branch agree with the defining map
    # n1 = m, n2 = m - ltil + (1 - eps sigma)/2 - mu (type 0) and its mirror
    # for type 1, with ltil bounded by -(1 + theta eps)/2 resp. (1 - theta eps)/2
    for j in (0, 1):
        for sigma in (-1, 1):
            for eps in (-1, 1):
                for theta in (-1, 1):
                    idx = qs.IndexSet(j=j, sigma=sigma, eps=eps, vartheta=theta, mu=0.3)
                    for l in range(4):
                        for m in range(3):
                            n1, n2 = idx.pair(l, m)
                            ltil = idx.ltilde(l)
                            if j == 0:
                                assert ltil <= -(1 + theta * eps) / 2
                            else:
                                assert ltil >= (1 - theta * eps) / 2
                            shift = (1 - eps * sigma) / 2
                            if j == 0:
                                assert n1 == m
                                assert n2 == pytest.approx(m - ltil + shift - 0.3)
                            else:
                                assert n2 == m
                                assert n1 == pytest.approx(m + ltil - shift + 0.3)
                            assert n1 > -1 and n2 > -1


def test_index_set_spinless_offsets():
    # the spinless lattice carries the bare mantissa: offsets 1 - mu + l
    for j in (0, 1):
        idx = qs.IndexSet(j=j, sigma=0, eps=1, vartheta=1, mu=0.3)
        for l in range(3):
            n1, n2 = idx.pair(l, 2)
            off = n2 - n1 if j == 0 else n1 - n2
            assert off == pytest.approx(idx.alpha + l)
        assert idx.alpha == pytest.approx(1 - 0.3 if j == 0 else 0.3)


def test_q_minus_zero_argument():
    sv = qs.q_minus(0.4, 1.0, 0.0)
    assert complex(sv.value) == 0.0
    assert sv.abs_err == pytest.approx(0.0, abs=1e-300)


def test_q_minus_cross_paths():
    ds = qs.q_minus_scaled(0.5, 1.0, 2.0)
    ir = qs.q_minus_scaled(0.5, 1.0, 2.0, path=qs.EvalPath.INTEGRAL_REP)
    assert qs.paths_agree(ds, ir)


def test_q_minus_lattice_oracle():
    got = qs.q_minus(0.3, 0.7, 1.1)
    assert complex(got.value).real == pytest.approx(QMINUS_03_07_11, rel=1e-12)


def test_q_full_reference_identity():
    # scaled type sum collapses to 1 when the effective mantissa vanishes
    s = complex(qs.q_full_scaled(1.0, 3.0, 4.0).value).real + complex(
        qs.q_full_scaled(0.0, 4.0, 3.0).value
    ).real
    assert s == pytest.approx(1.0, abs=1e-10)


def test_q_full_small_argument_limit():
    got = complex(qs.q_full(0.7, 0.005, 0.02).value).real
    limit = 0.02 ** (2 * 0.7) / math.exp(float(mp.loggamma(1.7)))
    assert got == pytest.approx(limit, rel=1e-3)


def test_q_full_lattice_oracle():
    got = complex(qs.q_full_scaled(0.5, 2.0, 5.0).value).real
    assert got == pytest.approx(QFULL_05_2_5_SCALED, rel=1e-10)


def test_q_negative_order_against_ladder_oracle():
    for alpha in (-0.7, -0.3):
        ref = float(q_minus_ladder(alpha, 1.5, 2.5) * mp.e ** (-1.5**2 - 2.5**2))
        got = complex(qs.q_minus_scaled(alpha, 1.5, 2.5).value).real
        assert got == pytest.approx(ref, rel=1e-12)


def test_q_order_domain():
    with pytest.raises(ValueError):
        qs.q_minus(-1.2, 1.0, 2.0)


def test_q_complex_arguments_match_lattice():
    u = cmath.rect(1.3, 0.7)
    v = cmath.rect(2.1, -0.4)
    got = complex(qs.q_full_scaled(0.6, u, v).value)
    ref = complex(
        sum(
            u ** (2 * m) * v ** (2 * (m + 0.6 + l)) / (math.gamma(m + 1) * math.gamma(m + 0.6 + l + 1))
            for l in range(0, 60)
            for m in range(60)
        )
    ) * math.exp(-abs(u) ** 2 - abs(v) ** 2)
    assert got == pytest.approx(ref, rel=1e-11)


def test_t_integral_vanishes_at_large_lower_limit():
    sv = qs.t_integral(0.5, 2.0, 30.0)
    assert abs(complex(sv.value)) < 1e-12


def test_t_integral_near_diagonal_expansion():
    alpha, u = 0.4, 40.0
    got = complex(qs.t_integral(alpha, u, u).value).real
    approx = 0.5 + (alpha + 0.5) / (2.0 * math.sqrt(math.pi) * u)
    assert got == pytest.approx(approx, abs=3e-3)


def test_t_integral_complements_series():
    alpha, u, v = 0.3, 2.0, 3.0
    t = complex(qs.t_integral(alpha, u, v).value).real
    qm = complex(qs.q_minus_scaled(alpha, u, v).value).real
    assert 1.0 - t == pytest.approx(qm, abs=1e-11)


def test_weighted_sum_reproduces_kernel():
    idx = qs.IndexSet(j=0, sigma=1, eps=1, vartheta=1, mu=0.3)
    ws = qs.weighted_sum(idx, 2.0, 5.0, lambda n1, n2: np.ones_like(n1))
    qf = qs.q_full_scaled(idx.alpha, 2.0, 5.0)
    assert qs.paths_agree(ws, qf)


def test_weighted_sum_log_derivative_identity():
    # the occupation weight over type 0 reproduces u^2 Delta of the kernel
    idx = qs.IndexSet(j=0, sigma=1, eps=1, vartheta=1, mu=0.3)
    u, v = 2.0, 5.0
    num = qs.weighted_sum(idx, u, v, lambda n1, n2: n1, envelope=(1.0, 1.0))
    den = qs.weighted_sum(idx, u, v, lambda n1, n2: np.ones_like(n1))
    got = complex(num.value).real / complex(den.value).real
    assert got == pytest.approx(u * u * qs.delta_ratio(idx.alpha, u, v), rel=1e-9)


def test_weighted_sum_envelope_contract():
    idx = qs.IndexSet(j=1, sigma=0, eps=1, vartheta=1, mu=0.4)
    # bounded alternating weight is accepted
    sv = qs.weighted_sum(idx, 1.0, 2.0, lambda n1, n2: np.cos(math.pi * n2))
    assert math.isfinite(complex(sv.value).real)
    # a weight violating its declared envelope is rejected
    with pytest.raises(ValueError):
        qs.weighted_sum(idx, 1.0, 2.0, lambda n1, n2: np.exp(n1), envelope=(1.0, 0.0))


def test_delta_ratio_quantum_limit():
    got = qs.delta_ratio(0.4, 0.01, 0.01)
    assert got == pytest.approx(0.01**2 / 1.4, rel=1e-2)


def test_delta_far_regime_bound():
    for (u, v) in ((10.0, 15.0), (12.0, 20.0)):
        assert 1.0 - qs.delta_ratio(0.5, u, v) <= 2.0 * math.exp(-((v - u) ** 2))


def test_delta_dual_path():
    alpha, u, v = 0.4, 3.0, 3.2
    d1 = qs.delta_ratio(alpha, u, v)
    d2 = 1.0 - qs.varpi(alpha, u, v)
    assert d1 == pytest.approx(d2, abs=1e-9)


def test_y_alpha_zero_cases():
    assert qs.y_alpha(0.7, 1.0, 0.0, 2.0) == 0.0
    # z1 = 0 collapses to the first series term
    got = qs.y_alpha(0.5, 0.0, 2.0, 1.0)
    ref = qs.y_alpha_series(0.5, 0.0, 2.0, 1.0)
    assert got == pytest.approx(ref, rel=1e-12)


def test_y_alpha_unit_parameters():
    assert qs.y_alpha(0.0, 1.0, 1.0, 2.0).real == pytest.approx(J0_2SQRT2, rel=1e-12)


def test_y_alpha_series_agreement():
    got_c = qs.y_alpha(0.6, 0.8, 1.3, 2.0)
    got_s = qs.y_alpha_series(0.6, 0.8, 1.3, 2.0)
    assert abs(got_c - got_s) <= 1e-10 * max(1.0, abs(got_c))


def test_y_alpha_domain():
    with pytest.raises(ValueError):
        qs.y_alpha(0.5, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        qs.y_alpha(-1.5, 1.0, 1.0, 1.0)


def test_asymptotic_far_below():
    ex = complex(qs.q_full_scaled(0.4, 10.0, 16.0).value).real
    asym = qs.asymptotic_q(0.4, 10.0, 16.0, qs.Regime.FAR_BELOW_DIAG)
    assert abs(ex - complex(asym.value).real) <= 1e-6


def test_asymptotic_near_diag():
    ex = complex(qs.q_full_scaled(0.4, 40.0, 40.0).value).real
    asym = qs.asymptotic_q(0.4, 40.0, 40.0, qs.Regime.NEAR_DIAG)
    assert abs(ex - complex(asym.value).real) <= 3e-3
    # the constant term dominates as u grows at alpha = 1/2
    lead = qs.asymptotic_q(0.5, 300.0, 300.0, qs.Regime.NEAR_DIAG)
    assert complex(lead.value).real == pytest.approx(0.5, abs=1e-12)


def test_asymptotic_far_above_and_regime_errors():
    ex = complex(qs.q_full_scaled(0.4, 16.0, 10.0).value).real
    asym = qs.asymptotic_q(0.4, 16.0, 10.0, qs.Regime.FAR_ABOVE_DIAG)
    assert abs(ex - complex(asym.value).real) <= 3.0 * asym.abs_err
    with pytest.raises(qs.RegimeError):
        qs.asymptotic_q(0.4, 10.0, 11.0, qs.Regime.FAR_BELOW_DIAG)
    with pytest.raises(qs.RegimeError):
        qs.asymptotic_q(0.4, 5.0, 5.0, qs.Regime.NEAR_DIAG)
    with pytest.raises(qs.RegimeError):
        qs.asymptotic_q(0.4, 10.0, 10.0, qs.Regime.QUANTUM)


GRID_ALPHAS = (-0.7, -0.3, 0.3, 0.5, 1.3, 1.7)
GRID_UV = (0.5, 1.0, 2.0, 4.0, 8.0)


def test_positivity_and_bounded_scaled_norm():
    for alpha in GRID_ALPHAS:
        for u in GRID_UV:
            for v in GRID_UV:
                q = complex(qs.q_full_scaled(alpha, u, v).value).real
                d = qs.delta_ratio(alpha, u, v)
                w = qs.varpi(alpha, u, v)
                assert q > 0.0
                # strict 0 < Delta < 1; at double precision the upper side is
                # witnessed through varpi = 1 - Delta staying positive
                assert 0.0 < d <= 1.0 and 0.0 < w < 1.0
                bound = 1.0 + (v / u) ** alpha * math.exp(-((u - v) ** 2))
                assert q <= bound * (1.0 + 1e-12)


def test_monotone_tail_bound_with_term_cap():
    vals = []
    for cap in (12, 25, 50, 100, 400):
        vals.append(qs.q_minus_scaled(0.3, 2.0, 2.5, tol=1e-30, max_terms=cap).abs_err)
    assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.floats(-0.9, 1.9),
    u=st.floats(0.1, 6.0),
    v=st.floats(0.1, 6.0),
)
def test_paths_agree_property(alpha, u, v):
    ds = qs.q_minus_scaled(alpha, u, v)
    ir = qs.q_minus_scaled(alpha, u, v, path=qs.EvalPath.INTEGRAL_REP)
    assert qs.paths_agree(ds, ir)
