import math

import pytest
from hypothesis import given, strategies as st

from msfcs.params import (
    FieldConfig,
    ParticleSpec,
    Species,
    decompose_flux,
    mu_sigma,
)


def test_decompose_flux_examples():
    assert decompose_flux(2.5, 1) == (2, 0.5, 1)
    l0, mu, theta = decompose_flux(-0.3, 1)
    assert l0 == -1 and theta == -1
    assert mu == pytest.approx(0.7, abs=1e-15)
    assert decompose_flux(3.0, 1) == (3, 0.0, 1)


def test_decompose_flux_zero_is_pure_field():
    l0, mu, theta = decompose_flux(0.0, 1)
    assert (l0, mu, theta) == (0, 0.0, 1)
    assert FieldConfig.from_flux(1.0, 1, 0.0, 1).pure_field


def test_decompose_flux_rejects_nonfinite():
    with pytest.raises(ValueError):
        decompose_flux(math.inf, 1)
    with pytest.raises(ValueError):
        decompose_flux(1.0, 2)


@given(
    nu=st.floats(-50, 50, allow_nan=False).filter(lambda x: abs(x - round(x)) > 1e-6),
    k=st.integers(-20, 20),
    sign_b=st.sampled_from([-1, 1]),
)
def test_decompose_flux_translation(nu, k, sign_b):
    # shifting the flux by an integer moves l0 and leaves the mantissa alone
    # (away from integer flux, where float rounding could cross the boundary)
    l0a, mua, _ = decompose_flux(nu, sign_b)
    l0b, mub, _ = decompose_flux(nu + k * sign_b, sign_b)
    assert l0b == l0a + k
    assert mub == pytest.approx(mua, abs=1e-9)


def test_mu_sigma_examples():
    assert mu_sigma(0.3, 1, 1, 1) == pytest.approx(0.3)
    assert mu_sigma(0.3, 1, 1, -1) == pytest.approx(-0.7)
    assert mu_sigma(0.3, -1, 1, 1) == pytest.approx(1.3)
    assert mu_sigma(0.4, 1, 1, 0) == 0.4


@given(
    mu=st.floats(1e-9, 1.0, exclude_max=True),
    theta=st.sampled_from([-1, 1]),
    eps=st.sampled_from([-1, 1]),
    sigma=st.sampled_from([-1, 1]),
)
def test_mu_sigma_order_bounds(mu, theta, eps, sigma):
    ms = mu_sigma(mu, theta, eps, sigma)
    assert -1.0 < ms < 2.0
    assert -1.0 < 1.0 - ms < 2.0


@given(mu=st.floats(0, 1, exclude_max=True), theta=st.sampled_from([-1, 1]), eps=st.sampled_from([-1, 1]))
def test_mu_sigma_spinless_is_identity(mu, theta, eps):
    assert mu_sigma(mu, theta, eps, 0) == mu


def test_field_config_validation():
    with pytest.raises(ValueError):
        FieldConfig(gamma=-1.0, eps=1, vartheta=1, l0=0, mu=0.0)
    with pytest.raises(ValueError):
        FieldConfig(gamma=1.0, eps=0, vartheta=1, l0=0, mu=0.0)
    with pytest.raises(ValueError):
        FieldConfig(gamma=1.0, eps=1, vartheta=1, l0=0, mu=1.0)
    f = FieldConfig(gamma=2.0, eps=1, vartheta=1, l0=3, mu=0.25)
    assert f.flux_number == 3.25
    assert f.r_quant == pytest.approx(1.0)
    assert not f.pure_field


def test_particle_spec_validation():
    with pytest.raises(ValueError):
        ParticleSpec(species=Species.SPINLESS, mass=1.0, sigma=1)
    with pytest.raises(ValueError):
        ParticleSpec(species=Species.MASSLESS2P1, mass=1.0)
    with pytest.raises(ValueError):
        ParticleSpec(species=Species.NR2P1_SPIN_UP, mass=0.0)
    with pytest.raises(ValueError):
        ParticleSpec(species=Species.REL3P1, mass=1.0, sigma=1, branch=1, lam=-2.0)
    with pytest.raises(ValueError):
        ParticleSpec(species=Species.REL3P1, mass=1.0, sigma=1, branch=1, lam=0.0)


def test_sigma_sectors():
    assert ParticleSpec(species=Species.SPINLESS, mass=1.0).sigma_sectors() == (0,)
    assert ParticleSpec(species=Species.NR2P1_SPIN_UP, mass=1.0, branch=-1).sigma_sectors() == (-1,)
    assert ParticleSpec(species=Species.NR2P1_SPIN_DOWN, mass=1.0, branch=1).sigma_sectors() == (-1,)
    assert ParticleSpec(species=Species.NR3P1, mass=1.0, s_pol=-1, branch=1).sigma_sectors() == (-1,)
    assert ParticleSpec(species=Species.MASSLESS2P1, mass=0.0).sigma_sectors() == (1, -1)
