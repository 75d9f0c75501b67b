"""Field configuration, flux decomposition and species bookkeeping.

The background is a uniform magnetic field plus an idealized flux line along
the z axis.  Natural units hbar = c = 1 are used everywhere: ``gamma = |qB|``
sets the magnetic scale, ``R_quant = sqrt(2/gamma)`` is the quantum length of
the transverse motion, and the flux enters only through the integer part
``l0`` and mantissa ``mu`` of ``(flux/flux_quantum) * sign(B)``.

For spinning states the mantissa is shifted by the spin-flux contact term;
``mu_sigma`` returns the effective value that sets the real Bessel orders of
every downstream kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Species(Enum):
    SPINLESS = "Spinless"
    NR2P1_SPIN_UP = "NR2p1SpinUp"
    NR2P1_SPIN_DOWN = "NR2p1SpinDown"
    NR3P1 = "NR3p1"
    REL3P1 = "Rel3p1"
    REL2P1_MASSIVE = "Rel2p1Massive"
    MASSLESS2P1 = "Massless2p1"


def decompose_flux(flux_ratio: float, sign_b: int) -> tuple[int, float, int]:
    """Split ``flux_ratio * sign_b`` into integer part l0 and mantissa mu.

    Returns ``(l0, mu, vartheta)`` with ``mu in [0, 1)`` and ``vartheta`` the
    sign of the flux itself (+1 for zero flux, which callers should treat as
    the pure-field reference case).
    """
    if not math.isfinite(flux_ratio):
        raise ValueError(f"flux_ratio must be finite, got {flux_ratio!r}")
    if sign_b not in (-1, 1):
        raise ValueError(f"sign_b must be +1 or -1, got {sign_b!r}")
    nu = flux_ratio * sign_b
    l0 = math.floor(nu)
    mu = nu - l0
    if mu >= 1.0:  # floating floor edge
        l0 += 1
        mu = 0.0
    vartheta = 1 if flux_ratio >= 0 else -1
    return l0, mu, vartheta


def mu_sigma(mu: float, vartheta: int, eps: int, sigma: int) -> float:
    """Effective spin-shifted mantissa.

    For sigma = 0 (spinless) this is mu itself; for sigma = +-1 the shift is
    -theta*eps*(1 - theta*sigma)/2, which vanishes when sigma = theta.  The
    derived kernel orders mu_sigma and 1 - mu_sigma then stay inside (-1, 2),
    touching -1 only on the mu = 0 boundary where the integer-order Bessel
    reflection applies.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu must lie in [0, 1), got {mu!r}")
    if sigma == 0:
        return mu
    if sigma not in (-1, 1):
        raise ValueError(f"sigma must be -1, 0 or +1, got {sigma!r}")
    return mu - 0.5 * vartheta * eps * (1 - vartheta * sigma)


@dataclass(frozen=True)
class FieldConfig:
    """Field strength, sign conventions and flux decomposition."""

    gamma: float
    eps: int
    vartheta: int
    l0: int
    mu: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma!r}")
        if self.eps not in (-1, 1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps!r}")
        if self.vartheta not in (-1, 1):
            raise ValueError(f"vartheta must be +1 or -1, got {self.vartheta!r}")
        if not isinstance(self.l0, int):
            raise ValueError(f"l0 must be an integer, got {self.l0!r}")
        if not 0.0 <= self.mu < 1.0:
            raise ValueError(f"mu must lie in [0, 1), got {self.mu!r}")

    @property
    def pure_field(self) -> bool:
        """True in the zero-flux reference regime (mu = 0 and l0 = 0)."""
        return self.mu == 0.0 and self.l0 == 0

    @property
    def flux_number(self) -> float:
        """l0 + mu, the flux in units of the flux quantum (times sign B)."""
        return self.l0 + self.mu

    @property
    def r_quant(self) -> float:
        """Quantum length scale sqrt(2/gamma) of the transverse motion."""
        return math.sqrt(2.0 / self.gamma)

    @classmethod
    def from_flux(cls, gamma: float, eps: int, flux_ratio: float, sign_b: int) -> "FieldConfig":
        l0, mu, vartheta = decompose_flux(flux_ratio, sign_b)
        return cls(gamma=gamma, eps=eps, vartheta=vartheta, l0=l0, mu=mu)

    def mu_sigma(self, sigma: int) -> float:
        return mu_sigma(self.mu, self.vartheta, self.eps, sigma)


@dataclass(frozen=True)
class ParticleSpec:
    """Species tag plus the quantum numbers that select its kernel sectors.

    sigma is only an independent input for Rel3p1 (the light-cone-conserved
    polarization); the nonrelativistic and 2+1 species derive their effective
    sigma from the energy branch, and the massless species sums both sectors.
    """

    species: Species
    mass: float = 1.0
    sigma: int = 0
    branch: int = 1
    s_pol: int = 1
    lam: float = 0.0
    p3: float = 0.0

    def __post_init__(self):
        if self.branch not in (-1, 1):
            raise ValueError(f"branch must be +1 or -1, got {self.branch!r}")
        if self.s_pol not in (-1, 1):
            raise ValueError(f"s_pol must be +1 or -1, got {self.s_pol!r}")
        if self.sigma not in (-1, 0, 1):
            raise ValueError(f"sigma must be -1, 0 or +1, got {self.sigma!r}")
        if self.species is Species.MASSLESS2P1:
            if self.mass != 0.0:
                raise ValueError("Massless2p1 requires mass = 0")
        else:
            if not (self.mass > 0 and math.isfinite(self.mass)):
                raise ValueError(f"{self.species.value} requires mass > 0, got {self.mass!r}")
        if self.species is Species.SPINLESS and self.sigma != 0:
            raise ValueError("Spinless forces sigma = 0")
        if self.species is Species.REL3P1:
            if self.lam == 0.0:
                raise ValueError("Rel3p1 requires lambda != 0")
            if self.lam * self.branch <= 0:
                raise ValueError("Rel3p1 requires sign(lambda) == branch")
            if self.sigma == 0:
                raise ValueError("Rel3p1 requires sigma = +-1")

    def sigma_eff(self) -> int:
        """Effective sigma entering the single-sector kernels.

        Raises for Massless2p1, which has no single sector (both enter).
        """
        sp = self.species
        if sp is Species.SPINLESS:
            return 0
        if sp in (Species.NR2P1_SPIN_UP, Species.REL2P1_MASSIVE):
            return self.branch
        if sp is Species.NR2P1_SPIN_DOWN:
            return -self.branch
        if sp is Species.NR3P1:
            return self.branch if self.s_pol == 1 else -self.branch
        if sp is Species.REL3P1:
            return self.sigma
        raise ValueError(f"{sp.value} has no single effective sigma")

    def sigma_sectors(self) -> tuple[int, ...]:
        """Sigma values whose kernels are aggregated for this species."""
        if self.species is Species.MASSLESS2P1:
            return (1, -1)
        return (self.sigma_eff(),)


def cyclotron_frequency(gamma: float, mass: float) -> float:
    """Nonrelativistic rotation rate gamma / M."""
    return gamma / mass


def synchrotron_frequency(gamma: float, p0: float) -> float:
    """Relativistic rotation rate gamma / p0."""
    return gamma / p0


def lightcone_frequency(gamma: float, mass: float, lam: float) -> float:
    """Rotation rate gamma / (lambda * M) of the light-cone parametrization.

    Signed: negative lambda (antiparticle branch) reverses the rotation.
    """
    if lam == 0.0:
        raise ValueError("lambda must be nonzero")
    return gamma / (lam * mass)
