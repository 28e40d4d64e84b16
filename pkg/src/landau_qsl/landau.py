"""Non-relativistic electron in a uniform field B z (symmetric gauge).

Radial eigenfunctions, the Schroedinger-Pauli spectrum and radial matrix
elements. The azimuthal phase exp(i m_l phi) is never built; integrating it
out is the selection rule m_l(a) == m_l(b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import constants as _codata

from .specfun import DEFAULT_QUADRATURE, QuadratureConfig, integrate_radial, laguerre


class InvalidStateError(ValueError):
    """Quantum numbers outside the allowed Landau-level set."""


@dataclass(frozen=True)
class PhysicalConstants:
    e: float = _codata.e
    m0: float = _codata.m_e
    hbar: float = _codata.hbar
    c: float = _codata.c

    def __post_init__(self):
        if min(self.e, self.m0, self.hbar, self.c) <= 0:
            raise ValueError("physical constants must be strictly positive")


SI = PhysicalConstants()
NATURAL = PhysicalConstants(e=1.0, m0=1.0, hbar=1.0, c=1.0)


@dataclass(frozen=True)
class FieldConfig:
    """Field strength B and the scales derived from it.

    beta = sqrt(eB / 2 hbar) is the inverse magnetic length used by the
    eigenfunctions, omega = eB / 2 m0 the level spacing frequency and
    curly_e = eB / m0 = 2 omega the oscillation frequency of <rho>_t.
    """

    B: float
    constants: PhysicalConstants = SI
    beta: float = field(init=False)
    omega: float = field(init=False)
    curly_e: float = field(init=False)

    def __post_init__(self):
        if not self.B > 0:
            raise ValueError("field strength B must be positive")
        k = self.constants
        object.__setattr__(self, "beta", math.sqrt(k.e * self.B / (2 * k.hbar)))
        object.__setattr__(self, "omega", k.e * self.B / (2 * k.m0))
        object.__setattr__(self, "curly_e", k.e * self.B / k.m0)

    @property
    def beta_hbar(self) -> float:
        """Natural transverse momentum scale hbar * beta."""
        return self.constants.hbar * self.beta

    @property
    def rest_energy(self) -> float:
        return self.constants.m0 * self.constants.c**2


@dataclass(frozen=True)
class LandauState:
    n: int
    m_l: int = 0
    m_s: float = 0.5
    p: float = 0.0
    j: int = 1

    def __post_init__(self):
        if self.n < 0 or abs(self.m_l) > self.n or (self.n - self.m_l) % 2:
            raise InvalidStateError(
                f"no Landau eigenstate with n={self.n}, m_l={self.m_l}: "
                "need |m_l| <= n and n - m_l even"
            )
        if self.m_s not in (-0.5, 0.5):
            raise InvalidStateError(f"spin projection must be +-1/2, got {self.m_s}")
        if self.j not in (-1, 1):
            raise InvalidStateError(f"energy sign must be +-1, got {self.j}")

    @property
    def radial_degree(self) -> int:
        return (self.n - abs(self.m_l)) // 2

    @property
    def level(self) -> int:
        """n + m_l + 2 m_s + 1, the combination fixing the energy."""
        return self.n + self.m_l + int(2 * self.m_s) + 1


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian axial packet; momentum spread sigma_p = hbar / (2 d)."""

    p0: float
    d: float
    hbar: float = SI.hbar

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError("packet width d must be positive")

    @property
    def sigma_p(self) -> float:
        return self.hbar / (2 * self.d)

    @classmethod
    def default_for(cls, field: FieldConfig, p0: float = 0.0) -> "PacketSpec":
        # d = 50 / beta, i.e. sigma_p = hbar beta / 100
        return cls(p0=p0, d=50.0 / field.beta, hbar=field.constants.hbar)


def _unit_radial(n: int, m_l: int, u):
    """Radial factor of F_{n,m_l} at beta = 1, as a function of u = beta * rho."""
    k = (n - abs(m_l)) // 2
    a = abs(m_l)
    log_norm = 0.5 * (math.lgamma(k + 1) - math.lgamma(k + a + 1) - math.log(math.pi))
    sign = -1.0 if k % 2 else 1.0
    u = np.asarray(u, dtype=float)
    x = u * u
    return sign * math.exp(log_norm) * u**a * laguerre(k, a, x) * np.exp(-0.5 * x)


def radial_wavefunction(state: LandauState, field: FieldConfig, rho):
    """Real radial factor of F_{n,m_l}(rho, phi), i.e. without exp(i m_l phi).

    Normalised so that 2 pi int |F|^2 rho drho = 1.
    """
    beta = field.beta
    return beta * _unit_radial(state.n, state.m_l, beta * np.asarray(rho, dtype=float))


def nonrel_energy(state: LandauState, field: FieldConfig) -> float:
    k = field.constants
    return state.p**2 / (2 * k.m0) + k.hbar * field.omega * state.level


def nonrel_energy_gap(a: LandauState, b: LandauState, field: FieldConfig) -> float:
    """E_b - E_a without subtracting two large totals."""
    k = field.constants
    return (b.p - a.p) * (b.p + a.p) / (2 * k.m0) + k.hbar * field.omega * (b.level - a.level)


@lru_cache(maxsize=4096)
def unit_moment(n_a: int, n_b: int, m_l: int, power: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """2 pi int f_a u^power f_b u du at beta = 1 (shared m_l).

    Every physical radial moment is this number times beta**(-power).
    """
    if n_a > n_b:
        n_a, n_b = n_b, n_a

    def integrand(u):
        return 2 * math.pi * _unit_radial(n_a, m_l, u) * _unit_radial(n_b, m_l, u) * u ** (power + 1)

    # eigenfunctions are O(1) at beta = 1, so an absolute floor avoids chasing
    # relative accuracy on integrals that vanish by orthogonality
    return integrate_radial(integrand, 1.0, n_b, cfg, abs_tolerance=1e-14)


def radial_moment(a: LandauState, b: LandauState, field: FieldConfig, power: int,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """<a| rho^power |b> over the transverse plane (spin and p_z not included)."""
    if a.m_l != b.m_l:
        return 0.0
    return unit_moment(a.n, b.n, a.m_l, power, cfg) / field.beta**power


def mean_rho_nonrel(field: FieldConfig, t: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """<rho>_t for (F_00 + F_20)/sqrt(2), spin up, p0 = 0."""
    s0, s2 = LandauState(0), LandauState(2)
    r00 = radial_moment(s0, s0, field, 1, cfg)
    r22 = radial_moment(s2, s2, field, 1, cfg)
    r02 = radial_moment(s0, s2, field, 1, cfg)
    return 0.5 * (r00 + r22 + 2 * r02 * math.cos(field.curly_e * t))


def momentum_density(packet: PacketSpec, p):
    """|alpha(p)|^2 for the axial packet: normal density N(p0, sigma_p^2)."""
    s = packet.sigma_p
    z = (np.asarray(p, dtype=float) - packet.p0) / s
    return np.exp(-0.5 * z * z) / (s * math.sqrt(2 * math.pi))
