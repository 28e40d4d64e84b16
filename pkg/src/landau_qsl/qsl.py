"""Minimum orthogonalisation times for equal two-level superpositions.

For |psi> = (|E1> + |E2>)/sqrt(2) the Mandelstam-Tamm and Margolus-Levitin
bounds coincide: Delta H = <H> - E_min = |E2 - E1|/2, so
T_min = pi hbar / |E2 - E1|.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .dirac import rel_energy, rel_energy_gap
from .landau import FieldConfig, LandauState, PacketSpec, nonrel_energy, nonrel_energy_gap


class DegenerateEnergyError(ArithmeticError):
    """The two components share an energy, so the state never becomes orthogonal."""


class Kind(str, enum.Enum):
    NONRELATIVISTIC = "nonrelativistic"
    PARTICLE_PARTICLE = "particle_particle"
    ANTIPARTICLE_PARTICLE = "antiparticle_particle"


@dataclass(frozen=True)
class SuperpositionSpec:
    """Equal superposition of the spin-up, m_l = 0 states n and n + 2.

    For the antiparticle-particle kind the lower state n carries negative
    energy and the partner n + 2 positive energy.
    """

    kind: Kind
    n: int
    packet: PacketSpec
    field: FieldConfig

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.n < 0 or self.n % 2:
            raise ValueError(f"n must be even and non-negative, got {self.n}")

    def states(self, p: float | None = None) -> tuple[LandauState, LandauState]:
        p = self.packet.p0 if p is None else p
        j_low = -1 if self.kind is Kind.ANTIPARTICLE_PARTICLE else 1
        return LandauState(self.n, 0, 0.5, p, j_low), LandauState(self.n + 2, 0, 0.5, p, 1)

    @property
    def relativistic(self) -> bool:
        return self.kind is not Kind.NONRELATIVISTIC


@dataclass(frozen=True)
class QSLResult:
    delta_h: float
    t_min: float
    energies: tuple[float, float]


def energy_gap(spec: SuperpositionSpec, p: float | None = None) -> float:
    a, b = spec.states(p)
    if spec.relativistic:
        return rel_energy_gap(a, b, spec.field)
    return nonrel_energy_gap(a, b, spec.field)


def qsl_time(spec: SuperpositionSpec) -> QSLResult:
    """T_min at the sharp momentum p = p0."""
    a, b = spec.states()
    energy = rel_energy if spec.relativistic else nonrel_energy
    gap = abs(energy_gap(spec))
    if gap == 0:
        raise DegenerateEnergyError(f"degenerate energies for {spec.kind.value}, n={spec.n}")
    hbar = spec.field.constants.hbar
    return QSLResult(delta_h=gap / 2, t_min=math.pi * hbar / gap,
                     energies=(energy(a, spec.field), energy(b, spec.field)))


def qsl_time_strong_field(n: int, field: FieldConfig) -> float:
    """B -> infinity limit of the particle-particle T_min for the pair (n, n+2)."""
    # sqrt(n+4) - sqrt(n+2) written without cancellation
    root_gap = 2.0 / (math.sqrt(n + 4) + math.sqrt(n + 2))
    return math.pi / (root_gap * math.sqrt(2) * field.constants.c * field.beta)


def weak_field_correspondence(field: FieldConfig) -> float:
    """Relativistic over non-relativistic T_min for n = 0, p0 = 0."""
    packet = PacketSpec.default_for(field)
    rel = qsl_time(SuperpositionSpec(Kind.PARTICLE_PARTICLE, 0, packet, field))
    nonrel = qsl_time(SuperpositionSpec(Kind.NONRELATIVISTIC, 0, packet, field))
    return rel.t_min / nonrel.t_min
