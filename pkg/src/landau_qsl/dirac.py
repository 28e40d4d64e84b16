"""Dirac eigenstates for the spin-up, m_l = 0, even-n family.

Spinors are built from explicit component formulas over the Landau radial
functions; no Dirac matrices are formed. Each component is a short list of
(weight, n, m_l) terms so inner products reduce to cached radial integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .landau import FieldConfig, LandauState, unit_moment
from .specfun import DEFAULT_QUADRATURE, QuadratureConfig

Term = tuple[complex, int, int]


class UnsupportedFamilyError(ValueError):
    """Only even n with m_l = 0 and spin up have explicit spinors."""


@dataclass(frozen=True)
class AnalyticSpinor:
    components: tuple[tuple[Term, ...], tuple[Term, ...], tuple[Term, ...], tuple[Term, ...]]
    norm_constant: float
    energy: float
    p: float

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a Dirac spinor has exactly four components")
        for comp in self.components:
            for _, n, m_l in comp:
                LandauState(n, m_l)  # raises on parity violation


def rel_energy(state: LandauState, field: FieldConfig) -> float:
    k = field.constants
    rest = k.m0 * k.c**2
    e2 = rest**2 + (state.p * k.c) ** 2 + k.e * field.B * k.hbar * k.c**2 * state.level
    return state.j * math.sqrt(e2)


def rel_energy_gap(a: LandauState, b: LandauState, field: FieldConfig) -> float:
    """E_b - E_a; for equal signs uses (E_b^2 - E_a^2)/(E_b + E_a) to avoid cancellation."""
    ea, eb = rel_energy(a, field), rel_energy(b, field)
    if a.j != b.j:
        return eb - ea
    k = field.constants
    diff_sq = ((b.p - a.p) * (b.p + a.p) * k.c**2
               + k.e * field.B * k.hbar * k.c**2 * (b.level - a.level))
    return diff_sq / (eb + ea)


def _check_family(n: int) -> None:
    if n < 0 or n % 2:
        raise UnsupportedFamilyError(f"spinors are implemented for even n >= 0 only, got n={n}")


def positive_spinor(n: int, field: FieldConfig, p: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> AnalyticSpinor:
    _check_family(n)
    k = field.constants
    energy = rel_energy(LandauState(n, 0, 0.5, p, 1), field)
    denom = energy + k.m0 * k.c**2
    comps = (
        ((1.0 + 0j, n, 0),),
        (),
        ((k.c * p / denom + 0j, n, 0),),
        ((1j * math.sqrt(2 * (n + 2)) * k.c * k.hbar * field.beta / denom, n + 1, 1),),
    )
    return _normalized(comps, energy, p, cfg)


def negative_spinor(n: int, field: FieldConfig, p: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> AnalyticSpinor:
    _check_family(n)
    k = field.constants
    energy = rel_energy(LandauState(n, 0, 0.5, p, -1), field)
    denom = energy - k.m0 * k.c**2
    comps = (
        ((k.c * p / denom + 0j, n, 0),),
        ((1j * math.sqrt(2 * (n + 2)) * k.c * k.hbar * field.beta / denom, n + 1, 1),),
        ((1.0 + 0j, n, 0),),
        (),
    )
    return _normalized(comps, energy, p, cfg)


def _normalized(comps, energy: float, p: float, cfg: QuadratureConfig) -> AnalyticSpinor:
    raw = AnalyticSpinor(comps, 1.0, energy, p)
    norm2 = _inner(raw, raw, 0, cfg).real
    return AnalyticSpinor(comps, 1.0 / math.sqrt(norm2), energy, p)


def _inner(a: AnalyticSpinor, b: AnalyticSpinor, power: int, cfg: QuadratureConfig) -> complex:
    """Sum_k 2 pi int a_k^* u^power b_k u du at beta = 1, normalisation included."""
    total = 0j
    for ca, cb in zip(a.components, b.components):
        for wa, na, ma in ca:
            for wb, nb, mb in cb:
                if ma != mb or wa == 0 or wb == 0:
                    continue
                total += wa.conjugate() * wb * unit_moment(na, nb, ma, power, cfg)
    return a.norm_constant * b.norm_constant * total


def spinor_norm(s: AnalyticSpinor, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return _inner(s, s, 0, cfg).real


def spinor_overlap(a: AnalyticSpinor, b: AnalyticSpinor,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> complex:
    return _inner(a, b, 0, cfg)


def spinor_crossed_term(a: AnalyticSpinor, b: AnalyticSpinor, field: FieldConfig,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> complex:
    """<a| rho |b>, the component-wise inner product with weight rho."""
    return _inner(a, b, 1, cfg) / field.beta


def closed_form_norm_constant(n: int, field: FieldConfig, p: float, j: int) -> float:
    """N = [1 + (cp)^2/(E +- m0c^2)^2 + 2 c^2 hbar^2 beta^2 (n+2)/(E +- m0c^2)^2]^(-1/2)."""
    k = field.constants
    energy = rel_energy(LandauState(n, 0, 0.5, p, j), field)
    denom = energy + j * k.m0 * k.c**2
    extra = ((k.c * p) ** 2 + 2 * (k.c * k.hbar * field.beta) ** 2 * (n + 2)) / denom**2
    return 1.0 / math.sqrt(1.0 + extra)


def weight_magnitudes(s: AnalyticSpinor) -> dict[tuple[int, int], float]:
    """Root-sum-square of |N * weight| over components, keyed by radial function (n, m_l)."""
    acc: dict[tuple[int, int], float] = {}
    for comp in s.components:
        for w, n, m in comp:
            acc[(n, m)] = acc.get((n, m), 0.0) + abs(s.norm_constant * w) ** 2
    return {key: math.sqrt(v) for key, v in acc.items()}
