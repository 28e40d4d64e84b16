import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import integrate

from landau_qsl.landau import SI, FieldConfig, LandauState, PacketSpec, radial_moment, radial_wavefunction
from landau_qsl.observables import (
    SpeedResult,
    antiparticle_optimal_momentum,
    antiparticle_speed_sharp,
    displacement_nonrel,
    displacement_pair_nonrel,
    displacement_rel,
    displacement_strong_field_closed_form,
    speed_nonrel,
    speed_rel,
    speed_strong_field,
    strong_field_moments,
)
from landau_qsl.qsl import Kind, SuperpositionSpec, qsl_time
from landau_qsl.specfun import PrecisionExhaustedError

N0_STRONG_MOMENT = math.sqrt(math.pi) / 4 * (1 + 3 / (2 * math.sqrt(2)))


def spec(kind, B, n=0, p0_over=0.0, d_over=50.0):
    f = FieldConfig(B)
    return SuperpositionSpec(kind, n, PacketSpec(p0_over * f.beta_hbar, d_over / f.beta), f)


def exact_moments(n):
    """Both halves of the double Laguerre sum in exact rationals times sqrt(pi)."""
    k = n // 2

    def half_gamma(m):  # Gamma(m + 1/2) / sqrt(pi)
        return Fraction(math.factorial(2 * m), 4**m * math.factorial(m))

    orb = spin = Fraction(0)
    for i in range(k + 1):
        for j in range(k + 2):
            t = Fraction((-1) ** (i + j) * math.comb(k, i) * math.comb(k + 1, j),
                         math.factorial(i) * math.factorial(j)) * half_gamma(i + j + 1)
            orb += t
            spin += t * Fraction(2 * (i + j) + 3, 2 * (i + 1) * (j + 1))
    with mpmath.workdps(40):
        root_pi = mpmath.sqrt(mpmath.pi)
        return (abs(float(root_pi * mpmath.mpf(orb.numerator) / orb.denominator)),
                abs(float(root_pi * mpmath.sqrt((k + 1) * (k + 2)) * mpmath.mpf(spin.numerator) / spin.denominator)))


def test_displacement_nonrel_values():
    f = FieldConfig(1.0)
    assert displacement_nonrel(f) == pytest.approx(3.216e-8, rel=1e-3)
    assert displacement_nonrel(f) == pytest.approx(
        2 * radial_moment(LandauState(0), LandauState(2), f, 1), rel=1e-10)
    assert displacement_nonrel(FieldConfig(4.0)) == pytest.approx(displacement_nonrel(f) / 2, rel=1e-15)


def test_speed_nonrel():
    assert speed_nonrel(FieldConfig(2.77e10)).v_bar_over_c == pytest.approx(1.0, abs=0.005)
    assert speed_nonrel(FieldConfig(1e-6)).v_bar_over_c < 1e-8
    assert speed_nonrel(FieldConfig(1e12)).v_bar_over_c == pytest.approx(math.sqrt(1e12 / 2.774e10), rel=1e-3)
    r = speed_nonrel(FieldConfig(3.0))
    assert r.v_bar_over_c == r.displacement / (r.t_min * SI.c)
    assert r.displacement / r.t_min == pytest.approx(math.sqrt(SI.e * 3.0 * SI.hbar / (2 * math.pi)) / SI.m0, rel=1e-14)


def test_superluminal_threshold_formula():
    b_crit = 2 * math.pi * SI.m0**2 * SI.c**2 / (SI.e * SI.hbar)
    assert speed_nonrel(FieldConfig(b_crit)).v_bar_over_c == pytest.approx(1.0, rel=1e-14)
    assert speed_nonrel(FieldConfig(0.99 * b_crit)).v_bar_over_c < 1 < speed_nonrel(FieldConfig(1.01 * b_crit)).v_bar_over_c


def test_speed_result_invariant():
    r = SpeedResult.build(2.0, 3.0, 4.0)
    assert r.v_bar_over_c == 3.0 / (2.0 * 4.0)


def test_rel_displacement_strong_field_n0():
    s = spec(Kind.PARTICLE_PARTICLE, 1e15)
    assert displacement_rel(s) == pytest.approx(N0_STRONG_MOMENT / s.field.beta, rel=5e-3)


def test_antiparticle_displacement_vanishes_at_rest():
    for B in (1e10, 1e15):
        assert displacement_rel(spec(Kind.ANTIPARTICLE_PARTICLE, B)) == 0.0


def test_weak_field_limit_of_relativistic_displacement():
    f = FieldConfig(1.0)
    assert displacement_rel(spec(Kind.PARTICLE_PARTICLE, 1.0)) == pytest.approx(displacement_nonrel(f), rel=1e-4)


def test_nonrelativistic_kind_through_packet_path():
    s = spec(Kind.NONRELATIVISTIC, 7.0, n=0, p0_over=0.5)
    assert displacement_rel(s) == pytest.approx(displacement_nonrel(s.field), rel=1e-10)


def test_sharp_and_packet_limits_agree_for_narrow_packets():
    s = spec(Kind.PARTICLE_PARTICLE, 1e11)
    sharp = displacement_rel(s, packet_average=False)
    assert displacement_rel(s) == pytest.approx(sharp, rel=1e-3)
    broad = spec(Kind.PARTICLE_PARTICLE, 1e11, d_over=1.0)
    assert displacement_rel(broad) < sharp


@pytest.mark.parametrize("a,b", [
    (LandauState(0, 0, 0.5), LandauState(2, 0, -0.5)),
    (LandauState(0, 0, 0.5), LandauState(1, 1, 0.5)),
    (LandauState(2, 2, -0.5), LandauState(4, 0, -0.5)),
    (LandauState(3, -1, 0.5), LandauState(5, 1, -0.5)),
])
def test_selection_rule_zero_displacement(a, b):
    assert displacement_pair_nonrel(a, b, FieldConfig(1.0)) == 0.0


def test_pair_displacement_matches_closed_form():
    f = FieldConfig(2.0)
    assert displacement_pair_nonrel(LandauState(0), LandauState(2), f) == pytest.approx(displacement_nonrel(f), rel=1e-10)


def test_closed_form_n0_matches_gaussian_moments():
    assert sum(strong_field_moments(0)) == pytest.approx(N0_STRONG_MOMENT, rel=1e-14)
    f = FieldConfig(1e15)
    assert displacement_strong_field_closed_form(0, f) == pytest.approx(N0_STRONG_MOMENT / f.beta, rel=1e-14)


@pytest.mark.parametrize("n", [0, 2, 4, 10, 24, 40])
def test_closed_form_against_exact_rationals(n):
    got = strong_field_moments(n)
    ref = exact_moments(n)
    assert got[0] == pytest.approx(ref[0], rel=1e-13)
    assert got[1] == pytest.approx(ref[1], rel=1e-13)


@pytest.mark.parametrize("n", [0, 2, 4])
def test_closed_form_against_brute_force_quadrature(n):
    f = FieldConfig(1.0, SI)
    b = f.beta

    def integrand(r):
        lo = radial_wavefunction(LandauState(n, 0), f, r) * radial_wavefunction(LandauState(n + 2, 0), f, r)
        hi = radial_wavefunction(LandauState(n + 1, 1), f, r) * radial_wavefunction(LandauState(n + 3, 1), f, r)
        return 2 * math.pi * r * r * (lo + hi)

    brute, _ = integrate.quad(integrand, 0, 20 / b, epsabs=0, epsrel=1e-13, limit=200)
    assert displacement_strong_field_closed_form(n, f) == pytest.approx(abs(brute), rel=1e-8)


def test_closed_form_n132_certified():
    m_orb, m_spin = strong_field_moments(132)
    assert math.isfinite(m_orb) and m_orb > 0 and m_spin > 0


def test_precision_exhaustion_is_an_error():
    with pytest.raises(PrecisionExhaustedError):
        strong_field_moments.__wrapped__(132, max_prec=64)


def test_closed_form_scales_as_inverse_beta():
    assert displacement_strong_field_closed_form(6, FieldConfig(1e14)) == pytest.approx(
        2 * displacement_strong_field_closed_form(6, FieldConfig(4e14)), rel=1e-14)


def test_speed_strong_field_n0():
    assert speed_strong_field(0) == pytest.approx((1 + math.sqrt(2)) / (4 * math.sqrt(2 * math.pi)), rel=1e-13)
    assert speed_strong_field(0) == pytest.approx(0.2407, abs=1e-4)


def test_speed_strong_field_n132():
    # exact value 0.26968054...; the acceptance tolerance is +-2e-4 around 0.2698
    assert speed_strong_field(132) == pytest.approx(0.2698, abs=2e-4)


def test_speed_rel_strong_field_n0():
    r = speed_rel(spec(Kind.PARTICLE_PARTICLE, 1e15))
    assert r.v_bar_over_c == pytest.approx(0.2407, abs=1e-3)
    assert r.v_bar_over_c == r.displacement / (r.t_min * SI.c)


@pytest.mark.parametrize("B", [1e10, 1e12, 1e15])
def test_antiparticle_slower_than_particle(B):
    for n in (0, 2, 6):
        for p_over in (0.0, 0.5, 1.0, 3.0, 8.0):
            ap = speed_rel(spec(Kind.ANTIPARTICLE_PARTICLE, B, n, p_over)).v_bar_over_c
            pp = speed_rel(spec(Kind.PARTICLE_PARTICLE, B, n, p_over)).v_bar_over_c
            assert ap < pp


def test_antiparticle_sharp_matches_spinor_quadrature():
    f = FieldConfig(1e13)
    for n, p_over in ((0, 1.0), (4, 2.0), (10, 3.0)):
        s = spec(Kind.ANTIPARTICLE_PARTICLE, 1e13, n, p_over)
        sharp = antiparticle_speed_sharp(n, f, p_over * f.beta_hbar)
        assert sharp.displacement == pytest.approx(displacement_rel(s, packet_average=False), rel=1e-9)
        assert sharp.t_min == qsl_time(s).t_min


def test_antiparticle_optimal_momentum_massless_limit():
    f = FieldConfig(1e18)
    for n in (0, 10, 60):
        p = antiparticle_optimal_momentum(n, f)
        assert p / f.beta_hbar == pytest.approx(((2 * n + 4) * (2 * n + 8)) ** 0.25, rel=1e-3)
        best = antiparticle_speed_sharp(n, f, p).v_bar_over_c
        for factor in (0.8, 1.25):
            assert antiparticle_speed_sharp(n, f, factor * p).v_bar_over_c < best
