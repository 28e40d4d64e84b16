import cmath
import math

import numpy as np
import pytest

from landau_qsl.landau import SI, FieldConfig, LandauState, PacketSpec, nonrel_energy
from landau_qsl.qsl import (
    DegenerateEnergyError,
    Kind,
    SuperpositionSpec,
    qsl_time,
    qsl_time_strong_field,
    weak_field_correspondence,
)

M2C4 = (SI.m0 * SI.c**2) ** 2


def spec(kind, B, n=0, p0=0.0):
    f = FieldConfig(B)
    return SuperpositionSpec(kind, n, PacketSpec.default_for(f, p0), f)


@pytest.mark.parametrize("B", [1e-2, 1.0, 3e9, 1e14])
@pytest.mark.parametrize("n", [0, 2, 10, 40])
def test_nonrel_tmin_independent_of_n(B, n):
    t = qsl_time(spec(Kind.NONRELATIVISTIC, B, n)).t_min
    assert t == pytest.approx(math.pi * SI.m0 / (SI.e * B), rel=1e-15)


def test_particle_particle_tmin_formula():
    B = 2e9
    eb = SI.e * B * SI.hbar * SI.c**2
    expected = math.pi * SI.hbar / (math.sqrt(M2C4 + 4 * eb) - math.sqrt(M2C4 + 2 * eb))
    assert qsl_time(spec(Kind.PARTICLE_PARTICLE, B)).t_min == pytest.approx(expected, rel=1e-12)


def test_antiparticle_tmin_formula_and_shorter():
    for B in np.logspace(-2, 15, 18):
        eb = SI.e * B * SI.hbar * SI.c**2
        expected = math.pi * SI.hbar / (math.sqrt(M2C4 + 4 * eb) + math.sqrt(M2C4 + 2 * eb))
        ap = qsl_time(spec(Kind.ANTIPARTICLE_PARTICLE, B)).t_min
        pp = qsl_time(spec(Kind.PARTICLE_PARTICLE, B)).t_min
        nr = qsl_time(spec(Kind.NONRELATIVISTIC, B)).t_min
        assert ap == pytest.approx(expected, rel=1e-14)
        # relativistic particle-particle time is dilated, antiparticle-particle contracted
        assert ap < pp and nr < pp


def test_result_invariants():
    for kind in Kind:
        r = qsl_time(spec(kind, 1e11, n=4, p0=1e-22))
        e1, e2 = r.energies
        assert r.delta_h == pytest.approx(abs(e2 - e1) / 2, rel=1e-9)
        assert r.t_min == pytest.approx(math.pi * SI.hbar / (2 * r.delta_h), rel=1e-15)
        # <H> - E_min equals Delta H for the equal superposition
        assert (e1 + e2) / 2 - min(e1, e2) == pytest.approx(r.delta_h, rel=1e-9)
        # orthogonality at T_min
        overlap = abs(1 + cmath.exp(-1j * 2 * r.delta_h * r.t_min / SI.hbar)) / 2
        assert overlap < 1e-15


def test_degenerate_pair_detected(monkeypatch):
    import landau_qsl.qsl as q

    monkeypatch.setattr(q, "nonrel_energy_gap", lambda a, b, f: 0.0)
    with pytest.raises(DegenerateEnergyError):
        qsl_time(spec(Kind.NONRELATIVISTIC, 1.0))


def test_strong_field_tmin_n0():
    f = FieldConfig(1e15)
    expected = math.pi / (2 * SI.c * f.beta * (math.sqrt(2) - 1))
    assert qsl_time_strong_field(0, f) == pytest.approx(expected, rel=1e-14)


def test_strong_field_limit_of_particle_particle():
    assert qsl_time(spec(Kind.PARTICLE_PARTICLE, 1e15)).t_min / qsl_time_strong_field(0, FieldConfig(1e15)) \
        == pytest.approx(1.0, abs=1e-3)
    for n in (2, 20, 100):
        f = FieldConfig(1e15)
        assert qsl_time(spec(Kind.PARTICLE_PARTICLE, 1e15, n)).t_min / qsl_time_strong_field(n, f) \
            == pytest.approx(1.0, abs=1e-3)


def test_strong_field_large_n_asymptotics():
    f = FieldConfig(1e15)
    vals = [qsl_time_strong_field(n, f) / math.sqrt(n) * math.sqrt(2) * SI.c * f.beta for n in (10**4, 10**6, 10**8)]
    errs = [abs(v - math.pi) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-7


def test_weak_field_correspondence():
    assert weak_field_correspondence(FieldConfig(1.0)) == pytest.approx(1.0, abs=1e-6)
    assert weak_field_correspondence(FieldConfig(5e9)) > 1.2
    ratios = [weak_field_correspondence(FieldConfig(B)) for B in np.logspace(0, 14, 57)]
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))


def test_spec_rejects_odd_n():
    f = FieldConfig(1.0)
    with pytest.raises(ValueError):
        SuperpositionSpec(Kind.PARTICLE_PARTICLE, 1, PacketSpec.default_for(f), f)


def test_antiparticle_state_assignment():
    s = spec(Kind.ANTIPARTICLE_PARTICLE, 1.0, 4)
    low, up = s.states()
    assert (low.n, low.j, up.n, up.j) == (4, -1, 6, 1)
    assert nonrel_energy(LandauState(0), FieldConfig(1.0)) > 0
