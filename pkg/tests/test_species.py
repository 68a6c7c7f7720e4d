import math

import numpy as np
import pytest

from latticeqc import species as sp
from latticeqc.errors import DomainError

CS = sp.get_species("cs")


def test_cesium_entry():
    assert CS.gamma_over_recoil == 2.5e3
    assert CS.f_up == 4
    assert CS.f_down == 3
    assert CS.gamma_si == pytest.approx(2 * math.pi * 5.2e6)


@pytest.mark.parametrize("name", sorted(sp.SPECIES))
def test_registry_invariants(name):
    s = sp.get_species(name)
    assert s.gamma_over_recoil > 0
    assert s.f_up == s.f_down + 1
    assert s.nuclear_spin >= 0.5


def test_species_lookup_is_case_insensitive_and_rejects_unknown():
    assert sp.get_species("CS") == CS
    with pytest.raises(DomainError):
        sp.get_species("xe")


def test_hyperfine_factor_limits():
    assert CS.hyperfine_factor() == pytest.approx(2 / 3 - 1 / 12)
    big = CS.with_overrides(nuclear_spin=1e9 - 0.5)
    assert big.hyperfine_factor() == pytest.approx(2 / 3, rel=1e-9)


def test_overrides_keep_other_fields():
    s = CS.with_overrides(gamma_over_recoil=1000.0)
    assert s.gamma_over_recoil == 1000.0
    assert s.nuclear_spin == CS.nuclear_spin


def _trap(depth, detuning=9615.0):
    return sp.derive_trap(CS, sp.LatticeConfig(1.0, detuning, 0.0, depth))


def test_reference_trap_frequency_and_lamb_dicke():
    t = _trap(1e4)
    assert t.omega_osc == 200.0
    assert t.lamb_dicke == pytest.approx(1 / math.sqrt(200), rel=1e-15)
    assert t.lamb_dicke == pytest.approx(0.0707, abs=5e-5)


def test_quadrupled_depth_doubles_frequency():
    a, b = _trap(1e4), _trap(4e4)
    assert b.omega_osc == pytest.approx(2 * a.omega_osc, rel=1e-14)
    assert b.lamb_dicke == pytest.approx(a.lamb_dicke / math.sqrt(2), rel=1e-14)


def test_node_scatter_rate_in_si():
    # 50 GHz blue of the Cs line at a depth of 1e4 recoils
    t = _trap(1e4, 50e9 / 5.2e6)
    rate = sp.to_si(CS, rate=t.scatter_rate)
    assert 60 <= rate <= 75


def test_scatter_rate_scaling():
    base = _trap(1e4, 1e4).scatter_rate
    # depth^1 * eta^2 ~ depth^(1/2)
    assert _trap(4e4, 1e4).scatter_rate == pytest.approx(2 * base, rel=1e-12)
    assert _trap(1e4, 2e4).scatter_rate == pytest.approx(base / 2, rel=1e-12)


def test_depth_from_intensity():
    depth = sp.well_depth_from_intensity(CS, 1e5, 5e3)
    assert depth == pytest.approx(2.5e3 * 1e5 / 1.5e4)
    t = sp.derive_trap(CS, sp.LatticeConfig(1e5, 5e3))
    assert t.well_depth == depth


@pytest.mark.parametrize("kwargs", [dict(intensity_ratio=0, detuning_ratio=1),
                                    dict(intensity_ratio=1, detuning_ratio=0),
                                    dict(intensity_ratio=1, detuning_ratio=1, polarization_angle=math.pi)])
def test_lattice_config_validation(kwargs):
    with pytest.raises(DomainError):
        sp.LatticeConfig(**kwargs)


def test_red_detuning_and_bad_depth_rejected():
    with pytest.raises(DomainError):
        sp.derive_trap(CS, sp.LatticeConfig(1.0, -100.0, 0.0, 1e4))
    with pytest.raises(DomainError):
        sp.derive_trap(CS, sp.LatticeConfig(1.0, 100.0, 0.0, -1.0))


def test_to_si_conversions():
    assert sp.to_si(CS, rate=1.0) == CS.gamma_si
    assert sp.to_si(CS, energy=CS.gamma_over_recoil) == pytest.approx(CS.gamma_si)
    k = 2 * math.pi / 852.3e-9
    assert sp.to_si(CS, length=1.0) == pytest.approx(1 / k)
    with pytest.raises(TypeError):
        sp.to_si(CS, rate=1.0, length=1.0)


def test_linear_polarization_has_no_vector_shift():
    shift = sp.decompose_light_shift([1.0, 0.0, 0.0])
    assert shift.scalar_part == pytest.approx(2 / 3)
    np.testing.assert_array_equal(shift.fictitious_field, 0.0)


@pytest.mark.parametrize("q", [1, -1])
def test_circular_polarization_vector_shift(q):
    shift = sp.decompose_light_shift(sp.spherical_unit(q))
    assert shift.scalar_part == pytest.approx(2 / 3)
    np.testing.assert_allclose(shift.fictitious_field, [0, 0, q / 3], atol=1e-15)


def test_lin_theta_lin_vector_shift_tracks_angle():
    # the sigma+/sigma- imbalance at kz = pi/4 grows as sin(theta)
    bz = [sp.decompose_light_shift(sp.lin_theta_lin_polarization(math.pi / 4, th)).fictitious_field[2]
          for th in (0.0, math.pi / 4, math.pi / 2)]
    assert bz[0] == pytest.approx(0.0, abs=1e-15)
    assert abs(bz[1]) == pytest.approx(abs(bz[2]) * math.sin(math.pi / 4), rel=1e-12)
    assert abs(bz[2]) > 0


def test_zero_polarization_rejected():
    with pytest.raises(DomainError):
        sp.decompose_light_shift([0, 0, 0])


def test_transport_displacement():
    assert sp.transport_displacement(0.0) == 0.0
    theta = sp.rotation_for_separation(0.25)
    assert theta == pytest.approx(math.pi / 2)
    assert sp.transport_displacement(theta) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        sp.transport_displacement(4.0)


def test_adiabaticity_flag():
    assert sp.is_adiabatic(10.0, 1.0)
    assert not sp.is_adiabatic(1.0, 1.0)
    assert not sp.is_adiabatic(2 * math.pi, 1.0)
