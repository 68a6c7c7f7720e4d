import math

import numpy as np
import pytest

from latticeqc import kernel as kn
from latticeqc.errors import DomainError

from oracles import decay_kernel_by_angles, kernel_from_green

MAGIC = math.acos(1 / math.sqrt(3))


def sample(kr, theta, phi=0.0, **kw):
    return kn.kernel_at(kn.RelativeCoordinate.from_polar(kr, theta, phi), **kw)


@pytest.mark.parametrize("vec", [(0.3, -0.4, 1.1), (2.0, 0.5, -0.7), (0.0, 0.0, 5.0), (7.0, 3.0, 1.0)])
def test_matches_green_function_oracle(vec):
    s = kn.kernel_at(kn.RelativeCoordinate(np.array(vec)))
    t = kernel_from_green(vec)
    np.testing.assert_allclose(s.f, t.real, atol=1e-7 * max(1, np.abs(t).max()))
    np.testing.assert_allclose(s.g, t.imag, atol=1e-7)


@pytest.mark.parametrize("vec", [(0.3, -0.4, 1.1), (0.0, 2.0, 0.5), (1e-3, 0.0, 2e-3)])
def test_decay_part_matches_emission_integral(vec):
    s = kn.kernel_at(kn.RelativeCoordinate(np.array(vec)))
    np.testing.assert_allclose(s.g, decay_kernel_by_angles(vec), atol=1e-12)


def test_dicke_limit():
    s = sample(1e-3, 0.7, 0.3)
    np.testing.assert_allclose(s.g, np.eye(3), atol=1e-5)
    np.testing.assert_allclose(s.g_spherical(), np.eye(3), atol=1e-5)


def test_near_field_head_to_tail():
    # repo convention: f_00 (kr)^3 -> +3 P2(cos theta)
    s = sample(1e-3, 0.0)
    assert s.f_qq(0, 0).real * 1e-9 == pytest.approx(3.0, abs=3e-4)
    assert s.g_qq(0, 0).real == pytest.approx(1.0, abs=1e-5)


def test_near_field_magic_angle():
    s = sample(1e-3, MAGIC)
    assert s.f_qq(0, 0).real * 1e-9 == pytest.approx(0.0, abs=1e-4)


def test_full_kernel_close_to_near_field_at_gate_scale():
    kr = 2.5 * 0.05
    s = sample(kr, 0.0)
    assert s.f_qq(0, 0).real == pytest.approx(3 / kr**3, rel=0.02)


def test_near_field_option_keeps_only_static_term():
    s = sample(0.4, 0.9, near_field=True)
    c = math.cos(0.9)
    assert s.f[2, 2] == pytest.approx(3 * (1.5 * c * c - 0.5) / 0.4**3, rel=1e-13)
    np.testing.assert_array_equal(s.g, np.eye(3))


def test_zero_separation_is_a_domain_error():
    with pytest.raises(DomainError):
        kn.kernel_at(kn.RelativeCoordinate(np.zeros(3)))
    with pytest.raises(DomainError):
        kn.component_on_grid(np.zeros((2, 3)), 0)


def test_symmetric_and_bounded():
    rng = np.random.default_rng(1)
    for _ in range(200):
        kr = 10 ** rng.uniform(-3, math.log10(50))
        s = sample(kr, rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        np.testing.assert_allclose(s.f, s.f.T, atol=1e-12 * np.abs(s.f).max())
        np.testing.assert_allclose(s.g, s.g.T, atol=1e-14)
        assert np.abs(s.g_spherical()).max() <= 1 + 1e-12


def test_on_axis_parity():
    s = sample(0.8, 0.0)
    for q in (-1, 0, 1):
        for qp in (-1, 0, 1):
            if abs(q - qp) % 2 == 1:
                assert abs(s.f_qq(q, qp)) < 1e-13
                assert abs(s.g_qq(q, qp)) < 1e-13


def test_far_field_decay():
    kr = 1e3
    s = sample(kr, 1.1, 0.2)
    bound = 1.5 * 1.5 / kr
    assert np.abs(s.f_spherical()).max() <= bound
    assert np.abs(s.g_spherical()).max() <= bound


def test_spherical_basis_round_trip():
    rng = np.random.default_rng(2)
    t = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    back = kn.cartesian_from_spherical(kn.spherical_from_cartesian(t))
    np.testing.assert_allclose(back, t, atol=1e-14)
    np.testing.assert_allclose(kn.spherical_from_cartesian(np.eye(3)), np.eye(3), atol=1e-15)


def test_quasistatic_tensor_in_spherical_basis():
    x = 0.5
    t = np.diag([-1.0, -1.0, 2.0]) / x**3
    sph = kn.spherical_from_cartesian(t)
    assert sph[1, 1] == pytest.approx(2 / x**3)
    assert sph[0, 0] == pytest.approx(-1 / x**3)
    assert sph[2, 2] == pytest.approx(-1 / x**3)


def test_grid_components_match_pointwise():
    rng = np.random.default_rng(3)
    vecs = rng.normal(size=(50, 3))
    for q in (-1, 0, 1):
        f, g = kn.component_on_grid(vecs, q)
        for v, fv, gv in zip(vecs, f, g):
            s = kn.kernel_at(kn.RelativeCoordinate(v))
            assert fv == pytest.approx(s.f_qq(q, q).real, rel=1e-12, abs=1e-12)
            assert gv == pytest.approx(s.g_qq(q, q).real, rel=1e-12, abs=1e-12)


def test_series_branch_is_continuous():
    xs = np.array([1e-2 * (1 - 1e-9), 1e-2 * (1 + 1e-9)])
    a, b = kn.radial_coefficients(xs)
    assert a[0].imag == pytest.approx(a[1].imag, abs=1e-9)
    assert b[0].imag == pytest.approx(b[1].imag, abs=1e-9)
