import json
import math

import numpy as np
import pytest

from rydpol.sop import (
    OpticalConfig,
    OPTICS_PRESETS,
    RfSop,
    frame_for_axis,
    rotated_circular_optics,
    sop_from_phi,
    sop_from_json,
    sop_to_json,
    spherical_components,
    standard_optics,
    stokes_from_phi,
    tilted_linear_optics,
)


class TestRfSop:
    def test_unit_norm_enforced(self):
        with pytest.raises(ValueError):
            RfSop(1.0, 1.0)

    def test_from_amplitudes_normalizes(self):
        s = RfSop.from_amplitudes(3.0, 4.0j)
        assert abs(s.amp_plus) == pytest.approx(0.6)
        assert abs(s.amp_minus) == pytest.approx(0.8)

    def test_zero_norm_rejected(self):
        with pytest.raises(ValueError):
            RfSop.from_amplitudes(0.0, 0.0)

    def test_meridian_amplitudes(self):
        s = sop_from_phi(math.pi / 2)
        assert s.amp_plus == pytest.approx(1.0)
        assert s.amp_minus == pytest.approx(0.0, abs=1e-15)

    def test_phi_wraps(self):
        s = sop_from_phi(2 * math.pi + 0.5)
        assert s.phi == pytest.approx(0.5)

    def test_non_finite_phi(self):
        with pytest.raises(ValueError):
            sop_from_phi(float("nan"))


class TestStokes:
    def test_cardinal_points(self):
        for phi, expect in [
            (0.0, (-1, 0, 0)),
            (math.pi / 2, (0, 0, 1)),
            (math.pi, (1, 0, 0)),
            (3 * math.pi / 2, (0, 0, -1)),
        ]:
            s = sop_from_phi(phi).stokes()
            assert (s.s1, s.s2, s.s3) == pytest.approx(expect, abs=1e-12)

    def test_jones_and_formula_agree(self):
        for phi in np.linspace(0, 2 * math.pi, 37):
            a = sop_from_phi(phi).stokes()
            b = stokes_from_phi(phi)
            assert (a.s1, a.s2, a.s3) == pytest.approx((b.s1, b.s2, b.s3), abs=1e-12)

    def test_fully_polarized(self):
        for phi in (0.3, 1.7, 4.4):
            assert sop_from_phi(phi).stokes().degree_of_polarization() == pytest.approx(
                1.0
            )

    def test_phi_zero_is_along_x(self):
        ex, ey = sop_from_phi(0.0).jones_xy()
        assert abs(ex) == pytest.approx(1.0)
        assert abs(ey) == pytest.approx(0.0, abs=1e-15)


class TestJson:
    def test_phi_round_trip(self):
        s = sop_from_phi(1.25)
        s2 = sop_from_json(sop_to_json(s))
        assert s2.phi == pytest.approx(1.25)

    def test_amplitude_round_trip(self):
        s = RfSop.from_amplitudes(1.0, 1.0j)
        doc = json.loads(sop_to_json(s))
        assert "amp_plus" in doc
        s2 = sop_from_json(sop_to_json(s))
        assert s2.amp_minus == pytest.approx(s.amp_minus)
        assert s2.phi is None


class TestFrames:
    def test_orthonormal_right_handed(self):
        for axis in [(0, 0, 1), (0, 1, -1), (1, 2, 3), (-1, 0, 0)]:
            f = frame_for_axis(axis)
            assert np.allclose(f @ f.T, np.eye(3), atol=1e-12)
            assert np.allclose(np.cross(f[0], f[1]), f[2], atol=1e-12)

    def test_zero_axis_rejected(self):
        with pytest.raises(ValueError):
            frame_for_axis((0, 0, 0))

    def test_spherical_components_unit(self):
        c = spherical_components((1, 0, 0), (0, 0, 1))
        assert sum(abs(v) ** 2 for v in c) == pytest.approx(1.0)

    def test_linear_x_has_no_pi_component(self):
        c_minus, c_zero, c_plus = spherical_components((1, 0, 0), (0, 0, 1))
        assert c_zero == pytest.approx(0.0, abs=1e-15)
        assert abs(c_plus) == pytest.approx(abs(c_minus))


class TestOpticalConfig:
    def test_standard_valid(self):
        cfg = standard_optics()
        assert cfg.name == "standard"

    def test_counter_propagation_enforced(self):
        with pytest.raises(ValueError):
            OpticalConfig((0, 1, 0), (0, 1, 0), (1, 0, 0), (1, 0, 0))

    def test_transversality_enforced(self):
        with pytest.raises(ValueError):
            OpticalConfig((0, 1, 0), (0, -1, 0), (0, 1, 0), (1, 0, 0))

    def test_rotated_circular_is_transverse(self):
        cfg = rotated_circular_optics()
        k = np.array(cfg.propagation_probe, dtype=float)
        p = np.array(cfg.pol_probe, dtype=complex)
        assert abs(np.vdot(k.astype(complex), p)) < 1e-12

    def test_tilted_linear_has_pi_component(self):
        cfg = tilted_linear_optics()
        _, c_zero, _ = cfg.coupling_components()
        assert abs(c_zero) > 0.5

    def test_presets_constructible(self):
        for name, factory in OPTICS_PRESETS.items():
            assert factory().name in (name, "rotated_circular", "tilted_linear")
