"""Geometry primitives: exponents, rings, and weight fields."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcap.errors import DomainError, InvalidFieldError, ValidationError
from ringcap.geometry import (ORIGIN, Annulus, ExponentP, PlanePoint, QField,
                              RingCondenser, as_exponent, qfield_eval,
                              validate_annulus)


class TestExponentP:
    def test_conjugates(self):
        ep = ExponentP(2.0)
        assert ep.q == 2.0 and ep.lam == 1.0
        ep = ExponentP(3.0)
        assert ep.q == pytest.approx(1.5) and ep.lam == pytest.approx(0.5)

    @pytest.mark.parametrize("bad", [1.0, 0.5, 0.0, -2.0, math.nan, math.inf])
    def test_rejects_bad_exponent(self, bad):
        with pytest.raises(DomainError):
            ExponentP(bad)

    @given(st.floats(min_value=1.0 + 1e-9, max_value=50.0))
    @settings(max_examples=50, deadline=None)
    def test_conjugate_identity(self, p):
        # 1/p + 1/q = 1 and q - 1 = 1/(p-1) = lam for every admissible p.
        ep = ExponentP(p)
        assert 1.0 / ep.p + 1.0 / ep.q == pytest.approx(1.0, rel=1e-12)
        assert ep.q - 1.0 == pytest.approx(ep.lam, rel=1e-9)

    def test_as_exponent_coerces(self):
        assert as_exponent(2.5).p == 2.5
        ep = ExponentP(3.0)
        assert as_exponent(ep) is ep


class TestAnnulus:
    def test_valid_ring(self):
        a = Annulus(ORIGIN, 0.5, 1.0)
        assert validate_annulus(a) is a
        assert a.ratio == pytest.approx(2.0)

    @pytest.mark.parametrize("r1,r2", [(1.0, 0.5), (0.5, 0.5), (0.0, 1.0),
                                       (-0.5, 1.0), (0.5, math.inf)])
    def test_rejects_bad_radii(self, r1, r2):
        with pytest.raises(ValidationError):
            Annulus(ORIGIN, r1, r2)

    def test_condenser_geometry(self):
        cond = RingCondenser(ORIGIN, 0.5, 1.0)
        assert cond.compact_area == pytest.approx(math.pi * 0.25)
        assert cond.gap_area == pytest.approx(math.pi * 0.75)
        assert cond.diameter == pytest.approx(1.0)
        assert cond.separating_perimeter_inf == pytest.approx(math.pi)
        assert cond.gap == Annulus(ORIGIN, 0.5, 1.0)
        with pytest.raises(ValidationError):
            RingCondenser(ORIGIN, 1.0, 0.5)


class TestQField:
    def test_constant_field(self):
        f = QField.constant(2.0)
        assert qfield_eval(f, PlanePoint(0.3, -0.4)) == 2.0
        with pytest.raises(InvalidFieldError):
            QField.constant(0.0)
        with pytest.raises(InvalidFieldError):
            QField.constant(-1.0)

    def test_radial_field(self):
        f = QField.radial(lambda r: 1.0 + r * r, domain_radius=2.0)
        assert f.eval(PlanePoint(0.6, 0.8)) == pytest.approx(2.0)

    def test_domain_enforced(self):
        f = QField.constant(1.0, domain_radius=1.0)
        with pytest.raises(DomainError):
            f.eval(PlanePoint(1.5, 0.0))
        # Points on the rim itself are accepted.
        assert f.eval(PlanePoint(1.0, 0.0)) == 1.0

    def test_nonpositive_evaluation_rejected(self):
        f = QField.analytic(lambda z: z.x)  # vanishes on the axis
        with pytest.raises(InvalidFieldError):
            f.eval(PlanePoint(0.0, 1.0))
        with pytest.raises(InvalidFieldError):
            f.eval(PlanePoint(-0.5, 0.0))

    def test_infinite_value_is_flagged_not_rejected(self):
        f = QField.radial(lambda r: math.inf if r < 0.1 else 1.0)
        assert f.eval(PlanePoint(0.05, 0.0)) == math.inf

    @given(st.floats(min_value=-0.7, max_value=0.7),
           st.floats(min_value=-0.7, max_value=0.7))
    @settings(max_examples=60, deadline=None)
    def test_positivity_property(self, x, y):
        # Strict positivity at every queried point, for each variant.
        z = PlanePoint(x, y)
        fields = [
            QField.constant(0.5),
            QField.radial(lambda r: 1.0 + r),
            QField.analytic(lambda w: math.exp(w.x - w.y)),
        ]
        for f in fields:
            assert f.eval(z) > 0.0


class TestPolarGrid:
    @staticmethod
    def _grid_from(fn, nr, nt, r_max=1.0):
        radii = np.linspace(0.05, r_max, nr)
        angles = np.linspace(0.0, 2.0 * math.pi, nt, endpoint=False)
        samples = [[fn(r, t) for t in angles] for r in radii]
        return QField.polar_grid(samples, ORIGIN, radii, angles)

    def test_reproduces_samples(self):
        fn = lambda r, t: 1.0 + r + 0.3 * math.sin(t)
        f = self._grid_from(fn, 12, 16)
        for r, t in [(0.05, 0.0), (0.5, 1.2), (1.0, 4.0)]:
            # probe exactly on a sample ring/ray pair when possible
            z = PlanePoint(r * math.cos(t), r * math.sin(t))
            assert f.eval(z) == pytest.approx(fn(r, t), rel=0.05)

    def test_outer_clamp(self):
        fn = lambda r, t: 2.0 + r
        f = self._grid_from(fn, 8, 8)
        inside = f.eval(PlanePoint(1.0, 0.0))
        # domain ends at the outer radius; beyond it is a domain error
        with pytest.raises(DomainError):
            f.eval(PlanePoint(1.5, 0.0))
        assert inside == pytest.approx(3.0, rel=1e-6)

    def test_angular_wraparound(self):
        fn = lambda r, t: 1.5 + 0.5 * math.cos(t)
        f = self._grid_from(fn, 8, 64)
        # just below 2*pi interpolates between the last and first columns
        t = 2.0 * math.pi - 1e-3
        z = PlanePoint(0.5 * math.cos(t), 0.5 * math.sin(t))
        assert f.eval(z) == pytest.approx(fn(0.5, t), rel=1e-3)

    def test_rejects_invalid_grids(self):
        radii = np.array([0.1, 0.5, 1.0])
        angles = np.array([0.0, 1.0, 2.0, 3.0])
        good = np.ones((3, 4))
        with pytest.raises(ValidationError):
            QField.polar_grid(np.ones((4, 3)), ORIGIN, radii, angles)
        bad = good.copy()
        bad[1, 2] = -1.0
        with pytest.raises(InvalidFieldError):
            QField.polar_grid(bad, ORIGIN, radii, angles)
        with pytest.raises(InvalidFieldError):
            bad2 = good.copy()
            bad2[0, 0] = math.nan
            QField.polar_grid(bad2, ORIGIN, radii, angles)

    def test_interpolation_error_shrinks_quadratically(self):
        # Bilinear interpolation of a smooth field converges ~ O(h^2):
        # doubling the grid should cut the max probe error by ~4 (allow 2.5x).
        fn = lambda r, t: 1.0 + r**2 + 0.5 * math.sin(t) * r
        rng = np.random.default_rng(7)
        probes = [(0.1 + 0.85 * u, 2.0 * math.pi * v)
                  for u, v in zip(rng.random(200), rng.random(200))]

        def max_err(nr, nt):
            f = self._grid_from(fn, nr, nt)
            worst = 0.0
            for r, t in probes:
                z = PlanePoint(r * math.cos(t), r * math.sin(t))
                worst = max(worst, abs(f.eval(z) - fn(r, t)))
            return worst

        coarse, fine = max_err(16, 16), max_err(32, 32)
        assert fine < coarse / 2.5
