import math

import numpy as np
import pytest

from planarpoly import geometry, orthopoly
from planarpoly.exceptions import ParameterRangeError, StrongRegimeError
from planarpoly.geometry import Region
from planarpoly.model import ModelParams, phi_prime, re_phi, saddle_and_ell


@pytest.fixture(scope='module')
def inner():
    return geometry.trace_gamma(ModelParams(n=8, N=16, gamma=1.0, x=0.3), 1.0)


class TestTraceGamma:
    def test_lies_on_the_level_set(self, inner):
        assert inner.residual <= 1e-10
        assert np.max(inner.residuals()) <= 1e-10

    def test_crosses_real_axis_twice(self, inner):
        assert geometry.real_crossings(inner) == 2

    def test_is_a_jordan_curve(self, inner):
        assert geometry.is_simple(inner)

    def test_passes_through_r(self, inner):
        assert inner.points[0] == pytest.approx(1.0, abs=1e-12)

    def test_encloses_the_unit_interval(self, inner):
        assert geometry.winding_number(inner, 0.5) == 1
        assert geometry.winding_number(inner, 1e-3 + 1e-3j) == 1
        assert geometry.winding_number(inner, 3.0) == 0

    def test_conjugate_symmetric(self, inner):
        half = inner.node_count // 2
        assert np.allclose(inner.points[1:half], np.conj(inner.points[:half:-1]), atol=1e-12)

    def test_rows(self, inner):
        rows = inner.to_rows()
        assert len(rows) == inner.node_count
        assert max(row[2] for row in rows) <= 1e-10

    def test_outer_component(self, inner):
        outer = geometry.trace_gamma(inner.params, 1.0, component='outer')
        assert outer.residual <= 1e-10
        assert geometry.real_crossings(outer) == 2
        assert geometry.winding_number(outer, inner.params.outer_branch_point) == 1
        assert geometry.winding_number(outer, 0.5) == 0

    def test_circle_without_charge_offset(self):
        curve = geometry.trace_gamma(ModelParams(n=8, N=16, gamma=1.0, x=0.0), 0.7)
        assert np.allclose(np.abs(curve.points), 0.7)
        assert curve.residual == 0.0

    def test_no_outer_component_at_origin(self):
        with pytest.raises(ParameterRangeError):
            geometry.trace_gamma(ModelParams(n=8, N=16, x=0.0), 1.0, component='outer')

    def test_unknown_component(self, inner):
        with pytest.raises(ParameterRangeError):
            geometry.trace_gamma(inner.params, 1.0, component='middle')

    def test_curves_are_nested_in_r(self, inner):
        p = inner.params
        curves = [geometry.trace_gamma(p, r, npoints=128) for r in (0.5, 1.0, 2.0)]
        for smaller, larger in zip(curves, curves[1:]):
            assert all(geometry.winding_number(larger, z) == 1 for z in smaller.points)
            assert all(geometry.winding_number(smaller, z) == 0 for z in larger.points)


class TestRealPoints:
    def test_ordering(self, inner):
        p = inner.params
        r_minus, r_plus, r_plusplus = geometry.outer_real_points(p, 1.0)
        assert r_minus < 0
        assert p.z0 <= r_plus < p.outer_branch_point < r_plusplus
        for t in (r_minus, r_plus, r_plusplus):
            assert float(re_phi(complex(t), p)) == pytest.approx(float(re_phi(1.0 + 0j, p)), abs=1e-10)

    def test_r_above_saddle(self, inner):
        with pytest.raises(ParameterRangeError):
            geometry.outer_real_points(inner.params, 2.0 * inner.params.z0)

    def test_curves_touch_at_the_saddle(self, inner):
        p = inner.params
        r_minus, r_plus, _ = geometry.outer_real_points(p, p.z0)
        assert r_plus == p.z0


class TestSaddle:
    def test_report(self, inner):
        report = geometry.saddle_report(inner.params)
        assert report.z0 == pytest.approx(1.0 / 0.18)
        assert report.phi_prime < 1e-12
        assert report.phi_second < 0

    def test_report_agrees_with_saddle_and_ell(self, inner):
        p = inner.params
        report = geometry.saddle_report(p)
        z0, ell = saddle_and_ell(p, p.z0)
        assert report.z0 == z0
        assert abs(complex(phi_prime(complex(z0), p))) <= 1e-12
        assert report.phi == pytest.approx(float(re_phi(complex(z0), p)), abs=1e-13)
        assert report.phi == pytest.approx(ell, abs=1e-13)

    def test_weak_regime(self):
        with pytest.raises(StrongRegimeError):
            geometry.saddle_report(ModelParams(n=10, N=11, gamma=1.0, x=0.99))


class TestClassify:
    def test_disc(self, inner):
        label = geometry.classify(1.0 + 0.5 / 8, inner.params, inner)
        assert label.region is Region.DISC
        assert label.scaled_offset == pytest.approx(0.5)

    def test_interior_and_exterior(self, inner):
        assert geometry.classify(0.1, inner.params, inner).region is Region.INT
        assert geometry.classify(4.0, inner.params, inner).region is Region.EXT

    def test_neighbourhood(self, inner):
        z = inner.points[inner.node_count // 4] * 1.01
        label = geometry.classify(z, inner.params, inner)
        assert label.region is Region.NBHD_U
        assert label.distance < 0.05

    def test_distance_vanishes_on_nodes(self, inner):
        assert geometry.distance_to_curve(inner, inner.points[5]) == pytest.approx(0.0, abs=1e-15)

    def test_labels_print_their_names(self):
        assert str(Region.NBHD_U) == 'NbhdU'
        assert math.isfinite(geometry.classify(2.0j, ModelParams(n=8, N=16, gamma=1.0, x=0.3)).distance)


@pytest.mark.filterwarnings('ignore::planarpoly.exceptions.ConditioningWarning')
def test_zeros_approach_the_level_curve():
    distances = []
    for n in (20, 37):
        p = ModelParams(n=n, N=2 * n, gamma=0.5, x=7.0 / 12.0)
        curve = geometry.trace_gamma(p, 1.0)
        zeros = orthopoly.poly_zeros(orthopoly.monic_pair(p, n))
        distances.append(max(geometry.distance_to_curve(curve, z) for z in zeros))
    assert distances[1] <= 0.15
    assert distances[1] < distances[0]
