import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from acsgeom.charts import CayleyCoordinate, acs_to_cayley, standard_acs
from acsgeom.errors import DegeneratePlane, DimensionMismatch, SingularOperator
from acsgeom.fiber import mat_exp, max_abs
from acsgeom.geometry import (
    ChartField,
    acs_on_tangent,
    ambient_inner,
    ambient_omega,
    chart_inner,
    chart_omega,
    chart_origin,
    christoffel,
    curvature,
    geodesic_ambient,
    geodesic_chart,
    gram_denominator,
    sectional_curvature,
    sectional_numerator,
    shifted,
)
from acsgeom.structures import (
    SampleSpace,
    TangentField,
    random_sample_space,
    random_tangent_field,
    standard_acs_field,
)


def one_point_space():
    return SampleSpace(2, np.ones(1))


def tangent(space, j, *mats):
    return TangentField(space, j, np.stack([np.asarray(m, dtype=float)
                                            for m in mats]))


@pytest.fixture
def flat2():
    """Single point, weight 1, standard base, K = diag(1/2, -1/2)."""
    space = one_point_space()
    j = standard_acs_field(space)
    k = tangent(space, j, np.diag([0.5, -0.5]))
    return space, j, ChartField(space, j, k)


@pytest.fixture
def origin2():
    space = one_point_space()
    j = standard_acs_field(space)
    return space, j, chart_origin(j)


A_DIAG = np.diag([1.0, -1.0])
B_OFF = np.array([[0.0, 1.0], [1.0, 0.0]])


class TestChartField:
    def test_validates_per_point(self):
        space = one_point_space()
        j = standard_acs_field(space)
        # boundary of the chart: 1 - K singular
        k = tangent(space, j, np.diag([1.0, -1.0]))
        with pytest.raises(SingularOperator):
            ChartField(space, j, k)

    def test_resolvents_at_origin(self, origin2):
        space, j, c = origin2
        assert_allclose(c.resolvents(), np.tile(np.eye(2), (1, 1, 1)),
                        atol=1e-15)

    def test_shifted_is_linear_move(self, flat2):
        space, j, c = flat2
        a = tangent(space, j, B_OFF)
        moved = shifted(c, a, 1e-3)
        assert np.array_equal(moved.K.ops, c.K.ops + 1e-3 * a.ops)

    def test_space_mismatch(self):
        s1 = SampleSpace(2, np.ones(1))
        s2 = SampleSpace(2, np.ones(2))
        j1, j2 = standard_acs_field(s1), standard_acs_field(s2)
        a = tangent(s1, j1, A_DIAG)
        b = TangentField(s2, j2, np.tile(A_DIAG, (2, 1, 1)))
        with pytest.raises(DimensionMismatch):
            ambient_inner(j1, a, b)


class TestAmbientOps:
    def test_inner_trace_value(self, origin2):
        space, j, _ = origin2
        a = tangent(space, j, A_DIAG)
        assert ambient_inner(j, a, a) == 2.0

    def test_inner_weights(self):
        space = SampleSpace(2, np.array([2.0, 3.0]))
        j = standard_acs_field(space)
        a = TangentField(space, j, np.tile(A_DIAG, (2, 1, 1)))
        assert ambient_inner(j, a, a) == 10.0

    def test_acs_on_tangent_squares_to_minus_one(self, origin2):
        space, j, _ = origin2
        a = tangent(space, j, A_DIAG)
        jja = acs_on_tangent(acs_on_tangent(a, j), j)
        assert np.array_equal(jja.ops, -a.ops)

    def test_omega_is_inner_with_j(self, origin2):
        space, j, _ = origin2
        a = tangent(space, j, A_DIAG)
        b = tangent(space, j, B_OFF)
        assert ambient_omega(j, a, b) == ambient_inner(j, acs_on_tangent(a, j), b)

    def test_omega_antisymmetric(self):
        space = random_sample_space(np.random.default_rng(0), 4, 3)
        j = standard_acs_field(space)
        a = random_tangent_field(np.random.default_rng(1), j)
        b = random_tangent_field(np.random.default_rng(2), j)
        assert abs(ambient_omega(j, a, b) + ambient_omega(j, b, a)) < 1e-12


class TestChartMetric:
    def test_origin_matches_pushforward_scaling(self, origin2):
        # the chart pairing at K=0 is 4 tr(AB): the differential of the
        # chart map is A -> 2 J0 A, an isometry onto its image up to that 4
        space, j, c = origin2
        a = tangent(space, j, A_DIAG)
        assert chart_inner(c, a, a) == 4.0 * ambient_inner(j, a, a)

    def test_known_value_off_origin(self, flat2):
        space, j, c = flat2
        a = tangent(space, j, A_DIAG)
        assert_allclose(chart_inner(c, a, a), 128.0 / 9.0, rtol=1e-14)

    def test_omega_value_at_origin(self, origin2):
        space, j, c = origin2
        a = tangent(space, j, A_DIAG)
        b = tangent(space, j, B_OFF)
        # 4 tr(A J0 B) with A J0 B = diag(1,-1) J0 B
        assert_allclose(chart_omega(c, a, b),
                        4.0 * np.trace(A_DIAG @ standard_acs(2) @ B_OFF),
                        rtol=1e-15)

    def test_symmetry_and_bilinearity(self):
        space = random_sample_space(np.random.default_rng(3), 4, 4)
        j = standard_acs_field(space)
        k = random_tangent_field(np.random.default_rng(4), j, bound=0.7)
        c = ChartField(space, j, k)
        a = random_tangent_field(np.random.default_rng(5), j)
        b = random_tangent_field(np.random.default_rng(6), j)
        assert abs(chart_inner(c, a, b) - chart_inner(c, b, a)) < 1e-12
        two_a = TangentField(space, j, 2.0 * a.ops)
        assert abs(chart_inner(c, two_a, b) - 2.0 * chart_inner(c, a, b)) < 1e-11


class TestChristoffel:
    def test_known_value(self, flat2):
        space, j, c = flat2
        a = tangent(space, j, A_DIAG)
        gamma = christoffel(c, a, a)
        assert_allclose(gamma.ops[0], np.diag([4.0 / 3.0, -4.0 / 3.0]),
                        rtol=1e-15)

    def test_symmetric_in_arguments(self):
        space = random_sample_space(np.random.default_rng(7), 4, 3)
        j = standard_acs_field(space)
        c = ChartField(space, j, random_tangent_field(np.random.default_rng(8), j, bound=0.7))
        a = random_tangent_field(np.random.default_rng(9), j)
        b = random_tangent_field(np.random.default_rng(10), j)
        assert np.array_equal(christoffel(c, a, b).ops, christoffel(c, b, a).ops)

    def test_vanishes_at_origin(self, origin2):
        space, j, c = origin2
        a = tangent(space, j, B_OFF)
        assert max_abs(christoffel(c, a, a).ops) == 0.0


class TestCurvature:
    def test_hand_case_at_origin(self, origin2):
        # A = diag(1,-1), B = offdiagonal: R(A,B)B = diag(-4, 4)
        space, j, c = origin2
        a = tangent(space, j, A_DIAG)
        b = tangent(space, j, B_OFF)
        assert_allclose(curvature(c, a, b, b).ops[0], np.diag([-4.0, 4.0]),
                        atol=1e-14)

    def test_antisymmetry_exact(self):
        space = random_sample_space(np.random.default_rng(11), 4, 3)
        j = standard_acs_field(space)
        c = ChartField(space, j, random_tangent_field(np.random.default_rng(12), j, bound=0.6))
        a = random_tangent_field(np.random.default_rng(13), j)
        b = random_tangent_field(np.random.default_rng(14), j)
        d = random_tangent_field(np.random.default_rng(15), j)
        assert max_abs(curvature(c, a, b, d).ops + curvature(c, b, a, d).ops) == 0.0
        assert max_abs(curvature(c, a, a, d).ops) == 0.0

    def test_first_bianchi(self):
        space = random_sample_space(np.random.default_rng(16), 4, 3)
        j = standard_acs_field(space)
        c = ChartField(space, j, random_tangent_field(np.random.default_rng(17), j, bound=0.6))
        a = random_tangent_field(np.random.default_rng(18), j)
        b = random_tangent_field(np.random.default_rng(19), j)
        d = random_tangent_field(np.random.default_rng(20), j)
        cyc = (curvature(c, a, b, d).ops + curvature(c, b, d, a).ops
               + curvature(c, d, a, b).ops)
        assert max_abs(cyc) < 1e-10

    def test_origin_commutator_form(self, origin2):
        space, j, c = origin2
        a = tangent(space, j, A_DIAG)
        b = tangent(space, j, B_OFF)
        ab = a.ops[0] @ b.ops[0] - b.ops[0] @ a.ops[0]
        nested = ab @ b.ops[0] - b.ops[0] @ ab
        assert_allclose(curvature(c, a, b, b).ops[0], -nested, atol=1e-14)


class TestSectional:
    def test_known_plane(self, origin2):
        space, j, c = origin2
        a = tangent(space, j, A_DIAG)
        b = tangent(space, j, B_OFF)
        assert_allclose(sectional_numerator(c, a, b), -32.0, rtol=1e-14)
        assert_allclose(gram_denominator(c, a, b), 64.0, rtol=1e-14)
        assert_allclose(sectional_curvature(c, a, b), -0.5, rtol=1e-14)

    def test_degenerate_plane(self, origin2):
        space, j, c = origin2
        a = tangent(space, j, A_DIAG)
        with pytest.raises(DegeneratePlane):
            sectional_curvature(c, a, a)

    def test_scale_invariance(self):
        space = random_sample_space(np.random.default_rng(21), 4, 3)
        j = standard_acs_field(space)
        c = ChartField(space, j, random_tangent_field(np.random.default_rng(22), j, bound=0.5))
        a = random_tangent_field(np.random.default_rng(23), j)
        b = random_tangent_field(np.random.default_rng(24), j)
        k1 = sectional_curvature(c, a, b)
        a3 = TangentField(space, j, 3.0 * a.ops)
        assert abs(sectional_curvature(c, a3, b) - k1) < 1e-10 * max(1.0, abs(k1))


class TestGeodesics:
    def test_chart_matches_scalar_tanh(self):
        # diagonal velocity at dim 2 reduces to the scalar flow tanh(ta/2)
        space = one_point_space()
        j = standard_acs_field(space)
        a = tangent(space, j, np.diag([0.8, -0.8]))
        for t in (0.0, 0.3, 1.0, 2.0):
            k = geodesic_chart(a, t)
            assert_allclose(k.ops[0], np.diag([math.tanh(0.4 * t),
                                               -math.tanh(0.4 * t)]),
                            atol=1e-15)

    def test_starts_at_origin(self):
        space = random_sample_space(np.random.default_rng(25), 4, 3)
        j = standard_acs_field(space)
        a = random_tangent_field(np.random.default_rng(26), j)
        assert max_abs(geodesic_chart(a, 0.0).ops) == 0.0
        assert np.array_equal(geodesic_ambient(j, a, 0.0).ops, j.ops)

    def test_ambient_is_exponential(self):
        space = one_point_space()
        j = standard_acs_field(space)
        a = tangent(space, j, B_OFF)
        jt = geodesic_ambient(j, a, 1.5)
        assert_allclose(jt.ops[0], standard_acs(2) @ mat_exp(1.5 * B_OFF),
                        rtol=1e-15)

    def test_ambient_stays_acs(self):
        space = random_sample_space(np.random.default_rng(27), 4, 3)
        j = standard_acs_field(space)
        a = random_tangent_field(np.random.default_rng(28), j)
        for t in (0.5, 1.0, 2.0):
            jt = geodesic_ambient(j, a, t)
            for i in range(space.npoints):
                assert max_abs(jt.ops[i] @ jt.ops[i] + np.eye(4)) < 1e-13

    def test_chart_and_ambient_agree(self):
        space = random_sample_space(np.random.default_rng(29), 4, 3)
        j = standard_acs_field(space)
        a = random_tangent_field(np.random.default_rng(30), j)
        for t in (0.4, 1.2, 2.0):
            kt = geodesic_chart(a, t)
            jt = geodesic_ambient(j, a, t)
            for i in range(space.npoints):
                back = acs_to_cayley(j.ops[i], jt.ops[i]).K
                assert max_abs(back - kt.ops[i]) < 1e-12

    def test_velocity_at_zero(self):
        # dK/dt at t=0 is A/2 (tanh'(0) = 1 with the half-angle argument)
        space = one_point_space()
        j = standard_acs_field(space)
        a = tangent(space, j, np.diag([0.6, -0.6]))
        h = 1e-6
        kdot = (geodesic_chart(a, h).ops - geodesic_chart(a, -h).ops) / (2 * h)
        assert max_abs(kdot - 0.5 * a.ops) < 1e-10
