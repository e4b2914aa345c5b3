import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from oracles import brute_cloud_cost, dense_curve_cost, plane_basis
from rdcbench.dataset import CodecDataset, RdcPoint
from rdcbench.errors import DegenerateCurve, InvariantViolation
from rdcbench.rdccost import (
    CostPlane,
    cloud_cost,
    curve_cost,
    lagrangian,
    linear_cost,
    plane_distance,
    project_onto_plane,
)

coord = st.floats(0, 1e3, allow_subnormal=False)
weight = st.floats(0, 1e2, allow_subnormal=False)


class TestPlane:
    def test_origin(self):
        assert plane_distance(RdcPoint(0, 0, 0), CostPlane(3, 4)) == 0.0

    def test_unit_point(self):
        assert plane_distance(RdcPoint(1, 1, 1), CostPlane(1, 1)) == pytest.approx(math.sqrt(3), rel=1e-15)

    def test_figure_plane_projection(self):
        # D + 2R + 10C = 0, point (r, d, c) = (0, 1, 0): q = 1/105
        p = project_onto_plane(RdcPoint(0, 1, 0), CostPlane(2, 10))
        np.testing.assert_allclose(p, [-2 / 105, 104 / 105, -10 / 105], rtol=1e-15)
        assert abs(p[1] + 2 * p[0] + 10 * p[2]) < 1e-15

    def test_point_on_plane_unchanged(self):
        plane = CostPlane(2, 10)
        p = np.array([1.0, 8.0, -1.0])  # 8 + 2 - 10 = 0
        np.testing.assert_allclose(project_onto_plane(p, plane), p, atol=1e-15)

    def test_distance_against_orthonormal_basis(self, rng):
        for _ in range(200):
            p = rng.uniform(0, 100, 3)
            lam, gam = rng.uniform(0, 20, 2)
            unit_n, _, _ = plane_basis(lam, gam)
            assert plane_distance(p, CostPlane(lam, gam)) == pytest.approx(p @ unit_n, rel=1e-12)

    def test_vectorized(self, rng):
        pts = rng.uniform(0, 10, (50, 3))
        plane = CostPlane(1.5, 0.2)
        np.testing.assert_array_equal(plane_distance(pts, plane), [plane_distance(p, plane) for p in pts])

    @given(coord, coord, coord, weight, weight)
    def test_projection_residual_and_distance(self, r, d, c, lam, gam):
        plane = CostPlane(lam, gam)
        p = np.array([r, d, c])
        q = project_onto_plane(p, plane)
        assert abs(q[1] + lam * q[0] + gam * q[2]) <= 1e-9 * (1 + d + lam * r + gam * c)
        z = plane_distance(p, plane)
        assert np.linalg.norm(p - q) == pytest.approx(z, rel=1e-9, abs=1e-12)
        np.testing.assert_allclose(project_onto_plane(q, plane), q, rtol=1e-12, atol=1e-9 * (1 + np.abs(p).max()))

    @given(coord, coord, coord, weight, weight)
    def test_scale_relation(self, r, d, c, lam, gam):
        plane = CostPlane(lam, gam)
        lhs = plane_distance((r, d, c), plane) * math.sqrt(1 + lam**2 + gam**2)
        rhs = linear_cost([r, d, c], [lam, 1, gam])
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_invalid_plane(self):
        with pytest.raises(InvariantViolation):
            CostPlane(-1, 0)
        with pytest.raises(InvariantViolation):
            CostPlane(math.inf, 0)


class TestCurveCost:
    def test_equidistant_points(self):
        plane = CostPlane(1, 1)
        # both points have d + r + c = 6
        codec = CodecDataset("x", ((1, 4, 1), (3, 1, 2)), "curve")
        assert curve_cost(codec, plane).total == pytest.approx(6 / math.sqrt(3), rel=1e-15)

    def test_hand_example(self):
        codec = CodecDataset("x", ((1, 1, 1), (2, 0, 1)), "curve")
        br = curve_cost(codec, CostPlane(1, 1))
        assert br.total == pytest.approx(math.sqrt(3), rel=1e-15)
        (ell, z), = br.per_segment
        assert z == pytest.approx(math.sqrt(3), rel=1e-15)
        # the segment direction (1, -1, 0) lies in the plane
        assert ell == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_against_dense_sampling(self, rng):
        for _ in range(20):
            pts = rng.uniform(0, 50, (5, 3))
            lam, gam = rng.uniform(0, 10, 2)
            got = curve_cost(pts, CostPlane(lam, gam)).total
            assert got == pytest.approx(dense_curve_cost(pts, lam, gam), rel=1e-6)

    def test_breakdown_recomputes(self, rng):
        pts = rng.uniform(0, 50, (6, 3))
        br = curve_cost(pts, CostPlane(2, 3))
        assert br.recompute_total() == pytest.approx(br.total, rel=1e-12)
        assert all(ell >= 0 for ell, _ in br.per_segment)

    def test_curve_on_plane_costs_zero(self):
        plane = CostPlane(2, 10)
        pts = np.array([[1.0, 8.0, -1.0], [0.0, 0.0, 0.0], [3.0, 4.0, -1.0]])
        assert curve_cost(pts, plane).total == pytest.approx(0.0, abs=1e-15)

    def test_zero_length_segment_skipped(self):
        plane = CostPlane(0, 0)  # projection drops d only
        pts = np.array([[1.0, 1.0, 1.0], [1.0, 5.0, 1.0], [2.0, 3.0, 1.0]])
        br = curve_cost(pts, plane)
        assert br.per_segment[0][0] == 0.0
        assert br.total == pytest.approx(4.0, rel=1e-15)

    def test_all_degenerate(self):
        pts = np.array([[1.0, 1.0, 1.0], [1.0, 5.0, 1.0]])
        with pytest.raises(DegenerateCurve):
            curve_cost(pts, CostPlane(0, 0))

    def test_not_monotone_in_lambda(self):
        # the normalized curve cost can fall as lambda grows: a pure-distortion
        # curve gets closer to a steeper plane
        codec = CodecDataset("x", ((0, 1, 0), (1e-9, 0.5, 0)), "curve")
        assert curve_cost(codec, CostPlane(5, 0)).total < curve_cost(codec, CostPlane(0, 0)).total


class TestCloudCost:
    def test_hand_example(self):
        codec = CodecDataset("x", ((1, 10, 500), (2, 5, 500)), "cloud")
        plane = CostPlane(7.02, 1.14)
        assert cloud_cost(codec, plane, "min") == pytest.approx(587.02, rel=1e-14)
        assert cloud_cost(codec, plane, "mean") == pytest.approx(588.03, rel=1e-14)

    def test_singleton(self):
        codec = CodecDataset("x", ((1, 10, 500),), "cloud")
        plane = CostPlane(2, 3)
        assert cloud_cost(codec, plane, "min") == cloud_cost(codec, plane, "mean") == 1512.0

    def test_zero_weights(self, rng):
        pts = rng.uniform(0, 100, (7, 3))
        assert cloud_cost(pts, CostPlane(0, 0), "min") == pts[:, 1].min()

    def test_against_brute_force(self, rng):
        for _ in range(50):
            pts = rng.uniform(0, 100, (int(rng.integers(1, 9)), 3))
            lam, gam = rng.uniform(0, 30, 2)
            for red in ("min", "mean"):
                assert cloud_cost(pts, CostPlane(lam, gam), red) == pytest.approx(
                    brute_cloud_cost(pts, lam, gam, red), rel=1e-13)

    def test_bad_reducer(self):
        with pytest.raises(InvariantViolation):
            cloud_cost([(1, 1, 1)], CostPlane(1, 1), "max")

    @given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=8), weight, weight)
    def test_min_le_mean(self, pts, lam, gam):
        plane = CostPlane(lam, gam)
        assert cloud_cost(pts, plane, "min") <= cloud_cost(pts, plane, "mean") * (1 + 1e-12)

    @given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=8), weight, weight, weight, weight)
    def test_monotone_in_weights(self, pts, lam, gam, dl, dg):
        for red in ("min", "mean"):
            lo = cloud_cost(pts, CostPlane(lam, gam), red)
            hi = cloud_cost(pts, CostPlane(lam + dl, gam + dg), red)
            assert hi >= lo * (1 - 1e-12)

    @given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=6),
           st.floats(0.01, 1e2), st.floats(0.01, 1e2), st.floats(0.01, 10))
    def test_dominance(self, pts_b, lam, gam, eps):
        b = np.asarray(pts_b)
        # A: every point of B moved down in distortion by a representable margin
        assume(np.all(b[:, 1] >= eps))
        a = b.copy()
        a[:, 1] -= eps
        plane = CostPlane(lam, gam)
        assert cloud_cost(a, plane, "min") < cloud_cost(b, plane, "min")


class TestLinearCost:
    def test_zero_weights(self):
        assert linear_cost([3, 4, 5], [0, 0, 0]) == 0.0

    def test_application_quantities(self):
        assert linear_cost([3, 6.5, 7], [36000, 5127, 5843]) == pytest.approx(182226.5, rel=1e-15)

    def test_scalar(self):
        assert linear_cost([2.5], [4]) == 10.0

    def test_rdc_case_matches_lagrangian(self, rng):
        r, d, c = rng.uniform(0, 10, 3)
        assert linear_cost([r, d, c], [2, 1, 3]) == pytest.approx(lagrangian((r, d, c), 2, 3), rel=1e-15)

    def test_mismatch(self):
        with pytest.raises(InvariantViolation):
            linear_cost([1, 2], [1])
        with pytest.raises(InvariantViolation):
            linear_cost([], [])
