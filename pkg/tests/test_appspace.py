import dataclasses
import math
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_curve
from oracles import brute_cloud_cost, dense_curve_cost, lower_hull
from rdcbench.appspace import (
    STREAMING_EXAMPLE,
    ApplicationModel,
    GridSpec,
    app_calculator,
    best_map,
    cost_difference,
    cost_surface,
    db_axis,
    grid_difference,
    parse_range,
)
from rdcbench.dataset import CodecDataset
from rdcbench.errors import GridMismatch, InvariantViolation

SMALL = GridSpec((-10.0, 20.0, 2.0), (-20.0, 10.0, 2.0))


def hand_calculation(m):
    """The streaming example, worked step by step without the library."""
    hw = m.gpu_cost / m.gpu_capacity
    energy = m.gpu_power * m.energy_price / m.gpu_capacity * m.hours
    a3 = (hw + energy) * m.n_users
    a2 = m.hours * 3600 / 8 * m.n_users / 1000 * m.data_price
    revenue = m.revenue_multiplier * (m.ref_complexity * a3 + m.ref_rate * a2)
    dmse = 255**2 / 10 ** (m.psnr_none / 10) - 255**2 / 10 ** (m.psnr_full / 10)
    a1 = revenue / dmse
    return a1, a2, a3


class TestCalculator:
    def test_streaming_example(self):
        p = app_calculator(STREAMING_EXAMPLE)
        a1, a2, a3 = p.alpha
        assert a2 == 36000.0
        assert a3 == pytest.approx(5843.75, rel=1e-15)
        assert 5843 <= a3 <= 5844
        assert 6.95 <= p.lam <= 7.10
        assert 1.13 <= p.gamma <= 1.15
        np.testing.assert_allclose(p.alpha, hand_calculation(STREAMING_EXAMPLE), rtol=1e-14)
        assert p.lam == pytest.approx(a2 / a1, rel=1e-15)
        assert p.gamma == pytest.approx(a3 / a1, rel=1e-15)

    def test_streaming_example_db(self):
        lam_db, gam_db = app_calculator(STREAMING_EXAMPLE).db
        assert lam_db == pytest.approx(10 * math.log10(7.07428), abs=1e-4)
        assert gam_db == pytest.approx(10 * math.log10(1.14834), abs=1e-4)

    def test_paper_rounding_chain(self):
        p = app_calculator(STREAMING_EXAMPLE, paper_rounding=True)
        d = p.details
        assert d["hw_per_kmac"] == 5.46875
        assert d["cost_per_kmac_per_user"] == 5.843
        assert p.alpha[2] == 5843.0
        assert d["gb_per_mbps"] == 450000.0
        assert d["operating_ref"] == pytest.approx(148901.0, rel=1e-15)
        assert d["revenue"] == pytest.approx(297802.0, rel=1e-15)
        assert d["revenue_used"] == 300000.0
        assert d["delta_mse"] == 58.52
        assert abs(p.alpha[0] - 5127) <= 1
        assert p.lam == pytest.approx(7.02, abs=0.005)
        assert p.gamma == pytest.approx(1.14, abs=0.005)

    def test_zero_prices_give_gamma_zero(self):
        m = dataclasses.replace(STREAMING_EXAMPLE, gpu_cost=0, energy_price=0)
        p = app_calculator(m)
        assert p.gamma == 0.0
        assert p.lam > 0
        assert p.db[1] == -math.inf

    def test_doubling_data_price(self):
        base = app_calculator(STREAMING_EXAMPLE)
        m = dataclasses.replace(STREAMING_EXAMPLE, data_price=2 * STREAMING_EXAMPLE.data_price)
        p = app_calculator(m)
        assert p.alpha[1] == 2 * base.alpha[1]
        assert p.alpha[2] == base.alpha[2]
        # revenue tracks the reference operating cost, so lambda rises by less than 2x
        assert base.lam < p.lam < 2 * base.lam

    def test_runtime(self):
        t = time.perf_counter()
        for _ in range(100):
            app_calculator(STREAMING_EXAMPLE)
        assert (time.perf_counter() - t) / 100 < 1e-3

    @given(st.floats(1, 1e6), st.floats(1, 1e4), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1e4),
           st.floats(1, 1e3), st.floats(0, 2), st.floats(0.1, 100), st.floats(0.1, 50), st.floats(1, 5))
    def test_weights_consistent(self, users, hours, ep, dp, gpu, cap, power, cref, rref, mult):
        m = ApplicationModel(users, hours, ep, dp, gpu, cap, power, cref, rref, mult)
        try:
            p = app_calculator(m)
        except InvariantViolation:
            # a model whose reference revenue is zero has no valid alpha_1
            assert dp == 0 and (gpu == 0 and (ep == 0 or power == 0))
            return
        a1, a2, a3 = p.alpha
        assert a1 > 0 and a2 >= 0 and a3 >= 0
        assert p.lam == pytest.approx(a2 / a1, rel=1e-12)
        assert p.gamma == pytest.approx(a3 / a1, rel=1e-12)
        np.testing.assert_allclose(p.alpha, hand_calculation(m), rtol=1e-12)

    def test_invalid_model(self):
        with pytest.raises(InvariantViolation):
            dataclasses.replace(STREAMING_EXAMPLE, n_users=0)
        with pytest.raises(InvariantViolation):
            dataclasses.replace(STREAMING_EXAMPLE, data_price=-1)
        with pytest.raises(InvariantViolation):
            dataclasses.replace(STREAMING_EXAMPLE, psnr_full=25)
        with pytest.raises(InvariantViolation, match="unknown"):
            ApplicationModel.from_dict({**STREAMING_EXAMPLE.to_dict(), "extra": 1})

    def test_dict_round_trip(self):
        assert ApplicationModel.from_dict(STREAMING_EXAMPLE.to_dict()) == STREAMING_EXAMPLE


class TestAxes:
    def test_default_grid(self):
        la, ga = GridSpec().axes()
        assert la[0] == -20 and la[-1] == 40 and len(la) == 121
        assert ga[0] == -30 and ga[-1] == 30 and len(ga) == 121

    def test_halving_reproduces_values(self):
        coarse = db_axis(-20, 40, 0.5)
        fine = db_axis(-20, 40, 0.25)
        np.testing.assert_array_equal(fine[::2], coarse)

    def test_parse_range(self):
        assert parse_range("-20:40:0.5") == (-20.0, 40.0, 0.5)
        with pytest.raises(InvariantViolation):
            parse_range("1:2")
        with pytest.raises(InvariantViolation):
            db_axis(0, 1, 0)


class TestSurfaces:
    def test_cloud_against_brute_force(self, table1, rng):
        grid = cost_surface(table1, SMALL, reducer="mean")
        for _ in range(25):
            i = int(rng.integers(len(table1)))
            g = int(rng.integers(len(grid.gamma_db_axis)))
            l = int(rng.integers(len(grid.lambda_db_axis)))
            lam = 10 ** (grid.lambda_db_axis[l] / 10)
            gam = 10 ** (grid.gamma_db_axis[g] / 10)
            want = brute_cloud_cost(table1[i].as_array(), lam, gam, "mean")
            assert grid.surfaces[i, g, l] == pytest.approx(want, rel=1e-12)

    def test_curve_against_dense_sampling(self, table1, rng):
        codecs = table1[:4]
        grid = cost_surface(codecs, SMALL, cost_kind="curve")
        for _ in range(5):
            i = int(rng.integers(len(codecs)))
            g = int(rng.integers(len(grid.gamma_db_axis)))
            l = int(rng.integers(len(grid.lambda_db_axis)))
            want = dense_curve_cost(codecs[i].as_array(), grid.lambdas[l], grid.gammas[g])
            assert grid.surfaces[i, g, l] == pytest.approx(want, rel=1e-6)

    def test_cloud_monotone_along_axes(self, table1):
        grid = cost_surface(table1, SMALL)
        assert np.all(np.diff(grid.surfaces, axis=1) >= 0)
        assert np.all(np.diff(grid.surfaces, axis=2) >= 0)

    def test_zero_weight_axis(self, table1):
        grid = cost_surface(table1[:2], lambda_db_axis=[-np.inf, 0.0], gamma_db_axis=[-np.inf])
        assert grid.lambdas[0] == 0.0
        assert grid.surfaces[0, 0, 0] == table1[0].distortions.min()

    def test_surfaces_db(self):
        codec = CodecDataset("z", ((0, 0, 0), (1, 1, 1)), "cloud")
        grid = cost_surface([codec], lambda_db_axis=[0.0], gamma_db_axis=[0.0])
        assert grid.surfaces_db()[0, 0, 0] == -np.inf

    def test_bad_axis(self, table1):
        with pytest.raises(InvariantViolation):
            cost_surface(table1, lambda_db_axis=[1.0, 0.0], gamma_db_axis=[0.0])

    def test_curve_kind_needs_curves(self):
        codec = CodecDataset("z", ((1, 1, 1),), "cloud")
        with pytest.raises(InvariantViolation):
            cost_surface([codec], SMALL, cost_kind="curve")

    def test_full_default_grid_is_fast(self, table1):
        t = time.perf_counter()
        grid = cost_surface(table1)
        assert time.perf_counter() - t < 30
        assert grid.surfaces.shape == (17, 121, 121)
        assert np.all(np.isfinite(grid.surfaces))


class TestDifference:
    def test_self_difference_is_zero(self, table1):
        grid = cost_surface(table1[:3], SMALL)
        assert np.all(grid_difference(grid, 1, 1) == 0)

    def test_antisymmetric(self, table1):
        grid = cost_surface(table1[:3], SMALL)
        np.testing.assert_array_equal(grid_difference(grid, 0, 2), -grid_difference(grid, 2, 0))
        np.testing.assert_array_equal(grid_difference(grid, 0, 2, "linear"), -grid_difference(grid, 2, 0, "linear"))

    def test_shape_mismatch(self):
        with pytest.raises(GridMismatch):
            cost_difference(np.ones((2, 3)), np.ones((3, 2)))

    def test_dominance_gives_negative_difference(self, rng):
        b = random_curve(rng, 5, "B", complexity=500)
        a = CodecDataset("A", tuple((r, d * 0.8, c * 0.9) for r, d, c in b.as_array()), "curve")
        grid = cost_surface([a, b], SMALL)
        assert np.all(grid_difference(grid, "A", "B") < 0)


class TestBestMap:
    def test_dominant_codec_wins_everywhere(self, rng):
        b = random_curve(rng, 5, "B", complexity=500)
        a = CodecDataset("A", tuple((r, d * 0.8, c * 0.9) for r, d, c in b.as_array()), "curve")
        grid = cost_surface([b, a], SMALL)
        bm, winners = best_map(grid)
        assert winners == [1]
        assert np.all(bm == 1)

    def test_needs_two_codecs(self, table1):
        with pytest.raises(InvariantViolation):
            best_map(cost_surface(table1[:1], SMALL))

    def test_interleaving_against_lower_hull(self, rng):
        # gamma = 0: the winner at each lambda owns the lower-hull vertex of the
        # union of (r, d) points that minimizes d + lambda r
        codecs = [random_curve(rng, 4, f"C{i}", complexity=100 * (i + 1)) for i in range(4)]
        lam_db = db_axis(-20, 20, 0.25)
        grid = cost_surface(codecs, lambda_db_axis=lam_db, gamma_db_axis=[-np.inf])
        owner = {}
        for k, c in enumerate(codecs):
            for r, d, _ in c.as_array():
                owner[(r, d)] = k
        hull = lower_hull(list(owner))
        bm, winners = best_map(grid)
        for l, lam in enumerate(grid.lambdas):
            costs = [d + lam * r for r, d in hull]
            want = owner[hull[int(np.argmin(costs))]]
            assert bm[0, l] == want
        assert set(winners) <= {owner[v] for v in hull}

    def test_grid_refinement(self, table1):
        coarse = cost_surface(table1, GridSpec((-20, 40, 1.0), (-30, 30, 1.0)))
        fine = cost_surface(table1, GridSpec((-20, 40, 0.5), (-30, 30, 0.5)))
        np.testing.assert_array_equal(fine.surfaces[:, ::2, ::2], coarse.surfaces)
        np.testing.assert_array_equal(fine.best_map[::2, ::2], coarse.best_map)

    def test_argmin_invariant_to_codec_order(self, table1, rng):
        perm = rng.permutation(len(table1))
        grid = cost_surface(table1, SMALL)
        shuffled = cost_surface([table1[i] for i in perm], SMALL)
        names = np.array(grid.codec_names)[grid.best_map]
        names_s = np.array(shuffled.codec_names)[shuffled.best_map]
        np.testing.assert_array_equal(names, names_s)

    @given(st.floats(1e-6, 1e6))
    def test_argmin_invariant_to_common_scale(self, table1, k):
        grid = cost_surface(table1, SMALL)
        scaled = dataclasses.replace(grid, surfaces=grid.surfaces * k)
        np.testing.assert_array_equal(best_map(scaled)[0], best_map(grid)[0])

    def test_curve_surface_not_monotone(self):
        # the normalized curve cost can fall as lambda grows, so only cloud
        # surfaces are promised to be non-decreasing
        codec = CodecDataset("x", ((0, 1, 0), (1e-9, 0.5, 0)), "curve")
        grid = cost_surface([codec], lambda_db_axis=[-np.inf, 7.0], gamma_db_axis=[-np.inf], cost_kind="curve")
        assert grid.surfaces[0, 0, 1] < grid.surfaces[0, 0, 0]

    def test_table1_winners(self, table1):
        grid = cost_surface(table1)
        names = {grid.codec_names[i] for i in grid.winners()}
        assert len(names) >= 2
        assert names <= set(grid.codec_names)


@pytest.mark.parametrize("kind", ["cloud", "curve"])
def test_thread_count_does_not_change_results(table1, kind):
    one = cost_surface(table1, SMALL, cost_kind=kind, threads=1)
    many = cost_surface(table1, SMALL, cost_kind=kind, threads=8)
    assert one.surfaces.tobytes() == many.surfaces.tobytes()
    np.testing.assert_array_equal(one.best_map, many.best_map)


def test_thread_env(monkeypatch, table1):
    monkeypatch.setenv("RDC_BENCH_THREADS", "3")
    from rdcbench.appspace import thread_count
    assert thread_count() == 3
    monkeypatch.setenv("RDC_BENCH_THREADS", "x")
    with pytest.raises(InvariantViolation):
        thread_count()
