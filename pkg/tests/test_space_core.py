import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmsgeo import space_core
from mmsgeo.space_core import (
    MetricAxiomError,
    ResolutionError,
    SetIndicator,
    audit_triangle,
    build_circle,
    build_explicit,
    build_fat_cantor_interval,
    build_grid_box,
    fat_cantor_density,
    fat_cantor_intervals,
    fat_cantor_marks,
    full_indicator,
    indicator_box,
    measure,
)


class TestGridBox:
    def test_unit_interval_total_mass(self):
        sp = build_grid_box(1, 101, [0.0, 1.0])
        assert abs(sp.total_mass - 1.0) < 1e-12

    def test_2d_equal_cells(self):
        sp = build_grid_box(2, 4, [[0.0, 1.0], [0.0, 1.0]])
        assert sp.n == 16
        assert np.allclose(sp.weights, 1.0 / 16, atol=1e-15)

    def test_fat_cantor_density_mass(self):
        dens = fat_cantor_density(0.5, depth=10)
        sp = build_grid_box(1, 2001, [0.0, 1.0], dens)
        assert abs(sp.total_mass - 0.75) < 2e-3

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError, match="dimension"):
            build_grid_box(4, 8, [[0, 1]] * 4)

    def test_nonpositive_density(self):
        with pytest.raises(ValueError, match="positive"):
            build_grid_box(1, 16, [0.0, 1.0], lambda pts: pts[:, 0] - 0.5)

    def test_deterministic_rebuild(self):
        a = build_grid_box(2, 32, [[0, 1], [0, 1]])
        b = build_grid_box(2, 32, [[0, 1], [0, 1]])
        assert a.space_id == b.space_id
        assert np.array_equal(a.weights, b.weights)
        assert np.array_equal(a.coords, b.coords)


class TestFatCantor:
    def test_depth6_k_mass(self):
        sp = build_fat_cantor_interval(4001, 6, 0.5)
        marks = fat_cantor_marks(sp)
        analytic = 0.5 + 0.5 * 0.5 ** 6
        lebesgue = marks.count / 4001.0
        assert abs(lebesgue - analytic) < 1e-3
        assert abs(sp.meta["fat_cantor"]["k_mass_analytic"] - analytic) < 1e-15

    def test_depth1_single_gap(self):
        sp = build_fat_cantor_interval(4001, 1, 0.5)
        marks = fat_cantor_marks(sp)
        # one central gap of length 2*(1-theta)/4 = 1/4
        assert abs(marks.count / 4001.0 - 0.75) < 1e-3
        gaps = sp.meta["fat_cantor"]["gaps"]
        assert len(gaps) == 1
        a, b, step = gaps[0]
        assert step == 1
        assert abs((b - a) - 0.25) < 1e-12

    def test_resolution_too_coarse(self):
        with pytest.raises(ResolutionError):
            build_fat_cantor_interval(41, 6, 0.5)

    def test_gap_budget_matches_target(self):
        intervals, gaps, k_mass = fat_cantor_intervals(8, 0.3)
        removed = sum(b - a for a, b, _ in gaps)
        assert abs(removed - (1 - 0.3) * (1 - 0.5 ** 8)) < 1e-12


class TestCircle:
    def test_total_mass(self):
        sp = build_circle(1000, 2 * np.pi)
        assert abs(sp.total_mass - 2 * np.pi) < 1e-9

    def test_antipodal_distance(self):
        sp = build_circle(1000, 2 * np.pi)
        d = sp.pair_distances(np.array([0]), np.array([500]))
        assert abs(d[0] - np.pi) < 1e-12

    def test_three_points_unit_distances(self):
        sp = build_circle(3, 3.0)
        for i in range(3):
            for j in range(3):
                d = sp.pair_distances(np.array([i]), np.array([j]))[0]
                assert d == (0.0 if i == j else 1.0)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            build_circle(2, 1.0)


class TestExplicit:
    def test_euclidean_three_points(self):
        pts = np.array([0.0, 2.0, 3.0])
        dmat = np.abs(pts[:, None] - pts[None, :])
        sp = build_explicit(dmat, np.ones(3))
        assert sp.resolution_h == 1.0
        assert not sp.length_space_flag

    def test_triangle_violation_witness(self):
        dmat = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        with pytest.raises(MetricAxiomError) as exc:
            build_explicit(dmat, np.ones(3))
        assert exc.value.witness is not None
        assert len(exc.value.witness) == 3

    def test_asymmetric_matrix(self):
        dmat = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(MetricAxiomError, match="asymmetric"):
            build_explicit(dmat, np.ones(2))


class TestMeasure:
    def test_full_and_empty(self, unit_interval_1001):
        sp = unit_interval_1001
        assert abs(measure(sp, full_indicator(sp)) - 1.0) < 1e-12
        empty = SetIndicator.from_mask(sp, np.zeros(sp.n, dtype=bool))
        assert measure(sp, empty) == 0.0

    def test_interval_mass(self, unit_interval_1001):
        sp = unit_interval_1001
        ind = indicator_box(sp, 0.4, 0.6)
        assert abs(measure(sp, ind) - 0.2) <= sp.resolution_h * 2

    def test_binding_mismatch(self, unit_interval_1001, unit_square_128):
        ind = full_indicator(unit_interval_1001)
        with pytest.raises(space_core.BindingError):
            measure(unit_square_128, ind)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 64 - 1), st.integers(0, 2 ** 64 - 1))
    def test_additive_and_monotone_dyadic(self, bits_a, bits_b):
        # dyadic cell volume, so sums are exact in binary floating point
        sp = build_grid_box(1, 64, [0.0, 1.0])
        a = np.array([(bits_a >> i) & 1 == 1 for i in range(64)])
        b = np.array([(bits_b >> i) & 1 == 1 for i in range(64)]) & ~a
        ma = measure(sp, SetIndicator.from_mask(sp, a))
        mb = measure(sp, SetIndicator.from_mask(sp, b))
        mab = measure(sp, SetIndicator.from_mask(sp, a | b))
        assert mab == ma + mb
        assert mab >= ma


class TestAudit:
    @pytest.mark.parametrize("fixture", ["unit_interval_1001", "circle_1024",
                                         "fat_cantor_4001", "box2_256"])
    def test_triangle_audit_clean(self, fixture, request):
        sp = request.getfixturevalue(fixture)
        assert audit_triangle(sp, 10_000, seed=0) == 0


class TestTableRoundTrip:
    def test_export_import(self, tmp_path):
        sp = build_grid_box(2, 8, [[0, 1], [0, 1]])
        ind = indicator_box(sp, [0.0, 0.0], [0.5, 0.5])
        field = space_core.ScalarField.from_values(sp, sp.coords[:, 0])
        path = tmp_path / "table.csv"
        space_core.export_table(sp, path, sets={"A": ind},
                                fields={"f": field})
        sp2, extras = space_core.import_table(path)
        assert sp2.n == sp.n
        assert np.allclose(sp2.coords, sp.coords)
        assert np.allclose(sp2.weights, sp.weights)
        assert sp2.resolution_h == sp.resolution_h
        assert np.array_equal(extras["A"].marks, ind.marks)
        assert np.allclose(extras["f"].values, field.values)


class TestGraph:
    def test_path_metric(self):
        adj = np.zeros((4, 4))
        for i in range(3):
            adj[i, i + 1] = adj[i + 1, i] = 1.0
        sp = space_core.build_from_graph(adj, np.ones(4))
        assert sp.dmat[0, 3] == 3.0
        assert sp.length_space_flag

    def test_disconnected_rejected(self):
        adj = np.zeros((3, 3))
        adj[0, 1] = adj[1, 0] = 1.0
        with pytest.raises(MetricAxiomError, match="connected"):
            space_core.build_from_graph(adj, np.ones(3))
