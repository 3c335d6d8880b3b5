import numpy as np
import pytest

from mmsgeo import space_core
from mmsgeo.minkowski import (
    ContentParams,
    RelaxedParams,
    check_quotient_chain,
    check_semigroup_inclusion,
    content,
    distance_to_set,
    enlarge,
    profile,
    relaxed_content,
)
from mmsgeo.space_core import (
    ResolutionError,
    SetIndicator,
    full_indicator,
    indicator_ball,
    indicator_box,
    measure,
)


class TestDistanceField:
    def test_point_source_exact(self, unit_interval_1001):
        sp = unit_interval_1001
        x = sp.coords[:, 0]
        marks = np.abs(x - 0.5) < sp.cell_sizes[0] / 4
        d = distance_to_set(sp, SetIndicator.from_mask(sp, marks))
        assert np.abs(d.values - np.abs(x - 0.5)).max() < 1e-12

    def test_full_space_zero(self, unit_interval_1001):
        d = distance_to_set(unit_interval_1001,
                            full_indicator(unit_interval_1001))
        assert d.values.max() == 0.0

    def test_circle_point_max(self, circle_1024):
        sp = circle_1024
        marks = np.zeros(sp.n, dtype=bool)
        marks[0] = True
        d = distance_to_set(sp, SetIndicator.from_mask(sp, marks))
        assert abs(d.values.max() - np.pi) <= sp.resolution_h * 2

    def test_one_lipschitz(self, box2_256):
        sp = box2_256
        A = indicator_ball(sp, [0.3, -0.2], 0.5)
        d = distance_to_set(sp, A).values
        rng = np.random.default_rng(0)
        i = rng.integers(0, sp.n, 4000)
        j = rng.integers(0, sp.n, 4000)
        dij = sp.pair_distances(i, j)
        ok = dij > 0
        assert (np.abs(d[i] - d[j])[ok] <= dij[ok] * (1 + 1e-12)).all()

    def test_empty_set_rejected(self, unit_interval_1001):
        empty = SetIndicator.from_mask(
            unit_interval_1001, np.zeros(unit_interval_1001.n, dtype=bool))
        with pytest.raises(ValueError, match="empty"):
            distance_to_set(unit_interval_1001, empty)


class TestEnlarge:
    def test_interval_growth(self, unit_interval_1001):
        sp = unit_interval_1001
        A = indicator_box(sp, 0.4, 0.6)
        big = enlarge(sp, A, 0.1)
        assert abs(measure(sp, big) - 0.4) <= 2 * sp.resolution_h
        assert np.all(big.marks[A.marks])

    def test_beyond_diameter_full(self, unit_interval_1001):
        sp = unit_interval_1001
        A = indicator_box(sp, 0.4, 0.6)
        assert enlarge(sp, A, 5.0).marks.all()

    def test_disk_area(self):
        sp = space_core.build_grid_box(2, 512, [[-1, 1], [-1, 1]])
        A = indicator_ball(sp, [0.0, 0.0], 0.5)
        m = measure(sp, enlarge(sp, A, 0.1))
        assert abs(m - np.pi * 0.6 ** 2) <= 0.02 * np.pi * 0.6 ** 2

    def test_nonpositive_radius(self, unit_interval_1001):
        A = indicator_box(unit_interval_1001, 0.4, 0.6)
        with pytest.raises(ValueError):
            enlarge(unit_interval_1001, A, 0.0)

    def test_closure_invariance(self, box2_256):
        sp = box2_256
        A = indicator_ball(sp, [0.0, 0.0], 0.7)
        d = sp.dist_to_marks(A.marks)
        closure = SetIndicator.from_mask(sp, d <= 0.0)
        assert np.array_equal(enlarge(sp, A, 0.13).marks,
                              enlarge(sp, closure, 0.13).marks)


class TestProfile:
    def test_interval_masses(self, unit_interval_1001):
        sp = unit_interval_1001
        A = indicator_box(sp, 0.4, 0.6)
        prof = profile(sp, A, [0.05, 0.10, 0.15])
        want = np.array([0.3, 0.4, 0.5])
        assert np.abs(prof.masses - want).max() <= 2 * sp.resolution_h

    def test_full_space_constant(self, unit_interval_1001):
        sp = unit_interval_1001
        prof = profile(sp, full_indicator(sp), [0.01, 0.02, 0.04])
        assert np.allclose(prof.masses, sp.total_mass)

    def test_monotone_exact(self, box2_256):
        sp = box2_256
        A = indicator_ball(sp, [0.5, 0.5], 0.4)
        prof = profile(sp, A, np.geomspace(0.02, 1.0, 24))
        assert np.all(np.diff(prof.masses) >= 0)
        assert np.all(prof.masses >= prof.base_mass)

    def test_below_floor_rejected(self, unit_interval_1001):
        sp = unit_interval_1001
        A = indicator_box(sp, 0.4, 0.6)
        with pytest.raises(ResolutionError):
            profile(sp, A, [sp.resolution_h * 0.5, 0.01])


class TestContent:
    def test_interval_both_kinds(self, unit_interval_1001):
        sp = unit_interval_1001
        A = indicator_box(sp, 0.4, 0.6)
        tol = 5.0 * sp.resolution_h / (8.0 * sp.resolution_h)
        for kind in ("lower", "upper"):
            est = content(sp, A, kind=kind)
            assert abs(est.extrapolated - 2.0) <= tol
            assert est.inf_quotient <= est.sup_quotient
            assert est.inf_quotient <= est.extrapolated + est.band

    def test_disk_circumference(self, box2_512):
        A = indicator_ball(box2_512, [0.0, 0.0], 1.0)
        est = content(box2_512, A, kind="lower")
        assert abs(est.extrapolated - 2 * np.pi) <= 0.03 * 2 * np.pi
        assert not est.diverging

    def test_scattered_diverges(self, unit_interval_1001):
        sp = unit_interval_1001
        inside = indicator_box(sp, 0.4, 0.6).marks
        marks = inside & (np.arange(sp.n) % 2 == 0)
        est = content(sp, SetIndicator.from_mask(sp, marks), kind="lower")
        assert est.diverging
        # quotient is pinned near (covered length) / r at the window floor
        assert est.sup_quotient > 1.0 / (2 * est.window[0])

    def test_window_too_narrow(self, unit_interval_1001):
        sp = unit_interval_1001
        A = indicator_box(sp, 0.4, 0.6)
        with pytest.raises(ValueError, match="narrow"):
            content(sp, A, window=(0.01, 0.011))

    def test_inf_below_sup_everywhere(self, box2_256):
        sp = box2_256
        for radius in (0.3, 0.7, 1.1):
            A = indicator_ball(sp, [0.1, 0.2], radius)
            lo = content(sp, A, kind="lower")
            hi = content(sp, A, kind="upper")
            assert lo.inf_quotient <= hi.sup_quotient
            assert lo.extrapolated <= hi.extrapolated + 1e-12


class TestRelaxed:
    def test_disk_no_improvement(self, box2_512):
        A = indicator_ball(box2_512, [0.0, 0.0], 1.0)
        rel = relaxed_content(box2_512, A)
        lo = content(box2_512, A, kind="lower")
        assert abs(rel.extrapolated - 2 * np.pi) <= 0.03 * 2 * np.pi
        assert rel.extrapolated <= lo.extrapolated + rel.band + lo.band
        assert rel.witness_params is not None

    def test_scattered_patch_repaired(self):
        sp = space_core.build_grid_box(2, 512, [[-1, 1], [-1, 1]])
        disk = indicator_ball(sp, [-0.3, -0.3], 0.5)
        patch = indicator_box(sp, [0.7, 0.7], [0.9, 0.9]).marks
        cols = (np.arange(sp.n) // sp.grid_shape[1]) % 2 == 0
        marks = disk.marks | (patch & cols)
        A = SetIndicator.from_mask(sp, marks)
        raw = content(sp, A, kind="lower")
        assert raw.diverging
        rel = relaxed_content(sp, A)
        oracle = 2 * np.pi * 0.5 + 4 * 0.2
        assert abs(rel.extrapolated - oracle) <= 0.15 * oracle
        assert rel.extrapolated < raw.sup_quotient
        # witness is a filled set: its own content no longer diverges
        wit = content(sp, rel.witness, kind="lower")
        assert not wit.diverging

    def test_full_space_zero(self, unit_interval_1001):
        sp = unit_interval_1001
        rel = relaxed_content(sp, full_indicator(sp))
        assert abs(rel.extrapolated) < 1e-9

    def test_l1_budget_respected(self, box2_256):
        sp = box2_256
        A = indicator_ball(sp, [0.0, 0.0], 0.8)
        params = RelaxedParams(l1_budget=1e-12)
        rel = relaxed_content(sp, A, params)
        # only the identity perturbation fits the budget
        assert rel.witness_params == (0.0, 0.0, 1.0)


class TestSemigroupInclusion:
    def test_square(self, unit_square_128):
        sp = unit_square_128
        A = indicator_ball(sp, [0.4, 0.4], 0.2)
        rep = check_semigroup_inclusion(sp, A, 0.05, 0.05)
        assert rep.passed

    def test_circle(self, circle_1024):
        sp = circle_1024
        marks = np.zeros(sp.n, dtype=bool)
        marks[: sp.n // 4] = True
        rep = check_semigroup_inclusion(sp, SetIndicator.from_mask(sp, marks),
                                        0.01, 0.2)
        assert rep.passed

    def test_three_point_strict(self, three_point_space):
        sp = three_point_space
        A = SetIndicator.from_mask(sp, [True, False, False])
        rep = check_semigroup_inclusion(sp, A, 2.0, 2.0)
        assert rep.passed
        assert rep.meta["strict"]
        # exhaustive evaluation: (A^2)^2 = {0} while A^4 is everything
        assert rep.meta["iterated_count"] == 1
        assert rep.meta["summed_count"] == 3


class TestQuotientChain:
    @pytest.mark.parametrize("case", ["disk", "interval", "arc"])
    def test_zero_violations(self, case, box2_256, unit_interval_1001,
                             circle_1024):
        if case == "disk":
            sp, A = box2_256, indicator_ball(box2_256, [0.0, 0.0], 1.0)
        elif case == "interval":
            sp = unit_interval_1001
            A = indicator_box(sp, 0.4, 0.6)
        else:
            sp = circle_1024
            marks = np.zeros(sp.n, dtype=bool)
            marks[: sp.n // 3] = True
            A = SetIndicator.from_mask(sp, marks)
        r_values = np.geomspace(8 * sp.resolution_h, 0.15, 5)
        rep = check_quotient_chain(sp, A, r_values)
        assert rep.passed
