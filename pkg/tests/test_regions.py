import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from driftbench.exceptions import DimensionError, EmptyInputError, UnsupportedDimensionError
from driftbench.experiments import CATALOG
from driftbench.gauss import DriftTransform, GaussianSpec, apply_drift
from driftbench.regions import (
    Region,
    Taxonomy,
    assign_regions,
    bin_by_quartile,
    density_ratio,
    hypersurface,
    log_density_ratio,
    quartile_summary,
    surface_coefficients,
)

STD2 = GaussianSpec.standard(2)
FIG2 = ("Exp1.1", "Exp1.3", "Exp1.5", "Exp1.7", "Exp1.9", "Exp1.11")


def drifted(shift=(0, 0), scale=(1, 1), angle=None):
    return apply_drift(STD2, DriftTransform(np.array(shift, float), np.array(scale, float), angle))


def test_spec(exp_id):
    return CATALOG[exp_id].test_density


test_spec.__test__ = False


class TestDensityRatio:
    def test_on_exp11_plane(self):
        t = test_spec("Exp1.1")
        for y in (-3.0, 0.0, 0.7, 5.0):
            assert density_ratio(STD2, t, [1.5, y]) == pytest.approx(1.0, abs=1e-12)

    def test_hand_value(self):
        assert density_ratio(STD2, test_spec("Exp1.1"), [1, 0]) == pytest.approx(math.exp(-1.5), rel=1e-12)

    def test_identical(self, rng):
        r = density_ratio(STD2, STD2, rng.normal(size=(10, 2)))
        np.testing.assert_array_equal(r, np.ones(10))

    def test_large_ratios_stay_finite(self):
        r = density_ratio(STD2, test_spec("Exp1.11"), [[12.0, -6.0]])
        assert np.isfinite(r).all() and r[0] > 1e12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            density_ratio(STD2, GaussianSpec.standard(4), [0, 0])


class TestAssignRegions:
    def test_exp11_examples(self):
        part = assign_regions(STD2, test_spec("Exp1.1"), np.array([[1.0, 0], [2.0, 0]]))
        assert list(part.regions) == [Region.R1, Region.R2]

    def test_exp17_origin(self):
        part = assign_regions(STD2, test_spec("Exp1.7"), np.array([[0.0, 0.0]]))
        assert part.regions[0] == Region.R1
        assert part.ratios[0] == pytest.approx(1 / math.sqrt(6), rel=1e-12)

    def test_identical_densities_all_r1(self, rng):
        part = assign_regions(STD2, STD2, rng.normal(size=(100, 2)))
        assert np.all(part.regions == Region.R1)
        assert part.counts() == {"R1": 100, "R2": 0}

    def test_boundary_tie_goes_to_r1(self):
        # x = 1.5 makes the quadratic form exactly zero for Exp1.1
        t = test_spec("Exp1.1")
        pts = np.array([[1.5, 0.0], [1.5, 2.0], [1.5, -1.0]])
        assert np.all(hypersurface(STD2, t, pts) == 0.0)
        first = assign_regions(STD2, t, pts).regions
        assert np.all(first == Region.R1)
        np.testing.assert_array_equal(first, assign_regions(STD2, t, pts).regions)

    def test_hypersurface_is_minus_twice_log_ratio(self, rng):
        t = test_spec("Exp1.11")
        X = rng.normal(size=(100, 2)) * 3
        np.testing.assert_allclose(hypersurface(STD2, t, X), -2 * log_density_ratio(STD2, t, X), atol=1e-10)

    @pytest.mark.parametrize("exp_id", sorted(CATALOG))
    def test_oracle_equivalence(self, exp_id, rng):
        spec = CATALOG[exp_id]
        X = np.vstack([rng.normal(size=(5000, spec.dim)),
                       rng.multivariate_normal(spec.test_density.mean, spec.test_density.cov, 5000)])
        part = assign_regions(spec.train_density, spec.test_density, X)
        lr = log_density_ratio(spec.train_density, spec.test_density, X)
        expected = np.where(lr <= 0, Region.R1, Region.R2)
        off_boundary = np.abs(lr) > 1e-9
        np.testing.assert_array_equal(part.regions[off_boundary], expected[off_boundary])
        assert np.all(part.ratios > 0) and np.all(np.isfinite(part.ratios))

    def test_mask(self):
        part = assign_regions(STD2, test_spec("Exp1.1"), np.array([[1.0, 0], [2.0, 0], [0.0, 0]]))
        np.testing.assert_array_equal(part.mask(Region.R1), [True, False, True])
        assert len(part) == 3


class TestSurface:
    def normalized(self, vec):
        v = np.asarray(vec, float)
        return v / v[np.flatnonzero(np.abs(v) > 1e-12)[0]]

    def test_exp17(self):
        s = surface_coefficients(test_spec("Exp1.7"))
        ref = [-1 / 3, -1 / 4, 0, 0, 0, math.log(6) / 2]
        np.testing.assert_allclose(s.normalized(), self.normalized(ref), atol=1e-12)
        assert s.taxonomy is Taxonomy.ELLIPTIC_CYLINDER
        a2, b2 = s.semi_axes_sq
        assert a2 == pytest.approx(3 * math.log(6) / 2, rel=1e-12)
        assert b2 == pytest.approx(2 * math.log(6), rel=1e-12)

    def test_exp13(self):
        s = surface_coefficients(test_spec("Exp1.3"))
        np.testing.assert_allclose(s.normalized(), self.normalized([0, 0, -3, -1, 0, 5]), atol=1e-12)
        assert s.taxonomy is Taxonomy.VERTICAL_PLANE

    def test_exp19(self):
        s = surface_coefficients(test_spec("Exp1.9"))
        ref = [-1 / 3, -1 / 4, -1, -1 / 2, 0, math.log(6) / 2 + 7 / 4]
        np.testing.assert_allclose(s.normalized(), self.normalized(ref), atol=1e-12)
        assert s.taxonomy is Taxonomy.SHIFTED_CYLINDER
        np.testing.assert_allclose(s.center, (-1.5, -1.0), atol=1e-12)

    def test_constants(self):
        s = surface_coefficients(test_spec("Exp1.11"))
        rho = 0.5 / 3.5
        assert s.b == pytest.approx(1 / (2 * (1 - rho**2)), rel=1e-14)
        assert s.a == pytest.approx(math.log(1 / (3.5 * math.sqrt(1 - rho**2))), rel=1e-14)
        assert s.taxonomy is Taxonomy.GENERAL

    @pytest.mark.parametrize("exp_id", FIG2)
    def test_residual_is_minus_log_ratio(self, exp_id, rng):
        t = test_spec(exp_id)
        s = surface_coefficients(t)
        X = rng.normal(size=(200, 2)) * 3
        np.testing.assert_allclose(s.residual(X[:, 0], X[:, 1]), -log_density_ratio(STD2, t, X), atol=1e-10)

    @pytest.mark.parametrize("exp_id", FIG2)
    def test_surface_points_have_unit_ratio(self, exp_id):
        t = test_spec(exp_id)
        s = surface_coefficients(t)
        x2, y2, x1, y1, xy, const = s.equation_vector()
        pts = []
        for x in np.linspace(-6, 6, 61):
            # quadratic in y for fixed x
            coeffs = [y2, y1 + xy * x, x2 * x * x + x1 * x + const]
            if abs(coeffs[0]) < 1e-14 and abs(coeffs[1]) < 1e-14:
                continue
            for root in np.roots(coeffs):
                if abs(root.imag) < 1e-12:
                    pts.append((x, root.real))
        if abs(y2) < 1e-14 and abs(y1) < 1e-14 and abs(xy) < 1e-14:
            # surface independent of y: solve for x
            for root in np.roots([x2, x1, const]):
                if abs(root.imag) < 1e-12:
                    pts.extend((root.real, y) for y in np.linspace(-4, 4, 9))
        pts = np.array(pts)
        assert len(pts) > 0
        assert np.all(np.abs(s.residual(pts[:, 0], pts[:, 1])) < 1e-9)
        np.testing.assert_allclose(density_ratio(STD2, t, pts), 1.0, atol=1e-8)

    def test_one_axis_translation_plane(self):
        s = surface_coefficients(drifted(shift=(5, 0)))
        assert s.taxonomy is Taxonomy.AXIS_PARALLEL_PLANE
        for y in (-2, 0, 3):
            assert s.residual(2.5, y) == pytest.approx(0.0, abs=1e-12)

    def test_parallel_planes(self):
        sigma2 = 2.0
        s = surface_coefficients(drifted(scale=(1, sigma2)))
        assert s.taxonomy is Taxonomy.PARALLEL_PLANES
        y = math.sqrt(2 * sigma2**2 * math.log(sigma2) / (sigma2**2 - 1))
        for x in (-1, 0, 4):
            assert s.residual(x, y) == pytest.approx(0.0, abs=1e-12)
            assert s.residual(x, -y) == pytest.approx(0.0, abs=1e-12)

    def test_right_circular_cylinder(self):
        s = surface_coefficients(drifted(scale=(2, 2)))
        assert s.taxonomy is Taxonomy.RIGHT_CIRCULAR_CYLINDER
        a2, b2 = s.semi_axes_sq
        assert a2 == pytest.approx(b2)
        for theta in np.linspace(0, 2 * np.pi, 7):
            r = math.sqrt(a2)
            assert s.residual(r * math.cos(theta), r * math.sin(theta)) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_4d(self):
        with pytest.raises(UnsupportedDimensionError):
            surface_coefficients(GaussianSpec.standard(4))

    def test_rejects_degenerate_correlation(self):
        from types import SimpleNamespace

        with pytest.raises(ValueError):
            GaussianSpec(np.zeros(2), np.array([[1.0, 1.0], [1.0, 1.0]]))
        # a valid spec can never reach |rho| = 1, so probe the guard directly
        fake = SimpleNamespace(dim=2, mean=np.zeros(2), cov=np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(ValueError):
            surface_coefficients(fake)

    def test_equation_text(self):
        s = surface_coefficients(test_spec("Exp1.1"))
        assert s.equation(normalized=True) == "S: x - 3/2 = 0"
        assert "equation" in s.to_dict()


class TestQuartiles:
    def test_five_points(self):
        assert quartile_summary([1, 2, 3, 4, 5]) == (1, 2, 3, 4, 5)

    def test_constant(self):
        assert quartile_summary([1, 1, 1, 1]) == (1, 1, 1, 1, 1)

    def test_linear_interpolation(self):
        # closest-rank interpolation: position 0.25 * (n - 1)
        assert quartile_summary([1, 2, 3, 4]) == (1, 1.75, 2.5, 3.25, 4)

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            quartile_summary([])

    def test_bins_example(self):
        v = [1, 2, 3, 4, 5]
        assert list(bin_by_quartile(v, quartile_summary(v))) == [0, 0, 1, 2, 3]

    def test_constant_all_first_bin(self):
        v = [2.0] * 6
        assert list(bin_by_quartile(v, quartile_summary(v))) == [0] * 6

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            bin_by_quartile([0.5, 10], (1, 2, 3, 4, 5))

    @given(st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=200), st.randoms(use_true_random=False))
    def test_permutation_invariant_and_partition(self, values, rnd):
        q = quartile_summary(values)
        shuffled = list(values)
        rnd.shuffle(shuffled)
        assert quartile_summary(shuffled) == q
        assert q[0] <= q[1] <= q[2] <= q[3] <= q[4]
        bins = bin_by_quartile(values, q)
        assert np.bincount(bins, minlength=4).sum() == len(values)

    @given(st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=100), st.floats(0.01, 100))
    def test_scales_with_inputs(self, values, c):
        q = np.array(quartile_summary(values))
        qc = np.array(quartile_summary(np.array(values) * c))
        np.testing.assert_allclose(qc, c * q, rtol=1e-12)
