import math
import numpy as np
import pytest
from leslie import fields


def test_grid_rejects_odd_or_small():
    with pytest.raises(ValueError, match="n_points"):
        fields.Grid(15, 1.0)
    with pytest.raises(ValueError, match="n_points"):
        fields.Grid(6, 1.0)
    with pytest.raises(ValueError, match="length"):
        fields.Grid(16, 0.0)
    with pytest.raises(ValueError, match="length"):
        fields.Grid(16, -1.0)
    with pytest.raises(ValueError, match="n_points"):
        fields.Grid(0, 1.0)


def test_grids_compare_by_size():
    assert fields.Grid(16, 2.0) == fields.Grid(16, 2.0)
    assert fields.Grid(16, 2.0) != fields.Grid(32, 2.0)


def test_grid_wavenumbers_zero_nyquist(grid):
    assert grid.k1.shape == (32, 1)
    assert grid.k2.shape == (1, 17)
    assert grid.k1[16, 0] == 0
    assert grid.k2[0, 16] == 0
    assert grid.k1[1, 0] == pytest.approx(1.0)


class TestDerivatives:
    def test_diff_of_sine(self, grid):
        (x1, x2) = grid.coordinates()
        values = np.sin(3 * x1) * np.cos(2 * x2)
        assert fields.diff(values, grid, 1) == pytest.approx(
            3 * np.cos(3 * x1) * np.cos(2 * x2), abs=1e-12
        )
        assert fields.diff(values, grid, 2) == pytest.approx(
            -2 * np.sin(3 * x1) * np.sin(2 * x2), abs=1e-12
        )

    def test_diff_bad_axis(self, grid):
        with pytest.raises(ValueError, match="axis"):
            fields.diff(np.zeros(grid.shape), grid, 3)

    def test_gradient_leading_axis(self, grid):
        (x1, _) = grid.coordinates()
        values = np.stack([np.sin(x1), np.cos(x1), np.zeros_like(x1)])
        gradient = fields.gradient(values, grid)
        assert gradient.shape == (2, 3) + grid.shape
        assert gradient[0, 0] == pytest.approx(np.cos(x1), abs=1e-12)
        assert gradient[1] == pytest.approx(0, abs=1e-12)

    def test_laplacian_eigenfunction(self, grid):
        (x1, x2) = grid.coordinates()
        values = np.cos(2 * x1 + 3 * x2)
        assert fields.laplacian(values, grid) == pytest.approx(-13 * values, abs=1e-11)

    def test_curl_of_gradient_vanishes(self, grid, rng):
        potential = fields.dealias(rng.standard_normal(grid.shape), grid)
        gradient = fields.gradient(potential, grid)
        vector = np.stack([gradient[0], gradient[1], np.zeros(grid.shape)])
        assert fields.sup_norm(fields.curl3(vector, grid)) < 1e-10

    def test_tensor_divergence_first_index(self, grid):
        (x1, _) = grid.coordinates()
        tensor = np.zeros((3, 3) + grid.shape)
        tensor[0, 1] = np.sin(x1)
        divergence = fields.tensor_divergence(tensor, grid)
        assert divergence[1] == pytest.approx(np.cos(x1), abs=1e-12)
        assert divergence[0] == pytest.approx(0, abs=1e-12)


class TestLeray:
    def test_projection_is_solenoidal(self, grid, rng):
        v = rng.standard_normal((2,) + grid.shape)
        projected = fields.leray_project(v, grid)
        assert fields.sup_norm(fields.divergence2(projected, grid)) < 1e-10

    def test_projection_is_idempotent(self, grid, rng):
        projected = fields.leray_project(rng.standard_normal((2,) + grid.shape), grid)
        assert fields.leray_project(projected, grid) == pytest.approx(projected, abs=1e-12)

    def test_gradient_is_removed(self, grid):
        (x1, x2) = grid.coordinates()
        potential = np.sin(x1) * np.sin(2 * x2)
        gradient = fields.gradient(potential, grid)
        assert fields.sup_norm(fields.leray_project(gradient, grid)) < 1e-12

    def test_mean_is_kept(self, grid):
        v = np.ones((2,) + grid.shape)
        assert fields.leray_project(v, grid) == pytest.approx(v)


def test_poisson_solve(grid):
    (x1, x2) = grid.coordinates()
    solution = np.cos(x1) * np.sin(3 * x2)
    recovered = fields.poisson_solve(fields.laplacian(solution, grid), grid)
    assert recovered == pytest.approx(solution, abs=1e-12)


class TestMollifier:
    def test_cutoff_profile(self):
        assert fields.cutoff_profile([0.0, 1.0, 1.5, 2.0, 3.0]) == pytest.approx(
            [1.0, 1.0, 0.5, 0.0, 0.0]
        )

    def test_identity_for_large_cutoff(self, grid, rng):
        values = rng.standard_normal(grid.shape)
        cutoff = grid.n_points / math.sqrt(2)
        assert fields.mollify(values, grid, cutoff) == pytest.approx(values, abs=1e-12)

    def test_removes_high_modes(self, grid):
        (x1, _) = grid.coordinates()
        assert fields.sup_norm(fields.mollify(np.sin(9 * x1), grid, 4)) < 1e-12
        assert fields.mollify(np.sin(3 * x1), grid, 4) == pytest.approx(
            np.sin(3 * x1), abs=1e-12
        )

    def test_cutoff_at_least_one(self, grid):
        with pytest.raises(ValueError, match="cutoff"):
            fields.mollifier_symbol(grid, 0.5)


def test_dealias_keeps_low_band(grid):
    (x1, x2) = grid.coordinates()
    low = np.cos(10 * x1) * np.sin(5 * x2)
    assert fields.dealias(low, grid) == pytest.approx(low, abs=1e-12)
    assert fields.sup_norm(fields.dealias(np.cos(11 * x1), grid)) < 1e-12


def test_parseval(grid, rng):
    values = rng.standard_normal((2,) + grid.shape)
    assert fields.spectral_l2_norm_squared(values, grid) == pytest.approx(
        fields.l2_norm_squared(values, grid), rel=1e-12
    )


def test_integrate_constant(grid):
    assert fields.integrate(np.ones(grid.shape), grid) == pytest.approx(4 * math.pi**2)


class TestBalls:
    def test_ball_integral_area(self, fine_grid):
        radius = fine_grid.length / 8
        area = fields.ball_integral(np.ones(fine_grid.shape), fine_grid, (1.0, 1.0), radius)
        assert area == pytest.approx(math.pi * radius**2, rel=0.05)

    def test_ball_wraps_around(self, grid):
        mask = fields.ball_mask(grid, (0.0, 0.0), 1.0)
        assert mask[0, 0] and mask[-1, 0] and mask[0, -1]

    def test_radius_limit(self, grid):
        with pytest.raises(fields.RadiusTooLarge):
            fields.ball_mask(grid, (0.0, 0.0), grid.length)

    def test_ball_integrals_match_direct(self, grid, rng):
        values = rng.random(grid.shape)
        radius = 4.5 * grid.spacing
        integrals = fields.ball_integrals(values, grid, radius)
        for (i1, i2) in [(0, 0), (5, 17), (31, 2)]:
            center = (i1 * grid.spacing, i2 * grid.spacing)
            assert integrals[i1, i2] == pytest.approx(
                fields.ball_integral(values, grid, center, radius), rel=1e-10
            )


class TestField:
    def test_director_must_be_unit(self, grid):
        with pytest.raises(fields.InvalidField, match="unit length"):
            fields.Field(grid, 2 * np.ones((3,) + grid.shape), tag="director")

    def test_velocity_must_be_solenoidal(self, grid):
        (x1, _) = grid.coordinates()
        v = np.stack([np.sin(x1), np.zeros_like(x1)])
        with pytest.raises(fields.InvalidField, match="divergence"):
            fields.Field(grid, v, tag="velocity")

    def test_shape_mismatch(self, grid):
        with pytest.raises(fields.InvalidField, match="samples of shape"):
            fields.Field(grid, np.zeros((2, 8, 8)))

    def test_non_finite(self, grid):
        values = np.zeros(grid.shape)
        values[3, 4] = np.nan
        with pytest.raises(fields.InvalidField, match="finite"):
            fields.Field(grid, values)

    def test_values_are_read_only(self, grid):
        field = fields.Field(grid, np.zeros((2,) + grid.shape), tag="velocity")
        with pytest.raises(ValueError):
            field.values[0, 0, 0] = 1.0

    def test_components(self, grid):
        assert fields.Field(grid, np.zeros(grid.shape)).components == 1
        assert fields.Field(grid, np.zeros((3,) + grid.shape)).components == 3


class TestSnapshots:
    def test_write_and_read(self, tmp_path, grid, rng):
        field = fields.Field(grid, rng.standard_normal((3,) + grid.shape))
        path = tmp_path / "director.el2d"
        fields.write_snapshot(path, field, 0.25)
        (loaded, t) = fields.read_snapshot(path)
        assert t == 0.25
        assert loaded.grid == grid
        assert np.array_equal(loaded.values, field.values)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.el2d"
        path.write_bytes(b"XXXX 16 1.0 3 0.0\n")
        with pytest.raises(fields.SnapshotFormatError, match="bad.el2d"):
            fields.read_snapshot(path)

    def test_truncated(self, tmp_path, grid):
        path = tmp_path / "short.el2d"
        path.write_bytes(b"EL2D 32 6.283185307179586 3 0.0\n" + bytes(16))
        with pytest.raises(fields.SnapshotFormatError):
            fields.read_snapshot(path)
