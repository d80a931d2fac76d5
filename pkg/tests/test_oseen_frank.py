import numpy as np
import pytest
from leslie import coefficients, fields, oseen_frank
from leslie.oseen_frank import ElasticState
from leslie.verify import helpers


def _in_plane(grid, theta):
    return np.stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)])


def _relative_l2(difference, reference, grid):
    return np.sqrt(
        fields.l2_norm_squared(difference, grid) / fields.l2_norm_squared(reference, grid)
    )


class TestConstantDirector:
    def test_everything_vanishes(self, grid, frank):
        n = np.zeros((3,) + grid.shape)
        n[2] = 1.0
        state = ElasticState(grid, n)
        assert fields.sup_norm(oseen_frank.density(state, frank)) == 0
        assert fields.sup_norm(oseen_frank.w_p(state, frank)) == 0
        assert fields.sup_norm(oseen_frank.molecular_field(state, frank)) == 0
        assert fields.sup_norm(oseen_frank.molecular_field_oracle(state, frank)) == 0
        assert fields.sup_norm(oseen_frank.wp_dot_n_residual(state, frank)) == 0


def test_in_plane_density_closed_form(fine_grid, frank):
    (x1, _) = fine_grid.coordinates()
    theta = 0.7 * np.sin(x1)
    theta_prime = 0.7 * np.cos(x1)
    state = ElasticState(fine_grid, _in_plane(fine_grid, theta))
    expected = (
        frank.a * theta_prime**2
        + (frank.k1 - frank.a) * theta_prime**2 * np.sin(theta) ** 2
        + (frank.k2 - frank.a) * theta_prime**2 * np.cos(theta) ** 2
    )
    assert oseen_frank.density(state, frank) == pytest.approx(expected, abs=1e-9)
    assert fields.sup_norm(state.twist) < 1e-9


def test_in_plane_derivatives(fine_grid):
    (x1, _) = fine_grid.coordinates()
    theta = 0.7 * np.sin(x1)
    theta_prime = 0.7 * np.cos(x1)
    state = ElasticState(fine_grid, _in_plane(fine_grid, theta))
    assert state.div_n == pytest.approx(-theta_prime * np.sin(theta), abs=1e-9)
    assert state.curl_n[2] == pytest.approx(theta_prime * np.cos(theta), abs=1e-9)
    assert fields.sup_norm(state.curl_n[:2]) < 1e-9


class TestEqualConstants:
    def test_density_is_dirichlet(self, smooth_director, fine_grid):
        k = coefficients.ElasticConstants.equal(1.3)
        state = ElasticState(fine_grid, smooth_director)
        dirichlet = 1.3 * np.sum(state.grad_n**2, axis=(0, 1))
        assert oseen_frank.density(state, k) == pytest.approx(dirichlet, rel=1e-12, abs=1e-14)

    def test_molecular_field_is_laplacian(self, smooth_director, fine_grid):
        k = coefficients.ElasticConstants.equal(1.3)
        state = ElasticState(fine_grid, smooth_director)
        h = oseen_frank.molecular_field(state, k)
        reduced = 2 * 1.3 * fields.laplacian(smooth_director, fine_grid)
        assert fields.sup_norm(h - reduced) <= 1e-10

    def test_w_n_vanishes_when_k2_equals_k3(self, smooth_director, fine_grid):
        k = coefficients.ElasticConstants(1.0, 0.8, 0.8)
        state = ElasticState(fine_grid, smooth_director)
        assert fields.sup_norm(oseen_frank.w_n(state, k)) == 0


def test_oracle_agrees(smooth_director, fine_grid, frank):
    state = ElasticState(fine_grid, smooth_director)
    h = oseen_frank.molecular_field(state, frank)
    oracle = oseen_frank.molecular_field_oracle(state, frank)
    assert _relative_l2(h - oracle, oracle, fine_grid) <= 1e-6


def test_wp_dot_n_identity(resolved_director, resolved_grid, frank):
    state = ElasticState(resolved_grid, resolved_director)
    residual = fields.sup_norm(oseen_frank.wp_dot_n_residual(state, frank))
    scale = 1 + fields.sup_norm(np.sum(state.grad_n**2, axis=(0, 1)))
    assert residual <= 1e-6 * scale


def test_unit_gradient_defect(resolved_director, resolved_grid):
    assert ElasticState(resolved_grid, resolved_director).unit_gradient_defect() < 1e-8


def test_polynomial_density_matches_on_unit_fields(smooth_director, fine_grid, frank):
    state = ElasticState(fine_grid, smooth_director)
    polynomial = oseen_frank.frank_density(state.n, state.grad_n, frank)
    assert polynomial == pytest.approx(oseen_frank.density(state, frank), rel=1e-10, abs=1e-12)


def test_energy_bounded_below_by_dirichlet(smooth_director, fine_grid, frank):
    state = ElasticState(fine_grid, smooth_director)
    dirichlet = frank.a * fields.l2_norm_squared(state.grad_n, fine_grid)
    assert oseen_frank.elastic_energy(state, frank) >= dirichlet > 0


def test_w_n_matches_finite_difference(smooth_director, fine_grid, frank):
    state = ElasticState(fine_grid, smooth_director)
    grad_n = state.grad_n
    step = 1e-6
    for component in range(3):
        offset = np.zeros((3,) + fine_grid.shape)
        offset[component] = step
        forward = oseen_frank.frank_density(smooth_director + offset, grad_n, frank)
        backward = oseen_frank.frank_density(smooth_director - offset, grad_n, frank)
        derivative = (forward - backward) / (2 * step)
        assert derivative == pytest.approx(
            oseen_frank.w_n(state, frank)[component], abs=1e-5
        )


def test_regularized_field_matches_on_unit_fields(smooth_director, fine_grid, frank):
    state = ElasticState(fine_grid, smooth_director)
    h = oseen_frank.molecular_field(state, frank)
    regularized = oseen_frank.molecular_field_regularized(state, frank)
    assert fields.sup_norm(regularized - h) <= 1e-10 * (1 + fields.sup_norm(h))


def test_regularized_field_differs_off_the_sphere(smooth_director, fine_grid, frank):
    state = ElasticState(fine_grid, 1.5 * smooth_director)
    h = oseen_frank.molecular_field(state, frank)
    regularized = oseen_frank.molecular_field_regularized(state, frank)
    assert fields.sup_norm(regularized - h) > 1e-3


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_variational_consistency(seed, fine_grid, frank):
    rng = np.random.default_rng(seed)
    n = helpers.random_director(rng, fine_grid)
    phi = helpers.random_perturbation(rng, fine_grid)
    state = ElasticState(fine_grid, n)
    derivative = oseen_frank.energy_directional_derivative(state, frank, phi)
    h = oseen_frank.molecular_field(state, frank)
    expected = -fields.integrate(np.sum(h * oseen_frank.tangential(n, phi), axis=0), fine_grid)
    assert derivative == pytest.approx(expected, rel=1e-4)


class TestElasticState:
    def test_grad_n_is_cached(self, smooth_director, fine_grid):
        state = ElasticState(fine_grid, smooth_director)
        assert state.grad_n is state.grad_n

    def test_assigning_n_clears_cache(self, smooth_director, fine_grid):
        state = ElasticState(fine_grid, smooth_director)
        before = state.grad_n
        state.n = -smooth_director
        assert state.grad_n == pytest.approx(-before)

    def test_n_is_read_only(self, smooth_director, fine_grid):
        state = ElasticState(fine_grid, smooth_director)
        with pytest.raises(ValueError):
            state.n[0, 0, 0] = 2.0

    def test_grad_n_matches_spectral_gradient(self, smooth_director, fine_grid):
        state = ElasticState(fine_grid, smooth_director)
        assert np.array_equal(state.grad_n, fields.gradient(smooth_director, fine_grid))


def test_normalize_and_tangential(rng, grid):
    values = rng.standard_normal((3,) + grid.shape)
    n = oseen_frank.normalize(values)
    assert fields.unit_defect(n) < 1e-14
    phi = rng.standard_normal((3,) + grid.shape)
    assert np.sum(oseen_frank.tangential(n, phi) * n, axis=0) == pytest.approx(0, abs=1e-12)
