"""
Seeded random data for the identity suites.

Random fields are band-limited to |m_i| <= N/4 with a Gaussian spectral
envelope before any pointwise operation, so that normalizing a director
leaves only a negligible spectral tail.
"""

import numpy as np
from leslie import coefficients, fields
from leslie.oseen_frank import normalize

ENVELOPE_WIDTH = 2.0
PERTURBATION_SIZE = 0.5


def smooth_noise(rng, grid, components):
    """
    Band-limited random field with a Gaussian envelope, shape (components, N, N).
    """
    noise = rng.standard_normal((components,) + grid.shape)
    quarter = grid.n_points / 4
    band = (np.abs(grid.modes1) <= quarter) & (np.abs(grid.modes2) <= quarter)
    envelope = np.exp(-(grid.modes1**2 + grid.modes2**2) / (2 * ENVELOPE_WIDTH**2))
    return fields.apply_multiplier(noise, grid, envelope * band)


def _scaled_to(values, size):
    peak = np.max(np.sqrt(np.sum(values**2, axis=0)))
    return values if peak == 0 else values * (size / peak)


def random_unit_vector(rng):
    """
    Uniformly distributed point on the unit sphere.
    """
    vector = rng.standard_normal(3)
    return vector / np.linalg.norm(vector)


def random_director(rng, grid):
    """
    normalize(b + p): b a random unit vector, p smooth with max |p| = 0.5.
    """
    base = random_unit_vector(rng)
    perturbation = _scaled_to(smooth_noise(rng, grid, 3), PERTURBATION_SIZE)
    return normalize(base[:, None, None] + perturbation)


def random_velocity(rng, grid, size=1.0):
    """
    Smooth divergence-free velocity with max |v| = `size`.
    """
    return _scaled_to(fields.leray_project(smooth_noise(rng, grid, 2), grid), size)


def random_perturbation(rng, grid):
    """
    Smooth 3-vector field of unit max norm, for directional derivatives.
    """
    return _scaled_to(smooth_noise(rng, grid, 3), 1.0)


def random_elastic_constants(rng, low=0.5, high=2.0):
    """
    (k1, k2, k3) drawn uniformly from [low, high]^3.
    """
    return coefficients.ElasticConstants(*rng.uniform(low, high, size=3))


def random_leslie_coefficients(rng):
    """
    Leslie viscosities satisfying Parodi's relation with gamma1 > 0.

    Admissibility is not enforced; the stress identities hold regardless.
    """
    (alpha1, alpha2, alpha4, alpha5) = rng.uniform(-1.0, 1.0, size=4)
    alpha3 = alpha2 + rng.uniform(0.5, 2.0)
    alpha6 = alpha2 + alpha3 + alpha5
    return coefficients.LeslieCoefficients(
        alpha1,
        alpha2,
        alpha3,
        alpha4,
        alpha5,
        alpha6,
        gamma=rng.uniform(0.1, 0.9),
        reynolds=rng.uniform(0.5, 2.0),
    )


def random_betas(rng, margin=1e-3, dim=2, spread=2.0):
    """
    A (beta1, beta2, beta3) triple whose closed-form constraints are all
    farther than `margin` from zero.
    """
    while True:
        betas = tuple(float(beta) for beta in rng.uniform(-spread, spread, size=3))
        if coefficients.admissibility_margin(betas, dim) > margin:
            return betas
