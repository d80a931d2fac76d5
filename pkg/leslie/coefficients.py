"""
Material parameters of the Ericksen-Leslie system.

Holds the Leslie viscosities, derives the reduced coefficients and decides
whether the viscous dissipation is non-negative, both in closed form and by
brute-force sampling of the quadratic form.
"""

import math
import attr
import numpy as np

TOL_PARODI = 1e-12
TOL_SYM = 1e-12
TOL_FORM = 1e-10
TOL_UNIT = 1e-12


class CoefficientError(ValueError):
    """Raised if a set of coefficients (or an argument to a form) is unusable."""


class ParodiViolation(CoefficientError):
    """Raised if alpha2 + alpha3 differs from alpha6 - alpha5."""


class NonpositiveGamma1(CoefficientError):
    """Raised if gamma1 = alpha3 - alpha2 is not positive."""


class NotUnit(CoefficientError):
    """Raised if a director passed to the dissipation form is not a unit vector."""


class NotSymmetricTraceFree(CoefficientError):
    """Raised if a strain rate is not symmetric and trace-free."""


def positive(_instance, attribute, value):
    """
    Validator requiring a strictly positive value.
    """
    if not value > 0:
        raise ValueError(f"{attribute.name} must be positive, got {value!r}")


def open_unit_interval(_instance, attribute, value):
    """
    Validator requiring a value strictly between 0 and 1.
    """
    if not 0 < value < 1:
        raise ValueError(f"{attribute.name} must be in (0, 1), got {value!r}")


@attr.s(frozen=True)
class LeslieCoefficients:
    """
    The six Leslie viscosities, the viscosity split gamma and the Reynolds number.
    """

    alpha1 = attr.ib(converter=float)
    alpha2 = attr.ib(converter=float)
    alpha3 = attr.ib(converter=float)
    alpha4 = attr.ib(converter=float)
    alpha5 = attr.ib(converter=float)
    alpha6 = attr.ib(converter=float)
    gamma = attr.ib(converter=float, validator=open_unit_interval)
    reynolds = attr.ib(converter=float, validator=positive)

    @property
    def alphas(self):
        """
        The viscosities as a tuple (alpha1, ..., alpha6).
        """
        return (
            self.alpha1,
            self.alpha2,
            self.alpha3,
            self.alpha4,
            self.alpha5,
            self.alpha6,
        )

    def parodi_defect(self):
        """
        Signed defect of Parodi's relation alpha2 + alpha3 = alpha6 - alpha5.
        """
        return (self.alpha2 + self.alpha3) - (self.alpha6 - self.alpha5)

    def scaled(self, factor):
        """
        Return a copy with every alpha multiplied by `factor`.
        """
        return attr.evolve(
            self, **{f"alpha{i}": factor * a for i, a in enumerate(self.alphas, 1)}
        )


@attr.s(frozen=True)
class DerivedCoefficients:  # pylint: disable=too-many-instance-attributes
    """
    Reduced coefficients computed from a LeslieCoefficients by `derive`.

    `leslie` keeps the source viscosities so the stress constructions can use
    both families.
    """

    gamma1 = attr.ib()
    gamma2 = attr.ib()
    mu1 = attr.ib()
    mu2 = attr.ib()
    beta1 = attr.ib()
    beta2 = attr.ib()
    beta3 = attr.ib()
    leslie = attr.ib(repr=False)

    @property
    def betas(self):
        """
        (beta1, beta2, beta3)
        """
        return (self.beta1, self.beta2, self.beta3)


@attr.s(frozen=True)
class ElasticConstants:
    """
    Oseen-Frank splay, twist and bend constants; `a` is their minimum.
    """

    k1 = attr.ib(converter=float, validator=positive)
    k2 = attr.ib(converter=float, validator=positive)
    k3 = attr.ib(converter=float, validator=positive)
    a = attr.ib(init=False)

    @a.default
    def _minimum(self):
        return min(self.k1, self.k2, self.k3)

    @classmethod
    def equal(cls, value):
        """
        The one-constant approximation k1 = k2 = k3 = value.
        """
        return cls(value, value, value)


def derive(alphas):
    """
    Compute gamma1, gamma2, mu1, mu2 and the betas from the Leslie viscosities.
    """
    defect = alphas.parodi_defect()
    if abs(defect) > TOL_PARODI:
        raise ParodiViolation(
            f"alpha2 + alpha3 = {alphas.alpha2 + alphas.alpha3!r} but "
            f"alpha6 - alpha5 = {alphas.alpha6 - alphas.alpha5!r}"
        )
    gamma1 = alphas.alpha3 - alphas.alpha2
    if gamma1 <= 0:
        raise NonpositiveGamma1(f"gamma1 = alpha3 - alpha2 = {gamma1!r}")
    gamma2 = alphas.alpha6 - alphas.alpha5
    return DerivedCoefficients(
        gamma1=gamma1,
        gamma2=gamma2,
        mu1=1 / gamma1,
        mu2=-gamma2 / gamma1,
        beta1=alphas.alpha1 + gamma2**2 / gamma1,
        beta2=alphas.alpha4,
        beta3=alphas.alpha5 + alphas.alpha6 - gamma2**2 / gamma1,
        leslie=alphas,
    )


def admissible(betas, dim=2):
    """
    Closed-form decision whether the viscous dissipation is non-negative.

    Boundary cases (a constraint exactly zero) count as admissible.
    """
    (beta1, beta2, beta3) = betas
    if dim == 3:
        return beta2 >= 0 and 2 * beta2 + beta3 >= 0 and 1.5 * beta2 + beta3 + beta1 >= 0
    if dim == 2:
        if beta1 < 0:
            return beta2 >= 0 and beta1 + 2 * beta2 + beta3 >= 0
        return beta2 >= 0 and 2 * beta2 + beta3 >= 0
    raise ValueError(f"dim must be 2 or 3, got {dim!r}")


def admissibility_margin(betas, dim=2):
    """
    Distance of the closest closed-form constraint from zero.
    """
    (beta1, beta2, beta3) = betas
    if dim == 3:
        constraints = [beta2, 2 * beta2 + beta3, 1.5 * beta2 + beta3 + beta1]
    elif beta1 < 0:
        constraints = [beta2, beta1 + 2 * beta2 + beta3, beta1]
    else:
        constraints = [beta2, 2 * beta2 + beta3, beta1]
    return min(abs(c) for c in constraints)


def form_values(betas, directors, strains):
    """
    Vectorized dissipation form for stacks of directors (..., 3) and strains (..., 3, 3).

    No argument checking; see `dissipation_form`.
    """
    (beta1, beta2, beta3) = betas
    d_n = np.einsum("...ij,...j->...i", strains, directors)
    n_d_n = np.einsum("...i,...i->...", directors, d_n)
    d_d = np.einsum("...ij,...ij->...", strains, strains)
    return beta1 * n_d_n**2 + beta2 * d_d + beta3 * np.einsum("...i,...i->...", d_n, d_n)


def dissipation_form(betas, n, strain):
    """
    beta1 (n.D.n)^2 + beta2 D:D + beta3 |D n|^2 for a unit n and a symmetric trace-free D.
    """
    n = np.asarray(n, dtype=float)
    strain = np.asarray(strain, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > TOL_UNIT:
        raise NotUnit(f"expected a unit 3-vector, got {n!r}")
    if (
        strain.shape != (3, 3)
        or np.max(np.abs(strain - strain.T)) > TOL_SYM
        or abs(np.trace(strain)) > TOL_SYM
    ):
        raise NotSymmetricTraceFree(f"expected a symmetric trace-free 3x3, got {strain!r}")
    return float(form_values(betas, n, strain))


def _planar_grid_sizes(samples):
    """
    Sizes (polar, azimuth, strain angle) whose product is at least `samples`.

    The polar count is odd so the equator is sampled; the angle counts are
    multiples of four so that aligned and diagonal strain directions are hit
    exactly.
    """
    base = math.ceil(samples ** (1 / 3))
    polar = base if base % 2 == 1 else base + 1
    angles = 4 * math.ceil(base / 4)
    while polar * angles * angles < samples:
        angles += 4
    return (polar, angles, angles)


def _planar_samples(samples):
    (polar, azimuth, strain_angle) = _planar_grid_sizes(samples)
    # uniform in n3 is uniform on the sphere
    n3 = np.linspace(-1.0, 1.0, polar)
    psi = np.arange(azimuth) * (2 * np.pi / azimuth)
    alpha = np.arange(strain_angle) * (2 * np.pi / strain_angle)
    (n3, psi, alpha) = (a.ravel() for a in np.meshgrid(n3, psi, alpha, indexing="ij"))
    in_plane = np.sqrt(np.clip(1 - n3**2, 0, None))
    directors = np.stack([in_plane * np.cos(psi), in_plane * np.sin(psi), n3], axis=-1)
    strains = np.zeros(n3.shape + (3, 3))
    strains[:, 0, 0] = np.cos(alpha)
    strains[:, 1, 1] = -np.cos(alpha)
    strains[:, 0, 1] = strains[:, 1, 0] = np.sin(alpha)
    return (directors, strains)


def _spatial_samples(samples, rng):
    directors = rng.normal(size=(samples, 3))
    directors /= np.linalg.norm(directors, axis=-1, keepdims=True)
    raw = rng.normal(size=(samples, 3, 3))
    strains = 0.5 * (raw + np.swapaxes(raw, -1, -2))
    strains -= np.einsum("sii->s", strains)[:, None, None] / 3 * np.eye(3)
    strains /= np.linalg.norm(strains, axis=(-2, -1), keepdims=True)
    return (directors, strains)


def admissible_bruteforce(betas, samples=10_000, dim=2, seed=0):
    """
    Decide admissibility by evaluating the dissipation form on sampled (n, D).

    In two dimensions D = [[x, y, 0], [y, -x, 0], [0, 0, 0]] with (x, y) on the
    unit circle and n on the sphere, sampled on a deterministic stratified
    grid. In three dimensions n and D are drawn from a seeded generator.
    Returns False iff some sampled value is below -TOL_FORM.
    """
    if samples < 10_000:
        raise ValueError(f"at least 10^4 samples are required, got {samples}")
    if dim == 2:
        (directors, strains) = _planar_samples(samples)
    elif dim == 3:
        (directors, strains) = _spatial_samples(samples, np.random.default_rng(seed))
    else:
        raise ValueError(f"dim must be 2 or 3, got {dim!r}")
    return bool(np.min(form_values(betas, directors, strains)) >= -TOL_FORM)
