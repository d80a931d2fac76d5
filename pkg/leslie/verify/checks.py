"""
Identity suites run against a corpus of seeded random states.

Every check is a generator taking a Corpus and yielding one CheckResult per
case. A result with `tolerance=None` is reported but never fails.
"""

import attr
import numpy as np
from leslie import coefficients, fields
from leslie.dynamics import State, director_rhs
from leslie.oseen_frank import (
    ElasticState,
    energy_directional_derivative,
    molecular_field,
    molecular_field_oracle,
    tangential,
    wp_dot_n_residual,
)
from leslie.stress import (
    kinematics,
    leslie_stress,
    regularized_stress,
    stress_power_residual,
)
from leslie.verify import helpers

TOL_ORACLE = 1e-6
TOL_WP_DOT_N = 1e-6
TOL_EQUAL_CONSTANTS = 1e-10
TOL_STRESS_POWER = 1e-6
TOL_VARIATIONAL = 1e-4
TOL_ORTHOGONAL = 1e-10
ADMISSIBILITY_TRIPLES = 100
VARIATIONAL_PERTURBATIONS = 10


@attr.s(frozen=True)
class CheckResult:  # pylint: disable=too-few-public-methods
    """
    Outcome of one check on one case.
    """

    name = attr.ib()
    case = attr.ib()
    value = attr.ib(converter=float)
    tolerance = attr.ib(default=None)
    passed = attr.ib(default=True)


def _result(name, case, value, tolerance):
    return CheckResult(
        name=name,
        case=case,
        value=value,
        tolerance=tolerance,
        passed=bool(np.isfinite(value) and value <= tolerance),
    )


@attr.s(frozen=True)
class Case:  # pylint: disable=too-few-public-methods
    """
    One random state: director, velocity, elastic and viscous coefficients.
    """

    index = attr.ib()
    grid = attr.ib()
    n = attr.ib()
    v = attr.ib()
    k = attr.ib()
    coeffs = attr.ib()

    @property
    def elastic(self):
        """
        ElasticState of the director.
        """
        return ElasticState(self.grid, self.n)

    @property
    def state(self):
        """
        The case as a State at t = 0.
        """
        return State(self.grid, self.v, self.n)


@attr.s(frozen=True)
class Corpus:  # pylint: disable=too-few-public-methods
    """
    Random cases plus the generator state for the case-independent checks.
    """

    seed = attr.ib()
    cases = attr.ib()


def build_corpus(seed, n_points=128, cases=20, length=2 * np.pi):
    """
    `cases` random states on an N x N grid, fully determined by `seed`.
    """
    grid = fields.Grid(n_points, length)
    rng = np.random.default_rng(seed)
    built = []
    for index in range(cases):
        built.append(
            Case(
                index=index,
                grid=grid,
                n=helpers.random_director(rng, grid),
                v=helpers.random_velocity(rng, grid),
                k=helpers.random_elastic_constants(rng),
                coeffs=coefficients.derive(helpers.random_leslie_coefficients(rng)),
            )
        )
    return Corpus(seed=seed, cases=built)


def check_molecular_field_oracle(corpus):
    """
    Decomposed molecular field against the divergence form, relative L^2.
    """
    for case in corpus.cases:
        elastic = case.elastic
        h = molecular_field(elastic, case.k)
        oracle = molecular_field_oracle(elastic, case.k)
        scale = np.sqrt(fields.l2_norm_squared(oracle, case.grid))
        difference = np.sqrt(fields.l2_norm_squared(h - oracle, case.grid))
        yield _result("molecular field oracle", case.index, difference / scale, TOL_ORACLE)


def check_wp_dot_n(corpus):
    """
    (d_alpha W_p) . n against its closed form, scaled by 1 + ||grad n||_inf^2.
    """
    for case in corpus.cases:
        elastic = case.elastic
        residual = fields.sup_norm(wp_dot_n_residual(elastic, case.k))
        scale = 1 + fields.sup_norm(np.sum(elastic.grad_n**2, axis=(0, 1)))
        yield _result("W_p . n identity", case.index, residual / scale, TOL_WP_DOT_N)


def check_equal_constants(corpus):
    """
    k1 = k2 = k3 = a reduces h to 2a Lap n.
    """
    for case in corpus.cases:
        k = coefficients.ElasticConstants.equal(case.k.k1)
        elastic = case.elastic
        reduced = 2 * k.a * fields.laplacian(case.n, case.grid)
        residual = fields.sup_norm(molecular_field(elastic, k) - reduced)
        yield _result("equal constants", case.index, residual, TOL_EQUAL_CONSTANTS)


def check_stress_power(corpus):
    """
    Leslie stress power with n_t from the director equation, scaled by
    ||grad v||^2 + ||h||^2.
    """
    for case in corpus.cases:
        grid = case.grid
        n_t = director_rhs(case.state, case.coeffs, case.k)
        residual = stress_power_residual(case.coeffs, case.k, case.v, case.n, n_t, grid)
        h = molecular_field(case.elastic, case.k)
        scale = fields.l2_norm_squared(
            fields.gradient(case.v, grid), grid
        ) + fields.l2_norm_squared(h, grid)
        yield _result("stress power", case.index, residual / scale, TOL_STRESS_POWER)


def check_admissibility(corpus):
    """
    Closed-form admissibility against the brute-force sampler on random
    triples away from the constraint boundaries; the value is 1 on a
    disagreement.
    """
    rng = np.random.default_rng([corpus.seed, 1])
    for index in range(ADMISSIBILITY_TRIPLES):
        betas = helpers.random_betas(rng)
        agree = coefficients.admissible(betas, dim=2) == (
            coefficients.admissible_bruteforce(betas, dim=2)
        )
        yield _result("admissibility", index, 0.0 if agree else 1.0, 0.0)


def check_variational(corpus):
    """
    d/dtau int W(normalize(n + tau phi)) against -int h . phi_tan, relative.
    """
    rng = np.random.default_rng([corpus.seed, 2])
    for index in range(VARIATIONAL_PERTURBATIONS):
        case = corpus.cases[index % len(corpus.cases)]
        elastic = case.elastic
        phi = helpers.random_perturbation(rng, case.grid)
        derivative = energy_directional_derivative(elastic, case.k, phi)
        h = molecular_field(elastic, case.k)
        expected = -float(
            fields.integrate(np.sum(h * tangential(case.n, phi), axis=0), case.grid)
        )
        error = abs(derivative - expected) / max(abs(expected), 1e-300)
        yield _result("variational derivative", index, error, TOL_VARIATIONAL)


def check_regularized_stress(corpus):
    """
    max |sigma1 + sigma2 - sigma^L| for unit directors; reported only.
    """
    for case in corpus.cases:
        grid = case.grid
        n_t = director_rhs(case.state, case.coeffs, case.k)
        kin = kinematics(case.v, case.n, n_t, grid)
        h = molecular_field(case.elastic, case.k)
        difference = regularized_stress(case.coeffs, case.n, kin.D, h) - leslie_stress(
            case.coeffs, kin, case.n
        )
        yield CheckResult(
            name="regularized stress (report)",
            case=case.index,
            value=fields.sup_norm(difference),
        )


def check_orthogonality(corpus):
    """
    n . n_t vanishes, scaled by 1 + ||v||_inf ||grad n||_inf.
    """
    for case in corpus.cases:
        n_t = director_rhs(case.state, case.coeffs, case.k)
        residual = fields.sup_norm(np.sum(case.n * n_t, axis=0))
        scale = 1 + fields.sup_norm(case.v) * fields.sup_norm(case.elastic.grad_n)
        yield _result("n . n_t", case.index, residual / scale, TOL_ORTHOGONAL)


ALL_CHECKS = [
    check_molecular_field_oracle,
    check_wp_dot_n,
    check_equal_constants,
    check_stress_power,
    check_admissibility,
    check_variational,
    check_regularized_stress,
    check_orthogonality,
]
