"""
Right-hand sides of the Ericksen-Leslie evolution, pressure recovery and
time stepping, both for the system itself and for its mollified
approximation.

Internally the unknowns are stacked into one (5, N, N) array: velocity in
components 0-1, director in components 2-4.
"""

import enum
import attr
import numpy as np
from leslie import fields
from leslie.log import log
from leslie.oseen_frank import (
    ElasticState,
    molecular_field,
    molecular_field_regularized,
    normalize,
)
from leslie.stress import (
    advect,
    ericksen_stress,
    kinematics,
    leslie_stress,
    matvec,
    outer,
    regularized_stress,
    strain_and_vorticity,
)

UNIT_DRIFT_LIMIT = 0.1


class InvalidState(fields.InvalidField):
    """Raised if a State's velocity is not solenoidal or its director not unit."""


class NumericalFailure(RuntimeError):
    """Raised if a time step produced an unusable state."""

    def __init__(self, message, time):
        super().__init__(f"{message} at t={time!r}")
        self.time = time


class NonFinite(NumericalFailure):
    """Raised if a step produced NaN or infinite samples."""


class UnitDrift(NumericalFailure):
    """Raised if |n| drifted more than UNIT_DRIFT_LIMIT from 1 within one step."""


class Scheme(enum.Enum):
    """
    Time integration scheme.
    """

    RK4 = "rk4"
    IMEX = "imex"

    @classmethod
    def for_tag(cls, tag):
        """
        Convert from a config value; `explicit-rk4` is accepted for rk4.
        """
        if isinstance(tag, cls):
            return tag
        tag = tag.strip().lower()
        if tag == "explicit-rk4":
            tag = "rk4"
        return cls(tag)


def _optional_cutoff(value):
    if value is None or isinstance(value, (int, float)):
        return None if value is None else float(value)
    if value.strip() == "":
        return None
    return float(value)


def _cutoff_at_least_one(_instance, attribute, value):
    if value is not None and value < 1:
        raise ValueError(f"{attribute.name} must be at least 1, got {value!r}")


def _positive(_instance, attribute, value):
    if not value > 0:
        raise ValueError(f"{attribute.name} must be positive, got {value!r}")


@attr.s(frozen=True)
class SolverConfig:
    """
    Time step, scheme and switches for one run.

    A `mollify_cutoff` K selects the mollified system; `frozen_velocity`
    keeps v fixed so the director evolves alone.
    """

    dt = attr.ib(converter=float, validator=_positive)
    scheme = attr.ib(default=Scheme.RK4, converter=Scheme.for_tag)
    mollify_cutoff = attr.ib(
        default=None, converter=_optional_cutoff, validator=_cutoff_at_least_one
    )
    dealias = attr.ib(default=True, converter=bool)
    renormalize = attr.ib(default=True, converter=bool)
    frozen_velocity = attr.ib(default=False, converter=bool)


@attr.s(frozen=True, eq=False)
class State:
    """
    Velocity, director and time.

    With `unit_director` (the default) the director must have unit length
    to 1e-12; the mollified system drops that requirement.
    """

    grid = attr.ib()
    v = attr.ib(converter=fields.readonly)
    n = attr.ib(converter=fields.readonly)
    t = attr.ib(default=0.0, converter=float)
    unit_director = attr.ib(default=True, kw_only=True)

    def __attrs_post_init__(self):
        try:
            fields.Field(self.grid, self.v, tag="velocity")
            director = fields.Field(
                self.grid, self.n, tag="director" if self.unit_director else None
            )
        except fields.InvalidField as exc:
            raise InvalidState(str(exc)) from exc
        if director.components != 3:
            raise InvalidState("a director has 3 components")

    @classmethod
    def at_rest(cls, grid, n, t=0.0):
        """
        State with v = 0.
        """
        return cls(grid, np.zeros((2,) + grid.shape), n, t)

    @property
    def elastic(self):
        """
        ElasticState of the director.
        """
        return ElasticState(self.grid, self.n)

    def stacked(self):
        """
        (v, n) as one (5, N, N) array.
        """
        return np.concatenate([self.v, self.n])


def _split(u):
    return (u[:2], u[2:])


@attr.s(frozen=True)
class _Evaluation:
    n_t = attr.ib()
    v_t = attr.ib()
    h = attr.ib()
    sigma = attr.ib()


def _director_rate(grid, v, n, coeffs, h):
    (strain, vorticity) = strain_and_vorticity(v, grid)
    torque = matvec(vorticity, n) - coeffs.mu1 * h - coeffs.mu2 * matvec(strain, n)
    return -advect(v, n, grid) - np.cross(n, np.cross(torque, n, axis=0), axis=0)


def _total_stress(grid, v, n, n_t, coeffs, k):
    elastic = ElasticState(grid, n)
    kin = kinematics(v, n, n_t, grid)
    return leslie_stress(coeffs, kin, n) + ericksen_stress(elastic, k)


def _momentum_forcing(grid, v, sigma, coeffs, dealias):
    leslie = coeffs.leslie
    inertia = advect(v, v, grid)
    if dealias:
        inertia = fields.dealias(inertia, grid)
        sigma = fields.dealias(sigma, grid)
    return -inertia + (1 - leslie.gamma) / leslie.reynolds * fields.tensor_divergence(
        sigma, grid
    )[:2]


def _evaluate(grid, v, n, coeffs, k, dealias=False, frozen_velocity=False):
    h = molecular_field(ElasticState(grid, n), k)
    n_t = _director_rate(grid, v, n, coeffs, h)
    sigma = _total_stress(grid, v, n, n_t, coeffs, k)
    if frozen_velocity:
        v_t = np.zeros_like(v)
    else:
        leslie = coeffs.leslie
        forcing = _momentum_forcing(grid, v, sigma, coeffs, dealias)
        viscous = leslie.gamma / leslie.reynolds * fields.laplacian(v, grid)
        v_t = fields.leray_project(forcing + viscous, grid)
    return _Evaluation(n_t=n_t, v_t=v_t, h=h, sigma=sigma)


def _evaluate_mollified(grid, v, n, coeffs, k, cutoff, frozen_velocity=False):
    symbol = fields.mollifier_symbol(grid, cutoff)

    def mollified(values):
        return fields.apply_multiplier(values, grid, symbol)

    (v_j, n_j) = (mollified(v), mollified(n))
    elastic = ElasticState(grid, n_j)
    h = molecular_field_regularized(elastic, k)
    (strain, vorticity) = strain_and_vorticity(v_j, grid)
    torque = matvec(vorticity, n_j) - coeffs.mu1 * h - coeffs.mu2 * matvec(strain, n_j)
    n_t = -mollified(
        advect(v_j, n_j, grid) + np.cross(n_j, np.cross(torque, n_j, axis=0), axis=0)
    )
    sigma = regularized_stress(coeffs, n_j, strain, h) + ericksen_stress(elastic, k)
    if frozen_velocity:
        v_t = np.zeros_like(v)
    else:
        leslie = coeffs.leslie
        forcing = _momentum_forcing(grid, v_j, sigma, coeffs, dealias=False)
        viscous = leslie.gamma / leslie.reynolds * fields.laplacian(v_j, grid)
        v_t = fields.leray_project(mollified(forcing + viscous), grid)
    return _Evaluation(n_t=n_t, v_t=v_t, h=h, sigma=sigma)


def director_rhs(state, coeffs, k):
    """
    n_t = -v . grad n - n x ((Omega . n - mu1 h - mu2 D . n) x n)
    """
    h = molecular_field(state.elastic, k)
    return _director_rate(state.grid, state.v, state.n, coeffs, h)


def velocity_rhs(state, coeffs, k, dealias=False):
    """
    P[-v . grad v + (gamma/Re) Lap v + ((1-gamma)/Re) div(sigma^L + sigma^E)].

    N inside sigma^L uses the director rate of the same state.
    """
    return _evaluate(state.grid, state.v, state.n, coeffs, k, dealias=dealias).v_t


def momentum_forcing(state, coeffs, k, dealias=False):
    """
    -v . grad v + ((1-gamma)/Re) div(sigma^L + sigma^E) before projection.
    """
    evaluation = _evaluate(state.grid, state.v, state.n, coeffs, k)
    return _momentum_forcing(state.grid, state.v, evaluation.sigma, coeffs, dealias)


def pressure_field(state, coeffs, k):
    """
    Zero-mean p with Lap p = ((1-gamma)/Re) d_i d_j sigma_ij - d_i d_j (v^i v^j).
    """
    grid = state.grid
    leslie = coeffs.leslie
    sigma = _evaluate(grid, state.v, state.n, coeffs, k).sigma
    stress_source = fields.divergence2(fields.tensor_divergence(sigma, grid), grid)
    inertia_source = fields.divergence2(
        fields.tensor_divergence(outer(state.v, state.v), grid), grid
    )
    source = (1 - leslie.gamma) / leslie.reynolds * stress_source - inertia_source
    return fields.poisson_solve(source, grid)


def _stiff_symbols(grid, coeffs, k, config):
    """
    Fourier symbols of the linear parts treated exactly by the IMEX scheme.
    """
    leslie = coeffs.leslie
    viscosity = 0.0 if config.frozen_velocity else leslie.gamma / leslie.reynolds
    relaxation = 2 * k.a * coeffs.mu1
    damping = -grid.k_squared
    if config.mollify_cutoff is not None:
        damping = damping * fields.mollifier_symbol(grid, config.mollify_cutoff) ** 2
    return np.stack([viscosity * damping] * 2 + [relaxation * damping] * 3)


def _rk4(u, rate, dt):
    first = rate(u)
    second = rate(u + 0.5 * dt * first)
    third = rate(u + 0.5 * dt * second)
    fourth = rate(u + dt * third)
    return u + dt / 6 * (first + 2 * second + 2 * third + fourth)


def _integrating_factor_rk4(u, rate, symbols, dt, grid):
    """
    Lawson RK4: exact propagation of the linear part, RK4 on the remainder.
    """
    half = np.exp(0.5 * dt * symbols)

    def propagate(values, factor):
        return fields.apply_multiplier(values, grid, factor)

    def remainder(values):
        return rate(values) - fields.apply_multiplier(values, grid, symbols)

    first = remainder(u)
    second = remainder(propagate(u + 0.5 * dt * first, half))
    third = remainder(propagate(u, half) + 0.5 * dt * second)
    fourth = remainder(propagate(u, half**2) + dt * propagate(third, half))
    return propagate(u + dt / 6 * first, half**2) + dt / 6 * (
        propagate(2 * (second + third), half) + fourth
    )


def _advance(state, config, coeffs, k, rate):
    u = state.stacked()
    if config.scheme is Scheme.IMEX:
        symbols = _stiff_symbols(state.grid, coeffs, k, config)
        return _integrating_factor_rk4(u, rate, symbols, config.dt, state.grid)
    return _rk4(u, rate, config.dt)


def step(state, config, coeffs, k):
    """
    Advance the system by one time step.

    If `config.renormalize`, the director is projected back to unit length
    afterwards; the drift before that projection is checked against
    UNIT_DRIFT_LIMIT.
    """
    grid = state.grid

    def rate(u):
        (v, n) = _split(u)
        evaluation = _evaluate(
            grid, v, n, coeffs, k, config.dealias, config.frozen_velocity
        )
        return np.concatenate([evaluation.v_t, evaluation.n_t])

    (v, n) = _split(_advance(state, config, coeffs, k, rate))
    time = state.t + config.dt
    if not np.all(np.isfinite(v)) or not np.all(np.isfinite(n)):
        raise NonFinite("non-finite samples", time)
    drift = fields.unit_defect(n)
    if drift > UNIT_DRIFT_LIMIT:
        raise UnitDrift(f"director length drifted by {drift:.3g}", time)
    if config.renormalize:
        n = normalize(n)
    if not config.frozen_velocity:
        v = fields.leray_project(v, grid)
    return State(grid, v, n, time, unit_director=config.renormalize)


def mollify_state(state, cutoff):
    """
    Apply the mollifier to both fields; the result need not have a unit director.
    """
    grid = state.grid
    return State(
        grid,
        fields.mollify(state.v, grid, cutoff),
        fields.mollify(state.n, grid, cutoff),
        state.t,
        unit_director=False,
    )


def step_mollified(state, config, coeffs, k):
    """
    Advance the mollified system by one time step.

    Every nonlinear product is formed from mollified fields and mollified
    again; stresses are sigma1 + sigma2 + sigma^E. There is no
    renormalization and no unit-length check.
    """
    if config.mollify_cutoff is None:
        raise ValueError("step_mollified needs a mollify_cutoff")
    grid = state.grid

    def rate(u):
        (v, n) = _split(u)
        evaluation = _evaluate_mollified(
            grid, v, n, coeffs, k, config.mollify_cutoff, config.frozen_velocity
        )
        return np.concatenate([evaluation.v_t, evaluation.n_t])

    (v, n) = _split(_advance(state, config, coeffs, k, rate))
    time = state.t + config.dt
    if not np.all(np.isfinite(v)) or not np.all(np.isfinite(n)):
        raise NonFinite("non-finite samples", time)
    if not config.frozen_velocity:
        v = fields.leray_project(v, grid)
    return State(grid, v, n, time, unit_director=False)


@attr.s
class Trajectory:
    """
    Handle on a finished run: the observed times and the final state.
    """

    times = attr.ib(factory=list)
    final = attr.ib(default=None)
    steps = attr.ib(default=0)

    def __len__(self):
        return len(self.times)


def step_count(t_start, t_end, dt):
    """
    Number of steps of size dt from t_start to t_end (rounded).
    """
    return int(round((t_end - t_start) / dt))


def run(
    initial, config, coeffs, k, t_end, observers=(), stride=1
):  # pylint: disable=too-many-arguments
    """
    Step from `initial` to `t_end`, calling every observer as observer(step, state).

    Observers see step 0, every `stride`-th step and the last step. With a
    `mollify_cutoff` the initial data is mollified once and the mollified
    system is stepped.
    """
    if t_end < initial.t:
        raise ValueError(f"t_end={t_end!r} is before the initial time {initial.t!r}")
    if stride < 1:
        raise ValueError(f"stride must be at least 1, got {stride!r}")
    steps = step_count(initial.t, t_end, config.dt)
    if config.mollify_cutoff is not None:
        state = mollify_state(initial, config.mollify_cutoff)
        advance = step_mollified
    else:
        state = initial
        advance = step

    trajectory = Trajectory(steps=steps)

    def observe(index, state):
        trajectory.times.append(state.t)
        for observer in observers:
            observer(index, state)

    observe(0, state)
    for index in range(1, steps + 1):
        state = advance(state, config, coeffs, k)
        if index % stride == 0 or index == steps:
            log(f"step {index} of {steps}: t={state.t:.6g}")
            observe(index, state)
    trajectory.final = state
    return trajectory
