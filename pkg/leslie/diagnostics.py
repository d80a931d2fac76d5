"""
Measurements of the energy law and the local monitors.

Everything here is a pure function of immutable states (or of series of
records taken from them); nothing asserts, callers decide.
"""

import enum
import attr
import numpy as np
from leslie import fields
from leslie.coefficients import TOL_FORM
from leslie.oseen_frank import ElasticState, density, molecular_field
from leslie.stress import contract, dot, matvec, strain_and_vorticity

LEDGER_HEADER = (
    "t,E,d_visc,d_relax,d_beta1,d_beta2,d_beta3,"
    "residual,blowup,conc_max,conc_x,conc_y"
)


class EmptySeries(ValueError):
    """Raised if a time series has no entries."""


class LocalDensity(enum.Enum):
    """
    Which density a ball integral measures.
    """

    ENERGY = "energy"
    CONCENTRATION = "concentration"


def format_float(value):
    """
    17 significant digits, enough to read back the same double.
    """
    return f"{value:.17g}"


@attr.s(frozen=True)
class EnergyLedger:  # pylint: disable=too-many-instance-attributes
    """
    Total energy and the dissipation rates of the energy law at one time.
    """

    t = attr.ib(converter=float)
    E = attr.ib(converter=float)  # pylint: disable=invalid-name
    d_visc = attr.ib(converter=float)
    d_relax = attr.ib(converter=float)
    d_beta1 = attr.ib(converter=float)
    d_beta2 = attr.ib(converter=float)
    d_beta3 = attr.ib(converter=float)

    @property
    def dissipation(self):
        """
        Sum of every dissipation rate.
        """
        return self.d_visc + self.d_relax + self.d_beta1 + self.d_beta2 + self.d_beta3

    def is_finite(self):
        """
        Whether every entry is finite.
        """
        return bool(np.all(np.isfinite(attr.astuple(self))))


@attr.s(frozen=True)
class LedgerRow:
    """
    One line of the ledger CSV: an EnergyLedger plus the running monitors.
    """

    ledger = attr.ib()
    residual = attr.ib(converter=float)
    blowup = attr.ib(converter=float)
    conc_max = attr.ib(converter=float)
    conc_x = attr.ib(converter=float)
    conc_y = attr.ib(converter=float)

    def to_line(self):
        """
        Comma-separated values in LEDGER_HEADER order.
        """
        values = attr.astuple(self.ledger) + (
            self.residual,
            self.blowup,
            self.conc_max,
            self.conc_x,
            self.conc_y,
        )
        return ",".join(format_float(value) for value in values)

    @classmethod
    def from_line(cls, line):
        """
        Parse one CSV line written by `to_line`.
        """
        parts = [float(part) for part in line.strip().split(",")]
        if len(parts) != len(LEDGER_HEADER.split(",")):
            raise ValueError(f"expected {len(LEDGER_HEADER.split(','))} columns")
        return cls(EnergyLedger(*parts[:7]), *parts[7:])


def read_ledger(lines):
    """
    Parse a ledger CSV (header included) into LedgerRows.
    """
    lines = iter(lines)
    header = next(lines, "").strip()
    if header != LEDGER_HEADER:
        raise ValueError(f"unexpected ledger header: {header}")
    rows = []
    for line in lines:
        if line.strip() == "":
            continue
        try:
            rows.append(LedgerRow.from_line(line))
        except ValueError as exc:
            raise ValueError(f"unable to parse line: {line}") from exc
    return rows


def kinetic_weight(coeffs):
    """
    Re / (2 (1 - gamma)), the weight of |v|^2 in the energy density.
    """
    leslie = coeffs.leslie
    return leslie.reynolds / (2 * (1 - leslie.gamma))


def energy_density(state, coeffs, k):
    """
    e(v, n) = W(n, grad n) + Re/(2(1-gamma)) |v|^2
    """
    return density(state.elastic, k) + kinetic_weight(coeffs) * dot(state.v, state.v)


def concentration_density(state):
    """
    |v|^2 + |grad n|^2
    """
    grad_n = state.elastic.grad_n
    return dot(state.v, state.v) + np.sum(grad_n**2, axis=(0, 1))


def energy(state, coeffs, k):
    """
    Total energy: integral of e(v, n) over the torus.
    """
    return float(fields.integrate(energy_density(state, coeffs, k), state.grid))


def ledger(state, coeffs, k):
    """
    Energy and every dissipation rate of the energy law for one state.
    """
    grid = state.grid
    leslie = coeffs.leslie
    n = state.n
    (strain, _) = strain_and_vorticity(state.v, grid)
    h = molecular_field(state.elastic, k)
    d_n = matvec(strain, n)
    grad_v = fields.gradient(state.v, grid)
    n_cross_h = np.cross(n, h, axis=0)
    return EnergyLedger(
        t=state.t,
        E=energy(state, coeffs, k),
        d_visc=leslie.gamma / (1 - leslie.gamma) * fields.l2_norm_squared(grad_v, grid),
        d_relax=fields.l2_norm_squared(n_cross_h, grid) / coeffs.gamma1,
        d_beta1=coeffs.beta1 * fields.integrate(dot(n, d_n) ** 2, grid),
        d_beta2=leslie.alpha4 * fields.integrate(contract(strain, strain), grid),
        d_beta3=coeffs.beta3 * fields.integrate(dot(d_n, d_n), grid),
    )


def sign_violations(entry, scale=None, tolerance=TOL_FORM):
    """
    Names of the dissipation entries with the wrong sign.

    The viscous combination may dip to -tolerance * scale. The default
    scale is the sum of the viscous magnitudes, so the verdict depends on
    the entry alone and a ledger read back from CSV gets the same one.
    """
    if scale is None:
        scale = abs(entry.d_beta1) + abs(entry.d_beta2) + abs(entry.d_beta3)
    violations = []
    if entry.d_visc < 0:
        violations.append("d_visc")
    if entry.d_relax < 0:
        violations.append("d_relax")
    if entry.d_beta1 + entry.d_beta2 + entry.d_beta3 < -tolerance * scale:
        violations.append("d_beta")
    return violations


def _derivative_at_start(values, spacing):
    return (-3 * values[0] + 4 * values[1] - values[2]) / (2 * spacing)


def _derivatives_at_ends(values, spacing):
    """
    Second-order derivative estimates at every sample, backward-looking from index 2 on.
    """
    result = np.empty(len(values))
    result[0] = _derivative_at_start(values, spacing)
    result[1] = (values[2] - values[0]) / (2 * spacing)
    result[2:] = (3 * values[2:] - 4 * values[1:-1] + values[:-2]) / (2 * spacing)
    return result


def cumulative_integral(values, spacing):
    """
    Running integral of uniformly sampled values.

    Trapezoidal rule plus the Euler-Maclaurin end correction
    -h^2/12 (f'(t) - f'(0)) when at least three samples exist.
    """
    values = np.asarray(values, dtype=float)
    result = np.zeros(len(values))
    if len(values) < 2:
        return result
    result[1:] = np.cumsum(0.5 * spacing * (values[1:] + values[:-1]))
    if len(values) >= 3:
        derivatives = _derivatives_at_ends(values, spacing)
        result[1:] -= spacing**2 / 12 * (derivatives[1:] - derivatives[0])
    return result


def _uniform_spacing(times):
    if len(times) < 2:
        return 0.0
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise ValueError("energy law residual needs uniformly spaced times")
    return float(steps[0])


def energy_law_residuals(series):
    """
    |E(t) + int_0^t dissipation - E(0)| at every entry, normalized by E(0).

    The normalization is dropped when E(0) = 0.
    """
    if len(series) == 0:
        raise EmptySeries("no ledger entries")
    times = np.array([entry.t for entry in series])
    energies = np.array([entry.E for entry in series])
    dissipation = np.array([entry.dissipation for entry in series])
    balance = energies + cumulative_integral(dissipation, _uniform_spacing(times))
    residuals = np.abs(balance - energies[0])
    if energies[0] != 0:
        residuals = residuals / energies[0]
    return residuals


def energy_law_residual(series):
    """
    Largest normalized energy-law defect over a series of EnergyLedgers.
    """
    return float(np.max(energy_law_residuals(series)))


def largest_energy_increase(series):
    """
    max_j (E_{j+1} - E_j), normalized like `energy_law_residual`; <= 0 if E never grows.
    """
    energies = np.array([entry.E for entry in series])
    if len(energies) < 2:
        return 0.0
    increase = float(np.max(np.diff(energies)))
    return increase / energies[0] if energies[0] != 0 else increase


@attr.s(frozen=True)
class HigherEnergy:
    """
    The higher-order energy with each weighted term kept separately.
    """

    s = attr.ib()
    terms = attr.ib()

    @property
    def total(self):
        """
        Sum of all terms.
        """
        return float(sum(self.terms.values()))


def higher_energy(state, coeffs, k, s, reference, cutoff=None):
    """
    Higher-order energy of order s with reference director `reference`.

    Terms: ||n - n0||^2, kinetic, elastic, a||Lap^s grad n||^2,
    (k1-a)||Lap^s div n||^2, (k2-a)||J n x Lap^s curl n||^2,
    (k3-a)||J n . Lap^s curl n||^2 and Re/(2(1-gamma))||Lap^s v||^2,
    where J is the mollifier with `cutoff` (identity when None).
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s!r}")
    grid = state.grid
    elastic = state.elastic
    power = (-grid.k_squared) ** s

    def lap_s(values):
        return fields.apply_multiplier(values, grid, power)

    n_j = state.n if cutoff is None else fields.mollify(state.n, grid, cutoff)
    curl_s = lap_s(elastic.curl_n)
    weight = kinetic_weight(coeffs)
    terms = {
        "n_minus_n0": fields.l2_norm_squared(state.n - reference, grid),
        "kinetic": weight * fields.l2_norm_squared(state.v, grid),
        "elastic": float(fields.integrate(density(elastic, k), grid)),
        "gradient": k.a * fields.l2_norm_squared(lap_s(elastic.grad_n), grid),
        "splay": (k.k1 - k.a) * fields.l2_norm_squared(lap_s(elastic.div_n), grid),
        "twist": (k.k2 - k.a)
        * fields.l2_norm_squared(np.cross(n_j, curl_s, axis=0), grid),
        "bend": (k.k3 - k.a) * fields.l2_norm_squared(dot(n_j, curl_s), grid),
        "velocity": weight * fields.l2_norm_squared(lap_s(state.v), grid),
    }
    return HigherEnergy(s=s, terms=terms)


def _local_density(state, coeffs, k, kind):
    if LocalDensity(kind) is LocalDensity.CONCENTRATION:
        return concentration_density(state)
    return energy_density(state, coeffs, k)


def local_energy(
    state, coeffs, k, center, radius, kind=LocalDensity.ENERGY
):  # pylint: disable=too-many-arguments
    """
    Integral of e(v, n) (or of |v|^2 + |grad n|^2) over the ball B_R(center).
    """
    return fields.ball_integral(
        _local_density(state, coeffs, k, kind), state.grid, center, radius
    )


def concentration_max(state, radius, stride=1):
    """
    Largest ball integral of |v|^2 + |grad n|^2 over centers on every
    `stride`-th grid point, as ((x1, x2), value).

    Ties (equal up to roundoff) go to the lowest index.
    """
    grid = state.grid
    integrals = fields.ball_integrals(concentration_density(state), grid, radius)
    strided = integrals[::stride, ::stride]
    peak = np.max(strided)
    tie_level = peak - 1e-12 * max(abs(peak), 1e-300)
    flat_index = int(np.argmax(strided.ravel() >= tie_level))
    (i1, i2) = np.unravel_index(flat_index, strided.shape)
    center = (float(i1 * stride * grid.spacing), float(i2 * stride * grid.spacing))
    return (center, float(strided[i1, i2]))


def blowup_indicator(state):
    """
    ||curl v||_inf + ||grad n||_inf^2 (grid maxima).
    """
    curl = fields.scalar_curl(state.v, state.grid)
    grad_n = state.elastic.grad_n
    return fields.sup_norm(curl) + fields.sup_norm(np.sum(grad_n**2, axis=(0, 1)))


def time_integral(times, values):
    """
    Trapezoidal integral of a sampled series.
    """
    if len(values) < 2:
        return 0.0
    (times, values) = (np.asarray(times), np.asarray(values))
    return float(np.sum(0.5 * np.diff(times) * (values[1:] + values[:-1])))


@attr.s(frozen=True)
class LocalSample:
    """
    Local energy and local dissipation rates on B_R(center) at one time.
    """

    t = attr.ib()
    energy = attr.ib()
    viscous = attr.ib()
    relaxation = attr.ib()


def local_sample(state, coeffs, k, center, radius):
    """
    Measure int_{B_R} e, gamma/(1-gamma) int_{B_R} |grad v|^2 and
    1/(2 gamma1) int_{B_R} |n x h|^2.
    """
    grid = state.grid
    leslie = coeffs.leslie
    grad_v = fields.gradient(state.v, grid)
    h = molecular_field(ElasticState(grid, state.n), k)
    n_cross_h = np.cross(state.n, h, axis=0)
    mask = fields.ball_mask(grid, center, radius)

    def over_ball(values):
        return float(np.sum(values * mask) * grid.cell_area)

    return LocalSample(
        t=state.t,
        energy=over_ball(energy_density(state, coeffs, k)),
        viscous=leslie.gamma
        / (1 - leslie.gamma)
        * over_ball(np.sum(grad_v**2, axis=(0, 1))),
        relaxation=over_ball(dot(n_cross_h, n_cross_h)) / (2 * coeffs.gamma1),
    )


@attr.s(frozen=True)
class MonotonicityReport:
    """
    Left side, bound shape and their ratio over time, plus the ratio's supremum.
    """

    times = attr.ib()
    lhs = attr.ib()
    shape = attr.ib()
    ratio = attr.ib()

    @property
    def sup_ratio(self):
        """
        sup over time of the empirical ratio.
        """
        return float(np.max(self.ratio)) if len(self.ratio) else 0.0


def monotonicity_report(
    samples, radius, length, initial_ball_energy, initial_energy
):  # pylint: disable=too-many-arguments
    """
    Compare the local energy inequality's left side with its bound shape.

    LHS(s) = int_{B_R} e(s) + int_0^s [viscous + relaxation] and
    shape(s) = (sqrt(s)/R)(1 + s/R^2)^(1/2) E0, with
    ratio = (LHS - int_{B_2R} e0) / shape, reported as 0 where shape is 0.
    """
    if not 0 < radius <= length / 4:
        raise fields.RadiusTooLarge(f"radius must be in (0, {length / 4!r}], got {radius!r}")
    if not samples:
        raise EmptySeries("no local samples")
    times = np.array([sample.t for sample in samples])
    elapsed = times - times[0]
    rates = np.array([sample.viscous + sample.relaxation for sample in samples])
    accumulated = np.zeros(len(samples))
    accumulated[1:] = np.cumsum(0.5 * np.diff(times) * (rates[1:] + rates[:-1]))
    lhs = np.array([sample.energy for sample in samples]) + accumulated
    shape = np.sqrt(elapsed) / radius * np.sqrt(1 + elapsed / radius**2) * initial_energy
    safe = np.where(shape > 0, shape, 1.0)
    ratio = np.where(shape > 0, (lhs - initial_ball_energy) / safe, 0.0)
    return MonotonicityReport(times=times, lhs=lhs, shape=shape, ratio=ratio)


@attr.s(eq=False)
class MonotonicityProbe:
    """
    Observer collecting LocalSamples around one point of a run.

    >>> probe = MonotonicityProbe(center, radius, coeffs, k)
    >>> run(initial, config, coeffs, k, t_end, observers=[probe])
    >>> probe.report().sup_ratio
    """

    center = attr.ib()
    radius = attr.ib()
    coeffs = attr.ib()
    k = attr.ib()
    samples = attr.ib(factory=list)
    initial_ball_energy = attr.ib(default=None)
    initial_energy = attr.ib(default=None)
    length = attr.ib(default=None)

    def __call__(self, _step, state):
        if self.initial_energy is None:
            self.length = state.grid.length
            self.initial_ball_energy = local_energy(
                state, self.coeffs, self.k, self.center, 2 * self.radius
            )
            self.initial_energy = energy(state, self.coeffs, self.k)
        self.samples.append(
            local_sample(state, self.coeffs, self.k, self.center, self.radius)
        )

    def report(self):
        """
        MonotonicityReport of the samples collected so far.
        """
        return monotonicity_report(
            self.samples,
            self.radius,
            self.length,
            self.initial_ball_energy,
            self.initial_energy,
        )
