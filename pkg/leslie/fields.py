"""
Periodic spectral discretization on the square torus [0, L)^2.

Field samples are numpy arrays whose last two axes are (x1, x2) on an N x N
grid; leading axes index components. Transforms are real FFTs over the last
two axes, so every operator here is a Fourier multiplier.
"""

import attr
import numpy as np

TOL_UNIT = 1e-12
TOL_DIV = 1e-10

SNAPSHOT_MAGIC = "EL2D"


class RadiusTooLarge(ValueError):
    """Raised if a ball radius is not in (0, L/2] (or the tighter bound asked for)."""


class InvalidField(ValueError):
    """Raised if field samples do not satisfy the invariants of their tag."""


class SnapshotFormatError(ValueError):
    """Raised if a snapshot file does not follow the EL2D layout."""


# converters rather than validators: the init=False defaults of Grid divide by these
def _grid_size(value):
    value = int(value)
    if value < 8 or value % 2 != 0:
        raise ValueError(f"n_points must be even and at least 8, got {value!r}")
    return value


def _period(value):
    value = float(value)
    if not value > 0:
        raise ValueError(f"length must be positive, got {value!r}")
    return value


def readonly(values):
    """
    Float copy of `values` that cannot be written to.
    """
    array = np.array(values, dtype=float)
    array.flags.writeable = False
    return array


@attr.s(frozen=True)
class Grid:  # pylint: disable=too-few-public-methods
    """
    N x N periodic grid of period L per axis.

    `modes1`/`modes2` are the integer frequencies of the real-FFT layout,
    `k1`/`k2` the derivative wavenumbers 2 pi m / L with the Nyquist mode
    zeroed (so spectral differentiation stays real and skew-adjoint).
    """

    n_points = attr.ib(converter=_grid_size)
    length = attr.ib(converter=_period)
    modes1 = attr.ib(init=False, eq=False, repr=False)
    modes2 = attr.ib(init=False, eq=False, repr=False)
    k1 = attr.ib(init=False, eq=False, repr=False)
    k2 = attr.ib(init=False, eq=False, repr=False)
    k_squared = attr.ib(init=False, eq=False, repr=False)

    @modes1.default
    def _modes1(self):
        return np.fft.fftfreq(self.n_points, 1 / self.n_points)[:, None]

    @modes2.default
    def _modes2(self):
        return np.fft.rfftfreq(self.n_points, 1 / self.n_points)[None, :]

    @k1.default
    def _k1(self):
        return self._derivative_wavenumbers(self.modes1)

    @k2.default
    def _k2(self):
        return self._derivative_wavenumbers(self.modes2)

    @k_squared.default
    def _k_squared(self):
        return self.k1**2 + self.k2**2

    def _derivative_wavenumbers(self, modes):
        nyquist = np.abs(modes) == self.n_points // 2
        return np.where(nyquist, 0.0, modes * (2 * np.pi / self.length))

    @property
    def spacing(self):
        """
        Grid spacing L / N.
        """
        return self.length / self.n_points

    @property
    def cell_area(self):
        """
        Quadrature weight (L / N)^2.
        """
        return self.spacing**2

    @property
    def shape(self):
        """
        (N, N)
        """
        return (self.n_points, self.n_points)

    def points(self):
        """
        The 1-D sample positions j L / N.
        """
        return np.arange(self.n_points) * self.spacing

    def coordinates(self):
        """
        (x1, x2) sample positions, indexed [i1, i2].
        """
        points = self.points()
        return np.meshgrid(points, points, indexing="ij")

    def mode_magnitude(self):
        """
        |m| for the integer frequency vector of every spectral coefficient.
        """
        return np.sqrt(self.modes1**2 + self.modes2**2)


@attr.s(frozen=True)
class Field:
    """
    Samples of a scalar (c = 1) or vector (c = 2, 3) field on a grid.

    Tagged `director` fields are unit 3-vectors, tagged `velocity` fields are
    divergence-free 2-vectors; the samples are copied and made read-only.
    """

    grid = attr.ib()
    values = attr.ib(converter=readonly)
    tag = attr.ib(default=None)

    @values.validator
    def _check_values(self, _attribute, values):
        if values.shape[-2:] != self.grid.shape:
            raise InvalidField(f"samples of shape {values.shape} on a {self.grid.shape} grid")
        if values.ndim == 2:
            components = 1
        elif values.ndim == 3 and values.shape[0] in (1, 2, 3):
            components = values.shape[0]
        else:
            raise InvalidField(f"unsupported sample shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidField("samples are not all finite")
        if self.tag == "director":
            if components != 3:
                raise InvalidField("a director has 3 components")
            check_unit(values)
        elif self.tag == "velocity":
            if components != 2:
                raise InvalidField("a velocity has 2 components")
            check_solenoidal(values, self.grid)
        elif self.tag is not None:
            raise InvalidField(f"unknown field tag {self.tag!r}")

    @property
    def components(self):
        """
        Number of components (1 for a scalar field).
        """
        return 1 if self.values.ndim == 2 else self.values.shape[0]


def unit_defect(n):
    """
    max | |n| - 1 | over the grid.
    """
    return float(np.max(np.abs(np.sqrt(np.sum(n**2, axis=0)) - 1)))


def check_unit(n, tolerance=TOL_UNIT):
    """
    Raise InvalidField unless n is a unit vector at every sample.
    """
    defect = unit_defect(n)
    if defect > tolerance:
        raise InvalidField(f"director deviates from unit length by {defect:.3g}")


def check_solenoidal(v, grid, tolerance=TOL_DIV):
    """
    Raise InvalidField unless div v vanishes to `tolerance`.
    """
    defect = sup_norm(divergence2(v, grid))
    if defect > tolerance:
        raise InvalidField(f"velocity divergence is {defect:.3g}")


def transform(values):
    """
    Real FFT over the last two axes.
    """
    return np.fft.rfft2(values, axes=(-2, -1))


def inverse(spectrum, grid):
    """
    Inverse of `transform` back to N x N samples.
    """
    return np.fft.irfft2(spectrum, s=grid.shape, axes=(-2, -1))


def apply_multiplier(values, grid, multiplier):
    """
    Multiply every spectral coefficient of `values` by `multiplier`.
    """
    return inverse(transform(values) * multiplier, grid)


def diff(values, grid, axis):
    """
    Spectral partial derivative along x1 (axis=1) or x2 (axis=2).
    """
    if axis == 1:
        wavenumber = grid.k1
    elif axis == 2:
        wavenumber = grid.k2
    else:
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")
    return apply_multiplier(values, grid, 1j * wavenumber)


def gradient(values, grid):
    """
    Stack (d1 f, d2 f): the leading axis is the derivative direction.
    """
    spectrum = transform(values)
    return np.stack(
        [inverse(1j * grid.k1 * spectrum, grid), inverse(1j * grid.k2 * spectrum, grid)]
    )


def divergence2(values, grid):
    """
    d1 f^1 + d2 f^2 of the first two components.
    """
    spectrum = transform(values[:2])
    return inverse(1j * (grid.k1 * spectrum[0] + grid.k2 * spectrum[1]), grid)


def tensor_divergence(tensor, grid):
    """
    (div sigma)_j = d1 sigma_1j + d2 sigma_2j for every column j.

    Row 3 never enters since d3 = 0; the planar momentum balance uses
    columns 1, 2 of the result.
    """
    spectrum = transform(tensor[:2])
    return inverse(1j * (grid.k1 * spectrum[0] + grid.k2 * spectrum[1]), grid)


def laplacian(values, grid):
    """
    d1^2 f + d2^2 f.
    """
    return apply_multiplier(values, grid, -grid.k_squared)


def curl3(n, grid):
    """
    Three-dimensional curl of a 3-component field with d3 = 0.
    """
    grad = gradient(n, grid)
    return np.stack([grad[1, 2], -grad[0, 2], grad[0, 1] - grad[1, 0]])


def scalar_curl(v, grid):
    """
    d1 v^2 - d2 v^1 of a planar velocity.
    """
    return diff(v[1], grid, 1) - diff(v[0], grid, 2)


def leray_spectrum(spectrum, grid):
    """
    Solenoidal part of a 2-component spectrum; identity where |k| = 0.
    """
    k_squared = np.where(grid.k_squared == 0, 1.0, grid.k_squared)
    k_dot = (grid.k1 * spectrum[0] + grid.k2 * spectrum[1]) / k_squared
    return np.stack([spectrum[0] - grid.k1 * k_dot, spectrum[1] - grid.k2 * k_dot])


def leray_project(v, grid):
    """
    Orthogonal projection of a planar vector field onto its divergence-free part.
    """
    return inverse(leray_spectrum(transform(v), grid), grid)


def poisson_solve(source, grid):
    """
    Zero-mean solution p of Laplacian(p) = source.
    """
    spectrum = transform(source)
    k_squared = np.where(grid.k_squared == 0, 1.0, grid.k_squared)
    solution = np.where(grid.k_squared == 0, 0.0, -spectrum / k_squared)
    return inverse(solution, grid)


def smoothstep(u):
    """
    C^1 smoothstep u^2 (3 - 2u) on [0, 1].
    """
    return u * u * (3 - 2 * u)


def cutoff_profile(r):
    """
    1 for r <= 1, 0 for r >= 2, smoothstep(2 - r) in between.
    """
    return smoothstep(np.clip(2 - np.asarray(r, dtype=float), 0.0, 1.0))


def mollifier_symbol(grid, cutoff):
    """
    Fourier symbol phi(|m| / K) of the mollifier that keeps modes |m| <= K.
    """
    if cutoff < 1:
        raise ValueError(f"mollifier cutoff must be at least 1, got {cutoff!r}")
    return cutoff_profile(grid.mode_magnitude() / cutoff)


def mollify(values, grid, cutoff):
    """
    Smooth low-pass filter retaining |m| <= K exactly and removing |m| >= 2K.
    """
    return apply_multiplier(values, grid, mollifier_symbol(grid, cutoff))


def dealias_mask(grid):
    """
    Two-thirds rule: keep integer frequencies |m_i| < N / 3 on both axes.
    """
    limit = grid.n_points / 3
    return (np.abs(grid.modes1) < limit) & (np.abs(grid.modes2) < limit)


def dealias(values, grid):
    """
    Truncate `values` to the two-thirds band.
    """
    return apply_multiplier(values, grid, dealias_mask(grid))


def integrate(values, grid):
    """
    Grid quadrature over the torus (spectrally accurate for periodic data).

    Sums over the last two axes; leading axes are kept.
    """
    return np.sum(values, axis=(-2, -1)) * grid.cell_area


def l2_norm_squared(values, grid):
    """
    Integral of the squared samples, summed over components.
    """
    return float(np.sum(integrate(values**2, grid)))


def spectral_l2_norm_squared(values, grid):
    """
    Same quantity as `l2_norm_squared`, evaluated from the spectrum (Parseval).
    """
    spectrum = transform(values)
    weights = np.full(grid.modes2.shape, 2.0)
    weights[..., 0] = 1.0
    if grid.n_points % 2 == 0:
        weights[..., -1] = 1.0
    total = np.sum(weights * np.abs(spectrum) ** 2)
    return float(total * grid.length**2 / grid.n_points**4)


def sup_norm(values):
    """
    Grid maximum of |values|; a lower bound of the true supremum.
    """
    return float(np.max(np.abs(values)))


def periodic_distance_squared(grid, center):
    """
    Squared periodic distance from `center` to every grid point.
    """
    total = 0.0
    for (coordinate, origin) in zip(grid.coordinates(), center):
        delta = np.abs(coordinate - origin) % grid.length
        delta = np.minimum(delta, grid.length - delta)
        total = total + delta**2
    return total


def _check_radius(grid, radius, limit):
    if not 0 < radius <= limit:
        raise RadiusTooLarge(f"radius must be in (0, {limit!r}], got {radius!r}")


def ball_mask(grid, center, radius):
    """
    Indicator of the periodic ball B_R(center) sampled on the grid.
    """
    _check_radius(grid, radius, grid.length / 2)
    return periodic_distance_squared(grid, center) <= radius**2


def ball_integral(values, grid, center, radius):
    """
    Integral of a scalar field over the periodic ball B_R(center).
    """
    return float(np.sum(values * ball_mask(grid, center, radius)) * grid.cell_area)


def ball_integrals(values, grid, radius):
    """
    Ball integrals of a scalar field centered at every grid point.

    Computed as a periodic correlation with the ball indicator, so entry
    [i1, i2] is the integral over B_R centred at (i1 L/N, i2 L/N).
    """
    mask = ball_mask(grid, (0.0, 0.0), radius)
    spectrum = transform(values) * np.conj(transform(mask.astype(float)))
    return inverse(spectrum, grid) * grid.cell_area


def write_snapshot(path, field, t):
    """
    Write a field as an `EL2D <N> <L> <components> <t>` header plus raw samples.

    Samples are little-endian float64, component-contiguous and row-major.
    """
    grid = field.grid
    header = f"{SNAPSHOT_MAGIC} {grid.n_points} {grid.length!r} {field.components} {float(t)!r}\n"
    with open(path, "wb") as snapshot:
        snapshot.write(header.encode("ascii"))
        snapshot.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_snapshot(path, tag=None):
    """
    Read a snapshot file back into (Field, t).
    """
    with open(path, "rb") as snapshot:
        header = snapshot.readline()
        payload = snapshot.read()
    try:
        [magic, n_points, length, components, t] = header.decode("ascii").split()
        if magic != SNAPSHOT_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        grid = Grid(int(n_points), float(length))
        components = int(components)
        values = np.frombuffer(payload, dtype="<f8")
        shape = grid.shape if components == 1 else (components,) + grid.shape
        values = values.reshape(shape)
    except ValueError as exc:
        raise SnapshotFormatError(f"unable to read snapshot: {path}") from exc
    return (Field(grid, values, tag=tag), float(t))
