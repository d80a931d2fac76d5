"""
Run configuration: a flat `section.key = value` text file.

Blank lines and `#` comments are ignored. Every key is known in advance and
converted on parsing; unknown keys are rejected.

    grid.n_points = 64
    grid.length = 6.283185307179586
    coefficients.alpha2 = -1
    ...
"""

import pathlib
import attr
from leslie import coefficients, fields, presets
from leslie.dynamics import Scheme, SolverConfig
from leslie.friendly_config import FriendlyConfig
from leslie.log import log, warn


class ParseError(ValueError):
    """Raised if a config line cannot be parsed; names the line and key."""

    def __init__(self, message, line_number=None, key=None):
        location = "" if line_number is None else f"line {line_number}: "
        super().__init__(f"{location}{message}")
        self.line_number = line_number
        self.key = key


class ConfigValidationError(ValueError):
    """Raised if a parsed config violates an invariant; names the invariant."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def strip_whitespace(string):
    """
    Converter to strip whitespace from a provided string.
    """
    return string.strip()


def optional(converter):
    """
    Returns a converter for a value which can optionally be empty (None).
    """

    def convert(string):
        if string is None or string.strip() == "":
            return None
        return converter(string)

    return convert


def on_off(string):
    """
    Converter for on/off switches (also true/false, yes/no, 1/0).
    """
    value = string.strip().lower()
    if value in {"on", "true", "yes", "1"}:
        return True
    if value in {"off", "false", "no", "0"}:
        return False
    raise ValueError(f"expected on or off, got {string!r}")


def vector(count):
    """
    Returns a converter for `count` whitespace-separated floats.
    """

    def convert(string):
        values = tuple(float(part) for part in string.split())
        if len(values) != count:
            raise ValueError(f"expected {count} numbers, got {string!r}")
        return values

    return convert


def point_list(string):
    """
    Converter for `x1 x2; x1 x2; ...` point lists (empty allowed).
    """
    return [vector(2)(part) for part in string.split(";") if part.strip() != ""]


def path(string):
    """
    Converter to a pathlib.Path.
    """
    return pathlib.Path(string.strip())


KEY_CONVERTERS = {
    "grid.n_points": int,
    "grid.length": float,
    **{f"coefficients.alpha{i}": float for i in range(1, 7)},
    "coefficients.gamma": float,
    "coefficients.reynolds": float,
    "coefficients.k1": float,
    "coefficients.k2": float,
    "coefficients.k3": float,
    "solver.dt": float,
    "solver.t_end": float,
    "solver.scheme": Scheme.for_tag,
    "solver.mollify_cutoff": optional(float),
    "solver.dealias": on_off,
    "solver.renormalize": on_off,
    "solver.frozen_velocity": on_off,
    "initial.preset": strip_whitespace,
    "initial.director": vector(3),
    "initial.amplitude": float,
    "initial.wavenumber": int,
    "initial.center": vector(2),
    "initial.width": float,
    "initial.velocity": strip_whitespace,
    "initial.velocity_amplitude": float,
    "initial.velocity_wavenumber": int,
    "initial.director_path": path,
    "initial.velocity_path": optional(path),
    "output.directory": path,
    "output.snapshot_stride": int,
    "output.ledger_stride": int,
    "monitors.radius": optional(float),
    "monitors.stride": int,
    "monitors.points": point_list,
}

DEFAULTS = {
    "solver.scheme": "rk4",
    "solver.mollify_cutoff": "",
    "solver.dealias": "on",
    "solver.renormalize": "on",
    "solver.frozen_velocity": "off",
    "initial.director": "0 0 1",
    "initial.velocity": "none",
    "output.directory": "run",
    "output.snapshot_stride": "0",
    "output.ledger_stride": "1",
    "monitors.radius": "",
    "monitors.stride": "4",
    "monitors.points": "",
}


def parse_lines(lines):
    """
    Parse config lines into (line_number, key, raw value, converted value).
    """
    for (line_number, line) in enumerate(lines, 1):
        content = line.split("#", 1)[0].strip()
        if content == "":
            continue
        parts = content.split("=", maxsplit=1)
        if len(parts) != 2:
            raise ParseError(f"expected `key = value`: {line.rstrip()}", line_number)
        [key, raw] = (part.strip() for part in parts)
        if key not in KEY_CONVERTERS:
            raise ParseError(f"unknown key {key!r}", line_number, key)
        try:
            yield (line_number, key, raw, KEY_CONVERTERS[key](raw))
        except ValueError as exc:
            raise ParseError(f"unable to parse {key}: {raw!r}", line_number, key) from exc


@attr.s(frozen=True)
class InitialConfig:  # pylint: disable=too-few-public-methods
    """
    Preset name and its parameters (keys without the `initial.` prefix).
    """

    preset = attr.ib()
    params = attr.ib(factory=dict)


@attr.s(frozen=True)
class OutputConfig:  # pylint: disable=too-few-public-methods
    """
    Where and how often artifacts are written; a snapshot stride of 0 means
    initial and final snapshots only.
    """

    directory = attr.ib(converter=pathlib.Path)
    snapshot_stride = attr.ib(default=0)
    ledger_stride = attr.ib(default=1)


@attr.s(frozen=True)
class MonitorConfig:  # pylint: disable=too-few-public-methods
    """
    Ball radius, center stride and reference points of the local monitors.
    """

    radius = attr.ib()
    stride = attr.ib(default=4)
    points = attr.ib(factory=list)


@attr.s(frozen=True)
class RunConfig:  # pylint: disable=too-many-instance-attributes
    """
    A fully validated run configuration.
    """

    grid = attr.ib()
    coefficients = attr.ib()
    elastic = attr.ib()
    solver = attr.ib()
    t_end = attr.ib()
    initial = attr.ib()
    output = attr.ib()
    monitors = attr.ib()
    echo = attr.ib(factory=dict, repr=False)
    admissible = attr.ib(default=True)

    def echo_lines(self):
        """
        Normalized `key = value` lines, sorted by key.
        """
        return [f"{key} = {value}" for (key, value) in sorted(self.echo.items())]


def _validated(invariant, build):
    try:
        return build()
    except ValueError as exc:
        raise ConfigValidationError(invariant, str(exc)) from exc


def _derived_coefficients(config):
    leslie = _validated(
        "coefficients",
        lambda: coefficients.LeslieCoefficients(
            *(config[f"coefficients.alpha{i}"] for i in range(1, 7)),
            gamma=config["coefficients.gamma"],
            reynolds=config["coefficients.reynolds"],
        ),
    )
    try:
        return coefficients.derive(leslie)
    except coefficients.ParodiViolation as exc:
        raise ConfigValidationError("Parodi", str(exc)) from exc
    except coefficients.NonpositiveGamma1 as exc:
        raise ConfigValidationError("gamma1 > 0", str(exc)) from exc


def _initial_config(config, base):
    preset = config["initial.preset"]
    if preset not in presets.PRESETS:
        raise ConfigValidationError(
            "preset", f"unknown preset {preset!r}; expected one of {sorted(presets.PRESETS)}"
        )
    params = {
        key.removeprefix("initial."): config[key]
        for key in config.keys()
        if key.startswith("initial.") and key != "initial.preset"
    }
    for key in ("director_path", "velocity_path"):
        if params.get(key) is not None:
            params[key] = base / params[key]
        if params.get(key) is not None and not params[key].exists():
            raise ConfigValidationError("file exists", f"{params[key]} does not exist")
    if preset == "snapshot" and params.get("director_path") is None:
        raise ConfigValidationError(
            "file exists", "the snapshot preset needs initial.director_path"
        )
    return InitialConfig(preset=preset, params=params)


def _monitor_config(config, grid):
    radius = config["monitors.radius"]
    if radius is None:
        radius = grid.length / 8
    if not 0 < radius <= grid.length / 4:
        raise ConfigValidationError(
            "monitor radius", f"monitors.radius must be in (0, L/4], got {radius!r}"
        )
    stride = config["monitors.stride"]
    if stride < 1:
        raise ConfigValidationError("monitor stride", f"must be at least 1, got {stride!r}")
    points = config["monitors.points"] or [(grid.length / 2, grid.length / 2)]
    return MonitorConfig(radius=radius, stride=stride, points=points)


def _output_config(config):
    output = OutputConfig(
        directory=config["output.directory"],
        snapshot_stride=config["output.snapshot_stride"],
        ledger_stride=config["output.ledger_stride"],
    )
    if output.snapshot_stride < 0 or output.ledger_stride < 1:
        raise ConfigValidationError(
            "output strides",
            "output.snapshot_stride must be >= 0 and output.ledger_stride >= 1",
        )
    return output


def build_config(values, raw, base=pathlib.Path("."), source="the config file"):
    """
    Validate parsed values (layered over DEFAULTS) into a RunConfig.

    Relative snapshot paths are resolved against `base`; `source` names the
    file in missing-key messages.
    """
    default_values = {key: KEY_CONVERTERS[key](value) for (key, value) in DEFAULTS.items()}
    config = FriendlyConfig(values, default_values, source=source)
    try:
        grid = _validated(
            "grid", lambda: fields.Grid(config["grid.n_points"], config["grid.length"])
        )
        derived = _derived_coefficients(config)
        elastic = _validated(
            "elastic constants",
            lambda: coefficients.ElasticConstants(
                config["coefficients.k1"],
                config["coefficients.k2"],
                config["coefficients.k3"],
            ),
        )
        solver = _validated(
            "solver",
            lambda: SolverConfig(
                dt=config["solver.dt"],
                scheme=config["solver.scheme"],
                mollify_cutoff=config["solver.mollify_cutoff"],
                dealias=config["solver.dealias"],
                renormalize=config["solver.renormalize"],
                frozen_velocity=config["solver.frozen_velocity"],
            ),
        )
        t_end = config["solver.t_end"]
        if t_end < 0:
            raise ConfigValidationError("t_end", f"solver.t_end must be >= 0, got {t_end!r}")
        initial = _initial_config(config, base)
        output = _output_config(config)
        monitors = _monitor_config(config, grid)
    except KeyError as exc:
        raise ConfigValidationError("required key", exc.args[0]) from exc

    admissible = coefficients.admissible(derived.betas, dim=2)
    if admissible:
        log(f"coefficients admissible (2-D): beta={derived.betas}")
    else:
        warn(f"coefficients NOT admissible (2-D): beta={derived.betas}")

    echo = {**DEFAULTS, **raw}
    return RunConfig(
        grid=grid,
        coefficients=derived,
        elastic=elastic,
        solver=solver,
        t_end=t_end,
        initial=initial,
        output=output,
        monitors=monitors,
        echo=echo,
        admissible=admissible,
    )


def parse_config(lines):
    """
    Parse config lines into (converted values, raw strings); duplicate keys are rejected.
    """
    values = {}
    raw = {}
    for (line_number, key, raw_value, value) in parse_lines(lines):
        if key in values:
            raise ParseError(f"duplicate key {key!r}", line_number, key)
        values[key] = value
        raw[key] = raw_value
    return (values, raw)


def load_config(config_path):
    """
    Read, parse and validate a config file.
    """
    with open(config_path, encoding="utf-8") as config_file:
        (values, raw) = parse_config(config_file)
    return build_config(
        values, raw, base=pathlib.Path(config_path).parent, source=str(config_path)
    )
