"""
Initial conditions.

Each preset takes a parameter mapping (config keys without the `initial.`
prefix) and a grid and returns a valid State. Any preset can be combined
with a Taylor-Green velocity through `velocity = taylor-green`.
"""

import numpy as np
from leslie import fields
from leslie.dynamics import State
from leslie.oseen_frank import normalize


class UnknownPreset(ValueError):
    """Raised if no preset of the given name exists."""


class BadParams(ValueError):
    """Raised if preset parameters are out of range or inconsistent."""


def _unit_vector(params):
    director = np.array(params.get("director", (0.0, 0.0, 1.0)), dtype=float)
    norm = np.linalg.norm(director)
    if director.shape != (3,) or norm == 0:
        raise BadParams(f"director must be a nonzero 3-vector, got {director!r}")
    return director / norm


def _constant_director(director, grid):
    return np.broadcast_to(director[:, None, None], (3,) + grid.shape).copy()


def taylor_green(grid, amplitude, wavenumber):
    """
    A (sin(k x1) cos(k x2), -cos(k x1) sin(k x2)) with k = 2 pi m / L.
    """
    if wavenumber < 1 or wavenumber >= grid.n_points // 2:
        raise BadParams(f"wavenumber must be in [1, N/2), got {wavenumber!r}")
    (x1, x2) = grid.coordinates()
    k = 2 * np.pi * wavenumber / grid.length
    return amplitude * np.stack(
        [np.sin(k * x1) * np.cos(k * x2), -np.cos(k * x1) * np.sin(k * x2)]
    )


def uniform(params, grid):
    """
    n = b, v = 0.
    """
    return (np.zeros((2,) + grid.shape), _constant_director(_unit_vector(params), grid))


def taylor_green_preset(params, grid):
    """
    Single-mode solenoidal v, n = b.
    """
    velocity = taylor_green(
        grid, params.get("amplitude", 1.0), params.get("wavenumber", 1)
    )
    return (velocity, _constant_director(_unit_vector(params), grid))


def twist(params, grid):
    """
    n = (cos theta, sin theta, 0) with theta = A sin(2 pi m x1 / L).
    """
    wavenumber = params.get("wavenumber", 1)
    if wavenumber < 0:
        raise BadParams(f"wavenumber must be non-negative, got {wavenumber!r}")
    (x1, _) = grid.coordinates()
    theta = params.get("amplitude", 0.5) * np.sin(2 * np.pi * wavenumber * x1 / grid.length)
    director = np.stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)])
    return (np.zeros((2,) + grid.shape), director)


def _perpendicular(director):
    candidate = np.cross(director, (0.0, 0.0, 1.0))
    if np.linalg.norm(candidate) < 1e-8:
        return np.array([1.0, 0.0, 0.0])
    return candidate / np.linalg.norm(candidate)


def bump(params, grid):
    """
    normalize(b + A exp(-|x - c|^2 / (2 w^2)) e), e a unit vector normal to b.

    Distances are periodic. Defaults: A = 2, c = domain center, w = L / 16.
    """
    director = _unit_vector(params)
    center = params.get("center", (grid.length / 2, grid.length / 2))
    width = params.get("width", grid.length / 16)
    if width <= 0:
        raise BadParams(f"width must be positive, got {width!r}")
    profile = np.exp(-fields.periodic_distance_squared(grid, center) / (2 * width**2))
    perturbation = params.get("amplitude", 2.0) * profile
    field = director[:, None, None] + perturbation * _perpendicular(director)[:, None, None]
    return (np.zeros((2,) + grid.shape), normalize(field))


def snapshot(params, grid):
    """
    Director (and optionally velocity) read from snapshot files.
    """
    (director, _) = fields.read_snapshot(params["director_path"], tag="director")
    if director.grid != grid:
        raise BadParams(f"snapshot grid {director.grid} does not match {grid}")
    velocity = np.zeros((2,) + grid.shape)
    if params.get("velocity_path") is not None:
        (loaded, _) = fields.read_snapshot(params["velocity_path"])
        if loaded.grid != grid or loaded.components != 2:
            raise BadParams("velocity snapshot must be a 2-component field on the run grid")
        velocity = fields.leray_project(loaded.values, grid)
    return (velocity, director.values)


PRESETS = {
    "uniform": uniform,
    "taylor-green": taylor_green_preset,
    "twist": twist,
    "bump": bump,
    "snapshot": snapshot,
}


def initial_preset(name, params, grid):
    """
    Build the initial State of preset `name`.
    """
    if name not in PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    params = dict(params)
    (velocity, director) = PRESETS[name](params, grid)
    overlay = params.get("velocity", "none")
    if overlay == "taylor-green":
        velocity = velocity + taylor_green(
            grid,
            params.get("velocity_amplitude", 1.0),
            params.get("velocity_wavenumber", 1),
        )
    elif overlay != "none":
        raise BadParams(f"velocity must be none or taylor-green, got {overlay!r}")
    return State(grid, velocity, director, 0.0)
