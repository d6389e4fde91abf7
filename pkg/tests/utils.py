from configparser import ConfigParser

import numpy as np

from qcwt import quaternion
from qcwt.signal import Grid2D, QSignal2D


def make_conf():
    conf = ConfigParser()
    conf.add_section('qcwt')
    conf.add_section('tolerances')
    return conf


def small_grid(n=32, extent=4.0):
    return Grid2D.centered(n, extent)


def gaussian_signal(grid, width=1.0, value=quaternion.ONE):
    return QSignal2D.from_function(
        grid, lambda x, y: np.exp(-np.pi * (x ** 2 + y ** 2) / width ** 2), value)


def random_signal(grid, seed=0):
    """Smooth random quaternion signal that decays inside `grid`."""
    rng = np.random.default_rng(seed)
    x, y = grid.coordinates()
    envelope = np.exp(-np.pi * (x ** 2 + y ** 2) / 2.0)
    data = rng.normal(size=(4, 1, 1)) * envelope
    data = data + rng.normal(size=(4, 1, 1)) * x * envelope
    return QSignal2D(grid, data)


def random_quaternions(seed, count):
    rng = np.random.default_rng(seed)
    return [quaternion.Quaternion(*rng.normal(size=4)) for _ in range(count)]


def mexican_hat_signal(grid, width=1.0, center=(0.0, 0.0), value=quaternion.ONE):
    """Zero mean (1/pi - r^2) exp(-pi r^2), r = |x - center| / width."""
    def profile(x, y):
        r2 = ((x - center[0]) ** 2 + (y - center[1]) ** 2) / width ** 2
        return (1.0 / np.pi - r2) * np.exp(-np.pi * r2)
    return QSignal2D.from_function(grid, profile, value)
