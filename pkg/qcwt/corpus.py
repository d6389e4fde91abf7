"""Test signals shared by the `gen` command and the verification suites.

Every generator also has an analytic profile, profile(x, y) -> (4, ...) array,
so that dilated, rotated or translated copies can be sampled exactly.
"""
import collections
import math

import numpy as np

from qcwt import quaternion
from qcwt.signal import QSignal2D

CorpusSignal = collections.namedtuple('CorpusSignal', 'name signal profile')

RANDOM_BLOBS = 6
RANDOM_WIDTHS = (1.0, 1.5)


def _quaternion_column(value):
    return np.asarray(quaternion.as_quaternion(value), dtype=float)


def gaussian_profile(width=1.0, center=(0.0, 0.0), value=quaternion.ONE):
    """value * exp(-pi |x - center|^2 / width^2)."""
    if width <= 0:
        raise ValueError('Width must be positive, not %s' % width)
    column = _quaternion_column(value)

    def profile(x, y):
        r2 = (np.asarray(x) - center[0]) ** 2 + (np.asarray(y) - center[1]) ** 2
        return column.reshape((4,) + (1,) * np.ndim(r2)) * np.exp(-math.pi * r2 / width ** 2)
    return profile


def anisotropic_profile(sigma1=1.0, sigma2=0.5, angle=math.pi / 4, value=quaternion.ONE):
    """value * exp(-pi ((u / sigma1)^2 + (v / sigma2)^2)), (u, v) = r_{-angle} x."""
    if sigma1 <= 0 or sigma2 <= 0:
        raise ValueError('Widths must be positive, not %s, %s' % (sigma1, sigma2))
    column = _quaternion_column(value)
    cos, sin = math.cos(angle), math.sin(angle)

    def profile(x, y):
        x, y = np.asarray(x), np.asarray(y)
        u = cos * x + sin * y
        v = -sin * x + cos * y
        exponent = -math.pi * ((u / sigma1) ** 2 + (v / sigma2) ** 2)
        return column.reshape((4,) + (1,) * np.ndim(u)) * np.exp(exponent)
    return profile


def random_profile(seed, extent, blobs=RANDOM_BLOBS):
    """A sum of Gaussian blobs with random quaternion amplitudes, widths and centers.

    Centers stay within a quarter of `extent` of the origin so that the
    signal decays inside the grid.
    """
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(blobs):
        value = quaternion.Quaternion(*rng.normal(size=4))
        width = rng.uniform(*RANDOM_WIDTHS)
        center = tuple(rng.uniform(-extent / 4.0, extent / 4.0, size=2))
        parts.append(gaussian_profile(width, center, value))

    def profile(x, y):
        return sum(part(x, y) for part in parts)
    return profile


def _sample(grid, profile):
    x, y = grid.coordinates()
    return QSignal2D(grid, profile(x, y))


def _extent(grid):
    return min(grid.n1 * grid.dx, grid.n2 * grid.dy) / 2.0


def gaussian(grid, width=1.0, center=(0.0, 0.0), value=quaternion.ONE):
    profile = gaussian_profile(width, center, value)
    return CorpusSignal('gaussian', _sample(grid, profile), profile)


def anisotropic_gaussian(grid, sigma1=1.0, sigma2=0.5, angle=math.pi / 4, value=quaternion.ONE):
    profile = anisotropic_profile(sigma1, sigma2, angle, value)
    return CorpusSignal('anisotropic-gaussian', _sample(grid, profile), profile)


def random_bandlimited(grid, seed=0, blobs=RANDOM_BLOBS):
    profile = random_profile(seed, _extent(grid), blobs)
    return CorpusSignal('random-bandlimited-%s' % seed, _sample(grid, profile), profile)


def impulse(grid, at=(0.0, 0.0), value=quaternion.E3):
    """`value` at the sample `at`, zero elsewhere. `at` must be a grid point."""
    bx, by = grid.axes()
    i = int(round((at[0] - grid.x0) / grid.dx))
    j = int(round((at[1] - grid.y0) / grid.dy))
    if not (0 <= i < grid.n1 and 0 <= j < grid.n2) or \
            abs(bx[i] - at[0]) > 1e-9 * grid.dx or abs(by[j] - at[1]) > 1e-9 * grid.dy:
        raise ValueError('%s is not a sample of %s' % (tuple(at), grid))
    data = np.zeros((4,) + grid.shape)
    data[:, i, j] = quaternion.as_quaternion(value)
    return CorpusSignal('impulse', QSignal2D(grid, data), None)


KINDS = {
    'gaussian': gaussian,
    'anisotropic-gaussian': anisotropic_gaussian,
    'random-bandlimited': random_bandlimited,
    'impulse': impulse,
}


def generate(kind, grid, **params):
    try:
        generator = KINDS[kind]
    except KeyError:
        raise ValueError('Unknown signal kind %s, use one of %s' % (kind, ', '.join(sorted(KINDS))))
    return generator(grid, **params)


def default_corpus(grid, seed=0, count=2):
    """The smooth decaying signals every inequality check runs on."""
    corpus = [gaussian(grid), anisotropic_gaussian(grid)]
    corpus.extend(random_bandlimited(grid, seed + i) for i in range(count))
    return corpus
