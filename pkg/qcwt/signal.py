"""Sampled quaternion signals on uniform grids, and the SIM(2) sampling grid.

Signal data is a float array of shape (4, n1, n2): axis 0 holds the
components, axis 1 runs along x (t1) and axis 2 along y (t2).
"""
import collections
import logging
import math

import numpy as np
import scipy.ndimage

from qcwt import quaternion
from qcwt.errors import FormatError, GridMismatchError

logger = logging.getLogger('qcwt')

QSF_MAGIC = b'QSF1'
QSF_HEADER = np.dtype([('magic', 'S4'),
                       ('n1', '<u4'), ('n2', '<u4'),
                       ('x0', '<f8'), ('y0', '<f8'),
                       ('dx', '<f8'), ('dy', '<f8')])


class Grid2D(collections.namedtuple('Grid2D', 'n1 n2 x0 y0 dx dy')):
    """Uniform grid with sample (i, j) at (x0 + i*dx, y0 + j*dy)."""
    __slots__ = ()

    def __new__(cls, n1, n2, x0, y0, dx, dy):
        n1, n2 = int(n1), int(n2)
        if n1 < 2 or n2 < 2:
            raise ValueError('A grid needs at least 2 samples per axis, not %sx%s' % (n1, n2))
        if not (dx > 0 and dy > 0):
            raise ValueError('Grid spacings must be positive, not %s, %s' % (dx, dy))
        return super(Grid2D, cls).__new__(cls, n1, n2, float(x0), float(y0),
                                          float(dx), float(dy))

    @classmethod
    def centered(cls, n, extent, n2=None):
        """The n x n grid covering [-extent, extent) on both axes."""
        if extent <= 0:
            raise ValueError('Extent must be positive, not %s' % extent)
        if n2 is None:
            n2 = n
        return cls(n, n2, -extent, -extent, 2.0 * extent / n, 2.0 * extent / n2)

    @property
    def shape(self):
        return (self.n1, self.n2)

    @property
    def cell_area(self):
        return self.dx * self.dy

    def axes(self):
        return (self.x0 + self.dx * np.arange(self.n1),
                self.y0 + self.dy * np.arange(self.n2))

    def coordinates(self):
        x, y = self.axes()
        return np.meshgrid(x, y, indexing='ij')

    def same_as(self, other):
        return (self.shape == other.shape and
                np.allclose(self[2:], other[2:], rtol=1e-12, atol=1e-12 * max(self.dx, self.dy)))

    def sublattice(self, stride):
        """Every `stride`-th sample of this grid, starting at the first one."""
        stride = int(stride)
        if stride < 1:
            raise ValueError('Stride must be at least 1, not %s' % stride)
        return Grid2D(self.n1 // stride, self.n2 // stride, self.x0, self.y0,
                      self.dx * stride, self.dy * stride)

    def lattice_offsets(self, other):
        """Express `other` as (stride1, stride2, offset1, offset2) in units of this grid.

        Returns None when the samples of `other` are not samples of this
        (infinitely extended) lattice.
        """
        values = ((other.dx / self.dx), (other.dy / self.dy),
                  (other.x0 - self.x0) / self.dx, (other.y0 - self.y0) / self.dy)
        rounded = tuple(int(round(v)) for v in values)
        if any(abs(v - r) > 1e-9 for v, r in zip(values, rounded)):
            return None
        if rounded[0] < 1 or rounded[1] < 1:
            return None
        return rounded

    def is_origin_aligned(self):
        """True when the point (0, 0) is a lattice point of this grid."""
        return all(abs(v - round(v)) < 1e-9 for v in (self.x0 / self.dx, self.y0 / self.dy))


class QSignal2D(object):
    """A quaternion-valued function sampled on a Grid2D.

    The data array is made read-only; operations return new signals.
    """

    def __init__(self, grid, data):
        data = np.array(data, dtype=float)
        if data.shape != (4,) + grid.shape:
            raise ValueError('Data of shape %s does not fit a %sx%s grid'
                             % (data.shape, grid.n1, grid.n2))
        if not np.all(np.isfinite(data)):
            raise ValueError('Signal data must be finite')
        data.flags.writeable = False
        self.grid = grid
        self.data = data

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros((4,) + grid.shape))

    @classmethod
    def from_function(cls, grid, func, value=quaternion.ONE):
        """Sample the real function func(x, y) and multiply it by the quaternion `value`."""
        x, y = grid.coordinates()
        real = func(x, y)
        return cls(grid, np.asarray(value, dtype=float)[:, None, None] * real)

    @classmethod
    def from_real(cls, grid, real):
        data = np.zeros((4,) + grid.shape)
        data[0] = real
        return cls(grid, data)

    def _check(self, other):
        if not self.grid.same_as(other.grid):
            raise GridMismatchError('Signals on different grids: %s and %s'
                                    % (self.grid, other.grid))

    def __add__(self, other):
        self._check(other)
        return QSignal2D(self.grid, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return QSignal2D(self.grid, self.data - other.data)

    def __neg__(self):
        return QSignal2D(self.grid, -self.data)

    def __mul__(self, scalar):
        """Right multiplication by a quaternion (or real) constant."""
        q = np.asarray(quaternion.as_quaternion(scalar))
        return QSignal2D(self.grid, quaternion.qmul(self.data, q[:, None, None]))

    def __rmul__(self, scalar):
        """Left multiplication by a quaternion (or real) constant."""
        q = np.asarray(quaternion.as_quaternion(scalar))
        return QSignal2D(self.grid, quaternion.qmul(q[:, None, None], self.data))

    def conj(self):
        return QSignal2D(self.grid, quaternion.qconj(self.data))

    def modulus(self):
        return quaternion.qmodulus(self.data)

    def __repr__(self):
        return '<QSignal2D %sx%s dx=%g dy=%g>' % (self.grid.n1, self.grid.n2,
                                                   self.grid.dx, self.grid.dy)


def inner_product(f, g):
    """(f, g) = sum f(x) conj(g(x)) dA, a quaternion."""
    f._check(g)
    product = quaternion.qmul(f.data, quaternion.qconj(g.data))
    return quaternion.Quaternion.from_array(product.sum(axis=(1, 2)) * f.grid.cell_area)


def l2_norm(f):
    return math.sqrt(float(quaternion.qabs2(f.data).sum()) * f.grid.cell_area)


def similitude_points(grid, a, theta, b):
    """The points r_{-theta}((x - b) / a) for every sample x of `grid`."""
    if a <= 0:
        raise ValueError('Scale must be positive, not %s' % a)
    x, y = grid.coordinates()
    u = (x - b[0]) / a
    v = (y - b[1]) / a
    cos, sin = math.cos(theta), math.sin(theta)
    return cos * u + sin * v, -sin * u + cos * v


def sample_at(f, x, y, order=1):
    """Interpolate f at physical points, zero outside the grid."""
    grid = f.grid
    coords = np.array([(x - grid.x0) / grid.dx, (y - grid.y0) / grid.dy])
    return np.array([scipy.ndimage.map_coordinates(plane, coords, order=order,
                                                   mode='constant', cval=0.0)
                     for plane in f.data])


def resample_similitude(f, a, theta, b):
    """x -> (1/a) f(r_{-theta}((x - b) / a)), by bilinear interpolation."""
    x, y = similitude_points(f.grid, a, theta, b)
    return QSignal2D(f.grid, sample_at(f, x, y) / a)


class SimGrid(object):
    """Sampling of SIM(2): scales, angles and a lattice of translations.

    `weights[j, k]` approximates the Haar measure a^{-3} da dtheta of the
    (j, k) cell; the translation cell area is `grid.cell_area`.
    """

    def __init__(self, scales, angles, grid, weights, scale_edges):
        self.scales = np.asarray(scales, dtype=float)
        self.angles = np.asarray(angles, dtype=float)
        self.grid = grid
        self.weights = np.asarray(weights, dtype=float)
        self.scale_edges = tuple(scale_edges)
        if np.any(self.scales <= 0) or np.any(np.diff(self.scales) <= 0):
            raise ValueError('Scales must be positive and ascending')
        if self.weights.shape != (len(self.scales), len(self.angles)):
            raise ValueError('Weights must have one entry per (scale, angle) pair')
        if np.any(self.weights <= 0):
            raise ValueError('Haar weights must be positive')

    @classmethod
    def log_uniform(cls, smin, smax, n_scales, n_angles, grid):
        """Midpoint log-spaced scales over [smin, smax] and equispaced angles."""
        if not 0 < smin < smax:
            raise ValueError('Need 0 < smin < smax, got %s, %s' % (smin, smax))
        if n_scales < 1 or n_angles < 1:
            raise ValueError('Need at least one scale and one angle')
        dlog = math.log(smax / smin) / n_scales
        scales = smin * np.exp((np.arange(n_scales) + 0.5) * dlog)
        dtheta = 2 * math.pi / n_angles
        angles = dtheta * np.arange(n_angles)
        weights = np.outer(scales ** -2 * dlog, np.full(n_angles, dtheta))
        return cls(scales, angles, grid, weights, (smin, smax))

    @property
    def log_step(self):
        return math.log(self.scale_edges[1] / self.scale_edges[0]) / len(self.scales)

    @property
    def angle_step(self):
        return 2 * math.pi / len(self.angles)

    @property
    def shape(self):
        return (len(self.scales), len(self.angles)) + self.grid.shape

    @property
    def n_coefficients(self):
        return int(np.prod(self.shape))

    def scale_quadrature(self, func):
        """Approximate the integral of func(a) a^{-1} da over the scale window."""
        return float(sum(func(a) for a in self.scales) * self.log_step)

    def scale_band(self, start, stop):
        """The SimGrid of scales start:stop, with the same nodes and weights."""
        if not 0 <= start < stop <= len(self.scales):
            raise ValueError('Scale band %s:%s is outside 0:%s' % (start, stop, len(self.scales)))
        step = self.log_step
        edges = (self.scale_edges[0] * math.exp(start * step),
                 self.scale_edges[0] * math.exp(stop * step))
        return SimGrid(self.scales[start:stop], self.angles, self.grid,
                       self.weights[start:stop], edges)

    def with_grid(self, grid):
        return SimGrid(self.scales, self.angles, grid, self.weights, self.scale_edges)

    def __repr__(self):
        return '<SimGrid %s scales in [%g, %g], %s angles, %sx%s translations>' % (
            len(self.scales), self.scale_edges[0], self.scale_edges[1], len(self.angles),
            self.grid.n1, self.grid.n2)


def write_qsf_payload(path, fields, data):
    """Write a QSF file; `fields` is (n1, n2, x0, y0, dx, dy)."""
    header = np.zeros(1, dtype=QSF_HEADER)
    header['magic'] = QSF_MAGIC
    for name, value in zip(QSF_HEADER.names[1:], fields):
        header[name] = value
    with open(path, 'wb') as outfile:
        outfile.write(header.tobytes())
        outfile.write(np.ascontiguousarray(data, dtype='<f8').tobytes())
    logger.log(10, 'Wrote %s' % path)


def read_qsf_payload(path):
    """Read a QSF file as (n1, n2, x0, y0, dx, dy, data), without interpreting the grid."""
    with open(path, 'rb') as infile:
        raw = infile.read()
    if len(raw) < QSF_HEADER.itemsize:
        raise FormatError('%s is truncated: no complete header' % path)
    header = np.frombuffer(raw, dtype=QSF_HEADER, count=1)[0]
    if header['magic'] != QSF_MAGIC:
        raise FormatError('%s is not a QSF file (bad magic %r)' % (path, bytes(header['magic'])))
    n1, n2 = int(header['n1']), int(header['n2'])
    expected = 4 * n1 * n2 * 8
    payload = raw[QSF_HEADER.itemsize:]
    if len(payload) != expected:
        raise FormatError('%s: header says %sx%s samples (%s bytes), payload has %s bytes'
                          % (path, n1, n2, expected, len(payload)))
    data = np.frombuffer(payload, dtype='<f8').astype(float).reshape(4, n1, n2)
    if not np.all(np.isfinite(data)):
        raise FormatError('%s contains non-finite values' % path)
    values = tuple(float(header[k]) for k in ('x0', 'y0', 'dx', 'dy'))
    return (n1, n2) + values + (data,)


def write_qsf(path, signal):
    write_qsf_payload(path, signal.grid, signal.data)


def read_qsf(path):
    n1, n2, x0, y0, dx, dy, data = read_qsf_payload(path)
    if dx < 0 or dy < 0:
        raise FormatError('%s holds a spectrum, not a signal' % path)
    try:
        grid = Grid2D(n1, n2, x0, y0, dx, dy)
    except ValueError as e:
        raise FormatError('%s: %s' % (path, e))
    return QSignal2D(grid, data)
