"""The two-sided quaternion Fourier transform.

    F(u) = integral e^{-2 pi e1 u1 t1} f(t) e^{-2 pi e2 u2 t2} dt

Sums carry the cell areas of the grids, so outputs approximate the
continuous integrals, and frequencies are centered at zero.
"""
import logging
import math

import numpy as np
import scipy.ndimage

from qcwt import quaternion
from qcwt.errors import FormatError, GuardExceededError
from qcwt.signal import (Grid2D, QSignal2D, inner_product, l2_norm, read_qsf_payload, sample_at,
                         write_qsf_payload)

logger = logging.getLogger('qcwt')

ORACLE_LIMIT = 4096


def frequency_axis(n, step):
    return (np.arange(n) - n // 2) / (n * step)


def frequency_grid(spatial):
    du = 1.0 / (spatial.n1 * spatial.dx)
    dv = 1.0 / (spatial.n2 * spatial.dy)
    return Grid2D(spatial.n1, spatial.n2, -(spatial.n1 // 2) * du, -(spatial.n2 // 2) * dv, du, dv)


class QSpectrum2D(object):
    """QFT samples on the frequency grid dual to `spatial`."""

    def __init__(self, spatial, data):
        self.spatial = spatial
        self.grid = frequency_grid(spatial)
        data = np.array(data, dtype=float)
        if data.shape != (4,) + self.grid.shape:
            raise ValueError('Data of shape %s does not fit a %sx%s spectrum'
                             % (data.shape, self.grid.n1, self.grid.n2))
        data.flags.writeable = False
        self.data = data

    def frequencies(self):
        return self.grid.coordinates()

    def _check(self, other):
        if not self.spatial.same_as(other.spatial):
            raise ValueError('Spectra of different grids')

    def __add__(self, other):
        self._check(other)
        return QSpectrum2D(self.spatial, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return QSpectrum2D(self.spatial, self.data - other.data)

    def modulus(self):
        return quaternion.qmodulus(self.data)

    def peak(self):
        return float(self.modulus().max())

    def component_fraction(self, components):
        """Largest modulus of the given components relative to the spectrum peak."""
        peak = self.peak()
        if peak == 0:
            return 0.0
        return float(np.abs(self.data[list(components)]).max() / peak)

    def __repr__(self):
        return '<QSpectrum2D %sx%s du=%g dv=%g>' % (self.grid.n1, self.grid.n2,
                                                     self.grid.dx, self.grid.dy)


def _axis_pass(z, axis, origin, step, sign):
    n = z.shape[axis]
    u = frequency_axis(n, step)
    shape = [1, 1]
    shape[axis] = n
    phase = np.exp(sign * 2j * math.pi * u * origin).reshape(shape)
    if sign < 0:
        return step * phase * np.fft.fftshift(np.fft.fft(z, axis=axis), axes=axis)
    return np.fft.ifft(np.fft.ifftshift(z * phase, axes=axis), axis=axis) / step


def _right_pass(data, origin, step, sign):
    # f = p + e1 s with p, s in span{1, e2}; the e2 kernel acts on p and s alone.
    p = _axis_pass(data[0] + 1j * data[2], 1, origin, step, sign)
    s = _axis_pass(data[1] + 1j * data[3], 1, origin, step, sign)
    return np.stack((p.real, s.real, p.imag, s.imag))


def _left_pass(data, origin, step, sign):
    # f = a + b e2 with a, b in span{1, e1}; the e1 kernel acts on a and b alone.
    a = _axis_pass(data[0] + 1j * data[1], 0, origin, step, sign)
    b = _axis_pass(data[2] + 1j * data[3], 0, origin, step, sign)
    return np.stack((a.real, a.imag, b.real, b.imag))


def qft_forward(f):
    grid = f.grid
    data = _right_pass(f.data, grid.y0, grid.dy, -1)
    data = _left_pass(data, grid.x0, grid.dx, -1)
    return QSpectrum2D(grid, data)


def qft_inverse(spectrum):
    grid = spectrum.spatial
    data = _left_pass(spectrum.data, grid.x0, grid.dx, 1)
    data = _right_pass(data, grid.y0, grid.dy, 1)
    return QSignal2D(grid, data)


def qft_direct_oracle(f):
    """Brute force evaluation of the defining sum, one frequency at a time."""
    grid = f.grid
    if grid.n1 * grid.n2 > ORACLE_LIMIT:
        raise GuardExceededError('The direct QFT is limited to %s samples, got %sx%s'
                                 % (ORACLE_LIMIT, grid.n1, grid.n2))
    t1, t2 = grid.coordinates()
    freq = frequency_grid(grid)
    u1, u2 = freq.axes()
    zero = np.zeros(grid.shape)
    result = np.zeros((4,) + grid.shape)
    for k1 in range(grid.n1):
        angle1 = 2 * math.pi * u1[k1] * t1
        left = np.stack((np.cos(angle1), -np.sin(angle1), zero, zero))
        left_f = quaternion.qmul(left, f.data)
        for k2 in range(grid.n2):
            angle2 = 2 * math.pi * u2[k2] * t2
            right = np.stack((np.cos(angle2), zero, -np.sin(angle2), zero))
            result[:, k1, k2] = quaternion.qmul(left_f, right).sum(axis=(1, 2))
    return QSpectrum2D(grid, result * grid.cell_area)


def _unit_power(unit, power, weight):
    """(weight * unit)^power as a component array, for unit index 1 (e1) or 2 (e2)."""
    factor = np.zeros((4,) + weight.shape)
    cycle = power % 4
    magnitude = weight ** power
    if cycle == 0:
        factor[0] = magnitude
    elif cycle == 1:
        factor[unit] = magnitude
    elif cycle == 2:
        factor[0] = -magnitude
    else:
        factor[unit] = -magnitude
    return factor


def spectral_derivative(spectrum, m, n):
    """Multiply by (2 pi e1 xi1)^m on the left and (2 pi e2 xi2)^n on the right."""
    if m < 0 or n < 0:
        raise ValueError('Derivative orders must be non-negative, not %s, %s' % (m, n))
    xi1, xi2 = spectrum.frequencies()
    left = _unit_power(1, m, 2 * math.pi * xi1)
    right = _unit_power(2, n, 2 * math.pi * xi2)
    data = quaternion.qmul(quaternion.qmul(left, spectrum.data), right)
    return QSpectrum2D(spectrum.spatial, data)


def spectral_laplacian(spectrum):
    xi1, xi2 = spectrum.frequencies()
    weight = -(2 * math.pi) ** 2 * (xi1 ** 2 + xi2 ** 2)
    return QSpectrum2D(spectrum.spatial, spectrum.data * weight)


FIRST_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
SECOND_STENCIL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def finite_difference(f, m, n):
    """d^m/dt1^m d^n/dt2^n f with fourth order central differences, zero outside the grid."""
    if m < 0 or n < 0:
        raise ValueError('Derivative orders must be non-negative, not %s, %s' % (m, n))
    data = np.array(f.data)
    for axis, order, step in ((1, m, f.grid.dx), (2, n, f.grid.dy)):
        for _ in range(order // 2):
            data = scipy.ndimage.correlate1d(data, SECOND_STENCIL / step ** 2, axis=axis,
                                             mode='constant')
        if order % 2:
            data = scipy.ndimage.correlate1d(data, FIRST_STENCIL / step, axis=axis,
                                             mode='constant')
    return QSignal2D(f.grid, data)


def rotate_points(x, y, theta):
    cos, sin = math.cos(theta), math.sin(theta)
    return cos * x - sin * y, sin * x + cos * y


def rotation_identity_sides(f, theta, rotated=None):
    """Both sides of the rotation rule

        F{f(Ax)}(xi) = 1/2 {F(A xi) + F(A^-1 xi) + e1 [F(A^-1 xi) - F(A xi)] e2}

    A is the counterclockwise rotation by theta. `rotated` is f(Ax) when the
    caller can sample it exactly; otherwise f is interpolated with cubic splines.
    """
    if rotated is None:
        x, y = f.grid.coordinates()
        rx, ry = rotate_points(x, y, theta)
        rotated = QSignal2D(f.grid, sample_at(f, rx, ry, order=3))
    lhs = qft_forward(rotated).data

    spectrum = qft_forward(f)
    xi1, xi2 = spectrum.frequencies()
    forward = sample_at(spectrum, *rotate_points(xi1, xi2, theta), order=3)
    backward = sample_at(spectrum, *rotate_points(xi1, xi2, -theta), order=3)
    e1 = np.asarray(quaternion.E1)[:, None, None]
    e2 = np.asarray(quaternion.E2)[:, None, None]
    twisted = quaternion.qmul(quaternion.qmul(e1, backward - forward), e2)
    rhs = 0.5 * (forward + backward + twisted)
    return lhs, rhs


def check_rotation_identity(f, theta, rotated=None):
    lhs, rhs = rotation_identity_sides(f, theta, rotated)
    residual = float(quaternion.qmodulus(lhs - rhs).max())
    logger.log(10, 'Rotation identity at theta=%g: residual %.3g' % (theta, residual))
    return residual


def qft_inner_product(first, second):
    """Frequency-side inner product sum F conj(G) du dv."""
    first._check(second)
    product = quaternion.qmul(first.data, quaternion.qconj(second.data))
    return quaternion.Quaternion.from_array(product.sum(axis=(1, 2)) * first.grid.cell_area)


def spectrum_norm(spectrum):
    return math.sqrt(float(quaternion.qabs2(spectrum.data).sum()) * spectrum.grid.cell_area)


def plancherel_residual(f, g, scalar_only=False):
    """|(f, g) - (f^, g^)| relative to ||f|| ||g||.

    The scalar parts agree for any pair; the full quaternion identity needs
    f conj(g) to take values in R + R e1.
    """
    spatial = inner_product(f, g)
    spectral = qft_inner_product(qft_forward(f), qft_forward(g))
    difference = spatial - spectral
    residual = abs(difference.scalar) if scalar_only else abs(difference)
    scale = l2_norm(f) * l2_norm(g)
    if scale == 0:
        return residual
    return residual / scale


def write_spectrum(path, spectrum):
    # Negative spacings mark a spectrum; the header keeps the spatial grid.
    grid = spectrum.spatial
    header = (grid.n1, grid.n2, grid.x0, grid.y0, -grid.dx, -grid.dy)
    write_qsf_payload(path, header, spectrum.data)


def read_spectrum(path):
    n1, n2, x0, y0, dx, dy, data = read_qsf_payload(path)
    if dx > 0 or dy > 0:
        raise FormatError('%s holds a signal, not a spectrum' % path)
    try:
        spatial = Grid2D(n1, n2, x0, y0, -dx, -dy)
    except ValueError as e:
        raise FormatError('%s: %s' % (path, e))
    return QSpectrum2D(spatial, data)
