"""Admissible quaternion wavelets.

A wavelet carries its sampled mother and, when one is known, closed forms
for the mother and for the spectrum of its rotations. Daughters and
daughter spectra use the closed forms when present, and fall back to
interpolating the samples otherwise.
"""
import collections
import logging
import math

import numpy as np

from qcwt import quaternion
from qcwt.errors import AdmissibilityError, GridMismatchError
from qcwt.qft import QSpectrum2D, qft_forward
from qcwt.signal import (QSignal2D, SimGrid, read_qsf, resample_similitude, sample_at,
                         similitude_points)

logger = logging.getLogger('qcwt')

DEFAULT_PROBES = 8
PROBE_RADIUS = 1.0
DC_TOLERANCE = 1e-6
COMMUTE_TOLERANCE = 1e-8
# Integrand at the smallest scale above this fraction of its peak means the a -> 0 tail diverges.
TAIL_TOLERANCE = 1e-3
# Spectrum modulus below this fraction of its peak counts as outside the band.
BAND_LEVEL = 1e-3

Admissibility = collections.namedtuple(
    'Admissibility', 'c_phi spread values probes commutes_with_e2')


class QWavelet(object):
    """A mother wavelet.

    `profile(x, y)` returns the mother at arbitrary points as a (4, ...)
    array, and `spectrum_profile(xi1, xi2, theta)` the QFT of the rotated
    mother x -> phi(r_{-theta} x). Either may be None.
    """

    def __init__(self, name, mother, profile=None, spectrum_profile=None,
                 c_phi=None, commutes_with_e2=None):
        if not np.any(mother.data):
            raise ValueError('The mother wavelet must not be identically zero')
        if c_phi is not None and not 0 < c_phi < float('inf'):
            raise ValueError('Admissibility constant must be positive and finite, not %s' % c_phi)
        self.name = name
        self.mother = mother
        self.profile = profile
        self.spectrum_profile = spectrum_profile
        self.c_phi = c_phi
        self.commutes_with_e2 = commutes_with_e2
        self._spectrum = None
        self._rotated_spectra = {}
        self._bandwidths = {}

    @property
    def grid(self):
        return self.mother.grid

    @property
    def spectrum(self):
        if self._spectrum is None:
            self._spectrum = qft_forward(self.mother)
        return self._spectrum

    def bandwidth(self, level=BAND_LEVEL):
        """Largest |xi| at which the mother's spectrum exceeds `level` times its peak."""
        if level not in self._bandwidths:
            spectrum = self.spectrum
            xi1, xi2 = spectrum.frequencies()
            modulus = quaternion.qmodulus(spectrum.data)
            inside = modulus > level * modulus.max()
            self._bandwidths[level] = float(np.hypot(xi1, xi2)[inside].max())
        return self._bandwidths[level]

    def rotated_spectrum(self, theta):
        """Numerical QFT of x -> phi(r_{-theta} x), cached per angle."""
        key = round(theta, 12)
        if key not in self._rotated_spectra:
            self._rotated_spectra[key] = qft_forward(daughter(self, 1.0, theta, (0.0, 0.0)))
        return self._rotated_spectra[key]

    def rotated_spectrum_at(self, xi1, xi2, theta):
        """F{phi(r_{-theta} .)} at arbitrary frequencies."""
        if self.spectrum_profile is not None:
            return self.spectrum_profile(xi1, xi2, theta)
        return sample_at(self.rotated_spectrum(theta), xi1, xi2, order=3)

    def with_admissibility(self, report):
        return QWavelet(self.name, self.mother, self.profile, self.spectrum_profile,
                        report.c_phi, report.commutes_with_e2)

    def __add__(self, other):
        if not self.grid.same_as(other.grid):
            raise GridMismatchError('Wavelets on different grids')
        profile = None
        if self.profile is not None and other.profile is not None:
            first, second = self.profile, other.profile

            def profile(x, y):
                return first(x, y) + second(x, y)
        return QWavelet('%s+%s' % (self.name, other.name), self.mother + other.mother, profile)

    def __rmul__(self, scalar):
        """Left multiplication of the mother by a quaternion constant."""
        q = np.asarray(quaternion.as_quaternion(scalar))
        profile = None
        if self.profile is not None:
            inner = self.profile

            def profile(x, y):
                values = inner(x, y)
                return quaternion.qmul(q.reshape((4,) + (1,) * (values.ndim - 1)), values)
        scale = quaternion.Quaternion(*q)
        return QWavelet('(%s)%s' % (scale, self.name), scale * self.mother, profile)

    def __repr__(self):
        return '<QWavelet %s c_phi=%s>' % (self.name, self.c_phi)


def _check_span(grid, half_width):
    if (grid.x0 > -half_width or grid.y0 > -half_width or
            grid.x0 + grid.n1 * grid.dx < half_width or grid.y0 + grid.n2 * grid.dy < half_width):
        raise ValueError('The grid must span at least [-%s, %s]^2' % (half_width, half_width))


def _real_field(values):
    field = np.zeros((4,) + np.shape(values))
    field[0] = values
    return field


def log_gaussian_wavelet(grid):
    """phi = -(1/4 pi^2) Laplacian of exp(-pi |t|^2) = (1/pi - |t|^2) exp(-pi |t|^2)."""
    _check_span(grid, 6.0)

    def profile(x, y):
        r2 = x ** 2 + y ** 2
        return _real_field((1.0 / math.pi - r2) * np.exp(-math.pi * r2))

    def spectrum_profile(xi1, xi2, theta):
        r2 = xi1 ** 2 + xi2 ** 2
        return _real_field(r2 * np.exp(-math.pi * r2))

    x, y = grid.coordinates()
    return QWavelet('log', QSignal2D(grid, profile(x, y)), profile, spectrum_profile)


DGAUSS_FACTOR = np.array([1.0, 1.0, 0.0, 0.0]) / math.sqrt(2.0)


def dgauss_wavelet(grid):
    """Quaternion-scaled t1-derivative of a Gaussian, (1 + e1)/sqrt(2) (-t1) exp(-pi |t|^2).

    It is anisotropic, so rotating it changes the transform, and its spectrum
    has e1 parts, so it does not commute with e2.
    """
    _check_span(grid, 4.0)

    def profile(x, y):
        values = -x * np.exp(-math.pi * (x ** 2 + y ** 2))
        factor = DGAUSS_FACTOR.reshape((4,) + (1,) * np.ndim(values))
        return quaternion.qmul(factor, _real_field(values))

    def spectrum_profile(xi1, xi2, theta):
        gauss = np.exp(-math.pi * (xi1 ** 2 + xi2 ** 2))
        field = np.zeros((4,) + np.shape(gauss))
        field[1] = math.cos(theta) * xi1 * gauss
        field[2] = math.sin(theta) * xi2 * gauss
        return quaternion.qmul(DGAUSS_FACTOR.reshape((4,) + (1,) * np.ndim(gauss)), field)

    x, y = grid.coordinates()
    return QWavelet('dgauss', QSignal2D(grid, profile(x, y)), profile, spectrum_profile)


def file_wavelet(path):
    return QWavelet('file:%s' % path, read_qsf(path))


def get_wavelet(name, grid):
    """Look up a wavelet by its command line name: log, dgauss or file:<path>."""
    if name == 'log':
        return log_gaussian_wavelet(grid)
    if name == 'dgauss':
        return dgauss_wavelet(grid)
    if name.startswith('file:'):
        w = file_wavelet(name[5:])
        if not w.grid.same_as(grid):
            raise GridMismatchError('Wavelet %s is not sampled on the signal grid' % name)
        return w
    raise ValueError('Unknown wavelet %s, use log, dgauss or file:<path>' % name)


def daughter(w, a, theta, b, grid=None):
    """x -> (1/a) phi(r_{-theta}((x - b) / a)) sampled on `grid` (default: the mother's grid)."""
    if a <= 0:
        raise ValueError('Scale must be positive, not %s' % a)
    if grid is None:
        grid = w.grid
    if w.profile is not None:
        x, y = similitude_points(grid, a, theta, b)
        return QSignal2D(grid, w.profile(x, y) / a)
    if grid.same_as(w.grid):
        return resample_similitude(w.mother, a, theta, b)
    x, y = similitude_points(grid, a, theta, b)
    return QSignal2D(grid, sample_at(w.mother, x, y) / a)


def daughter_spectrum(w, a, theta, b):
    """The daughter spectrum evaluated directly on the mother's frequency grid:

        a e^{-2 pi e1 xi1 b1} F{phi(r_{-theta} .)}(a xi) e^{-2 pi e2 xi2 b2}
    """
    if a <= 0:
        raise ValueError('Scale must be positive, not %s' % a)
    xi1, xi2 = w.spectrum.frequencies()
    core = w.rotated_spectrum_at(a * xi1, a * xi2, theta)
    angle1 = 2 * math.pi * xi1 * b[0]
    angle2 = 2 * math.pi * xi2 * b[1]
    zero = np.zeros_like(xi1)
    left = np.stack((np.cos(angle1), -np.sin(angle1), zero, zero))
    right = np.stack((np.cos(angle2), zero, -np.sin(angle2), zero))
    data = a * quaternion.qmul(quaternion.qmul(left, core), right)
    return QSpectrum2D(w.grid, data)


def default_probes(count=DEFAULT_PROBES, radius=PROBE_RADIUS):
    angles = 2 * math.pi * np.arange(count) / count
    return [(radius * math.cos(t), radius * math.sin(t)) for t in angles]


def default_scale_quadrature(grid):
    return SimGrid.log_uniform(1e-2, 1e2, 256, 64, grid)


def admissibility_report(w, probes=None, scale_quad=None, tolerance=0.02):
    """C_phi(xi) for each probe direction, by quadrature over scales and angles.

    Raises AdmissibilityError when the integral diverges at small scales or
    when the probes disagree by more than `tolerance`.
    """
    if probes is None:
        probes = default_probes()
    if len(probes) < 4:
        raise ValueError('At least 4 probe directions are needed, got %s' % len(probes))
    probes = np.asarray(probes, dtype=float)
    if np.any(np.hypot(probes[:, 0], probes[:, 1]) == 0):
        raise ValueError('Probe frequencies must be non-zero')
    if scale_quad is None:
        scale_quad = default_scale_quadrature(w.grid)

    spectrum = w.spectrum
    peak = spectrum.peak()
    centre = tuple(n // 2 for n in spectrum.grid.shape)
    dc = float(quaternion.qmodulus(spectrum.data[:, centre[0], centre[1]]))
    if dc > DC_TOLERANCE * peak:
        raise AdmissibilityError('%s: spectrum does not vanish at zero frequency '
                                 '(%.3g of peak), the scale integral diverges'
                                 % (w.name, dc / peak))

    commutes = True
    scales = scale_quad.scales
    integrand = np.zeros((len(probes), len(scales)))
    for theta in scale_quad.angles:
        fraction = w.rotated_spectrum(theta).component_fraction((1, 3))
        commutes = commutes and fraction <= COMMUTE_TOLERANCE
        xi1 = np.outer(probes[:, 0], scales)
        xi2 = np.outer(probes[:, 1], scales)
        values = w.rotated_spectrum_at(xi1, xi2, theta)
        integrand += quaternion.qabs2(values) * scale_quad.angle_step

    tails = integrand[:, 0] / integrand.max(axis=1)
    if np.any(integrand.max(axis=1) == 0) or np.any(tails > TAIL_TOLERANCE):
        raise AdmissibilityError('%s: the scale integrand does not vanish as a -> 0, '
                                 'the admissibility integral diverges' % w.name)

    values = integrand.sum(axis=1) * scale_quad.log_step
    c_phi = float(values.mean())
    spread = float((values.max() - values.min()) / c_phi)
    for probe, value in zip(probes, values):
        logger.log(10, 'C_phi(%.3g, %.3g) = %.6g' % (probe[0], probe[1], value))
    logger.log(20, '%s: C_phi = %.6g, spread %.3g, commutes with e2: %s'
               % (w.name, c_phi, spread, commutes))
    if spread > tolerance:
        raise AdmissibilityError('%s: C_phi depends on the direction of xi (spread %.3g > %s)'
                                 % (w.name, spread, tolerance))
    return Admissibility(c_phi, spread, values, probes, commutes)


def admissibility_constant(w, probes=None, scale_quad=None, tolerance=0.02):
    return admissibility_report(w, probes, scale_quad, tolerance).c_phi


def admit(w, probes=None, scale_quad=None, tolerance=0.02):
    """A copy of `w` with its admissibility constant and commutation flag set."""
    return w.with_admissibility(admissibility_report(w, probes, scale_quad, tolerance))


def aqw_inner_product(w1, w2):
    """Integral of phi1^(xi) conj(phi2^(xi)) |xi|^-2, skipping the zero frequency bin.

    The second spectrum is interpolated onto the first frequency grid when
    the mothers are sampled on different grids.
    """
    first = w1.spectrum
    xi1, xi2 = first.frequencies()
    if w2.grid.same_as(w1.grid):
        second = w2.spectrum.data
    else:
        second = sample_at(w2.spectrum, xi1, xi2, order=3)
    centre = tuple(n // 2 for n in first.grid.shape)
    for name, data in ((w1.name, first.data), (w2.name, second)):
        dc = float(quaternion.qmodulus(data[:, centre[0], centre[1]]))
        peak = float(quaternion.qmodulus(data).max())
        if dc > DC_TOLERANCE * peak:
            raise AdmissibilityError('%s: spectrum does not vanish at zero frequency' % name)
    r2 = xi1 ** 2 + xi2 ** 2
    r2[centre] = 1.0
    weight = 1.0 / r2
    weight[centre] = 0.0
    product = quaternion.qmul(first.data, quaternion.qconj(second)) * weight
    return quaternion.Quaternion.from_array(product.sum(axis=(1, 2)) * first.grid.cell_area)
