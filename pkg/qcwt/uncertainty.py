"""Uncertainty principles for the QFT and the CQWT.

Every check returns a UPReport. `margin` is lhs / rhs for the Heisenberg
type checks and lhs - rhs for the logarithmic one; details['convention']
says which.
"""
import collections
import logging
import math

import numpy as np

from qcwt import quaternion
from qcwt.cqwt import cqwt, window_response
from qcwt.qft import QSpectrum2D, qft_forward
from qcwt.signal import QSignal2D, l2_norm

logger = logging.getLogger('qcwt')

EULER_GAMMA = 0.57721566490153286061
# The constant as printed: -ln(pi) + Gamma'(1)/Gamma(1).
PRINTED_LOG_CONSTANT = -math.log(math.pi) - EULER_GAMMA
# digamma(1/2) - ln(pi), the sharp constant of the planar logarithmic inequality.
LOG_CONSTANT = -EULER_GAMMA - 2 * math.log(2) - math.log(math.pi)

DECAY_LEVEL = 1e-8
FIT_BAND = (1e-6, 1e-1)

UPReport = collections.namedtuple('UPReport', 'name lhs rhs margin hypotheses_ok details')


def _ratio_report(name, lhs, rhs, hypotheses_ok, **details):
    details['convention'] = 'ratio'
    if rhs == 0:
        details['trivial'] = True
        margin = 1.0 if lhs == 0 else float('inf')
    else:
        margin = lhs / rhs
    if not math.isfinite(margin):
        margin = 1.0e300
    return UPReport(name, float(lhs), float(rhs), float(margin), bool(hypotheses_ok), details)


def _axis_moments(spectrum):
    """(integral xi1^2 |F|^2, integral xi2^2 |F|^2) over the frequency grid."""
    xi1, xi2 = spectrum.frequencies()
    power = quaternion.qabs2(spectrum.data) * spectrum.grid.cell_area
    return float((xi1 ** 2 * power).sum()), float((xi2 ** 2 * power).sum())


def _slab(scalogram, j, k):
    return QSignal2D(scalogram.sim.grid, scalogram.coeffs[:, j, k])


def scalogram_frequency_moments(scalogram):
    """Haar integrals of the two axis moments of the QFT of T f(a, theta, .)."""
    sim = scalogram.sim
    first = second = 0.0
    for j in range(len(sim.scales)):
        for k in range(len(sim.angles)):
            moment1, moment2 = _axis_moments(qft_forward(_slab(scalogram, j, k)))
            first += sim.weights[j, k] * moment1
            second += sim.weights[j, k] * moment2
    return first, second


def _transform(f, w, sim, scalogram):
    if scalogram is None:
        scalogram = cqwt(f, w, sim)
    return scalogram


def heisenberg_lemma_check(f, w, sim, axis=1, scalogram=None, windowed=False):
    """Haar integral of ||xi_l F{T f}||^2 against C_phi ||xi_l f^||^2.

    `axis` is 1, 2 or 'both'; 'both' weights by |xi|^2 and is the sum of
    the two single-axis accumulators. With `windowed` the right side is
    restricted to the scale window of `sim`, C_phi |f^|^2 becoming C_win |f^|^2.
    """
    if axis not in (1, 2, 'both'):
        raise ValueError('Axis must be 1, 2 or both, not %s' % axis)
    scalogram = _transform(f, w, sim, scalogram)
    transform = scalogram_frequency_moments(scalogram)
    spectrum = qft_forward(f)
    if windowed:
        xi1, xi2 = spectrum.frequencies()
        response = np.sqrt(window_response(w, sim, xi1, xi2) / w.c_phi)
        spectrum = QSpectrum2D(spectrum.spatial, spectrum.data * response)
    signal = _axis_moments(spectrum)
    if axis == 'both':
        lhs, rhs = sum(transform), sum(signal)
    else:
        lhs, rhs = transform[axis - 1], signal[axis - 1]
    rhs *= w.c_phi
    return _ratio_report('heisenberg-lemma-%s' % axis, lhs, rhs, w.commutes_with_e2,
                         axis=axis, energy_deficit=scalogram.energy_deficit)


def spatial_moment(f):
    x, y = f.grid.coordinates()
    return float(((x ** 2 + y ** 2) * quaternion.qabs2(f.data)).sum() * f.grid.cell_area)


def _decays(values, level=DECAY_LEVEL):
    """True when the modulus on the border of the grid is below `level` of its peak."""
    peak = values.max()
    if peak == 0:
        return True
    border = max(values[0].max(), values[-1].max(), values[:, 0].max(), values[:, -1].max())
    return border <= level * peak


def heisenberg_qft_ratio(f):
    """||t f||^2 ||xi f^||^2 against ||f||^4 / (16 pi^2)."""
    spectrum = qft_forward(f)
    lhs = spatial_moment(f) * sum(_axis_moments(spectrum))
    rhs = l2_norm(f) ** 4 / (16 * math.pi ** 2)
    decays = _decays(f.modulus()) and _decays(spectrum.modulus())
    return _ratio_report('heisenberg-qft', lhs, rhs, decays)


def heisenberg_cqwt_ratio(f, w, sim, scalogram=None):
    """||b T f|| || |xi| f^ || against ||T f||^2 / (4 pi sqrt(C_phi))."""
    scalogram = _transform(f, w, sim, scalogram)
    spectrum = qft_forward(f)
    bx, by = scalogram.sim.grid.coordinates()
    weighted = scalogram.haar_sum(quaternion.qabs2(scalogram.coeffs) * (bx ** 2 + by ** 2))
    frequency_norm = math.sqrt(sum(_axis_moments(spectrum)))
    lhs = math.sqrt(float(weighted)) * frequency_norm
    rhs = scalogram.energy() / (4 * math.pi * math.sqrt(w.c_phi))
    # A smooth f stands in for the second derivative condition on f.
    band_limited = _decays(spectrum.modulus())
    return _ratio_report('heisenberg-cqwt', lhs, rhs, bool(w.commutes_with_e2) and band_limited,
                         band_limited=band_limited, energy_deficit=scalogram.energy_deficit)


def _log_weight(x, y):
    r = np.hypot(x, y)
    weight = np.zeros_like(r)
    nonzero = r > 0
    weight[nonzero] = np.log(r[nonzero])
    return weight


def log_moment(values, grid):
    """Integral of ln|x| |values|^2, skipping the sample at the origin."""
    x, y = grid.coordinates()
    return float((_log_weight(x, y) * quaternion.qabs2(values)).sum() * grid.cell_area)


def log_up_qft_check(f, constant=None):
    """integral ln|x| |f|^2 + integral ln|xi| |f^|^2 >= A ||f||^2.

    Checked for real signals and for signals whose spectrum lies in R + R e2,
    where the QFT modulus reduces to that of the complex Fourier transform.
    """
    if constant is None:
        constant = LOG_CONSTANT
    spectrum = qft_forward(f)
    lhs = log_moment(f.data, f.grid) + log_moment(spectrum.data, spectrum.grid)
    energy = l2_norm(f) ** 2
    rhs = constant * energy
    details = {'convention': 'difference', 'scale': energy,
               'printed_margin': lhs - PRINTED_LOG_CONSTANT * energy}
    real = not np.any(f.data[1:])
    hypotheses_ok = real or spectrum.component_fraction((1, 3)) <= DECAY_LEVEL
    return UPReport('log-up-qft', lhs, rhs, lhs - rhs, hypotheses_ok, details)


def log_up_check(f, w, sim, scalogram=None, constant=None, windowed=True):
    """C_phi integral ln|y| |f^|^2 + Haar integral ln|b| |T f|^2 >= A C_phi ||f||^2.

    The inequality holds slab by slab in (a, theta), so with `windowed` both
    C_phi |f^|^2 terms become C_win |f^|^2, the part of the spectrum the
    scales of `sim` reach. The report is gated on `constant` (the sharp
    planar constant by default); the margin against the printed constant
    is in the details.
    """
    scalogram = _transform(f, w, sim, scalogram)
    if constant is None:
        constant = LOG_CONSTANT
    spectrum = qft_forward(f)
    xi1, xi2 = spectrum.frequencies()
    if windowed:
        density = window_response(w, sim, xi1, xi2) * quaternion.qabs2(spectrum.data)
    else:
        density = w.c_phi * quaternion.qabs2(spectrum.data)
    density = density * spectrum.grid.cell_area
    frequency = float((_log_weight(xi1, xi2) * density).sum())
    energy = float(density.sum())
    bx, by = scalogram.sim.grid.coordinates()
    weighted = quaternion.qabs2(scalogram.coeffs) * _log_weight(bx, by)
    lhs = frequency + float(scalogram.haar_sum(weighted))
    rhs = constant * energy
    fraction = spectrum.component_fraction((1, 3))
    hypotheses_ok = bool(w.commutes_with_e2) and fraction <= DECAY_LEVEL
    details = {'convention': 'difference', 'scale': energy, 'windowed': windowed,
               'printed_constant': PRINTED_LOG_CONSTANT,
               'printed_margin': lhs - PRINTED_LOG_CONSTANT * energy,
               'energy_deficit': scalogram.energy_deficit}
    if not hypotheses_ok:
        logger.log(30, 'Logarithmic UP: hypotheses not met (e1/e3 fraction %.3g)' % fraction)
    return UPReport('log-up-cqwt', lhs, rhs, lhs - rhs, hypotheses_ok, details)


def gaussian_rate(modulus, grid, band=FIT_BAND):
    """Least squares fit of ln|values| = c - rate |x|^2 over the band of the peak.

    Returns (rate, number of samples used).
    """
    peak = modulus.max()
    x, y = grid.coordinates()
    mask = (modulus >= band[0] * peak) & (modulus <= band[1] * peak)
    count = int(mask.sum())
    if count < 3:
        return None, count
    slope, _ = np.polyfit((x ** 2 + y ** 2)[mask], np.log(modulus[mask]), 1)
    return -float(slope), count


def gaussian_profile_fit(values, grid, rate):
    """Fit values ~ A exp(-rate |x|^2) with a quaternion A; return (A, R^2)."""
    x, y = grid.coordinates()
    profile = np.exp(-rate * (x ** 2 + y ** 2))
    amplitude = (values * profile).sum(axis=(1, 2)) / (profile ** 2).sum()
    fitted = amplitude[:, None, None] * profile
    residual = quaternion.qabs2(values - fitted).sum()
    mean = values.mean(axis=(1, 2))[:, None, None]
    spread = quaternion.qabs2(values - mean).sum()
    r_squared = 1.0 - residual / spread if spread > 0 else 0.0
    return quaternion.Quaternion.from_array(amplitude), float(r_squared)


def hardy_classify(scalogram, spectrum, a, theta, tolerance=0.05):
    """Compare the Gaussian decay rates of a scalogram slice and of f^ with pi^2.

    Outcomes in details['case']: 'below' (alpha beta < pi^2), 'critical'
    (alpha beta = pi^2 within `tolerance`, with the fit of the slice to
    A exp(-alpha |b|^2)), 'above' (the slice vanishes), 'artifact' (the rates
    exceed pi^2 but the slice does not vanish) and 'unclassifiable'.
    """
    sim = scalogram.sim
    j = int(np.argmin(np.abs(sim.scales - a)))
    k = int(np.argmin(np.abs(np.angle(np.exp(1j * (sim.angles - theta))))))
    values = scalogram.coeffs[:, j, k]
    slice_modulus = quaternion.qmodulus(values)
    spectrum_modulus = spectrum.modulus()
    details = {'convention': 'ratio', 'a': float(sim.scales[j]), 'theta': float(sim.angles[k])}
    target = math.pi ** 2

    def report(case, lhs, hypotheses_ok):
        details['case'] = case
        margin = lhs / target if math.isfinite(lhs) else 1.0e300
        logger.log(20, 'Hardy classification at a=%.4g theta=%.4g: %s'
                   % (details['a'], details['theta'], case))
        return UPReport('hardy', lhs, target, margin, hypotheses_ok, details)

    beta, _ = gaussian_rate(spectrum_modulus, spectrum.grid)
    details['beta'] = beta
    if not _decays(spectrum_modulus) or beta is None:
        return report('unclassifiable', float('nan'), False)

    slice_peak = slice_modulus.max()
    if slice_peak <= 1e-12 * max(scalogram.sup_norm(), scalogram.source_norm, 1e-300):
        details['alpha'] = float('inf')
        return report('above', float('inf'), True)
    if not _decays(slice_modulus):
        return report('unclassifiable', float('nan'), False)
    alpha, _ = gaussian_rate(slice_modulus, sim.grid)
    details['alpha'] = alpha
    if alpha is None:
        return report('unclassifiable', float('nan'), False)

    product = alpha * beta
    if abs(product / target - 1) <= tolerance:
        amplitude, r_squared = gaussian_profile_fit(values, sim.grid, alpha)
        details['amplitude'] = amplitude
        details['r_squared'] = r_squared
        return report('critical', product, True)
    if product > target:
        return report('artifact', product, True)
    return report('below', product, True)
