"""Verification suites.

Every check compares two independently computed sides of an identity or an
inequality and returns CheckResult rows. Checks are registered per suite
and run in a process pool; each process caches the admitted wavelets and
the reference transforms it computes.
"""
import collections
import csv
import functools
import logging
import math
import multiprocessing

import numpy as np

from qcwt import corpus, quaternion
from qcwt.cqwt import (Scalogram, coefficient, cqwt, cqwt_direct, cqwt_inverse, lp_bound_check,
                       parseval_check, reproducing_kernel_check, windowed_signal)
from qcwt.errors import AdmissibilityError, QcwtError
from qcwt.qft import (finite_difference, plancherel_residual, qft_direct_oracle, qft_forward,
                      qft_inverse, rotate_points, rotation_identity_sides, spectral_derivative,
                      spectral_laplacian)
from qcwt.signal import Grid2D, QSignal2D, SimGrid, inner_product, l2_norm
from qcwt.uncertainty import (hardy_classify, heisenberg_cqwt_ratio, heisenberg_lemma_check,
                              heisenberg_qft_ratio, log_up_check, log_up_qft_check)
from qcwt.wavelet import QWavelet, admissibility_report, admit, aqw_inner_product, get_wavelet

logger = logging.getLogger('qcwt')

DEFAULT_TOLERANCES = collections.OrderedDict([
    ('exact', 1e-12),
    ('oracle', 1e-10),
    ('roundtrip', 1e-10),
    ('plancherel', 1e-8),
    ('gaussian', 1e-6),
    ('derivative', 1e-4),
    ('interpolation', 1e-3),
    ('admissibility', 0.02),
    ('fast', 1e-6),
    ('parseval', 0.05),
    ('inversion', 0.05),
    ('kernel', 0.05),
    ('covariance', 0.01),
    ('lp', 0.01),
    ('heisenberg', 0.01),
    ('heisenberg-gaussian', 0.02),
    ('lemma', 0.05),
    ('logup', 0.01),
    ('hardy', 0.05),
    ('hardy-fit', 0.999),
])

CORPORA = {'default': 2, 'gaussian': None}

Settings = collections.namedtuple(
    'Settings', 'n extent scales smin smax angles stride seed corpus tolerances')

# Scales reach twice the half extent, so the Plancherel window loses about 1% of the energy.
DEFAULT_SETTINGS = Settings(256, 8.0, 32, 0.25, 16.0, 8, 4, 0, 'default', DEFAULT_TOLERANCES)

CheckResult = collections.namedtuple(
    'CheckResult', 'suite name lhs rhs margin tolerance hypotheses_ok passed')

REPORT_COLUMNS = list(CheckResult._fields)

SUITES = collections.OrderedDict((name, collections.OrderedDict())
                                 for name in ('quat', 'qft', 'wavelet', 'cqwt', 'up'))

QUATERNION_SAMPLES = 10000
ORACLE_SIZES = (2, 3, 5, 8, 12, 16)
SMALL_GRID = (16, 2.0)
COVARIANCE_GRID = (32, 4.0)
ANTILINEAR_FACTOR = quaternion.Quaternion(0.5, -1.0, 2.0, 0.25)
ALIGNED_SHIFT = (0.5, -0.25)
OFFGRID_SHIFT = (0.3, -0.2)
SCALING_FACTOR = 2.0
SAMPLE_POINTS = ((0.5, 0.0, (0.25, -0.5)), (0.5, math.pi / 2, (-0.75, 0.25)),
                 (1.0, math.pi / 4, (0.0, 0.0)), (1.0, math.pi, (0.5, 0.5)),
                 (1.5, 3 * math.pi / 4, (-0.5, 1.0)), (0.75, 5 * math.pi / 4, (1.0, -0.25)),
                 (0.6, 3 * math.pi / 2, (0.25, 0.75)), (1.25, 7 * math.pi / 4, (-1.0, -1.0)))
# The log mother is radial, one angle node integrates theta exactly.
INVERSION_ANGLES = 1
# Largest scales of the inversion study, as fractions of the largest scale of its window.
INVERSION_FRACTIONS = (0.25, 0.5, 1.0)


def check(suite):
    """Register a check function under `suite`."""
    def register(func):
        SUITES[suite][func.__name__.replace('_', '-')] = func
        return func
    return register


def suite_names(selection):
    if 'all' in selection:
        return list(SUITES)
    unknown = [name for name in selection if name not in SUITES]
    if unknown:
        raise ValueError('Unknown suite %s, use one of %s, all'
                         % (', '.join(unknown), ', '.join(SUITES)))
    return list(selection)


def tolerance(settings, name):
    return float(settings.tolerances.get(name, DEFAULT_TOLERANCES[name]))


# Results

def error_result(suite, name, error, tol, hypotheses_ok=True):
    """An error that must not exceed the tolerance."""
    error = float(error)
    return CheckResult(suite, name, error, 0.0, error, tol, hypotheses_ok, bool(error <= tol))


def relative_result(suite, name, lhs, rhs, tol, hypotheses_ok=True):
    """lhs and rhs agreeing to a relative tolerance; the margin is the relative error."""
    scale = abs(rhs) if abs(rhs) > 0 else 1.0
    error = abs(lhs - rhs) / scale
    return CheckResult(suite, name, float(abs(lhs)), float(abs(rhs)), float(error), tol,
                       hypotheses_ok, bool(error <= tol))


def ratio_result(suite, name, lhs, rhs, tol, target=1.0, hypotheses_ok=True):
    """lhs / rhs within tol of target, relatively."""
    ratio = lhs / rhs if rhs else float('inf')
    passed = math.isfinite(ratio) and abs(ratio / target - 1.0) <= tol
    return CheckResult(suite, name, float(lhs), float(rhs), float(ratio), tol, hypotheses_ok,
                       bool(passed))


def bound_result(suite, report, tol, name=None):
    """An inequality from an UPReport, passing when the margin is within tol of holding."""
    if report.details.get('convention') == 'difference':
        passed = report.margin >= -tol * abs(report.details.get('scale', 1.0))
    else:
        passed = report.margin >= 1.0 - tol
    return CheckResult(suite, name or report.name, report.lhs, report.rhs, report.margin, tol,
                       report.hypotheses_ok, bool(passed))


# Shared inputs

def settings_key(settings):
    return settings._replace(tolerances=None)


def reference_grid(settings):
    return Grid2D.centered(settings.n, settings.extent)


def reference_sim(settings):
    grid = reference_grid(settings)
    return SimGrid.log_uniform(settings.smin, settings.smax, settings.scales, settings.angles,
                               grid.sublattice(settings.stride))


@functools.lru_cache(maxsize=None)
def admitted(name, grid):
    return admit(get_wavelet(name, grid))


@functools.lru_cache(maxsize=None)
def corpus_signals(key):
    if key.corpus not in CORPORA:
        raise ValueError('Unknown corpus %s, use one of %s' % (key.corpus, ', '.join(CORPORA)))
    grid = reference_grid(key)
    count = CORPORA[key.corpus]
    if count is None:
        return (corpus.gaussian(grid),)
    return tuple(corpus.default_corpus(grid, key.seed, count))


def reference_gaussian(key):
    return corpus.gaussian(reference_grid(key)).signal


@functools.lru_cache(maxsize=None)
def reference_transform(key, name, wavelet='log'):
    signals = dict((s.name, s.signal) for s in corpus_signals(key))
    signals['gaussian'] = reference_gaussian(key)
    w = admitted(wavelet, reference_grid(key))
    return cqwt(signals[name], w, reference_sim(key))


def inversion_settings(settings):
    """The synthesis window: twice the extent and the largest scale, half the stride.

    Scales keep the density of `settings`, and a single angle is used.
    """
    density = settings.scales / math.log(settings.smax / settings.smin)
    smax = 2 * settings.smax
    return settings._replace(n=2 * settings.n, extent=2 * settings.extent, smax=smax,
                             scales=int(round(density * math.log(smax / settings.smin))),
                             angles=INVERSION_ANGLES, stride=max(1, settings.stride // 2))


@functools.lru_cache(maxsize=None)
def inversion_transform(key):
    """(f, scalogram, raw reconstruction) of the unit Gaussian over the synthesis window."""
    window = inversion_settings(key)
    w = admitted('log', reference_grid(key))
    f = reference_gaussian(window)
    scalogram = cqwt(f, w, reference_sim(window))
    return f, scalogram, cqwt_inverse(scalogram, w, reference=f)


def random_signal(grid, rng):
    return QSignal2D(grid, rng.normal(size=(4,) + grid.shape))


# Quaternion algebra

def _random_quaternions(settings, count=3):
    rng = np.random.default_rng(settings.seed)
    return rng.normal(size=(count, 4, QUATERNION_SAMPLES))


@check('quat')
def multiplicativity(settings):
    p, q = _random_quaternions(settings, 2)
    scale = quaternion.qmodulus(p) * quaternion.qmodulus(q)
    error = np.abs(quaternion.qmodulus(quaternion.qmul(p, q)) - scale) / scale
    return [error_result('quat', 'multiplicativity', error.max(), tolerance(settings, 'exact'))]


@check('quat')
def anti_involution(settings):
    p, q = _random_quaternions(settings, 2)
    lhs = quaternion.qconj(quaternion.qmul(p, q))
    rhs = quaternion.qmul(quaternion.qconj(q), quaternion.qconj(p))
    error = quaternion.qmodulus(lhs - rhs) / (quaternion.qmodulus(p) * quaternion.qmodulus(q))
    return [error_result('quat', 'anti-involution', error.max(), tolerance(settings, 'exact'))]


@check('quat')
def associativity(settings):
    p, q, r = _random_quaternions(settings, 3)
    lhs = quaternion.qmul(quaternion.qmul(p, q), r)
    rhs = quaternion.qmul(p, quaternion.qmul(q, r))
    scale = quaternion.qmodulus(p) * quaternion.qmodulus(q) * quaternion.qmodulus(r)
    error = quaternion.qmodulus(lhs - rhs) / scale
    return [error_result('quat', 'associativity', error.max(), tolerance(settings, 'exact'))]


@check('quat')
def inverse(settings):
    p, = _random_quaternions(settings, 1)
    reciprocal = quaternion.qconj(p) / quaternion.qabs2(p)
    product = quaternion.qmul(p, reciprocal)
    product[0] -= 1.0
    error = quaternion.qmodulus(product)
    return [error_result('quat', 'inverse', error.max(), tolerance(settings, 'exact'))]


# QFT

@check('qft')
def gaussian_eigenfunction(settings):
    spectrum = qft_forward(reference_gaussian(settings))
    xi1, xi2 = spectrum.frequencies()
    expected = np.zeros(spectrum.data.shape)
    expected[0] = np.exp(-math.pi * (xi1 ** 2 + xi2 ** 2))
    error = np.abs(spectrum.data - expected).max()
    return [error_result('qft', 'gaussian-eigenfunction', error, tolerance(settings, 'gaussian'))]


@check('qft')
def oracle(settings):
    rng = np.random.default_rng(settings.seed)
    worst = 0.0
    for n1 in ORACLE_SIZES:
        for n2 in ORACLE_SIZES:
            grid = Grid2D.centered(n1, 1.0, n2)
            f = random_signal(grid, rng)
            difference = qft_forward(f).data - qft_direct_oracle(f).data
            worst = max(worst, float(np.abs(difference).max()))
    return [error_result('qft', 'oracle', worst, tolerance(settings, 'oracle'))]


@check('qft')
def roundtrip(settings):
    results = []
    for signal in corpus_signals(settings_key(settings)):
        f = signal.signal
        error = l2_norm(qft_inverse(qft_forward(f)) - f) / l2_norm(f)
        results.append(error_result('qft', 'roundtrip-%s' % signal.name, error,
                                    tolerance(settings, 'roundtrip')))
    return results


@check('qft')
def plancherel(settings):
    grid = reference_grid(settings)
    f = corpus.random_bandlimited(grid, settings.seed).signal
    g = corpus.random_bandlimited(grid, settings.seed + 1).signal
    scalar = plancherel_residual(f, g, scalar_only=True)
    # The full quaternion identity needs f conj(g) in R + R e1; real signals qualify.
    real_f = corpus.gaussian(grid, center=(0.5, -0.25)).signal
    real_g = corpus.anisotropic_gaussian(grid).signal
    full = plancherel_residual(real_f, real_g)
    tol = tolerance(settings, 'plancherel')
    return [error_result('qft', 'plancherel-scalar', scalar, tol),
            error_result('qft', 'plancherel-real', full, tol)]


DERIVATIVE_ORDERS = ((1, 0), (0, 1), (1, 1), (2, 0), (0, 2))
DERIVATIVE_WIDTH = 3.0


@check('qft')
def derivative(settings):
    grid = reference_grid(settings)
    f = corpus.gaussian(grid, width=DERIVATIVE_WIDTH).signal
    spectrum = qft_forward(f)
    results = []
    for m, n in DERIVATIVE_ORDERS:
        spectral = qft_inverse(spectral_derivative(spectrum, m, n))
        difference = finite_difference(f, m, n)
        error = l2_norm(spectral - difference) / l2_norm(difference)
        results.append(error_result('qft', 'derivative-%s-%s' % (m, n), error,
                                    tolerance(settings, 'derivative')))
    laplacian = spectral_laplacian(spectrum).data
    summed = spectral_derivative(spectrum, 2, 0).data + spectral_derivative(spectrum, 0, 2).data
    error = np.abs(laplacian - summed).max() / np.abs(laplacian).max()
    results.append(error_result('qft', 'laplacian', error, tolerance(settings, 'exact')))
    return results


@check('qft')
def rotation(settings):
    grid = reference_grid(settings)
    theta = math.pi / 4
    signal = corpus.anisotropic_gaussian(grid)
    x, y = grid.coordinates()
    rotated = QSignal2D(grid, signal.profile(*rotate_points(x, y, theta)))
    lhs, rhs = rotation_identity_sides(signal.signal, theta, rotated)
    error = quaternion.qmodulus(lhs - rhs).max() / quaternion.qmodulus(lhs).max()
    return [error_result('qft', 'rotation', error, tolerance(settings, 'interpolation'))]


@check('qft')
def impulse(settings):
    grid = reference_grid(settings)
    spectrum = qft_forward(corpus.impulse(grid, (0.0, 0.0), quaternion.E3).signal)
    expected = np.asarray(quaternion.E3)[:, None, None] * grid.cell_area
    error = np.abs(spectrum.data - expected).max() / grid.cell_area
    return [error_result('qft', 'impulse', error, tolerance(settings, 'exact'))]


# Wavelets

@check('wavelet')
def log_admissibility(settings):
    tol = tolerance(settings, 'admissibility')
    report = admissibility_report(get_wavelet('log', reference_grid(settings)), tolerance=tol)
    return [relative_result('wavelet', 'log-admissibility', report.c_phi, 1 / (4 * math.pi), tol,
                            report.commutes_with_e2),
            error_result('wavelet', 'log-spread', report.spread, tol)]


@check('wavelet')
def dgauss_admissibility(settings):
    tol = tolerance(settings, 'admissibility')
    report = admissibility_report(get_wavelet('dgauss', reference_grid(settings)), tolerance=tol)
    return [relative_result('wavelet', 'dgauss-admissibility', report.c_phi, 0.25, tol),
            error_result('wavelet', 'dgauss-commutes', float(report.commutes_with_e2), 0.0)]


@check('wavelet')
def gaussian_rejected(settings):
    w = QWavelet('gaussian', reference_gaussian(settings))
    try:
        admissibility_report(w)
    except AdmissibilityError as e:
        logger.log(10, 'Gaussian rejected: %s' % e)
        rejected = True
    else:
        rejected = False
    return [error_result('wavelet', 'gaussian-rejected', float(not rejected), 0.0)]


@check('wavelet')
def aqw_norm(settings):
    w = get_wavelet('log', reference_grid(settings))
    value = aqw_inner_product(w, w)
    return [relative_result('wavelet', 'aqw-norm', value.scalar, 1 / (4 * math.pi),
                            tolerance(settings, 'admissibility'))]


# CQWT

def _small_setup(settings, size=SMALL_GRID, scales=(0.25, 1.0)):
    grid = Grid2D.centered(*size)
    sim = SimGrid.log_uniform(scales[0], scales[1], 4, 4, grid)
    return grid, sim


def _relative(first, second):
    return float(np.sqrt(quaternion.qabs2(first - second).sum() / quaternion.qabs2(second).sum()))


@check('cqwt')
def fast_direct(settings):
    grid, sim = _small_setup(settings)
    w = admitted('log', reference_grid(settings))
    f = corpus.gaussian(grid, width=0.7).signal
    fast = cqwt(f, w, sim, method='fast', window=False)
    direct = cqwt_direct(f, w, sim)
    error = float('inf') if fast.fallback else _relative(fast.coeffs, direct.coeffs)
    return [error_result('cqwt', 'fast-direct', error, tolerance(settings, 'fast'))]


@check('cqwt')
def lattice_direct(settings):
    grid, sim = _small_setup(settings)
    w = admitted('dgauss', reference_grid(settings))
    f = random_signal(grid, np.random.default_rng(settings.seed))
    lattice = cqwt(f, w, sim, method='lattice', window=False)
    direct = cqwt_direct(f, w, sim)
    return [error_result('cqwt', 'lattice-direct', _relative(lattice.coeffs, direct.coeffs),
                         tolerance(settings, 'fast'))]


@check('cqwt')
def plancherel_ratio(settings):
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    sim = reference_sim(settings)
    results = []
    for signal in corpus_signals(key):
        scalogram = reference_transform(key, signal.name)
        energy = scalogram.energy()
        rhs = w.c_phi * l2_norm(signal.signal) ** 2
        windowed = inner_product(windowed_signal(signal.signal, w, sim), signal.signal)
        logger.log(20, 'Plancherel %s: ratio %.4g, %.4g against the scale window energy'
                   % (signal.name, energy / rhs, energy / (w.c_phi * windowed.scalar)))
        results.append(ratio_result('cqwt', 'plancherel-%s' % signal.name, energy, rhs,
                                    tolerance(settings, 'parseval')))
    return results


@check('cqwt')
def parseval(settings):
    """<T f, T g> against C_phi (f, g), the error relative to C_phi ||f|| ||g||."""
    grid = reference_grid(settings)
    w = admitted('log', grid)
    sim = reference_sim(settings)
    f = corpus.random_bandlimited(grid, settings.seed).signal
    g = corpus.random_bandlimited(grid, settings.seed + 1).signal
    lhs, rhs = parseval_check(f, g, w, sim)
    scale = w.c_phi * l2_norm(f) * l2_norm(g)
    error = abs(lhs - rhs) / scale
    windowed = inner_product(windowed_signal(f, w, sim), g) * w.c_phi
    logger.log(20, 'Parseval error %.4g, %.4g against the scale window'
               % (error, abs(lhs - windowed) / scale))
    tol = tolerance(settings, 'parseval')
    return [CheckResult('cqwt', 'parseval', abs(lhs), abs(rhs), error, tol, True,
                        bool(error <= tol))]


@check('cqwt')
def inversion(settings):
    """Raw synthesis of the unit Gaussian, and its error as the largest scale grows."""
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    f, scalogram, reconstruction = inversion_transform(key)
    norm = l2_norm(f)
    compensated = l2_norm(reconstruction.raw + scalogram.residual - f) / norm
    logger.log(20, 'Inversion error %.4g, %.4g with the scale residual of the source added'
               % (reconstruction.raw_error, compensated))
    results = [error_result('cqwt', 'inversion', reconstruction.raw_error,
                            tolerance(settings, 'inversion'))]

    sim = scalogram.sim
    errors = []
    partial = None
    start = 0
    for fraction in INVERSION_FRACTIONS:
        smax = fraction * sim.scale_edges[1]
        stop = int(round(math.log(smax / sim.scale_edges[0]) / sim.log_step))
        band = cqwt_inverse(scalogram.scale_band(start, stop), w).raw
        partial = band if partial is None else partial + band
        errors.append(l2_norm(partial - f) / norm)
        logger.log(20, 'Raw inversion error with scales up to %.3g: %.4g' % (smax, errors[-1]))
        start = stop
    decreasing = all(later < earlier for earlier, later in zip(errors, errors[1:]))
    results.append(CheckResult('cqwt', 'inversion-monotone', errors[0], errors[-1],
                               errors[-1] - errors[0], 0.0, True, decreasing))
    return results


def grid_sample_points(sim, count=8):
    """Points of the SimGrid spread over scales and angles, near the origin in b."""
    bx, by = sim.grid.axes()
    middle1, middle2 = sim.grid.n1 // 2, sim.grid.n2 // 2
    points = []
    for i in range(count):
        j = (i * len(sim.scales)) // count + len(sim.scales) // (2 * count)
        k = (3 * i) % len(sim.angles)
        b = (bx[middle1 + i % 3 - 1], by[middle2 + i % 4 - 2])
        points.append((sim.scales[j], sim.angles[k], b))
    return points


@check('cqwt')
def kernel(settings):
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    _, scalogram, reconstruction = inversion_transform(key)
    residual = reproducing_kernel_check(scalogram, w, grid_sample_points(scalogram.sim),
                                        reconstruction=reconstruction.raw)
    return [error_result('cqwt', 'kernel', residual, tolerance(settings, 'kernel'))]


@check('cqwt')
def linearity(settings):
    grid, sim = _small_setup(settings, COVARIANCE_GRID, (0.5, 2.0))
    w = admitted('log', reference_grid(settings))
    f = corpus.random_bandlimited(grid, settings.seed).signal
    g = corpus.random_bandlimited(grid, settings.seed + 1).signal
    tf, tg = (cqwt(s, w, sim, method='lattice', window=False) for s in (f, g))
    tfg = cqwt(f + g, w, sim, method='lattice', window=False)
    error = np.abs(tfg.coeffs - tf.coeffs - tg.coeffs).max() / tfg.sup_norm()
    return [error_result('cqwt', 'linearity', error, tolerance(settings, 'exact'))]


@check('cqwt')
def anti_linearity(settings):
    grid, sim = _small_setup(settings, COVARIANCE_GRID, (0.5, 2.0))
    w = admitted('log', reference_grid(settings))
    scaled = ANTILINEAR_FACTOR * w
    f = corpus.random_bandlimited(grid, settings.seed).signal
    lhs = cqwt(f, scaled, sim, method='lattice', window=False).coeffs
    factor = np.asarray(ANTILINEAR_FACTOR.conj()).reshape((4, 1, 1, 1, 1))
    rhs = quaternion.qmul(cqwt(f, w, sim, method='lattice', window=False).coeffs, factor)
    error = np.abs(lhs - rhs).max() / np.abs(rhs).max()
    return [error_result('cqwt', 'anti-linearity', error, tolerance(settings, 'exact'))]


@check('cqwt')
def translation(settings):
    grid, sim = _small_setup(settings, COVARIANCE_GRID, (0.5, 2.0))
    w = admitted('dgauss', reference_grid(settings))
    profile = corpus.gaussian_profile(width=0.7)
    x, y = grid.coordinates()
    f = QSignal2D(grid, profile(x, y))
    c1, c2 = ALIGNED_SHIFT
    shifted = QSignal2D(grid, profile(x - c1, y - c2))
    plain = cqwt(f, w, sim, method='lattice', window=False).coeffs
    moved = cqwt(shifted, w, sim, method='lattice', window=False).coeffs
    s1, s2 = int(round(c1 / sim.grid.dx)), int(round(c2 / sim.grid.dy))
    n1, n2 = sim.grid.shape
    # T f_c(b) = T f(b - c) on the overlap of the two translation grids.
    lhs = moved[..., max(s1, 0):n1 + min(s1, 0), max(s2, 0):n2 + min(s2, 0)]
    rhs = plain[..., max(-s1, 0):n1 + min(-s1, 0), max(-s2, 0):n2 + min(-s2, 0)]
    error = np.abs(lhs - rhs).max() / np.abs(plain).max()
    results = [error_result('cqwt', 'translation-aligned', error, tolerance(settings, 'exact'))]

    offgrid = QSignal2D(grid, profile(x - OFFGRID_SHIFT[0], y - OFFGRID_SHIFT[1]))
    pairs = [(coefficient(offgrid, w, a, theta, b),
              coefficient(f, w, a, theta, (b[0] - OFFGRID_SHIFT[0], b[1] - OFFGRID_SHIFT[1])))
             for a, theta, b in SAMPLE_POINTS]
    results.append(_sample_result('translation-offgrid', pairs, settings))
    return results


def _sample_result(name, pairs, settings):
    scale = max(abs(second) for _, second in pairs)
    error = max(abs(first - second) for first, second in pairs) / scale
    return error_result('cqwt', name, error, tolerance(settings, 'covariance'))


@check('cqwt')
def scaling(settings):
    grid = reference_grid(settings)
    w = admitted('log', grid)
    profile = corpus.gaussian_profile()
    x, y = grid.coordinates()
    c = SCALING_FACTOR
    f = QSignal2D(grid, profile(x, y))
    dilated = QSignal2D(grid, profile(c * x, c * y))
    # T[f(c .)](a, theta, b) = (1/c) T f(c a, theta, c b)
    pairs = [(coefficient(dilated, w, a, theta, b),
              coefficient(f, w, c * a, theta, (c * b[0], c * b[1])) / c)
             for a, theta, b in SAMPLE_POINTS]
    return [_sample_result('scaling', pairs, settings)]


@check('cqwt')
def rotation_covariance(settings):
    grid = reference_grid(settings)
    w = admitted('dgauss', grid)
    omega = 2 * math.pi / settings.angles
    signal = corpus.anisotropic_gaussian(grid)
    x, y = grid.coordinates()
    rotated = QSignal2D(grid, signal.profile(*rotate_points(x, y, omega)))
    # T[f(r_omega .)](a, theta, b) = T f(a, theta + omega, r_omega b)
    pairs = [(coefficient(rotated, w, a, theta, b),
              coefficient(signal.signal, w, a, theta + omega, rotate_points(b[0], b[1], omega)))
             for a, theta, b in SAMPLE_POINTS]
    return [_sample_result('rotation', pairs, settings)]


@check('cqwt')
def lp_bound(settings):
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    tol = tolerance(settings, 'lp')
    results = []
    for signal in corpus_signals(key):
        scalogram = reference_transform(key, signal.name)
        for p in (2, 4, float('inf')):
            lhs, rhs = lp_bound_check(scalogram, w, p)
            results.append(CheckResult('cqwt', 'lp-%s-%s' % (p, signal.name), lhs, rhs, lhs / rhs,
                                       tol, True, bool(lhs <= rhs * (1 + tol))))
    return results


# Uncertainty principles

@check('up')
def heisenberg_qft(settings):
    key = settings_key(settings)
    tol = tolerance(settings, 'heisenberg')
    report = heisenberg_qft_ratio(reference_gaussian(key))
    results = [ratio_result('up', 'heisenberg-qft-gaussian', report.lhs, report.rhs,
                            tolerance(settings, 'heisenberg-gaussian'), target=4.0)]
    for signal in corpus_signals(key):
        report = heisenberg_qft_ratio(signal.signal)
        results.append(bound_result('up', report, tol, 'heisenberg-qft-%s' % signal.name))
    return results


@check('up')
def heisenberg_lemma(settings):
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    f = reference_gaussian(key)
    scalogram = reference_transform(key, 'gaussian')
    tol = tolerance(settings, 'lemma')
    reports = [heisenberg_lemma_check(f, w, scalogram.sim, axis, scalogram)
               for axis in (1, 2, 'both')]
    windowed = heisenberg_lemma_check(f, w, scalogram.sim, 'both', scalogram, windowed=True)
    logger.log(20, 'Heisenberg lemma: ratio %.4g, %.4g against the scale window'
               % (reports[2].margin, windowed.margin))
    results = [ratio_result('up', report.name, report.lhs, report.rhs, tol,
                            hypotheses_ok=report.hypotheses_ok) for report in reports]
    summed = reports[0].lhs + reports[1].lhs
    results.append(relative_result('up', 'heisenberg-lemma-sum', reports[2].lhs, summed,
                                   tolerance(settings, 'exact')))
    return results


@check('up')
def heisenberg_cqwt(settings):
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    sim = reference_sim(settings)
    results = []
    for signal in corpus_signals(key):
        scalogram = reference_transform(key, signal.name)
        report = heisenberg_cqwt_ratio(signal.signal, w, sim, scalogram)
        results.append(bound_result('up', report, tolerance(settings, 'heisenberg'),
                                    'heisenberg-cqwt-%s' % signal.name))
    return results


@check('up')
def log_up(settings):
    key = settings_key(settings)
    w = admitted('log', reference_grid(settings))
    tol = tolerance(settings, 'logup')
    f = reference_gaussian(key)
    report = log_up_check(f, w, reference_sim(settings), reference_transform(key, 'gaussian'))
    results = [bound_result('up', report, tol, 'log-up-cqwt-gaussian')]
    for signal in corpus_signals(key):
        report = log_up_qft_check(signal.signal)
        results.append(bound_result('up', report, tol, 'log-up-qft-%s' % signal.name))
    return results


@check('up')
def hardy(settings):
    key = settings_key(settings)
    tol = tolerance(settings, 'hardy')
    spectrum = qft_forward(reference_gaussian(key))
    scalogram = reference_transform(key, 'gaussian')
    a = scalogram.sim.scales[len(scalogram.sim.scales) // 4]
    report = hardy_classify(scalogram, spectrum, a, 0.0, tol)
    beta = report.details.get('beta') or float('nan')
    results = [relative_result('up', 'hardy-beta', beta, math.pi, tol),
               CheckResult('up', 'hardy-log-slice', report.lhs, report.rhs, report.margin, tol,
                           report.hypotheses_ok, report.details['case'] == 'below')]

    amplitude = quaternion.Quaternion(0.5, 0.25, -1.0, 0.75)
    bx, by = scalogram.sim.grid.coordinates()
    coeffs = np.zeros(scalogram.coeffs.shape)
    coeffs[:, 0, 0] = np.asarray(amplitude)[:, None, None] * np.exp(-math.pi * (bx ** 2 + by ** 2))
    synthetic = Scalogram(scalogram.sim, coeffs, scalogram.source_norm, scalogram.source_grid,
                          'synthetic')
    report = hardy_classify(synthetic, spectrum, scalogram.sim.scales[0], scalogram.sim.angles[0],
                            tol)
    r_squared = report.details.get('r_squared', 0.0)
    fit = tolerance(settings, 'hardy-fit')
    results.append(CheckResult('up', 'hardy-critical', r_squared, fit, r_squared - fit, tol,
                               report.hypotheses_ok,
                               report.details['case'] == 'critical' and r_squared >= fit))
    return results


# Running

def run_check(args):
    """Run one registered check; errors become a failed row."""
    suite, name, settings = args
    logger.log(30, 'Running %s/%s' % (suite, name))
    try:
        return SUITES[suite][name](settings)
    except (QcwtError, ArithmeticError, ValueError) as e:
        logger.log(40, 'ERROR: %s/%s: %s' % (suite, name, e))
        nan = float('nan')
        return [CheckResult(suite, name, nan, nan, nan, nan, False, False)]
    except KeyboardInterrupt:
        nan = float('nan')
        return [CheckResult(suite, name, nan, nan, nan, nan, False, False)]


def run_suites(selection, settings=DEFAULT_SETTINGS, processes=1):
    """Run the selected suites and return their CheckResults in registration order."""
    tasks = [(suite, name, settings) for suite in suite_names(selection) for name in SUITES[suite]]
    processes = max(1, min(processes or 1, len(tasks)))
    logger.log(20, 'Using %s parallel processes' % processes)
    if processes == 1:
        batches = [run_check(task) for task in tasks]
    else:
        pool = multiprocessing.Pool(processes=processes)
        try:
            batches = pool.map(run_check, tasks)
        finally:
            pool.close()
            pool.join()
    return [result for batch in batches for result in batch]


def write_csv(results, outfile):
    writer = csv.writer(outfile)
    writer.writerow(REPORT_COLUMNS)
    for result in results:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in result])


def write_text(results, outfile):
    for result in results:
        status = 'PASS' if result.passed else 'FAIL'
        note = '' if result.hypotheses_ok else ' (hypotheses not met)'
        outfile.write('%s %-8s %-36s lhs=%-12.6g rhs=%-12.6g margin=%-12.6g tol=%g%s\n'
                      % (status, result.suite, result.name, result.lhs, result.rhs,
                         result.margin, result.tolerance, note))
    failed = sum(1 for result in results if not result.passed)
    outfile.write('%s checks, %s failed\n' % (len(results), failed))


REPORTS = {'csv': write_csv, 'text': write_text}
