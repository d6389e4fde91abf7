"""The continuous quaternion wavelet transform over SIM(2).

    T f(a, theta, b) = (f, phi_{a,theta,b})

Three evaluations produce the same Scalogram: `cqwt_direct` takes one
inner product per coefficient, `cqwt_lattice` correlates f with each
daughter through FFTs of the component planes, and `cqwt_fast` uses the
quaternion Fourier representation of the transform, which holds only
when the wavelet spectrum and the signal spectrum lie in R + R e2.
"""
import collections
import csv
import logging
import math

import numpy as np

from qcwt import quaternion
from qcwt.errors import AdmissibilityError, FormatError, GridMismatchError, GuardExceededError
from qcwt.qft import QSpectrum2D, qft_forward, qft_inverse
from qcwt.signal import Grid2D, QSignal2D, SimGrid, inner_product, l2_norm
from qcwt.wavelet import daughter

logger = logging.getLogger('qcwt')

DIRECT_LIMIT = 100000
SPECTRUM_TOLERANCE = 1e-8

FLAG_RESIDUAL = 1
FLAG_FALLBACK = 2

QCW_MAGIC = b'QCW1'
WAVELET_NAME_BYTES = 64
QCW_HEADER = np.dtype([('magic', 'S4'),
                       ('n_scales', '<u4'), ('n_angles', '<u4'),
                       ('n1', '<u4'), ('n2', '<u4'),
                       ('m1', '<u4'), ('m2', '<u4'),
                       ('flags', '<u4'),
                       ('bx0', '<f8'), ('by0', '<f8'), ('bdx', '<f8'), ('bdy', '<f8'),
                       ('sx0', '<f8'), ('sy0', '<f8'), ('sdx', '<f8'), ('sdy', '<f8'),
                       ('smin', '<f8'), ('smax', '<f8'),
                       ('source_norm', '<f8'), ('energy_deficit', '<f8'),
                       ('wavelet', 'S%s' % WAVELET_NAME_BYTES)])

CSV_COLUMNS = ['a', 'theta', 'b1', 'b2', 'q0', 'q1', 'q2', 'q3', 'modulus']

Reconstruction = collections.namedtuple('Reconstruction', 'signal raw error raw_error')


class Scalogram(object):
    """CQWT coefficients over a SimGrid.

    `coeffs` has shape (4, n_scales, n_angles, n1, n2) where (n1, n2) is
    the translation grid. `residual` is the part of the source that the
    scale window of the SimGrid does not reach, when it was computed.
    """

    def __init__(self, sim, coeffs, source_norm, source_grid, wavelet='',
                 energy_deficit=float('nan'), residual=None, fallback=False):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape != (4,) + sim.shape:
            raise ValueError('Coefficients of shape %s do not fit %r' % (coeffs.shape, sim))
        if not np.all(np.isfinite(coeffs)):
            raise ValueError('Scalogram coefficients must be finite')
        coeffs.flags.writeable = False
        self.sim = sim
        self.coeffs = coeffs
        self.source_norm = float(source_norm)
        self.source_grid = source_grid
        self.wavelet = wavelet
        self.energy_deficit = energy_deficit
        self.residual = residual
        self.fallback = fallback

    def modulus(self):
        return quaternion.qmodulus(self.coeffs)

    def sup_norm(self):
        return float(self.modulus().max())

    def haar_sum(self, values):
        """Integrate values indexed (j, k, b1, b2) against the Haar measure."""
        weights = self.sim.weights[:, :, None, None]
        return (values * weights).sum(axis=(-4, -3, -2, -1)) * self.sim.grid.cell_area

    def energy(self):
        return float(self.haar_sum(quaternion.qabs2(self.coeffs)))

    def lp_norm(self, p):
        if p == float('inf'):
            return self.sup_norm()
        return float(self.haar_sum(self.modulus() ** p)) ** (1.0 / p)

    def index_of(self, a, theta, b):
        """The (j, k, m1, m2) index of a point of the SimGrid."""
        sim = self.sim
        j = int(np.argmin(np.abs(sim.scales - a)))
        k = int(np.argmin(np.abs((sim.angles - theta + math.pi) % (2 * math.pi) - math.pi)))
        m1 = int(round((b[0] - sim.grid.x0) / sim.grid.dx))
        m2 = int(round((b[1] - sim.grid.y0) / sim.grid.dy))
        bx, by = sim.grid.axes()
        if (abs(sim.scales[j] - a) > 1e-9 * a or
                abs(math.remainder(sim.angles[k] - theta, 2 * math.pi)) > 1e-9 or
                not (0 <= m1 < sim.grid.n1 and 0 <= m2 < sim.grid.n2) or
                abs(bx[m1] - b[0]) > 1e-9 or abs(by[m2] - b[1]) > 1e-9):
            raise ValueError('(%s, %s, %s) is not a point of the SimGrid' % (a, theta, tuple(b)))
        return j, k, m1, m2

    def scale_band(self, start, stop):
        """The coefficients at scales start:stop."""
        return Scalogram(self.sim.scale_band(start, stop), self.coeffs[:, start:stop],
                         self.source_norm, self.source_grid, self.wavelet)

    def value(self, j, k, m1, m2):
        return quaternion.Quaternion.from_array(self.coeffs[:, j, k, m1, m2])

    def __repr__(self):
        return '<Scalogram %s wavelet=%s>' % (self.sim, self.wavelet)


def scalogram_inner_product(first, second):
    """<T, S> = integral of T conj(S) over SIM(2)."""
    if first.coeffs.shape != second.coeffs.shape:
        raise GridMismatchError('Scalograms over different SimGrids')
    product = quaternion.qmul(first.coeffs, quaternion.qconj(second.coeffs))
    return quaternion.Quaternion.from_array(first.haar_sum(product))


def coefficient(f, w, a, theta, b):
    """A single coefficient T f(a, theta, b), at any point of SIM(2)."""
    return inner_product(f, daughter(w, a, theta, b, grid=f.grid))


def _check_geometry(f, w):
    if w.profile is None and not f.grid.same_as(w.grid):
        raise GridMismatchError('Signal and sampled wavelet must share a grid')


def cqwt_direct(f, w, sim):
    _check_geometry(f, w)
    if sim.n_coefficients > DIRECT_LIMIT:
        raise GuardExceededError('The direct CQWT is limited to %s coefficients, %r has %s'
                                 % (DIRECT_LIMIT, sim, sim.n_coefficients))
    bx, by = sim.grid.axes()
    coeffs = np.zeros((4,) + sim.shape)
    for j, a in enumerate(sim.scales):
        for k, theta in enumerate(sim.angles):
            logger.log(10, 'Direct CQWT slab a=%.4g theta=%.4g' % (a, theta))
            for m1, b1 in enumerate(bx):
                for m2, b2 in enumerate(by):
                    coeffs[:, j, k, m1, m2] = coefficient(f, w, a, theta, (b1, b2))
    return Scalogram(sim, coeffs, l2_norm(f), f.grid, w.name)


def _lattice_geometry(grid, sim_grid):
    offsets = grid.lattice_offsets(sim_grid)
    if offsets is None:
        raise GridMismatchError('The translations %s are not a sublattice of the signal grid %s'
                                % (sim_grid, grid))
    return offsets


def cqwt_lattice(f, w, sim):
    """Correlate f with every daughter by FFT; needs translations on the signal lattice."""
    _check_geometry(f, w)
    grid = f.grid
    s1, s2, o1, o2 = _lattice_geometry(grid, sim.grid)
    n1, n2 = grid.shape
    m1, m2 = sim.grid.shape
    # Daughter samples at -j*dx for every lattice difference j = l - i that occurs.
    low1, high1 = o1 - n1 + 1, o1 + s1 * (m1 - 1)
    low2, high2 = o2 - n2 + 1, o2 + s2 * (m2 - 1)
    kernel_grid = Grid2D(high1 - low1 + 1, high2 - low2 + 1, -high1 * grid.dx, -high2 * grid.dy,
                         grid.dx, grid.dy)
    index1 = (o1 + s1 * np.arange(m1) - low1)[:, None]
    index2 = (o2 + s2 * np.arange(m2) - low2)[None, :]
    coeffs = np.zeros((4,) + sim.shape)
    for j, a in enumerate(sim.scales):
        for k, theta in enumerate(sim.angles):
            logger.log(10, 'Lattice CQWT slab a=%.4g theta=%.4g' % (a, theta))
            psi = daughter(w, a, theta, (0.0, 0.0), grid=kernel_grid).data
            kernel = quaternion.qconj(psi)[:, ::-1, ::-1]
            correlation = quaternion.convolve(f.data, kernel, grid.cell_area)
            coeffs[:, j, k] = correlation[:, index1, index2]
    return Scalogram(sim, coeffs, l2_norm(f), f.grid, w.name)


def fast_path_problems(f, w, sim, spectrum=None):
    """Reasons why the Fourier representation of the CQWT does not apply, if any."""
    problems = []
    if not w.commutes_with_e2:
        problems.append('the spectrum of %s is not known to lie in R + R e2' % w.name)
    if spectrum is None:
        spectrum = qft_forward(f)
    fraction = spectrum.component_fraction((1, 3))
    if fraction > SPECTRUM_TOLERANCE:
        problems.append('the signal spectrum has e1/e3 parts of %.3g of its peak' % fraction)
    if not f.grid.is_origin_aligned():
        problems.append('the signal grid does not contain the origin as a lattice point')
    if f.grid.lattice_offsets(sim.grid) is None:
        problems.append('the translations are not a sublattice of the signal grid')
    return problems


def _padded_size(signal_index, translation_index):
    reach = max(np.abs(signal_index).max(), np.abs(translation_index).max(),
                signal_index.max() - translation_index.min(),
                translation_index.max() - signal_index.min())
    return int(reach) + 1


def cqwt_fast(f, w, sim):
    """CQWT from F{conj T f(a, theta, -b)}(xi) = a F{phi(r_{-theta} .)}(a xi) conj(f^(xi)).

    Falls back to cqwt_direct, and sets the `fallback` flag of the result,
    when the hypotheses of that representation do not hold.
    """
    problems = fast_path_problems(f, w, sim)
    if problems:
        for problem in problems:
            logger.log(30, 'Fast CQWT not applicable: %s' % problem)
        scalogram = cqwt_direct(f, w, sim)
        scalogram.fallback = True
        return scalogram

    grid = f.grid
    s1, s2, o1, o2 = _lattice_geometry(grid, sim.grid)
    first1 = int(round(grid.x0 / grid.dx))
    first2 = int(round(grid.y0 / grid.dy))
    signal1 = first1 + np.arange(grid.n1)
    signal2 = first2 + np.arange(grid.n2)
    shift1 = first1 + o1 + s1 * np.arange(sim.grid.n1)
    shift2 = first2 + o2 + s2 * np.arange(sim.grid.n2)
    half1 = _padded_size(signal1, shift1)
    half2 = _padded_size(signal2, shift2)
    padded = Grid2D(2 * half1, 2 * half2, -half1 * grid.dx, -half2 * grid.dy, grid.dx, grid.dy)

    data = np.zeros((4,) + padded.shape)
    start1, start2 = first1 + half1, first2 + half2
    data[:, start1:start1 + grid.n1, start2:start2 + grid.n2] = f.data
    conj_spectrum = quaternion.qconj(qft_forward(QSignal2D(padded, data)).data)

    index1 = (half1 - shift1)[:, None]
    index2 = (half2 - shift2)[None, :]
    coeffs = np.zeros((4,) + sim.shape)
    for j, a in enumerate(sim.scales):
        for k, theta in enumerate(sim.angles):
            logger.log(10, 'Fast CQWT slab a=%.4g theta=%.4g' % (a, theta))
            psi = qft_forward(daughter(w, a, theta, (0.0, 0.0), grid=padded)).data
            product = QSpectrum2D(padded, quaternion.qmul(psi, conj_spectrum))
            reflected = qft_inverse(product).data
            coeffs[:, j, k] = quaternion.qconj(reflected[:, index1, index2])
    return Scalogram(sim, coeffs, l2_norm(f), f.grid, w.name)


def window_response(w, sim, xi1, xi2):
    """Sum of |F{phi(r_{-theta} .)}(a xi)|^2 dln(a) dtheta over the SimGrid nodes.

    This is the part of C_phi the SimGrid resolves at frequency xi.
    """
    total = np.zeros(np.shape(xi1))
    for j, a in enumerate(sim.scales):
        for k, theta in enumerate(sim.angles):
            spectrum = w.rotated_spectrum_at(a * xi1, a * xi2, theta)
            total += sim.weights[j, k] * a ** 2 * quaternion.qabs2(spectrum)
    return total


def window_filter(f, w, sim):
    """f filtered by C_win(xi) / C_phi, the part of f the SimGrid scale window captures."""
    if w.c_phi is None:
        raise AdmissibilityError('%s has no admissibility constant' % w.name)
    spectrum = qft_forward(f)
    ratio = window_response(w, sim, *spectrum.frequencies()) / w.c_phi
    return spectrum, ratio


def scale_residual(f, w, sim):
    """Return (energy_deficit, residual) of the scale window of `sim`."""
    spectrum, ratio = window_filter(f, w, sim)
    power = quaternion.qabs2(spectrum.data)
    total = float(power.sum())
    deficit = 0.0 if total == 0 else 1.0 - float((power * ratio).sum()) / total
    residual = qft_inverse(QSpectrum2D(spectrum.spatial, spectrum.data * (1.0 - ratio)))
    return deficit, residual


def windowed_signal(f, w, sim):
    spectrum, ratio = window_filter(f, w, sim)
    return qft_inverse(QSpectrum2D(spectrum.spatial, spectrum.data * ratio))


def min_resolved_scale(w, grid):
    """Smallest scale whose daughters the sampling of `grid` resolves.

    A daughter at scale a keeps its spectrum within |xi| <= bandwidth / a,
    which has to stay below the Nyquist frequency 1 / (2 max(dx, dy)).
    """
    return 2.0 * max(grid.dx, grid.dy) * w.bandwidth()


def check_resolution(w, grid, sim):
    """Warn, and return the resolved scale, when the smallest scale of `sim` is below it."""
    resolved = min_resolved_scale(w, grid)
    if sim.scales[0] < resolved:
        logger.log(30, 'Scales below %.3g are under-resolved by the sampling of the signal '
                   '(dx=%.3g, dy=%.3g), the smallest scale is %.3g'
                   % (resolved, grid.dx, grid.dy, sim.scales[0]))
        return resolved
    return None


METHODS = ('auto', 'fast', 'lattice', 'direct')


def cqwt(f, w, sim, method='auto', window=True):
    """Transform f, choosing the evaluation when `method` is 'auto'.

    With `window` and a known C_phi the scale residual and energy deficit
    are attached to the result.
    """
    if method == 'auto':
        if not fast_path_problems(f, w, sim):
            method = 'fast'
        elif f.grid.lattice_offsets(sim.grid) is not None:
            method = 'lattice'
        else:
            method = 'direct'
        logger.log(20, 'Using the %s CQWT' % method)
    if method == 'fast':
        scalogram = cqwt_fast(f, w, sim)
    elif method == 'lattice':
        scalogram = cqwt_lattice(f, w, sim)
    elif method == 'direct':
        scalogram = cqwt_direct(f, w, sim)
    else:
        raise ValueError('Unknown CQWT method %s, use one of %s' % (method, ', '.join(METHODS)))
    check_resolution(w, f.grid, sim)
    if window and w.c_phi is not None:
        scalogram.energy_deficit, scalogram.residual = scale_residual(f, w, sim)
        logger.log(20, 'Scale window energy deficit: %.4g' % scalogram.energy_deficit)
    return scalogram


def _relative_error(signal, reference):
    if reference is None:
        return None
    norm = l2_norm(reference)
    difference = l2_norm(signal - reference)
    if norm == 0:
        return difference
    return difference / norm


def cqwt_inverse(scalogram, w, compensate=False, reference=None):
    """f = (1/C_phi) integral T f(a, theta, b) phi_{a,theta,b} dmu db, as a Haar-weighted sum.

    Each (a, theta) slab is spread back over the signal lattice by a
    quaternion convolution with its daughter. With `compensate`, the stored
    scale residual is added; it was computed from the source signal, so the
    compensated result is a diagnostic and not a synthesis. Errors are
    relative to `reference`, when given.
    """
    if w.c_phi is None:
        raise AdmissibilityError('Inversion needs the admissibility constant of %s' % w.name)
    sim = scalogram.sim
    grid = scalogram.source_grid
    check_resolution(w, grid, sim)
    s1, s2, o1, o2 = _lattice_geometry(grid, sim.grid)
    n1, n2 = grid.shape
    m1, m2 = sim.grid.shape
    span1, span2 = s1 * (m1 - 1), s2 * (m2 - 1)
    low1, low2 = -(o1 + span1), -(o2 + span2)
    kernel_grid = Grid2D(n1 - 1 - o1 - low1 + 1, n2 - 1 - o2 - low2 + 1,
                         low1 * grid.dx, low2 * grid.dy, grid.dx, grid.dy)
    result = np.zeros((4, n1, n2))
    spread = np.zeros((4, span1 + 1, span2 + 1))
    for j, a in enumerate(sim.scales):
        for k, theta in enumerate(sim.angles):
            spread[:, ::s1, ::s2] = scalogram.coeffs[:, j, k]
            psi = daughter(w, a, theta, (0.0, 0.0), grid=kernel_grid).data
            full = quaternion.convolve(spread, psi, sim.grid.cell_area)
            result += sim.weights[j, k] * full[:, span1:span1 + n1, span2:span2 + n2]
    raw = QSignal2D(grid, result / w.c_phi)
    signal = raw
    if compensate:
        if scalogram.residual is None:
            logger.log(30, 'The scalogram carries no scale residual, nothing to compensate')
        else:
            signal = raw + scalogram.residual
    error = _relative_error(signal, reference)
    raw_error = _relative_error(raw, reference)
    if error is not None and signal is not raw:
        logger.log(20, 'Reconstruction error %.4g with the scale residual of the source, '
                   '%.4g without' % (error, raw_error))
    elif error is not None:
        logger.log(20, 'Reconstruction error %.4g' % error)
    return Reconstruction(signal, raw, error, raw_error)


def reproducing_kernel_check(scalogram, w, sample_points, compensate=False, reconstruction=None):
    """Largest |K T - T| at the sample points, relative to the largest coefficient.

    K T(a', theta', b') = (1/C_phi) integral T(a, theta, b) (phi_{a,theta,b}, phi_{a',theta',b'})
    is evaluated as the inner product of the reconstruction with phi_{a',theta',b'}.
    Sample points are (a, theta, b) triples on the SimGrid. A reconstruction
    of the scalogram can be passed in to avoid synthesizing it again.
    """
    scale = scalogram.sup_norm()
    if reconstruction is None:
        reconstruction = cqwt_inverse(scalogram, w, compensate=compensate).signal
    worst = 0.0
    for a, theta, b in sample_points:
        index = scalogram.index_of(a, theta, b)
        kernel_side = coefficient(reconstruction, w, a, theta, b)
        residual = abs(kernel_side - scalogram.value(*index))
        logger.log(10, 'Reproducing kernel at (%.4g, %.4g, %s): %.4g' % (a, theta, tuple(b),
                                                                         residual))
        worst = max(worst, residual)
    if scale == 0:
        return worst
    return worst / scale


def parseval_check(f, g, w, sim, windowed=False, method='auto'):
    """Both sides of <T f, T g> = C_phi (f, g).

    With `windowed`, the right side uses f filtered by the scale window of
    `sim` instead, which is what a finite range of scales reproduces.
    """
    if w.c_phi is None:
        raise AdmissibilityError('Parseval needs the admissibility constant of %s' % w.name)
    lhs = scalogram_inner_product(cqwt(f, w, sim, method, window=False),
                                  cqwt(g, w, sim, method, window=False))
    if windowed:
        f = windowed_signal(f, w, sim)
    rhs = inner_product(f, g) * w.c_phi
    logger.log(20, 'Parseval: <Tf, Tg> = %s, C_phi (f, g) = %s' % (lhs, rhs))
    return lhs, rhs


def lp_bound_check(scalogram, w, p):
    """||T f||_p and C_phi^(1/p) ||phi||^(1 - 2/p) ||f||."""
    if p != float('inf') and p < 2:
        raise ValueError('The L^p bound holds for p >= 2, not %s' % p)
    if w.c_phi is None:
        raise AdmissibilityError('The L^p bound needs the admissibility constant of %s' % w.name)
    phi_norm = l2_norm(w.mother)
    lhs = scalogram.lp_norm(p)
    if p == float('inf'):
        rhs = phi_norm * scalogram.source_norm
    else:
        rhs = w.c_phi ** (1.0 / p) * phi_norm ** (1.0 - 2.0 / p) * scalogram.source_norm
    return lhs, rhs


def write_qcw(path, scalogram):
    name = scalogram.wavelet.encode('utf-8')
    if len(name) > WAVELET_NAME_BYTES:
        raise FormatError('Wavelet name %r is %s bytes, a QCW file holds at most %s'
                          % (scalogram.wavelet, len(name), WAVELET_NAME_BYTES))
    sim = scalogram.sim
    header = np.zeros(1, dtype=QCW_HEADER)
    header['magic'] = QCW_MAGIC
    header['n_scales'], header['n_angles'] = len(sim.scales), len(sim.angles)
    header['n1'], header['n2'] = sim.grid.shape
    header['m1'], header['m2'] = scalogram.source_grid.shape
    flags = 0
    if scalogram.residual is not None:
        flags |= FLAG_RESIDUAL
    if scalogram.fallback:
        flags |= FLAG_FALLBACK
    header['flags'] = flags
    for prefix, grid in (('b', sim.grid), ('s', scalogram.source_grid)):
        for name in ('x0', 'y0', 'dx', 'dy'):
            header[prefix + name] = getattr(grid, name)
    header['smin'], header['smax'] = sim.scale_edges
    header['source_norm'] = scalogram.source_norm
    header['energy_deficit'] = scalogram.energy_deficit
    header['wavelet'] = name
    with open(path, 'wb') as outfile:
        outfile.write(header.tobytes())
        for array in (sim.scales, sim.angles, sim.weights,
                      np.moveaxis(scalogram.coeffs, 0, -1)):
            outfile.write(np.ascontiguousarray(array, dtype='<f8').tobytes())
        if scalogram.residual is not None:
            outfile.write(np.ascontiguousarray(scalogram.residual.data, dtype='<f8').tobytes())
    logger.log(10, 'Wrote %s' % path)


def read_qcw(path):
    with open(path, 'rb') as infile:
        raw = infile.read()
    if len(raw) < QCW_HEADER.itemsize:
        raise FormatError('%s is truncated: no complete header' % path)
    header = np.frombuffer(raw, dtype=QCW_HEADER, count=1)[0]
    if header['magic'] != QCW_MAGIC:
        raise FormatError('%s is not a QCW file (bad magic %r)' % (path, bytes(header['magic'])))
    n_scales, n_angles = int(header['n_scales']), int(header['n_angles'])
    n1, n2, m1, m2 = (int(header[k]) for k in ('n1', 'n2', 'm1', 'm2'))
    flags = int(header['flags'])
    sizes = [n_scales, n_angles, n_scales * n_angles, n_scales * n_angles * n1 * n2 * 4]
    if flags & FLAG_RESIDUAL:
        sizes.append(4 * m1 * m2)
    payload = raw[QCW_HEADER.itemsize:]
    if len(payload) != 8 * sum(sizes):
        raise FormatError('%s: header describes %s bytes of data, file has %s'
                          % (path, 8 * sum(sizes), len(payload)))
    values = np.frombuffer(payload, dtype='<f8').astype(float)
    if not np.all(np.isfinite(values)):
        raise FormatError('%s contains non-finite values' % path)
    parts = np.split(values, np.cumsum(sizes)[:-1])
    try:
        bgrid = Grid2D(n1, n2, header['bx0'], header['by0'], header['bdx'], header['bdy'])
        sgrid = Grid2D(m1, m2, header['sx0'], header['sy0'], header['sdx'], header['sdy'])
        sim = SimGrid(parts[0], parts[1], bgrid, parts[2].reshape(n_scales, n_angles),
                      (float(header['smin']), float(header['smax'])))
    except ValueError as e:
        raise FormatError('%s: %s' % (path, e))
    coeffs = np.moveaxis(parts[3].reshape(n_scales, n_angles, n1, n2, 4), -1, 0)
    residual = None
    if flags & FLAG_RESIDUAL:
        residual = QSignal2D(sgrid, parts[4].reshape(4, m1, m2))
    try:
        name = bytes(header['wavelet']).decode('utf-8')
    except UnicodeDecodeError as e:
        raise FormatError('%s: bad wavelet name: %s' % (path, e))
    return Scalogram(sim, coeffs, float(header['source_norm']), sgrid, name,
                     float(header['energy_deficit']), residual, bool(flags & FLAG_FALLBACK))


def _selection(index, count, name):
    if index is None:
        return range(count)
    if not 0 <= index < count:
        raise ValueError('%s %s is out of range, there are %s' % (name, index, count))
    return [index]


def export_csv(scalogram, outfile, a_index=None, theta_index=None):
    """Write one CSV row per coefficient (a, theta, b1, b2, q0..q3, modulus)."""
    sim = scalogram.sim
    scales = _selection(a_index, len(sim.scales), 'Scale index')
    angles = _selection(theta_index, len(sim.angles), 'Angle index')
    bx, by = sim.grid.axes()
    modulus = scalogram.modulus()
    writer = csv.writer(outfile)
    writer.writerow(CSV_COLUMNS)
    rows = 0
    for j in scales:
        for k in angles:
            for m1, b1 in enumerate(bx):
                for m2, b2 in enumerate(by):
                    q = scalogram.coeffs[:, j, k, m1, m2]
                    writer.writerow([repr(float(v)) for v in
                                     (sim.scales[j], sim.angles[k], b1, b2,
                                      q[0], q[1], q[2], q[3], modulus[j, k, m1, m2])])
                    rows += 1
    logger.log(20, 'Exported %s rows' % rows)
    return rows
