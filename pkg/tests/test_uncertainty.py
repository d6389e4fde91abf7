import math
import unittest

import numpy as np

from qcwt import main, quaternion
from qcwt.cqwt import Scalogram, cqwt
from qcwt.qft import qft_forward
from qcwt.signal import Grid2D, QSignal2D, SimGrid, l2_norm
from qcwt.uncertainty import (LOG_CONSTANT, PRINTED_LOG_CONSTANT, gaussian_profile_fit,
                              gaussian_rate, hardy_classify, heisenberg_cqwt_ratio,
                              heisenberg_lemma_check, heisenberg_qft_ratio, log_moment,
                              log_up_check, log_up_qft_check)
from qcwt.wavelet import admit, get_wavelet

from tests.utils import gaussian_signal, mexican_hat_signal, random_signal


class TestConstants(unittest.TestCase):

    def test_values(self):
        self.assertAlmostEqual(LOG_CONSTANT, -3.10824, places=5)
        self.assertAlmostEqual(PRINTED_LOG_CONSTANT, -1.721946, places=6)


class TestQFTPrinciples(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)
        self.grid = Grid2D.centered(128, 8.0)

    def test_heisenberg_gaussian(self):
        report = heisenberg_qft_ratio(gaussian_signal(self.grid))
        self.assertAlmostEqual(report.margin, 4.0, delta=1e-6)
        self.assertTrue(report.hypotheses_ok)
        self.assertEqual(report.details['convention'], 'ratio')

    def test_heisenberg_other_signals(self):
        for seed in (1, 2):
            report = heisenberg_qft_ratio(random_signal(self.grid, seed))
            self.assertTrue(report.hypotheses_ok)
            self.assertGreater(report.margin, 4.0 - 1e-6)
        # A wider Gaussian has the same ratio
        report = heisenberg_qft_ratio(gaussian_signal(self.grid, width=2.0))
        self.assertAlmostEqual(report.margin, 4.0, delta=1e-6)

    def test_heisenberg_without_decay(self):
        f = QSignal2D.from_real(self.grid, np.ones(self.grid.shape))
        self.assertFalse(heisenberg_qft_ratio(f).hypotheses_ok)

    def test_heisenberg_zero_signal(self):
        report = heisenberg_qft_ratio(QSignal2D.zeros(self.grid))
        self.assertEqual(report.margin, 1.0)
        self.assertTrue(report.details['trivial'])

    def test_log_moment(self):
        # integral ln|x| exp(-2 pi |x|^2) dx = -(gamma + ln 2 pi) / 4
        f = gaussian_signal(self.grid)
        expected = -(0.5772156649 + math.log(2 * math.pi)) / 4
        self.assertAlmostEqual(log_moment(f.data, f.grid), expected, delta=0.05)

    def test_log_up_gaussian(self):
        f = gaussian_signal(self.grid)
        report = log_up_qft_check(f)
        energy = l2_norm(f) ** 2
        self.assertAlmostEqual(report.lhs / energy, -2.4150, delta=0.15)
        self.assertGreater(report.margin, 0)
        self.assertTrue(report.hypotheses_ok)
        # The Gaussian does not satisfy the inequality with the printed constant
        self.assertLess(report.details['printed_margin'], 0)
        self.assertLess(log_up_qft_check(f, constant=PRINTED_LOG_CONSTANT).margin, 0)

    def test_log_up_hypotheses(self):
        report = log_up_qft_check(random_signal(self.grid, 3))
        self.assertFalse(report.hypotheses_ok)
        report = log_up_qft_check(gaussian_signal(self.grid, value=quaternion.Quaternion(1, 0, 2)))
        self.assertTrue(report.hypotheses_ok)


class TestCQWTPrinciples(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        main.setup_logging(0, 2)
        cls.grid = Grid2D.centered(64, 8.0)
        cls.log = admit(get_wavelet('log', Grid2D.centered(96, 6.0)))
        cls.sim = SimGrid.log_uniform(0.5, 4.0, 16, 8, cls.grid)
        cls.f = gaussian_signal(cls.grid, width=1.5)
        cls.scalogram = cqwt(cls.f, cls.log, cls.sim)

    def setUp(self):
        main.setup_logging(0, 2)

    def test_heisenberg_lemma_windowed(self):
        reports = [heisenberg_lemma_check(self.f, self.log, self.sim, axis, self.scalogram,
                                          windowed=True)
                   for axis in (1, 2, 'both')]
        for report in reports:
            self.assertAlmostEqual(report.margin, 1.0, delta=0.05)
            self.assertTrue(report.hypotheses_ok)
        self.assertAlmostEqual(reports[2].lhs, reports[0].lhs + reports[1].lhs, places=12)
        with self.assertRaises(ValueError):
            heisenberg_lemma_check(self.f, self.log, self.sim, 3, self.scalogram)

    def test_heisenberg_lemma_narrow_window(self):
        # Scales in [0.5, 4] miss part of C_phi |xi f^|^2 for a Gaussian of width 1.5
        report = heisenberg_lemma_check(self.f, self.log, self.sim, 'both', self.scalogram)
        self.assertLess(report.margin, 0.97)
        self.assertGreater(report.margin, 0.8)

    def test_heisenberg_cqwt(self):
        report = heisenberg_cqwt_ratio(self.f, self.log, self.sim, self.scalogram)
        self.assertTrue(report.hypotheses_ok)
        self.assertGreaterEqual(report.margin, 1.0)

    def test_log_up(self):
        report = log_up_check(self.f, self.log, self.sim, self.scalogram)
        self.assertTrue(report.hypotheses_ok)
        self.assertTrue(report.details['windowed'])
        self.assertGreater(report.margin, 0)
        self.assertEqual(report.details['printed_constant'], PRINTED_LOG_CONSTANT)

    def test_hardy_beta_and_slice(self):
        spectrum = qft_forward(self.f)
        report = hardy_classify(self.scalogram, spectrum, self.sim.scales[8], 0.0)
        self.assertAlmostEqual(report.details['beta'], 2.25 * math.pi, delta=0.05)
        self.assertEqual(report.details['case'], 'below')
        self.assertLess(report.margin, 1.0)

    def test_hardy_critical(self):
        spectrum = qft_forward(self.f)
        bx, by = self.sim.grid.coordinates()
        coeffs = np.zeros(self.scalogram.coeffs.shape)
        amplitude = quaternion.Quaternion(0.5, 0.25, -1.0, 0.75)
        # alpha = pi / 2.25 against beta = 2.25 pi
        profile = np.exp(-math.pi * (bx ** 2 + by ** 2) / 2.25)
        coeffs[:, 0, 0] = np.asarray(amplitude)[:, None, None] * profile
        synthetic = Scalogram(self.sim, coeffs, 1.0, self.grid)
        report = hardy_classify(synthetic, spectrum, self.sim.scales[0], 0.0)
        self.assertEqual(report.details['case'], 'critical')
        self.assertGreater(report.details['r_squared'], 0.999)
        fitted = report.details['amplitude']
        self.assertLess(abs(fitted - amplitude), 1e-3)

    def test_hardy_above_and_unclassifiable(self):
        spectrum = qft_forward(self.f)
        empty = Scalogram(self.sim, np.zeros(self.scalogram.coeffs.shape), 1.0, self.grid)
        self.assertEqual(hardy_classify(empty, spectrum, 1.0, 0.0).details['case'], 'above')

        data = np.zeros((4,) + self.grid.shape)
        data[0, 32, 32] = 1.0
        flat = qft_forward(QSignal2D(self.grid, data))
        report = hardy_classify(self.scalogram, flat, 1.0, 0.0)
        self.assertEqual(report.details['case'], 'unclassifiable')
        self.assertFalse(report.hypotheses_ok)


class TestLemmaAgainstCphi(unittest.TestCase):
    """A zero mean signal whose spectrum the scale window nearly covers."""

    @classmethod
    def setUpClass(cls):
        main.setup_logging(0, 2)
        cls.grid = Grid2D.centered(128, 3.2)
        cls.log = admit(get_wavelet('log', Grid2D.centered(96, 6.0)))
        cls.sim = SimGrid.log_uniform(0.2, 4.0, 16, 4, cls.grid)
        cls.f = mexican_hat_signal(cls.grid)
        cls.scalogram = cqwt(cls.f, cls.log, cls.sim)

    def setUp(self):
        main.setup_logging(0, 2)

    def test_heisenberg_lemma(self):
        for axis in (1, 2, 'both'):
            report = heisenberg_lemma_check(self.f, self.log, self.sim, axis, self.scalogram)
            self.assertAlmostEqual(report.margin, 1.0, delta=0.05)
            self.assertTrue(report.hypotheses_ok)


class TestFits(unittest.TestCase):

    def test_gaussian_rate(self):
        grid = Grid2D.centered(64, 8.0)
        f = gaussian_signal(grid, width=1.5)
        rate, count = gaussian_rate(f.modulus(), grid)
        self.assertAlmostEqual(rate, math.pi / 2.25)
        self.assertGreater(count, 10)
        self.assertEqual(gaussian_rate(np.ones(grid.shape), grid), (None, 0))

    def test_profile_fit(self):
        grid = Grid2D.centered(64, 8.0)
        value = quaternion.Quaternion(1, -2, 0, 0.5)
        f = gaussian_signal(grid, value=value)
        amplitude, r_squared = gaussian_profile_fit(f.data, grid, math.pi)
        self.assertLess(abs(amplitude - value), 1e-12)
        self.assertAlmostEqual(r_squared, 1.0)
