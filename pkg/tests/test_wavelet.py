import math
import os
import shutil
import tempfile
import unittest

import numpy as np

from qcwt import main, quaternion
from qcwt.errors import AdmissibilityError, GridMismatchError
from qcwt.qft import qft_forward
from qcwt.signal import Grid2D, QSignal2D, write_qsf
from qcwt.wavelet import (QWavelet, admissibility_report, admit, aqw_inner_product, daughter,
                          daughter_spectrum, default_probes, get_wavelet)

from tests.utils import gaussian_signal

LOG_CONSTANT = 1 / (4 * math.pi)


class TestAdmissibility(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)
        self.grid = Grid2D.centered(128, 8.0)

    def test_log(self):
        report = admissibility_report(get_wavelet('log', self.grid))
        self.assertAlmostEqual(report.c_phi / LOG_CONSTANT, 1.0, delta=0.01)
        self.assertLess(report.spread, 0.01)
        self.assertTrue(report.commutes_with_e2)
        self.assertEqual(len(report.values), 8)

    def test_dgauss(self):
        report = admissibility_report(get_wavelet('dgauss', self.grid))
        self.assertAlmostEqual(report.c_phi / 0.25, 1.0, delta=0.01)
        self.assertFalse(report.commutes_with_e2)

    def test_gaussian_is_rejected(self):
        with self.assertRaises(AdmissibilityError):
            admissibility_report(QWavelet('gaussian', gaussian_signal(self.grid)))

    def test_probes(self):
        with self.assertRaises(ValueError):
            admissibility_report(get_wavelet('log', self.grid), probes=default_probes(3))
        with self.assertRaises(ValueError):
            admissibility_report(get_wavelet('log', self.grid),
                                 probes=[(0, 0), (1, 0), (0, 1), (1, 1)])

    def test_admit(self):
        w = get_wavelet('log', self.grid)
        self.assertIsNone(w.c_phi)
        admitted = admit(w)
        self.assertAlmostEqual(admitted.c_phi / LOG_CONSTANT, 1.0, delta=0.01)
        self.assertTrue(admitted.commutes_with_e2)
        self.assertIs(admitted.mother, w.mother)

    def test_aqw_inner_product(self):
        w = get_wavelet('log', self.grid)
        value = aqw_inner_product(w, w)
        self.assertAlmostEqual(value.scalar / LOG_CONSTANT, 1.0, delta=0.01)
        self.assertAlmostEqual(abs(value.vector[0]) + abs(value.vector[1]), 0.0)

    def test_combination(self):
        # Quaternion combinations of admissible wavelets stay admissible
        w = get_wavelet('log', self.grid)
        combined = quaternion.Quaternion(1, 0, 1, 0) * w
        report = admissibility_report(combined)
        self.assertAlmostEqual(report.c_phi / (2 * LOG_CONSTANT), 1.0, delta=0.01)
        self.assertTrue(report.commutes_with_e2)
        doubled = w + w
        self.assertAlmostEqual(admissibility_report(doubled).c_phi / (4 * LOG_CONSTANT), 1.0,
                               delta=0.01)


class TestWavelets(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)
        self.grid = Grid2D.centered(128, 8.0)

    def test_span(self):
        with self.assertRaises(ValueError):
            get_wavelet('log', Grid2D.centered(64, 4.0))
        get_wavelet('dgauss', Grid2D.centered(64, 4.0))

    def test_unknown(self):
        with self.assertRaises(ValueError):
            get_wavelet('morlet', self.grid)

    def test_zero_mother(self):
        with self.assertRaises(ValueError):
            QWavelet('zero', QSignal2D.zeros(self.grid))

    def test_log_has_zero_mean(self):
        w = get_wavelet('log', self.grid)
        self.assertLess(abs(w.mother.data[0].sum() * self.grid.cell_area), 1e-10)

    def test_daughter(self):
        w = get_wavelet('log', self.grid)
        same = daughter(w, 1.0, 0.7, (0.0, 0.0))
        np.testing.assert_allclose(same.data, w.mother.data, atol=1e-12)
        x, y = self.grid.coordinates()
        wide = daughter(w, 2.0, 0.0, (1.0, 0.0))
        expected = w.profile((x - 1.0) / 2, y / 2) / 2
        np.testing.assert_allclose(wide.data, expected, atol=1e-12)

    def test_daughter_spectrum(self):
        w = get_wavelet('dgauss', self.grid)
        b = (0.5, -0.25)
        numerical = qft_forward(daughter(w, 1.0, 0.3, b)).data
        closed = daughter_spectrum(w, 1.0, 0.3, b).data
        np.testing.assert_allclose(closed, numerical, atol=1e-8)

    def test_dgauss_rotates(self):
        w = get_wavelet('dgauss', self.grid)
        self.assertGreater(np.abs(daughter(w, 1.0, math.pi / 2, (0, 0)).data -
                                  w.mother.data).max(), 0.1)


class TestFileWavelet(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)
        self.test_dir = tempfile.mkdtemp()
        self.grid = Grid2D.centered(128, 8.0)
        self.path = os.path.join(self.test_dir, 'mother.qsf')
        write_qsf(self.path, get_wavelet('log', self.grid).mother)

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_load(self):
        w = get_wavelet('file:' + self.path, self.grid)
        self.assertIsNone(w.profile)
        report = admissibility_report(w, tolerance=0.05)
        self.assertAlmostEqual(report.c_phi / LOG_CONSTANT, 1.0, delta=0.05)

    def test_grid_mismatch(self):
        with self.assertRaises(GridMismatchError):
            get_wavelet('file:' + self.path, Grid2D.centered(64, 8.0))
