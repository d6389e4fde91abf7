import math
import os
import shutil
import tempfile
import unittest

import numpy as np

from qcwt import main, quaternion
from qcwt.errors import FormatError, GridMismatchError
from qcwt.signal import (Grid2D, QSignal2D, SimGrid, inner_product, l2_norm, read_qsf,
                         resample_similitude, sample_at, write_qsf)

from tests.utils import gaussian_signal, random_signal, small_grid


class TestGrid(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)

    def test_centered(self):
        grid = Grid2D.centered(128, 8.0)
        self.assertEqual(grid.shape, (128, 128))
        self.assertEqual(grid.dx, 0.125)
        self.assertEqual(grid.x0, -8.0)
        x, y = grid.axes()
        self.assertEqual(x[64], 0.0)
        self.assertAlmostEqual(x[-1], 8.0 - 0.125)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            Grid2D(1, 4, 0, 0, 1, 1)
        with self.assertRaises(ValueError):
            Grid2D(4, 4, 0, 0, 0, 1)
        with self.assertRaises(ValueError):
            Grid2D.centered(8, -1.0)

    def test_sublattice(self):
        grid = Grid2D.centered(128, 8.0)
        sub = grid.sublattice(2)
        self.assertEqual(sub.shape, (64, 64))
        self.assertEqual(sub.dx, 0.25)
        self.assertEqual(grid.lattice_offsets(sub), (2, 2, 0, 0))
        self.assertTrue(sub.is_origin_aligned())
        shifted = Grid2D(8, 8, 0.3, 0.0, 0.25, 0.25)
        self.assertIsNone(grid.lattice_offsets(shifted))
        self.assertFalse(shifted.is_origin_aligned())
        with self.assertRaises(ValueError):
            grid.sublattice(0)

    def test_same_as(self):
        self.assertTrue(Grid2D.centered(16, 2.0).same_as(Grid2D(16, 16, -2, -2, 0.25, 0.25)))
        self.assertFalse(Grid2D.centered(16, 2.0).same_as(Grid2D.centered(16, 4.0)))


class TestSignal(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)

    def test_read_only(self):
        f = gaussian_signal(small_grid())
        with self.assertRaises(ValueError):
            f.data[0, 0, 0] = 1.0

    def test_shape_and_finite(self):
        grid = small_grid(8)
        with self.assertRaises(ValueError):
            QSignal2D(grid, np.zeros((4, 8, 7)))
        data = np.zeros((4, 8, 8))
        data[1, 2, 3] = np.nan
        with self.assertRaises(ValueError):
            QSignal2D(grid, data)

    def test_gaussian_norm(self):
        # ||exp(-pi |x|^2)||^2 = 1/2
        f = gaussian_signal(Grid2D.centered(128, 8.0))
        self.assertAlmostEqual(l2_norm(f) ** 2, 0.5, places=10)

    def test_inner_product(self):
        grid = small_grid()
        f = random_signal(grid, 1)
        g = random_signal(grid, 2)
        self.assertAlmostEqual(inner_product(f, f).scalar, l2_norm(f) ** 2)
        # (f, g) = conj((g, f))
        np.testing.assert_allclose(inner_product(f, g), inner_product(g, f).conj(), atol=1e-12)
        # Left linear: (q f, g) = q (f, g)
        q = quaternion.Quaternion(0.5, 1, -2, 0.25)
        np.testing.assert_allclose(inner_product(q * f, g), q * inner_product(f, g), atol=1e-12)

    def test_mismatch(self):
        with self.assertRaises(GridMismatchError):
            gaussian_signal(small_grid(16)) + gaussian_signal(small_grid(32))

    def test_left_and_right_multiplication(self):
        f = QSignal2D.from_real(small_grid(8), np.ones((8, 8)))
        self.assertEqual(tuple((quaternion.E1 * (f * quaternion.E2)).data[:, 0, 0]),
                         (0.0, 0.0, 0.0, 1.0))
        self.assertEqual(tuple(((f * quaternion.E2) * quaternion.E1).data[:, 0, 0]),
                         (0.0, 0.0, 0.0, -1.0))

    def test_sample_at_outside(self):
        f = gaussian_signal(small_grid())
        values = sample_at(f, np.array([0.0, 100.0]), np.array([0.0, 0.0]))
        self.assertAlmostEqual(values[0, 0], 1.0)
        self.assertEqual(values[0, 1], 0.0)

    def test_resample_similitude(self):
        grid = Grid2D.centered(128, 8.0)
        f = gaussian_signal(grid)
        moved = resample_similitude(f, 2.0, 0.0, (1.0, 0.0))
        expected = QSignal2D.from_function(
            grid, lambda x, y: 0.5 * np.exp(-math.pi * ((x - 1) ** 2 + y ** 2) / 4))
        self.assertLess(float(np.abs(moved.data - expected.data).max()), 2e-2)


class TestSimGrid(unittest.TestCase):

    def test_log_uniform(self):
        sim = SimGrid.log_uniform(0.25, 4.0, 32, 8, Grid2D.centered(128, 8.0).sublattice(2))
        self.assertEqual(sim.shape, (32, 8, 64, 64))
        self.assertEqual(sim.n_coefficients, 32 * 8 * 64 * 64)
        self.assertAlmostEqual(sim.scales[0], 0.25 * math.exp(0.5 * math.log(16) / 32))
        self.assertEqual(sim.angles[0], 0.0)
        self.assertAlmostEqual(sim.angle_step, math.pi / 4)
        # The scale quadrature of a^0 is the length of the log window
        self.assertAlmostEqual(sim.scale_quadrature(lambda a: 1.0), math.log(16))

    def test_scale_quadrature(self):
        # integral of a^3 exp(-2 pi a^2) da = 1 / (8 pi^2)
        sim = SimGrid.log_uniform(1e-2, 10.0, 64, 1, small_grid())
        value = sim.scale_quadrature(lambda a: a ** 4 * math.exp(-2 * math.pi * a ** 2))
        self.assertAlmostEqual(value * 8 * math.pi ** 2, 1.0, delta=0.01)
        # The Haar weights carry the same quadrature, times a^-2 and the angle step
        weighted = float((sim.weights[:, 0] * sim.scales ** 6 *
                          np.exp(-2 * math.pi * sim.scales ** 2)).sum())
        self.assertAlmostEqual(weighted, value * 2 * math.pi)

    def test_scale_band(self):
        sim = SimGrid.log_uniform(0.25, 16.0, 12, 2, small_grid())
        band = sim.scale_band(4, 8)
        np.testing.assert_array_equal(band.scales, sim.scales[4:8])
        np.testing.assert_array_equal(band.weights, sim.weights[4:8])
        self.assertAlmostEqual(band.scale_edges[0], 1.0)
        self.assertAlmostEqual(band.scale_edges[1], 4.0)
        self.assertAlmostEqual(band.log_step, sim.log_step)
        with self.assertRaises(ValueError):
            sim.scale_band(8, 4)
        with self.assertRaises(ValueError):
            sim.scale_band(0, 13)

    def test_invalid(self):
        grid = small_grid()
        with self.assertRaises(ValueError):
            SimGrid.log_uniform(1.0, 1.0, 4, 4, grid)
        with self.assertRaises(ValueError):
            SimGrid.log_uniform(0.5, 1.0, 0, 4, grid)


class TestQSF(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_write_and_read(self):
        f = random_signal(Grid2D(8, 6, -1.0, -0.5, 0.25, 0.2), 3)
        path = os.path.join(self.test_dir, 'f.qsf')
        write_qsf(path, f)
        self.assertEqual(os.path.getsize(path), 4 + 8 + 32 + 4 * 8 * 6 * 8)
        g = read_qsf(path)
        self.assertTrue(g.grid.same_as(f.grid))
        np.testing.assert_array_equal(g.data, f.data)

    def test_bad_magic(self):
        path = os.path.join(self.test_dir, 'bad.qsf')
        with open(path, 'wb') as outfile:
            outfile.write(b'XXXX' + b'\0' * 100)
        with self.assertRaises(FormatError):
            read_qsf(path)

    def test_truncated(self):
        f = random_signal(small_grid(8), 4)
        path = os.path.join(self.test_dir, 'short.qsf')
        write_qsf(path, f)
        with open(path, 'rb') as infile:
            raw = infile.read()
        with open(path, 'wb') as outfile:
            outfile.write(raw[:-8])
        with self.assertRaises(FormatError):
            read_qsf(path)
