import math
import unittest

import numpy as np

from qcwt import corpus, main, quaternion
from qcwt.signal import Grid2D

GRID = Grid2D.centered(64, 8.0)


class TestCorpus(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)

    def test_gaussian(self):
        signal = corpus.gaussian(GRID, width=2.0, center=(1.0, -0.5), value=quaternion.E2)
        self.assertEqual(signal.name, 'gaussian')
        peak = np.unravel_index(signal.signal.modulus().argmax(), GRID.shape)
        x, y = GRID.axes()
        self.assertEqual((x[peak[0]], y[peak[1]]), (1.0, -0.5))
        self.assertEqual(tuple(signal.signal.data[:, peak[0], peak[1]]), (0.0, 0.0, 1.0, 0.0))
        # The profile evaluates anywhere
        value = signal.profile(np.array(1.0 + 2.0), np.array(-0.5))
        self.assertAlmostEqual(value[2], math.exp(-math.pi))

    def test_anisotropic(self):
        signal = corpus.anisotropic_gaussian(GRID, sigma1=2.0, sigma2=0.5, angle=0.0)
        # Wide along x, narrow along y
        self.assertGreater(signal.profile(1.0, 0.0)[0], signal.profile(0.0, 1.0)[0])
        rotated = corpus.anisotropic_gaussian(GRID, sigma1=2.0, sigma2=0.5, angle=math.pi / 2)
        self.assertAlmostEqual(rotated.profile(0.0, 1.0)[0], signal.profile(1.0, 0.0)[0])

    def test_random_is_seeded(self):
        first = corpus.random_bandlimited(GRID, seed=3)
        second = corpus.random_bandlimited(GRID, seed=3)
        other = corpus.random_bandlimited(GRID, seed=4)
        self.assertEqual(first.name, 'random-bandlimited-3')
        np.testing.assert_array_equal(first.signal.data, second.signal.data)
        self.assertFalse(np.array_equal(first.signal.data, other.signal.data))
        # Quaternion valued and decaying inside the grid
        self.assertTrue(np.all(np.abs(first.signal.data).max(axis=(1, 2)) > 0))
        modulus = first.signal.modulus()
        self.assertLess(modulus[0].max(), 1e-8 * modulus.max())

    def test_impulse(self):
        signal = corpus.impulse(GRID, at=(0.5, -1.0))
        self.assertIsNone(signal.profile)
        self.assertEqual(np.count_nonzero(signal.signal.data), 1)
        self.assertEqual(signal.signal.data[3, 34, 28], 1.0)
        with self.assertRaises(ValueError):
            corpus.impulse(GRID, at=(0.1, 0.0))
        with self.assertRaises(ValueError):
            corpus.impulse(GRID, at=(100.0, 0.0))

    def test_invalid_widths(self):
        with self.assertRaises(ValueError):
            corpus.gaussian(GRID, width=0)
        with self.assertRaises(ValueError):
            corpus.anisotropic_gaussian(GRID, sigma2=-1)

    def test_generate(self):
        signal = corpus.generate('random-bandlimited', GRID, seed=7, blobs=2)
        self.assertEqual(signal.name, 'random-bandlimited-7')
        with self.assertRaises(ValueError):
            corpus.generate('noise', GRID)

    def test_default_corpus(self):
        names = [signal.name for signal in corpus.default_corpus(GRID, seed=5, count=3)]
        self.assertEqual(names, ['gaussian', 'anisotropic-gaussian', 'random-bandlimited-5',
                                 'random-bandlimited-6', 'random-bandlimited-7'])
