import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from qcwt import main, quaternion
from qcwt.errors import QuaternionDomainError
from qcwt.quaternion import E1, E2, E3, ONE, Quaternion

components = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, components, components, components, components)


def close(p, q, scale=1.0):
    return abs(Quaternion(*p) - Quaternion(*q)) <= 1e-12 * max(scale, 1.0)


class TestUnits(unittest.TestCase):

    def setUp(self):
        main.setup_logging(0, 2)

    def test_squares(self):
        for unit in (E1, E2, E3):
            self.assertEqual(unit * unit, -ONE)

    def test_cycle(self):
        self.assertEqual(E1 * E2, E3)
        self.assertEqual(E2 * E3, E1)
        self.assertEqual(E3 * E1, E2)
        self.assertEqual(E2 * E1, -E3)

    def test_scalar_multiplication(self):
        self.assertEqual(2 * E1, Quaternion(0, 2))
        self.assertEqual(E3 * 0.5, Quaternion(0, 0, 0, 0.5))

    def test_inverse_of_zero(self):
        with self.assertRaises(QuaternionDomainError):
            Quaternion().inverse()
        # It is also a ZeroDivisionError
        with self.assertRaises(ZeroDivisionError):
            quaternion.inverse((0, 0, 0, 0))


class TestParsing(unittest.TestCase):

    def test_expressions(self):
        self.assertEqual(Quaternion.from_string('1+e1'), Quaternion(1, 1))
        self.assertEqual(Quaternion.from_string('-0.5e3'), Quaternion(0, 0, 0, -0.5))
        self.assertEqual(Quaternion.from_string('2 - 3*e2'), Quaternion(2, 0, -3))
        self.assertEqual(Quaternion.from_string('e1+e1'), Quaternion(0, 2))

    def test_invalid(self):
        for text in ('', 'x', '1+', 'e4', 'e1e'):
            with self.assertRaises(ValueError):
                Quaternion.from_string(text)

    def test_str(self):
        self.assertEqual(str(Quaternion(1, -2, 0.5, 0)), '1 - 2e1 + 0.5e2 + 0e3')
        self.assertEqual(Quaternion.from_string(str(Quaternion(1, -2, 0.5, 3))),
                         Quaternion(1, -2, 0.5, 3))


class TestProperties(unittest.TestCase):

    @given(quaternions, quaternions)
    @settings(max_examples=200)
    def test_multiplicative_modulus(self, p, q):
        self.assertAlmostEqual(abs(p * q), abs(p) * abs(q),
                               delta=1e-12 * max(1.0, abs(p) * abs(q)))

    @given(quaternions, quaternions)
    @settings(max_examples=200)
    def test_conjugate_is_anti_involution(self, p, q):
        self.assertTrue(close((p * q).conj(), q.conj() * p.conj(), abs(p) * abs(q)))
        self.assertEqual(p.conj().conj(), p)

    @given(quaternions, quaternions, quaternions)
    @settings(max_examples=200)
    def test_associativity(self, p, q, r):
        self.assertTrue(close((p * q) * r, p * (q * r), abs(p) * abs(q) * abs(r)))

    @given(quaternions)
    @settings(max_examples=200)
    def test_inverse(self, q):
        if abs(q) < 1e-3:
            return
        self.assertTrue(close(q * q.inverse(), ONE))
        self.assertTrue(close(q.inverse() * q, ONE))


class TestArrays(unittest.TestCase):

    def test_qmul_broadcasts(self):
        rng = np.random.default_rng(1)
        p = rng.normal(size=(4, 3, 5))
        q = rng.normal(size=4)
        product = quaternion.qmul(p, q[:, None, None])
        self.assertEqual(product.shape, (4, 3, 5))
        expected = Quaternion(*p[:, 2, 4]) * Quaternion(*q)
        np.testing.assert_allclose(product[:, 2, 4], expected, atol=1e-12)

    def test_modulus_and_conjugate(self):
        q = np.array([[1.0, 0.0], [2.0, 0.0], [2.0, 3.0], [4.0, 4.0]])
        np.testing.assert_allclose(quaternion.qmodulus(q), [5.0, 5.0])
        np.testing.assert_allclose(quaternion.qconj(q)[1:], -q[1:])

    def test_convolve(self):
        rng = np.random.default_rng(2)
        p = rng.normal(size=(4, 3, 4))
        q = rng.normal(size=(4, 2, 3))
        result = quaternion.convolve(p, q, cell_area=0.5)
        self.assertEqual(result.shape, (4, 4, 6))
        # One output sample by the defining sum
        x = (2, 3)
        expected = np.zeros(4)
        for i in range(3):
            for j in range(4):
                k, m = x[0] - i, x[1] - j
                if 0 <= k < 2 and 0 <= m < 3:
                    expected += quaternion.qmul(p[:, i, j], q[:, k, m])
        np.testing.assert_allclose(result[:, 2, 3], 0.5 * expected, atol=1e-10)

    def test_as_quaternion(self):
        self.assertEqual(quaternion.as_quaternion(2), Quaternion(2))
        self.assertEqual(quaternion.as_quaternion('e2'), E2)
        self.assertEqual(quaternion.as_quaternion([1, 2, 3, 4]), Quaternion(1, 2, 3, 4))
