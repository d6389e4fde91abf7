"""Quaternion arithmetic.

Two flavours live here: the `Quaternion` value type for single numbers, and
array functions (`qmul`, `qconj`, ...) for fields whose leading axis holds
the four components e0, e1, e2, e3.
"""
import collections
import re

import numpy as np
import scipy.fft

from qcwt.errors import QuaternionDomainError

TERM_RE = re.compile(r'([+-]?)([0-9]*\.?[0-9]*)\*?(e[0-3])?')


def qmul(p, q):
    """Hamilton product of two component arrays, broadcasting over the trailing axes.

    The components are combined bilinearly, so complex arrays (for instance
    Fourier transforms of the component planes) multiply with the same rule.
    """
    p0, p1, p2, p3 = p[0], p[1], p[2], p[3]
    q0, q1, q2, q3 = q[0], q[1], q[2], q[3]
    r0 = p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3
    r1 = p1 * q0 + p0 * q1 - p3 * q2 + p2 * q3
    r2 = p2 * q0 + p3 * q1 + p0 * q2 - p1 * q3
    r3 = p3 * q0 - p2 * q1 + p1 * q2 + p0 * q3
    return np.stack(np.broadcast_arrays(r0, r1, r2, r3))


def qconj(q):
    q = np.asarray(q)
    return np.concatenate((q[:1], -q[1:]))


def qabs2(q):
    q = np.asarray(q)
    return q[0] ** 2 + q[1] ** 2 + q[2] ** 2 + q[3] ** 2


def qmodulus(q):
    return np.sqrt(qabs2(q))


def convolve(p, q, cell_area=1.0):
    """Full linear convolution cell_area * sum_y p(y) q(x - y) of two quaternion fields.

    `p` has shape (4, n1, n2) and `q` shape (4, m1, m2); the result has shape
    (4, n1 + m1 - 1, n2 + m2 - 1). Index 0 of the result pairs index 0 of
    both inputs.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    shape = (p.shape[1] + q.shape[1] - 1, p.shape[2] + q.shape[2] - 1)
    fshape = tuple(scipy.fft.next_fast_len(s, real=True) for s in shape)
    pf = scipy.fft.rfft2(p, s=fshape, axes=(1, 2))
    qf = scipy.fft.rfft2(q, s=fshape, axes=(1, 2))
    result = scipy.fft.irfft2(qmul(pf, qf), s=fshape, axes=(1, 2))
    return cell_area * result[:, :shape[0], :shape[1]]


class Quaternion(collections.namedtuple('Quaternion', 'q0 q1 q2 q3')):
    """A single quaternion q0 + q1 e1 + q2 e2 + q3 e3."""
    __slots__ = ()

    def __new__(cls, q0=0.0, q1=0.0, q2=0.0, q3=0.0):
        return super(Quaternion, cls).__new__(cls, float(q0), float(q1), float(q2), float(q3))

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=float).reshape(4)
        return cls(*values)

    @classmethod
    def from_string(cls, text):
        """Parse expressions such as '1+e1', '-0.5e3' or '2 - 3*e2'.

        A number directly followed by a unit multiplies it, so '0.5e3' is
        half of e3; exponent notation is not accepted.
        """
        text = text.replace(' ', '')
        if not text:
            raise ValueError('Empty quaternion expression')
        components = [0.0, 0.0, 0.0, 0.0]
        pos = 0
        while pos < len(text):
            match = TERM_RE.match(text, pos)
            if match is None or match.end() == pos:
                raise ValueError('%s is not a valid quaternion' % text)
            sign, number, unit = match.groups()
            if not number and not unit:
                raise ValueError('%s is not a valid quaternion' % text)
            value = float(number) if number else 1.0
            if sign == '-':
                value = -value
            index = int(unit[1]) if unit else 0
            components[index] += value
            pos = match.end()
        return cls(*components)

    def __array__(self, dtype=None, copy=None):
        return np.array(tuple(self), dtype=dtype)

    def __add__(self, other):
        other = as_quaternion(other)
        return Quaternion(*(a + b for a, b in zip(self, other)))

    __radd__ = __add__

    def __sub__(self, other):
        other = as_quaternion(other)
        return Quaternion(*(a - b for a, b in zip(self, other)))

    def __rsub__(self, other):
        return as_quaternion(other) - self

    def __neg__(self):
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __mul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        try:
            other = as_quaternion(other)
        except (TypeError, ValueError):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        try:
            other = as_quaternion(other)
        except (TypeError, ValueError):
            return NotImplemented
        return mul(other, self)

    def __truediv__(self, scalar):
        return Quaternion(*(c / scalar for c in self))

    def __abs__(self):
        return modulus(self)

    @property
    def scalar(self):
        return self.q0

    @property
    def vector(self):
        return (self.q1, self.q2, self.q3)

    def conj(self):
        return conj(self)

    def modulus(self):
        return modulus(self)

    def inverse(self):
        return inverse(self)

    def __str__(self):
        parts = ['%g' % self.q0]
        for value, unit in zip(self.vector, ('e1', 'e2', 'e3')):
            parts.append('%s %g%s' % ('-' if value < 0 else '+', abs(value), unit))
        return ' '.join(parts)


def as_quaternion(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, str):
        return Quaternion.from_string(value)
    if np.ndim(value) == 0:
        return Quaternion(float(value))
    return Quaternion.from_array(value)


def mul(p, q):
    return Quaternion(*qmul(tuple(p), tuple(q)))


def conj(q):
    return Quaternion(q[0], -q[1], -q[2], -q[3])


def modulus(q):
    return float(np.sqrt(q[0] ** 2 + q[1] ** 2 + q[2] ** 2 + q[3] ** 2))


def inverse(q):
    norm2 = q[0] ** 2 + q[1] ** 2 + q[2] ** 2 + q[3] ** 2
    if norm2 == 0:
        raise QuaternionDomainError('The zero quaternion has no inverse')
    return Quaternion(q[0] / norm2, -q[1] / norm2, -q[2] / norm2, -q[3] / norm2)


ONE = Quaternion(1.0)
E1 = Quaternion(0.0, 1.0)
E2 = Quaternion(0.0, 0.0, 1.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)
