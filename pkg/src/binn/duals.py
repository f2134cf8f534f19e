"""Forward-mode dual numbers carrying two spatial tangents.

A Dual2 holds a value and its derivatives along the two coordinate
directions; arithmetic obeys the chain rule exactly. Payloads may be
scalars or numpy arrays (tangents get a leading axis of length 2), so
kernel formulas can be differentiated in vectorized form.
"""

import numpy as np


class Dual2:
    __slots__ = ("value", "grad")

    def __init__(self, value, grad):
        self.value = np.asarray(value, dtype=float)
        self.grad = np.asarray(grad, dtype=float)

    @classmethod
    def variable(cls, value, direction):
        """Seed a coordinate variable: unit tangent along axis 0 or 1."""
        value = np.asarray(value, dtype=float)
        grad = np.zeros((2,) + value.shape)
        grad[direction] = 1.0
        return cls(value, grad)

    @classmethod
    def constant(cls, value):
        value = np.asarray(value, dtype=float)
        return cls(value, np.zeros((2,) + value.shape))

    def _coerce(self, other):
        if isinstance(other, Dual2):
            return other
        return Dual2.constant(np.broadcast_to(other, self.value.shape))

    def __add__(self, other):
        other = self._coerce(other)
        return Dual2(self.value + other.value, self.grad + other.grad)

    __radd__ = __add__

    def __neg__(self):
        return Dual2(-self.value, -self.grad)

    def __sub__(self, other):
        other = self._coerce(other)
        return Dual2(self.value - other.value, self.grad - other.grad)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Dual2(self.value * other.value,
                     self.grad * other.value + self.value * other.grad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        inv = 1.0 / other.value
        val = self.value * inv
        return Dual2(val, (self.grad - val * other.grad) * inv)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            raise TypeError("only integer powers are supported")
        return Dual2(self.value**k, k * self.value ** (k - 1) * self.grad)

    def log(self):
        return Dual2(np.log(self.value), self.grad / self.value)

    def sqrt(self):
        root = np.sqrt(self.value)
        return Dual2(root, 0.5 * self.grad / root)

    def tanh(self):
        t = np.tanh(self.value)
        return Dual2(t, (1.0 - t * t) * self.grad)


def atan2(y, x):
    """Two-argument arctangent of duals, differentiable away from the origin."""
    if not isinstance(y, Dual2):
        y = Dual2.constant(np.broadcast_to(y, x.value.shape))
    if not isinstance(x, Dual2):
        x = Dual2.constant(np.broadcast_to(x, y.value.shape))
    val = np.arctan2(y.value, x.value)
    denom = x.value * x.value + y.value * y.value
    return Dual2(val, (x.value * y.grad - y.value * x.grad) / denom)
