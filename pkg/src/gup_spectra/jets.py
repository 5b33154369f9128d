"""Small derivative-jet arithmetic used by the expectation engine.

A Jet stores f, f', ..., f^(K) sampled on a grid (rows of ``d``).  Sums,
Leibniz products and real powers are exact at each node, so composed operator
words evaluate with analytic derivatives throughout.
"""

from __future__ import annotations

from math import comb

import numpy as np

__all__ = ["Jet"]


class Jet:
    __slots__ = ("d",)

    def __init__(self, rows):
        self.d = np.asarray(rows)

    @property
    def order(self) -> int:
        return self.d.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.d[0]

    @classmethod
    def variable(cls, z, order):
        z = np.asarray(z)
        rows = np.zeros((order + 1,) + z.shape, dtype=z.dtype)
        rows[0] = z
        if order >= 1:
            rows[1] = 1.0
        return cls(rows)

    @classmethod
    def constant(cls, c, like, order=None):
        like = np.asarray(like)
        k = order if order is not None else 0
        rows = np.zeros((k + 1,) + like.shape, dtype=np.result_type(like.dtype, type(c)))
        rows[0] = c
        return cls(rows)

    @classmethod
    def from_rows(cls, rows):
        return cls(np.asarray(rows))

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.d[0], order=self.order)

    def __add__(self, other):
        o = self._coerce(other)
        k = min(self.order, o.order)
        return Jet(self.d[: k + 1] + o.d[: k + 1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        k = min(self.order, o.order)
        return Jet(self.d[: k + 1] - o.d[: k + 1])

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return Jet(-self.d)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.d * other)
        k = min(self.order, other.order)
        a, b = self.d, other.d
        rows = np.empty((k + 1,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]),
                        dtype=np.result_type(a.dtype, b.dtype))
        for n in range(k + 1):
            acc = 0.0
            for j in range(n + 1):
                acc = acc + comb(n, j) * a[j] * b[n - j]
            rows[n] = acc
        return Jet(rows)

    __rmul__ = __mul__

    def derivative(self):
        """Jet of f' (order drops by one)."""
        if self.order < 1:
            raise ValueError("jet order exhausted; raise the tracking order")
        return Jet(self.d[1:])

    def power(self, sigma):
        """Jet of f**sigma via the recurrence u w' = sigma u' w."""
        k = self.order
        u = self.d
        rows = np.empty_like(u, dtype=np.result_type(u.dtype, type(sigma), float))
        base = u[0].astype(rows.dtype)
        rows[0] = base ** sigma
        for n in range(k):
            acc = 0.0
            for j in range(n + 1):
                acc = acc + comb(n, j) * (sigma * u[j + 1] * rows[n - j])
            for j in range(1, n + 1):
                acc = acc - comb(n, j) * u[j] * rows[n + 1 - j]
            rows[n + 1] = acc / u[0]
        return Jet(rows)

    def reciprocal(self):
        return self.power(-1.0)
