"""Truncated bivariate Taylor polynomials ("jets") with batch dimensions.

A :class:`Jet` of order ``N`` stores the coefficients of
``sum_{i+j<=N} c_ij s^i t^j``, monomials sorted by total degree so that
truncating to a lower order is a prefix slice. Coefficient arrays carry
trailing batch axes, so one jet can hold the expansions at many base
points at once.

All arithmetic is exact up to floating point: jets are how derivatives
are pushed through reparametrizations without any differencing.
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np


@lru_cache(maxsize=None)
def monomials(order):
    return tuple((d - j, j) for d in range(order + 1) for j in range(d + 1))


@lru_cache(maxsize=None)
def index_map(order):
    return {m: k for k, m in enumerate(monomials(order))}


def size(order):
    return (order + 1) * (order + 2) // 2


@lru_cache(maxsize=None)
def _mul_tensor(order):
    mons = monomials(order)
    idx = index_map(order)
    K = len(mons)
    M = np.zeros((K, K, K))
    for a, (i1, j1) in enumerate(mons):
        for b, (i2, j2) in enumerate(mons):
            k = idx.get((i1 + i2, j1 + j2))
            if k is not None:
                M[k, a, b] = 1.0
    return M


class Jet:
    __slots__ = ("c", "order")

    def __init__(self, c, order):
        c = np.asarray(c, dtype=float)
        if c.shape[0] != size(order):
            raise ValueError("coefficient array does not match jet order")
        self.c = c
        self.order = order

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, value, order, batch=()):
        value = np.broadcast_to(np.asarray(value, dtype=float), batch) if batch else np.asarray(value, dtype=float)
        c = np.zeros((size(order),) + np.shape(value))
        c[0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, which, order, batch=()):
        c = np.zeros((size(order),) + tuple(batch))
        if order >= 1:
            c[1 + which] = 1.0
        return cls(c, order)

    @classmethod
    def from_derivatives(cls, derivs, order):
        """Build from a mapping (i, j) -> value of d^(i+j)/ds^i dt^j at the centre."""
        mons = monomials(order)
        first = np.asarray(derivs[(0, 0)], dtype=float)
        c = np.zeros((len(mons),) + first.shape)
        for k, (i, j) in enumerate(mons):
            c[k] = np.asarray(derivs[(i, j)], dtype=float) / (factorial(i) * factorial(j))
        return cls(c, order)

    # -- access -----------------------------------------------------------
    @property
    def batch(self):
        return self.c.shape[1:]

    @property
    def value(self):
        return self.c[0]

    def coef(self, i, j=0):
        return self.c[index_map(self.order)[(i, j)]]

    def deriv(self, i, j=0):
        """Value at the centre of d^(i+j)/ds^i dt^j."""
        return self.coef(i, j) * factorial(i) * factorial(j)

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise jet order")
        return Jet(self.c[: size(order)], order)

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.c[(slice(None),) + key], self.order)

    # -- calculus ---------------------------------------------------------
    def diff(self, which):
        """Partial derivative jet (order drops by one)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        new = self.order - 1
        idx = index_map(self.order)
        c = np.zeros((size(new),) + self.batch)
        for k, (i, j) in enumerate(monomials(new)):
            if which == 0:
                c[k] = (i + 1) * self.c[idx[(i + 1, j)]]
            else:
                c[k] = (j + 1) * self.c[idx[(i, j + 1)]]
        return Jet(c, new)

    def restrict_t0(self):
        """Drop every term containing t (restriction to the s-axis)."""
        c = self.c.copy()
        for k, (i, j) in enumerate(monomials(self.order)):
            if j:
                c[k] = 0.0
        return Jet(c, self.order)

    def compose(self, ds, dt):
        """Substitute s -> ds, t -> dt where ds, dt are jets with zero constant term."""
        order = min(self.order, ds.order, dt.order)
        ds, dt = ds.truncate(order), dt.truncate(order)
        batch = np.broadcast_shapes(self.batch, ds.batch, dt.batch)
        one = Jet.constant(np.ones(batch) if batch else 1.0, order)
        spow = [one]
        tpow = [one]
        for _ in range(order):
            spow.append(spow[-1] * ds)
            tpow.append(tpow[-1] * dt)
        idx = index_map(self.order)
        out = Jet(np.zeros((size(order),) + batch), order)
        for (i, j) in monomials(order):
            coef = self.c[idx[(i, j)]]
            if not np.any(coef):
                continue
            out = out + (spow[i] * tpow[j]) * coef
        return out

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            return self.truncate(order), other.truncate(order)
        return self, None

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = self._coerce(other)
            return Jet(a.c + b.c, a.order)
        c = self.c.copy() if np.ndim(other) <= len(self.batch) else np.broadcast_to(
            self.c, (self.c.shape[0],) + np.broadcast_shapes(self.batch, np.shape(other))).copy()
        c[0] = c[0] + other
        return Jet(c, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self._coerce(other)
            M = _mul_tensor(a.order)
            return Jet(np.einsum("kab,a...,b...->k...", M, a.c, b.c), a.order)
        other = np.asarray(other, dtype=float)
        return Jet(self.c * other[None, ...], self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def _series(self, coeffs):
        """sum_k coeffs[k] * x^k with x = self - value (nilpotent)."""
        x = self - self.value
        x.c[0] = 0.0
        out = Jet.constant(np.ones(self.batch) if self.batch else 1.0, self.order) * coeffs[0]
        xp = None
        for k in range(1, self.order + 1):
            xp = x if xp is None else xp * x
            out = out + xp * coeffs[k]
        return out

    def reciprocal(self):
        a = self.value
        if np.any(a == 0):
            raise ZeroDivisionError("jet reciprocal with zero constant term")
        coeffs = [(-1.0) ** k / a ** (k + 1) for k in range(self.order + 1)]
        return self._series(coeffs)

    def __pow__(self, alpha):
        alpha = float(alpha)
        if alpha.is_integer() and alpha >= 0:
            out = Jet.constant(np.ones(self.batch) if self.batch else 1.0, self.order)
            for _ in range(int(alpha)):
                out = out * self
            return out
        a = self.value
        if np.any(a <= 0):
            raise ValueError("non-integer power of a jet needs a positive constant term")
        coeffs = []
        binom = 1.0
        for k in range(self.order + 1):
            coeffs.append(binom * a ** (alpha - k))
            binom *= (alpha - k) / (k + 1)
        return self._series(coeffs)

    def sqrt(self):
        return self ** 0.5

    def abs(self):
        s = np.sign(self.value)
        if np.any(s == 0):
            raise ValueError("abs of a jet with zero constant term is not smooth")
        return self * s

    def __repr__(self):
        return f"Jet(order={self.order}, batch={self.batch})"


def jet_norm(a):
    return (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
