"""Scalar and vector fields on a planar domain.

AST-backed fields differentiate exactly (iterated symbolic partials);
grid-backed fields fall back to central differences. Both expose
``taylor(u, v, order)`` returning a :class:`~frontforge.jets.Jet` whose
batch shape is the broadcast shape of ``u`` and ``v``.
"""
from __future__ import annotations

import numpy as np

from . import expr
from .geomcore import GridField, fd_partial
from .jets import Jet, monomials


class ScalarField:
    __slots__ = ("ast", "_partials")

    def __init__(self, source):
        if isinstance(source, ScalarField):
            source = source.ast
        if isinstance(source, str):
            source = expr.parse(source)
        self.ast = expr.as_node(source)
        self._partials = {(0, 0): self.ast}

    def d(self, i=0, j=0):
        """AST of the partial derivative d^(i+j)/du^i dv^j."""
        key = (i, j)
        if key not in self._partials:
            if i > 0:
                base = self.d(i - 1, j)
                self._partials[key] = expr.differentiate(base, "u")
            else:
                self._partials[key] = expr.differentiate(self.d(0, j - 1), "v")
        return self._partials[key]

    def __call__(self, u, v):
        return expr.evaluate(self.ast, u, v)

    def taylor(self, u, v, order):
        mons = monomials(order)
        vals = expr.evaluate_many([self.d(i, j) for i, j in mons], u, v)
        shape = np.broadcast_shapes(np.shape(u), np.shape(v))
        return Jet.from_derivatives(
            {m: np.broadcast_to(x, shape) for m, x in zip(mons, vals)}, order)

    def depends_on(self, var):
        return expr.depends_on(self.ast, var)

    def substitute(self, mapping):
        return ScalarField(expr.substitute(self.ast, mapping))

    def __repr__(self):
        return f"ScalarField({expr.to_string(self.ast)!r})"


class GridScalarField:
    """Scalar field known only through samples on a uniform grid (orders <= 3)."""

    def __init__(self, grid: GridField):
        self.grid = grid

    def __call__(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        out = np.empty(u.shape)
        for k in np.ndindex(u.shape):
            i, j = self.grid.node((u[k], v[k]))
            out[k] = self.grid.values[i, j]
        return out

    def _partial(self, point, i, j):
        if i == 0 and j == 0:
            return self(point[0], point[1])[()]
        if i == 0 or j == 0:
            return fd_partial(self.grid, point, "u" if j == 0 else "v", i + j)
        # mixed partial: u-stencil applied to v-derivatives on neighbouring columns
        from .geomcore import _STENCILS  # noqa: PLC0415
        offsets, weights = _STENCILS[i]
        acc = 0.0
        for o, w in zip(offsets, weights):
            if w == 0:
                continue
            q = (point[0] + o * self.grid.hu, point[1])
            acc += w * fd_partial(self.grid, q, "v", j)
        return acc / self.grid.hu**i

    def taylor(self, u, v, order):
        if order > 3:
            raise ValueError("grid-backed fields provide derivatives up to order 3")
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        derivs = {}
        for m in monomials(order):
            arr = np.empty(u.shape)
            for k in np.ndindex(u.shape):
                arr[k] = self._partial((u[k], v[k]), *m)
            derivs[m] = arr
        return Jet.from_derivatives(derivs, order)


def as_field(x):
    if isinstance(x, (ScalarField, GridScalarField)):
        return x
    return ScalarField(x)


class Vec3Field:
    __slots__ = ("components",)

    def __init__(self, components):
        comps = tuple(as_field(c) for c in components)
        if len(comps) != 3:
            raise ValueError("a Vec3Field needs three components")
        self.components = comps

    def __getitem__(self, k):
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __call__(self, u, v):
        shape = np.broadcast_shapes(np.shape(u), np.shape(v))
        return np.stack([np.broadcast_to(c(u, v), shape) for c in self.components])

    def taylor(self, u, v, order):
        return tuple(c.taylor(u, v, order) for c in self.components)

    def __repr__(self):
        return f"Vec3Field{self.components!r}"
